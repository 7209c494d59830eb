import csv
import io
from pathlib import Path

from raganet.repositories.base import FileRepository
from raganet.schemas.training import EpochRecord

METRICS_COLUMNS = ("epoch", "train_loss", "train_acc", "val_loss", "val_acc", "seconds")


def _format_row(record: EpochRecord) -> list[str]:
    return [
        str(record.epoch),
        repr(record.train_loss),
        repr(record.train_accuracy),
        repr(record.val_loss),
        repr(record.val_accuracy),
        repr(record.seconds),
    ]


class MetricsRepository(FileRepository):
    """
    CSV метрик обучения: одна строка на эпоху, дописывается по ходу.

    Числа пишутся через repr, поэтому при одинаковых метриках файлы
    совпадают побайтно.
    """

    kind = "metrics file"

    def __init__(self, root: Path, relative: str | Path = "metrics.csv"):
        super().__init__(root)
        self.path = self.resolve(relative)

    def reset(self) -> None:
        """Начать файл заново с заголовка"""
        self.write_text(self.path, ",".join(METRICS_COLUMNS) + "\n")

    def append(self, record: EpochRecord) -> None:
        with self.path.open("a", encoding="utf-8", newline="") as fh:
            csv.writer(fh, lineterminator="\n").writerow(_format_row(record))

    def load(self) -> list[EpochRecord]:
        reader = csv.DictReader(io.StringIO(self.read_text(self.path)))
        return [
            EpochRecord(
                epoch=int(row["epoch"]),
                train_loss=float(row["train_loss"]),
                train_accuracy=float(row["train_acc"]),
                val_loss=float(row["val_loss"]),
                val_accuracy=float(row["val_acc"]),
                seconds=float(row["seconds"]),
            )
            for row in reader
        ]
