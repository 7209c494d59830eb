"""
Пресеты запуска.

desk - маленькая модель и 5-секундные сегменты для проверки на CPU;
paper - полная архитектура, 30-секундные сегменты и 72 мелакарты.
"""

from typing import Any

PRESETS: dict[str, dict[str, Any]] = {
    "desk": {
        "preset": "desk",
        "segmentation": {"segment_seconds": 5.0},
        "architecture": {
            "conv_filters": 16,
            "kernel_size": 3,
            "pool_size": 2,
            "lstm_units": 32,
            "dense_units": [64],
            "dropout": 0.5,
        },
        "training": {
            "epochs": 100,
            "batch_size": 32,
            "patience": 20,
            "learning_rate": 0.003,
        },
        # 16 свар по 0.3125 с: клип около 5 с, один 5-секундный сегмент
        "synth": {"note_seconds": 0.3125},
        "dataset": {"per_class": 40},
    },
    "paper": {
        "preset": "paper",
        "segmentation": {"segment_seconds": 30.0},
        "architecture": {
            "conv_filters": 64,
            "kernel_size": 3,
            "pool_size": 2,
            "lstm_units": 512,
            "dense_units": [512, 256],
            "dropout": 0.5,
        },
        "training": {
            "epochs": 300,
            "batch_size": 256,
            "patience": 100,
            "learning_rate": 0.001,
        },
        "dataset": {"melakartas": list(range(1, 73))},
    },
}

# число классов в полной постановке задачи
PAPER_NUM_CLASSES = 172
