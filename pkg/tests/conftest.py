# Импортируем все shared fixtures (аудио, модели, датасеты, рабочая директория)
from tests.shared.fixtures.audio_fixtures import *  # noqa: F401, F403
from tests.shared.fixtures.dataset_fixtures import *  # noqa: F401, F403
from tests.shared.fixtures.model_fixtures import *  # noqa: F401, F403
from tests.shared.fixtures.workdir_fixtures import *  # noqa: F401, F403
