import pytest

from raganet.models.network import build_model_config
from raganet.schemas.model import ArchitectureConfig, ModelConfig


@pytest.fixture
def tiny_architecture() -> ArchitectureConfig:
    """Маленькая архитектура для быстрых тестов сети"""
    return ArchitectureConfig(
        conv_filters=4,
        kernel_size=3,
        pool_size=2,
        lstm_units=5,
        dense_units=(6,),
        dropout=0.5,
    )


@pytest.fixture
def tiny_model_config(tiny_architecture: ArchitectureConfig) -> ModelConfig:
    """Сеть на входе 10 кадров x 7 бинов, 3 класса"""
    return build_model_config(tiny_architecture, input_frames=10, input_bins=7, num_classes=3, seed=7)
