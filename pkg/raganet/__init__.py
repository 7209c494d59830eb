"""Распознавание раг карнатической музыки: признаки, сеть TDNN+LSTM, обучение."""

__version__ = "1.0.0"
