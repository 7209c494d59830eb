"""Бизнес-логика: аудио, ноты, признаки, синтез, обучение, предсказание"""
