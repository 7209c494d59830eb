"""Командная строка: synth, featurize, train, eval, predict, params"""
