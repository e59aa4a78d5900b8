"""Helpers for running external codec and oracle executables."""
