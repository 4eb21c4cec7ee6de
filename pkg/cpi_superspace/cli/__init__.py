"""Командная строка"""

from .main import main

__all__ = ['main']
