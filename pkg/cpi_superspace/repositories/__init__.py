"""Репозитории для записи результатов"""

from .result_repository import FileResultRepository, IResultRepository

__all__ = ['FileResultRepository', 'IResultRepository']
