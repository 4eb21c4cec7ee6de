"""Сервисы для проверки тождеств и выполнения запусков"""

from .run_service import RunService
from .verification_service import VerificationService

__all__ = ['RunService', 'VerificationService']
