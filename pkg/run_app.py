"""
Запуск cpi-superspace из корня репозитория.

    python run_app.py verify --suite superspace
    python run_app.py evolve --model pendulum --q 0.1 --p 0 --T 100

Эквивалентно консольной команде ``cpi-superspace``.
"""

import sys
from pathlib import Path

# Добавляем путь к модулю
sys.path.insert(0, str(Path(__file__).parent))

from cpi_superspace.cli.main import main  # noqa: E402

if __name__ == '__main__':
    sys.exit(main())
