"""
cpi-superspace: классический интеграл по путям в суперпространстве
"""

__version__ = "1.0.0"
