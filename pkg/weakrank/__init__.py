# weakrank/__init__.py
from weakrank.core.config import settings

__version__ = settings.VERSION
