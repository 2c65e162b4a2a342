"""Configuration for wcusp-waves."""
from .settings import SETTINGS
