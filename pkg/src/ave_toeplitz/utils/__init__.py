from .validators import VectorValidator

__all__ = ["VectorValidator"]
