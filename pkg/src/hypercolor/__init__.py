"""Precoloring extension for hypercube edge colorings."""

from .core import Edge, Subcube
from .solver import Instance, count_extensions, hypercube_instance, is_extendable

__all__ = ["Edge", "Subcube", "Instance", "count_extensions", "hypercube_instance", "is_extendable"]
__version__ = "0.1.0"
