"""Device-to-circuit co-simulator for capacitively driven global
interconnects terminated by a magnetoelectrically switched MTJ receiver."""

from ._kernels import backend_name

__version__ = "0.1.0"
__all__ = ["backend_name", "__version__"]
