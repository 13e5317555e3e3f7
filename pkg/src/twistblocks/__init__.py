"""twistblocks: exact computations with twisted affine Kac-Moody algebras,
their integrable modules, Sugawara operators, and twisted conformal-block
dimensions on Galois covers of nodal curves."""

__version__ = "0.1.0"
