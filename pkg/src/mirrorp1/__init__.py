"""Exact engine for equivariant open Gromov-Witten invariants of the
projective line with boundary on its real locus, together with the mirror-curve
side of the computation and coefficient-by-coefficient comparison of the two.
"""

__version__ = "0.1.0"
