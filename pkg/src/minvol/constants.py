"""Numeric conventions used across the library.

All lengths are dimensionless; the unit is fixed by the curvature bound 1.
Angles are radians.  Tolerances live here so tests and CLI defaults agree.
"""

import math

SQRT3 = math.sqrt(3.0)
PI = math.pi

# inner radius of the spindle profile circle
R1 = 2.0 - SQRT3

# finite-difference oracle settings
FD_STEP = 1e-5
FD_TOL = 1e-6

# closed-form vs shape-operator agreement
CURV_MATCH_TOL = 1e-9

# gluing tolerances
TOL_POS = 1e-9
TOL_ANG = 1e-7
TOL_VERTEX = 1e-6

# orthogonality tolerance for rotation matrices
TOL_ORTHO = 1e-12

# curvature bound padding for rigorous enclosures
RANGE_PAD = 1e-12

# quadrature defaults
GL_ORDER = 16
TRIM_SUBCELLS = 8

# Monte Carlo defaults
MC_N = 10**6
MC_SEED = 0

# grid defaults
CURV_GRID = 64
SAMPLES_PER_SIDE = 33
