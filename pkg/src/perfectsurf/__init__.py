"""Perfect translation surfaces, their flip-shear automorphism and derived cutting sequences."""
from .geometry import (InvalidParams, NotLevel, OddSingle, Polygon, Surface, SurfaceError,
                       SurfacePoint, build_bouw_moller, build_regular_surface, build_surface,
                       semi_regular_polygon, square_torus, validate_special)
from .cylinders import decompose, perfectness, theta_s

__all__ = [
    "InvalidParams", "NotLevel", "OddSingle", "Polygon", "Surface", "SurfaceError", "SurfacePoint",
    "build_bouw_moller", "build_regular_surface", "build_surface", "semi_regular_polygon",
    "square_torus", "validate_special", "decompose", "perfectness", "theta_s",
]
