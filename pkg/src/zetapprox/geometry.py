"""Closed rectangles and discs in the complex plane."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Boundary tolerance, biased toward inclusion.
MEMBERSHIP_TOL = 1e-12


@dataclass(frozen=True)
class Rect:
    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError(f"degenerate rectangle {self}")

    def contains(self, z, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
        z = np.asarray(z)
        return ((z.real >= self.x0 - tol) & (z.real <= self.x1 + tol)
                & (z.imag >= self.y0 - tol) & (z.imag <= self.y1 + tol))

    def inflate(self, h: float) -> "Rect":
        return Rect(self.x0 - h, self.x1 + h, self.y0 - h, self.y1 + h)

    def conj(self) -> "Rect":
        return Rect(self.x0, self.x1, -self.y1, -self.y0)

    @property
    def perimeter(self) -> float:
        return 2.0 * ((self.x1 - self.x0) + (self.y1 - self.y0))

    def corners(self) -> list[complex]:
        """Counter-clockwise from the lower-left corner."""
        return [complex(self.x0, self.y0), complex(self.x1, self.y0),
                complex(self.x1, self.y1), complex(self.x0, self.y1)]

    def distance(self, other: "Rect") -> float:
        dx = max(other.x0 - self.x1, self.x0 - other.x1, 0.0)
        dy = max(other.y0 - self.y1, self.y0 - other.y1, 0.0)
        return float(np.hypot(dx, dy))

    def to_dict(self) -> dict:
        return {"x0": self.x0, "x1": self.x1, "y0": self.y0, "y1": self.y1}


@dataclass(frozen=True)
class Disc:
    center: complex
    radius: float
    closed: bool

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("disc radius must be positive")

    def contains(self, z, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
        d = np.abs(np.asarray(z) - self.center)
        if self.closed:
            return d <= self.radius + tol
        # open disc: the boundary circle is not a member, so shrink by tol
        return d < self.radius - tol

    def to_dict(self) -> dict:
        return {"re": self.center.real, "im": self.center.imag,
                "radius": self.radius, "closed": self.closed}
