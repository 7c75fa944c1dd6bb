"""Zeros of fitted polynomials and argument-principle zero counts."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContourTooClose, CountMismatch, NoConvergence
from .geometry import Rect
from .polynomials import AlgebraicPolynomial, DirichletPolynomial, hessenberg_basis


@dataclass(frozen=True)
class RootRecord:
    location: complex
    residual: float
    derivative_magnitude: float
    simple: bool
    multiplicity: int = 1

    def to_dict(self) -> dict:
        return {"re": self.location.real, "im": self.location.imag, "residual": self.residual,
                "deriv_mag": self.derivative_magnitude, "simple": self.simple,
                "multiplicity": self.multiplicity}


def write_roots_csv(records, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["re", "im", "residual", "deriv_mag", "simple"])
        for r in records:
            w.writerow([repr(r.location.real), repr(r.location.imag), repr(r.residual),
                        repr(r.derivative_magnitude), int(r.simple)])


def _contour(rect: Rect, h: float) -> np.ndarray:
    corners = rect.corners()
    pts = []
    for a, b in zip(corners, corners[1:] + corners[:1]):
        n = max(2, int(math.ceil(abs(b - a) / h)))
        pts.append(a + (b - a) * np.arange(n) / n)
    return np.concatenate(pts)


def count_zeros(f, rect: Rect, step: float | None = None, max_refinements: int = 60) -> int:
    """Winding number of f along the boundary of rect (counter-clockwise).

    Segments are halved until every argument increment is below pi/2.
    Raises ContourTooClose when a zero sits (numerically) on the contour.
    """
    h = step if step is not None else rect.perimeter / 256
    pts = _contour(rect, h)
    vals = np.asarray(f(pts), dtype=complex)
    min_len = 1e-13 * max(1.0, rect.perimeter)
    for _ in range(max_refinements):
        if not np.all(np.isfinite(vals)) or np.any(vals == 0):
            raise ContourTooClose("f vanishes or overflows on the contour")
        dphi = np.angle(np.roll(vals, -1) / vals)
        bad = np.abs(dphi) >= 0.5 * math.pi
        if not bad.any():
            break
        nxt = np.roll(pts, -1)
        if np.any(np.abs(nxt[bad] - pts[bad]) < min_len):
            raise ContourTooClose("argument jumps persist at the minimum segment length")
        idx = np.nonzero(bad)[0]
        mids = 0.5 * (pts[idx] + nxt[idx])
        pts = np.insert(pts, idx + 1, mids)
        vals = np.insert(vals, idx + 1, np.asarray(f(mids), dtype=complex))
    else:
        raise ContourTooClose("refinement budget exhausted")
    mag = np.abs(vals)
    if mag.min() < 1e-14 * mag.max():
        raise ContourTooClose("|f| on the contour is below the noise floor")
    winding = dphi.sum() / (2 * math.pi)
    n = round(winding)
    if abs(winding - n) > 1e-6:
        raise ContourTooClose(f"non-integral winding number {winding}")
    return int(n)


# ---------------------------------------------------------------- algebraic

def _aberth(coeffs, hess, degree, start, max_iter=600):
    u = start.astype(complex).copy()
    done = np.zeros(u.size, dtype=bool)
    for _ in range(max_iter):
        q, dq = hessenberg_basis(u, hess, degree, derivative=True, rescale=True)
        pv, dpv = q @ coeffs, dq @ coeffs
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pv / dpv
            diff = u[:, None] - u[None, :]
            np.fill_diagonal(diff, np.inf)
            repulse = (1.0 / diff).sum(axis=1)
            corr = ratio / (1.0 - ratio * repulse)
        corr[~np.isfinite(corr)] = 0.0
        corr[done] = 0.0
        # backward error at rounding level also counts: steps there only cycle
        with np.errstate(over="ignore", invalid="ignore"):
            tiny = np.abs(pv) <= 8 * np.finfo(float).eps * (np.abs(q) @ np.abs(coeffs))
        u = u - corr
        done |= tiny | (np.abs(corr) <= 1e-14 * np.maximum(1.0, np.abs(u)))
        if done.all():
            return u, True
    return u, False


def _companion_seeds(coeffs, hess, degree):
    m = hess[:degree, :degree].astype(complex)
    m[:, degree - 1] -= hess[degree, degree - 1] * coeffs[:degree] / coeffs[degree]
    return np.linalg.eigvals(m)


def _pair_conjugates(z: np.ndarray) -> np.ndarray:
    """Force exact conjugate pairs and exactly real roots."""
    z = z.copy()
    free = np.ones(z.size, dtype=bool)
    for i in np.argsort(-z.imag, kind="stable"):
        if not free[i]:
            continue
        free[i] = False
        if z[i].imag < 0:
            # no partner found while scanning from the top: treat as real
            z[i] = z[i].real
            continue
        cand = np.nonzero(free)[0]
        if cand.size:
            j = cand[np.argmin(np.abs(z[cand] - np.conj(z[i])))]
            if abs(z[j] - np.conj(z[i])) < abs(z[i].imag):
                free[j] = False
                z[j] = np.conj(z[i])
                continue
        z[i] = z[i].real
    return z


def _sort_roots(z):
    order = np.lexsort((z.imag, z.real))
    return z[order]


def poly_roots(p: AlgebraicPolynomial, scale: float | None = None) -> list[RootRecord]:
    """All complex roots of p, Newton-polished.

    scale is the reference magnitude for the residual test and the
    simplicity floor, normally max |p| over the fitting samples. It
    defaults to the coefficient 2-norm, which is the RMS of p over the
    samples when the basis is orthonormal there.
    """
    coeffs = np.asarray(p.coeffs)
    nz = np.nonzero(coeffs)[0]
    if nz.size == 0:
        raise ValueError("zero polynomial has no isolated roots")
    degree = int(nz[-1])
    if degree < 1:
        raise ValueError("poly_roots requires degree >= 1")
    coeffs = coeffs[:degree + 1]
    hess = p.hessenberg[:degree + 1, :degree]
    trunc = AlgebraicPolynomial(p.center, p.radius, coeffs, hess)
    if scale is None:
        scale = float(np.linalg.norm(coeffs))

    start = np.exp(1j * (2 * np.pi * np.arange(degree) / degree + 0.4))
    u, ok = _aberth(coeffs, hess, degree, start)
    if not ok:
        u, ok = _aberth(coeffs, hess, degree, _companion_seeds(coeffs, hess, degree))
    if not ok:
        raise NoConvergence("simultaneous iteration did not converge")

    z = p.center + p.radius * u
    for _ in range(3):
        with np.errstate(divide="ignore", invalid="ignore"):
            step = trunc(z) / trunc.derivative(z)
        step[~np.isfinite(step)] = 0.0
        z = z - step
    if trunc.is_real:
        z = _pair_conjugates(z)
    z = _sort_roots(z)

    vals = trunc(z)
    ders = trunc.derivative(z)
    q, _ = hessenberg_basis(trunc.frame(z), hess, degree)
    with np.errstate(over="ignore", invalid="ignore"):
        magnitude = np.abs(q) @ np.abs(coeffs)
    floor = 1e-3 * scale / p.radius
    records = []
    for zi, v, dv, mag in zip(z, vals, ders, magnitude):
        ref = max(scale, float(mag)) if np.isfinite(mag) else np.inf
        if abs(v) > 1e-8 * ref:
            raise NoConvergence(f"root {zi} has residual {abs(v):.3e} (scale {ref:.3e})")
        records.append(RootRecord(complex(zi), float(abs(v)), float(abs(dv)), bool(abs(dv) > floor)))
    return records


# ---------------------------------------------------------------- dirichlet

def _newton(f, df, z0, max_iter=100):
    with np.errstate(over="ignore", invalid="ignore"):
        return _newton_steps(f, df, complex(z0), max_iter)


def _newton_steps(f, df, z, max_iter):
    for _ in range(max_iter):
        d = df(z)
        if d == 0 or not np.isfinite(d):
            return z, False
        step = f(z) / d
        z -= step
        if not np.isfinite(z):
            return z, False
        if abs(step) <= 1e-14 * max(1.0, abs(z)):
            return z, True
    return z, False


def _split(cell: Rect, frac: float):
    if cell.x1 - cell.x0 >= cell.y1 - cell.y0:
        xm = cell.x0 + frac * (cell.x1 - cell.x0)
        return Rect(cell.x0, xm, cell.y0, cell.y1), Rect(xm, cell.x1, cell.y0, cell.y1)
    ym = cell.y0 + frac * (cell.y1 - cell.y0)
    return Rect(cell.x0, cell.x1, cell.y0, ym), Rect(cell.x0, cell.x1, ym, cell.y1)


def dirichlet_roots_in(d: DirichletPolynomial, rect: Rect, scale: float | None = None,
                       min_cell: float = 1e-7) -> list[RootRecord]:
    """Zeros of d inside rect by recursive bisection plus Newton polishing.

    Cells that still hold more than one zero at min_cell are reported as a
    single non-simple record carrying the count as its multiplicity.
    """
    if scale is None:
        probe = rect.corners() + [complex(0.5 * (rect.x0 + rect.x1), 0.5 * (rect.y0 + rect.y1))]
        scale = max(1.0, float(np.abs(d(np.array(probe))).max()))
    floor = 1e-3 * scale
    records: list[RootRecord] = []

    def record(z, mult=1, simple=None):
        v, dv = d(z), d.derivative(z)
        if simple is None:
            simple = abs(dv) > floor
        records.append(RootRecord(complex(z), float(abs(v)), float(abs(dv)), bool(simple), mult))

    def solve(cell: Rect, count: int):
        if count <= 0:
            return
        if count == 1:
            center = complex(0.5 * (cell.x0 + cell.x1), 0.5 * (cell.y0 + cell.y1))
            z, ok = _newton(d, d.derivative, center)
            if ok and bool(cell.contains(z, tol=1e-12)):
                record(z)
                return
        if max(cell.x1 - cell.x0, cell.y1 - cell.y0) < min_cell:
            record(complex(0.5 * (cell.x0 + cell.x1), 0.5 * (cell.y0 + cell.y1)), count, False)
            return
        for frac in (0.5, 0.45, 0.55, 0.4, 0.6, 0.35, 0.65):
            a, b = _split(cell, frac)
            try:
                na, nb = count_zeros(d, a), count_zeros(d, b)
            except ContourTooClose:
                continue
            if na + nb == count:
                solve(a, na)
                solve(b, nb)
                return
        raise CountMismatch(f"could not split {cell} consistently")

    solve(rect, count_zeros(d, rect))
    return records
