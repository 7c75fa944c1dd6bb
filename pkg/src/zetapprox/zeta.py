"""Riemann zeta evaluation, Riemann-Siegel functions and critical-line zeros.

zeta() uses Euler-Maclaurin summation with a cutoff that grows with |Im s|,
so a single method covers the whole working envelope
``-10 <= Re s <= 10, |Im s| <= 100``.
"""
from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import CountMismatch, ContourTooClose, DomainError, EnvelopeExceeded, PoleAt1
from .geometry import Rect

RE_MIN, RE_MAX, IM_MAX = -10.0, 10.0, 100.0
POLE_GUARD = 1e-12
MAX_CORRECTION_ORDER = 30


@dataclass(frozen=True)
class EvalSettings:
    """Knobs for zeta().

    series_cutoff is the minimum number of directly summed terms; the
    effective cutoff is ``series_cutoff + ceil(0.35 |Im s|)``.
    """
    series_cutoff: int = 6
    correction_order: int = MAX_CORRECTION_ORDER
    target_abs_error: float = 1e-10

    def __post_init__(self):
        if self.series_cutoff < 2:
            raise ValueError("series_cutoff must be >= 2")
        if not 0 <= self.correction_order <= MAX_CORRECTION_ORDER:
            raise ValueError(f"correction_order must be in [0, {MAX_CORRECTION_ORDER}]")
        if not self.target_abs_error > 0:
            raise ValueError("target_abs_error must be positive")


DEFAULT_SETTINGS = EvalSettings()

_bernoulli_lock = threading.Lock()
_bernoulli_table: tuple[float, ...] | None = None


def bernoulli_even() -> tuple[float, ...]:
    """B_2, B_4, ..., B_60 as floats, computed once by the standard recurrence."""
    global _bernoulli_table
    if _bernoulli_table is None:
        with _bernoulli_lock:
            if _bernoulli_table is None:
                nmax = 2 * MAX_CORRECTION_ORDER
                b = [Fraction(1)]
                for m in range(1, nmax + 1):
                    acc = sum(math.comb(m + 1, k) * b[k] for k in range(m))
                    b.append(-acc / (m + 1))
                _bernoulli_table = tuple(float(b[2 * k]) for k in range(1, MAX_CORRECTION_ORDER + 1))
    return _bernoulli_table


def _check_domain(s: np.ndarray) -> None:
    tol = 1e-12
    if np.any((s.real < RE_MIN - tol) | (s.real > RE_MAX + tol) | (np.abs(s.imag) > IM_MAX + tol)):
        bad = s[(s.real < RE_MIN - tol) | (s.real > RE_MAX + tol) | (np.abs(s.imag) > IM_MAX + tol)][0]
        raise EnvelopeExceeded(f"s = {bad} outside -10 <= Re s <= 10, |Im s| <= 100")
    if np.any(np.abs(s - 1.0) <= POLE_GUARD):
        raise PoleAt1("zeta has a pole at s = 1")


def _zeta_em(s: np.ndarray, settings: EvalSettings) -> np.ndarray:
    cutoff = (settings.series_cutoff + np.ceil(0.35 * np.abs(s.imag))).astype(int)
    nmax = int(cutoff.max())
    logn = np.log(np.arange(1, nmax, dtype=float))
    terms = np.exp(-np.multiply.outer(s, logn))
    terms[np.arange(1, nmax)[None, :] >= cutoff[:, None]] = 0.0
    total = terms.sum(axis=1)

    nf = cutoff.astype(float)
    n_pow = np.exp(-s * np.log(nf))  # N^{-s}
    total = total + nf * n_pow / (s - 1.0) + 0.5 * n_pow

    b2k = bernoulli_even()
    # term_k = B_2k/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    rising = s * n_pow / nf
    prev = np.full(s.shape, np.inf)
    active = np.ones(s.shape, dtype=bool)
    fact = 1.0
    for k in range(1, settings.correction_order + 1):
        fact *= (2 * k - 1) * (2 * k)
        term = (b2k[k - 1] / fact) * rising
        mag = np.abs(term)
        # asymptotic series: stop each point at its smallest term
        active &= mag < prev
        total = total + np.where(active, term, 0.0)
        prev = mag
        rising = rising * (s + 2 * k - 1) * (s + 2 * k) / (nf * nf)
    return total


def zeta(s, settings: EvalSettings | None = None):
    """Riemann zeta at complex s (scalar or array).

    Accuracy is about ``target_abs_error * max(1, |zeta(s)|)`` for
    Re s >= -6 and degrades to roughly 1e-7 relative near Re s = -10,
    where the direct sum cancels heavily.
    """
    settings = settings or DEFAULT_SETTINGS
    arr = np.asarray(s, dtype=complex)
    scalar = arr.ndim == 0
    flat = np.atleast_1d(arr).ravel()
    _check_domain(flat)
    out = np.empty(flat.shape, dtype=complex)
    chunk = 4096
    for i in range(0, flat.size, chunk):
        out[i:i + chunk] = _zeta_em(flat[i:i + chunk], settings)
    if scalar:
        return complex(out[0])
    return out.reshape(arr.shape)


def loggamma(z):
    """Principal log-Gamma for Re z > 0 via a shifted Stirling series."""
    z = np.asarray(z, dtype=complex)
    if np.any(z.real <= 0):
        raise DomainError("loggamma implemented for Re z > 0 only")
    shift = np.maximum(0, np.ceil(15.0 - np.abs(z))).astype(int)
    w = z + shift
    correction = np.zeros_like(z)
    for k in range(int(shift.max()) if shift.size else 0):
        correction += np.where(k < shift, np.log(z + k), 0.0)
    b2k = bernoulli_even()
    series = np.zeros_like(w)
    wpow = w.copy()
    w2 = w * w
    for k in range(1, 11):
        series += b2k[k - 1] / (2 * k * (2 * k - 1) * wpow)
        wpow = wpow * w2
    out = (w - 0.5) * np.log(w) - w + 0.5 * math.log(2 * math.pi) + series - correction
    return complex(out) if out.ndim == 0 else out


def riemann_siegel_theta(t):
    """theta(t) = Im log Gamma(1/4 + i t/2) - (t/2) log pi, for t > 1."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 1.0):
        raise DomainError("riemann_siegel_theta requires t > 1")
    out = np.imag(loggamma(0.25 + 0.5j * t_arr)) - 0.5 * t_arr * math.log(math.pi)
    return float(out) if np.ndim(out) == 0 else out


def riemann_siegel_z(t, settings: EvalSettings | None = None):
    """Real-valued Z(t) = exp(i theta(t)) zeta(1/2 + i t), for t > 1."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 1.0):
        raise DomainError("riemann_siegel_z requires t > 1")
    theta = riemann_siegel_theta(t_arr)
    val = np.real(np.exp(1j * theta) * zeta(0.5 + 1j * t_arr, settings))
    return float(val) if np.ndim(val) == 0 else val


@dataclass(frozen=True)
class ZeroTable:
    """Ordinates 0 < t_1 < t_2 < ... of critical-line zeros up to t_max."""
    ordinates: tuple[float, ...]
    tolerance: float
    t_max: float
    t0: float = field(default=0.0, init=False)

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.ordinates, self.ordinates[1:])):
            raise ValueError("ordinates must be strictly increasing")
        if self.ordinates and self.ordinates[0] <= 0:
            raise ValueError("ordinates must be positive")

    def __len__(self) -> int:
        return len(self.ordinates)

    def t(self, k: int) -> float:
        """t_k with the sentinel t_0 = 0."""
        if k == 0:
            return 0.0
        return self.ordinates[k - 1]

    def to_dict(self) -> dict:
        return {"t0": 0, "ordinates": list(self.ordinates), "tolerance": self.tolerance,
                "t_max": self.t_max}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "ZeroTable":
        ords = tuple(float(x) for x in d["ordinates"])
        t_max = float(d.get("t_max", ords[-1] if ords else 0.0))
        return cls(ords, float(d["tolerance"]), t_max)


def _bisect_sign_changes(f, lo: np.ndarray, hi: np.ndarray, tol: float) -> np.ndarray:
    flo = f(lo)
    while np.max(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        left = np.sign(fmid) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fmid, flo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)


def find_zero_ordinates(t_max: float, settings: EvalSettings | None = None,
                        step: float = 0.05, tolerance: float = 1e-9) -> ZeroTable:
    """All sign changes of Z on (1, t_max], bisected to ``tolerance``.

    The count is cross-checked against an argument-principle count of
    zeta on [-1, 2] x [1, t_max]; a disagreement raises CountMismatch.
    """
    from .roots import count_zeros

    if not 1.0 < t_max <= IM_MAX:
        raise DomainError("t_max must satisfy 1 < t_max <= 100")
    n_steps = max(1, int(math.ceil((t_max - 1.0) / step)))
    grid = np.linspace(1.0, t_max, n_steps + 1)
    grid[0] = 1.0 + 1e-9
    zvals = riemann_siegel_z(grid, settings)
    idx = np.nonzero(np.sign(zvals[:-1]) * np.sign(zvals[1:]) < 0)[0]
    if idx.size:
        roots = _bisect_sign_changes(lambda x: riemann_siegel_z(x, settings),
                                     grid[idx], grid[idx + 1], tolerance)
    else:
        roots = np.empty(0)
    ordinates = tuple(float(r) for r in roots)

    def zf(s):
        return zeta(s, settings)

    # Shift the top edge off any zero sitting right on the contour.
    for shift in (0.0, 1e-3, -1e-3, 2e-3, -2e-3, 5e-3):
        top = t_max + shift
        if top > IM_MAX or any(abs(top - r) < 1e-4 for r in ordinates):
            continue
        try:
            count = count_zeros(zf, Rect(-1.0, 2.0, 1.0, top))
        except ContourTooClose:
            continue
        expected = sum(1 for r in ordinates if r < top)
        if count != expected:
            raise CountMismatch(
                f"{expected} sign changes of Z below {top:g} but argument principle counts {count}")
        return ZeroTable(ordinates, tolerance, float(t_max))
    raise CountMismatch("could not place a contour clear of the zeros")


def zeta_functional_equation(s, settings: EvalSettings | None = None):
    """zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s), for Re s < 1/2.

    Internal cross-check only; not used by zeta().
    """
    s = np.asarray(s, dtype=complex)
    one_minus = 1.0 - s
    lg = loggamma(one_minus)
    factor = np.exp(s * math.log(2.0) + (s - 1.0) * math.log(math.pi) + lg) * np.sin(0.5 * math.pi * s)
    out = factor * zeta(one_minus, settings)
    return complex(out) if out.ndim == 0 else out
