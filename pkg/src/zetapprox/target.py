"""The piecewise target f_n on the fattened set and its tolerance budget."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyBulk, TagMismatch
from .regions import POLE, CompactSet, RegionTag, Samples, ZeroClassification
from .zeta import DEFAULT_SETTINGS, EvalSettings, zeta


@dataclass(frozen=True)
class ToleranceBudget:
    delta: float
    epsilon: float

    def to_dict(self) -> dict:
        return {"delta_n": self.delta, "epsilon_n": self.epsilon}


@dataclass(frozen=True)
class PiecewiseTarget:
    """zeta on the bulk, n near the pole, z - a near a zero a.

    Balls around zeros off the real axis and the critical line carry
    the constant 1/n.
    """
    n: int
    zc: ZeroClassification
    fat_set: CompactSet
    settings: EvalSettings = DEFAULT_SETTINGS

    def __post_init__(self):
        known = set(self.zc.all_zeros) | {POLE}
        for d in self.fat_set.added_discs:
            if d.center not in known:
                raise ValueError(f"added disc at {d.center} is neither 1 nor a classified zero")
        if self.fat_set.params is not None and self.fat_set.params.index != self.n:
            raise ValueError("n does not match the set index")

    def ball_value(self, z: np.ndarray, center: complex) -> np.ndarray:
        if center == POLE:
            return np.full(z.shape, complex(self.n))
        if center in self.zc.on_line_or_real:
            return z - center
        if center in self.zc.off_line:
            return np.full(z.shape, complex(1.0 / self.n))
        raise TagMismatch(f"{center} is not a classified zero")

    def _check(self, z: np.ndarray, tag: RegionTag) -> None:
        if tag.kind == "Bulk":
            ok = self.fat_set.in_bulk(z)
        elif tag.kind in ("BallAtOne", "BallAtZero"):
            if (tag.kind == "BallAtOne") != (tag.center == POLE):
                raise TagMismatch(f"tag {tag} does not name the right centre")
            discs = [d for d in self.fat_set.added_discs if d.center == tag.center]
            if not discs:
                raise TagMismatch(f"no added disc at {tag.center}")
            ok = discs[0].contains(z)
        elif tag.kind == "IsolatedPoint":
            ok = np.abs(z - tag.center) <= 1e-12
        else:
            raise TagMismatch(f"unknown region kind {tag.kind}")
        if not np.all(ok):
            raise TagMismatch(f"point(s) not in region {tag}")

    def evaluate(self, z, tag: RegionTag):
        z = np.asarray(z, dtype=complex)
        self._check(z, tag)
        if tag.kind == "Bulk":
            return zeta(z, self.settings)
        out = self.ball_value(np.atleast_1d(z), tag.center)
        return complex(out[0]) if z.ndim == 0 else out.reshape(z.shape)

    def evaluate_samples(self, samples: Samples, conjugate: bool = False) -> np.ndarray:
        """f_n at every sample (or at its conjugate, with the mirrored tag)."""
        out = np.empty(len(samples), dtype=complex)
        for r, tag in enumerate(samples.tags):
            sel = samples.region == r
            z = samples.z[sel]
            if conjugate:
                z, tag = np.conj(z), tag.conj()
            out[sel] = self.evaluate(z, tag)
        return out


def target_eval(t: PiecewiseTarget, z, tag: RegionTag):
    return t.evaluate(z, tag)


def compute_budget(t: PiecewiseTarget, samples: Samples) -> ToleranceBudget:
    """delta_n = min |zeta| over bulk samples, epsilon_n = 0.999 min(delta_n/2, 1/n)."""
    bulk = samples.z[samples.mask("Bulk")]
    if bulk.size == 0:
        raise EmptyBulk("no bulk samples")
    delta = float(np.abs(zeta(bulk, t.settings)).min())
    return ToleranceBudget(delta, 0.999 * min(delta / 2, 1.0 / t.n))


def target_is_real_symmetric(t: PiecewiseTarget, samples: Samples) -> bool:
    f = t.evaluate_samples(samples)
    g = t.evaluate_samples(samples, conjugate=True)
    return bool(np.max(np.abs(g - np.conj(f))) <= 2 * t.settings.target_abs_error)
