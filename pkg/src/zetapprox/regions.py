"""Compact sets Q_i, K_i and the fattened sets used for fitting.

Strip edges follow s_1 = 1 and s_j = 2j for every other integer j, so the
critical line sits on the right edge of strip 0 and the pole z = 1 on the
left edge of strip 1, where its excluded disc always opens into a gap.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import EmptySet, GridTooCoarse, InsufficientZeroTable
from .geometry import MEMBERSHIP_TOL, Disc, Rect
from .zeta import ZeroTable

POLE = complex(1.0, 0.0)


def strip_edge(j: int) -> float:
    return 1.0 if j == 1 else 2.0 * j


@dataclass(frozen=True)
class SetParams:
    index: int
    lam: float
    zero_table: ZeroTable
    exclusion_radius: float
    cap_radius: float

    def t(self, k: int) -> float:
        return self.zero_table.t(k)

    def strip(self, j: int) -> tuple[float, float]:
        a, b = strip_edge(j), strip_edge(j + 1)
        return a, a + self.lam * (b - a)

    def band(self, k: int) -> tuple[float, float]:
        a, b = self.t(k), self.t(k + 1)
        return a, a + self.lam * (b - a)

    def min_gap(self) -> float:
        """Narrowest separation between pieces of Q_i, K_i or the fattened set."""
        i = self.index
        horiz = min((1 - self.lam) * (strip_edge(j + 1) - strip_edge(j)) for j in range(-i, i))
        vert = min((1 - self.lam) * (self.t(k + 1) - self.t(k)) for k in range(0, i))
        radial = self.exclusion_radius - self.cap_radius
        return float(min(horiz, vert, radial))

    def to_dict(self) -> dict:
        return {"index": self.index, "lambda": self.lam, "exclusion_radius": self.exclusion_radius,
                "cap_radius": self.cap_radius,
                "strip_edges": [strip_edge(j) for j in range(-self.index, self.index + 2)],
                "ordinates": [self.t(k) for k in range(1, self.index + 2)]}


def make_params(i: int, zeros: ZeroTable) -> SetParams:
    if i < 1:
        raise ValueError("index must be >= 1")
    if len(zeros) < i + 1:
        raise InsufficientZeroTable(f"need t_{i + 1}; the table holds {len(zeros)} ordinates")
    return SetParams(i, i / (i + 1), zeros, 1.0 / i, 1.0 / (2 * i))


@dataclass(frozen=True)
class CompactSet:
    """(union of rects minus open discs) plus closed discs plus points."""
    rects: tuple[Rect, ...]
    excluded_discs: tuple[Disc, ...] = ()
    added_discs: tuple[Disc, ...] = ()
    isolated_points: tuple[complex, ...] = ()
    params: SetParams | None = field(default=None, compare=False)

    def in_bulk(self, z, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        inside = np.zeros(z.shape, dtype=bool)
        for r in self.rects:
            inside |= r.contains(z, tol)
        for d in self.excluded_discs:
            inside &= ~d.contains(z, tol)
        return inside

    def contains(self, z, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        member = self.in_bulk(z, tol)
        for d in self.added_discs:
            member |= d.contains(z, tol)
        for p in self.isolated_points:
            member |= np.abs(z - p) <= tol
        return member

    def bounding_box(self) -> Rect:
        xs, ys = [], []
        for r in self.rects:
            xs += [r.x0, r.x1]
            ys += [r.y0, r.y1]
        for d in self.added_discs:
            xs += [d.center.real - d.radius, d.center.real + d.radius]
            ys += [d.center.imag - d.radius, d.center.imag + d.radius]
        for p in self.isolated_points:
            xs.append(p.real)
            ys.append(p.imag)
        if not xs:
            raise EmptySet("set has no elements")
        x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
        if x1 == x0:
            x0, x1 = x0 - 0.5, x1 + 0.5
        if y1 == y0:
            y0, y1 = y0 - 0.5, y1 + 0.5
        return Rect(x0, x1, y0, y1)

    def to_dict(self) -> dict:
        return {"rects": [r.to_dict() for r in self.rects],
                "excluded_discs": [d.to_dict() for d in self.excluded_discs],
                "added_discs": [d.to_dict() for d in self.added_discs],
                "isolated_points": [[p.real, p.imag] for p in self.isolated_points],
                "params": self.params.to_dict() if self.params else None}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


@dataclass(frozen=True)
class ZeroClassification:
    on_line_or_real: tuple[complex, ...]
    off_line: tuple[complex, ...] = ()

    @property
    def all_zeros(self) -> tuple[complex, ...]:
        return self.on_line_or_real + self.off_line


def build_Q(params: SetParams) -> CompactSet:
    i = params.index
    rects = []
    for j in range(-i, i + 1):
        x0, x1 = params.strip(j)
        lam_t1 = params.lam * params.t(1)
        rects.append(Rect(x0, x1, -lam_t1, lam_t1))
        for k in range(1, i + 1):
            y0, y1 = params.band(k)
            rects.append(Rect(x0, x1, y0, y1))
            rects.append(Rect(x0, x1, -y1, -y0))
    return CompactSet(tuple(rects), params=params)


def classify_zeros(params: SetParams, Q: CompactSet) -> ZeroClassification:
    """Trivial zeros and critical-line zeros lying in Q.

    Off-line zeros would need a search the zero table does not provide;
    a table that passed its count check has none below t_max.
    """
    found = []
    for m in range(1, params.index + 1):
        a = complex(-2.0 * m, 0.0)
        if Q.contains(a):
            found.append(a)
    for k in range(1, params.index + 1):
        a = complex(0.5, params.t(k))
        if Q.contains(a):
            found += [a, a.conjugate()]
    return ZeroClassification(tuple(found), ())


def build_K(params: SetParams, Q: CompactSet, zc: ZeroClassification) -> CompactSet:
    centers = zc.all_zeros + (POLE,)
    excluded = tuple(Disc(c, params.exclusion_radius, False) for c in centers)
    return CompactSet(Q.rects, excluded, (), centers, params)


def build_fat_K(params: SetParams, K: CompactSet) -> CompactSet:
    added = tuple(Disc(d.center, params.cap_radius, True) for d in K.excluded_discs)
    covered = [p for p in K.isolated_points if not any(d.contains(p) for d in added)]
    return CompactSet(K.rects, K.excluded_discs, added, tuple(covered), params)


def build_sets(i: int, zeros: ZeroTable):
    """(params, Q_i, classification, K_i, fattened K_i)."""
    params = make_params(i, zeros)
    Q = build_Q(params)
    zc = classify_zeros(params, Q)
    K = build_K(params, Q, zc)
    return params, Q, zc, K, build_fat_K(params, K)


# ------------------------------------------------------------------ sampling

@dataclass(frozen=True)
class RegionTag:
    kind: str  # Bulk, BallAtOne, BallAtZero, IsolatedPoint
    center: complex | None = None

    def conj(self) -> "RegionTag":
        return self if self.center is None else RegionTag(self.kind, self.center.conjugate())

    def __str__(self) -> str:
        if self.center is None:
            return self.kind
        return f"{self.kind}({self.center.real!r}{self.center.imag:+.17g}j)"


BULK = RegionTag("Bulk")


@dataclass(frozen=True)
class Samples:
    z: np.ndarray
    region: np.ndarray
    tags: tuple[RegionTag, ...]
    weights: np.ndarray

    def __len__(self) -> int:
        return self.z.size

    def tag_of(self, idx: int) -> RegionTag:
        return self.tags[self.region[idx]]

    def mask(self, kind: str) -> np.ndarray:
        ids = [i for i, t in enumerate(self.tags) if t.kind == kind]
        return np.isin(self.region, ids)

    def subset(self, keep: np.ndarray) -> "Samples":
        """Restrict to a mask; weights are renormalized per surviving region."""
        z, region = self.z[keep], self.region[keep]
        used = sorted(set(region.tolist()))
        remap = {old: new for new, old in enumerate(used)}
        region = np.array([remap[r] for r in region.tolist()], dtype=int)
        tags = tuple(self.tags[i] for i in used)
        return Samples(z, region, tags, _region_weights(region, len(tags)))

    def records(self):
        return [(complex(z), self.tags[r], float(w)) for z, r, w in zip(self.z, self.region, self.weights)]

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["re", "im", "region_tag", "weight"])
            for z, tag, weight in self.records():
                w.writerow([repr(z.real), repr(z.imag), str(tag), repr(weight)])


def _region_weights(region: np.ndarray, n_regions: int) -> np.ndarray:
    counts = np.bincount(region, minlength=n_regions)
    return 1.0 / counts[region]


def _rect_points(r: Rect, hb: float, hi: float) -> np.ndarray:
    nx = max(1, int(np.ceil((r.x1 - r.x0) / hb)))
    ny = max(1, int(np.ceil((r.y1 - r.y0) / hb)))
    xs, ys = np.linspace(r.x0, r.x1, nx + 1), np.linspace(r.y0, r.y1, ny + 1)
    gx = np.linspace(r.x0, r.x1, max(2, int(np.ceil((r.x1 - r.x0) / hi)) + 1))
    gy = np.linspace(r.y0, r.y1, max(2, int(np.ceil((r.y1 - r.y0) / hi)) + 1))
    gx, gy = np.meshgrid(gx, gy)
    return np.concatenate([xs + 1j * r.y0, xs + 1j * r.y1, r.x0 + 1j * ys, r.x1 + 1j * ys,
                           (gx + 1j * gy).ravel()])


def _circle(center: complex, radius: float, h: float) -> np.ndarray:
    m = max(8, int(np.ceil(2 * np.pi * radius / h)))
    return center + radius * np.exp(2j * np.pi * np.arange(m) / m)


def _disc_points(d: Disc, hb: float, hi: float) -> np.ndarray:
    g = min(hi, d.radius / 4)
    ax = np.arange(-d.radius, d.radius + 0.5 * g, g)
    gx, gy = np.meshgrid(ax, ax)
    grid = (gx + 1j * gy).ravel()
    grid = d.center + grid[np.abs(grid) <= d.radius * (1 - 1e-9)]
    return np.concatenate([_circle(d.center, d.radius, hb), grid])


def _upper_half(z: np.ndarray) -> np.ndarray:
    z = np.round(z, 12)
    z = np.where(np.abs(z.imag) < 1e-13, z.real + 0j, z)
    z = np.unique(z[z.imag >= 0])  # sorted by (re, im)
    return z


def sample_set(cset: CompactSet, boundary_step: float, interior_step: float) -> Samples:
    """Deterministic, conjugation-closed samples of a real-symmetric set.

    Points are generated in the closed upper half plane and mirrored, so
    conj(z) is a sample whenever z is.
    """
    if not (boundary_step > 0 and interior_step > 0):
        raise ValueError("steps must be positive")
    groups: list[tuple[RegionTag, np.ndarray]] = []
    if cset.rects:
        pts = [_rect_points(r, boundary_step, interior_step) for r in cset.rects if r.y1 >= 0]
        pts += [_circle(d.center, d.radius, boundary_step) for d in cset.excluded_discs]
        z = _upper_half(np.concatenate(pts))
        z = z[cset.in_bulk(z)]
        groups.append((BULK, z))
    for d in cset.added_discs:
        if d.center.imag < 0:
            continue
        kind = "BallAtOne" if d.center == POLE else "BallAtZero"
        z = _disc_points(d, boundary_step, interior_step)
        if d.center.imag == 0:
            z = _upper_half(z)
        else:
            z = np.unique(np.round(z, 12))
        groups.append((RegionTag(kind, d.center), z))
    for p in cset.isolated_points:
        if p.imag >= 0:
            groups.append((RegionTag("IsolatedPoint", p), np.array([p])))

    tags, zs, regions = [], [], []
    for tag, z in groups:
        full = np.concatenate([z, np.conj(z[z.imag > 0])]) if tag.center is None or tag.center.imag == 0 else z
        if full.size == 0:
            continue
        tags.append(tag)
        zs.append(full)
        regions.append(np.full(full.size, len(tags) - 1))
        if tag.center is not None and tag.center.imag > 0:
            tags.append(tag.conj())
            zs.append(np.conj(z))
            regions.append(np.full(z.size, len(tags) - 1))
    if not zs:
        raise EmptySet("no samples generated")
    region = np.concatenate(regions).astype(int)
    return Samples(np.concatenate(zs), region, tuple(tags), _region_weights(region, len(tags)))


# -------------------------------------------------------------- connectivity

def complement_connected(cset: CompactSet, grid_step: float, margin: float,
                         min_gap: float | None = None) -> bool:
    """Grid flood fill of the complement from outside the bounding box.

    A cell counts as occupied when any of 16 probe points in it is a member.
    Free cells are joined through shared edges only.
    """
    gap = min_gap if min_gap is not None else (cset.params.min_gap() if cset.params else None)
    if gap is not None and grid_step > 0.5 * gap:
        raise GridTooCoarse(f"grid step {grid_step} exceeds half the minimal gap {gap}")
    box = cset.bounding_box().inflate(margin + grid_step)
    nx = int(np.ceil((box.x1 - box.x0) / grid_step))
    ny = int(np.ceil((box.y1 - box.y0) / grid_step))
    xs = box.x0 + grid_step * np.arange(nx)
    offsets = (np.arange(4) + 0.5) / 4 * grid_step
    ox, oy = np.meshgrid(offsets, offsets)
    probe = (ox + 1j * oy).ravel()
    occupied = np.zeros((ny, nx), dtype=bool)
    for r0 in range(0, ny, 32):
        rows = np.arange(r0, min(ny, r0 + 32))
        corner = (xs[None, :] + 1j * (box.y0 + grid_step * rows)[:, None])
        pts = corner[:, :, None] + probe[None, None, :]
        occupied[rows] = cset.contains(pts).any(axis=2)
    for p in cset.isolated_points:
        c = int((p.real - box.x0) // grid_step)
        r = int((p.imag - box.y0) // grid_step)
        occupied[r, c] = True
    _, count = ndimage.label(~occupied)
    return count == 1
