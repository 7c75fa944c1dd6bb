"""Algebraic and Dirichlet polynomials with real coefficients.

An algebraic polynomial is stored in a frame u = (z - c)/r and a basis
q_0, q_1, ... generated by an upper Hessenberg recurrence

    H[k+1, k] q_{k+1}(u) = u q_k(u) - sum_{j<=k} H[j, k] q_j(u),   q_0 = 1.

The plain monomial basis is the special case where H is the shift matrix.
With c and H real, real coefficients give P(conj z) = conj P(z) exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_RESCALE = 1e100


def shift_hessenberg(degree: int) -> np.ndarray:
    h = np.zeros((degree + 1, degree))
    if degree:
        h[np.arange(1, degree + 1), np.arange(degree)] = 1.0
    return h


def arnoldi_hessenberg(u: np.ndarray, weights: np.ndarray, degree: int) -> np.ndarray:
    """Hessenberg matrix of the basis orthonormal for sum_i w_i conj(f) g.

    Weights are normalized to sum to 1 so that q_0 = 1 is already a unit
    vector. Two Gram-Schmidt passes per step; the entries are forced real,
    which is exact for conjugation-closed nodes with symmetric weights.
    """
    u = np.asarray(u, dtype=complex)
    w = np.asarray(weights, dtype=float)
    w = w / w.sum()
    q = np.zeros((u.size, degree + 1), dtype=complex)
    q[:, 0] = 1.0
    h = np.zeros((degree + 1, degree))
    for k in range(degree):
        v = u * q[:, k]
        for _ in range(2):
            coef = np.real((np.conj(q[:, :k + 1]) * w[:, None]).T @ v)
            v = v - q[:, :k + 1] @ coef
            h[:k + 1, k] += coef
        norm = np.sqrt(np.sum(w * np.abs(v) ** 2))
        if norm == 0.0:
            raise ValueError(f"too few distinct nodes for degree {degree}")
        h[k + 1, k] = norm
        q[:, k + 1] = v / norm
    return h


def hessenberg_basis(u, h: np.ndarray, degree: int | None = None, derivative: bool = False,
                     rescale: bool = False):
    """Evaluate q_0..q_d (and d/du) at the points u.

    With rescale=True each row is renormalized whenever it grows past
    1e100; only ratios such as p/p' are meaningful then.
    """
    u = np.atleast_1d(np.asarray(u, dtype=complex))
    d = h.shape[1] if degree is None else degree
    q = np.zeros((u.size, d + 1), dtype=complex)
    dq = np.zeros_like(q) if derivative else None
    q[:, 0] = 1.0
    for k in range(d):
        col = h[:k + 1, k]
        q[:, k + 1] = (u * q[:, k] - q[:, :k + 1] @ col) / h[k + 1, k]
        if derivative:
            dq[:, k + 1] = (q[:, k] + u * dq[:, k] - dq[:, :k + 1] @ col) / h[k + 1, k]
        if rescale:
            big = np.abs(q[:, k + 1]) > _RESCALE
            if np.any(big):
                s = np.abs(q[big, k + 1])[:, None]
                q[big] /= s
                if derivative:
                    dq[big] /= s
    return q, dq


@dataclass(frozen=True)
class AlgebraicPolynomial:
    """P(z) = sum_k coeffs[k] q_k((z - center)/radius)."""
    center: float
    radius: float
    coeffs: np.ndarray
    hessenberg: np.ndarray

    @classmethod
    def monomial(cls, coeffs, center: float = 0.0, radius: float = 1.0) -> "AlgebraicPolynomial":
        """Coefficients of u^k, lowest degree first."""
        c = np.asarray(coeffs)
        return cls(float(center), float(radius), c, shift_hessenberg(c.size - 1))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.coeffs)

    def frame(self, z):
        return (np.asarray(z, dtype=complex) - self.center) / self.radius

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.empty(z.size, dtype=complex)
        flat = z.ravel()
        for i in range(0, flat.size, 8192):
            q, _ = hessenberg_basis(self.frame(flat[i:i + 8192]), self.hessenberg, self.degree)
            out[i:i + 8192] = q @ self.coeffs
        return complex(out[0]) if z.ndim == 0 else out.reshape(z.shape)

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        _, dq = hessenberg_basis(self.frame(z.ravel()), self.hessenberg, self.degree, derivative=True)
        out = (dq @ self.coeffs) / self.radius
        return complex(out[0]) if z.ndim == 0 else out.reshape(z.shape)

    def with_coeffs(self, coeffs) -> "AlgebraicPolynomial":
        return AlgebraicPolynomial(self.center, self.radius, np.asarray(coeffs), self.hessenberg)

    def truncated_basis(self, degree: int) -> "AlgebraicPolynomial":
        """Zero polynomial on the first degree+1 basis elements of this basis."""
        return AlgebraicPolynomial(self.center, self.radius, np.zeros(degree + 1),
                                   self.hessenberg[:degree + 1, :degree])

    def basis_values(self, z, derivative: bool = False):
        q, dq = hessenberg_basis(self.frame(z), self.hessenberg, self.degree, derivative)
        return q, (dq / self.radius if derivative else None)

    def to_dict(self) -> dict:
        d = {"kind": "algebraic", "frame": {"c": self.center, "r": self.radius},
             "transform": self.hessenberg.tolist()}
        if self.is_real:
            d["coeffs"] = self.coeffs.tolist()
        else:
            d["coeffs"] = [[v.real, v.imag] for v in self.coeffs]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "AlgebraicPolynomial":
        raw = d["coeffs"]
        if raw and isinstance(raw[0], list):
            coeffs = np.array([complex(a, b) for a, b in raw])
        else:
            coeffs = np.array(raw, dtype=float)
        h = d.get("transform")
        hess = np.array(h, dtype=float).reshape(coeffs.size, coeffs.size - 1) if h is not None \
            else shift_hessenberg(coeffs.size - 1)
        return cls(float(d["frame"]["c"]), float(d["frame"]["r"]), coeffs, hess)


@dataclass(frozen=True)
class DirichletPolynomial:
    """D(z) = sum_{m=1..M} a_m m^{-z}."""
    coeffs: np.ndarray

    @property
    def length(self) -> int:
        return self.coeffs.size

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.coeffs)

    @property
    def log_m(self) -> np.ndarray:
        return np.log(np.arange(1, self.length + 1, dtype=float))

    def _sum(self, z, weights):
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        out = np.empty(flat.size, dtype=complex)
        lm = self.log_m
        for i in range(0, flat.size, 2048):
            out[i:i + 2048] = np.exp(-np.multiply.outer(flat[i:i + 2048], lm)) @ weights
        return complex(out[0]) if z.ndim == 0 else out.reshape(z.shape)

    def __call__(self, z):
        return self._sum(z, self.coeffs)

    def derivative(self, z):
        return self._sum(z, -self.log_m * self.coeffs)

    def with_coeffs(self, coeffs) -> "DirichletPolynomial":
        return DirichletPolynomial(np.asarray(coeffs))

    def basis_values(self, z, derivative: bool = False):
        lm = self.log_m
        v = np.exp(-np.multiply.outer(np.atleast_1d(np.asarray(z, dtype=complex)), lm))
        return v, (-lm * v if derivative else None)

    def to_dict(self) -> dict:
        coeffs = self.coeffs.tolist() if self.is_real else [[v.real, v.imag] for v in self.coeffs]
        return {"kind": "dirichlet", "frame": {"c": 0.0, "r": 1.0}, "coeffs": coeffs}

    @classmethod
    def from_dict(cls, d: dict) -> "DirichletPolynomial":
        raw = d["coeffs"]
        if raw and isinstance(raw[0], list):
            return cls(np.array([complex(a, b) for a, b in raw]))
        return cls(np.array(raw, dtype=float))


def polynomial_from_dict(d: dict):
    if d["kind"] == "algebraic":
        return AlgebraicPolynomial.from_dict(d)
    if d["kind"] == "dirichlet":
        return DirichletPolynomial.from_dict(d)
    raise ValueError(f"unknown polynomial kind {d['kind']!r}")
