"""Problem container: the periodically forced functional-differential system

    P(d/dt) u(t) + int dLam(s) u(t+s) + g(int dPsi(s) u(t+s)) + h(t, u_t) = p(t)

for 2*pi-periodic ``u`` with values in ``R^n``.  ``P`` is a matrix polynomial
with invertible leading coefficient, ``Lam`` and ``Psi`` are matrix measures
on the circle, ``g`` and ``h`` come from the bounded catalogs, and ``p`` is a
trigonometric polynomial.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, ProblemFormatError
from .measures import MeasureMatrix
from .nonlinearity import BoundedNonlinearity, HistoryPerturbation
from .trigpoly import TrigPoly


@dataclass
class MatrixPolynomial:
    """``P(x) = A_0 + A_1 x + ... + A_m x^m`` with ``A_m`` invertible."""

    coeffs: np.ndarray  # (m+1, n, n)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim == 1:
            c = c[:, None, None]
        if c.ndim != 3 or c.shape[1] != c.shape[2]:
            raise DimensionMismatch("coefficients must be a stack of square matrices")
        self.coeffs = c
        lead = c[-1]
        scale = np.linalg.norm(lead, 2)
        if scale == 0.0 or abs(np.linalg.det(lead)) <= 1e-12 * scale ** self.n:
            raise DimensionMismatch("leading coefficient A_m is singular")

    @property
    def n(self) -> int:
        return self.coeffs.shape[1]

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def __call__(self, z: complex) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=complex)
        for j in range(self.degree, -1, -1):
            out = out * z + self.coeffs[j]
        return out

    @staticmethod
    def from_scalar(coeffs) -> "MatrixPolynomial":
        return MatrixPolynomial(np.asarray(coeffs, dtype=float)[:, None, None])

    def to_dict(self):
        return [a.tolist() for a in self.coeffs]

    @staticmethod
    def from_dict(data) -> "MatrixPolynomial":
        return MatrixPolynomial(np.asarray(data, dtype=float))


@dataclass
class SolveConfig:
    """Harmonic balance settings.

    ``M`` defaults to ``4 * kmax`` (anti-aliasing); the damping schedule is
    the Levenberg-Marquardt triple (initial mu, growth, shrink factors).
    """

    kmax: int = 64
    M: int | None = None
    tol_residual: float = 1e-10
    max_iter: int = 100
    jacobian: str = "analytic"       # or "finite-difference"
    fd_step: float = 1e-7
    mu0: float = 1e-4
    mu_grow: float = 8.0
    mu_shrink: float = 0.25
    seed_radii: tuple = (0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0)
    seed_samples: int = 64

    def __post_init__(self):
        if self.kmax < 1:
            raise DimensionMismatch("kmax must be at least 1")
        if self.M is None:
            self.M = 4 * self.kmax
        if self.M < max(2 * self.kmax + 1, 4 * self.kmax):
            raise DimensionMismatch("M undersamples the chosen bandwidth")
        if self.jacobian not in ("analytic", "finite-difference"):
            raise DimensionMismatch(f"unknown jacobian mode {self.jacobian!r}")

    def to_dict(self):
        return {"kmax": self.kmax, "M": self.M,
                "tol_residual": self.tol_residual, "max_iter": self.max_iter,
                "jacobian": self.jacobian, "fd_step": self.fd_step,
                "damping": [self.mu0, self.mu_grow, self.mu_shrink],
                "seed_radii": list(self.seed_radii),
                "seed_samples": self.seed_samples}

    @staticmethod
    def from_dict(d: dict) -> "SolveConfig":
        damping = d.get("damping", [1e-4, 8.0, 0.25])
        return SolveConfig(
            kmax=int(d.get("kmax", 64)), M=d.get("M"),
            tol_residual=float(d.get("tol_residual", 1e-10)),
            max_iter=int(d.get("max_iter", 100)),
            jacobian=d.get("jacobian", "analytic"),
            fd_step=float(d.get("fd_step", 1e-7)),
            mu0=float(damping[0]), mu_grow=float(damping[1]),
            mu_shrink=float(damping[2]),
            seed_radii=tuple(d.get("seed_radii", (0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0))),
            seed_samples=int(d.get("seed_samples", 64)))


@dataclass
class ProblemSpec:
    """Complete problem data; validates cross-object dimensions on build."""

    P: MatrixPolynomial
    Lam: MeasureMatrix
    Psi: MeasureMatrix
    g: BoundedNonlinearity
    p: TrigPoly
    h: HistoryPerturbation | None = None
    solve: SolveConfig | None = None

    def __post_init__(self):
        n = self.P.n
        for label, size in (("Lambda", self.Lam.n), ("Psi", self.Psi.n),
                            ("g", self.g.n), ("p", self.p.n)):
            if size != n:
                raise DimensionMismatch(f"{label} has size {size}, expected {n}")
        if self.h is not None:
            for term in self.h.terms:
                if not 0 <= term.component < n:
                    raise DimensionMismatch("perturbation target outside the system")
                for tap in term.taps:
                    if not 0 <= tap.component < n:
                        raise DimensionMismatch("perturbation tap outside the system")

    @property
    def n(self) -> int:
        return self.P.n

    def to_dict(self) -> dict:
        return {"n": self.n,
                "P": self.P.to_dict(),
                "Lambda": self.Lam.to_dict(),
                "Psi": self.Psi.to_dict(),
                "g": self.g.to_dict(),
                "h": self.h.to_dict() if self.h is not None else None,
                "p": self.p.to_dict(),
                "solve": self.solve.to_dict() if self.solve is not None else None}

    @staticmethod
    def from_dict(d: dict) -> "ProblemSpec":
        try:
            return ProblemSpec(
                P=MatrixPolynomial.from_dict(d["P"]),
                Lam=MeasureMatrix.from_dict(d["Lambda"]),
                Psi=MeasureMatrix.from_dict(d["Psi"]),
                g=BoundedNonlinearity.from_dict(d["g"]),
                p=TrigPoly.from_dict(d["p"]),
                h=(HistoryPerturbation.from_dict(d["h"])
                   if d.get("h") is not None else None),
                solve=(SolveConfig.from_dict(d["solve"])
                       if d.get("solve") is not None else None))
        except KeyError as e:
            raise ProblemFormatError(f"missing field {e.args[0]!r}") from e

    def content_hash(self, include_h: bool = True) -> int:
        """Stable 63-bit hash of the problem content (used to seed scans)."""
        doc = self.to_dict()
        doc.pop("solve", None)
        if not include_h:
            doc.pop("h", None)
        blob = json.dumps(doc, sort_keys=True).encode()
        return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big") >> 1
