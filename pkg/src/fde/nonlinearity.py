"""Bounded nonlinearities with asymptotic limits, and history perturbations.

Two catalogs are provided.  :class:`BoundedNonlinearity` covers the
state-coupled term ``g``: componentwise saturating profiles with declared
limits at +-infinity, radially homogeneous fields ``g(x) = phi(|x|) G(x/|x|)``
with ``phi -> 1``, and finite sign-pattern tables.  :class:`HistoryPerturbation`
covers the bounded remainder ``h(t, u_t)`` built from finitely many delayed
point evaluations of the state.

Every catalog entry knows its own sup norm, its radial limits, and (when
smooth) its derivative, which is what the residual Jacobian needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch
from .measures import apply_deviation
from .trigpoly import TrigPoly, analyze_grid, eval_grid


def _base(kind: str, z):
    if kind == "tanh":
        return np.tanh(z)
    if kind == "atan":
        return (2.0 / np.pi) * np.arctan(z)
    if kind == "alg":
        return z / np.sqrt(1.0 + z * z)
    raise DimensionMismatch(f"unknown saturation profile {kind!r}")


def _base_deriv(kind: str, z):
    if kind == "tanh":
        return 1.0 / np.cosh(z) ** 2
    if kind == "atan":
        return (2.0 / np.pi) / (1.0 + z * z)
    if kind == "alg":
        return (1.0 + z * z) ** -1.5
    raise DimensionMismatch(f"unknown saturation profile {kind!r}")


@dataclass
class ComponentProfile:
    """Scalar saturating profile ``mid + half * base(scale (x - shift))``.

    ``base`` runs from -1 to 1, so the profile has limits ``lo`` and ``hi``.
    ``tanh`` has an exponential tail, ``atan`` a 1/x tail, ``alg`` a 1/x^2
    tail.
    """

    kind: str
    lo: float
    hi: float
    scale: float = 1.0
    shift: float = 0.0

    def __post_init__(self):
        if self.kind not in ("tanh", "atan", "alg"):
            raise DimensionMismatch(f"unknown saturation profile {self.kind!r}")
        if self.scale <= 0:
            raise DimensionMismatch("profile scale must be positive")

    @property
    def mid(self):
        return 0.5 * (self.hi + self.lo)

    @property
    def half(self):
        return 0.5 * (self.hi - self.lo)

    def value(self, x):
        return self.mid + self.half * _base(self.kind, self.scale * (np.asarray(x) - self.shift))

    def deriv(self, x):
        return self.half * self.scale * _base_deriv(self.kind, self.scale * (np.asarray(x) - self.shift))

    def tail_bound(self, y: float) -> float:
        """Upper bound on ``|value(x) - nearest limit|`` for ``|x| >= y``."""
        jump = abs(self.hi - self.lo)
        z = self.scale * (y - abs(self.shift))
        if z <= 0:
            return jump
        if self.kind == "tanh":
            return jump * min(1.0, np.exp(-2.0 * z))
        if self.kind == "atan":
            return jump * min(1.0, 1.0 / (np.pi * z))
        return jump * min(1.0, 0.25 / (z * z))

    def to_dict(self):
        return {"profile": self.kind, "lo": self.lo, "hi": self.hi,
                "scale": self.scale, "shift": self.shift}

    @staticmethod
    def from_dict(d):
        return ComponentProfile(d["profile"], float(d["lo"]), float(d["hi"]),
                                float(d.get("scale", 1.0)), float(d.get("shift", 0.0)))


def _sign_key(sigma) -> str:
    out = []
    for s in sigma:
        if s in ("+", 1, +1):
            out.append("+")
        elif s in ("-", -1):
            out.append("-")
        else:
            raise DimensionMismatch(f"invalid sign entry {s!r}")
    return "".join(out)


class NullDirectionError(ValueError):
    """Radial limit requested along a direction with a vanishing component."""


@dataclass
class BoundedNonlinearity:
    """State nonlinearity from the catalog; see module docstring.

    Exactly one of the three parameter groups is populated depending on
    ``kind``: ``components`` (componentwise), ``A``/``b`` (radial with
    ``G(v) = A v + b`` and ``phi(r) = r / sqrt(1 + r^2)``), or ``table`` and
    ``zero_value`` (sign table, constant on each open orthant).
    """

    kind: str
    components: list | None = None
    A: np.ndarray | None = None
    b: np.ndarray | None = None
    table: dict | None = None
    zero_value: np.ndarray | None = None

    def __post_init__(self):
        if self.kind == "componentwise":
            if not self.components:
                raise DimensionMismatch("componentwise nonlinearity needs profiles")
        elif self.kind == "radial":
            self.A = np.atleast_2d(np.asarray(self.A, dtype=float))
            if self.b is None:
                self.b = np.zeros(self.A.shape[0])
            self.b = np.asarray(self.b, dtype=float)
            if self.A.shape[0] != self.A.shape[1] or self.A.shape[0] != self.b.size:
                raise DimensionMismatch("radial field needs square A and matching b")
        elif self.kind == "sign_table":
            if not self.table:
                raise DimensionMismatch("sign table is empty")
            n = len(next(iter(self.table)))
            if len(self.table) != 2 ** n:
                raise DimensionMismatch("sign table must cover all 2^n patterns")
            self.table = {k: np.asarray(v, dtype=float) for k, v in self.table.items()}
            for key, v in self.table.items():
                if len(key) != n or v.size != n:
                    raise DimensionMismatch("sign table entries are inconsistent")
            if self.zero_value is None:
                self.zero_value = np.mean(list(self.table.values()), axis=0)
            self.zero_value = np.asarray(self.zero_value, dtype=float)
        else:
            raise DimensionMismatch(f"unknown nonlinearity kind {self.kind!r}")

    # -- structure -----------------------------------------------------

    @property
    def n(self) -> int:
        if self.kind == "componentwise":
            return len(self.components)
        if self.kind == "radial":
            return self.A.shape[0]
        return len(next(iter(self.table)))

    @property
    def smooth(self) -> bool:
        return self.kind != "sign_table"

    @property
    def componentwise(self) -> bool:
        return self.kind == "componentwise"

    # -- evaluation ----------------------------------------------------

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape[1] != self.n:
            raise DimensionMismatch("argument width differs from field size")
        if self.kind == "componentwise":
            return np.stack([p.value(x[:, j]) for j, p in enumerate(self.components)], axis=1)
        if self.kind == "radial":
            r = np.sqrt(np.sum(x * x, axis=1))
            safe = np.where(r > 0, r, 1.0)
            v = x / safe[:, None]
            G = v @ self.A.T + self.b
            phi = r / np.sqrt(1.0 + r * r)
            return phi[:, None] * np.where(r[:, None] > 0, G, 0.0)
        idx = ((x > 0.0).astype(int) << np.arange(self.n)).sum(axis=1)
        out = self._table_array()[idx]
        null = np.any(x == 0.0, axis=1)
        if np.any(null):
            out[null] = self.zero_value
        return out

    def _table_array(self) -> np.ndarray:
        """Table flattened for vectorized lookup; bit j set means x_j > 0."""
        n = self.n
        arr = np.empty((2 ** n, n))
        for key, val in self.table.items():
            i = sum(1 << j for j, s in enumerate(key) if s == "+")
            arr[i] = val
        return arr

    def deriv(self, x: np.ndarray) -> np.ndarray:
        """Jacobian of the field at each sample.

        Componentwise fields return the diagonal, shape ``(M, n)``; radial
        fields the full ``(M, n, n)``.  Sign tables are not differentiable.
        """
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if self.kind == "componentwise":
            return np.stack([p.deriv(x[:, j]) for j, p in enumerate(self.components)], axis=1)
        if self.kind == "sign_table":
            raise DimensionMismatch("sign-table nonlinearity is not differentiable")
        n = self.n
        r = np.sqrt(np.sum(x * x, axis=1))
        safe = np.where(r > 1e-9, r, 1.0)
        v = x / safe[:, None]
        G = v @ self.A.T + self.b
        phi = r / np.sqrt(1.0 + r * r)
        dphi = (1.0 + r * r) ** -1.5
        proj = np.eye(n)[None, :, :] - v[:, :, None] * v[:, None, :]
        out = (G[:, :, None] * (dphi[:, None] * v)[:, None, :]
               + (phi / safe)[:, None, None] * (self.A[None, :, :] @ proj))
        out[r <= 1e-9] = 0.0
        return out

    # -- limits --------------------------------------------------------

    def limit_sigma(self, sigma) -> np.ndarray:
        """Limit over an open orthant given as a sign pattern."""
        key = _sign_key(sigma)
        if len(key) != self.n:
            raise DimensionMismatch("sign pattern length differs from field size")
        if self.kind == "componentwise":
            return np.array([p.hi if s == "+" else p.lo
                             for s, p in zip(key, self.components)])
        if self.kind == "sign_table":
            return self.table[key].copy()
        v = np.array([1.0 if s == "+" else -1.0 for s in key]) / np.sqrt(self.n)
        return v @ self.A.T + self.b

    def limit_direction(self, v: np.ndarray) -> np.ndarray:
        """Radial limit along a nonzero direction (componentwise: all
        components must be nonzero, otherwise :class:`NullDirectionError`)."""
        v = np.asarray(v, dtype=float)
        nv = np.linalg.norm(v)
        if nv == 0.0:
            raise NullDirectionError("zero direction has no radial limit")
        v = v / nv
        if self.kind == "radial":
            return v @ self.A.T + self.b
        if np.any(v == 0.0):
            raise NullDirectionError(
                "direction has a vanishing component; limit only exists off a null set")
        return self.limit_sigma(np.sign(v).astype(int))

    def value_at_zero(self) -> np.ndarray:
        if self.kind == "componentwise":
            return np.array([p.value(0.0) for p in self.components])
        if self.kind == "radial":
            return np.zeros(self.n)
        return self.zero_value.copy()

    def jump(self, j: int) -> float:
        """Limit gap ``g_j(+inf) - g_j(-inf)`` of one component (componentwise)."""
        if self.kind != "componentwise":
            raise DimensionMismatch("per-component jumps need a componentwise field")
        return self.components[j].hi - self.components[j].lo

    # -- bounds --------------------------------------------------------

    def sup_norm(self) -> float:
        """Bound on ``sup_x |g(x)|`` (Euclidean)."""
        if self.kind == "componentwise":
            return float(np.sqrt(sum(max(abs(p.lo), abs(p.hi)) ** 2
                                     for p in self.components)))
        if self.kind == "radial":
            return float(np.linalg.norm(self.A, 2) + np.linalg.norm(self.b))
        vals = [np.linalg.norm(val) for val in self.table.values()]
        vals.append(np.linalg.norm(self.zero_value))
        return float(max(vals))

    def envelope(self, s: float, vmin: float = 1.0) -> float:
        """Bound on ``|g(s v) - limit(v)|`` for unit ``v`` with
        ``min_j |v_j| >= vmin`` (componentwise) or any unit ``v`` (radial)."""
        if self.kind == "componentwise":
            return float(np.sqrt(sum(p.tail_bound(s * vmin) ** 2
                                     for p in self.components)))
        if self.kind == "radial":
            return float(self.sup_norm() * 0.5 / max(s, 1.0) ** 2)
        return 0.0

    # -- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        if self.kind == "componentwise":
            return {"kind": "componentwise",
                    "components": [p.to_dict() for p in self.components]}
        if self.kind == "radial":
            return {"kind": "radial", "A": self.A.tolist(), "b": self.b.tolist()}
        return {"kind": "sign_table",
                "table": {k: v.tolist() for k, v in sorted(self.table.items())},
                "zero_value": self.zero_value.tolist()}

    @staticmethod
    def from_dict(d: dict) -> "BoundedNonlinearity":
        kind = d.get("kind")
        if kind == "componentwise":
            return BoundedNonlinearity(kind,
                                       components=[ComponentProfile.from_dict(c)
                                                   for c in d["components"]])
        if kind == "radial":
            return BoundedNonlinearity(kind, A=np.asarray(d["A"], dtype=float),
                                       b=np.asarray(d.get("b"), dtype=float)
                                       if d.get("b") is not None else None)
        if kind == "sign_table":
            return BoundedNonlinearity(kind, table=dict(d["table"]),
                                       zero_value=d.get("zero_value"))
        raise DimensionMismatch(f"unknown nonlinearity kind {kind!r}")


def saturating(lo: float = -1.0, hi: float = 1.0, kind: str = "tanh",
               scale: float = 1.0, shift: float = 0.0, n: int = 1) -> BoundedNonlinearity:
    """Convenience: ``n`` identical componentwise saturating profiles."""
    return BoundedNonlinearity("componentwise",
                               components=[ComponentProfile(kind, lo, hi, scale, shift)
                                           for _ in range(n)])


# -- history perturbation ---------------------------------------------


def _h_base(kind: str, z):
    if kind == "tanh":
        return np.tanh(z)
    if kind == "sech":
        return 1.0 / np.cosh(z)
    if kind == "sin":
        return np.sin(z)
    if kind == "cos":
        return np.cos(z)
    raise DimensionMismatch(f"unknown perturbation profile {kind!r}")


def _h_base_deriv(kind: str, z):
    if kind == "tanh":
        return 1.0 / np.cosh(z) ** 2
    if kind == "sech":
        return -np.tanh(z) / np.cosh(z)
    if kind == "sin":
        return np.cos(z)
    if kind == "cos":
        return -np.sin(z)
    raise DimensionMismatch(f"unknown perturbation profile {kind!r}")


@dataclass
class DelayTap:
    component: int
    delay: float
    weight: float = 1.0

    def to_dict(self):
        return {"component": self.component, "delay": self.delay, "weight": self.weight}


@dataclass
class PerturbationTerm:
    """``amp * cos(tmod_harmonic t + tmod_phase) * base(sum taps)`` added to
    one target component; each tap reads ``weight * u_c(t - delay)``."""

    component: int
    amp: float
    profile: str
    taps: list
    tmod_harmonic: int = 0
    tmod_phase: float = 0.0

    def tmod(self, t):
        if self.tmod_harmonic == 0 and self.tmod_phase == 0.0:
            return np.ones_like(t)
        return np.cos(self.tmod_harmonic * t + self.tmod_phase)

    def to_dict(self):
        return {"component": self.component, "amp": self.amp,
                "profile": self.profile,
                "taps": [tp.to_dict() for tp in self.taps],
                "tmod": ({"harmonic": self.tmod_harmonic, "phase": self.tmod_phase}
                         if (self.tmod_harmonic or self.tmod_phase) else None)}


@dataclass
class HistoryPerturbation:
    """Bounded perturbation built from finitely many delayed evaluations."""

    terms: list = field(default_factory=list)
    kernel_orthogonal: bool = False
    declared_sup: float | None = None

    def sup_norm(self) -> float:
        """Bound on ``sup |h|`` (profiles are bounded by one)."""
        if self.declared_sup is not None:
            return float(self.declared_sup)
        comps: dict[int, float] = {}
        for term in self.terms:
            comps[term.component] = comps.get(term.component, 0.0) + abs(term.amp)
        return float(np.sqrt(sum(v * v for v in comps.values())))

    @property
    def time_dependent(self) -> bool:
        return any(t.tmod_harmonic != 0 or t.tmod_phase != 0.0 for t in self.terms)

    def tap_signals(self, u: TrigPoly, M: int) -> dict:
        """Grid samples of every distinct delayed component read."""
        out = {}
        for term in self.terms:
            for tap in term.taps:
                key = (tap.component, tap.delay)
                if key not in out:
                    out[key] = eval_grid(u.shift(-tap.delay), M)[:, tap.component]
        return out

    def eval(self, u: TrigPoly, M: int) -> np.ndarray:
        """Samples of ``h(t, u_t)`` on the uniform grid; shape ``(M, n_u)``."""
        t = 2.0 * np.pi * np.arange(M) / M
        taps = self.tap_signals(u, M)
        out = np.zeros((M, u.n))
        for term in self.terms:
            z = np.zeros(M)
            for tap in term.taps:
                z += tap.weight * taps[(tap.component, tap.delay)]
            out[:, term.component] += term.amp * term.tmod(t) * _h_base(term.profile, z)
        return out

    def check_kernel_orthogonal(self, kernel_vectors, tol: float = 1e-12) -> bool:
        """True when every target component misses every kernel direction."""
        targets = {t.component for t in self.terms}
        for theta in kernel_vectors:
            th = np.atleast_2d(np.asarray(theta).T).T  # (n, nu)
            for c in targets:
                if np.any(np.abs(th[c]) > tol):
                    return False
        return True

    def to_dict(self) -> dict:
        return {"terms": [t.to_dict() for t in self.terms],
                "kernel_orthogonal": self.kernel_orthogonal,
                "sup": self.declared_sup}

    @staticmethod
    def from_dict(d: dict) -> "HistoryPerturbation":
        terms = []
        for t in d.get("terms", []):
            tmod = t.get("tmod") or {}
            terms.append(PerturbationTerm(
                int(t["component"]), float(t["amp"]), t["profile"],
                [DelayTap(int(tp["component"]), float(tp["delay"]),
                          float(tp.get("weight", 1.0))) for tp in t["taps"]],
                int(tmod.get("harmonic", 0)), float(tmod.get("phase", 0.0))))
        return HistoryPerturbation(terms,
                                   kernel_orthogonal=bool(d.get("kernel_orthogonal", False)),
                                   declared_sup=d.get("sup"))


def nemytskii_eval(prob, u: TrigPoly, M: int) -> TrigPoly:
    """Coefficients of ``N u = p - g(Psi u) - h(t, u_t)`` up to ``u.kmax``.

    Evaluated pseudospectrally: sample on ``M`` points, apply the
    nonlinearities pointwise, re-analyze.  ``M`` must oversample the band
    (``M >= 4 kmax``) to keep aliasing below the solver tolerances.
    """
    kmax = u.kmax
    if M < max(2 * kmax + 1, 4 * kmax):
        raise DimensionMismatch(f"M={M} undersamples kmax={kmax}; need >= {4 * kmax}")
    y = eval_grid(apply_deviation(prob.Psi, u), M)
    total = eval_grid(prob.p, M) - prob.g(y)
    if prob.h is not None and prob.h.terms:
        total = total - prob.h.eval(u, M)
    return analyze_grid(total, kmax)
