"""Resonant frequency analysis of the linear part ``L_k = P(ik) + lamhat(-k)``.

On each Fourier mode the linear operator acts by the symbol matrix ``L_k``.
The resonant set collects the integer frequencies where ``L_k`` is singular;
it is finite because ``|P(ik)|`` grows like ``k^m`` while the measure term
stays bounded by the total variation.  The scan certifies its own cutoff
``k_star`` from that growth bound.

Kernel bases are extracted by SVD with a deterministic phase convention so
reports are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NotInImageError, ScanBoundExceeded
from .measures import MeasureMatrix, matrix_transform, total_variation_bound
from .problem import MatrixPolynomial
from .trigpoly import TrigPoly

_HARD_CAP = 10 ** 6


def symbol(P: MatrixPolynomial, Lam: MeasureMatrix, k: int) -> np.ndarray:
    """Mode-``k`` symbol ``P(ik) + lamhat(-k)``; complex ``(n, n)``."""
    if P.n != Lam.n:
        raise DimensionMismatch("polynomial and measure sizes differ")
    return P(1j * k) + matrix_transform(Lam, -k)


def _fix_phase(theta: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive."""
    out = theta.copy()
    for j in range(out.shape[1]):
        i = int(np.argmax(np.abs(out[:, j])))
        a = out[i, j]
        if np.abs(a) > 0:
            out[:, j] *= np.conj(a) / np.abs(a)
    return out


def kernel_data(L: np.ndarray, tol: float = 1e-9):
    """Numerical kernel of a square matrix.

    Returns ``(nu, theta, sigma)``: the kernel dimension, an orthonormal
    ``(n, nu)`` basis with the deterministic phase convention, and the
    singular values.  A singular value counts as zero below
    ``tol * (1 + sigma_max)``.
    """
    L = np.asarray(L, dtype=complex)
    _, sigma, vh = np.linalg.svd(L)
    gate = tol * (1.0 + (sigma[0] if sigma.size else 0.0))
    nu = int(np.sum(sigma < gate))
    theta = _fix_phase(vh[len(sigma) - nu:].conj().T) if nu else np.zeros((L.shape[0], 0), dtype=complex)
    return nu, theta, sigma


@dataclass
class ResonantMode:
    k: int
    L: np.ndarray
    sigma_min: float
    nu: int
    theta: np.ndarray  # (n, nu), orthonormal


@dataclass
class ConditionFlags:
    """Results of the four linear checks plus the deviation lower constant."""

    l1: bool
    l2: bool
    l3: bool
    l4: bool
    c_psi: float | None
    witnesses: dict = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return self.l1 and self.l2 and self.l3 and self.l4

    def to_dict(self):
        return {"L1": self.l1, "L2": self.l2, "L3": self.l3, "L4": self.l4,
                "c_psi": self.c_psi, "witnesses": self.witnesses}


@dataclass
class ResonanceReport:
    P: MatrixPolynomial
    Lam: MeasureMatrix
    tol: float
    k_star: int
    modes: dict            # k >= 0 -> ResonantMode
    flags: ConditionFlags | None = None

    @property
    def K(self) -> list:
        ks = sorted(self.modes)
        return sorted([-k for k in ks if k > 0] + ks)

    @property
    def nu(self) -> int:
        """Half the conjugate-paired kernel dimension (k > 0 modes only)."""
        return sum(m.nu for k, m in self.modes.items() if k > 0)

    def kernel_slots(self) -> list:
        """Ordered ``(k, j)`` labels for the positive-frequency kernel basis."""
        return [(k, j) for k in sorted(self.modes) if k > 0
                for j in range(self.modes[k].nu)]

    def theta(self, k: int) -> np.ndarray:
        """Kernel basis at signed ``k`` (conjugate for negative k)."""
        if abs(k) not in self.modes:
            raise DimensionMismatch(f"k={k} is not resonant")
        th = self.modes[abs(k)].theta
        return th if k >= 0 else np.conj(th)

    def symbol(self, k: int) -> np.ndarray:
        return symbol(self.P, self.Lam, k)

    def to_dict(self) -> dict:
        kernel = []
        for k in sorted(self.modes):
            m = self.modes[k]
            kernel.append({"k": k, "nu_k": m.nu, "sigma_min": m.sigma_min,
                           "theta": [[[float(z.real), float(z.imag)] for z in col]
                                     for col in m.theta.T]})
        out = {"K": self.K, "k_star": self.k_star, "nu": self.nu,
               "kernel": kernel}
        if self.flags is not None:
            out.update(self.flags.to_dict())
        return out


def scan_bound(P: MatrixPolynomial, Lam: MeasureMatrix) -> int:
    """Smallest ``k`` beyond which the symbol is provably nonsingular.

    Uses ``sigma_min(P(ik)) >= sigma_min(A_m) k^m - sum_{j<m} |A_j| k^j`` and
    the total-variation bound on the measure term.
    """
    tv = total_variation_bound(Lam)
    lead = np.linalg.svd(P.coeffs[-1], compute_uv=False)[-1]
    lower_norms = [np.linalg.norm(P.coeffs[j], 2) for j in range(P.degree)]
    k = 1
    while k <= _HARD_CAP:
        bound = lead * float(k) ** P.degree - sum(
            a * float(k) ** j for j, a in enumerate(lower_norms))
        if bound > tv + 1.0:
            return k
        k += 1
    raise ScanBoundExceeded("resonance scan bound exceeds 10^6; rescale the system")


def resonant_set(P: MatrixPolynomial, Lam: MeasureMatrix,
                 tol: float = 1e-9) -> ResonanceReport:
    """Scan ``|k| <= k_star`` for singular symbols and extract kernels.

    A mode is resonant when ``sigma_min(L_k) < tol (1 + |L_k|)``.  Only
    ``k >= 0`` is scanned; negative modes follow by conjugation.
    """
    k_star = scan_bound(P, Lam)
    modes = {}
    for k in range(0, k_star + 1):
        L = symbol(P, Lam, k)
        sig = np.linalg.svd(L, compute_uv=False)
        if sig[-1] < tol * (1.0 + sig[0]):
            nu, theta, _ = kernel_data(L, tol)
            modes[k] = ResonantMode(k, L, float(sig[-1]), nu, theta)
    return ResonanceReport(P=P, Lam=Lam, tol=tol, k_star=k_star, modes=modes)


def check_linear_conditions(report: ResonanceReport, Psi: MeasureMatrix,
                            angle_tol: float = 1e-8,
                            eig_tol: float = 1e-10) -> ConditionFlags:
    """Evaluate the four structural conditions on the resonant modes.

    L1: the mean mode is nonsingular.  L2: at each resonant ``k`` the kernel
    of ``L_k`` equals the kernel of ``L_k^*`` (normality of the defect),
    measured through principal angles.  L3: the deviation transform
    ``psihat(k)`` is nonsingular on the resonant set.  L4: the kernel basis
    vectors are eigenvectors of ``psihat(-k)``.
    """
    wit: dict = {}
    L0 = report.symbol(0)
    sig0 = np.linalg.svd(L0, compute_uv=False)
    l1 = bool(sig0[-1] >= report.tol * (1.0 + sig0[0]))
    wit["L1"] = {"det_L0": _c2pair(np.linalg.det(L0)), "sigma_min_L0": float(sig0[-1])}

    l2 = True
    worst_angle = 0.0
    for k, mode in report.modes.items():
        if k == 0:
            continue
        U, sigma, _ = np.linalg.svd(mode.L)
        left = U[:, len(sigma) - mode.nu:]
        # sin of the largest principal angle between the two kernels
        defect = np.linalg.norm(mode.theta - left @ (left.conj().T @ mode.theta), 2)
        worst_angle = max(worst_angle, float(defect))
        if defect >= angle_tol:
            l2 = False
    wit["L2"] = {"max_angle_sin": worst_angle}

    l3 = True
    l4 = True
    c_psi = None
    min_det = None
    worst_eig = 0.0
    for k, mode in report.modes.items():
        if k == 0:
            continue
        psik = matrix_transform(Psi, k)
        sig = np.linalg.svd(psik, compute_uv=False)
        det = abs(np.linalg.det(psik))
        min_det = det if min_det is None else min(min_det, det)
        c_psi = float(sig[-1]) if c_psi is None else min(c_psi, float(sig[-1]))
        if sig[-1] < report.tol * (1.0 + sig[0]):
            l3 = False
        psim = matrix_transform(Psi, -k)
        for j in range(mode.nu):
            th = mode.theta[:, j]
            v = psim @ th
            mu = np.vdot(th, v)
            defect = float(np.linalg.norm(v - mu * th))
            worst_eig = max(worst_eig, defect)
            if defect >= eig_tol:
                l4 = False
    wit["L3"] = {"min_abs_det_psi": min_det}
    wit["L4"] = {"max_eigen_defect": worst_eig}

    return ConditionFlags(l1, l2, l3, l4, c_psi, wit)


def _c2pair(z):
    return [float(np.real(z)), float(np.imag(z))]


# -- kernel elements ---------------------------------------------------


@dataclass
class KernelElement:
    """Element of the (conjugate-symmetric) kernel in coordinate form.

    ``amps[i]`` is the complex amplitude of slot ``(k, j)`` from
    ``report.kernel_slots()``; the induced real signal is
    ``w(t) = sum 2 Re(amps[i] e^{ikt} theta_{k,j})`` with
    ``||w||_L2^2 = 2 sum |amps|^2``.
    """

    report: ResonanceReport
    amps: np.ndarray

    def __post_init__(self):
        self.amps = np.atleast_1d(np.asarray(self.amps, dtype=complex))
        if self.amps.size != self.report.nu:
            raise DimensionMismatch("amplitude count differs from kernel dimension")

    def norm_l2(self) -> float:
        return float(np.sqrt(2.0) * np.linalg.norm(self.amps))

    def coord_norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def sphere_coords(self) -> np.ndarray:
        """Real parametrization coordinates; unit-norm elements land on the
        sphere of radius sqrt(2)."""
        c = 2.0 * self.amps
        return np.concatenate([c.real, c.imag])

    def to_poly(self, kmax: int | None = None) -> TrigPoly:
        ks = [k for k, _ in self.report.kernel_slots()]
        top = max(ks) if ks else 0
        if kmax is None:
            kmax = top
        if kmax < top:
            raise DimensionMismatch("kmax below the top resonant frequency")
        n = self.report.P.n
        c = np.zeros((kmax + 1, n), dtype=complex)
        for a, (k, j) in zip(self.amps, self.report.kernel_slots()):
            c[k] += a * self.report.modes[k].theta[:, j]
        return TrigPoly(c)

    @staticmethod
    def from_poly(report: ResonanceReport, u: TrigPoly) -> "KernelElement":
        amps = [np.vdot(report.modes[k].theta[:, j], u.coeff(k))
                for k, j in report.kernel_slots()]
        return KernelElement(report, np.asarray(amps, dtype=complex))

    def __mul__(self, s) -> "KernelElement":
        return KernelElement(self.report, self.amps * s)

    __rmul__ = __mul__

    def __neg__(self) -> "KernelElement":
        return KernelElement(self.report, -self.amps)

    def to_dict(self):
        return {"slots": [[k, j] for k, j in self.report.kernel_slots()],
                "amps": [_c2pair(a) for a in self.amps]}


def project_kernel(u: TrigPoly, report: ResonanceReport) -> TrigPoly:
    """Orthogonal projection onto the kernel of the linear part."""
    ks = sorted(report.modes)
    kmax = max(ks) if ks else 0
    c = np.zeros((kmax + 1, u.n), dtype=complex)
    for k in ks:
        th = report.modes[k].theta
        proj = th @ (th.conj().T @ u.coeff(k))
        c[k] = proj.real if k == 0 else proj
    return TrigPoly(c)


def image_defect(phi: TrigPoly, report: ResonanceReport) -> dict:
    """Per resonant frequency, the mass of ``phi`` along the kernel
    directions; zero is necessary for solvability of ``L u = phi``."""
    out = {}
    for k in sorted(report.modes):
        th = report.modes[k].theta
        out[k] = float(np.linalg.norm(th.conj().T @ phi.coeff(k)))
    return out


def apply_symbol(u: TrigPoly, report: ResonanceReport) -> TrigPoly:
    """``L u`` computed mode by mode."""
    out = np.empty_like(u.coeffs)
    for k in range(u.kmax + 1):
        out[k] = report.symbol(k) @ u.coeffs[k]
    return TrigPoly(out)


def right_inverse(phi: TrigPoly, report: ResonanceReport,
                  kmax: int | None = None, image_tol: float = 1e-10) -> TrigPoly:
    """Solve ``L u = phi`` with zero kernel component.

    Nonresonant modes invert directly; resonant modes use the pseudoinverse,
    which selects the minimal-norm (kernel-orthogonal) solution.  Raises
    :class:`NotInImageError` when ``phi`` has kernel-direction mass beyond
    ``image_tol`` relative scale.
    """
    if kmax is None:
        kmax = phi.kmax
    scale = 1.0 + phi.norm_l2()
    out = np.zeros((kmax + 1, phi.n), dtype=complex)
    for k in range(kmax + 1):
        rhs = phi.coeff(k)
        if k in report.modes:
            th = report.modes[k].theta
            defect = np.linalg.norm(th.conj().T @ rhs)
            if defect > image_tol * scale:
                raise NotInImageError(
                    f"mode {k} carries kernel mass {defect:.3e}")
            out[k] = np.linalg.pinv(report.modes[k].L,
                                    rcond=10 * report.tol) @ rhs
        else:
            out[k] = np.linalg.solve(report.symbol(k), rhs)
    return TrigPoly(out)


def right_inverse_gain(report: ResonanceReport, kmax: int) -> float:
    """Reported bound ``kappa`` with ``|(K phi)'|_inf <= kappa |phi|_inf``
    on the ``kmax`` truncation."""
    kappa = 0.0
    for k in range(1, kmax + 1):
        if k in report.modes:
            gain = np.linalg.norm(np.linalg.pinv(report.modes[k].L,
                                                 rcond=10 * report.tol), 2)
        else:
            gain = np.linalg.norm(np.linalg.inv(report.symbol(k)), 2)
        kappa += 2.0 * k * gain
    return float(kappa)
