"""Independent reference computations used by the test suite.

Nothing here imports solver internals beyond plain data containers: the
transform oracles integrate numerically with adaptive and fixed-order
quadrature, and the delay-equation oracle integrates the governing
equation in the time domain with a standard ODE stepper.  Running this
module prints the frozen constants embedded in the tests.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad, solve_ivp

TWO_PI = 2.0 * np.pi


# -- measure transforms ------------------------------------------------


def transform_quad(measure, k: int, epsabs: float = 1e-13) -> complex:
    """Adaptive quadrature value of int e^{-iks} dmu(s).

    Atoms are summed exactly; each density piece is integrated with
    Gauss-Kronrod on its real and imaginary parts separately.
    """
    out = 0.0 + 0.0j
    for theta, w in measure.atoms:
        out += w * np.exp(-1j * k * theta)
    for d in measure.densities:
        fre = lambda s: d.profile(s) * np.cos(k * s)
        fim = lambda s: -d.profile(s) * np.sin(k * s)
        re, _ = quad(fre, d.a, d.b, epsabs=epsabs, epsrel=1e-13, limit=400)
        im, _ = quad(fim, d.a, d.b, epsabs=epsabs, epsrel=1e-13, limit=400)
        out += re + 1j * im
    return out


def transform_gauss(measure, ks, order: int = 256) -> np.ndarray:
    """Fixed-order Gauss-Legendre transform, vectorized over frequencies.

    Exactness degrades for |k| * (b - a) approaching the rule order; with
    order 256 and |k| <= 32 on subintervals of length <= 2 pi the error
    is far below 1e-9, which is what the bulk sweeps assert.
    """
    ks = np.asarray(ks)
    out = np.zeros(ks.shape, dtype=complex)
    for theta, w in measure.atoms:
        out += w * np.exp(-1j * ks * theta)
    x, wts = leggauss(order)
    for d in measure.densities:
        mid, half = 0.5 * (d.a + d.b), 0.5 * (d.b - d.a)
        s = mid + half * x
        vals = d.profile(s) * half * wts
        out += np.exp(-1j * np.outer(ks, s)) @ vals
    return out


# -- method of steps delay integrator ----------------------------------


def dde_second_order(alpha0: float, tau: float, gfun, pfun, history,
                     u0: float, du0: float, t_end: float = TWO_PI,
                     rtol: float = 1e-11, atol: float = 1e-12):
    """Integrate u'' + alpha0 u + gfun(u(t - tau)) = pfun(t) by steps.

    ``history`` supplies u on [-tau, 0]; the delayed value inside window
    j comes from the dense output of window j - 1.  Returns a callable
    evaluating u on [0, t_end].
    """
    segments = []          # (t_lo, t_hi, dense sol) per window

    def delayed(t):
        s = t - tau
        if s <= 0.0:
            return history(s)
        for lo, hi, sol in segments:
            if lo - 1e-12 <= s <= hi + 1e-12:
                return float(sol.sol(np.clip(s, lo, hi))[0])
        raise RuntimeError(f"delayed time {s} not covered yet")

    def rhs(t, y):
        return [y[1], pfun(t) - alpha0 * y[0] - gfun(delayed(t))]

    n_win = int(np.ceil(t_end / tau - 1e-12))
    y = [u0, du0]
    t_lo = 0.0
    for j in range(n_win):
        t_hi = min((j + 1) * tau, t_end)
        sol = solve_ivp(rhs, (t_lo, t_hi), y, method="DOP853",
                        dense_output=True, rtol=rtol, atol=atol,
                        max_step=tau / 8)
        if not sol.success:
            raise RuntimeError(f"integration failed in window {j}: "
                               f"{sol.message}")
        segments.append((t_lo, t_hi, sol))
        y = sol.y[:, -1]
        t_lo = t_hi

    def u_of_t(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty_like(t)
        for i, ti in enumerate(t):
            for lo, hi, sol in segments:
                if lo - 1e-12 <= ti <= hi + 1e-12:
                    out[i] = sol.sol(np.clip(ti, lo, hi))[0]
                    break
            else:
                raise RuntimeError(f"time {ti} outside integrated range")
        return out

    return u_of_t


# -- closed-form scalars -----------------------------------------------


def tail_constant_quad() -> float:
    """C in E(s)^2 ~ C / s for the odd saturating profile with unit limits.

    Two sign changes of sqrt(2) cos on the period each contribute a
    stretched copy of int (sgn y - tanh y)^2 dy, scaled by 1/(s sqrt 2),
    averaged over the period:   C = int_R (sgn - tanh)^2 / (sqrt 2 pi).
    """
    val, _ = quad(lambda y: (1.0 - np.tanh(y)) ** 2, 0.0, 60.0,
                  epsabs=1e-14, epsrel=1e-13, limit=200)
    return 2.0 * val / (np.sqrt(2.0) * np.pi)


def tail_constant_closed() -> float:
    """Same constant via int_0^inf (1 - tanh)^2 = 2 ln 2 - 1."""
    return (4.0 * np.log(2.0) - 2.0) / (np.sqrt(2.0) * np.pi)


def arcsine_measure(eps: float) -> float:
    """Normalized measure of {|sqrt(2) cos t| < eps} on the circle."""
    return (2.0 / np.pi) * np.arcsin(eps / np.sqrt(2.0))


def square_wave_coefficient() -> float:
    """Normalized first Fourier coefficient modulus of sgn(cos t)."""
    val, _ = quad(lambda t: np.sign(np.cos(t)) * np.cos(t), 0.0, TWO_PI,
                  epsabs=1e-14, limit=200)
    return val / TWO_PI


if __name__ == "__main__":
    np.set_printoptions(precision=17)
    print("tail constant (quad)       ", f"{tail_constant_quad():.10f}")
    print("tail constant (closed form)", f"{tail_constant_closed():.10f}")
    for s in (1e3, 1e4):
        print(f"predicted E({s:.0e})        ",
              f"{np.sqrt(tail_constant_closed() / s):.10f}")
    print("arcsine measure eps=0.1    ", f"{arcsine_measure(0.1):.10f}")
    print("arcsine measure eps=0.2    ", f"{arcsine_measure(0.2):.10f}")
    print("arcsine measure eps=0.05   ", f"{arcsine_measure(0.05):.10f}")
    print("square wave |ghat(1)|      ",
          f"{square_wave_coefficient():.10f}",
          " (2/pi =", f"{2.0 / np.pi:.10f})")
