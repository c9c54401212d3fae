"""Compute a periodic solution by spectral harmonic balance.

The solver truncates the unknown to a trigonometric polynomial, assembles
the residual of the full functional-differential equation in coefficient
space, and drives it to zero with a damped Newton iteration seeded from
the resonant kernel.  This demo solves the delayed Duffing oscillator,
inspects the harmonic content, and stress-tests the certificate that the
reported residual actually measures.

Run with:  python3 demos/periodic_solve.py
"""

import numpy as np

from fde import (SolveConfig, TrigPoly, assemble_residual, build_example,
                 solve_best, symbol, verify_pointwise)


def banner(text):
    print()
    print(text)
    print("-" * len(text))


banner("solving  u'' + u + tanh(u(t - pi/2)) = cos t")
prob = build_example("duffing-delay")
res = solve_best(prob)

print(f"converged            {res.converged}")
print(f"iterations           {res.iterations}")
print(f"coefficient residual {res.coeff_residual:.3e}")
print(f"pointwise residual   {res.pointwise_residual:.3e}")

banner("harmonic content")
u = res.u
amps = 2.0 * np.abs(u.coeffs[:, 0])
amps[0] = abs(u.coeffs[0, 0].real)
print(f"{'k':>3} {'amplitude':>12}")
for k in range(9):
    marker = "" if amps[k] > 1e-12 else "   (absent)"
    print(f"{k:3d} {amps[k]:12.3e}{marker}")
print()
print("Even harmonics vanish: the equation maps odd functions to odd")
print("functions once the phase of the kernel component is fixed.")

banner("independent verification on a fine grid")
for M in (512, 1024, 2048):
    print(f"  M = {M:5d}:  sup residual = {verify_pointwise(prob, u, M):.3e}")

banner("sensitivity at the truncation edge")
kmax = u.kmax
Lk = abs(symbol(prob.P, prob.Lam, kmax)[0, 0])
pert = u + TrigPoly.cosine(kmax, amplitude=1e-3, kmax=kmax)
grown = assemble_residual(prob, pert).norm_l2()
print(f"adding 1e-3 cos({kmax} t) to the solution:")
print(f"  residual jumps to {grown:.3e}")
print(f"  |L_{kmax}| * 1e-3 / sqrt(2) = {Lk * 1e-3 / np.sqrt(2):.3e}")
print("The residual sees band-edge defects at full operator strength, so")
print("a small reported residual is meaningful across the whole band.")

banner("truncation study")
prev = None
for kmax in (16, 32, 64):
    r = solve_best(prob, SolveConfig(kmax=kmax))
    drift = "" if prev is None else \
        f"   shift from kmax={prev.u.kmax}: {(r.u - prev.u).norm_l2():.2e}"
    print(f"  kmax = {kmax:3d}:  pointwise residual {r.pointwise_residual:.2e}"
          f"{drift}")
    prev = r
