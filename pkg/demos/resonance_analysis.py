"""Walk through the resonance analysis of three delay systems.

The linear part of a 2pi-periodic functional-differential system acts on
each Fourier mode k through the matrix symbol

    L_k = P(ik) + Lambdahat(-k),

where Lambdahat is the transform of the delay measure matrix.  A
frequency is resonant when L_k is singular; the singular directions span
the kernel that obstructs plain linear solvability and that the
existence machinery has to control.

Run with:  python3 demos/resonance_analysis.py
"""

import numpy as np

from fde import build_example, check_linear_conditions, resonant_set, symbol


def banner(text):
    print()
    print(text)
    print("-" * len(text))


# ---------------------------------------------------------------------
# 1. A forced oscillator with a delayed feedback term.
#
#    u'' + u + tanh(u(t - pi/2)) = cos t
#
# The symbol of the linear part is L_k = -k^2 + 1 (the delay enters only
# through the bounded nonlinearity here), so k = +-1 is resonant: the
# forcing frequency sits exactly on the kernel.
# ---------------------------------------------------------------------

banner("delayed Duffing oscillator")
prob = build_example("duffing-delay")
report = resonant_set(prob.P, prob.Lam)

print(f"resonant frequencies  K = {report.K}")
print(f"kernel dimension      2*nu = {2 * report.nu}")
for k in (0, 1, 2, 3):
    Lk = symbol(prob.P, prob.Lam, k)
    print(f"  |L_{k}| = {abs(Lk[0, 0]):10.4e}")

flags = check_linear_conditions(report, prob.Psi)
print(f"mean mode invertible          {flags.l1}")
print(f"kernel/cokernel aligned       {flags.l2}")
print(f"deviation map nonsingular     {flags.l3}")
print(f"kernel basis psi-eigenvectors {flags.l4}")

# ---------------------------------------------------------------------
# 2. A fourth-order beam mode resonant at two frequencies at once.
#
# P(x) = x^4 + 5x^2 + 4 factors as (x^2 + 1)(x^2 + 4), so both k = 1 and
# k = 2 are singular and the kernel is four dimensional.  Everything in
# the analysis is per-frequency, so nothing special is needed here.
# ---------------------------------------------------------------------

banner("beam with two resonant modes in one component")
prob = build_example("beam")
report = resonant_set(prob.P, prob.Lam)
print(f"resonant frequencies  K = {report.K}")
for k, mode in sorted(report.modes.items()):
    print(f"  k = {k}:  sigma_min(L_k) = {mode.sigma_min:.2e}, "
          f"nu_k = {mode.nu}")

# ---------------------------------------------------------------------
# 3. Distributed memory tuned to a chosen frequency.
#
# A sine-shaped memory density on [-pi/m, 0] can be weighted so that the
# transform cancels P(ik) exactly at k = m.  The resonant frequency
# follows the tuning parameter, which is a good sanity check that the
# measure transforms are computed and not pattern-matched.
# ---------------------------------------------------------------------

banner("distributed sine memory, tunable resonance")
for m in (1, 2, 3):
    prob = build_example("distributed-sine", m=m)
    report = resonant_set(prob.P, prob.Lam)
    sig = report.modes[m].sigma_min
    print(f"  m = {m}:  K = {report.K},  sigma_min(L_{m}) = {sig:.2e}")

print()
print("The scan is certified finite: beyond the Fourier tail bound on the")
print("measures, |L_k| grows like the leading power of P and no further")
print("singular frequencies can occur.")
