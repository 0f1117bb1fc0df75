#!/usr/bin/env python3
"""High-precision closed forms frozen into tests/frozen_values.hpp.

Everything here is an independent evaluation of formulas stated in closed
form: horizon radii, surface gravity, horizon angular velocity, indicial
exponents, wall diagnostics, and Legendre second-kind values used to pin the
Miller recurrence.
"""
import mpmath as mp

mp.mp.dps = 50


def kerr_newman(M, a, Q, label, Omega=None, m=0, Rw=None):
    disc = mp.sqrt(M * M - a * a - Q * Q)
    rp, rm = M + disc, M - disc
    ra2 = rp * rp + a * a
    OmegaH = a / ra2
    kappaH = (rp - rm) / (2 * ra2)
    dprime = 2 * rp - 2 * M  # Delta'(r_plus)
    print(f"--- {label} (M={M}, a={a}, Q={Q})")
    print(f"r_plus        = {mp.nstr(rp, 22)}")
    print(f"r_minus       = {mp.nstr(rm, 22)}")
    print(f"Omega_H       = {mp.nstr(OmegaH, 22)}")
    print(f"kappa_H       = {mp.nstr(kappaH, 22)}")
    print(f"Delta'(r+)    = {mp.nstr(dprime, 22)}")
    if Omega is not None:
        sigma_h = (ra2 * Omega - a * m) / dprime
        print(f"sigma_h(Omega={Omega}, m={m}) = {mp.nstr(sigma_h, 22)}")
    if Rw is not None:
        Delta = lambda r: r * r - 2 * M * r + a * a + Q * Q
        f = lambda r: 2 * (r * r * (r - 3 * M) + a * a * (r + M) + 2 * Q * Q * r)
        # nontrapping margin: max of f over [r_plus, Rw]
        rs = [rp + (Rw - rp) * k / mp.mpf(4096) for k in range(4097)]
        margin = max(f(r) for r in rs)
        print(f"margin[{mp.nstr(rp,8)},{Rw}] = {mp.nstr(margin, 22)}")
        print(f"jordan (r+^2+a^2)/Delta(Rw) = {mp.nstr(ra2 / Delta(mp.mpf(Rw)), 22)}")


print("== rotating vacuum reference")
kerr_newman(1, mp.mpf(1) / 2, 0, "kerr a=1/2", Omega=mp.mpf(3) / 10, m=0)
print()
kerr_newman(1, 0, 0, "schwarzschild", Rw=mp.mpf(5) / 2)
print()
kerr_newman(1, mp.mpf(3) / 10, mp.mpf(2) / 5, "kn 0.3/0.4", Omega=mp.mpf(3) / 10, m=1,
            Rw=mp.mpf(5) / 2)
print()

print("== Legendre second kind on the real axis outside the cut")
for xv in (mp.mpf(2), mp.mpf(13) / 10):
    for ell in range(0, 7):
        q = mp.legenq(ell, 0, xv, type=3)
        print(f"Q_{ell}({mp.nstr(xv, 3)}) = {mp.nstr(mp.re(q), 22)}  (im {mp.nstr(mp.im(q), 5)})")
print()

print("== slab Poincare anchor")
lam1 = mp.mpf("0.29095855609")  # converged Legendre-Galerkin value, see slab_lambda1_reference.py
print(f"C_P = 1/lambda_1 = {mp.nstr(1 / lam1, 22)}")
