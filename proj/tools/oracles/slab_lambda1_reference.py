#!/usr/bin/env python3
"""Reference eigenvalues for the rotating strict-slab anchor case.

Legendre-Galerkin discretization of

    -d_r(Delta_r d_r u) - d_x(Delta_x d_x u) = lambda A u   (Neumann, m = 0)

on [3,5] x [-1/2,1/2] for M=1, a=1/2.  Spectral accuracy in the polynomial
degree; convergence across N is printed as evidence.  The converged values are
frozen into tests/frozen_values.hpp by hand.
"""
import numpy as np
from scipy.linalg import eigh

M, A_SPIN = 1.0, 0.5
R0, R1, X0, X1 = 3.0, 5.0, -0.5, 0.5


def delta_r(r):
    return r * r - 2.0 * M * r + A_SPIN * A_SPIN


def delta_x(x):
    return 1.0 - x * x


def coef_A(r, x):
    ra = r * r + A_SPIN * A_SPIN
    s2 = 1.0 - x * x
    return ra * ra / delta_r(r) - A_SPIN * A_SPIN * s2 * s2 / delta_x(x)


def legendre_vals(n_modes, xi):
    P = np.zeros((n_modes, xi.size))
    dP = np.zeros_like(P)
    P[0] = 1.0
    if n_modes > 1:
        P[1] = xi
        dP[1] = 1.0
    for k in range(1, n_modes - 1):
        P[k + 1] = ((2 * k + 1) * xi * P[k] - k * P[k - 1]) / (k + 1)
        dP[k + 1] = dP[k - 1] + (2 * k + 1) * P[k]
    return P, dP


def solve(N, nq=None):
    nq = nq or N + 12
    xi, wq = np.polynomial.legendre.leggauss(nq)
    # maps: r = c_r + s_r xi, x = c_x + s_x eta
    sr, cr = (R1 - R0) / 2, (R1 + R0) / 2
    sx, cx = (X1 - X0) / 2, (X1 + X0) / 2
    r = cr + sr * xi
    x = cx + sx * xi
    Pr, dPr = legendre_vals(N + 1, xi)
    # 1D building blocks (w.r.t. physical measure)
    def blocks(weight_vals, scale):
        mass = (Pr * (weight_vals * wq)) @ Pr.T * scale
        stiff = (dPr * (weight_vals * wq)) @ dPr.T / scale
        return mass, stiff

    # 2D tensored assembly; A(r, x) does not separate, so quadrature is 2D
    n = (N + 1) ** 2
    S = np.zeros((n, n))
    Mm = np.zeros((n, n))
    # radial-derivative part: Delta_r(r) separates
    mass_x_plain = (Pr * wq) @ Pr.T * sx
    stiff_r = (dPr * (delta_r(r) * wq)) @ dPr.T / sr
    S += np.kron(mass_x_plain, stiff_r)  # index (jx, ir) fastest ir
    mass_r_plain = (Pr * wq) @ Pr.T * sr
    stiff_x = (dPr * (delta_x(x) * wq)) @ dPr.T / sx
    S += np.kron(stiff_x, mass_r_plain)
    # mass with the nonseparating weight A
    Avals = coef_A(r[:, None].repeat(nq, 1), x[None, :].repeat(nq, 0))
    # Mm[(jx i r),(lx kr)] = sum_q wr wq A P_i P_k (r) P_j P_l (x) sr sx
    PW = Pr * wq
    del PW
    for j in range(N + 1):
        for l in range(N + 1):
            # block_{ik} = sum_{qr,qx} wq_r wq_x A P_i(qr) P_k(qr) P_j(qx) P_l(qx)
            wmat = (wq[:, None] * wq[None, :]) * Avals * (Pr[j][None, :] * Pr[l][None, :])
            wrow = wmat.sum(axis=1)
            block = (Pr * wrow) @ Pr.T
            Mm[j * (N + 1):(j + 1) * (N + 1), l * (N + 1):(l + 1) * (N + 1)] += block * sr * sx
    vals = eigh(S, Mm, eigvals_only=True)
    return vals


def main():
    for N in (12, 16, 20, 24):
        vals = solve(N)
        print(f"N={N:3d}  " + "  ".join(f"{v:.12e}" for v in vals[:6]))


if __name__ == "__main__":
    main()
