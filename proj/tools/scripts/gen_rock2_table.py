#!/usr/bin/env python3
"""Generate the ROCK2 recursion-coefficient table.

For each degree s the stability polynomial is R_s(z) = w(z) P_{s-2}(z) with
w(z) = 1 + 2 sigma z + tau z^2 and P_j orthogonal on [-ell, 0] with respect to
w(z)^2 / sqrt(1 - x^2), x = 1 + 2 z / ell.  sigma and tau follow from
R'(0) = R''(0) = 1 and are iterated to a fixed point together with the weight.
ell is the largest interval for which every interior extremum of |R_s| stays
below the damping level ETA.

The recurrence is continued two degrees past s-2 (up to P_s) so the table also
serves the l = 2 variant of PIROCK.

Output record (one line per degree, whitespace separated):
    s m mu_1..mu_m nu_2..nu_m kappa_2..kappa_m sigma tau
with m = s and P_j(z) = mu_j z P_{j-1} - nu_j P_{j-1} - kappa_j P_{j-2}.
"""
import argparse
import sys

import numpy as np

ETA = 0.95


def fixed_point(s, ell, iters=2000, tol=1e-15):
    n = s - 2
    m_quad = 4 * s + 40
    k = np.arange(m_quad)
    xq = np.cos((2 * k + 1) * np.pi / (2 * m_quad))
    zq = ell * (xq - 1) / 2
    sig, tau = 0.4, 0.3
    for _ in range(iters):
        wq = (1 + 2 * sig * zq + tau * zq ** 2) ** 2
        a, b = [], []
        q_prev = np.zeros(m_quad)
        q = np.ones(m_quad)
        nrm_prev = None
        for j in range(n + 2):
            nrm = np.sum(wq * q * q)
            a.append(np.sum(wq * xq * q * q) / nrm)
            b.append(0.0 if j == 0 else nrm / nrm_prev)
            q_prev, q, nrm_prev = q, (xq - a[j]) * q - b[j] * q_prev, nrm
        c = 2 / ell
        v, d1, d2 = [1.0], [0.0], [0.0]
        for j in range(n + 2):
            vp = v[j - 1] if j > 0 else 0.0
            d1p = d1[j - 1] if j > 0 else 0.0
            d2p = d2[j - 1] if j > 0 else 0.0
            v.append((1 - a[j]) * v[j] - b[j] * vp)
            d1.append(c * v[j] + (1 - a[j]) * d1[j] - b[j] * d1p)
            d2.append(2 * c * d1[j] + (1 - a[j]) * d2[j] - b[j] * d2p)
        p1 = d1[n] / v[n]
        p2 = d2[n] / v[n]
        nsig = (1 - p1) / 2
        ntau = 0.5 - 2 * nsig * p1 - p2 / 2
        done = abs(nsig - sig) < tol and abs(ntau - tau) < tol
        sig, tau = 0.5 * (sig + nsig), 0.5 * (tau + ntau)
        if done:
            break
    return a, b, v, sig, tau


def coefficients(s, ell):
    a, b, v, sig, tau = fixed_point(s, ell)
    m = s
    mu = [0.0] * (m + 1)
    nu = [0.0] * (m + 1)
    kap = [0.0] * (m + 1)
    mu[1] = (2 / ell) / v[1]
    for j in range(1, m):
        mu[j + 1] = (2 / ell) * v[j] / v[j + 1]
        nu[j + 1] = -(1 - a[j]) * v[j] / v[j + 1]
        kap[j + 1] = b[j] * v[j - 1] / v[j + 1]
    return mu, nu, kap, sig, tau


def stability_poly(s, coef, z):
    mu, nu, kap, sig, tau = coef
    p_prev = np.ones_like(z)
    p = 1 + mu[1] * z
    for j in range(2, s - 1):
        p_prev, p = p, mu[j] * z * p - nu[j] * p - kap[j] * p_prev
    return (1 + 2 * sig * z + tau * z * z) * p


def assess(s, ell):
    coef = coefficients(s, ell)
    theta = np.linspace(0.0, np.pi, 200 * s + 1)
    z = np.concatenate([np.linspace(-1.3 * ell, -ell, 4001)[:-1],
                        -ell * (1 - np.cos(theta[::-1])) / 2])
    r = np.abs(stability_poly(s, coef, z))
    bad = z[r > 1 + 1e-12]
    bound = -bad.max() if len(bad) else np.inf
    inside = z > -bound
    idx = np.where((r[1:-1] > r[:-2]) & (r[1:-1] >= r[2:]))[0] + 1
    peak = max((r[i] for i in idx if inside[i]), default=0.0)
    return bound, peak, coef


def best_interval(s):
    lo, hi = 0.3 * s * s, 0.83 * s * s
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        bound, peak, _ = assess(s, mid)
        if peak <= ETA and bound >= 0.99 * mid:
            lo = mid
        else:
            hi = mid
    return lo


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--smin", type=int, default=3)
    ap.add_argument("--smax", type=int, default=200)
    ap.add_argument("-o", "--output", default="-")
    args = ap.parse_args()
    out = sys.stdout if args.output == "-" else open(args.output, "w")
    out.write("# ROCK2 recursion coefficients, damping %.2f\n" % ETA)
    out.write("# s m mu_1..mu_m nu_2..nu_m kappa_2..kappa_m sigma tau\n")
    for s in range(args.smin, args.smax + 1):
        ell = best_interval(s)
        bound, peak, (mu, nu, kap, sig, tau) = assess(s, ell)
        vals = [s, s] + mu[1:] + nu[2:] + kap[2:] + [sig, tau]
        out.write(" ".join([str(s), str(s)] + ["%.17g" % x for x in vals[2:]]) + "\n")
        print("s=%d ell/s^2=%.5f bound/s^2=%.5f peak=%.4f" % (s, ell / s / s, bound / s / s, peak),
              file=sys.stderr)
    out.flush()


if __name__ == "__main__":
    main()
