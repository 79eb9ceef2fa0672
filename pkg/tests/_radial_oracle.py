"""Independent reference for int_0^inf (1-cos c(r))/r^2 dr, c(r)=sum p_j r^{a_j}.

Method: compensated scipy quadrature on [0,1]; exact 1/r^2 mass on [1,inf);
the cosine part is integrated in phase space t = c(r) piecewise between
stationary points (scipy QAWO with checked error), and the final monotone
piece to infinity is summed over half-periods with alternating-series
acceleration (mpmath nsum).  Entirely different machinery from the package
kernels (no integration by parts, no boundary-coefficient expansions).
"""
import numpy as np
import mpmath as mp
from scipy.integrate import quad
from scipy.optimize import brentq


def _crits(c1, lo=1.0, hi=1e14, n=8000):
    us = np.linspace(np.log(lo), np.log(hi), n)
    rs = np.exp(us)
    vals = np.array([c1(r) for r in rs])
    out = []
    for i in range(len(rs) - 1):
        if vals[i] * vals[i + 1] < 0:
            out.append(brentq(c1, rs[i], rs[i + 1], xtol=1e-300, rtol=1e-15))
    return sorted(out)


def ref_cos(p, a, tol=1e-10):
    c = lambda r: float(sum(pj * r**aj for pj, aj in zip(p, a)))
    c1 = lambda r: float(sum(pj * aj * r ** (aj - 1.0) for pj, aj in zip(p, a)))
    head = quad(lambda r: (1 - np.cos(c(r))) / r**2 if r > 0 else 0.0,
                0, 1, limit=500, epsabs=0.1 * tol, epsrel=1e-13)[0]
    total = head + 1.0
    crits = _crits(c1)
    pieces = [1.0] + crits

    def invert(t, A, B):
        f = lambda r: c(r) - t
        fa, fb = f(A), f(B)
        if fa == 0.0:
            return A
        if fb == 0.0:
            return B
        if fa * fb > 0:
            return A if abs(fa) < abs(fb) else B
        return brentq(f, A, B, xtol=1e-300, rtol=1e-15)

    osc = 0.0
    # bounded monotone pieces between stationary points
    for A, B in zip(pieces[:-1], pieces[1:]):
        A2 = A * (1 + 1e-9) if A in crits else A
        B2 = B * (1 - 1e-9)
        cA, cB = c(A2), c(B2)
        lo, hi = (cA, cB) if cA < cB else (cB, cA)
        if hi - lo < 1e-9:
            continue
        w = lambda t: 1.0 / (invert(t, A2, B2) ** 2 * abs(c1(invert(t, A2, B2))))
        val, aerr = quad(w, lo, hi, weight='cos', wvar=1.0, limit=100000,
                         epsabs=0.1 * tol, epsrel=1e-11)
        if aerr > 10 * tol:
            raise RuntimeError(f"piece [{A},{B}] error {aerr}")
        osc += val
    # unbounded final piece: alternating half-period series in phase space
    A = (2.0 * crits[-1]) if crits else 1.0
    A2 = A
    sgn = 1.0 if c1(A2 * 2) > 0 else -1.0  # direction of the phase at infinity
    t_of = lambda r: sgn * c(r)

    def rt(t):
        B = A2 * 2.0
        while t_of(B) < t:
            B *= 2.0
        return brentq(lambda r: t_of(r) - t, A2, B, xtol=1e-300, rtol=1e-15)

    w = lambda t: 1.0 / (rt(t) ** 2 * abs(c1(rt(t))))
    T0 = t_of(A2)
    k0 = int(np.ceil(T0 / np.pi))
    tstar = k0 * np.pi
    # [c(last piece end), T0]: bridge between the bounded pieces and A2
    if crits:
        Blast = crits[-1] * (1 + 1e-9)
        cA, cB = sgn * c(Blast), T0
        lo, hi = (cA, cB) if cA < cB else (cB, cA)
        if hi - lo > 1e-9:
            wb = lambda t: 1.0 / (invert(sgn * t, Blast, A2) ** 2
                                  * abs(c1(invert(sgn * t, Blast, A2))))
            val, aerr = quad(wb, lo, hi, weight='cos', wvar=1.0, limit=100000,
                             epsabs=0.1 * tol, epsrel=1e-11)
            if aerr > 10 * tol:
                raise RuntimeError(f"bridge error {aerr}")
            osc += val
    # partial half period [T0, tstar]
    val, aerr = quad(lambda t: w(t) * np.cos(t), T0, tstar,
                     limit=200, epsabs=0.1 * tol, epsrel=1e-11)
    osc += val

    def term(k):
        kk = int(k)
        lo = tstar + kk * np.pi
        v = quad(lambda t: w(t) * np.cos(t), lo, lo + np.pi,
                 limit=200, epsabs=0.05 * tol, epsrel=1e-11)[0]
        return mp.mpf(v)

    osc += float(mp.nsum(term, [0, mp.inf], method='a'))
    return total - osc
