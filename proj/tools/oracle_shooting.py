"""Reference shooting roots with scipy, used to freeze regression baselines.

u' = phi_inv(v / r^(N-1)),  v' = -r^(N-1) * lam * a(r) * g(u),  (u, v)(0) = (c, 0).
Roots of c -> u'(R) are bracketed on a scan and refined with brentq.
"""

import argparse
import json
import math

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq


def phi_inv(y):
    return y / math.sqrt(1.0 + y * y)


def figure1():
    a = lambda r: math.cos(abs(r - 5.0) ** 1.5 + 1.0)
    g = lambda u: u * u + u ** 3
    return dict(N=2, R=5.0, lam=0.1, a=a, g=g, breaks=[])


def desk(lam):
    a = lambda r: 1.0 if 1.0 <= r < 2.0 else -1.0
    g = lambda u: u * u
    return dict(N=1, R=3.0, lam=lam, a=a, g=g, breaks=[1.0, 2.0])


def shoot(p, c, rtol=1e-12, atol=1e-14, r0_rel=1e-7):
    N, R, lam, a, g = p["N"], p["R"], p["lam"], p["a"], p["g"]

    def f(u):
        return lam * g(u) if u >= 0 else -u

    def rhs_on(lo, hi):
        mid = 0.5 * (lo + hi)
        sgn = a(mid)

        def rhs(r, x):
            rp = r ** (N - 1)
            ar = a(r) if p["breaks"] == [] else sgn
            fu = lam * ar * g(x[0]) if x[0] >= 0 else -x[0]
            return [phi_inv(x[1] / rp), -rp * fu]

        return rhs

    r = 0.0
    x = [c, 0.0]
    if N >= 2:
        r = r0_rel * R
        f0 = lam * a(0.0) * g(c)
        x = [c, -f0 * r ** N / N]
    stops = sorted(set([b for b in p["breaks"] if r < b < R] + [R]))
    for b in stops:
        sol = solve_ivp(rhs_on(r, b), (r, b), x, method="DOP853", rtol=rtol, atol=atol)
        x = list(sol.y[:, -1])
        r = b
    return phi_inv(x[1] / R ** (N - 1))


def roots(p, lo, hi, samples):
    cs = np.geomspace(lo, hi, samples)
    ds = [shoot(p, c) for c in cs]
    out = []
    for k in range(len(cs) - 1):
        if not (math.isfinite(ds[k]) and math.isfinite(ds[k + 1])):
            continue
        if ds[k] == 0.0 or ds[k] * ds[k + 1] < 0:
            out.append(brentq(lambda c: shoot(p, c), cs[k], cs[k + 1], xtol=1e-14, rtol=1e-13))
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--problem", choices=["figure1", "desk"], default="figure1")
    ap.add_argument("--lam", type=float, default=4330.451)
    ap.add_argument("--lo", type=float, default=0.5)
    ap.add_argument("--hi", type=float, default=12.0)
    ap.add_argument("--samples", type=int, default=40)
    args = ap.parse_args()
    p = figure1() if args.problem == "figure1" else desk(args.lam)
    print(json.dumps({"problem": args.problem, "roots": roots(p, args.lo, args.hi, args.samples)}, indent=2))


if __name__ == "__main__":
    main()
