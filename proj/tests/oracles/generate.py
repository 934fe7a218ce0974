"""Independent reference values frozen into the C++ tests.

Run with python3 (mpmath, scipy, numpy). Each section prints C++ literals.
"""
import itertools
import math
from fractions import Fraction

import mpmath as mp
import numpy as np
from scipy import integrate

mp.mp.dps = 40


def bessel_table():
    pts = [0.1, 0.5, 1.0, 1.645, 2.405, 3.0, 5.5, 10.0]
    print("// x, J0, J1, K0, K1")
    for x in pts:
        print("{%s, %s, %s, %s, %s}," % (x, mp.nstr(mp.besselj(0, x), 20), mp.nstr(mp.besselj(1, x), 20),
                                         mp.nstr(mp.besselk(0, x), 20), mp.nstr(mp.besselk(1, x), 20)))


def lp01_root(v):
    v = mp.mpf(v)
    f = lambda u: u * mp.besselj(1, u) / mp.besselj(0, u) - mp.sqrt(v**2 - u**2) * mp.besselk(1, mp.sqrt(v**2 - u**2)) / mp.besselk(0, mp.sqrt(v**2 - u**2))
    u = mp.findroot(f, (mp.mpf("0.5"), min(v, mp.mpf("2.4048")) - mp.mpf("1e-6")), solver="bisect")
    return u, mp.sqrt(v**2 - u**2)


def roots():
    for v in [1.0, 1.5, 2.0, 2.405]:
        u, w = lp01_root(v)
        print("{%s, %s, %s}," % (v, mp.nstr(u, 20), mp.nstr(w, 20)))


def field(r, u, w, a=1.0):
    x = r / a
    if x <= 1:
        return float(mp.besselj(0, u * x))
    return float(mp.besselj(0, u) / mp.besselk(0, w) * mp.besselk(0, w * x))


def eta(wz, u, w, kscale=0.0, a=1.0):
    u, w = float(u), float(w)
    from scipy.special import j0, k0
    def fib(r):
        x = r / a
        return j0(u * x) if x <= 1 else j0(u) / k0(w) * k0(w * x)
    rmax = 60 * a
    cross = sum(integrate.quad(lambda r: fib(r) * math.exp(-r * r / wz**2) * j0(kscale * r) * r, lo, hi,
                               epsabs=0, epsrel=1e-13, limit=400)[0] for lo, hi in [(0, a), (a, rmax)])
    pf = sum(integrate.quad(lambda r: fib(r)**2 * r, lo, hi, epsabs=0, epsrel=1e-13, limit=400)[0]
             for lo, hi in [(0, a), (a, rmax)])
    return cross**2 / (pf * wz**2 / 4)


def waist_grid(v):
    u, w = lp01_root(v)
    grid = np.linspace(0.5, 2.0, 15001)
    vals = [eta(g, u, w) for g in grid[::50]]
    i = int(np.argmax(vals))
    lo, hi = grid[max(0, 50 * i - 50)], grid[min(len(grid) - 1, 50 * i + 50)]
    fine = np.linspace(lo, hi, 2001)
    vals = [eta(g, u, w) for g in fine]
    j = int(np.argmax(vals))
    print("// V=%s grid optimum w/a, eta: %r %r" % (v, fine[j], vals[j]))


def tilt_2d():
    # Near-cutoff step-index fiber at 1550 nm, a = 5 um, V = 2.405; 2-D Cartesian overlap.
    from scipy.special import j0, k0
    a, lam = 5.0, 1.55
    u, w = (float(x) for x in lp01_root(2.405))
    k = 2 * math.pi / lam
    def fib(r):
        x = r / a
        return j0(u * x) if x <= 1 else j0(u) / k0(w) * k0(w * x)
    # waist from the 1-D optimum
    from scipy.optimize import minimize_scalar
    res = minimize_scalar(lambda wz: -eta(wz, u, w, a=a), bounds=(0.2 * a, 5 * a), method="bounded",
                          options={"xatol": 1e-9})
    wz = res.x
    th = 0.025
    kx = k * math.sin(th)
    R = 40 * a
    re = integrate.dblquad(lambda y, x: fib(math.hypot(x, y)) * math.exp(-(x * x + y * y) / wz**2) * math.cos(kx * x),
                           -R, R, -R, R, epsabs=1e-12, epsrel=1e-10)[0]
    pf = 2 * math.pi * sum(integrate.quad(lambda r: fib(r)**2 * r, lo, hi, epsrel=1e-13, limit=400)[0]
                           for lo, hi in [(0, a), (a, 60 * a)])
    pb = math.pi * wz**2 / 2
    print("// near-cutoff SMF 1550: w_opt %r eta0 %r eta(0.025) 2-D %r" % (wz, -res.fun, re**2 / (pf * pb)))


def binom_pmf(n, p):
    return [Fraction(math.comb(n, k)) * p**k * (1 - p)**(n - k) for k in range(n + 1)]


def cascade_exact(n, M, pi0, D, d, R0=1):
    """Exact enumeration over every link's generation count and distillation outcome."""
    N = 2**n
    gen = binom_pmf(M, pi0)
    caps = []
    c = M
    for i in range(n + 1):
        caps.append(c)
        if D[i]:
            c //= 2
    end = {}
    completion = Fraction(0)
    for ys in itertools.product(range(M + 1), repeat=N):
        pr = Fraction(1)
        for y in ys:
            pr *= gen[y]
        if pr == 0:
            continue
        states = {tuple(ys): pr}
        for i in range(n + 1):
            nxt = {}
            for seg, q in states.items():
                if any(v < R0 for v in seg):
                    continue
                if D[i]:
                    branches = {(): Fraction(1)}
                    for v in seg:
                        nb = {}
                        for pre, qq in branches.items():
                            for x, px in enumerate(binom_pmf(v // 2, d[i])):
                                nb[pre + (x,)] = nb.get(pre + (x,), 0) + qq * px
                        branches = nb
                else:
                    branches = {tuple(seg): Fraction(1)}
                for out, qq in branches.items():
                    if i == n:
                        key = out
                    else:
                        key = tuple(min(min(out[2 * s], out[2 * s + 1]), caps[i + 1]) for s in range(len(out) // 2))
                    nxt[key] = nxt.get(key, 0) + q * qq
            states = nxt
        for seg, q in states.items():
            completion += q
            end[seg[0]] = end.get(seg[0], 0) + q
    return completion, {k: v / completion for k, v in sorted(end.items())}


def cascades():
    for cfg in [(1, 4, Fraction(3, 10), (0, 0), (1, 1)),
                (2, 4, Fraction(3, 10), (1, 0, 0), (Fraction(9, 10), 1, 1)),
                (2, 3, Fraction(1, 2), (0, 0, 0), (1, 1, 1))]:
        comp, end = cascade_exact(*cfg)
        mean = sum(k * v for k, v in end.items())
        print("// n=%d M=%d pi0=%s D=%s d=%s" % (cfg[0], cfg[1], cfg[2], cfg[3], [str(x) for x in cfg[4]]))
        print("completion %.17g mean_end %.17g" % (comp, comp * mean))
        print("end pmf", ", ".join("%.17g" % float(end.get(k, 0)) for k in range(cfg[1] + 1)))


def schedule_trace():
    """Level-by-level fidelity pipeline, n = 3, eps_g = 1e-2, f_th = 0.95, T2 = 1 s, l0 = 2 km."""
    eps, xi, t2, l0, v, fth, n = 1e-2, 1e-2 / 4, 1.0, 2.0, 2e5, 0.95, 3
    def dephase(s, t):
        lam = (1 + math.exp(-2 * t / t2)) / 2
        a, b, c, d = s
        return [lam * a + (1 - lam) * b, lam * b + (1 - lam) * a, lam * c + (1 - lam) * d, lam * d + (1 - lam) * c]
    def depol(s, p):
        return [(1 - p) * x + p / 4 for x in s]
    def swap(s1, s2):
        a1, b1, c1, d1 = s1
        a2, b2, c2, d2 = s2
        # XOR convolution written out by hand
        out = [a1 * a2 + b1 * b2 + c1 * c2 + d1 * d2,
               a1 * b2 + b1 * a2 + c1 * d2 + d1 * c2,
               a1 * c2 + c1 * a2 + b1 * d2 + d1 * b2,
               a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2]
        out = depol(out, eps)
        a, b, c, d = out
        k, o = (1 - xi)**2, xi * (1 - xi)
        return [k * a + o * c + o * b + xi * xi * d,
                k * b + o * d + o * a + xi * xi * c,
                k * c + o * a + o * d + xi * xi * b,
                k * d + o * b + o * c + xi * xi * a]
    def dejmps(s1, s2):
        a1, b1, c1, d1 = depol(s1, eps)
        a2, b2, c2, d2 = depol(s2, eps)
        co = [a1 * a2 + d1 * d2, a1 * d2 + d1 * a2, c1 * c2 + b1 * b2, c1 * b2 + b1 * c2]
        an = [a1 * c2 + d1 * b2, a1 * b2 + d1 * c2, c1 * a2 + b1 * d2, c1 * d2 + b1 * a2]
        g, h = (1 - xi)**2 + xi**2, 2 * xi * (1 - xi)
        acc = [g * x + h * y for x, y in zip(co, an)]
        tot = sum(acc)
        return [x / tot for x in acc], tot
    a0 = 1 - 1.25 * eps
    s = [a0] + [(1 - a0) / 3] * 3
    for i in range(n + 1):
        t = l0 / v * 2**i
        s = dephase(s, t)
        flag, dsucc = 0, 1.0
        if i < n and s[0] < fth:
            s, dsucc = dejmps(s, s)
            flag = 1
        print("level %d D=%d d=%.17g F=%.17g" % (i, flag, dsucc, s[0]))
        if i < n:
            s = swap(s, s)


if __name__ == "__main__":
    print("== bessel"); bessel_table()
    print("== roots"); roots()
    print("== waist"); waist_grid(2.405); waist_grid(2.0)
    print("== tilt"); tilt_2d()
    print("== cascade"); cascades()
    print("== schedule"); schedule_trace()
