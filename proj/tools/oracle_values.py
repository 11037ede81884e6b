#!/usr/bin/env python3
"""Independent reference values for the C++ unit and acceptance tests.

Every constant the tests pin down is computed here from scipy/mpmath (or by
hand-traceable arithmetic) rather than from the library under test, so the
tests stay meaningful. Run and paste the printed values; keep 12 significant
digits.
"""

import numpy as np
from scipy import integrate, special, stats
import mpmath as mp

mp.mp.dps = 30

P = lambda tag, val: print(f"{tag:58s} {val:.12g}")


def lower_inc_gamma(z, a):
    return float(special.gammainc(a, z) * special.gamma(a))


def beta_mix_gamma(u, kappa):
    """gamma(u) = u*(-log u)^(1+kappa) / (kappa * ig(-log u, 1+kappa))."""
    if u >= 1.0:
        return (1.0 + kappa) / kappa
    if u <= 0.0:
        return 0.0
    z = -np.log(u)
    return u * z ** (1.0 + kappa) / (kappa * lower_inc_gamma(z, 1.0 + kappa))


print("== lower incomplete gamma ig(z,a) = int_0^z t^(a-1)e^-t dt ==")
for (z, a) in [(0.5, 1.5), (1.0, 2.0), (2.6, 0.7), (8.0, 3.0),
               (40.0, 1.5), (0.001, 2.0), (12.0, 7.5), (3.617354, 2.0)]:
    P(f"ig({z}, {a})", lower_inc_gamma(z, a))

print()
print("== beta-mixture calibrator gamma_kappa(u) ==")
e1 = float(np.exp(-1.0))
for kappa in (0.5, 1.0, 2.0):
    for u in (1e-6, 0.01, 0.1, e1, 0.5, 0.9, 0.999, 1.0):
        P(f"gamma(kappa={kappa}, u={u:.9g})", beta_mix_gamma(u, kappa))
# hand check: kappa=1, u=e^-1: ig(1,2) = 1-2e^-1, gamma = e^-1/(1-2e^-1)
P("hand gamma(1, e^-1) = e^-1/(1-2e^-1)", e1 / (1.0 - 2.0 * e1))

print()
print("== admissibility: int_0^1 du/gamma(u), z-substitution, mpmath ==")
for kappa in (0.5, 1.0, 2.0):
    k = mp.mpf(kappa)
    f = lambda z: k * mp.gammainc(1 + k, 0, z) * z ** (-(1 + k))
    val = mp.quad(f, [0, 1, 10, 100, mp.inf])
    P(f"int 1/gamma, kappa={kappa}", float(val))
    # analytic tail check: int_Z^inf ~= Gamma(1+k) Z^-k
    Z = mp.mpf(46.0)
    tail = mp.quad(f, [Z, 100, 1000, mp.inf])
    P(f"tail below s=e^-46, kappa={kappa}", float(tail))
    P(f"analytic tail Gamma(1+k)*46^-k, kappa={kappa}",
      float(mp.gamma(1 + k) * Z ** (-k)))

print()
print("== chi-square_1 / normal CDF constants ==")
q_of = lambda t, K: 1.0 - stats.chi2.cdf(t * t / K, df=1)
for K in (0.1, 0.2, 0.4, 0.8):
    P(f"gaussian_surprise q_K(0.7), K={K}", q_of(0.7, K))
P("gaussian_surprise q_1(1.96) (= psi(1.96))", q_of(1.96, 1.0))
P("gaussian_surprise q_1(1.0)", q_of(1.0, 1.0))
P("gaussian_surprise q_0.1(0.7)", q_of(0.7, 0.1))

print()
print("== rho = 1/gamma(q) at kappa=1 for the growth-curve prior values ==")
for K in (0.1, 0.2, 0.4, 0.8):
    q = q_of(0.7, K)
    g = beta_mix_gamma(q, 1.0)
    P(f"K={K}: q={q:.9f}  gamma_1(q)", g)
    P(f"K={K}: rho(0.7) = 1/gamma", 1.0 / g)
    P(f"K={K}: log rho(0.7)", float(np.log(1.0 / g)))
for q in (0.05, 0.1, 0.5, 1.0):
    g = beta_mix_gamma(q, 1.0)
    P(f"ware joint levels: gamma_1({q})", g)
    P(f"ware joint levels: rho = 1/gamma_1({q})", 1.0 / g)

print()
print("== Savage-Dickey Gaussian e-process (corrected direction) ==")


def sd_log_e(n, zbar, theta, v):
    return (-0.5 * np.log(n * v + 1.0)
            + 0.5 * n * (theta - zbar) ** 2
            - 0.5 * (n / (n * v + 1.0)) * zbar ** 2)


def sd_quad(n, zbar, theta, v):
    num, _ = integrate.quad(
        lambda t: stats.norm.pdf(zbar, loc=t, scale=np.sqrt(1.0 / n))
        * stats.norm.pdf(t, loc=0.0, scale=np.sqrt(v)),
        zbar - 10.0 * np.sqrt(v + 1.0), zbar + 10.0 * np.sqrt(v + 1.0),
        limit=400)
    den = stats.norm.pdf(zbar, loc=theta, scale=np.sqrt(1.0 / n))
    return num / den


for theta in (0.0, 0.5, 0.7):
    cf = float(np.exp(sd_log_e(5, 0.5, theta, 10.0)))
    qd = sd_quad(5, 0.5, theta, 10.0)
    P(f"closed form e(n=5,v=10,zbar=0.5,theta={theta})", cf)
    P(f"quadrature  e(n=5,v=10,zbar=0.5,theta={theta})", qd)
    P(f"rel err theta={theta}", abs(cf - qd) / qd)

rng = np.random.default_rng(20250819)
worst = 0.0
for _ in range(40):
    n = int(rng.integers(1, 51))
    zb = float(rng.uniform(-3, 3))
    th = float(rng.uniform(-3, 3))
    v = float(rng.choice([1.0, 10.0]))
    cf = float(np.exp(sd_log_e(n, zb, th, v)))
    worst = max(worst, abs(cf - sd_quad(n, zb, th, v)) / cf)
P("worst rel err over 40 random tuples", worst)

# 95% region bound: (theta-zbar)^2 <= (2/n){log(1/a)+0.5 log(nv+1)} + zbar^2/(nv+1)
b2 = (2.0 / 5.0) * (np.log(20.0) + 0.5 * np.log(51.0)) + 0.25 / 51.0
P("region halfwidth^2 (n=5,v=10,zbar=0.5,a=0.05)", b2)
P("hull low", 0.5 - np.sqrt(b2))
P("hull high", 0.5 + np.sqrt(b2))
P("mean e at truth (exact = 1): MC 2e5",
  float(np.mean(np.exp(sd_log_e(5, rng.normal(0.3, np.sqrt(0.2), 200000), 0.3, 10.0)))))

print()
print("== closed-form upper expected squared-error loss ==")
P("(1/5)(2 + log 51 + (5/51)*0.25)",
  (1.0 / 5.0) * (2.0 + np.log(51.0) + (5.0 / 51.0) * 0.25))

print()
print("== Ware binomial plug-in ratio ==")
beta = 0.18
th_c = (6 + beta) / (10 + 2 * beta)
th_e = (9 + beta) / (9 + 2 * beta)
P("theta_hat_cmt = 6.18/10.36", th_c)
P("theta_hat_ecmo = 9.18/9.36", th_e)


def ware_log_e(tc, te):
    def term(s, d, hat, t):
        out = 0.0
        if s:
            if t == 0.0:
                return np.inf
            out += s * (np.log(hat) - np.log(t))
        if d:
            if t == 1.0:
                return np.inf
            out += d * (np.log(1 - hat) - np.log(1 - t))
        return out
    return term(6, 4, th_c, tc) + term(9, 0, th_e, te)


P("e at (0.6, 1.0)", float(np.exp(ware_log_e(0.6, 1.0))))
P("log e at (0.99, 0.01)", ware_log_e(0.99, 0.01))
P("e at plug-ins (exact 1)", float(np.exp(ware_log_e(th_c, th_e))))
for n, lab in ((10, "cmt"), (9, "ecmo")):
    s = np.arange(n + 1)
    hat = (s + beta) / (n + 2 * beta)
    tot = float(np.sum(special.comb(n, s) * hat ** s * (1 - hat) ** (n - s)))
    P(f"exact E[e] {lab} arm (n={n})", tot)

print()
print("== median quasi-likelihood hand trace ==")
# z=(1,2,3), predictor path 0 -> 1 -> 1.5; increments 0, -1, -1.5; eta=0.2
inc = [abs(1 - 0) - abs(1 - 0), abs(2 - 1) - abs(2 - 0), abs(3 - 1.5) - abs(3 - 0)]
P("increments sum", sum(inc))
P("e = exp(-0.2 * sum)", float(np.exp(-0.2 * sum(inc))))

print()
print("== Choquet toys ==")
# tent contour q=max(0,1-|t|), g=t^2: int_0^1 (1-s)^2 ds = 1/3
P("tent contour, g=t^2 (exact 1/3)", 1.0 / 3.0)
# step contour 0.05 below 7, 1 above; H=(-inf,7] -> upper prob 0.05
P("step contour upper prob", 0.05)

print()
print("== regularizer model toys ==")
# atoms rho = (0.5, 2.0) each prob 0.5 under center
P("contamination eps=0.3: 0.7*1.25 + 0.3*2", 0.7 * 1.25 + 0.3 * 2.0)
P("constant odds tau=0.5 root (exact 1.5)", 1.5)
P("finite-support: eta (.5,.5)/upper (.5,1) -> rho", 0.0)  # (1.0, 0.5) by hand
P("  rho0", 1.0)
P("  rho1", 0.5)

print()
print("== reciprocal-density calibrators ==")
P("gamma(u)=2*sqrt(u) at 0.25", 2 * np.sqrt(0.25))
P("int_0^1 1/(2 sqrt(u)) du (exact 1)", 1.0)
P("density 2(1-u): gamma(0) = 1/2", 0.5)
