#!/usr/bin/env python3
"""Numpy prototype of the analysis pipeline.

Exists to validate tolerance budgets (grid bias, interval reproduction,
Monte Carlo margins) before/independently of the C++ implementation. Not a
dependency of the build; kept as a cross-check tool.
"""

import numpy as np
from scipy import stats

KAPPA = 1.0


def beta_mix_gamma_vec(u, kappa=KAPPA):
    from scipy import special
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    one = u >= 1.0
    zero = u <= 0.0
    mid = ~(one | zero)
    out[one] = (1 + kappa) / kappa
    out[zero] = 0.0
    z = -np.log(u[mid])
    ig = special.gammainc(1 + kappa, z) * special.gamma(1 + kappa)
    out[mid] = u[mid] * z ** (1 + kappa) / (kappa * ig)
    return out


def choquet_step(contour_vals, g_vals):
    """Exact int_0^1 sup{g: q > s} ds for grid step functions."""
    order = np.argsort(-contour_vals, kind="stable")
    q_sorted = contour_vals[order]
    g_prefix = np.maximum.accumulate(g_vals[order])
    # integral over s in (q_{k+1}, q_k] has sup = prefix max up to k
    q_next = np.append(q_sorted[1:], 0.0)
    seg = np.clip(q_sorted, 0, 1) - np.clip(q_next, 0, 1)
    return float(np.sum(seg * g_prefix))


# ---------------------------------------------------------------- criterion 3
def criterion3():
    n, v, zbar = 5, 10.0, 0.5
    closed = (1 / 5) * (2 + np.log(51) + (5 / 51) * 0.25)
    for nodes, lo, hi in ((4001, -10, 10), (4001, -4, 4), (16001, -4, 4),
                          (32001, -4, 4)):
        th = np.linspace(lo, hi, nodes)
        log_e = (-0.5 * np.log(n * v + 1) + 0.5 * n * (th - zbar) ** 2
                 - 0.5 * (n / (n * v + 1)) * zbar ** 2)
        pi = np.minimum(1.0, np.exp(-log_e))
        loss = (th - zbar) ** 2
        val = choquet_step(pi, loss)
        print(f"crit3 grid {nodes}@[{lo},{hi}]: {val:.6f} err {val-closed:+.2e}")


# ---------------------------------------------------------------- Ware
def ware_pipeline():
    beta = 0.18
    th_c_hat = (6 + beta) / (10 + 2 * beta)
    th_e_hat = (9 + beta) / (9 + 2 * beta)
    m = 401
    tc = np.linspace(0.0, 1.0, m)
    te = np.linspace(0.0, 1.0, m)
    TC, TE = np.meshgrid(tc, te, indexing="ij")

    def xlogy(x, y):
        out = np.full_like(y, -np.inf)
        np.log(y, out=out, where=y > 0)
        out *= x
        if x == 0:
            out[:] = 0.0
        return out

    log_e = (6 * np.log(th_c_hat) + 4 * np.log(1 - th_c_hat)
             + 9 * np.log(th_e_hat)
             - (xlogy(6, TC) + xlogy(4, 1 - TC) + xlogy(9, TE)))
    # prior contour and regularizer
    q_e = 0.1 + 0.9 * (TE >= 0.8)
    q_c = 0.5 + 0.5 * (TC <= 0.3)
    q = q_e * q_c
    rho = 1.0 / beta_mix_gamma_vec(q)
    log_reg = log_e + np.log(rho)

    for lab, le in (("unreg", log_e), ("reg", log_reg)):
        pi = np.minimum(1.0, np.exp(-le))
        # 95% regions and the diagonal test
        region = le <= np.log(20.0)
        diag = TE <= TC
        min_e_diag = np.min(le[diag])
        print(f"ware {lab}: min log_e over diag {min_e_diag:.4f} "
              f"(reject iff > {np.log(20):.4f}) -> "
              f"{'reject' if min_e_diag > np.log(20) else 'retain'}")
        ex = TE[region]
        print(f"ware {lab}: region theta_e extent [{ex.min():.4f},{ex.max():.4f}] "
              f"theta_c extent [{TC[region].min():.4f},{TC[region].max():.4f}]")
        # marginal over delta = te - tc
        delta = np.linspace(-1.0, 1.0, m)
        half = (delta[1] - delta[0]) / 2.0
        dvals = TE - TC
        phi = np.empty(m)
        for i, d in enumerate(delta):
            band = np.abs(dvals - d) <= half
            phi[i] = pi[band].max() if band.any() else 0.0
        phi = phi / phi.max()
        up = choquet_step(phi, delta + 1.0) - 1.0
        lo = -(choquet_step(phi, 1.0 - delta) - 1.0)
        print(f"ware {lab}: interval [{lo:+.4f}, {up:+.4f}]")


# ------------------------------------------------------------- decision MC
def decision_mc(reps=1000, seed=7):
    rng = np.random.default_rng(seed)
    n, v = 5, 10.0
    th = np.linspace(-4, 4, 4001)
    actions = np.linspace(-4, 4, 161)
    worst_mean = []
    cert_ok = True
    for _ in range(reps):
        theta0 = rng.normal(0, 1)          # any theta; vacuous rho
        zbar = rng.normal(theta0, np.sqrt(1 / n))
        log_e = (-0.5 * np.log(n * v + 1) + 0.5 * n * (th - zbar) ** 2
                 - 0.5 * (n / (n * v + 1)) * zbar ** 2)
        pi = np.minimum(1.0, np.exp(-log_e))
        order = np.argsort(-pi, kind="stable")
        q_sorted = pi[order]
        th_min = np.minimum.accumulate(th[order])
        th_max = np.maximum.accumulate(th[order])
        q_next = np.append(q_sorted[1:], 0.0)
        seg = q_sorted - q_next
        log_e_t0 = (-0.5 * np.log(n * v + 1) + 0.5 * n * (theta0 - zbar) ** 2
                    - 0.5 * (n / (n * v + 1)) * zbar ** 2)
        pi_t0 = min(1.0, np.exp(-log_e_t0))
        ratios = []
        for a in actions:
            g_prefix = np.maximum((th_max - a) ** 2, (th_min - a) ** 2)
            ub = float(np.sum(seg * g_prefix))
            ratios.append((theta0 - a) ** 2 / ub)
        r = max(ratios)
        worst_mean.append(r)
        if pi_t0 * r > 1.0 + 1e-9:  # certificate pi*l <= Pi_bar
            cert_ok = False
    wm = np.array(worst_mean)
    print(f"decision MC: mean sup ratio {wm.mean():.4f} "
          f"3se {3*wm.std()/np.sqrt(reps):.4f} max {wm.max():.4f} "
          f"cert_ok {cert_ok}")


# ------------------------------------------------------------- growth margins
def growth(reps=500, n_eval=30, seed=11):
    rng = np.random.default_rng(seed)
    v = 10.0
    theta_star = 0.7
    log_rho = {0.1: 0.913423906636, 0.2: 0.15776109312,
               0.4: -0.204118012106, 0.8: -0.394747932602}
    means, ses = {}, {}
    zbars = np.array([rng.normal(0, 1, n_eval).mean() for _ in range(reps)])
    log_e = (-0.5 * np.log(n_eval * v + 1)
             + 0.5 * n_eval * (theta_star - zbars) ** 2
             - 0.5 * (n_eval / (n_eval * v + 1)) * zbars ** 2)
    for K in (0.1, 0.2, 0.4, 0.8):
        col = log_e + log_rho[K]
        means[K], ses[K] = col.mean(), col.std() / np.sqrt(reps)
    means["vac"], ses["vac"] = log_e.mean(), log_e.std() / np.sqrt(reps)
    keys = [0.1, 0.2, 0.4, 0.8, "vac"]
    for a, b in zip(keys, keys[1:]):
        diff = means[a] - means[b]
        slack = 2 * np.sqrt(ses[a] ** 2 + ses[b] ** 2)
        print(f"growth {a} vs {b}: diff {diff:+.4f} 2se {slack:.4f} "
              f"pass {diff + slack >= 0}")


if __name__ == "__main__":
    criterion3()
    ware_pipeline()
    decision_mc()
    growth()
