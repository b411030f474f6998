"""Scalar reference transcription of the density/flux update and outer closures.

Deliberately written with explicit loops and per-offset sums, independent of
the vectorized implementation, so the two can be compared to round-off.
"""

from chemograph.scheme import roe_aho_coefficients


def reference_step(u, v, f, lam, h, k):
    """One step on a single arc with both ends on the outer boundary."""
    c = roe_aho_coefficients()
    M = len(u) - 2
    un, vn = u.copy(), v.copy()
    for j in range(1, M + 1):
        su = sum(c.at("beta_uu", l) * u[j + l] for l in (-1, 0, 1))
        sv = sum(c.at("beta_uv", l) * v[j + l] for l in (-1, 0, 1)) / lam
        sf = sum(c.at("gamma_u", l) * f[j + l] for l in (-1, 0, 1)) / lam
        un[j] = (u[j] - k / (2 * h) * (v[j + 1] - v[j - 1])
                 + lam * k / (2 * h) * (u[j + 1] - 2 * u[j] + u[j - 1])
                 + k / 2 * (su + sv + sf))
        tu = lam * sum(c.at("beta_vu", l) * u[j + l] for l in (-1, 0, 1))
        tv = sum(c.at("beta_vv", l) * v[j + l] for l in (-1, 0, 1))
        tf = sum(c.at("gamma_v", l) * f[j + l] for l in (-1, 0, 1))
        vn[j] = (v[j] - lam ** 2 * k / (2 * h) * (u[j + 1] - u[j - 1])
                 + lam * k / (2 * h) * (v[j + 1] - 2 * v[j] + v[j - 1])
                 + k / 2 * (tu + tv + tf))
    un[0] = ((1 - lam * k / h - k * c.at("beta_uu", -1)) * u[0]
             + k * (lam / h + c.at("beta_uu", 1)) * u[1]
             - k * (1 / h - c.at("beta_uv", 1) / lam) * v[1]
             + k / lam * (c.at("gamma_u", 1) * f[1] - c.at("gamma_u", -1) * f[0]))
    vn[0] = 0.0
    un[M + 1] = ((1 - lam * k / h - k * c.at("beta_uu", 1)) * u[M + 1]
                 + k * (lam / h + c.at("beta_uu", -1)) * u[M]
                 + k * (1 / h + c.at("beta_uv", -1) / lam) * v[M]
                 - k / lam * (c.at("gamma_u", 1) * f[M + 1] - c.at("gamma_u", -1) * f[M]))
    vn[M + 1] = 0.0
    return un, vn
