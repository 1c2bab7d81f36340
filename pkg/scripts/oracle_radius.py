#!/usr/bin/env python3
"""Independent critical-radius oracle for the exponential shear map.

Computes r* at probe points straight from the definition, with none of the
package machinery: f(r) = min_{p in B(c, r)} |h(p) - c| - r is decreasing and
crosses zero at the critical radius; the inner minimum is found on a dense
polar grid and polished with Nelder-Mead, and brentq isolates the root.

Used to freeze oracle values into tests/test_critical.py.
"""

import numpy as np
from scipy.optimize import brentq, minimize


def h(p):
    p = np.atleast_2d(p)
    return np.column_stack([p[:, 0] + np.exp(p[:, 1]), p[:, 1]])


def min_dist(c, r, n_s=160, n_t=720):
    """min over the closed disc B(c, r) of |h(p) - c|, polished locally."""
    s = np.linspace(0.0, 1.0, n_s)
    t = np.linspace(0.0, 2 * np.pi, n_t, endpoint=False)
    ss, tt = np.meshgrid(s, t)
    pts = np.column_stack([
        c[0] + (ss * r * np.cos(tt)).ravel(),
        c[1] + (ss * r * np.sin(tt)).ravel(),
    ])
    d = np.linalg.norm(h(pts) - c, axis=1)
    k = int(np.argmin(d))
    s0, t0 = ss.ravel()[k], tt.ravel()[k]

    def obj(x):
        s1 = min(max(x[0], 0.0), 1.0)
        p = np.array([c[0] + s1 * r * np.cos(x[1]), c[1] + s1 * r * np.sin(x[1])])
        return float(np.linalg.norm(h(p)[0] - c))

    res = minimize(obj, [s0, t0], method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
    return min(res.fun, float(d[k]))


def critical_radius(c):
    c = np.asarray(c, dtype=float)
    disp = float(np.linalg.norm(h(c)[0] - c))
    f = lambda r: min_dist(c, r) - r
    return brentq(f, 0.25 * disp, disp, xtol=1e-9)


if __name__ == "__main__":
    probes = [(0.0, 0.0), (0.0, -1.0), (0.0, 1.0), (0.5, 0.0), (0.0, 0.5), (0.0, -0.5)]
    for c in probes:
        print(f"r({c[0]:+.2f}, {c[1]:+.2f}) = {critical_radius(c):.9f}")
