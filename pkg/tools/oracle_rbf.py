"""Freeze expected values for the field-fit tests.

Independent route on purpose: explicit python-loop kernel assembly and
scipy's solver, no imports from the package. Mirrors the frozen
hyperparameter choice (length scale = median pairwise distance / 4,
nugget 1e-9 x mean kernel diagonal) and the mean-centering scheme.
"""

import math
import statistics

import numpy as np
import scipy.linalg


def sqdist(a, b):
    scale = math.cos(math.radians((a[0] + b[0]) / 2.0))
    return (a[0] - b[0]) ** 2 + (scale * (a[1] - b[1])) ** 2


def fit_predict(samples, targets):
    pts = sorted(set((lat, lon) for lat, lon, _ in samples))
    by_pos = {}
    for lat, lon, v in sorted(samples):
        by_pos.setdefault((lat, lon), v)
    pts = sorted(by_pos)
    vals = [by_pos[p] for p in pts]
    n = len(pts)
    mean = sum(vals) / n
    if n == 1:
        return [mean for _ in targets]
    dists = [math.sqrt(sqdist(pts[i], pts[j])) for i in range(n) for j in range(i + 1, n)]
    ell = max(statistics.median(dists) / 4.0, 1e-6)
    K = np.array([[math.exp(-sqdist(pts[i], pts[j]) / (2 * ell * ell)) for j in range(n)] for i in range(n)])
    A = K + 1e-9 * float(np.mean(np.diag(K))) * np.eye(n)
    w = scipy.linalg.solve(A, np.array(vals) - mean, assume_a="pos")
    out = []
    for t in targets:
        k = [math.exp(-sqdist(t, p) / (2 * ell * ell)) for p in pts]
        out.append(mean + float(np.dot(k, w)))
    return out


def cell_center(rows, cols, bbox, row, col):
    min_lat, max_lat, min_lon, max_lon = bbox
    dlat = (max_lat - min_lat) / rows
    dlon = (max_lon - min_lon) / cols
    return (max_lat - (row + 0.5) * dlat, min_lon + (col + 0.5) * dlon)


samples = [(0.25, 0.25, 0.0), (0.75, 0.75, 10.0)]
lo_cell = cell_center(64, 64, (0, 1, 0, 1), 48, 16)  # nearest center to (0.25, 0.25)
hi_cell = cell_center(64, 64, (0, 1, 0, 1), 16, 48)  # nearest center to (0.75, 0.75)
at_lo, at_hi = fit_predict(samples, [lo_cell, hi_cell])
print("cells:", lo_cell, hi_cell)
print("pred at lo cell:", repr(at_lo))
print("pred at hi cell:", repr(at_hi))

# interpolation quality at the sample positions themselves
at_s1, at_s2 = fit_predict(samples, [(0.25, 0.25), (0.75, 0.75)])
print("pred at sample 1:", repr(at_s1))
print("pred at sample 2:", repr(at_s2))

# random-set worst-case relative error at sample positions
rng = np.random.default_rng(20260822)
worst = 0.0
for trial in range(60):
    n = int(rng.integers(3, 49))
    lats = rng.uniform(10, 11, n)
    lons = rng.uniform(70, 71, n)
    vals = rng.uniform(1, 100, n)
    s = list(zip(lats.tolist(), lons.tolist(), vals.tolist()))
    preds = fit_predict(s, [(a, b) for a, b, _ in s])
    span = max(vals) - min(vals)
    for p, (_, _, v) in zip(preds, s):
        worst = max(worst, abs(p - v) / max(abs(v), 1e-12))
print("worst rel err over 60 random sets:", worst)
