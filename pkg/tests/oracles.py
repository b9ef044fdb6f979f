"""Independent reference implementations used as test oracles.

These deliberately avoid the library's own computation paths: the split
criterion is a direct transcription of its formula, the split search is a
plain enumeration, and gradients come from central finite differences.
"""

import math

import numpy as np

from iec.ann import MlpModel, mse_loss
from iec.hddt import Leaf


def hd_reference(partitions):
    """Direct transcription of the Hellinger split criterion."""
    total_pos = sum(p for p, _ in partitions)
    total_neg = sum(n for _, n in partitions)
    acc = 0.0
    for pos, neg in partitions:
        acc += (math.sqrt(pos / total_pos) - math.sqrt(neg / total_neg)) ** 2
    return math.sqrt(acc)


def brute_force_numeric(values, labels):
    """Enumerate every midpoint between adjacent distinct sorted values and
    score each binary partition with the reference formula; first strict
    improvement wins, matching the documented lowest-threshold tie-break.
    Returns (threshold, score) or None when all values are identical.
    """
    distinct = sorted(set(values))
    if len(distinct) < 2:
        return None
    best = None
    for lo, hi in zip(distinct, distinct[1:]):
        t = (lo + hi) / 2.0
        left = [y for v, y in zip(values, labels) if v <= t]
        right = [y for v, y in zip(values, labels) if v > t]
        lp = sum(left)
        rp = sum(right)
        score = hd_reference([(lp, len(left) - lp), (rp, len(right) - rp)])
        if best is None or score > best[1]:
            best = (t, score)
    return best


def strip_counts(node):
    """Tree shape without row counts, for comparing trees across replication."""
    if isinstance(node, Leaf):
        return ("leaf", node.label)
    s = node.split
    key = (s.feature_index, s.kind, s.threshold, s.categories)
    return ("split", key, tuple(strip_counts(c) for c in node.children))


def finite_difference_gradients(model, x, y, h=1e-5):
    """Central-difference gradient of mse_loss over every parameter."""
    def rebuild(w, b, c, c0):
        return MlpModel(model.input_dim, model.hidden_count, w, b, c, c0)

    def loss_at(w, b, c, c0):
        return mse_loss(rebuild(w, b, c, c0), x, y)

    w, b, c = model.hidden_weights, model.hidden_biases, model.output_weights
    c0 = model.output_bias
    gw = np.zeros_like(w)
    for i in range(w.shape[0]):
        for j in range(w.shape[1]):
            up, dn = w.copy(), w.copy()
            up[i, j] += h
            dn[i, j] -= h
            gw[i, j] = (loss_at(up, b, c, c0) - loss_at(dn, b, c, c0)) / (2 * h)
    gb = np.zeros_like(b)
    gc = np.zeros_like(c)
    for i in range(b.size):
        up, dn = b.copy(), b.copy()
        up[i] += h
        dn[i] -= h
        gb[i] = (loss_at(w, up, c, c0) - loss_at(w, dn, c, c0)) / (2 * h)
        up, dn = c.copy(), c.copy()
        up[i] += h
        dn[i] -= h
        gc[i] = (loss_at(w, b, up, c0) - loss_at(w, b, dn, c0)) / (2 * h)
    gc0 = (loss_at(w, b, c, c0 + h) - loss_at(w, b, c, c0 - h)) / (2 * h)
    return gw, gb, gc, gc0


def max_relative_error(analytic, numeric):
    worst = 0.0
    for a, f in zip(analytic, numeric):
        a = np.atleast_1d(np.asarray(a, dtype=float))
        f = np.atleast_1d(np.asarray(f, dtype=float))
        denom = np.maximum(1e-8, np.maximum(np.abs(a), np.abs(f)))
        worst = max(worst, float((np.abs(a - f) / denom).max()))
    return worst
