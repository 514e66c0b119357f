"""Compiled CART kernels shared by the decision tree and the random forest.

Trees are stored as flat node arrays (sklearn-style): ``feature[k] == -1``
marks a leaf, otherwise samples with ``x[feature[k]] <= threshold[k]`` go to
``left[k]``. Split candidates are midpoints between consecutive distinct
sorted values; the accepted split maximizes Gini impurity decrease.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def grow_tree(X, y, in_bag, n_classes, mtry, min_leaf, max_depth, seed):
    """Grow one tree on the samples indexed by ``in_bag``.

    y holds class codes 0..n_classes-1. max_depth < 0 means unlimited.
    Returns flat node arrays trimmed to the grown size; ``decrease`` is the
    count-weighted Gini decrease of each split (0 for leaves), so that
    sum(decrease) / len(in_bag) is the tree's total normalized decrease.
    """
    np.random.seed(seed)
    n = in_bag.size
    n_feat = X.shape[1]
    cap = 2 * n + 1

    feature = np.full(cap, -1, np.int32)
    threshold = np.zeros(cap, np.float64)
    left = np.full(cap, -1, np.int32)
    right = np.full(cap, -1, np.int32)
    counts = np.zeros((cap, n_classes), np.float64)
    decrease = np.zeros(cap, np.float64)

    idx = in_bag.astype(np.int64)
    stack_node = np.empty(cap, np.int32)
    stack_lo = np.empty(cap, np.int64)
    stack_hi = np.empty(cap, np.int64)
    stack_depth = np.empty(cap, np.int64)
    stack_node[0], stack_lo[0], stack_hi[0], stack_depth[0] = 0, 0, n, 0
    top = 1
    n_nodes = 1

    feat_order = np.empty(n_feat, np.int64)
    node_counts = np.empty(n_classes, np.int64)
    left_counts = np.empty(n_classes, np.int64)
    right_counts = np.empty(n_classes, np.int64)

    while top > 0:
        top -= 1
        node = stack_node[top]
        lo = stack_lo[top]
        hi = stack_hi[top]
        depth = stack_depth[top]
        m = hi - lo

        for c in range(n_classes):
            node_counts[c] = 0
        for i in range(lo, hi):
            node_counts[y[idx[i]]] += 1
        for c in range(n_classes):
            counts[node, c] = node_counts[c]

        ssq = 0.0
        for c in range(n_classes):
            ssq += float(node_counts[c]) * float(node_counts[c])
        imp = 1.0 - ssq / (float(m) * float(m))

        if imp <= 0.0 or m < 2 * min_leaf or (max_depth >= 0 and depth >= max_depth):
            continue

        k_feats = mtry if mtry < n_feat else n_feat
        for f in range(n_feat):
            feat_order[f] = f
        if k_feats < n_feat:
            for i in range(k_feats):
                j = i + np.random.randint(0, n_feat - i)
                tmp = feat_order[i]
                feat_order[i] = feat_order[j]
                feat_order[j] = tmp

        best_dec = 0.0
        best_f = -1
        best_thr = 0.0

        v = np.empty(m, np.float64)
        sy = np.empty(m, np.int64)
        for fi in range(k_feats):
            f = feat_order[fi]
            for i in range(m):
                v[i] = X[idx[lo + i], f]
            order = np.argsort(v)
            for c in range(n_classes):
                left_counts[c] = 0
                right_counts[c] = node_counts[c]
            for i in range(m):
                sy[i] = y[idx[lo + order[i]]]
            lssq = 0.0
            rssq = ssq
            prev = v[order[0]]
            for i in range(m - 1):
                c = sy[i]
                lssq += 2.0 * left_counts[c] + 1.0
                left_counts[c] += 1
                rssq -= 2.0 * right_counts[c] - 1.0
                right_counts[c] -= 1
                cur = v[order[i + 1]]
                if prev == cur:
                    continue
                lo_val = prev
                prev = cur
                n_l = i + 1
                n_r = m - n_l
                if n_l < min_leaf or n_r < min_leaf:
                    continue
                child = (n_l - lssq / n_l + n_r - rssq / n_r) / m
                dec = imp - child
                if dec > best_dec + 1e-15:
                    best_dec = dec
                    best_f = f
                    mid = lo_val + (cur - lo_val) * 0.5
                    if mid >= cur:
                        mid = lo_val
                    best_thr = mid

        if best_f < 0:
            continue

        n_l = 0
        for i in range(lo, hi):
            if X[idx[i], best_f] <= best_thr:
                n_l += 1
        buf_l = np.empty(n_l, np.int64)
        buf_r = np.empty(m - n_l, np.int64)
        a = 0
        b = 0
        for i in range(lo, hi):
            if X[idx[i], best_f] <= best_thr:
                buf_l[a] = idx[i]
                a += 1
            else:
                buf_r[b] = idx[i]
                b += 1
        for i in range(n_l):
            idx[lo + i] = buf_l[i]
        for i in range(m - n_l):
            idx[lo + n_l + i] = buf_r[i]

        feature[node] = best_f
        threshold[node] = best_thr
        decrease[node] = best_dec * m

        left_id = n_nodes
        right_id = n_nodes + 1
        n_nodes += 2
        left[node] = left_id
        right[node] = right_id

        stack_node[top] = left_id
        stack_lo[top] = lo
        stack_hi[top] = lo + n_l
        stack_depth[top] = depth + 1
        top += 1
        stack_node[top] = right_id
        stack_lo[top] = lo + n_l
        stack_hi[top] = hi
        stack_depth[top] = depth + 1
        top += 1

    return (
        feature[:n_nodes].copy(),
        threshold[:n_nodes].copy(),
        left[:n_nodes].copy(),
        right[:n_nodes].copy(),
        counts[:n_nodes].copy(),
        decrease[:n_nodes].copy(),
    )


@njit(cache=True)
def apply_tree(feature, threshold, left, right, X):
    """Return the leaf node index reached by every row of X."""
    n = X.shape[0]
    out = np.empty(n, np.int64)
    for i in range(n):
        node = 0
        while feature[node] >= 0:
            if X[i, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] = node
    return out
