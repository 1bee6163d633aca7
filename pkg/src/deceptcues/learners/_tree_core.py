"""Compiled kernels for growing and applying binary-class decision trees.

Trees are stored as parallel node arrays. Node 0 is the root; leaves have
``feature == -1``. Samples go left when ``x[feature] <= threshold``.
"""

import numpy as np
from numba import njit

GINI = 0
ENTROPY = 1
_TIE_EPS = 1e-12


@njit(cache=True)
def node_impurity(n0, n1, criterion):
    n = n0 + n1
    if n == 0:
        return 0.0
    p0 = n0 / n
    p1 = n1 / n
    if criterion == GINI:
        return 1.0 - p0 * p0 - p1 * p1
    e = 0.0
    if p0 > 0.0:
        e -= p0 * np.log2(p0)
    if p1 > 0.0:
        e -= p1 * np.log2(p1)
    return e


@njit(cache=True)
def grow_tree(X, y, samples, max_depth, min_samples_split, min_samples_leaf, max_features, criterion, seed):
    np.random.seed(seed)
    n_total = samples.shape[0]
    n_features = X.shape[1]
    cap = 2 * n_total + 1
    feature = np.full(cap, -1, dtype=np.int64)
    threshold = np.zeros(cap)
    left = np.full(cap, -1, dtype=np.int64)
    right = np.full(cap, -1, dtype=np.int64)
    count0 = np.zeros(cap, dtype=np.int64)
    count1 = np.zeros(cap, dtype=np.int64)
    impurity = np.zeros(cap)
    depth = np.zeros(cap, dtype=np.int64)

    idx = samples.copy()
    buf = np.empty(n_total, dtype=np.int64)
    stack_node = np.empty(cap, dtype=np.int64)
    stack_lo = np.empty(cap, dtype=np.int64)
    stack_hi = np.empty(cap, dtype=np.int64)
    top = 0
    stack_node[0] = 0
    stack_lo[0] = 0
    stack_hi[0] = n_total
    top = 1
    n_nodes = 1

    while top > 0:
        top -= 1
        node = stack_node[top]
        lo = stack_lo[top]
        hi = stack_hi[top]
        n = hi - lo
        c1 = 0
        for k in range(lo, hi):
            c1 += y[idx[k]]
        c0 = n - c1
        count0[node] = c0
        count1[node] = c1
        imp = node_impurity(c0, c1, criterion)
        impurity[node] = imp
        if (c0 == 0 or c1 == 0 or (max_depth >= 0 and depth[node] >= max_depth)
                or n < min_samples_split or n < 2 * min_samples_leaf):
            continue

        best_score = np.inf
        best_f = -1
        best_thr = 0.0
        perm = np.random.permutation(n_features)
        visited = 0
        vals = np.empty(n)
        ys = np.empty(n, dtype=np.int64)
        for fi in range(n_features):
            if visited >= max_features:
                break
            f = perm[fi]
            for k in range(n):
                vals[k] = X[idx[lo + k], f]
            order = np.argsort(vals, kind="mergesort")
            sv = vals[order]
            if sv[0] == sv[n - 1]:
                continue
            visited += 1
            for k in range(n):
                ys[k] = y[idx[lo + order[k]]]
            l1 = 0
            for k in range(n - 1):
                l1 += ys[k]
                if sv[k] == sv[k + 1]:
                    continue
                nl = k + 1
                nr = n - nl
                if nl < min_samples_leaf or nr < min_samples_leaf:
                    continue
                r1 = c1 - l1
                score = nl * node_impurity(nl - l1, l1, criterion) + nr * node_impurity(nr - r1, r1, criterion)
                thr = 0.5 * (sv[k] + sv[k + 1])
                if thr >= sv[k + 1]:
                    thr = sv[k]
                if score < best_score - _TIE_EPS:
                    take = True
                elif score <= best_score + _TIE_EPS:
                    take = f < best_f or (f == best_f and thr < best_thr)
                else:
                    take = False
                if take:
                    best_score = score
                    best_f = f
                    best_thr = thr
        if best_f < 0:
            continue

        nl = 0
        nr = 0
        for k in range(lo, hi):
            s = idx[k]
            if X[s, best_f] <= best_thr:
                idx[lo + nl] = s
                nl += 1
            else:
                buf[nr] = s
                nr += 1
        for k in range(nr):
            idx[lo + nl + k] = buf[k]

        feature[node] = best_f
        threshold[node] = best_thr
        lc = n_nodes
        rc = n_nodes + 1
        n_nodes += 2
        left[node] = lc
        right[node] = rc
        depth[lc] = depth[node] + 1
        depth[rc] = depth[node] + 1
        stack_node[top] = rc
        stack_lo[top] = lo + nl
        stack_hi[top] = hi
        top += 1
        stack_node[top] = lc
        stack_lo[top] = lo
        stack_hi[top] = lo + nl
        top += 1

    m = n_nodes
    return (feature[:m].copy(), threshold[:m].copy(), left[:m].copy(), right[:m].copy(),
            count0[:m].copy(), count1[:m].copy(), impurity[:m].copy(), depth[:m].copy())


@njit(cache=True)
def apply_tree(X, feature, threshold, left, right):
    out = np.empty(X.shape[0], dtype=np.int64)
    for i in range(X.shape[0]):
        node = 0
        while feature[node] >= 0:
            if X[i, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] = node
    return out
