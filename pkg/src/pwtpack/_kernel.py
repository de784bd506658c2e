"""Pure-Python greedy packing loop, used when the compiled core is unavailable.

``_ckernel.pyx`` is a line-for-line port; keep the two in sync.
"""

import math

import numpy as np

from .rewards import CHEBYSHEV, DETERMINISTIC, HOEFFDING, _r1, _r2, _r4, _uncertainty


def greedy_pack(seg_len, item_pos, item_d, profit, weight, capacity, R, v_max, nu,
                hh, gamma, single_pass, ascending, bound, delta, alpha, trace=None):
    """Greedy packing over a fixed tour.

    ``hh[a]`` is the reward code (1..7) used after ``a`` acceptances. With
    ``single_pass`` the items are scored once and scanned once; otherwise
    every acceptance triggers a rescore, a re-sort and a cursor reset.
    Returns ``(selected mask, objective, evaluations)``; when ``trace`` is a
    list, ``(step, item id, accepted, z)`` tuples are appended to it.
    """
    n = len(seg_len)
    m = len(profit)
    seg_len = [float(x) for x in seg_len]
    pos = [int(x) for x in item_pos]
    dist = [float(x) for x in item_d]
    prof = [float(x) for x in profit]
    wt = [float(x) for x in weight]
    codes = [int(x) for x in hh]

    Wacc = [0.0] * n
    suffW = [0.0] * n
    tpre = [0.0] * (n + 1)
    for q in range(n):
        tpre[q + 1] = tpre[q] + seg_len[q] / v_max
    selected = np.zeros(m, dtype=np.uint8)
    P = 0.0
    totw = 0.0
    count = 0
    z_best = P - R * tpre[n]
    evaluations = 0

    if bound == HOEFFDING:
        L = math.log(1 / (1 - alpha))
    elif bound == CHEBYSHEV:
        kcheb = math.sqrt(alpha / (1 - alpha))
        s2 = delta * delta / 3.0

    def score(k, code):
        p, w, d = prof[k], wt[k], dist[k]
        if code == 1:
            return _r1(p, w, d, gamma)
        if code <= 3:
            r = _r2(p, w, d, R, v_max, nu)
            if r is None:
                return -math.inf
            return r if code == 2 else r / w
        if code >= 6:
            w = w + _uncertainty(bound, count, delta, alpha)
        r = _r4(p, w, d, suffW[pos[k]], R, v_max, nu)
        if r is None:
            return -math.inf
        return r if code in (4, 6) else r / w

    def ordered(items, code):
        s = {k: score(k, code) for k in items}
        if ascending:
            return sorted(items, key=lambda k: (s[k], k))
        return sorted(items, key=lambda k: (-s[k], k))

    def fits(k):
        w = wt[k]
        if bound == DETERMINISTIC:
            return totw + w <= capacity
        if bound == HOEFFDING:
            return (totw + w) + delta * math.sqrt(2 * (count + 1) * L) <= capacity
        return (totw + w) + kcheb * math.sqrt((count + 1) * s2) <= capacity

    def objective_with(k):
        w = wt[k]
        p0 = pos[k]
        S = tpre[p0]
        for q in range(p0, n):
            v = v_max - nu * (Wacc[q] + w)
            if v <= 0:
                return -math.inf
            S += seg_len[q] / v
        return (P + prof[k]) - R * S

    def accept(k):
        nonlocal P, totw, count
        w = wt[k]
        p0 = pos[k]
        selected[k] = 1
        P += prof[k]
        totw += w
        count += 1
        for q in range(p0, n):
            Wacc[q] += w
            tpre[q + 1] = tpre[q] + seg_len[q] / (v_max - nu * Wacc[q])
        for q in range(p0 + 1):
            suffW[q] += w

    remaining = ordered(list(range(m)), codes[0] if m else 1)
    c = 0
    while c < len(remaining):
        k = remaining[c]
        if not fits(k):
            c += 1
            continue
        z = objective_with(k)
        evaluations += 1
        ok = z >= z_best
        if trace is not None:
            trace.append((evaluations, k + 1, ok, z))
        if not ok:
            c += 1
            continue
        accept(k)
        z_best = z
        if single_pass:
            c += 1
            continue
        del remaining[c]
        if remaining:
            remaining = ordered(remaining, codes[count])
        c = 0
    return selected, z_best, evaluations
