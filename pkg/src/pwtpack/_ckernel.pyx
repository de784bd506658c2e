# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled greedy packing loop; a line-for-line port of ``_kernel.py``."""

import numpy as np

from libc.math cimport log, sqrt, pow, INFINITY
from libc.stdlib cimport malloc, free, qsort


cdef enum:
    DETERMINISTIC = 0
    HOEFFDING = 1
    CHEBYSHEV = 2


cdef struct Entry:
    double key
    Py_ssize_t id


cdef int _cmp(const void* a, const void* b) noexcept nogil:
    cdef const Entry* x = <const Entry*> a
    cdef const Entry* y = <const Entry*> b
    if x.key < y.key:
        return -1
    if x.key > y.key:
        return 1
    if x.id < y.id:
        return -1
    if x.id > y.id:
        return 1
    return 0


cdef struct State:
    Py_ssize_t n
    const double* seg
    const long long* pos
    const double* dist
    const double* prof
    const double* wt
    double* Wacc
    double* suffW
    double* tpre
    double R, v_max, nu, gamma, delta, alpha, capacity
    int bound
    double L, kcheb, s2
    double P, totw
    Py_ssize_t count


cdef inline double _score(State* st, Py_ssize_t k, int code) noexcept nogil:
    cdef double p = st.prof[k]
    cdef double w = st.wt[k]
    cdef double d = st.dist[k]
    cdef double s, s1, W, r, u
    if code == 1:
        if d <= 0:
            return INFINITY
        return pow(p, st.gamma) / (pow(w, st.gamma) * d)
    if code <= 3:
        s = st.v_max - st.nu * w
        if s <= 0:
            return -INFINITY
        r = p - st.R * (d / s - d / st.v_max)
        if code == 2:
            return r
        return r / w
    if code >= 6:
        if st.bound == HOEFFDING:
            u = st.delta * (sqrt(2 * (st.count + 1) * st.L) - sqrt(2 * st.count * st.L))
        elif st.bound == CHEBYSHEV:
            u = st.kcheb * (sqrt((st.count + 1) * st.s2) - sqrt(st.count * st.s2))
        else:
            u = 0.0
        w = w + u
    W = st.suffW[st.pos[k]]
    s1 = st.v_max - st.nu * (W + w)
    if s1 <= 0:
        return -INFINITY
    r = p - st.R * (d / s1 - d / (st.v_max - st.nu * W))
    if code == 4 or code == 6:
        return r
    return r / w


cdef void _order(State* st, Py_ssize_t* items, Py_ssize_t cnt, int code,
                 bint ascending, Entry* buf) noexcept nogil:
    cdef Py_ssize_t i
    cdef double s
    for i in range(cnt):
        s = _score(st, items[i], code)
        buf[i].key = s if ascending else -s
        buf[i].id = items[i]
    qsort(buf, cnt, sizeof(Entry), _cmp)
    for i in range(cnt):
        items[i] = buf[i].id


cdef inline bint _fits(State* st, Py_ssize_t k) noexcept nogil:
    cdef double w = st.wt[k]
    if st.bound == DETERMINISTIC:
        return st.totw + w <= st.capacity
    if st.bound == HOEFFDING:
        return (st.totw + w) + st.delta * sqrt(2 * (st.count + 1) * st.L) <= st.capacity
    return (st.totw + w) + st.kcheb * sqrt((st.count + 1) * st.s2) <= st.capacity


cdef inline double _objective_with(State* st, Py_ssize_t k) noexcept nogil:
    cdef double w = st.wt[k]
    cdef Py_ssize_t p0 = st.pos[k]
    cdef double S = st.tpre[p0]
    cdef double v
    cdef Py_ssize_t q
    for q in range(p0, st.n):
        v = st.v_max - st.nu * (st.Wacc[q] + w)
        if v <= 0:
            return -INFINITY
        S += st.seg[q] / v
    return (st.P + st.prof[k]) - st.R * S


cdef void _accept(State* st, Py_ssize_t k) noexcept nogil:
    cdef double w = st.wt[k]
    cdef Py_ssize_t p0 = st.pos[k]
    cdef Py_ssize_t q
    st.P += st.prof[k]
    st.totw += w
    st.count += 1
    for q in range(p0, st.n):
        st.Wacc[q] += w
        st.tpre[q + 1] = st.tpre[q] + st.seg[q] / (st.v_max - st.nu * st.Wacc[q])
    for q in range(p0 + 1):
        st.suffW[q] += w


def greedy_pack(seg_len, item_pos, item_d, profit, weight, double capacity, double R,
                double v_max, double nu, hh, double gamma, bint single_pass,
                bint ascending, int bound, double delta, double alpha, trace=None):
    cdef const double[::1] seg = np.ascontiguousarray(seg_len, dtype=np.float64)
    cdef const long long[::1] pos = np.ascontiguousarray(item_pos, dtype=np.int64)
    cdef const double[::1] dist = np.ascontiguousarray(item_d, dtype=np.float64)
    cdef const double[::1] prof = np.ascontiguousarray(profit, dtype=np.float64)
    cdef const double[::1] wt = np.ascontiguousarray(weight, dtype=np.float64)
    cdef const int[::1] codes = np.ascontiguousarray(hh, dtype=np.intc)
    cdef Py_ssize_t n = seg.shape[0]
    cdef Py_ssize_t m = prof.shape[0]
    cdef double[::1] Wacc = np.zeros(n)
    cdef double[::1] suffW = np.zeros(n)
    cdef double[::1] tpre = np.zeros(n + 1)
    selected_arr = np.zeros(m, dtype=np.uint8)
    cdef unsigned char[::1] selected = selected_arr
    cdef State st
    cdef Py_ssize_t q, c, k, i, cnt
    cdef double z, z_best
    cdef long long evaluations = 0
    cdef bint ok
    cdef bint tracing = trace is not None
    cdef Py_ssize_t* remaining
    cdef Entry* buf

    st.n = n
    st.R = R
    st.v_max = v_max
    st.nu = nu
    st.gamma = gamma
    st.delta = delta
    st.alpha = alpha
    st.capacity = capacity
    st.bound = bound
    st.L = 0.0
    st.kcheb = 0.0
    st.s2 = 0.0
    if bound == HOEFFDING:
        st.L = log(1 / (1 - alpha))
    elif bound == CHEBYSHEV:
        st.kcheb = sqrt(alpha / (1 - alpha))
        st.s2 = delta * delta / 3.0
    st.P = 0.0
    st.totw = 0.0
    st.count = 0
    for q in range(n):
        tpre[q + 1] = tpre[q] + seg[q] / v_max
    z_best = st.P - R * tpre[n]
    if m == 0:
        return selected_arr, z_best, 0
    if codes.shape[0] < m:
        raise ValueError("heuristic sequence shorter than the item count")

    st.seg = &seg[0]
    st.pos = &pos[0]
    st.dist = &dist[0]
    st.prof = &prof[0]
    st.wt = &wt[0]
    st.Wacc = &Wacc[0]
    st.suffW = &suffW[0]
    st.tpre = &tpre[0]

    remaining = <Py_ssize_t*> malloc(m * sizeof(Py_ssize_t))
    buf = <Entry*> malloc(m * sizeof(Entry))
    if remaining == NULL or buf == NULL:
        free(remaining)
        free(buf)
        raise MemoryError()
    try:
        for i in range(m):
            remaining[i] = i
        cnt = m
        _order(&st, remaining, cnt, codes[0], ascending, buf)
        c = 0
        while c < cnt:
            k = remaining[c]
            if not _fits(&st, k):
                c += 1
                continue
            z = _objective_with(&st, k)
            evaluations += 1
            ok = z >= z_best
            if tracing:
                trace.append((evaluations, k + 1, ok, z))
            if not ok:
                c += 1
                continue
            _accept(&st, k)
            selected[k] = 1
            z_best = z
            if single_pass:
                c += 1
                continue
            for i in range(c, cnt - 1):
                remaining[i] = remaining[i + 1]
            cnt -= 1
            if cnt > 0:
                _order(&st, remaining, cnt, codes[st.count], ascending, buf)
            c = 0
    finally:
        free(remaining)
        free(buf)
    return selected_arr, z_best, evaluations
