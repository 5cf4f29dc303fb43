# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled inner loops: word substitution, weight refinement, ratio scans.

Mirrors `_pykernels` exactly; `kernels` picks one of the two at import
time.  Each loop has an int64 fast path, taken when the caller-supplied
`max_value` bound guarantees no intermediate overflows, and an exact
object path for arbitrarily large numerators.
"""

_LIMIT_REFINE = 1 << 62   # outputs and products stay below 2**63
_LIMIT_PAIR = 1 << 30     # cross products of pair sums stay below 2**63
_LIMIT_ADJ = 1 << 31


def substitute_word(bytes word, int m):
    """One refinement step applied letterwise."""
    cdef const unsigned char[:] w = word
    cdef Py_ssize_t n = len(word)
    cdef Py_ssize_t i, k = 0
    cdef Py_ssize_t out_len = 0
    cdef unsigned char lab
    if n == 0:
        return b""
    for i in range(n):
        out_len += 1 if w[i] == m else 2
    out = bytearray(out_len)
    cdef unsigned char[:] o = out
    for i in range(n):
        lab = w[i]
        o[k] = 1
        k += 1
        if lab == 0:
            o[k] = 0
            k += 1
        elif lab < m:
            o[k] = lab + 1
            k += 1
    return bytes(out)


def refine_weights(bytes labels, list weights, a, b, int m, max_value=0):
    """Push weight numerators one rank down (see _pykernels for the rule)."""
    cdef const unsigned char[:] labs = labels
    cdef Py_ssize_t n = len(labels)
    cdef Py_ssize_t i, k = 0, extra = 0
    cdef long long a_c, b_c, w_c, merge_c
    cdef object w, bw, merge
    if n == 0:
        return []
    for i in range(n):
        if labs[i] != m:
            extra += 1
    cdef list out = [0] * (n + extra)
    if 0 < max_value <= _LIMIT_REFINE:
        a_c = a
        b_c = b
        merge_c = 0
        for i in range(n):
            w_c = weights[i]
            out[k] = a_c * w_c + merge_c
            k += 1
            if labs[i] != m:
                out[k] = b_c * w_c
                k += 1
                merge_c = 0
            else:
                merge_c = b_c * w_c
        return out
    merge = 0
    for i in range(n):
        w = weights[i]
        out[k] = a * w + merge
        k += 1
        bw = b * w
        if labs[i] != m:
            out[k] = bw
            k += 1
            merge = 0
        else:
            merge = bw
    return out


def max_pair_ratio(list values, max_value=0):
    """(num, den, argmax) of max_j max(r_j, 1/r_j) over pair-sum ratios."""
    cdef Py_ssize_t n = len(values)
    cdef Py_ssize_t j, best_j = -1
    cdef long long s0, s1, nn, dd, bn, bd
    cdef object os0, os1, onn, odd, obn, obd
    if n < 3:
        return 0, 1, -1
    if 0 < max_value <= _LIMIT_PAIR:
        bn = 0
        bd = 1
        s0 = <long long> values[0] + <long long> values[1]
        for j in range(n - 2):
            s1 = <long long> values[j + 1] + <long long> values[j + 2]
            if s0 >= s1:
                nn = s0
                dd = s1
            else:
                nn = s1
                dd = s0
            if nn * bd > bn * dd:
                bn = nn
                bd = dd
                best_j = j
            s0 = s1
        return bn, bd, best_j
    obn = 0
    obd = 1
    os0 = values[0] + values[1]
    for j in range(n - 2):
        os1 = values[j + 1] + values[j + 2]
        if os0 >= os1:
            onn = os0
            odd = os1
        else:
            onn = os1
            odd = os0
        if onn * obd > obn * odd:
            obn = onn
            obd = odd
            best_j = j
        os0 = os1
    return obn, obd, best_j


def max_adjacent_ratio(list values, max_value=0):
    """(num, den, argmax) of max_j max(v_j/v_{j+1}, v_{j+1}/v_j)."""
    cdef Py_ssize_t n = len(values)
    cdef Py_ssize_t j, best_j = -1
    cdef long long v0, v1, nn, dd, bn, bd
    cdef object ov0, ov1, onn, odd, obn, obd
    if n < 2:
        return 0, 1, -1
    if 0 < max_value <= _LIMIT_ADJ:
        bn = 0
        bd = 1
        for j in range(n - 1):
            v0 = <long long> values[j]
            v1 = <long long> values[j + 1]
            if v0 >= v1:
                nn = v0
                dd = v1
            else:
                nn = v1
                dd = v0
            if nn * bd > bn * dd:
                bn = nn
                bd = dd
                best_j = j
        return bn, bd, best_j
    obn = 0
    obd = 1
    for j in range(n - 1):
        ov0 = values[j]
        ov1 = values[j + 1]
        if ov0 >= ov1:
            onn = ov0
            odd = ov1
        else:
            onn = ov1
            odd = ov0
        if onn * obd > obn * odd:
            obn = onn
            obd = odd
            best_j = j
    return obn, obd, best_j
