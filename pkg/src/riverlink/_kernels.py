"""Compiled inner loops for the RS-intersection counts.

Rivers are uint8 arrays (R = 1, L = 0).  Every scanned pair starts at differing
letters, so a shared stretch is shorter than m + n; the kernels still return -1
if that bound is ever exceeded rather than loop.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def rs_naive(x, y):
    m = x.shape[0]
    n = y.shape[0]
    limit = m + n + 1
    count = 0
    for i in range(m):
        if x[i] != 0:
            continue
        for j in range(n):
            if y[j] != 1:
                continue
            a = i + 1
            if a == m:
                a = 0
            b = j + 1
            if b == n:
                b = 0
            k = 1
            while x[a] == y[b]:
                k += 1
                if k > limit:
                    return -1
                a += 1
                if a == m:
                    a = 0
                b += 1
                if b == n:
                    b = 0
            if x[a] == 1:
                count += 1
    return count


@njit(cache=True)
def rs_pairs(x, y):
    """Start positions (i, j) of every RS meeting: x_i = 0, y_j = 1, exit x = 1."""
    m = x.shape[0]
    n = y.shape[0]
    limit = m + n + 1
    zeros = 0
    for i in range(m):
        if x[i] == 0:
            zeros += 1
    ones = 0
    for j in range(n):
        if y[j] == 1:
            ones += 1
    out_i = np.empty(zeros * ones, np.int64)
    out_j = np.empty(zeros * ones, np.int64)
    out_k = np.empty(zeros * ones, np.int64)
    count = 0
    for i in range(m):
        if x[i] != 0:
            continue
        for j in range(n):
            if y[j] != 1:
                continue
            k = 1
            while x[(i + k) % m] == y[(j + k) % n]:
                k += 1
                if k > limit:
                    return out_i[:0], out_j[:0], out_k[:0], False
            if x[(i + k) % m] == 1:
                out_i[count] = i
                out_j[count] = j
                out_k[count] = k
                count += 1
    return out_i[:count], out_j[:count], out_k[:count], True


@njit(cache=True)
def _partition(buf, lo, hi, word):
    # move entries with word[entry] == 0 to the front of buf[lo:hi]; return their count
    i = lo
    j = hi - 1
    while True:
        while i <= j and word[buf[i]] == 0:
            i += 1
        while i <= j and word[buf[j]] == 1:
            j -= 1
        if i >= j:
            break
        tmp = buf[i]
        buf[i] = buf[j]
        buf[j] = tmp
    return i - lo


@njit(cache=True)
def _shift(buf, lo, hi, size):
    for t in range(lo, hi):
        v = buf[t] + 1
        buf[t] = 0 if v == size else v


@njit(cache=True)
def rs_fast(x, y):
    m = x.shape[0]
    n = y.shape[0]
    buf1 = np.empty(m, np.int64)
    buf2 = np.empty(n, np.int64)
    len1 = 0
    for i in range(m):
        if x[i] == 0:
            buf1[len1] = i + 1 if i + 1 < m else 0
            len1 += 1
    len2 = 0
    for j in range(n):
        if y[j] == 1:
            buf2[len2] = j + 1 if j + 1 < n else 0
            len2 += 1
    cap = m + n + 8
    st = np.empty((cap, 5), np.int64)
    sp = 0
    if len1 > 0 and len2 > 0:
        st[0, 0] = 0
        st[0, 1] = len1
        st[0, 2] = 0
        st[0, 3] = len2
        st[0, 4] = 1
        sp = 1
    total = 0
    limit = m + n + 1
    while sp > 0:
        sp -= 1
        s1 = st[sp, 0]
        e1 = st[sp, 1]
        s2 = st[sp, 2]
        e2 = st[sp, 3]
        depth = st[sp, 4]
        if depth > limit:
            return -1
        z1 = _partition(buf1, s1, e1, x)
        z2 = _partition(buf2, s2, e2, y)
        o1 = e1 - s1 - z1
        o2 = e2 - s2 - z2
        total += o1 * z2
        _shift(buf1, s1, e1, m)
        _shift(buf2, s2, e2, n)
        if z1 > 0 and z2 > 0:
            st[sp, 0] = s1
            st[sp, 1] = s1 + z1
            st[sp, 2] = s2
            st[sp, 3] = s2 + z2
            st[sp, 4] = depth + 1
            sp += 1
        if o1 > 0 and o2 > 0:
            st[sp, 0] = s1 + z1
            st[sp, 1] = e1
            st[sp, 2] = s2 + z2
            st[sp, 3] = e2
            st[sp, 4] = depth + 1
            sp += 1
    return total


@njit(cache=True)
def jacobi(a, n):
    """Jacobi symbol (a/n) for odd n > 0."""
    a %= n
    result = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            r = n % 8
            if r == 3 or r == 5:
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@njit(cache=True)
def epsilon_prime(d1, d2, p):
    # the nonzero one of (d1/p), (d2/p); 0 when neither is defined
    for d in (d1, d2):
        if p == 2:
            if d % 2 == 0:
                continue
            r = d % 8
            return 1 if r == 1 or r == 7 else -1
        v = jacobi(d, p)
        if v != 0:
            return v
    return 0


@njit(cache=True)
def p_of_n(d1, d2, n, primes):
    """2 * sum_{d | N} eps(d) with N = (d1 d2 - n^2) / 4, via its Euler product."""
    N = (d1 * d2 - n * n) // 4
    value = 2
    for p in primes:
        if p * p > N:
            break
        if N % p:
            continue
        e = 0
        while N % p == 0:
            N //= p
            e += 1
        eps = epsilon_prime(d1, d2, p)
        if eps == 1:
            value *= e + 1
        elif e % 2 == 1:
            return 0
    if N > 1:
        if epsilon_prime(d1, d2, N) == 1:
            value *= 2
        else:
            return 0
    return value


@njit(cache=True)
def total_formula(d1, d2, primes):
    P = d1 * d2
    bound = np.int64(np.sqrt(np.float64(P))) + 2
    while bound * bound >= P:
        bound -= 1
    start = bound
    if (start - P) % 2 != 0:
        start -= 1
    total = 0
    n = -start
    while n <= start:
        total += p_of_n(d1, d2, n, primes)
        n += 2
    return total
