"""Integer-order Bessel functions of the first kind.

For ``x < 12`` the ascending series

    J_n(x) = sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!)

is summed until the terms fall below 1e-17 relative to the largest term
(at least 20 terms). For ``0 <= x < 12`` the largest term is below 5e3, so
cancellation costs at most ~4 digits and the absolute error stays under
1e-12. Larger arguments switch to Miller's backward recurrence normalised
with ``J_0 + 2 sum_k J_2k = 1``.
"""
import math

SERIES_LIMIT = 12.0


def _series(n: int, x: float) -> float:
    half = 0.5 * x
    term = half ** n / math.factorial(n)
    terms = [term]
    k = 0
    biggest = abs(term)
    while True:
        k += 1
        term *= -(half * half) / (k * (k + n))
        terms.append(term)
        biggest = max(biggest, abs(term))
        if k >= 20 and abs(term) <= 1e-17 * biggest:
            break
    return math.fsum(terms)


def _miller(n: int, x: float) -> float:
    start = 2 * ((max(n, int(x)) + 30 + int(math.sqrt(40 * max(n, int(x))))) // 2)
    j_next, j_cur = 0.0, 1e-300
    norm = 0.0
    want = 0.0
    for k in range(start, 0, -1):
        j_prev = 2.0 * k / x * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        if abs(j_cur) > 1e250:
            j_cur *= 1e-250
            j_next *= 1e-250
            norm *= 1e-250
            want *= 1e-250
        if k - 1 == n:
            want = j_cur
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * j_cur
    norm += j_cur  # J_0
    if n == 0:
        want = j_cur
    return want / norm


def bessel_jn(n: int, x: float) -> float:
    """J_n(x) for integer ``n`` (any sign) and real ``x``."""
    n = int(n)
    sign = 1.0
    if n < 0:
        n = -n
        sign = -1.0 if n % 2 else 1.0
    if x < 0:
        x = -x
        if n % 2:
            sign = -sign
    if x == 0.0:
        return sign * (1.0 if n == 0 else 0.0)
    if x < SERIES_LIMIT:
        return sign * _series(n, x)
    return sign * _miller(n, x)


def bessel_j2(x: float) -> float:
    return bessel_jn(2, x)
