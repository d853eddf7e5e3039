"""numba kernels for the dense eigensolvers and LU.

All routines work in place on ``complex128`` (or ``float64`` for the
tridiagonal QL) arrays.  Exact zeros are skipped in the inner loops, so
banded inputs (the direct-mode Hamiltonians are tridiagonal) cost far less
than the dense O(n^3) bound.
"""

import math

import numpy as np
from numba import njit

DEFLATE_TOL = 1e-13


@njit(cache=True)
def balance(a):
    """Parlett-Reinsch scaling by powers of two; returns the diagonal scale."""
    n = a.shape[0]
    scale = np.ones(n)
    radix = 2.0
    converged = False
    while not converged:
        converged = True
        for i in range(n):
            c = 0.0
            r = 0.0
            for j in range(n):
                if j != i:
                    c += abs(a[j, i])
                    r += abs(a[i, j])
            if c == 0.0 or r == 0.0:
                continue
            g = r / radix
            f = 1.0
            s = c + r
            while c < g:
                f *= radix
                c *= radix * radix
            g = r * radix
            while c > g:
                f /= radix
                c /= radix * radix
            if (c + r) / f < 0.95 * s:
                converged = False
                scale[i] *= f
                for j in range(n):
                    a[i, j] /= f
                for j in range(n):
                    a[j, i] *= f
    return scale


@njit(cache=True)
def hessenberg(a):
    """Householder reduction ``A <- U^H A U`` to upper Hessenberg form."""
    n = a.shape[0]
    u = np.empty(n, dtype=np.complex128)
    for k in range(n - 2):
        tail = 0.0
        for i in range(k + 2, n):
            tail += a[i, k].real ** 2 + a[i, k].imag ** 2
        if tail == 0.0:
            continue
        x0 = a[k + 1, k]
        norm = math.sqrt(tail + x0.real ** 2 + x0.imag ** 2)
        ax0 = abs(x0)
        phase = x0 / ax0 if ax0 > 0.0 else 1.0 + 0.0j
        # u = x + phase*|x| e1 ; H = I - 2 u u^H / (u^H u)
        m = n - k - 1
        u[0] = x0 + phase * norm
        for i in range(1, m):
            u[i] = a[k + 1 + i, k]
        uu = tail + abs(u[0]) ** 2
        beta = 2.0 / uu
        # left: A[k+1:, k:] -= beta u (u^H A)
        for j in range(k, n):
            s = 0.0j
            for i in range(m):
                s += u[i].conjugate() * a[k + 1 + i, j]
            if s != 0.0:
                s *= beta
                for i in range(m):
                    a[k + 1 + i, j] -= u[i] * s
        # right: A[:, k+1:] -= beta (A u) u^H
        for i in range(n):
            s = 0.0j
            for j in range(m):
                s += a[i, k + 1 + j] * u[j]
            if s != 0.0:
                s *= beta
                for j in range(m):
                    a[i, k + 1 + j] -= s * u[j].conjugate()
        a[k + 1, k] = -phase * norm
        for i in range(k + 2, n):
            a[i, k] = 0.0
    return a


@njit(cache=True)
def _givens(x, y):
    """c real, s complex with [[c, s], [-conj(s), c]] @ [x, y] = [r, 0]."""
    if y == 0.0:
        return 1.0, 0.0j
    ay = abs(y)
    ax = abs(x)
    if ax == 0.0:
        return 0.0, y.conjugate() / ay
    norm = math.hypot(ax, ay)
    return ax / norm, (x / ax) * y.conjugate() / norm


@njit(cache=True)
def hessenberg_qr(h, max_iter_factor):
    """Eigenvalues of an upper Hessenberg matrix by single-shift complex QR.

    Wilkinson shifts, exceptional shifts every 10th iteration, deflation
    when ``|h[k,k-1]| <= 1e-13 (|h[k-1,k-1]| + |h[k,k]|)``.  Only the
    active window is updated (eigenvalues only).

    Returns (eigenvalues, status, iterations); status is the index of the
    eigenvalue that failed to converge, or -1.
    """
    n = h.shape[0]
    w = np.zeros(n, dtype=np.complex128)
    itmax = max_iter_factor * max(n, 1)
    hnorm = 0.0
    for i in range(n):
        for j in range(max(0, i - 1), n):
            hnorm = max(hnorm, abs(h[i, j]))
    small = 1e-300 + DEFLATE_TOL * hnorm * 1e-3
    ihi = n - 1
    total = 0
    while ihi >= 0:
        its = 0
        while True:
            l = ihi
            while l > 0:
                sub = abs(h[l, l - 1])
                tst = abs(h[l - 1, l - 1]) + abs(h[l, l])
                if tst == 0.0:
                    if sub <= small:
                        break
                elif sub <= DEFLATE_TOL * tst:
                    break
                l -= 1
            if l > 0:
                h[l, l - 1] = 0.0
            if l == ihi:
                w[ihi] = h[ihi, ihi]
                ihi -= 1
                break
            if its >= itmax:
                return w, ihi, total
            its += 1
            total += 1
            if its % 10 == 0:
                shift = h[ihi, ihi] + 0.75 * abs(h[ihi, ihi - 1].real)
            else:
                a = h[ihi - 1, ihi - 1]
                b = h[ihi - 1, ihi]
                c = h[ihi, ihi - 1]
                d = h[ihi, ihi]
                half = 0.5 * (a - d)
                disc = np.sqrt(half * half + b * c)
                m1 = d + half + disc
                m2 = d + half - disc
                shift = m1 if abs(m1 - d) <= abs(m2 - d) else m2
            x = h[l, l] - shift
            y = h[l + 1, l]
            for k in range(l, ihi):
                if k > l:
                    x = h[k, k - 1]
                    y = h[k + 1, k - 1]
                c, s = _givens(x, y)
                sc = s.conjugate()
                j0 = k - 1 if k > l else l
                for j in range(j0, ihi + 1):
                    t1 = h[k, j]
                    t2 = h[k + 1, j]
                    h[k, j] = c * t1 + s * t2
                    h[k + 1, j] = c * t2 - sc * t1
                if k > l:
                    h[k + 1, k - 1] = 0.0
                i1 = min(k + 2, ihi)
                for i in range(l, i1 + 1):
                    t1 = h[i, k]
                    t2 = h[i, k + 1]
                    h[i, k] = c * t1 + sc * t2
                    h[i, k + 1] = c * t2 - s * t1
    return w, -1, total


@njit(cache=True)
def lu_factor(a, piv):
    """In-place partial-pivoting LU.  Returns the smallest |pivot| seen."""
    n = a.shape[0]
    minpiv = np.inf
    for k in range(n):
        p = k
        best = abs(a[k, k])
        for i in range(k + 1, n):
            v = abs(a[i, k])
            if v > best:
                best = v
                p = i
        piv[k] = p
        if p != k:
            for j in range(n):
                t = a[k, j]
                a[k, j] = a[p, j]
                a[p, j] = t
        pivot = a[k, k]
        minpiv = min(minpiv, abs(pivot))
        if pivot == 0.0:
            continue
        # last nonzero column of the pivot row bounds the update
        jmax = k
        for j in range(n - 1, k, -1):
            if a[k, j] != 0.0:
                jmax = j
                break
        for i in range(k + 1, n):
            if a[i, k] == 0.0:
                continue
            f = a[i, k] / pivot
            a[i, k] = f
            for j in range(k + 1, jmax + 1):
                a[i, j] -= f * a[k, j]
    return minpiv


@njit(cache=True)
def lu_solve_factored(lu, piv, b):
    """Solve with factors from :func:`lu_factor`; ``b`` (n, m) overwritten."""
    n = lu.shape[0]
    m = b.shape[1]
    for k in range(n):
        p = piv[k]
        if p != k:
            for c in range(m):
                t = b[k, c]
                b[k, c] = b[p, c]
                b[p, c] = t
    for c in range(m):
        for k in range(n):
            v = b[k, c]
            if v != 0.0:
                for i in range(k + 1, n):
                    f = lu[i, k]
                    if f != 0.0:
                        b[i, c] -= f * v
        for k in range(n - 1, -1, -1):
            v = b[k, c]
            for j in range(k + 1, n):
                u = lu[k, j]
                if u != 0.0:
                    v -= u * b[j, c]
            b[k, c] = v / lu[k, k]
    return b


@njit(cache=True)
def lu_solve_adjoint(lu, piv, b):
    """Solve ``A^H y = b`` with the LU factors of A (``P A = L U``)."""
    n = lu.shape[0]
    # U^H z = b
    for k in range(n):
        v = b[k]
        for j in range(k):
            u = lu[j, k]
            if u != 0.0:
                v -= u.conjugate() * b[j]
        b[k] = v / lu[k, k].conjugate()
    # L^H t = z
    for k in range(n - 1, -1, -1):
        v = b[k]
        for i in range(k + 1, n):
            f = lu[i, k]
            if f != 0.0:
                v -= f.conjugate() * b[i]
        b[k] = v
    for k in range(n - 1, -1, -1):
        p = piv[k]
        if p != k:
            t = b[k]
            b[k] = b[p]
            b[p] = t
    return b


@njit(cache=True)
def hermitian_tridiagonalize(a, want_q):
    """Householder reduction of a Hermitian matrix to real tridiagonal form.

    Returns (d, e, q) with ``A = q T q^H``; T has diagonal d and
    sub/super-diagonal e (real, after a diagonal phase change folded into q).
    Only the lower triangle of ``a`` is referenced; ``a`` is destroyed.
    """
    n = a.shape[0]
    us = np.zeros((n, n), dtype=np.complex128)
    betas = np.zeros(n)
    p = np.empty(n, dtype=np.complex128)
    for k in range(n - 2):
        tail = 0.0
        for i in range(k + 2, n):
            tail += a[i, k].real ** 2 + a[i, k].imag ** 2
        if tail == 0.0:
            continue
        m = n - k - 1
        x0 = a[k + 1, k]
        norm = math.sqrt(tail + x0.real ** 2 + x0.imag ** 2)
        ax0 = abs(x0)
        phase = x0 / ax0 if ax0 > 0.0 else 1.0 + 0.0j
        u = us[k, :m]
        u[0] = x0 + phase * norm
        for i in range(1, m):
            u[i] = a[k + 1 + i, k]
        beta = 2.0 / (tail + abs(u[0]) ** 2)
        betas[k] = beta
        # p = beta * B u with B the trailing Hermitian block (lower triangle)
        for i in range(m):
            p[i] = 0.0
        for j in range(m):
            uj = u[j]
            p[j] += a[k + 1 + j, k + 1 + j].real * uj
            for i in range(j + 1, m):
                bij = a[k + 1 + i, k + 1 + j]
                if bij != 0.0:
                    p[i] += bij * uj
                    p[j] += bij.conjugate() * u[i]
        for i in range(m):
            p[i] *= beta
        # q = p - (beta/2)(u^H p) u ; B <- B - u q^H - q u^H
        kk = 0.0j
        for i in range(m):
            kk += u[i].conjugate() * p[i]
        kk *= 0.5 * beta
        for i in range(m):
            p[i] -= kk * u[i]
        for j in range(m):
            uj = u[j].conjugate()
            qj = p[j].conjugate()
            for i in range(j, m):
                a[k + 1 + i, k + 1 + j] -= u[i] * qj + p[i] * uj
        a[k + 1, k] = -phase * norm
        for i in range(k + 2, n):
            a[i, k] = 0.0
    d = np.empty(n)
    e = np.zeros(n)
    for i in range(n):
        d[i] = a[i, i].real
    phases = np.ones(n, dtype=np.complex128)
    for i in range(n - 1):
        s = a[i + 1, i]
        ab = abs(s)
        e[i] = ab
        phases[i + 1] = phases[i] * (s / ab if ab > 0.0 else 1.0)
    q = np.zeros((n, n), dtype=np.complex128)
    if want_q:
        for i in range(n):
            q[i, i] = 1.0
        # q = H_0 H_1 ... H_{n-3}, accumulated backwards on the trailing block
        for k in range(n - 3, -1, -1):
            beta = betas[k]
            if beta == 0.0:
                continue
            m = n - k - 1
            u = us[k, :m]
            for j in range(k + 1, n):
                s = 0.0j
                for i in range(m):
                    s += u[i].conjugate() * q[k + 1 + i, j]
                if s != 0.0:
                    s *= beta
                    for i in range(m):
                        q[k + 1 + i, j] -= u[i] * s
        for j in range(n):
            for i in range(n):
                q[i, j] *= phases[j]
    return d, e, q


@njit(cache=True)
def tridiagonal_ql(d, e, z, want_z, max_iter):
    """Implicit QL with Wilkinson-type shifts on a real symmetric tridiagonal.

    d (n,) diagonal, e (n,) with e[i] = T[i+1, i] (e[n-1] unused).
    Rotations are accumulated into the columns of z when want_z.
    Returns status: -1 on success, else the index that failed.
    """
    n = d.shape[0]
    ee = np.zeros(n + 1)
    for i in range(n - 1):
        ee[i] = e[i]
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(ee[m]) <= DEFLATE_TOL * dd or abs(ee[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            if it >= max_iter:
                return l
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * ee[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + ee[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * ee[i]
                b = c * ee[i]
                r = math.hypot(f, g)
                ee[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    ee[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if want_z:
                    for k in range(z.shape[0]):
                        f2 = z[k, i + 1]
                        z[k, i + 1] = s * z[k, i] + c * f2
                        z[k, i] = c * z[k, i] - s * f2
            if underflow:
                continue
            d[l] -= p
            ee[l] = g
            ee[m] = 0.0
    return -1
