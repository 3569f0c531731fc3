# cython: language_level=3
"""C versions of the kernels in ``_pykernels.py``; same algorithms, same results."""
from array import array

cdef enum:
    MAXDEG = 64
    MAXW = 132

ctypedef long long i64


cdef struct Field:
    i64 p
    i64 q
    i64 qm1
    i64 half
    const i64* exp_t
    const i64* log_t
    const i64* zech_t


cdef inline i64 fmul(const Field* F, i64 a, i64 b) noexcept nogil:
    if a == 0 or b == 0:
        return 0
    cdef i64 s = F.log_t[a] + F.log_t[b]
    if s >= F.qm1:
        s -= F.qm1
    return F.exp_t[s]


cdef inline i64 fadd(const Field* F, i64 a, i64 b) noexcept nogil:
    if F.p == 2:
        return a ^ b
    if a == 0:
        return b
    if b == 0:
        return a
    cdef i64 la = F.log_t[a]
    cdef i64 d = F.log_t[b] - la
    if d < 0:
        d += F.qm1
    cdef i64 z = F.zech_t[d]
    if z < 0:
        return 0
    cdef i64 s = la + z
    if s >= F.qm1:
        s -= F.qm1
    return F.exp_t[s]


cdef inline i64 fneg(const Field* F, i64 a) noexcept nogil:
    if F.p == 2 or a == 0:
        return a
    return F.exp_t[(F.log_t[a] + F.half) % F.qm1]


cdef inline i64 finv(const Field* F, i64 a) noexcept nogil:
    return F.exp_t[(F.qm1 - F.log_t[a]) % F.qm1]


# Polynomials are coefficient arrays plus a length (degree + 1, 0 for zero).

cdef inline int ptrim(i64* a, int n) noexcept nogil:
    while n > 0 and a[n - 1] == 0:
        n -= 1
    return n


cdef void pmonic(const Field* F, i64* a, int n) noexcept nogil:
    cdef i64 lead = a[n - 1]
    if lead == 1:
        return
    cdef i64 inv = finv(F, lead)
    cdef int i
    for i in range(n):
        a[i] = fmul(F, a[i], inv)


cdef int prem(const Field* F, i64* a, int n, const i64* m, int nm) noexcept nogil:
    # m monic of length nm
    cdef int dm = nm - 1
    cdef int shift, i
    cdef i64 c
    while n - 1 >= dm and n > 0:
        c = a[n - 1]
        if c:
            shift = n - 1 - dm
            for i in range(dm):
                a[shift + i] = fadd(F, a[shift + i], fneg(F, fmul(F, c, m[i])))
        a[n - 1] = 0
        n -= 1
        n = ptrim(a, n)
    return n


cdef int pgcd(const Field* F, i64* a, int na, i64* b, int nb) noexcept nogil:
    # result left in a; b is clobbered
    cdef i64 tmp[MAXW]
    cdef int i, nt
    while nb > 0:
        pmonic(F, b, nb)
        for i in range(na):
            tmp[i] = a[i]
        nt = prem(F, tmp, na, b, nb)
        for i in range(nb):
            a[i] = b[i]
        na = nb
        for i in range(nt):
            b[i] = tmp[i]
        nb = nt
    return na


cdef int pmulmod(const Field* F, const i64* a, int na, const i64* b, int nb,
                 const i64* m, int nm, i64* out) noexcept nogil:
    cdef int i, j, n
    if na == 0 or nb == 0:
        return 0
    n = na + nb - 1
    for i in range(n):
        out[i] = 0
    for i in range(na):
        if a[i]:
            for j in range(nb):
                if b[j]:
                    out[i + j] = fadd(F, out[i + j], fmul(F, a[i], b[j]))
    n = ptrim(out, n)
    return prem(F, out, n, m, nm)


cdef i64 count_roots(const Field* F, i64* coeffs, int n_polys, int width) noexcept nogil:
    cdef i64 h[MAXW]
    cdef i64 b[MAXW]
    cdef i64 r[MAXW]
    cdef i64 s[MAXW]
    cdef int nh = -1
    cdef int j, i, nb, nr, ns, deg, bit
    for j in range(n_polys):
        nb = ptrim(coeffs + j * width, width)
        if nb == 0:
            continue
        if nh < 0:
            for i in range(nb):
                h[i] = coeffs[j * width + i]
            nh = nb
        else:
            for i in range(nb):
                b[i] = coeffs[j * width + i]
            nh = pgcd(F, h, nh, b, nb)
        if nh == 1:
            return 0
    if nh < 0:
        return F.q
    pmonic(F, h, nh)
    deg = nh - 1
    if deg == 1:
        return 1
    r[0] = 1
    nr = 1
    bit = 62
    while bit >= 0 and not ((F.q >> bit) & 1):
        bit -= 1
    while bit >= 0:
        ns = pmulmod(F, r, nr, r, nr, h, nh, s)
        for i in range(ns):
            r[i] = s[i]
        nr = ns
        if (F.q >> bit) & 1:
            # multiply by y
            for i in range(nr, 0, -1):
                r[i] = r[i - 1]
            r[0] = 0
            nr = prem(F, r, nr + 1, h, nh)
        bit -= 1
    while nr < 2:
        r[nr] = 0
        nr += 1
    r[1] = fadd(F, r[1], fneg(F, 1))
    nr = ptrim(r, nr)
    nh = pgcd(F, h, nh, r, nr)
    return nh - 1


def build_tables(long long p, long long k, modulus, long long g):
    cdef i64 q = p ** k
    cdef i64 qm1 = q - 1
    exp_a = array("q", bytes(8 * qm1))
    log_a = array("q", [-1]) * q
    zech_a = array("q", bytes(8 * qm1))
    cdef i64[::1] exp_t = exp_a
    cdef i64[::1] log_t = log_a
    cdef i64[::1] zech_t = zech_a
    cdef i64 mods[MAXDEG]
    cdef i64 gd[MAXDEG]
    cdef i64 cur[MAXDEG]
    cdef i64 sh[MAXDEG]
    cdef i64 acc[MAXDEG]
    cdef i64 i, j, m, t, code, w, x, y, low, gg
    if k >= MAXDEG:
        raise ValueError("extension degree too large")
    for i in range(k + 1):
        mods[i] = modulus[i]
    gg = g
    for i in range(k):
        gd[i] = gg % p
        gg //= p
        cur[i] = 0
    cur[0] = 1
    with nogil:
        for i in range(qm1):
            code = 0
            w = 1
            for m in range(k):
                code += cur[m] * w
                w *= p
            exp_t[i] = code
            log_t[code] = i
            for m in range(k):
                acc[m] = 0
                sh[m] = cur[m]
            for j in range(k):
                if j:
                    t = sh[k - 1]
                    for m in range(k - 1, 0, -1):
                        sh[m] = sh[m - 1]
                    sh[0] = 0
                    if t:
                        for m in range(k):
                            sh[m] = ((sh[m] - t * mods[m]) % p + p) % p
                if gd[j]:
                    for m in range(k):
                        acc[m] = (acc[m] + gd[j] * sh[m]) % p
            for m in range(k):
                cur[m] = acc[m]
        for i in range(qm1):
            x = exp_t[i]
            if p == 2:
                y = x ^ 1
            else:
                low = x % p
                y = x - low + (low + 1) % p
            zech_t[i] = log_t[y] if y else -1
    return exp_a, log_a, zech_a


def count_roots_range(long long p, long long q, exp_a, log_a, zech_a, int n_enum, int max_ydeg,
                      poly_start_a, mono_coef_a, mono_exps_a, mono_ydeg_a,
                      long long start, long long stop):
    cdef const i64[::1] exp_t = exp_a
    cdef const i64[::1] log_t = log_a
    cdef const i64[::1] zech_t = zech_a
    cdef const i64[::1] poly_start = poly_start_a
    cdef const i64[::1] mono_coef = mono_coef_a
    cdef const i64[::1] mono_exps = mono_exps_a
    cdef const i64[::1] mono_ydeg = mono_ydeg_a
    cdef int n_polys = poly_start.shape[0] - 1
    cdef int width = max_ydeg + 1
    if width > MAXDEG:
        raise ValueError("degree in the eliminated variable is too large for the C kernel")
    if n_polys > 64 or n_enum > 64:
        raise ValueError("too many polynomials or variables for the C kernel")
    cdef Field F
    F.p = p
    F.q = q
    F.qm1 = q - 1
    F.half = (q - 1) // 2
    F.exp_t = &exp_t[0]
    F.log_t = &log_t[0]
    F.zech_t = &zech_t[0] if zech_t.shape[0] > 0 else NULL
    cdef i64 coeffs[64 * MAXDEG]
    cdef i64 xs[64]
    cdef i64 logs[64]
    cdef i64 idx, rest, total = 0, lg, e, base
    cdef int i, j, t, d
    with nogil:
        for idx in range(start, stop):
            rest = idx
            for i in range(n_enum):
                xs[i] = rest % q
                rest = rest // q
                logs[i] = log_t[xs[i]]
            for j in range(n_polys * width):
                coeffs[j] = 0
            for j in range(n_polys):
                for t in range(poly_start[j], poly_start[j + 1]):
                    lg = log_t[mono_coef[t]]
                    base = t * n_enum
                    for i in range(n_enum):
                        e = mono_exps[base + i]
                        if e:
                            if xs[i] == 0:
                                lg = -1
                                break
                            lg = (lg + logs[i] * e) % F.qm1
                    if lg >= 0:
                        d = mono_ydeg[t]
                        coeffs[j * width + d] = fadd(&F, coeffs[j * width + d], exp_t[lg])
            total += count_roots(&F, coeffs, n_polys, width)
    return total
