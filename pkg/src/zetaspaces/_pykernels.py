"""Pure-Python versions of the hot kernels; ``_ckernels.pyx`` mirrors them line by line.

Field elements use the integer encoding of :mod:`zetaspaces.ffield` and all
arithmetic goes through exp/log/Zech tables of a primitive element ``g``:
``exp[i] = g^i``, ``log[exp[i]] = i`` (``log[0] = -1``) and
``zech[i] = log(1 + g^i)`` (``-1`` when ``1 + g^i = 0``).
"""
from array import array


def build_tables(p, k, modulus, g):
    q = p**k
    qm1 = q - 1
    exp_t = array("q", bytes(8 * qm1))
    log_t = array("q", [-1]) * q
    zech_t = array("q", bytes(8 * qm1))
    if p == 2:
        mod_int = sum(c << i for i, c in enumerate(modulus))
        top = 1 << k
        g_bits = [j for j in range(k) if (g >> j) & 1]
        cur = 1
        for i in range(qm1):
            exp_t[i] = cur
            log_t[cur] = i
            acc, shifted, pos = 0, cur, 0
            for j in g_bits:
                while pos < j:
                    shifted <<= 1
                    if shifted & top:
                        shifted ^= mod_int
                    pos += 1
                acc ^= shifted
            cur = acc
    else:
        g_digits = [(g // p**i) % p for i in range(k)]
        cur_d = [1] + [0] * (k - 1)
        powers = [p**i for i in range(k)]
        for i in range(qm1):
            cur = sum(d * w for d, w in zip(cur_d, powers))
            exp_t[i] = cur
            log_t[cur] = i
            acc = [0] * k
            shifted = list(cur_d)
            for j in range(k):
                if j:
                    t = shifted[k - 1]
                    shifted = [0] + shifted[:-1]
                    if t:
                        for m in range(k):
                            shifted[m] = (shifted[m] - t * modulus[m]) % p
                gj = g_digits[j]
                if gj:
                    for m in range(k):
                        acc[m] = (acc[m] + gj * shifted[m]) % p
            cur_d = acc
    for i in range(qm1):
        x = exp_t[i]
        if p == 2:
            y = x ^ 1
        else:
            low = x % p
            y = x - low + (low + 1) % p
        zech_t[i] = log_t[y] if y else -1
    return exp_t, log_t, zech_t


class _Field:
    __slots__ = ("p", "q", "qm1", "half", "exp", "log", "zech")

    def __init__(self, p, q, exp_t, log_t, zech_t):
        self.p = p
        self.q = q
        self.qm1 = q - 1
        self.half = (q - 1) // 2
        self.exp = exp_t
        self.log = log_t
        self.zech = zech_t

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        s = self.log[a] + self.log[b]
        if s >= self.qm1:
            s -= self.qm1
        return self.exp[s]

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        if a == 0:
            return b
        if b == 0:
            return a
        la = self.log[a]
        d = self.log[b] - la
        if d < 0:
            d += self.qm1
        z = self.zech[d]
        if z < 0:
            return 0
        s = la + z
        if s >= self.qm1:
            s -= self.qm1
        return self.exp[s]

    def neg(self, a):
        if self.p == 2 or a == 0:
            return a
        return self.exp[(self.log[a] + self.half) % self.qm1]

    def inv(self, a):
        la = self.log[a]
        return self.exp[(self.qm1 - la) % self.qm1]


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _monic(F, a):
    lead = a[-1]
    if lead == 1:
        return a
    inv = F.inv(lead)
    return [F.mul(c, inv) for c in a]


def _rem(F, a, m):
    # m monic
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        c = a[-1]
        if c:
            shift = len(a) - 1 - dm
            for i in range(dm):
                a[shift + i] = F.add(a[shift + i], F.neg(F.mul(c, m[i])))
        a.pop()
        _trim(a)
    return a


def _gcd(F, a, b):
    while b:
        b = _monic(F, b)
        a, b = b, _rem(F, a, b)
    return a


def _mulmod(F, a, b, m):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return _rem(F, _trim(out), m)


def _count_roots(F, polys):
    h = None
    for c in polys:
        c = _trim(c)
        if c:
            h = c if h is None else _gcd(F, h, c)
            if len(h) == 1:
                return 0
    if h is None:
        return F.q
    h = _monic(F, h)
    deg = len(h) - 1
    if deg == 1:
        return 1
    # r = y^q mod h by left-to-right binary exponentiation
    r = [1]
    for bit in bin(F.q)[2:]:
        r = _mulmod(F, r, r, h)
        if bit == "1":
            r = _rem(F, [0] + r, h)
    r = r + [0] * (2 - len(r))
    r[1] = F.add(r[1], F.neg(1))
    g = _gcd(F, h, _trim(r))
    return len(g) - 1


def count_roots_range(p, q, exp_t, log_t, zech_t, n_enum, max_ydeg,
                      poly_start, mono_coef, mono_exps, mono_ydeg, start, stop):
    """Sum over enumerated tuples ``start <= idx < stop`` of the number of
    ``y`` in ``F_q`` where every polynomial vanishes.

    ``idx`` encodes the enumerated variables in base ``q`` (variable 0 is the
    least significant digit). Polynomial ``j`` owns monomials
    ``poly_start[j] <= t < poly_start[j+1]``.
    """
    F = _Field(p, q, exp_t, log_t, zech_t)
    n_polys = len(poly_start) - 1
    logs = [0] * n_enum
    xs = [0] * n_enum
    qm1 = q - 1
    total = 0
    for idx in range(start, stop):
        rest = idx
        for i in range(n_enum):
            xs[i] = rest % q
            rest //= q
            logs[i] = log_t[xs[i]]
        polys = []
        for j in range(n_polys):
            c = [0] * (max_ydeg + 1)
            for t in range(poly_start[j], poly_start[j + 1]):
                val = mono_coef[t]
                base = t * n_enum
                lg = log_t[val]
                for i in range(n_enum):
                    e = mono_exps[base + i]
                    if e:
                        if xs[i] == 0:
                            lg = -1
                            break
                        lg = (lg + logs[i] * e) % qm1
                if lg >= 0:
                    d = mono_ydeg[t]
                    c[d] = F.add(c[d], exp_t[lg])
            polys.append(c)
        total += _count_roots(F, polys)
    return total
