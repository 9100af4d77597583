"""Finite fields F_{q^d} with deterministic, composition-compatible embeddings.

Throughout q = p^m.  A concrete field F_{q^d} is realized as F_p[x]/(f_n)
with n = m*d, where f_n comes from the shipped defining-polynomial table
(``data/field_polys.txt``).  The table is *norm-compatible*: whenever
n | n', the class of x in F_{p^n'} raised to the power
(p^n' - 1)/(p^n - 1) is a root of f_n.  The tower embedding
F_{p^n} -> F_{p^n'} is therefore the evaluation map at that power, which
composes strictly (embedding then embedding equals the direct embedding,
by exponent arithmetic alone).  The table generators are primitive, which
also gives discrete-log based root extraction without any per-run search.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from importlib import resources

from .errors import MismatchedBase, NonDivisibleDegree, UnsupportedField

# ---------------------------------------------------------------------------
# F_p[x] helpers on coefficient tuples (ascending powers, no trailing zeros)


def _ptrim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _ptrim(x % p for x in out)


def _pmod(a, f, p):
    # f monic
    a = list(a)
    df = len(f) - 1
    while len(a) > df:
        top = a.pop() % p
        if top:
            k = len(a) - df
            for i in range(df):
                a[k + i] = (a[k + i] - top * f[i]) % p
    return _ptrim(x % p for x in a)


def _pmulmod(a, b, f, p):
    return _pmod(_pmul(a, b, p), f, p)


def _ppowmod(a, e, f, p):
    r = (1,)
    a = _pmod(a, f, p)
    while e:
        if e & 1:
            r = _pmulmod(r, a, f, p)
        a = _pmulmod(a, a, f, p)
        e >>= 1
    return r


def _psub(a, b, p):
    n = max(len(a), len(b))
    return _ptrim(((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n))


def poly_is_irreducible(f, p):
    """Rabin irreducibility test for a monic f over F_p."""
    n = len(f) - 1
    if n < 1:
        return False
    x = (0, 1) if n > 1 else _pmod((0, 1), f, p)
    xq = x
    for _ in range(n):
        xq = _ppowmod(xq, p, f, p)
    if _psub(xq, x, p):
        return False
    for ell in sorted(_prime_factors(n)):
        xm = x
        for _ in range(n // ell):
            xm = _ppowmod(xm, p, f, p)
        diff = _psub(xm, x, p)
        if not diff or _pgcd(f, diff, p) != (1,):
            return False
    return True


def _pgcd(a, b, p):
    a, b = _ptrim(a), _ptrim(b)
    while b:
        inv = pow(b[-1], -1, p)
        bm = tuple(x * inv % p for x in b)
        a = _prem(a, bm, p)
        a, b = b, a
    if a:
        inv = pow(a[-1], -1, p)
        a = tuple(x * inv % p for x in a)
    return a


def _prem(a, b, p):
    a = list(a)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        top = a[-1] % p
        if top:
            k = len(a) - 1 - db
            for i in range(db + 1):
                a[k + i] = (a[k + i] - top * b[i]) % p
        a.pop()
        while a and a[-1] % p == 0:
            a.pop()
    return _ptrim(x % p for x in a)


# ---------------------------------------------------------------------------
# integer factorization (deterministic; desk-scale sizes)


@functools.lru_cache(maxsize=None)
def _prime_factors(n):
    """Set of prime factors of n (trial division + deterministic Pollard rho)."""
    fs = set()
    for sp in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        while n % sp == 0:
            fs.add(sp)
            n //= sp
    stack = [n] if n > 1 else []
    while stack:
        v = stack.pop()
        if v == 1:
            continue
        if _is_prime(v):
            fs.add(v)
            continue
        d = _pollard_rho(v)
        stack.extend([d, v // d])
    return frozenset(fs)


def _factorint(n):
    out = {}
    for f in sorted(_prime_factors(n)):
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
    return out


def _is_prime(n):
    if n < 2:
        return False
    for sp in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n):
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = _gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"pollard rho failed on {n}")


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# field descriptors and the shipped table


@dataclass(frozen=True)
class FieldDesc:
    """Description of F_{q^d} = F_{p^{m*d}} with a fixed defining polynomial.

    defining_poly is monic of degree m*d over F_p, ascending powers.
    """

    p: int
    m: int
    d: int
    defining_poly: tuple

    @property
    def q(self):
        return self.p ** self.m

    @property
    def n(self):
        return self.m * self.d

    @property
    def order(self):
        return self.p ** (self.m * self.d)

    def __repr__(self):
        return f"F_{self.p}^{self.n}" if self.m == 1 else f"F_({self.p}^{self.m})^{self.d}"


@functools.lru_cache(maxsize=1)
def _load_table():
    table = {}
    text = resources.files("drintate.data").joinpath("field_polys.txt").read_text()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        head, _, tail = line.partition(":")
        p, m, d = (int(v) for v in head.split())
        coeffs = tuple(int(v) for v in tail.split())
        table[(p, m * d)] = coeffs
    return table


@functools.lru_cache(maxsize=None)
def get_field(p, m, d):
    """The canonical FieldDesc for F_{(p^m)^d}, from the shipped table."""
    table = _load_table()
    key = (p, m * d)
    if key not in table:
        raise UnsupportedField(
            f"no defining polynomial for F_{p}^{m * d} in the shipped table; "
            f"available degrees for p={p}: "
            f"{sorted(n for (pp, n) in table if pp == p)}"
        )
    return FieldDesc(p, m, d, table[key])


class FieldElem:
    """Element of F_{q^d}: a residue-coefficient vector over F_p, ascending powers."""

    __slots__ = ("desc", "coeffs")

    def __init__(self, desc, coeffs):
        self.desc = desc
        n = desc.m * desc.d
        c = tuple(int(v) % desc.p for v in coeffs)
        if len(c) != n:
            c = (c + (0,) * n)[:n]
        self.coeffs = c

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(desc):
        return FieldElem(desc, (0,) * desc.n)

    @staticmethod
    def one(desc):
        return FieldElem(desc, (1,) + (0,) * (desc.n - 1))

    @staticmethod
    def from_int(desc, v):
        return FieldElem(desc, (v % desc.p,) + (0,) * (desc.n - 1))

    @staticmethod
    def gen(desc):
        if desc.n == 1:
            return FieldElem(desc, (1,))
        return FieldElem(desc, (0, 1) + (0,) * (desc.n - 2))

    # -- structure ---------------------------------------------------------

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, FieldElem)
            and self.desc == other.desc
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.desc.p, self.desc.n, self.coeffs))

    def __repr__(self):
        return f"FieldElem({self.desc!r}, {list(self.coeffs)})"

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        p = self.desc.p
        return FieldElem(self.desc, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        p = self.desc.p
        return FieldElem(self.desc, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        p = self.desc.p
        return FieldElem(self.desc, tuple(-a % p for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            p = self.desc.p
            return FieldElem(self.desc, tuple(a * other % p for a in self.coeffs))
        d = self.desc
        prod = _pmulmod(self.coeffs, other.coeffs, d.defining_poly, d.p)
        return FieldElem(d, prod)

    __rmul__ = __mul__

    def __pow__(self, e):
        d = self.desc
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElem(d, _ppowmod(self.coeffs, e, d.defining_poly, d.p))

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero field element")
        return self ** (self.desc.order - 2)

    def __truediv__(self, other):
        return self * other.inverse()

    # -- Frobenius ---------------------------------------------------------

    def frobenius_q(self, k=1):
        """x -> x^(q^k); for k < 0 the unique inverse image."""
        d = self.desc
        k = k % d.d
        return self ** (d.q ** k)

    def in_prime_subfield_fq(self):
        """True iff the element lies in the image of F_q inside F_{q^d}."""
        return self.frobenius_q() == self

    def as_int(self):
        """For elements of the prime field image F_p, the residue as int."""
        if any(self.coeffs[1:]):
            raise ValueError("element not in the prime field")
        return self.coeffs[0]


def inverse_frobenius(x):
    """The unique y with y^q = x (total on finite fields)."""
    d = x.desc
    return x ** (d.q ** (d.d - 1))


@functools.lru_cache(maxsize=None)
def _embed_basis_images(p, m, d_src, d_tgt):
    src = get_field(p, m, d_src)
    tgt = get_field(p, m, d_tgt)
    N = (tgt.order - 1) // (src.order - 1)
    root = FieldElem.gen(tgt) ** N
    images = [FieldElem.one(tgt)]
    for _ in range(src.n - 1):
        images.append(images[-1] * root)
    return tuple(img.coeffs for img in images)


def embed(x, target):
    """Embed x into the bigger field along the fixed norm-compatible tower map."""
    src = x.desc
    if (src.p, src.m) != (target.p, target.m):
        raise MismatchedBase(f"cannot embed {src!r} into {target!r}: different (p, m)")
    if target.d % src.d != 0:
        raise NonDivisibleDegree(f"degree {src.d} does not divide {target.d}")
    if src.d == target.d:
        return FieldElem(target, x.coeffs)
    images = _embed_basis_images(src.p, src.m, src.d, target.d)
    p = target.p
    acc = [0] * target.n
    for c, img in zip(x.coeffs, images):
        if c:
            for i, v in enumerate(img):
                acc[i] = (acc[i] + c * v) % p
    return FieldElem(target, tuple(acc))


# ---------------------------------------------------------------------------
# discrete logs w.r.t. the table generator (primitive by construction)


@functools.lru_cache(maxsize=None)
def _dlog(x):
    """log of x w.r.t. FieldElem.gen(x.desc), via Pohlig-Hellman + BSGS."""
    desc = x.desc
    M = desc.order - 1
    g = FieldElem.gen(desc)
    residues = []
    moduli = []
    for ell, k in _factorint(M).items():
        pe = ell ** k
        gi = g ** (M // pe)
        xi = x ** (M // pe)
        residues.append(_dlog_prime_power(gi, xi, ell, k))
        moduli.append(pe)
    return _crt(residues, moduli)


def _dlog_prime_power(g, x, ell, k):
    # g has order ell^k
    r = 0
    gamma = g ** (ell ** (k - 1))  # order ell
    for i in range(k):
        h = (x * (g ** r).inverse()) ** (ell ** (k - 1 - i))
        d = _dlog_bsgs(gamma, h, ell)
        r += d * ell**i
    return r


def _dlog_bsgs(g, h, order):
    msqrt = int(order**0.5) + 1
    table = {}
    e = FieldElem.one(g.desc)
    for j in range(msqrt):
        table.setdefault(e.coeffs, j)
        e = e * g
    factor = (g ** msqrt).inverse()
    cur = h
    for i in range(msqrt + 1):
        if cur.coeffs in table:
            return (i * msqrt + table[cur.coeffs]) % order
        cur = cur * factor
    raise ArithmeticError("bsgs failed")


def _crt(residues, moduli):
    x, mod = 0, 1
    for r, mi in zip(residues, moduli):
        g = _gcd(mod, mi)
        if (r - x) % g:
            raise ArithmeticError("inconsistent crt")
        lcm = mod // g * mi
        t = ((r - x) // g * pow(mod // g, -1, mi // g)) % (mi // g)
        x = (x + mod * t) % lcm
        mod = lcm
    return x


def _lex_key_desc(x):
    # deterministic root order: lexicographic on descending-power coefficients
    return tuple(reversed(x.coeffs))


def extract_root(x, nth, d_cap=64):
    """Deterministic n-th root of x (gcd(n, p) = 1), extending the field as needed.

    Returns (root, desc') where d' is the minimal multiple of d such that
    nth | q^{d'} - 1 and x is an nth power there.  Among the nth roots the
    one with the least descending-power coefficient vector is returned, so
    that 1 is always its own root.
    """
    desc = x.desc
    if not x:
        raise ValueError("extract_root of zero")
    if nth == 1:
        return x, desc
    if nth % desc.p == 0:
        raise ValueError("nth must be coprime to p; use inverse_frobenius for q-th roots")
    q = desc.q
    for k in range(1, d_cap + 1):
        dd = desc.d * k
        M = q**dd - 1
        if M % nth:
            continue
        try:
            tgt = get_field(desc.p, desc.m, dd)
        except UnsupportedField:
            continue
        y = embed(x, tgt)
        if y ** (M // nth) != FieldElem.one(tgt):
            continue
        a = _dlog(y)
        # all solutions of nth * t = a (mod M); nth | M here
        g = _gcd(nth, M)
        if a % g:
            continue
        t0 = (a // g) * pow(nth // g, -1, M // g) % (M // g)
        gen = FieldElem.gen(tgt)
        step = M // nth
        best = None
        for j in range(nth):
            cand = gen ** ((t0 + j * step) % M)
            if cand**nth != y:
                continue
            if best is None or _lex_key_desc(cand) < _lex_key_desc(best):
                best = cand
        assert best is not None
        return best, tgt
    raise UnsupportedField(f"no supported extension of {desc!r} admits {nth}-th roots")


# ---------------------------------------------------------------------------
# small GF(p) linear algebra (used by the residue solvers in puiseux)


def solve_fp_linear(matrix, rhs, p):
    """Solve M v = rhs over F_p.

    Returns (particular_solution or None, nullspace_basis).  The particular
    solution is the one with free variables set to 0 under fixed pivoting,
    and the nullspace basis is in reduced echelon form: deterministic.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    aug = [[matrix[i][j] % p for j in range(cols)] + [rhs[i] % p] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        pr = None
        for i in range(r, rows):
            if aug[i][c]:
                pr = i
                break
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = pow(aug[r][c], -1, p)
        aug[r] = [v * inv % p for v in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(a - f * b) % p for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if aug[i][cols]:
            return None, _nullspace_from_rref(aug, pivots, cols, p)
    sol = [0] * cols
    for i, c in enumerate(pivots):
        sol[c] = aug[i][cols]
    return sol, _nullspace_from_rref(aug, pivots, cols, p)


def _nullspace_from_rref(aug, pivots, cols, p):
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * cols
        v[fc] = 1
        for i, c in enumerate(pivots):
            v[c] = (-aug[i][fc]) % p
        basis.append(v)
    return basis
