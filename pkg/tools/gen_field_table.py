"""Generate the shipped defining-polynomial table (data/field_polys.txt).

For each prime p the script produces, degree by degree, the minimal
polynomial f_n of a primitive element gamma_n of F_{p^n} chosen so that for
every proper divisor d | n:

    gamma_n ** ((p^n - 1)/(p^d - 1))  is a root of f_d.

With polynomials of this shape the runtime embedding F_{p^n} -> F_{p^n'}
is simply x |-> x^((p^n' - 1)/(p^n - 1)) extended multiplicatively, and the
embeddings compose strictly.  Among all admissible generator exponents the
smallest one is taken, so the output is deterministic.

Run from the repository root:  python tools/gen_field_table.py
"""

import itertools
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from drintate.fieldtower import (  # noqa: E402
    _factorint,
    _gcd,
    _pmod,
    _pmulmod,
    _ppowmod,
    _prime_factors,
    _ptrim,
    poly_is_irreducible,
)

SUPPORT = {
    2: sorted(set(range(1, 25))),
    3: sorted(set(range(1, 21)) | {24}),
    5: sorted(set(range(1, 13))),
    7: sorted(set(range(1, 13))),
}


def decode(k, n, p):
    c = []
    for _ in range(n):
        c.append(k % p)
        k //= p
    return tuple(c)


def least_irreducible(n, p):
    for k in itertools.count():
        low = decode(k, n, p)
        if low[0] == 0:
            continue
        f = low + (1,)
        if poly_is_irreducible(f, p):
            return f
    raise AssertionError


# --- arithmetic in F = F_p[x]/h ------------------------------------------


class Ctx:
    def __init__(self, p, n, h):
        self.p, self.n, self.h = p, n, h

    def mul(self, a, b):
        return pad(_pmulmod(a, b, self.h, self.p), self.n)

    def pow(self, a, e):
        return pad(_ppowmod(a, e, self.h, self.p), self.n)

    def inv(self, a):
        return self.pow(a, self.p**self.n - 2)


# --- polynomials over F (lists of F-elements, ascending) -------------------


def fx_trim(a):
    while a and not any(a[-1]):
        a.pop()
    return a


def fx_mul(ctx, a, b):
    if not a or not b:
        return []
    sums = [[0] * ctx.n for _ in range(len(a) + len(b) - 1)]
    for i, ai in enumerate(a):
        if not any(ai):
            continue
        for j, bj in enumerate(b):
            if not any(bj):
                continue
            m = ctx.mul(ai, bj)
            s = sums[i + j]
            for t, v in enumerate(m):
                s[t] = (s[t] + v) % ctx.p
    return fx_trim([tuple(s) for s in sums])


def fx_rem(ctx, a, b):
    a = list(a)
    db = len(b) - 1
    binv = ctx.inv(b[-1])
    while len(a) - 1 >= db and a:
        top = a[-1]
        if any(top):
            fac = ctx.mul(top, binv)
            k = len(a) - 1 - db
            for i in range(db + 1):
                m = ctx.mul(fac, b[i])
                a[k + i] = tuple((x - y) % ctx.p for x, y in zip(pad(a[k + i], ctx.n), pad(m, ctx.n)))
        a.pop()
        a = fx_trim(a)
    return fx_trim(a)


def pad(t, n):
    return tuple(t) + (0,) * (n - len(t))


def fx_gcd(ctx, a, b):
    a, b = fx_trim(list(a)), fx_trim(list(b))
    while b:
        a = fx_rem(ctx, a, b)
        a, b = b, a
    if a:
        inv = ctx.inv(a[-1])
        a = [ctx.mul(inv, c) for c in a]
    return a


def fx_powmod(ctx, a, e, f):
    r = [pad((1,), ctx.n)]
    a = fx_rem(ctx, list(a), f)
    while e:
        if e & 1:
            r = fx_rem(ctx, fx_mul(ctx, r, a), f)
        a = fx_rem(ctx, fx_mul(ctx, a, a), f)
        e >>= 1
    return r


def find_root(ctx, fd_coeffs):
    """One root in F of the (fully split, squarefree) f_d, deterministically.

    Cantor-Zassenhaus splitting with a fixed sweep of affine maps a*X + b;
    shifts alone cannot separate roots whose difference has trace zero.
    """
    n = ctx.n
    work = fx_trim([pad((c % ctx.p,), n) for c in fd_coeffs])
    M = ctx.p**n - 1
    sweep = 0
    while len(work) - 1 > 1:
        # multiplier runs over the monomial basis: for any two roots some
        # basis vector separates them, so a full cycle always makes progress
        j = sweep % n
        a = tuple(1 if i == j else 0 for i in range(n))
        b = pad(decode(sweep // n, n, ctx.p), n)
        sweep += 1
        u = [b, a]  # a*X + b
        if ctx.p == 2:
            # absolute trace of u(X): sum u^(2^i), i < n
            acc = [pad((0,), n)]
            cur = fx_rem(ctx, list(u), work)
            for _ in range(n):
                acc = fx_add(ctx, acc, cur)
                cur = fx_rem(ctx, fx_mul(ctx, cur, cur), work)
            g = fx_gcd(ctx, work, acc)
        else:
            s = fx_powmod(ctx, u, M // 2, work)
            s = fx_add(ctx, s, [tuple((-v) % ctx.p for v in pad((1,), n))])
            g = fx_gcd(ctx, work, s)
        if 0 < len(g) - 1 < len(work) - 1:
            work = g if len(g) <= (len(work) - 1) // 2 + 1 else fx_quot(ctx, work, g)
    root = tuple((-v) % ctx.p for v in work[0])
    root = ctx.mul(root, ctx.inv(work[1]))
    return root


def fx_add(ctx, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = pad(a[i], ctx.n) if i < len(a) else (0,) * ctx.n
        y = pad(b[i], ctx.n) if i < len(b) else (0,) * ctx.n
        out.append(tuple((u + v) % ctx.p for u, v in zip(x, y)))
    return fx_trim(out)


def fx_quot(ctx, a, b):
    a = list(a)
    db = len(b) - 1
    binv = ctx.inv(b[-1])
    out = [pad((0,), ctx.n)] * (len(a) - db)
    while len(a) - 1 >= db and a:
        top = a[-1]
        k = len(a) - 1 - db
        if any(top):
            fac = ctx.mul(top, binv)
            out[k] = fac
            for i in range(db + 1):
                m = ctx.mul(fac, b[i])
                a[k + i] = tuple((x - y) % ctx.p for x, y in zip(pad(a[k + i], ctx.n), pad(m, ctx.n)))
        a.pop()
    return fx_trim(out)


# --- discrete logs ----------------------------------------------------------


def dlog(ctx, g, x, M):
    res, mods = [], []
    for ell, k in _factorint(M).items():
        pe = ell**k
        gi = ctx.pow(g, M // pe)
        xi = ctx.pow(x, M // pe)
        r = 0
        gamma = ctx.pow(gi, ell ** (k - 1))
        for i in range(k):
            h = ctx.mul(xi, ctx.inv(ctx.pow(gi, r)))
            h = ctx.pow(h, ell ** (k - 1 - i))
            r += bsgs(ctx, gamma, h, ell) * ell**i
        res.append(r)
        mods.append(pe)
    return crt(res, mods)[0]


def bsgs(ctx, g, h, order):
    m = int(order**0.5) + 1
    table = {}
    e = pad((1,), ctx.n)
    for j in range(m):
        table.setdefault(e, j)
        e = ctx.mul(e, g)
    fac = ctx.inv(ctx.pow(g, m))
    cur = pad(h, ctx.n)
    for i in range(m + 1):
        if cur in table:
            return (i * m + table[cur]) % order
        cur = ctx.mul(cur, fac)
    raise AssertionError("bsgs failed")


def crt(res, mods):
    x, mod = 0, 1
    for r, mi in zip(res, mods):
        g = _gcd(mod, mi)
        if (r - x) % g:
            return None
        lcm = mod // g * mi
        t = ((r - x) // g * pow(mod // g, -1, mi // g)) % (mi // g)
        x = (x + mod * t) % lcm
        mod = lcm
    return x, mod


# --- main construction ------------------------------------------------------


def minimal_poly(ctx, gamma, n):
    """prod_{i<n} (X - gamma^(p^i)); coefficients must land in F_p."""
    conj = gamma
    f = [pad((1,), ctx.n)]
    for _ in range(n):
        neg = tuple((-v) % ctx.p for v in conj)
        f = fx_mul(ctx, f, [pad(neg, ctx.n), pad((1,), ctx.n)])
        conj = ctx.pow(conj, ctx.p)
    out = []
    for c in f:
        assert not any(c[1:]), "minimal polynomial not over F_p"
        out.append(c[0])
    assert len(out) == n + 1
    return tuple(out)


def is_primitive_exponent(k, M):
    return _gcd(k, M) == 1


def build_prime(p, degrees):
    fs = {}
    for n in degrees:
        M = p**n - 1
        if n == 1:
            # least primitive root of F_p
            g = 1
            if p > 2:
                for cand in range(2, p):
                    if all(pow(cand, (p - 1) // ell, p) != 1 for ell in _prime_factors(p - 1)):
                        g = cand
                        break
            fs[1] = ((-g) % p, 1)
            print(f"p={p} n=1 poly={fs[1]}")
            continue
        h = least_irreducible(n, p)
        ctx = Ctx(p, n, h)
        # primitive element of the scaffold field
        facs = _prime_factors(M)
        g = None
        for k in itertools.count(1):
            cand = pad(decode(k, n, p), n)
            if not any(cand):
                continue
            if all(ctx.pow(cand, M // ell) != pad((1,), n) for ell in facs):
                g = cand
                break
        # per-divisor congruence data
        divisors = [d for d in degrees if d < n and n % d == 0]
        conds = []
        for d in divisors:
            Nd = M // (p**d - 1)
            rho = find_root(ctx, fs[d])
            a = dlog(ctx, g, rho, M)
            assert a % Nd == 0, (p, n, d)
            cd = (a // Nd) % (p**d - 1)
            conds.append((d, cd))
        # choose minimal exponent k: for each divisor, k = cd * p^{j_d} mod (p^d - 1)
        best = None
        for combo in itertools.product(*[range(d) for d, _ in conds]) if conds else [()]:
            res, mods = [], []
            for (d, cd), j in zip(conds, combo):
                res.append(cd * p**j % (p**d - 1))
                mods.append(p**d - 1)
            merged = crt(res, mods) if conds else (1, 1)
            if merged is None:
                continue
            k0, L = merged
            if k0 == 0:
                k0 = L
            k = k0
            while not is_primitive_exponent(k, M):
                k += L
                if k > M:
                    k = None
                    break
            if k is not None and (best is None or k < best):
                best = k
        assert best is not None, (p, n)
        gamma = ctx.pow(g, best)
        f = minimal_poly(ctx, gamma, n)
        assert poly_is_irreducible(f, p), (p, n)
        fs[n] = f
        print(f"p={p} n={n} k={best} poly={f}")
    return fs


def verify(p, fs):
    """Norm-compatibility: for d | n the power of the class of x satisfies f_d."""
    for n, f in fs.items():
        for d in fs:
            if d >= n or n % d:
                continue
            N = (p**n - 1) // (p**d - 1)
            r = _ppowmod((0, 1), N, f, p)
            acc = ()
            xp = (1,)
            for c in fs[d]:
                if c:
                    term = tuple(v * c % p for v in xp)
                    m = max(len(acc), len(term))
                    acc = _ptrim(
                        ((acc[i] if i < len(acc) else 0) + (term[i] if i < len(term) else 0)) % p
                        for i in range(m)
                    )
                xp = _pmulmod(xp, r, f, p)
            assert acc == (), (p, n, d)
    print(f"p={p}: norm compatibility verified on {len(fs)} degrees")


def main():
    lines = ["# p m d : defining polynomial coefficients (ascending, monic) over F_p"]
    for p, degrees in SUPPORT.items():
        fs = build_prime(p, degrees)
        verify(p, fs)
        for n in degrees:
            lines.append(f"{p} 1 {n} : " + " ".join(str(c) for c in fs[n]))
    out = os.path.join(os.path.dirname(__file__), "..", "src", "drintate", "data", "field_polys.txt")
    with open(out, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
