r"""Truncated Puiseux series in theta^(-1/e) over finite-field towers.

A PuiseuxApprox stands for an element of C_infty known up to O-precision:
the stored terms plus an unknown error of ord_infty >= prec.  The valuation
is normalized by ord_infty(theta) = -1, so the term at key j has
ord = j/e (j may be negative, giving positive powers of theta).

The module also provides the Newton-polygon machinery and the root solvers
for additive polynomials  sum_i c_i X^{q^i} + c  that the torsion, period
and difference-equation constructions are built on.  Root choices are
deterministic everywhere: residue solutions come from fixed-pivot Gaussian
elimination and field-level roots from the least descending-lex rule, so
two runs produce bit-identical results.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    AmbiguousMaxRoot,
    DivisionByIndistinguishableZero,
    InsufficientPrecision,
    PrecisionExhausted,
    UnsupportedField,
)
from .fieldtower import (
    FieldElem,
    embed,
    extract_root,
    get_field,
    inverse_frobenius,
    solve_fp_linear,
)

_SPARSE_LIMIT = 4096
_HENSEL_CAP = 64
_EXACT = Fraction(10**9)  # precision tag for exactly-known intermediate terms


@functools.lru_cache(maxsize=1 << 18)
def _fe_mul(desc, ca, cb):
    return (FieldElem(desc, ca) * FieldElem(desc, cb)).coeffs


@functools.lru_cache(maxsize=None)
def _reduction_rows(desc):
    # x^(n+k) mod the defining poly, k = 0..n-2; used by the dense multiply
    n = desc.n
    if n == 1:
        return ()
    rows = []
    cur = FieldElem.gen(desc) ** n
    for _ in range(n - 1):
        rows.append(cur.coeffs)
        cur = cur * FieldElem.gen(desc)
    return tuple(rows)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


class PuiseuxApprox:
    """Truncated Puiseux series with big-O precision tracking."""

    __slots__ = ("field", "e", "terms", "prec")

    def __init__(self, field, e, terms, prec, _normalized=False):
        self.field = field
        self.prec = Fraction(prec)
        if _normalized:
            self.e = e
            self.terms = terms
            return
        kept = {}
        for j, c in terms.items():
            if c and Fraction(j, e) < self.prec:
                kept[j] = c
        if kept:
            g = e
            for j in kept:
                g = _gcd(g, j)
                if g == 1:
                    break
            if g > 1:
                kept = {j // g: c for j, c in kept.items()}
                e //= g
        else:
            e = 1
        self.e = e
        self.terms = kept

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(field, prec):
        return PuiseuxApprox(field, 1, {}, prec, _normalized=True)

    @staticmethod
    def from_field_elem(c, prec):
        return PuiseuxApprox(c.desc, 1, {0: c} if c else {}, prec)

    @staticmethod
    def from_int(field, v, prec):
        return PuiseuxApprox.from_field_elem(FieldElem.from_int(field, v), prec)

    @staticmethod
    def theta_power(field, exponent, prec):
        """theta^exponent for a Fraction or int exponent."""
        exponent = Fraction(exponent)
        e = exponent.denominator
        j = -exponent.numerator
        return PuiseuxApprox(field, e, {j: FieldElem.one(field)}, prec)

    @staticmethod
    def theta(field, prec):
        return PuiseuxApprox.theta_power(field, 1, prec)

    # -- inspection -----------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero_to_prec(self):
        return not self.terms

    def valuation(self):
        """min ord over stored terms, or None (the +infinity marker)."""
        if not self.terms:
            return None
        return Fraction(min(self.terms), self.e)

    def ord_or_prec(self):
        v = self.valuation()
        return self.prec if v is None else min(v, self.prec)

    def leading(self):
        """(ord, coefficient) of the lowest-ord stored term."""
        j = min(self.terms)
        return Fraction(j, self.e), self.terms[j]

    def coeff_at(self, exponent):
        """Coefficient at ord == exponent, or None if no such term is stored."""
        j = Fraction(exponent) * self.e
        if j.denominator != 1:
            return None
        return self.terms.get(int(j))

    def __eq__(self, other):
        return (
            isinstance(other, PuiseuxApprox)
            and self.field == other.field
            and self.e == other.e
            and self.terms == other.terms
            and self.prec == other.prec
        )

    def __repr__(self):
        if not self.terms:
            return f"O(th^-{self.prec})"
        bits = []
        for j in sorted(self.terms):
            c = self.terms[j]
            cs = str(c.coeffs[0]) if not any(c.coeffs[1:]) else "(" + ",".join(map(str, c.coeffs)) + ")"
            ex = Fraction(-j, self.e)
            if ex == 0:
                bits.append(cs)
            else:
                bits.append(f"{cs}*th^{ex}" if cs != "1" else f"th^{ex}")
        return " + ".join(bits) + f" + O(th^-{self.prec})"

    # -- field / ramification unification -------------------------------------

    def to_field(self, target):
        if target == self.field:
            return self
        terms = {j: embed(c, target) for j, c in self.terms.items()}
        return PuiseuxApprox(target, self.e, terms, self.prec, _normalized=True)

    def with_e(self, e_new):
        k, rem = divmod(e_new, self.e)
        assert rem == 0
        if k == 1:
            return self
        return PuiseuxApprox(
            self.field, e_new, {j * k: c for j, c in self.terms.items()}, self.prec, _normalized=True
        )

    def capped(self, prec):
        """Forget knowledge below ord prec (lower the precision)."""
        if prec >= self.prec:
            return self
        return PuiseuxApprox(self.field, self.e, self.terms, prec)

    # -- arithmetic ------------------------------------------------------------

    def _common(self, other):
        fa, fb = self.field, other.field
        if fa != fb:
            if (fa.p, fa.m) != (fb.p, fb.m):
                raise ValueError("mixed characteristic")
            dd = fa.d * fb.d // _gcd(fa.d, fb.d)
            tgt = get_field(fa.p, fa.m, dd)
            a, b = self.to_field(tgt), other.to_field(tgt)
        else:
            a, b = self, other
        e = a.e * b.e // _gcd(a.e, b.e)
        return a.with_e(e), b.with_e(e)

    def __add__(self, other):
        if isinstance(other, int):
            other = PuiseuxApprox.from_int(self.field, other, self.prec)
        a, b = self._common(other)
        prec = min(a.prec, b.prec)
        terms = dict(a.terms)
        for j, c in b.terms.items():
            s = terms.get(j)
            terms[j] = c if s is None else s + c
        return PuiseuxApprox(a.field, a.e, terms, prec)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxApprox(
            self.field, self.e, {j: -c for j, c in self.terms.items()}, self.prec, _normalized=True
        )

    def __sub__(self, other):
        if isinstance(other, int):
            other = PuiseuxApprox.from_int(self.field, other, self.prec)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return PuiseuxApprox(
                self.field, self.e, {j: c * other for j, c in self.terms.items()}, self.prec
            )
        if isinstance(other, FieldElem):
            other = PuiseuxApprox.from_field_elem(other, _EXACT)
        a, b = self._common(other)
        prec = min(a.ord_or_prec() + b.prec, b.ord_or_prec() + a.prec)
        if not a.terms or not b.terms:
            return PuiseuxApprox.zero(a.field, prec)
        jcap = prec * a.e
        terms = _mul_terms(a.terms, b.terms, a.field, jcap)
        return PuiseuxApprox(a.field, a.e, terms, prec, _normalized=True)

    __rmul__ = __mul__

    def invert(self):
        if not self.terms:
            raise DivisionByIndistinguishableZero("inverse of zero-to-precision element")
        v, lead = self.leading()
        rel = self.prec - v
        prec_out = rel - v
        lead_term = PuiseuxApprox(
            self.field, self.e, {-min(self.terms): lead.inverse()}, prec_out + abs(v) + 1
        )
        w = lead_term * self - 1  # ord(w) > 0
        out = PuiseuxApprox.from_int(self.field, 1, rel)
        powW = out
        sign = -1
        if not w.is_zero_to_prec():
            vw = w.valuation()
            k = 1
            while k * vw < rel:
                powW = (powW * w).capped(rel)
                if powW.is_zero_to_prec():
                    break
                out = out + sign * powW
                sign = -sign
                k += 1
        return (out * lead_term).capped(prec_out)

    def __truediv__(self, other):
        if isinstance(other, int):
            inv = pow(other % self.field.p, -1, self.field.p)
            return self * inv
        return self * other.invert()

    def __pow__(self, k):
        if k < 0:
            return self.invert() ** (-k)
        if k == 0:
            return PuiseuxApprox.from_int(self.field, 1, _EXACT)
        result = None
        base = self
        while True:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if not k:
                return result
            base = base * base

    # -- twisting ---------------------------------------------------------------

    def twist(self, n):
        """n-fold Frobenius twist: coefficients to the q^n, ord scaled by q^n."""
        if n == 0:
            return self
        q = self.field.q
        if n > 0:
            s = q**n
            terms = {j * s: c.frobenius_q(n) for j, c in self.terms.items()}
            return PuiseuxApprox(self.field, self.e, terms, self.prec * s)
        s = q ** (-n)
        terms = {}
        for j, c in self.terms.items():
            y = c
            for _ in range(-n):
                y = inverse_frobenius(y)
            terms[j] = y
        return PuiseuxApprox(self.field, self.e * s, terms, self.prec / s)

    # -- roots -------------------------------------------------------------------

    def nth_root(self, nth):
        """Deterministic nth root (gcd(nth, p) = 1) of a nonzero element."""
        if not self.terms:
            raise DivisionByIndistinguishableZero("nth_root of zero-to-precision element")
        if nth == 1:
            return self
        v, lead = self.leading()
        rel = self.prec - v
        croot, fld = extract_root(lead, nth)
        a = self.to_field(fld)
        e_new = a.e * nth
        vroot = v / nth
        jroot = vroot * e_new
        lead_root = PuiseuxApprox(fld, e_new, {int(jroot): croot}, vroot + rel)
        u = a * (lead_root**nth).invert()  # 1 + w with ord(w) > 0
        y = PuiseuxApprox.from_int(fld, 1, rel)
        inv_n = pow(nth % fld.p, -1, fld.p)
        for _ in range(_HENSEL_CAP):
            r = (y**nth - u).capped(rel)
            if r.is_zero_to_prec():
                return (lead_root * y).capped(vroot + rel)
            y = (y - r * inv_n * (y ** (nth - 1)).invert()).capped(rel)
        raise PrecisionExhausted("nth_root refinement did not converge")

    # -- serialization -------------------------------------------------------------

    def to_record(self):
        f = self.field
        return {
            "p": f.p,
            "m": f.m,
            "d": f.d,
            "e": self.e,
            "prec": f"{self.prec.numerator}/{self.prec.denominator}",
            "terms": [[j, list(self.terms[j].coeffs)] for j in sorted(self.terms)],
        }

    @staticmethod
    def from_record(rec):
        fld = get_field(rec["p"], rec["m"], rec["d"])
        num, _, den = rec["prec"].partition("/")
        prec = Fraction(int(num), int(den or 1))
        terms = {int(j): FieldElem(fld, tuple(c)) for j, c in rec["terms"]}
        return PuiseuxApprox(fld, rec["e"], terms, prec)


def _mul_terms(ta, tb, field, jcap):
    if len(ta) * len(tb) <= _SPARSE_LIMIT:
        out = {}
        p = field.p
        for ja, ca in ta.items():
            cac = ca.coeffs
            for jb, cb in tb.items():
                j = ja + jb
                if j >= jcap:
                    continue
                prod = _fe_mul(field, cac, cb.coeffs)
                cur = out.get(j)
                out[j] = prod if cur is None else tuple((x + y) % p for x, y in zip(cur, prod))
        return {j: FieldElem(field, c) for j, c in out.items() if any(c)}
    return _mul_terms_dense(ta, tb, field, jcap)


def _mul_terms_dense(ta, tb, field, jcap):
    # Kronecker substitution: one big-integer multiply covers the convolution
    # over theta powers and field coordinates simultaneously.
    n = field.n
    p = field.p
    stride = 2 * n - 1
    ja0 = min(ta)
    jb0 = min(tb)
    la = max(ta) - ja0 + 1
    lb = max(tb) - jb0 + 1
    bound = min(la, lb) * n * (p - 1) * (p - 1) + 1
    bits = bound.bit_length() + 1
    mask = (1 << bits) - 1
    chunk_mask = (1 << (stride * bits)) - 1

    def pack(terms, j0):
        acc = 0
        for j, c in terms.items():
            word = 0
            for v in reversed(c.coeffs):
                word = (word << bits) | v
            acc |= word << ((j - j0) * stride * bits)
        return acc

    prod = pack(ta, ja0) * pack(tb, jb0)
    rows = _reduction_rows(field)
    out = {}
    j0 = ja0 + jb0
    for jj in range(la + lb - 1):
        j = j0 + jj
        if j >= jcap:
            break
        chunk = (prod >> (jj * stride * bits)) & chunk_mask
        if not chunk:
            continue
        vec = [0] * stride
        i = 0
        while chunk:
            vec[i] = (chunk & mask) % p
            chunk >>= bits
            i += 1
        low = vec[:n]
        for k in range(n - 1):
            hv = vec[n + k]
            if hv:
                for i, rv in enumerate(rows[k]):
                    if rv:
                        low[i] = (low[i] + hv * rv) % p
        if any(low):
            out[j] = FieldElem(field, tuple(low))
    return out


def equal_to_prec(a, b):
    return (a - b).is_zero_to_prec()


# ---------------------------------------------------------------------------
# Newton polygons


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower-hull data as (root_ord, length) pairs, left to right.

    root_ord is the common ord_infty of that segment's roots (the negated
    geometric slope): root_ord strictly decreases along the list while the
    geometric slopes strictly increase.
    """

    segments: tuple

    @property
    def root_count(self):
        return sum(length for _, length in self.segments)


def newton_polygon(coeffs):
    """Newton polygon of sum_k coeffs[k] X^k, from a map exponent -> PuiseuxApprox.

    Raises InsufficientPrecision if a zero-to-precision coefficient could dip
    to or below the hull built from the certified ones.
    """
    definite = []
    censored = []
    for k, c in coeffs.items():
        v = c.valuation()
        if v is None:
            censored.append((k, c.prec))
        else:
            definite.append((k, v))
    if len(definite) < 2:
        raise InsufficientPrecision("fewer than two certified coefficients")
    definite.sort()
    hull = _lower_hull(definite)
    for k, pc in censored:
        if k < hull[0][0] or k > hull[-1][0] or pc <= _hull_height(hull, k):
            raise InsufficientPrecision(f"coefficient at exponent {k} is zero to precision")
    segs = []
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        segs.append((-Fraction(y1 - y0, x1 - x0), x1 - x0))
    return NewtonPolygon(tuple(segs))


def _lower_hull(points):
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            if (y1 - y0) * (pt[0] - x0) >= (pt[1] - y0) * (x1 - x0):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def _hull_height(hull, x):
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        if x0 <= x <= x1:
            return y0 + Fraction(y1 - y0, x1 - x0) * (x - x0)
    return hull[0][1] if x <= hull[0][0] else hull[-1][1]


# ---------------------------------------------------------------------------
# additive polynomials  sum_i c_i X^{q^i} + const


class AdditivePoly:
    """sum_i coeffs[i] * X^{q^i} (+ const); the solver target shape."""

    def __init__(self, coeffs, const=None):
        self.coeffs = {i: c for i, c in coeffs.items() if c}
        if not self.coeffs:
            raise ValueError("additive part must be nonzero")
        self.const = const

    def field(self):
        return next(iter(self.coeffs.values())).field

    def additive_eval(self, x):
        out = None
        for i, c in self.coeffs.items():
            t = c * x.twist(i)
            out = t if out is None else out + t
        return out

    def eval(self, x):
        out = self.additive_eval(x)
        if self.const is not None:
            out = out + self.const
        return out

    def polygon_points(self):
        q = self.field().q
        pts = {q**i: c for i, c in self.coeffs.items()}
        if self.const is not None and not self.const.is_zero_to_prec():
            pts[0] = self.const
        return pts

    def separable_core(self):
        """Divide out Frobenius powers: same root set, nonzero X-coefficient.

        Only valid for m = 1 (q = p); inseparable additive polynomials over
        proper extensions of F_p are outside the supported shapes.
        """
        coeffs, const = self.coeffs, self.const
        while 0 not in coeffs:
            if self.field().m != 1:
                raise ValueError("inseparable additive polynomial with m > 1")
            coeffs = {i - 1: c.twist(-1) for i, c in coeffs.items()}
            const = const.twist(-1) if const is not None else None
        if coeffs is self.coeffs:
            return self
        return AdditivePoly(coeffs, const)


def solve_additive(poly, strategy, prec_target=None):
    """Roots of an additive polynomial, per strategy.

    max_valuation_root: the unique root of maximal valuation (the top Newton
    segment must have length 1).  all_slope_leaders: one root per segment.
    kernel_basis: an F_q-basis of the full root space (const must vanish).
    Every returned root substitutes back to zero-to-precision.
    """
    if strategy == "max_valuation_root":
        return [_max_valuation_root(poly, prec_target, strict=True)]
    if strategy == "all_slope_leaders":
        return _all_slope_leaders(poly, prec_target)
    if strategy == "kernel_basis":
        if poly.const is not None and not poly.const.is_zero_to_prec():
            raise ValueError("kernel_basis requires zero constant term")
        return _kernel_basis(poly, prec_target)
    raise ValueError(f"unknown strategy {strategy!r}")


def _max_valuation_root(poly, prec_target, strict, seed=None):
    """Iteratively build the maximal-valuation root of  P_add(X) + const = 0.

    Each step solves the residue equation on the leftmost Newton segment of
    the current residual's polygon; with strict=True a segment of length > 1
    raises AmbiguousMaxRoot, otherwise the deterministic particular residue
    solution continues the branch.
    """
    poly = poly.separable_core()
    fld = poly.field()
    x = seed if seed is not None else PuiseuxApprox.zero(fld, _EXACT)
    residual = poly.eval(x) if (seed is not None or poly.const is not None) else PuiseuxApprox.zero(fld, _EXACT)
    v0 = poly.coeffs[0].ord_or_prec()
    for _ in range(_HENSEL_CAP):
        if residual.is_zero_to_prec():
            rp = residual.prec - v0
            if prec_target is not None:
                rp = min(rp, prec_target)
            return x.capped(rp)
        if prec_target is not None and residual.valuation() - v0 >= prec_target:
            return x.capped(prec_target)
        x = x + _residue_step(poly, residual, strict)
        residual = poly.eval(x)
    raise PrecisionExhausted("additive root refinement hit the iteration cap")


def _residue_step(poly, residual, strict):
    """One correction batch for P_add(X) = -residual."""
    q = poly.field().q
    pts = {q**i: c for i, c in poly.coeffs.items()}
    pts[0] = residual
    definite = sorted((k, c.valuation()) for k, c in pts.items() if c.valuation() is not None)
    hull = _lower_hull(definite)
    (x0, y0), (x1, y1) = hull[0], hull[1]
    if x1 == 1:
        # linear corner is strict (no q^i point shares the segment): the full
        # linear solve is the exact continuation on every stored term
        return -(residual / poly.coeffs[0])
    if strict:
        raise AmbiguousMaxRoot(f"top Newton segment has length {x1 - x0}")
    vstep = Fraction(y0 - y1, x1 - x0)
    line = lambda k: y0 + Fraction(y1 - y0, x1 - x0) * (k - x0)  # noqa: E731
    on_seg = [k for k, v in definite if x0 <= k <= x1 and line(k) == v]
    part, tgt, _null = _residue_system(poly, residual.leading()[1], vstep, on_seg)
    if part is None:
        raise UnsupportedField("residue equation has no solution in the supported towers")
    e_needed = vstep.denominator
    return PuiseuxApprox(tgt, e_needed, {int(vstep * e_needed): part}, _EXACT)


def _residue_system(poly, rhs_lead, vstep, on_seg, kernel_dim=None):
    """Solve the residue equation sum_{k in on_seg} lead_k y^k = -rhs_lead.

    Searches the extension tower until the system is solvable (and, when
    kernel_dim is given, until the nullspace reaches that F_p-dimension).
    Returns (particular FieldElem or None, field, nullspace FieldElems).
    """
    fld = poly.field()
    q = fld.q
    p = fld.p
    parts = {}
    for k in on_seg:
        if k == 0:
            continue
        i = _ilog(k, q)
        parts[k] = poly.coeffs[i].leading()[1]
    use_rhs = 0 in on_seg and rhs_lead is not None
    for dd in _extension_degrees(fld):
        tgt = get_field(fld.p, fld.m, dd)
        emb = {k: embed(c, tgt) for k, c in parts.items()}
        rhs = embed(rhs_lead, tgt) if use_rhs else None
        n = tgt.n
        basis = [FieldElem(tgt, tuple(1 if t == i else 0 for t in range(n))) for i in range(n)]
        cols = []
        for b in basis:
            img = FieldElem.zero(tgt)
            for k, c in emb.items():
                img = img + c * b**k
            cols.append(img.coeffs)
        matrix = [[cols[jj][ii] for jj in range(n)] for ii in range(n)]
        target = [(-v) % p for v in rhs.coeffs] if rhs is not None else [0] * n
        part, null = solve_fp_linear(matrix, target, p)
        if part is None:
            continue
        if kernel_dim is not None and len(null) < kernel_dim:
            continue
        if rhs is not None and not any(part):
            continue
        part_elem = FieldElem(tgt, tuple(part)) if rhs is not None else None
        null_elems = [FieldElem(tgt, tuple(v)) for v in null]
        return part_elem, tgt, null_elems
    raise UnsupportedField("residue equation needs a field beyond the shipped table")


def _extension_degrees(fld):
    degs = []
    for k in range(1, 65):
        try:
            get_field(fld.p, fld.m, fld.d * k)
        except UnsupportedField:
            continue
        degs.append(fld.d * k)
    return degs


def _ilog(x, q):
    i = 0
    while q**i < x:
        i += 1
    assert q**i == x
    return i


def _all_slope_leaders(poly, prec_target):
    poly = poly.separable_core()
    if poly.const is None or poly.const.is_zero_to_prec():
        raise ValueError("all_slope_leaders requires a nonzero constant term")
    pts = poly.polygon_points()
    definite = sorted((k, c.valuation()) for k, c in pts.items() if c.valuation() is not None)
    hull = _lower_hull(definite)
    roots = []
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        vstep = Fraction(y0 - y1, x1 - x0)
        line = lambda k: y0 + Fraction(y1 - y0, x1 - x0) * (k - x0)  # noqa: E731
        on_seg = [k for k, v in definite if x0 <= k <= x1 and line(k) == v]
        if 0 in on_seg:
            part, tgt, _ = _residue_system(poly, poly.const.leading()[1], vstep, on_seg)
        else:
            _, tgt, null = _residue_system(poly, None, vstep, on_seg, kernel_dim=1)
            part = null[0]
        e_needed = vstep.denominator
        lead = PuiseuxApprox(tgt, e_needed, {int(vstep * e_needed): part}, _EXACT)
        roots.append(_max_valuation_root(poly, prec_target, strict=False, seed=lead))
    return roots


def _kernel_basis(poly, prec_target):
    poly = poly.separable_core()
    fld = poly.field()
    q = fld.q
    pts = {q**i: c for i, c in poly.coeffs.items()}
    definite = sorted((k, c.valuation()) for k, c in pts.items() if c.valuation() is not None)
    if len(definite) == 1:
        return []
    hull = _lower_hull(definite)
    basis = []
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        root_ord = Fraction(y0 - y1, x1 - x0)
        line = lambda k: y0 + Fraction(y1 - y0, x1 - x0) * (k - x0)  # noqa: E731
        on_seg = [k for k, v in definite if x0 <= k <= x1 and line(k) == v]
        dim = fld.m * (_ilog(x1, q) - _ilog(x0, q))
        _, tgt, null = _residue_system(poly, None, root_ord, on_seg, kernel_dim=dim)
        e_needed = root_ord.denominator
        j = int(root_ord * e_needed)
        for vec in _fq_basis_from_fp_nullspace(null, tgt, fld.m):
            lead = PuiseuxApprox(tgt, e_needed, {j: vec}, _EXACT)
            basis.append(_max_valuation_root(poly, prec_target, strict=False, seed=lead))
    return basis


def _fq_basis_from_fp_nullspace(null, tgt, m):
    """Reduce an F_p-nullspace to an F_q-basis (passthrough for m = 1)."""
    vecs = [v for v in null if v]
    if m == 1:
        return vecs
    out = []
    span = {FieldElem.zero(tgt).coeffs}
    for v in vecs:
        if v.coeffs in span:
            continue
        out.append(v)
        fq = _fq_elements(tgt)
        span = {(FieldElem(tgt, s) + c * w).coeffs for s in span for c in fq for w in out}
    return out


@functools.lru_cache(maxsize=None)
def _fq_elements(desc):
    """All elements of the F_q image inside desc (desk-scale q only)."""
    q = desc.q
    out = [FieldElem.zero(desc)]
    if q == desc.p:
        out.extend(FieldElem.from_int(desc, v) for v in range(1, desc.p))
        return tuple(out)
    g = FieldElem.gen(desc) ** ((desc.order - 1) // (q - 1))
    cur = FieldElem.one(desc)
    for _ in range(q - 1):
        out.append(cur)
        cur = cur * g
    return tuple(out)


# ---------------------------------------------------------------------------
# the Carlitz period


def carlitz_period(p, m, prec):
    """pi~ = theta * (-theta)^(1/(q-1)) * prod_{i>=1} (1 - theta^(1-q^i))^(-1).

    Root choice follows the deterministic extraction rule; the product is
    truncated at the first factor that is 1 + (below precision).
    ord_infty of the result is -q/(q-1).
    """
    q = p**m
    fld = get_field(p, m, 1)
    work = prec + Fraction(q, q - 1) + 1
    if q == 2:
        root = PuiseuxApprox.theta(fld, work + 1)
    else:
        root = (-PuiseuxApprox.theta(fld, work + 1)).nth_root(q - 1)
    out = PuiseuxApprox.theta(root.field, work) * root
    i = 1
    while q**i - 1 <= work:
        factor = 1 - PuiseuxApprox.theta_power(out.field, 1 - q**i, work)
        out = out * factor.invert()
        i += 1
    return out.capped(prec)
