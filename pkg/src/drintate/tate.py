r"""Truncated Tate-algebra elements and the Anderson-Thakur constructions.

TateApprox truncates a restricted power series in t_1..t_s at total t-degree
tdeg, with PuiseuxApprox coefficients; TateZApprox adds a z-variable with its
own cap and a radius tag distinguishing the closed unit disc from the disc of
radius |theta|.  Gauss norms are handled additively: Ord(f) is the minimum of
the coefficient valuations, and for the theta-disc norm the z-power i enters
with weight -i.

Infinite objects (the omega elements, Omega(z)) are stored to the caps and
every identity about them is asserted only below the caps.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NotAUnit, NotInUnitBall, UndecidableUnit
from .fieldtower import FieldElem, get_field
from .puiseux import _EXACT, PuiseuxApprox, _gcd

_ZERO_NU_CACHE = {}


def _zero_nu(s):
    if s not in _ZERO_NU_CACHE:
        _ZERO_NU_CACHE[s] = (0,) * s
    return _ZERO_NU_CACHE[s]


def grlex_key(nu):
    return (sum(nu), tuple(-v for v in nu))


class TateApprox:
    """t-degree-truncated Tate algebra element over PuiseuxApprox coefficients."""

    __slots__ = ("s", "tdeg", "coeffs", "prec")

    def __init__(self, s, tdeg, coeffs, prec=None):
        self.s = s
        self.tdeg = tdeg
        kept = {}
        worst = None
        for nu, c in coeffs.items():
            if len(nu) != s or sum(nu) > tdeg:
                continue
            if c.is_zero_to_prec():
                worst = c.prec if worst is None else min(worst, c.prec)
                continue
            kept[tuple(nu)] = c
        self.coeffs = kept
        if prec is None:
            cands = [c.prec for c in kept.values()]
            if worst is not None:
                cands.append(worst)
            prec = min(cands) if cands else _EXACT
        self.prec = Fraction(prec)

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def zero(s, tdeg, prec):
        return TateApprox(s, tdeg, {}, prec)

    @staticmethod
    def from_scalar(c, s, tdeg):
        return TateApprox(s, tdeg, {_zero_nu(s): c})

    @staticmethod
    def t_var(k, s, tdeg, field, prec=_EXACT):
        nu = tuple(1 if i == k else 0 for i in range(s))
        return TateApprox(s, tdeg, {nu: PuiseuxApprox.from_int(field, 1, prec)})

    @staticmethod
    def one(s, tdeg, field, prec=_EXACT):
        return TateApprox.from_scalar(PuiseuxApprox.from_int(field, 1, prec), s, tdeg)

    # -- inspection -------------------------------------------------------------

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero_to_prec(self):
        return not self.coeffs

    def constant_coeff(self, field=None):
        c = self.coeffs.get(_zero_nu(self.s))
        if c is None:
            fld = field or self.any_field()
            return PuiseuxApprox.zero(fld, self.prec)
        return c

    def any_field(self):
        for c in self.coeffs.values():
            return c.field
        return get_field(3, 1, 1)

    def gauss_ord(self):
        """min valuation over stored coefficients; None is the +inf marker."""
        if not self.coeffs:
            return None
        return min(c.valuation() for c in self.coeffs.values())

    def ord_or_prec(self):
        v = self.gauss_ord()
        return self.prec if v is None else min(v, self.prec)

    def __repr__(self):
        if not self.coeffs:
            return f"TateApprox(0 + O(th^-{self.prec}))"
        bits = []
        for nu in sorted(self.coeffs, key=grlex_key):
            mono = "*".join(f"t{i+1}^{v}" if v > 1 else f"t{i+1}" for i, v in enumerate(nu) if v)
            body = repr(self.coeffs[nu])
            bits.append(f"({body})" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)

    # -- arithmetic ---------------------------------------------------------------

    def _check(self, other):
        if self.s != other.s:
            raise ValueError("mixed t-variable counts")

    def __add__(self, other):
        if isinstance(other, (int, PuiseuxApprox)):
            other = _as_tate(other, self)
        self._check(other)
        tdeg = min(self.tdeg, other.tdeg)
        out = dict(self.coeffs)
        for nu, c in other.coeffs.items():
            cur = out.get(nu)
            out[nu] = c if cur is None else cur + c
        return TateApprox(self.s, tdeg, out, min(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self):
        return TateApprox(self.s, self.tdeg, {nu: -c for nu, c in self.coeffs.items()}, self.prec)

    def __sub__(self, other):
        if isinstance(other, (int, PuiseuxApprox)):
            other = _as_tate(other, self)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return TateApprox(
                self.s, self.tdeg, {nu: c * other for nu, c in self.coeffs.items()}, self.prec
            )
        if isinstance(other, (PuiseuxApprox, FieldElem)):
            return TateApprox(
                self.s,
                self.tdeg,
                {nu: c * other for nu, c in self.coeffs.items()},
                self.prec + min(Fraction(0), _scalar_ord(other)),
            )
        self._check(other)
        tdeg = min(self.tdeg, other.tdeg)
        prec = min(self.ord_or_prec() + other.prec, other.ord_or_prec() + self.prec)
        out = {}
        for nu_a, ca in self.coeffs.items():
            for nu_b, cb in other.coeffs.items():
                nu = tuple(x + y for x, y in zip(nu_a, nu_b))
                if sum(nu) > tdeg:
                    continue
                prod = ca * cb
                cur = out.get(nu)
                out[nu] = prod if cur is None else cur + prod
        return TateApprox(self.s, tdeg, out, prec)

    __rmul__ = __mul__

    def __pow__(self, k):
        assert k >= 0
        out = TateApprox.one(self.s, self.tdeg, self.any_field())
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def capped(self, prec):
        if prec >= self.prec:
            return self
        return TateApprox(
            self.s, self.tdeg, {nu: c.capped(prec) for nu, c in self.coeffs.items()}, prec
        )

    # -- twisting -------------------------------------------------------------------

    def twist(self, n):
        """Coefficientwise Frobenius twist; t-exponents unchanged."""
        if n == 0:
            return self
        q_pow = Fraction(self.any_field().q) ** n if n > 0 else Fraction(1, self.any_field().q ** (-n))
        return TateApprox(
            self.s, self.tdeg, {nu: c.twist(n) for nu, c in self.coeffs.items()}, self.prec * q_pow
        )

    # -- units ------------------------------------------------------------------------

    def is_unit(self):
        """Dominant-constant-term criterion; exact ties raise UndecidableUnit."""
        if not self.coeffs:
            return False
        a0 = self.coeffs.get(_zero_nu(self.s))
        if a0 is None:
            return False
        v0 = a0.valuation()
        rest = [c.valuation() for nu, c in self.coeffs.items() if nu != _zero_nu(self.s)]
        if not rest:
            return True
        vmin = min(rest)
        if v0 == vmin:
            raise UndecidableUnit("constant term ties another coefficient in Gauss norm")
        return v0 < vmin

    def invert(self):
        if not self.is_unit():
            raise NotAUnit("dominant-constant-term criterion failed")
        a0 = self.coeffs[_zero_nu(self.s)]
        inv0 = a0.invert()
        w = self * inv0 - 1  # t-valuation >= 1
        out = TateApprox.one(self.s, self.tdeg, self.any_field())
        powW = out
        sign = -1
        for _ in range(self.tdeg):
            powW = powW * w
            out = out + sign * powW
            if powW.is_zero_to_prec():
                break
            sign = -sign
        return out * inv0

    # -- serialization ------------------------------------------------------------------

    def to_record(self):
        return {
            "s": self.s,
            "tdeg": self.tdeg,
            "entries": [[list(nu), self.coeffs[nu].to_record()] for nu in sorted(self.coeffs, key=grlex_key)],
        }

    @staticmethod
    def from_record(rec):
        coeffs = {tuple(nu): PuiseuxApprox.from_record(c) for nu, c in rec["entries"]}
        return TateApprox(rec["s"], rec["tdeg"], coeffs)


def _scalar_ord(c):
    if isinstance(c, FieldElem):
        return Fraction(0)
    return c.ord_or_prec()


def _as_tate(v, like):
    if isinstance(v, int):
        v = PuiseuxApprox.from_int(like.any_field(), v, _EXACT)
    return TateApprox.from_scalar(v, like.s, like.tdeg)


def tate_equal_to_prec(a, b):
    return (a - b).is_zero_to_prec()


# ---------------------------------------------------------------------------
# z-extended Tate elements


class TateZApprox:
    """z-degree-truncated element of T_{s,z} or T_s{z/theta} (radius_tag)."""

    __slots__ = ("s", "tdeg", "zdeg", "zcoeffs", "radius_tag", "prec")

    def __init__(self, s, tdeg, zdeg, zcoeffs, radius_tag, prec=None):
        assert radius_tag in ("unit_disc", "theta_disc")
        self.s = s
        self.tdeg = tdeg
        self.zdeg = zdeg
        self.radius_tag = radius_tag
        kept = {}
        for i, c in zcoeffs.items():
            if i > zdeg or c.is_zero_to_prec():
                continue
            kept[i] = c
        self.zcoeffs = kept
        if prec is None:
            prec = min((c.prec for c in kept.values()), default=_EXACT)
        self.prec = Fraction(prec)

    # -- constructors -----------------------------------------------------------

    @staticmethod
    def zero(s, tdeg, zdeg, radius_tag, prec):
        return TateZApprox(s, tdeg, zdeg, {}, radius_tag, prec)

    @staticmethod
    def from_tate(a, zdeg, radius_tag):
        return TateZApprox(a.s, a.tdeg, zdeg, {0: a}, radius_tag, a.prec)

    @staticmethod
    def z_var(s, tdeg, zdeg, field, radius_tag, prec=_EXACT):
        one = TateApprox.one(s, tdeg, field, prec)
        return TateZApprox(s, tdeg, zdeg, {1: one}, radius_tag, prec)

    # -- inspection ----------------------------------------------------------------

    def __bool__(self):
        return bool(self.zcoeffs)

    def is_zero_to_prec(self):
        return not self.zcoeffs

    def any_field(self):
        for c in self.zcoeffs.values():
            return c.any_field()
        return get_field(3, 1, 1)

    def z_coeff(self, i):
        c = self.zcoeffs.get(i)
        if c is None:
            return TateApprox.zero(self.s, self.tdeg, self.prec)
        return c

    def gauss_ord(self):
        if not self.zcoeffs:
            return None
        return min(c.gauss_ord() for c in self.zcoeffs.values())

    def theta_ord(self):
        """ord-version of the theta-disc norm: min_i (Ord(a_i) - i)."""
        if not self.zcoeffs:
            return None
        return min(c.gauss_ord() - i for i, c in self.zcoeffs.items())

    def ord_or_prec(self):
        v = self.gauss_ord()
        return self.prec if v is None else min(v, self.prec)

    def __repr__(self):
        if not self.zcoeffs:
            return f"TateZApprox(0 + O(th^-{self.prec}))"
        return " + ".join(f"z^{i}*[{self.zcoeffs[i]!r}]" for i in sorted(self.zcoeffs))

    # -- arithmetic --------------------------------------------------------------------

    def _check(self, other):
        if self.s != other.s or self.radius_tag != other.radius_tag:
            raise ValueError("mixed shapes in TateZ arithmetic")

    def retagged(self, radius_tag):
        return TateZApprox(self.s, self.tdeg, self.zdeg, self.zcoeffs, radius_tag, self.prec)

    def __add__(self, other):
        if isinstance(other, (int, PuiseuxApprox, TateApprox)):
            other = self._lift(other)
        self._check(other)
        out = dict(self.zcoeffs)
        for i, c in other.zcoeffs.items():
            cur = out.get(i)
            out[i] = c if cur is None else cur + c
        return TateZApprox(
            self.s,
            min(self.tdeg, other.tdeg),
            min(self.zdeg, other.zdeg),
            out,
            self.radius_tag,
            min(self.prec, other.prec),
        )

    __radd__ = __add__

    def __neg__(self):
        return TateZApprox(
            self.s, self.tdeg, self.zdeg, {i: -c for i, c in self.zcoeffs.items()}, self.radius_tag, self.prec
        )

    def __sub__(self, other):
        if isinstance(other, (int, PuiseuxApprox, TateApprox)):
            other = self._lift(other)
        return self + (-other)

    def _lift(self, v):
        if isinstance(v, int):
            v = PuiseuxApprox.from_int(self.any_field(), v, _EXACT)
        if isinstance(v, PuiseuxApprox):
            v = TateApprox.from_scalar(v, self.s, self.tdeg)
        return TateZApprox.from_tate(v, self.zdeg, self.radius_tag)

    def __mul__(self, other):
        if isinstance(other, (int, PuiseuxApprox, TateApprox)):
            return TateZApprox(
                self.s,
                self.tdeg,
                self.zdeg,
                {i: c * other for i, c in self.zcoeffs.items()},
                self.radius_tag,
            )
        self._check(other)
        zdeg = min(self.zdeg, other.zdeg)
        prec = min(self.ord_or_prec() + other.prec, other.ord_or_prec() + self.prec)
        out = {}
        for ia, ca in self.zcoeffs.items():
            for ib, cb in other.zcoeffs.items():
                i = ia + ib
                if i > zdeg:
                    continue
                prod = ca * cb
                cur = out.get(i)
                out[i] = prod if cur is None else cur + prod
        return TateZApprox(self.s, min(self.tdeg, other.tdeg), zdeg, out, self.radius_tag, prec)

    __rmul__ = __mul__

    def twist(self, n):
        if n == 0:
            return self
        q = self.any_field().q
        scale = Fraction(q) ** n if n > 0 else Fraction(1, q ** (-n))
        return TateZApprox(
            self.s,
            self.tdeg,
            self.zdeg,
            {i: c.twist(n) for i, c in self.zcoeffs.items()},
            self.radius_tag,
            self.prec * scale,
        )

    # -- units ----------------------------------------------------------------------------

    def is_unit(self):
        """Dominant z-constant criterion in the tag's norm; ties are Undecidable."""
        a0 = self.zcoeffs.get(0)
        if a0 is None or not a0.is_unit():
            return False
        weight = 1 if self.radius_tag == "theta_disc" else 0
        v0 = a0.gauss_ord()
        rest = [c.gauss_ord() - weight * i for i, c in self.zcoeffs.items() if i != 0]
        if not rest:
            return True
        vmin = min(rest)
        if v0 == vmin:
            raise UndecidableUnit("z-constant term ties another z-coefficient")
        return v0 < vmin

    def invert(self):
        if not self.is_unit():
            raise NotAUnit("dominant z-constant criterion failed")
        a0 = self.zcoeffs[0]
        inv0 = a0.invert()
        w = self * inv0 - 1  # z-valuation >= 1
        out = self._lift(1)
        powW = self._lift(1)
        sign = -1
        for _ in range(self.zdeg):
            powW = powW * w
            if powW.is_zero_to_prec():
                break
            out = out + sign * powW
            sign = -sign
        return out * inv0

    def eval_at_theta(self):
        """Substitute z = theta (meaningful on theta_disc elements)."""
        fld = self.any_field()
        out = TateApprox.zero(self.s, self.tdeg, self.prec)
        for i, c in self.zcoeffs.items():
            out = out + c * PuiseuxApprox.theta_power(fld, i, _EXACT)
        return out

    def to_record(self):
        return {
            "s": self.s,
            "tdeg": self.tdeg,
            "zdeg": self.zdeg,
            "radius_tag": self.radius_tag,
            "zentries": [[i, self.zcoeffs[i].to_record()] for i in sorted(self.zcoeffs)],
        }

    @staticmethod
    def from_record(rec):
        z = {i: TateApprox.from_record(c) for i, c in rec["zentries"]}
        return TateZApprox(rec["s"], rec["tdeg"], rec["zdeg"], z, rec["radius_tag"])


# ---------------------------------------------------------------------------
# twist limits (Lemma: bounded elements converge along twists)


def twist_limit(f):
    """(ell, lim_n f^{(n ell)}) for ||f|| <= 1; the limit has constant coefficients.

    ell is the lcm of the Frobenius orbit lengths of the norm-1 leading
    residues; the limit keeps exactly the ord-0 part of each coefficient and
    is nonzero iff Ord(f) = 0.
    """
    v = f.gauss_ord()
    if v is not None and v < 0:
        raise NotInUnitBall("twist_limit needs Gauss norm <= 1")
    ell = 1
    limit = {}
    for nu, c in f.coeffs.items():
        lead = c.coeff_at(0)
        if lead is None:
            continue
        orbit = 1
        cur = lead.frobenius_q(1)
        while cur != lead:
            cur = cur.frobenius_q(1)
            orbit += 1
        ell = ell * orbit // _gcd(ell, orbit)
        limit[nu] = PuiseuxApprox.from_field_elem(lead, _EXACT)
    return ell, TateApprox(f.s, f.tdeg, limit, _EXACT)


# ---------------------------------------------------------------------------
# Anderson-Thakur elements


def omega(alpha, prec, tdeg=None):
    """omega(alpha) = gamma * prod_{i>=0} x^{q^i}/tau^i(alpha) for a unit alpha.

    x is the constant coefficient of alpha and gamma its deterministic
    (q-1)-st root; the product stops at the first factor that is
    1 + (below precision).  Satisfies tau(omega) = alpha * omega to precision.
    """
    if not alpha.is_unit():
        raise NotAUnit("omega needs a unit argument")
    if tdeg is None:
        tdeg = alpha.tdeg
    q = alpha.any_field().q
    x = alpha.constant_coeff()
    gamma = x.nth_root(q - 1) if q > 2 else x
    u = alpha.invert() * x  # 1 + delta, Ord(delta) > 0
    delta = u - 1
    out = TateApprox.one(alpha.s, tdeg, gamma.field, prec=Fraction(prec))
    i = 0
    while True:
        fac = u.twist(i)
        out = out * fac
        i += 1
        d = delta.ord_or_prec()
        if delta.is_zero_to_prec() or d * q**i >= prec:
            break
    return (out * gamma).capped(Fraction(prec))


def omega_z(alpha, prec, zdeg=None):
    """The section-2.3 product applied to a unit of the z-extended algebra."""
    if not alpha.is_unit():
        raise NotAUnit("omega_z needs a unit argument")
    q = alpha.any_field().q
    if zdeg is None:
        zdeg = alpha.zdeg
    x = alpha.zcoeffs[0].constant_coeff()
    gamma = x.nth_root(q - 1) if q > 2 else x
    u = alpha.invert() * x
    delta = u - 1
    out = u._lift(1)
    i = 0
    while True:
        fac = u.twist(i)
        out = out * fac
        i += 1
        d = delta.ord_or_prec()
        dd = d if delta.is_zero_to_prec() else min(d, delta.theta_ord())
        if delta.is_zero_to_prec() or dd * q**i >= prec + zdeg:
            break
    return out * gamma


def big_omega(p, m, s, tdeg, zdeg, prec):
    """Omega(z) = (-theta)^(-q/(q-1)) prod_{i>=1} (1 - z/theta^{q^i}).

    Returned on the theta disc; satisfies Omega^(-1)(z) = (z - theta) Omega(z)
    and Omega(theta) = -1/pi~ to precision.
    """
    q = p**m
    fld = get_field(p, m, 1)
    work = Fraction(prec) + zdeg + q + 1
    if q == 2:
        front = PuiseuxApprox.theta(fld, work).invert() ** q
    else:
        front = ((-PuiseuxApprox.theta(fld, work)).nth_root(q - 1).invert()) ** q
    out = TateZApprox.from_tate(
        TateApprox.from_scalar(front, s, tdeg), zdeg, "theta_disc"
    )
    i = 1
    while True:
        c = -PuiseuxApprox.theta_power(front.field, -(q**i), work)
        factor = out._lift(1) + TateZApprox(
            s, tdeg, zdeg, {1: TateApprox.from_scalar(c, s, tdeg)}, "theta_disc"
        )
        out = out * factor
        # factor i contributes z-terms of ord q^i - z-weight; stop below caps
        if q**i - zdeg > prec:
            break
        i += 1
    return out


def omega_of_z_minus_theta_q(p, m, s, tdeg, zdeg, prec, numerator=None):
    """omega(numerator/(z - theta^q)) via the product; default numerator 1.

    With numerator 1 this equals -Omega(z) up to the deterministic-root
    F_q^x convention.
    """
    q = p**m
    fld = get_field(p, m, 1)
    work = Fraction(prec) + zdeg + q + 1
    theta_q = PuiseuxApprox.theta_power(fld, q, work)
    denom = TateZApprox(
        s,
        tdeg,
        zdeg,
        {0: TateApprox.from_scalar(-theta_q, s, tdeg), 1: TateApprox.one(s, tdeg, fld, work)},
        "theta_disc",
    )
    alpha = denom.invert()
    if numerator is not None:
        alpha = alpha * numerator
    return omega_z(alpha, prec, zdeg)
