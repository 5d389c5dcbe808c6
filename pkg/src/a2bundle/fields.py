"""Exact coefficient fields: Q, F_p, and quadratic/cubic extensions of Q.

Raw element values are deliberately lightweight so the polynomial layer can
store them directly in term dictionaries:

* rationals      -> ``fractions.Fraction``
* prime fields   -> ``int`` residue in ``[0, p)``
* Q[t]/(m(t))    -> ``tuple[Fraction, ...]`` of length deg(m) (low to high)

A :class:`FieldSpec` bundles the operations on raw values; :class:`FieldElem`
is the small wrapper used at API boundaries (``field_arith`` and friends).
All arithmetic is exact; nothing here ever touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BadFieldSpec, DivisionByZero, FieldMismatch


def _is_probable_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3 * 10^24 (fixed base set)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
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


class FieldSpec:
    """Common interface of the three concrete field kinds."""

    def elem(self, value) -> "FieldElem":
        return FieldElem(self, self.coerce(value))

    def zero_elem(self) -> "FieldElem":
        return FieldElem(self, self.zero)

    def one_elem(self) -> "FieldElem":
        return FieldElem(self, self.one)

    # concrete specs implement: zero, one, characteristic, coerce, add, sub,
    # mul, neg, inv, div, is_zero, to_str, coeff_str, descriptor


@dataclass(frozen=True)
class Rationals(FieldSpec):
    """The rational numbers with arbitrary-precision Fraction arithmetic."""

    zero = Fraction(0)
    one = Fraction(1)
    characteristic = 0

    def coerce(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, FieldElem):
            if value.spec != self:
                raise FieldMismatch(f"cannot coerce element of {value.spec} into Q")
            return value.value
        raise FieldMismatch(f"cannot interpret {value!r} as a rational")

    def from_fraction(self, q: Fraction):
        return q

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0 in Q")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise DivisionByZero("division by 0 in Q")
        return a / b

    def is_zero(self, a):
        return a == 0

    def to_str(self, a):
        return str(a)

    def coeff_str(self, a):
        """(is_negative, printed absolute value, needs_parens) for printing."""
        return a < 0, str(abs(a)), False

    def descriptor(self):
        return "q"

    def __str__(self):
        return "Q"


@dataclass(frozen=True)
class PrimeField(FieldSpec):
    """F_p for a prime p; elements are canonical residues in [0, p)."""

    p: int

    def __post_init__(self):
        if not _is_probable_prime(self.p):
            raise BadFieldSpec(f"{self.p} is not prime")

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    @property
    def characteristic(self):
        return self.p

    def coerce(self, value):
        if isinstance(value, FieldElem):
            if value.spec != self:
                raise FieldMismatch(f"cannot coerce element of {value.spec} into F_{self.p}")
            return value.value
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, Fraction):
            return self.from_fraction(value)
        raise FieldMismatch(f"cannot interpret {value!r} as an element of F_{self.p}")

    def from_fraction(self, q: Fraction):
        den = q.denominator % self.p
        if den == 0:
            raise DivisionByZero(f"denominator {q.denominator} vanishes in F_{self.p}")
        return q.numerator * pow(den, -1, self.p) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise DivisionByZero(f"inverse of 0 in F_{self.p}")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a % self.p == 0

    def to_str(self, a):
        return str(a % self.p)

    def coeff_str(self, a):
        return False, str(a % self.p), False

    def descriptor(self):
        return f"fp:{self.p}"

    def __str__(self):
        return f"F_{self.p}"


def _rational_roots_exist(coeffs: tuple[Fraction, ...]) -> bool:
    """True iff the polynomial (low-to-high coefficients) has a rational root.

    Clears denominators and runs the rational root theorem; enough to decide
    irreducibility over Q in degrees 2 and 3.
    """
    if coeffs[0] == 0:
        return True  # root at 0
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // _gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in coeffs]
    a0, an = abs(ints[0]), abs(ints[-1])

    def divisors(n):
        out = []
        d = 1
        while d * d <= n:
            if n % d == 0:
                out.append(d)
                out.append(n // d)
            d += 1
        return out

    for p in divisors(a0):
        for q in divisors(an):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                acc = Fraction(0)
                for c in reversed(ints):
                    acc = acc * cand + c
                if acc == 0:
                    return True
    return False


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class QuotientExtension(FieldSpec):
    """Q[t]/(m(t)) for an irreducible m of degree 2 or 3.

    ``minpoly`` stores the *monic* generator low-to-high; the constructor
    accepts any nonzero leading coefficient and normalizes (so 5t^2 - 1 and
    t^2 - 1/5 describe the same field). Irreducibility is decided by the
    rational root test, which is complete in these degrees; higher degrees
    are rejected.
    """

    minpoly: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.minpoly)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        deg = len(coeffs) - 1
        if deg < 2:
            raise BadFieldSpec("minimal polynomial must have degree >= 2")
        if deg > 3:
            raise BadFieldSpec("minimal polynomials of degree > 3 are not supported")
        lead = coeffs[-1]
        coeffs = tuple(c / lead for c in coeffs)
        if _rational_roots_exist(coeffs):
            raise BadFieldSpec("minimal polynomial is reducible over Q (rational root)")
        object.__setattr__(self, "minpoly", coeffs)

    @property
    def degree(self):
        return len(self.minpoly) - 1

    @property
    def zero(self):
        return (Fraction(0),) * self.degree

    @property
    def one(self):
        return (Fraction(1),) + (Fraction(0),) * (self.degree - 1)

    @property
    def generator(self):
        """The class of t."""
        return tuple(Fraction(1) if i == 1 else Fraction(0) for i in range(self.degree))

    characteristic = 0

    def coerce(self, value):
        if isinstance(value, FieldElem):
            if value.spec != self:
                raise FieldMismatch(f"cannot coerce element of {value.spec} into {self}")
            return value.value
        if isinstance(value, (int, Fraction)):
            return (Fraction(value),) + (Fraction(0),) * (self.degree - 1)
        if isinstance(value, tuple):
            if len(value) > self.degree:
                value = self._reduce(list(value))
            vals = tuple(Fraction(c) for c in value)
            return vals + (Fraction(0),) * (self.degree - len(vals))
        raise FieldMismatch(f"cannot interpret {value!r} as an element of {self}")

    def from_fraction(self, q: Fraction):
        return (q,) + (Fraction(0),) * (self.degree - 1)

    def _reduce(self, coeffs):
        """Reduce a list of coefficients (any length) modulo the minpoly."""
        d = self.degree
        m = self.minpoly
        coeffs = list(coeffs) + [Fraction(0)] * max(0, d - len(coeffs))
        for k in range(len(coeffs) - 1, d - 1, -1):
            c = coeffs[k]
            if c == 0:
                continue
            coeffs[k] = Fraction(0)
            # t^k = t^(k-d) * (-(m_0 + m_1 t + ... + m_{d-1} t^{d-1}))
            for i in range(d):
                coeffs[k - d + i] -= c * m[i]
        return tuple(coeffs[:d])

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        d = self.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y != 0:
                    prod[i + j] += x * y
        return self._reduce(prod)

    def is_zero(self, a):
        return all(c == 0 for c in a)

    def inv(self, a):
        """Extended Euclid in Q[t] against the minimal polynomial."""
        if self.is_zero(a):
            raise DivisionByZero(f"inverse of 0 in {self}")
        # run extended Euclid on (minpoly, a), tracking only the s-cofactor
        # of a since we never need the minpoly cofactor
        r0 = [Fraction(c) for c in self.minpoly]
        r1 = [Fraction(c) for c in a]
        s0, s1 = [Fraction(0)], [Fraction(1)]

        def _trim(p):
            while p and p[-1] == 0:
                p.pop()
            return p

        def _sub_scaled(p, q, c, shift):
            # p -= c * t^shift * q, in place
            while len(p) < len(q) + shift:
                p.append(Fraction(0))
            for i, qc in enumerate(q):
                p[i + shift] -= c * qc
            return _trim(p)

        r0, r1 = _trim(r0), _trim(r1)
        while len(r1) > 1:
            # divide r0 by r1, folding the quotient into the s-cofactors
            while len(r0) >= len(r1) and r0:
                c = r0[-1] / r1[-1]
                shift = len(r0) - len(r1)
                r0 = _sub_scaled(r0, r1, c, shift)
                s0 = _sub_scaled(s0, s1, c, shift)
            r0, r1 = r1, r0
            s0, s1 = s1, s0
        if not r1:
            raise DivisionByZero("element shares a factor with the minimal polynomial")
        c = r1[0]
        inv = [x / c for x in s1]
        return self._reduce(inv)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def to_str(self, a):
        neg, body, parens = self.coeff_str(a)
        s = ("-" if neg else "") + body
        return s

    def coeff_str(self, a):
        """(is_negative, abs-value string in t, needs_parens).

        The sign is the sign of the highest nonzero t-coefficient, so that
        the polynomial printer can pull it into the +/- joiner.
        """
        terms = [(k, c) for k, c in enumerate(a) if c != 0]
        if not terms:
            return False, "0", False
        lead_neg = terms[-1][1] < 0
        sign = -1 if lead_neg else 1
        pieces = []
        for k, c in reversed(terms):
            c = c * sign
            if k == 0:
                body = str(abs(c))
            else:
                var = "t" if k == 1 else f"t^{k}"
                body = var if abs(c) == 1 else f"{abs(c)}*{var}"
            pieces.append((c < 0, body))
        out = pieces[0][1]
        for negative, body in pieces[1:]:
            out += (" - " if negative else " + ") + body
        needs_parens = len(pieces) > 1
        return lead_neg, out, needs_parens

    def descriptor(self):
        # minpoly is monic by construction so never prints a leading minus
        _, body, _ = self.coeff_str(self.minpoly)
        return "ext:" + body.replace(" ", "")

    def __str__(self):
        return f"Q[t]/({self.descriptor()[4:]})"


QQ = Rationals()


@dataclass(frozen=True)
class FieldElem:
    """A field element tagged with its field; thin wrapper over raw values."""

    spec: FieldSpec
    value: object

    def _check(self, other):
        if not isinstance(other, FieldElem):
            other = self.spec.elem(other)
        if other.spec != self.spec:
            raise FieldMismatch(f"mixing elements of {self.spec} and {other.spec}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FieldElem(self.spec, self.spec.add(self.value, other.value))

    def __sub__(self, other):
        other = self._check(other)
        return FieldElem(self.spec, self.spec.sub(self.value, other.value))

    def __mul__(self, other):
        other = self._check(other)
        return FieldElem(self.spec, self.spec.mul(self.value, other.value))

    def __truediv__(self, other):
        other = self._check(other)
        return FieldElem(self.spec, self.spec.div(self.value, other.value))

    def __neg__(self):
        return FieldElem(self.spec, self.spec.neg(self.value))

    def is_zero(self):
        return self.spec.is_zero(self.value)

    def __str__(self):
        return self.spec.to_str(self.value)


def field_arith(op: str, lhs: FieldElem, rhs: FieldElem | None = None) -> FieldElem:
    """Dispatch add/sub/mul/div (binary) or neg/inv (unary, rhs ignored)."""
    if op == "neg":
        return -lhs
    if op == "inv":
        return FieldElem(lhs.spec, lhs.spec.inv(lhs.raw))
    if rhs is None:
        raise ValueError(f"field operation {op!r} needs a second operand")
    if lhs.spec != rhs.spec:
        raise FieldMismatch(f"mixing elements of {lhs.spec} and {rhs.spec}")
    fns = {
        "add": lhs.__add__,
        "sub": lhs.__sub__,
        "mul": lhs.__mul__,
        "div": lhs.__truediv__,
    }
    if op not in fns:
        raise ValueError(f"unknown field operation {op!r}")
    return fns[op](rhs)


def char_check(spec: FieldSpec, forbidden) -> bool:
    """True iff the characteristic of ``spec`` is not in ``forbidden``."""
    return spec.characteristic not in set(forbidden)
