"""Sparse exact multivariate Laurent polynomials.

Terms are stored as ``{exponent_tuple: raw_coefficient}`` with exponents
aligned to a :class:`VarTable`. Exponents may be any integers (negative
included); whether a *user* is allowed to write a negative power for a given
variable is an expression-IO concern (the table's ``laurent`` flags), not an
arithmetic one.

Coefficients are raw field values (see :mod:`a2bundle.fields`); every
polynomial carries its field spec. Multiplication has two paths: the plain
dictionary convolution, and a Kronecker-substitution path over Q that packs
each factor into one huge integer and lets gmpy2 do the heavy lifting. Both
paths are exact and agree (there is a hypothesis test pinning that down).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd

from .errors import (
    DivisionByZero,
    FieldMismatch,
    NegativeExponentAtZero,
    NegativePowerOfNonMonomial,
    NonInvertibleImageForLaurentVariable,
    NotDivisible,
    NotInAmbientRing,
    UnexpectedVariable,
    VarTableMismatch,
)
from .fields import FieldElem, FieldSpec, Rationals

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _mpz = int


@dataclass(frozen=True)
class VarTable:
    """Ordered variable names plus which ones may be *written* inverted.

    The ``laurent`` entry is consulted only by the expression parser/printer;
    internally any variable can carry negative exponents.
    """

    names: tuple[str, ...]
    laurent: tuple[str, ...] = ()

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise VarTableMismatch(f"duplicate variable names in {self.names}")
        for v in self.laurent:
            if v not in self.names:
                raise UnexpectedVariable(f"laurent flag for unknown variable {v!r}")

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnexpectedVariable(f"variable {name!r} not in table {self.names}") from None

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self.names

    def is_laurent(self, name: str) -> bool:
        return name in self.laurent


def _add_exps(e1, e2):
    return tuple(a + b for a, b in zip(e1, e2))


def _term_sort_key(item):
    exps, _ = item
    return (sum(exps), exps)


class MultiPoly:
    """Sparse Laurent polynomial over a fixed VarTable and field."""

    __slots__ = ("table", "field", "terms")

    def __init__(self, table: VarTable, field: FieldSpec, terms: dict | None = None,
                 _clean: bool = True):
        self.table = table
        self.field = field
        if terms is None:
            terms = {}
        if _clean:
            is_zero = field.is_zero
            terms = {e: c for e, c in terms.items() if not is_zero(c)}
        self.terms = terms

    # ---------------------------------------------------------- construction

    @classmethod
    def zero(cls, table, field):
        return cls(table, field, {}, _clean=False)

    @classmethod
    def const(cls, table, field, value):
        raw = field.coerce(value)
        if field.is_zero(raw):
            return cls.zero(table, field)
        return cls(table, field, {(0,) * len(table): raw}, _clean=False)

    @classmethod
    def var(cls, table, field, name, power=1):
        i = table.index(name)
        exps = tuple(power if j == i else 0 for j in range(len(table)))
        return cls(table, field, {exps: field.one}, _clean=False)

    @classmethod
    def monomial(cls, table, field, exps, coeff=1):
        raw = field.coerce(coeff)
        if field.is_zero(raw):
            return cls.zero(table, field)
        return cls(table, field, {tuple(exps): raw}, _clean=False)

    @classmethod
    def variables(cls, table, field):
        """Dict of name -> generator polynomial, for ergonomic construction."""
        return {n: cls.var(table, field, n) for n in table.names}

    # -------------------------------------------------------------- plumbing

    def _same_context(self, other: "MultiPoly"):
        if self.table.names != other.table.names:
            raise VarTableMismatch(
                f"mixing tables {self.table.names} and {other.table.names}")
        if self.field != other.field:
            raise FieldMismatch(f"mixing {self.field} and {other.field}")

    def _coerce_operand(self, other):
        if isinstance(other, MultiPoly):
            self._same_context(other)
            return other
        if isinstance(other, (int, Fraction, FieldElem, tuple)):
            return MultiPoly.const(self.table, self.field, other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            other = self._coerce_operand(other)
            if other is NotImplemented:
                return NotImplemented
        return (self.table.names == other.table.names
                and self.field == other.field
                and self.terms == other.terms)

    __hash__ = None

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1
                                  and not any(next(iter(self.terms))))

    def constant_value(self):
        """Raw coefficient of the constant term (0 if absent)."""
        return self.terms.get((0,) * len(self.table), self.field.zero)

    def is_monomial(self):
        return len(self.terms) == 1

    def involves(self, name: str) -> bool:
        i = self.table.index(name)
        return any(e[i] != 0 for e in self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    # ------------------------------------------------------------ arithmetic

    def __add__(self, other):
        other = self._coerce_operand(other)
        if other is NotImplemented:
            return NotImplemented
        fadd, is_zero = self.field.add, self.field.is_zero
        out = dict(self.terms)
        for e, c in other.terms.items():
            prior = out.get(e)
            nc = c if prior is None else fadd(prior, c)
            if prior is not None and is_zero(nc):
                del out[e]
            else:
                out[e] = nc
        return MultiPoly(self.table, self.field, out, _clean=False)

    __radd__ = __add__

    def __neg__(self):
        fneg = self.field.neg
        return MultiPoly(self.table, self.field,
                         {e: fneg(c) for e, c in self.terms.items()}, _clean=False)

    def __sub__(self, other):
        other = self._coerce_operand(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce_operand(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms or not other.terms:
            return MultiPoly.zero(self.table, self.field)
        if len(self.terms) == 1:
            return other._mul_monomial(self)
        if len(other.terms) == 1:
            return self._mul_monomial(other)
        if isinstance(self.field, Rationals):
            kron = _mul_kronecker(self, other)
            if kron is not None:
                return kron
        return self._mul_dict(other)

    __rmul__ = __mul__

    def _mul_monomial(self, mono: "MultiPoly"):
        (me, mc), = mono.terms.items()
        fmul = self.field.mul
        return MultiPoly(self.table, self.field,
                         {_add_exps(e, me): fmul(c, mc) for e, c in self.terms.items()},
                         _clean=False)

    def _mul_dict(self, other: "MultiPoly"):
        fadd, fmul, is_zero = self.field.add, self.field.mul, self.field.is_zero
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out = {}
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                prior = out.get(e)
                out[e] = fmul(c1, c2) if prior is None else fadd(prior, fmul(c1, c2))
        return MultiPoly(self.table, self.field,
                         {e: c for e, c in out.items() if not is_zero(c)}, _clean=False)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if not self.is_monomial():
                raise NegativePowerOfNonMonomial(
                    f"cannot raise a {len(self.terms)}-term polynomial to power {n}")
            (e, c), = self.terms.items()
            inv_c = self.field.inv(c)
            inv = MultiPoly(self.table, self.field,
                            {tuple(-x for x in e): inv_c}, _clean=False)
            return inv ** (-n)
        result = MultiPoly.const(self.table, self.field, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, value):
        """Multiply by a scalar (raw value, int, Fraction or FieldElem)."""
        raw = self.field.coerce(value)
        if self.field.is_zero(raw):
            return MultiPoly.zero(self.table, self.field)
        fmul = self.field.mul
        return MultiPoly(self.table, self.field,
                         {e: fmul(c, raw) for e, c in self.terms.items()}, _clean=False)

    def shift_exponents(self, delta):
        """Multiply by the monomial with exponent vector ``delta``."""
        delta = tuple(delta)
        if not any(delta):
            return self
        return MultiPoly(self.table, self.field,
                         {_add_exps(e, delta): c for e, c in self.terms.items()},
                         _clean=False)

    # --------------------------------------------------------------- queries

    def total_degree(self):
        """Max over terms of the exponent sum; None for the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str):
        if not self.terms:
            return None
        i = self.table.index(name)
        return max(e[i] for e in self.terms)

    def min_degree_in(self, name: str):
        if not self.terms:
            return None
        i = self.table.index(name)
        return min(e[i] for e in self.terms)

    def sorted_terms(self):
        """Terms in canonical order: graded by exponent sum, then exponent
        tuple, both descending."""
        return sorted(self.terms.items(), key=_term_sort_key, reverse=True)

    def leading_term(self):
        if not self.terms:
            return None
        return max(self.terms.items(), key=_term_sort_key)

    def coefficient_in(self, name: str, power: int) -> "MultiPoly":
        """Coefficient of ``name**power``, as a polynomial with that variable
        cleared."""
        i = self.table.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i] == power:
                out[e[:i] + (0,) + e[i + 1:]] = c
        return MultiPoly(self.table, self.field, out, _clean=False)

    def exponents_in(self, name: str):
        i = self.table.index(name)
        return sorted({e[i] for e in self.terms})

    def partial_derivative(self, name: str) -> "MultiPoly":
        i = self.table.index(name)
        fmul, coerce, is_zero = self.field.mul, self.field.coerce, self.field.is_zero
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k == 0:
                continue
            nc = fmul(c, coerce(k))
            if is_zero(nc):
                continue  # exponent divisible by the characteristic
            out[e[:i] + (k - 1,) + e[i + 1:]] = nc
        return MultiPoly(self.table, self.field, out, _clean=False)

    def evaluate(self, point: dict) -> FieldElem:
        """Evaluate at a full point; values are coerced into the field.

        Negative exponents at a zero coordinate raise
        :class:`NegativeExponentAtZero`.
        """
        f = self.field
        vals = {}
        for name in self.table.names:
            if name not in point:
                raise UnexpectedVariable(f"no value supplied for {name!r}")
            vals[name] = f.coerce(point[name])
        raws = [vals[n] for n in self.table.names]
        total = f.zero
        for e, c in self.terms.items():
            acc = c
            for base, k in zip(raws, e):
                if k == 0:
                    continue
                if f.is_zero(base):
                    if k < 0:
                        raise NegativeExponentAtZero(
                            "negative exponent evaluated at zero")
                    acc = f.zero
                    break
                b = base if k > 0 else f.inv(base)
                for _ in range(abs(k)):
                    acc = f.mul(acc, b)
            total = f.add(total, acc)
        return FieldElem(f, total)

    def set_vars_to_zero(self, names) -> "MultiPoly":
        """Substitute 0 for the listed variables (kills positive powers,
        keeps exponent-0 terms, rejects negative powers)."""
        idxs = [self.table.index(n) for n in names]
        out = {}
        for e, c in self.terms.items():
            bad = [i for i in idxs if e[i] < 0]
            if bad:
                raise NegativeExponentAtZero(
                    f"term with exponents {e} has a negative power of "
                    f"{self.table.names[bad[0]]}")
            if any(e[i] > 0 for i in idxs):
                continue
            out[e] = c
        return MultiPoly(self.table, self.field, out, _clean=False)

    # ------------------------------------------------------------- printing

    def __str__(self):
        from .exprio import to_expr  # local import; exprio imports this module
        return to_expr(self)

    def __repr__(self):
        body = str(self) if len(self.terms) <= 12 else f"<{len(self.terms)} terms>"
        return f"MultiPoly({body!r}, vars={self.table.names}, field={self.field})"


# --------------------------------------------------------------- operations


def substitute(poly: MultiPoly, images: dict, into: VarTable | None = None,
               field: FieldSpec | None = None) -> MultiPoly:
    """Substitute polynomials for variables.

    ``images`` maps variable names of ``poly`` to MultiPoly values over a
    common target table (or to constants). Variables without an image map to
    themselves, so the target table must contain them by name. A variable
    occurring with a negative exponent must have an invertible image: a
    single term with unit coefficient — anything else raises
    :class:`NonInvertibleImageForLaurentVariable`.
    """
    f = field or poly.field
    target = into
    img_polys = {}
    for name, val in images.items():
        poly.table.index(name)  # raises UnexpectedVariable for stray keys
        if isinstance(val, MultiPoly):
            if target is None:
                target = val.table
            elif target.names != val.table.names:
                raise VarTableMismatch(
                    f"images use tables {target.names} and {val.table.names}")
            if val.field != f:
                raise FieldMismatch(f"image of {name!r} lives over {val.field}, not {f}")
            img_polys[name] = val
        else:
            img_polys[name] = val  # constant; coerced once the table is known
    if target is None:
        target = poly.table
    for name, val in img_polys.items():
        if not isinstance(val, MultiPoly):
            img_polys[name] = MultiPoly.const(target, f, val)

    # variables that keep their own name
    n = len(poly.table)
    for i, name in enumerate(poly.table.names):
        if name not in img_polys and any(e[i] for e in poly.terms):
            img_polys[name] = MultiPoly.var(target, f, name)

    # Laurent safety check
    neg_vars = set()
    for e in poly.terms:
        for i, k in enumerate(e):
            if k < 0:
                neg_vars.add(poly.table.names[i])
    for name in neg_vars:
        img = img_polys[name]
        if not img.is_monomial():
            raise NonInvertibleImageForLaurentVariable(
                f"{name!r} occurs with negative exponent but its image has "
                f"{len(img.terms)} terms")

    power_cache: dict[tuple[str, int], MultiPoly] = {}

    def img_power(name, k):
        key = (name, k)
        hit = power_cache.get(key)
        if hit is None:
            hit = power_cache[key] = img_polys[name] ** k
        return hit

    out = MultiPoly.zero(target, f)
    one_exps = (0,) * len(target)
    for e, c in poly.terms.items():
        term = MultiPoly(target, f, {one_exps: f.coerce(c)}, _clean=False)
        for i, k in enumerate(e):
            if k:
                term = term * img_power(poly.table.names[i], k)
        out = out + term
    return out


def divide_exact(num: MultiPoly, den: MultiPoly) -> MultiPoly:
    """Exact division of Laurent polynomials; raises NotDivisible otherwise.

    Strategy: strip the per-variable monomial content off both operands so
    they become honest polynomials, run leading-term long division under the
    graded order, and re-apply the content shift (which may be negative) to
    the quotient. Because the graded order is multiplicative, exactness
    guarantees every intermediate leading term is divisible, so hitting a
    non-divisible leading term is a proof of failure, not a search dead end.
    """
    num._same_context(den)
    if den.is_zero():
        raise DivisionByZero("exact division by the zero polynomial")
    if num.is_zero():
        return MultiPoly.zero(num.table, num.field)

    def content(p):
        mins = None
        for e in p.terms:
            mins = e if mins is None else tuple(min(a, b) for a, b in zip(mins, e))
        return mins

    cn, cd = content(num), content(den)
    shift = tuple(a - b for a, b in zip(cn, cd))
    nn = num.shift_exponents(tuple(-x for x in cn))
    dd = den.shift_exponents(tuple(-x for x in cd))

    f = num.field
    fdiv, fneg = f.div, f.neg
    quot: dict[tuple, object] = {}
    rem = nn
    de, dc = dd.leading_term()
    while rem.terms:
        re_, rc = rem.leading_term()
        qe = tuple(a - b for a, b in zip(re_, de))
        if any(x < 0 for x in qe):
            raise NotDivisible(
                f"leading term exponents {re_} not divisible by {de}")
        qc = fdiv(rc, dc)
        quot[qe] = qc
        rem = rem + dd._mul_monomial(
            MultiPoly(num.table, f, {qe: fneg(qc)}, _clean=False))
    return MultiPoly(num.table, f, quot, _clean=False).shift_exponents(shift)


def congruent_mod_power(f: MultiPoly, g: MultiPoly, name: str, k: int,
                        ambient: "RingDescriptor | None" = None) -> bool:
    """True iff f - g lies in the ideal (name**k), i.e. every term of the
    difference carries exponent >= k on that variable.

    The difference must have nonnegative exponents in ``name`` (congruences
    are only meaningful where the variable is not inverted); if ``ambient``
    is given the difference must lie in that ring. Violations raise
    :class:`NotInAmbientRing`.
    """
    diff = f - g
    i = f.table.index(name)
    if any(e[i] < 0 for e in diff.terms):
        raise NotInAmbientRing(
            f"difference has a negative power of {name!r}; congruence mod "
            f"{name}^{k} is not defined")
    if ambient is not None and not ambient.contains(diff):
        bad = ambient.violations(diff)[0]
        raise NotInAmbientRing(
            f"difference leaves the ambient ring at exponents {bad[0]}")
    return all(e[i] >= k for e in diff.terms)


def truncate_var(f: MultiPoly, name: str, k: int) -> MultiPoly:
    """Drop all terms with exponent >= k on the named variable."""
    i = f.table.index(name)
    return MultiPoly(f.table, f.field,
                     {e: c for e, c in f.terms.items() if e[i] < k}, _clean=False)


def split_negative_parts(f: MultiPoly, a_name: str, b_name: str
                         ) -> tuple[MultiPoly, MultiPoly, MultiPoly]:
    """Three-way split of a Laurent polynomial by the signs of two exponents.

    Returns ``(doubly_negative, b_nonneg, a_nonneg_b_neg)``:

    * ``doubly_negative`` -- terms with both exponents negative;
    * ``b_nonneg``        -- terms with exponent of ``b_name`` >= 0 (this part
      absorbs the terms where neither exponent is negative);
    * ``a_nonneg_b_neg``  -- terms with ``a_name`` >= 0 but ``b_name`` < 0.

    The three parts sum back to ``f``.
    """
    ia, ib = f.table.index(a_name), f.table.index(b_name)
    dneg, b_ok, a_ok = {}, {}, {}
    for e, c in f.terms.items():
        if e[ib] >= 0:
            b_ok[e] = c
        elif e[ia] >= 0:
            a_ok[e] = c
        else:
            dneg[e] = c
    mk = lambda d: MultiPoly(f.table, f.field, d, _clean=False)
    return mk(dneg), mk(b_ok), mk(a_ok)


def in_ring(f: MultiPoly, ring: "RingDescriptor") -> bool:
    """True iff every term of ``f`` satisfies the ring's exponent conditions."""
    return ring.contains(f)


# ------------------------------------------------------------- memberships


@dataclass(frozen=True)
class RingDescriptor:
    """A subring of the Laurent ring cut out by exponent conditions.

    ``lower`` holds a per-variable lower bound (0) or None for no bound;
    ``sums`` holds extra linear conditions ``sum(coeffs * exps) >= rhs`` used
    for rings like the blow-up algebra where only the combined exponent of
    two variables must stay nonnegative.
    """

    table: VarTable
    lower: tuple
    sums: tuple = ()

    @classmethod
    def polynomials(cls, table: VarTable):
        return cls(table, (0,) * len(table))

    def allow_negative(self, *names):
        idxs = {self.table.index(n) for n in names}
        lower = tuple(None if i in idxs else b for i, b in enumerate(self.lower))
        return RingDescriptor(self.table, lower, self.sums)

    def require_sum(self, names, rhs=0):
        coeffs = [0] * len(self.table)
        for n in names:
            coeffs[self.table.index(n)] = 1
        return RingDescriptor(self.table, self.lower,
                              self.sums + ((tuple(coeffs), rhs),))

    def violations(self, poly: MultiPoly):
        """Offending (exponents, coefficient) pairs, in canonical order."""
        if poly.table.names != self.table.names:
            raise VarTableMismatch(
                f"membership check across tables {poly.table.names} vs {self.table.names}")
        bad = []
        for e, c in poly.sorted_terms():
            ok = all(b is None or x >= b for x, b in zip(e, self.lower))
            if ok:
                for coeffs, rhs in self.sums:
                    if sum(k * x for k, x in zip(coeffs, e)) < rhs:
                        ok = False
                        break
            if not ok:
                bad.append((e, c))
        return bad

    def contains(self, poly: MultiPoly) -> bool:
        return not self.violations(poly)


# ---------------------------------------------- Kronecker substitution path

_KRON_MIN_PAIRS = 40_000
_KRON_MAX_SLOTS = 1 << 24
_KRON_MAX_BYTES = 1 << 28


def _mul_kronecker(a: MultiPoly, b: MultiPoly):
    """Multiply over Q by packing into big integers; None if not worthwhile.

    Coefficients are scaled to integers, split into positive/negative parts
    (four nonnegative packings), and combined as P1 = A+B+ + A-B- and
    P2 = A+B- + A-B+ so every limb of P1/P2 is a plain nonnegative sum that
    cannot interfere with its neighbours; the output coefficient of a slot
    is limb(P1) - limb(P2).
    """
    na, nb = len(a.terms), len(b.terms)
    if na * nb < _KRON_MIN_PAIRS:
        return None

    nvars = len(a.table)
    amin = [min(e[i] for e in a.terms) for i in range(nvars)]
    amax = [max(e[i] for e in a.terms) for i in range(nvars)]
    bmin = [min(e[i] for e in b.terms) for i in range(nvars)]
    bmax = [max(e[i] for e in b.terms) for i in range(nvars)]
    sizes = [(amax[i] - amin[i]) + (bmax[i] - bmin[i]) + 1 for i in range(nvars)]
    nslots = 1
    for s in sizes:
        nslots *= s
        if nslots > _KRON_MAX_SLOTS:
            return None

    da = db = 1
    for c in a.terms.values():
        da = da * c.denominator // gcd(da, c.denominator)
    for c in b.terms.values():
        db = db * c.denominator // gcd(db, c.denominator)
    ai = {e: int(c * da) for e, c in a.terms.items()}
    bi = {e: int(c * db) for e, c in b.terms.items()}

    max_a = max(abs(c) for c in ai.values())
    max_b = max(abs(c) for c in bi.values())
    bound = max_a * max_b * min(na, nb)
    limb = (bound.bit_length() + 7) // 8
    if nslots * limb > _KRON_MAX_BYTES:
        return None

    strides = [0] * nvars
    acc = 1
    for i in range(nvars):
        strides[i] = acc
        acc *= sizes[i]

    def pack(d, mins):
        pos = bytearray(nslots * limb)
        neg = bytearray(nslots * limb)
        for e, c in d.items():
            k = 0
            for i in range(nvars):
                k += (e[i] - mins[i]) * strides[i]
            off = k * limb
            if c > 0:
                pos[off:off + limb] = c.to_bytes(limb, "little")
            else:
                neg[off:off + limb] = (-c).to_bytes(limb, "little")
        return (_mpz(int.from_bytes(pos, "little")),
                _mpz(int.from_bytes(neg, "little")))

    ap, an = pack(ai, amin)
    bp, bn = pack(bi, bmin)
    p1 = int(ap * bp + an * bn)
    p2 = int(ap * bn + an * bp)

    nbytes = nslots * limb
    b1 = p1.to_bytes(nbytes + limb, "little")
    b2 = p2.to_bytes(nbytes + limb, "little")
    den = da * db
    base = [amin[i] + bmin[i] for i in range(nvars)]
    out = {}
    for k in range(nslots):
        off = k * limb
        chunk1 = b1[off:off + limb]
        chunk2 = b2[off:off + limb]
        if chunk1 == chunk2:
            continue
        c = int.from_bytes(chunk1, "little") - int.from_bytes(chunk2, "little")
        rem = k
        exps = [0] * nvars
        for i in range(nvars):
            exps[i] = base[i] + rem % sizes[i]
            rem //= sizes[i]
        out[tuple(exps)] = Fraction(c, den)
    return MultiPoly(a.table, a.field, out, _clean=False)
