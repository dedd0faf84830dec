"""Exact scalars and sparse multivariate polynomials with graded bookkeeping.

Coefficients live in a prime field F_p (stored as least non-negative
residues) or in the rationals (stored as ``fractions.Fraction``).
Monomials are exponent tuples, one slot per ring variable; polynomials
are sparse ``{monomial: coefficient}`` maps with no zero entries.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce


class DescriptorError(ValueError):
    """Operands built over incompatible ring descriptors."""


class PrimeField:
    """Arithmetic of F_p for a prime p; elements are ints in [0, p)."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, min(p, 1 + int(p**0.5) + 1))):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p

    zero = 0
    one = 1

    def coerce(self, x):
        if isinstance(x, Fraction):
            return self.mul(x.numerator % self.p, self.inv(x.denominator % self.p))
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero in F_p")
        return pow(a, self.p - 2, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"F_{self.p}"


class Rationals:
    """Arithmetic of Q; elements are ``Fraction`` values."""

    __slots__ = ()

    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, x):
        return Fraction(x)

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
            raise ZeroDivisionError("inverse of zero in Q")
        return 1 / Fraction(a)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


def monomial_degree(m) -> int:
    return sum(m)


def monomial_key(m, order: str):
    """Sort key: bigger key = bigger monomial in the given order."""
    if order == "degrevlex":
        return (sum(m),) + tuple(-e for e in reversed(m))
    if order == "lex":
        return tuple(m)
    raise ValueError(f"unknown monomial order {order!r}")


def monomial_compare(m1, m2, order: str) -> int:
    """-1, 0, or 1 as m1 <, =, > m2."""
    if len(m1) != len(m2):
        raise DescriptorError("monomials over different variable counts")
    k1, k2 = monomial_key(m1, order), monomial_key(m2, order)
    return (k1 > k2) - (k1 < k2)


def monomial_mul(m1, m2):
    return tuple(a + b for a, b in zip(m1, m2))


def monomial_divides(m1, m2) -> bool:
    return all(a <= b for a, b in zip(m1, m2))


def monomial_div(m1, m2):
    return tuple(a - b for a, b in zip(m1, m2))


def monomial_lcm(m1, m2):
    return tuple(max(a, b) for a, b in zip(m1, m2))


def monomials_of_degree(nvars: int, d: int):
    """All exponent tuples of total degree d, in no particular order."""
    if d < 0:
        return []
    if nvars == 0:
        return [()] if d == 0 else []
    if nvars == 1:
        return [(d,)]
    out = []
    for e in range(d + 1):
        for rest in monomials_of_degree(nvars - 1, d - e):
            out.append((e,) + rest)
    return out


class RingDescriptor:
    """A prime field or Q, optionally extended to a polynomial ring.

    ``variables`` may be empty, in which case the ring is the field
    itself.  A regular sequence of length 1 or 2 can be attached; its
    entries must be nonzero non-units.
    """

    __slots__ = ("field", "variables", "order", "regular_sequence", "_cache")

    def __init__(self, field, variables=(), order="degrevlex"):
        if order not in ("degrevlex", "lex"):
            raise ValueError(f"unknown monomial order {order!r}")
        self.field = field
        self.variables = tuple(variables)
        self.order = order
        self.regular_sequence = None
        self._cache = {}

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def compatible(self, other: "RingDescriptor") -> bool:
        return (
            self.field == other.field
            and self.variables == other.variables
            and self.order == other.order
        )

    def check_compatible(self, other: "RingDescriptor"):
        if not self.compatible(other):
            raise DescriptorError(f"mismatched ring descriptors {self} vs {other}")

    # polynomial constructors -------------------------------------------

    def zero(self) -> "Poly":
        return self._cached("zero", lambda: Poly(self, {}))

    def one(self) -> "Poly":
        return self._cached("one", lambda: Poly(self, {(0,) * self.nvars: self.field.one}))

    def const(self, c) -> "Poly":
        c = self.field.coerce(c)
        if c == self.field.zero:
            return self.zero()
        return Poly(self, {(0,) * self.nvars: c})

    def var(self, name: str) -> "Poly":
        i = self.variables.index(name)
        mono = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Poly(self, {mono: self.field.one})

    def monomial(self, mono, coeff=1) -> "Poly":
        c = self.field.coerce(coeff)
        if c == self.field.zero:
            return self.zero()
        return Poly(self, {tuple(mono): c})

    def _cached(self, key, make):
        v = self._cache.get(key)
        if v is None:
            v = self._cache[key] = make()
        return v

    def set_regular_sequence(self, polys):
        """Attach the generators of the configured ideal (once)."""
        polys = tuple(polys)
        if not 1 <= len(polys) <= 2:
            raise ValueError("regular sequence must have length 1 or 2")
        for f in polys:
            if f.is_zero():
                raise ValueError("regular sequence entry is zero")
            if f.is_unit():
                raise ValueError("regular sequence entry is a unit")
        self.regular_sequence = polys

    def describe(self) -> dict:
        field = f"F_{self.field.p}" if isinstance(self.field, PrimeField) else "QQ"
        seq = [str(f) for f in self.regular_sequence] if self.regular_sequence else []
        return {"field": field, "vars": list(self.variables), "seq": seq}

    def __repr__(self):
        base = repr(self.field)
        if self.variables:
            base += "[" + ",".join(self.variables) + "]"
        return base


class Poly:
    """Sparse polynomial: dict of exponent tuple -> nonzero coefficient."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: RingDescriptor, terms: dict):
        self.ring = ring
        self.terms = terms

    # predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_unit(self) -> bool:
        zero_mono = (0,) * self.ring.nvars
        return len(self.terms) == 1 and zero_mono in self.terms

    def is_homogeneous(self) -> bool:
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    # arithmetic ---------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        self.ring.check_compatible(other.ring)
        F = self.ring.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = F.add(out.get(m, F.zero), c)
            if s == F.zero:
                out.pop(m, None)
            else:
                out[m] = s
        return Poly(self.ring, out)

    def __neg__(self) -> "Poly":
        F = self.ring.field
        return Poly(self.ring, {m: F.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self.ring.check_compatible(other.ring)
        F = self.ring.field
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = monomial_mul(m1, m2)
                s = F.add(out.get(m, F.zero), F.mul(c1, c2))
                if s == F.zero:
                    out.pop(m, None)
                else:
                    out[m] = s
        return Poly(self.ring, out)

    def scale(self, c) -> "Poly":
        F = self.ring.field
        c = F.coerce(c)
        if c == F.zero:
            return self.ring.zero()
        return Poly(self.ring, {m: F.mul(v, c) for m, v in self.terms.items()})

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        return reduce(lambda a, b: a * b, [self] * n, self.ring.one())

    # normal forms -------------------------------------------------------

    def sorted_terms(self):
        """Terms in decreasing monomial order of the ring."""
        order = self.ring.order
        return sorted(self.terms.items(), key=lambda t: monomial_key(t[0], order), reverse=True)

    def leading(self):
        """(monomial, coeff) of the leading term; None for zero."""
        if not self.terms:
            return None
        order = self.ring.order
        m = max(self.terms, key=lambda t: monomial_key(t, order))
        return m, self.terms[m]

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.ring.compatible(other.ring)
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for name, e in zip(self.ring.variables, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == self.ring.field.one:
                parts.append(body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts)

    __repr__ = __str__


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    """Dispatch add/sub/mul with descriptor checking."""
    a.ring.check_compatible(b.ring)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


# --- tiny expression parser for CLI / config polynomials ----------------


def parse_poly(ring: RingDescriptor, text: str) -> Poly:
    """Parse '+', '-', '*', '^', integers, parentheses and variable names."""
    tokens = _tokenize(text)
    pos = [0]

    def peek():
        return tokens[pos[0]] if pos[0] < len(tokens) else None

    def eat(tok=None):
        t = peek()
        if t is None or (tok is not None and t != tok):
            raise ValueError(f"bad polynomial {text!r} (at token {t!r})")
        pos[0] += 1
        return t

    def atom():
        t = peek()
        if t == "(":
            eat("(")
            e = expr()
            eat(")")
            return e
        if t == "-":
            eat("-")
            return -atom()
        if isinstance(t, int):
            eat()
            return ring.const(t)
        if isinstance(t, str) and t in ring.variables:
            eat()
            return ring.var(t)
        raise ValueError(f"bad polynomial {text!r} (at token {t!r})")

    def power():
        base = atom()
        while peek() == "^":
            eat("^")
            e = peek()
            if not isinstance(e, int):
                raise ValueError(f"bad exponent in {text!r}")
            eat()
            base = base**e
        return base

    def term():
        p = power()
        while peek() == "*" or isinstance(peek(), (int,)) or (
            isinstance(peek(), str) and peek() in ring.variables
        ) or peek() == "(":
            if peek() == "*":
                eat("*")
            p = p * power()
        return p

    def expr():
        p = term()
        while peek() in ("+", "-"):
            if eat() == "+":
                p = p + term()
            else:
                p = p - term()
        return p

    result = expr()
    if pos[0] != len(tokens):
        raise ValueError(f"trailing input in polynomial {text!r}")
    return result


def _tokenize(text: str):
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "+-*^()":
            out.append(ch)
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(int(text[i:j]))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(text[i:j])
            i = j
        else:
            raise ValueError(f"bad character {ch!r} in polynomial")
    return out


def ring_descriptor(prime=97, rationals=False, variables=("x", "y"), order="degrevlex", sequence=None):
    """Build a descriptor and attach a regular sequence given as strings.

    ``sequence=None`` defaults to the variables themselves (so (x, y)
    over the default two-variable ring); pass ``sequence=()`` for a bare
    ring with no configured ideal.
    """
    field = Rationals() if rationals else PrimeField(prime)
    ring = RingDescriptor(field, tuple(variables), order)
    if sequence is None:
        sequence = tuple(ring.variables[:2]) if ring.variables else ()
    seq_polys = [parse_poly(ring, s) if isinstance(s, str) else s for s in sequence]
    if seq_polys:
        ring.set_regular_sequence(seq_polys)
    return ring
