"""Multiplicative subgroups of the nonzero complex numbers and orbit tests."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError, UnsupportedGroup
from .scalars import DEFAULT_TOLERANCE, GaussianRational, modulus_squared, parse_gaussian

_UNITS = {
    GaussianRational(1, 0): 1,
    GaussianRational(-1, 0): 2,
    GaussianRational(0, 1): 4,
    GaussianRational(0, -1): 4,
}


@dataclass(frozen=True)
class GroupSpec:
    """One of: trivial, roots of unity of order k, unit circle, all of C^x, <g>."""

    kind: str
    k: int = 1
    generator: GaussianRational | None = None

    @classmethod
    def trivial(cls):
        return cls("trivial")

    @classmethod
    def roots(cls, k: int):
        if k < 1:
            raise ValueError("roots of unity need k >= 1")
        return cls.trivial() if k == 1 else cls("roots", k)

    @classmethod
    def circle(cls):
        return cls("circle")

    @classmethod
    def nonzero(cls):
        return cls("nonzero")

    @classmethod
    def cyclic(cls, g) -> GroupSpec:
        if not isinstance(g, GaussianRational):
            g = GaussianRational(g) if not isinstance(g, str) else parse_gaussian(g)
        if not g:
            raise ValueError("generator must be nonzero")
        if g in _UNITS:
            return cls.roots(_UNITS[g])
        if g.abs2() == 1:
            # a unimodular Gaussian rational other than a 4th root of unity has infinite order
            raise UnsupportedGroup(f"<{g}> lies on the unit circle but is not finite; orbit membership is not decidable here")
        return cls("cyclic", 0, g)

    @classmethod
    def parse(cls, text: str) -> GroupSpec:
        """``trivial | roots:<k> | circle | nonzero | cyclic:<g>``."""
        t = text.strip().lower()
        if t in ("trivial", "1", "{1}"):
            return cls.trivial()
        if t in ("circle", "s1", "unit-circle"):
            return cls.circle()
        if t in ("nonzero", "cx", "c*"):
            return cls.nonzero()
        if t.startswith("roots:"):
            try:
                return cls.roots(int(t[6:]))
            except ValueError as exc:
                raise ParseError(f"bad group spec {text!r}") from exc
        if t.startswith("cyclic:"):
            return cls.cyclic(parse_gaussian(t[7:].replace(" ", "")))
        raise ParseError(f"unknown group spec {text!r}")

    @property
    def in_unit_circle(self) -> bool:
        return self.kind in ("trivial", "roots", "circle")

    def __str__(self):
        if self.kind == "roots":
            return f"roots:{self.k}"
        if self.kind == "cyclic":
            return f"cyclic:{self.generator}"
        return self.kind

    def is_subgroup_of(self, other: GroupSpec) -> bool | None:
        """Inclusion when decidable from the specs alone, else ``None``."""
        if self.kind == "trivial" or other.kind == "nonzero":
            return True
        if other.kind == "circle":
            return self.in_unit_circle
        if self.kind == "roots" and other.kind == "roots":
            return other.k % self.k == 0
        if self == other:
            return True
        return None


def _is_zero(x, tol):
    if isinstance(x, complex):
        return abs(x) <= tol
    return not x


def _float_mode(a, b):
    return isinstance(a, (complex, float)) or isinstance(b, (complex, float))


def _log_ratio(num: Fraction, den: Fraction) -> float:
    # logs of big integers stay finite where float(Fraction) would overflow
    q = Fraction(num) / Fraction(den)
    return math.log(q.numerator) - math.log(q.denominator)


def _cyclic_exponent(a, b, g: GaussianRational) -> int | None:
    """The n with a == g**n * b, exact, or None."""
    r = modulus_squared(a) / modulus_squared(b)
    s = g.abs2()
    guess = round(_log_ratio(r, 1) / _log_ratio(s, 1))
    for n in (guess, guess - 1, guess + 1):
        if s ** n == r and a == (g ** n) * b:
            return n
    return None


def orbit_equivalent(a, b, G: GroupSpec, tol: float = DEFAULT_TOLERANCE) -> bool:
    """True iff ``a`` lies in ``G * b``.  The orbit of 0 is {0}."""
    if _float_mode(a, b):
        return _orbit_equivalent_float(complex(a), complex(b), G, tol)
    za, zb = not a, not b
    if za or zb:
        return za and zb
    kind = G.kind
    if kind == "trivial":
        return a == b
    if kind == "nonzero":
        return True
    if kind == "circle":
        return modulus_squared(a) == modulus_squared(b)
    if kind == "roots":
        return (a / b) ** G.k == 1
    if kind == "cyclic":
        return _cyclic_exponent(a, b, G.generator) is not None
    raise UnsupportedGroup(str(G))


def _orbit_equivalent_float(a: complex, b: complex, G: GroupSpec, tol: float) -> bool:
    scale = max(1.0, abs(a), abs(b))
    za, zb = abs(a) <= tol * scale, abs(b) <= tol * scale
    if za or zb:
        return za and zb
    kind = G.kind
    if kind == "trivial":
        return abs(a - b) <= tol * scale
    if kind == "nonzero":
        return True
    if kind == "circle":
        return abs(abs(a) - abs(b)) <= tol * scale
    if kind == "roots":
        return abs((a / b) ** G.k - 1) <= tol * max(1, G.k)
    if kind == "cyclic":
        g = complex(G.generator)
        n = round(math.log(abs(a) / abs(b)) / math.log(abs(g)))
        return abs(a - g ** n * b) <= tol * scale
    raise UnsupportedGroup(str(G))


def orbit_label(a, G: GroupSpec):
    """Hashable canonical label of the orbit of ``a`` (exact values only)."""
    if not a:
        return 0
    kind = G.kind
    if kind == "trivial":
        return a
    if kind == "nonzero":
        return 1
    if kind == "circle":
        return ("abs2", modulus_squared(a))
    if kind == "roots":
        return ("roots", modulus_squared(a), a ** G.k)
    if kind == "cyclic":
        g = G.generator
        if g.abs2() < 1:
            g = g.inverse()
        s = g.abs2()
        # shift so that 1 <= |rep|^2 < s
        n = math.floor(_log_ratio(modulus_squared(a), 1) / _log_ratio(s, 1))
        for cand in (n, n - 1, n + 1):
            rep = a * g ** (-cand)
            m2 = rep.abs2() if isinstance(rep, GaussianRational) else rep * rep
            if 1 <= m2 < s:
                return ("cyclic", rep)
        raise AssertionError("orbit representative search failed")
    raise UnsupportedGroup(str(G))
