"""Scalar tower: rationals, Gaussian rationals, prime fields and tolerant floats.

Rationals are plain :class:`fractions.Fraction` values.  The other exact
domains are small immutable value classes defined here.  A :class:`Domain`
object bundles the operations that linear algebra needs but Python numbers do
not provide uniformly (zero tests, conjugation, sign of a real value, JSON
encoding).
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational as _RationalABC

from .errors import ArithmeticDomainError, ParseError, UnsupportedDomainError

DEFAULT_TOLERANCE = 1e-9


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational: {x!r}") from exc
    raise ArithmeticDomainError(f"cannot interpret {type(x).__name__} as a rational")


class GaussianRational:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> GaussianRational:
        z = object.__new__(cls)
        z.re = re
        z.im = im
        return z

    @staticmethod
    def _lift(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return GaussianRational._raw(Fraction(other), Fraction(0))
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return _mismatch(self, other)
        return GaussianRational._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return _mismatch(self, other)
        return GaussianRational._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return _mismatch(self, other)
        return GaussianRational._raw(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return _mismatch(self, other)
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return GaussianRational._raw(a * c, Fraction(0))
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return _mismatch(self, other)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return _mismatch(self, other)
        return o * self.inverse()

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = GaussianRational._raw(Fraction(1), Fraction(0))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> GaussianRational:
        d = self.re * self.re + self.im * self.im
        if not d:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational._raw(self.re / d, -self.im / d)

    def conjugate(self) -> GaussianRational:
        return GaussianRational._raw(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        if isinstance(other, complex):
            return self.re == other.real and self.im == other.imag
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        im = "" if abs(self.im) == 1 else str(abs(self.im))
        if not self.re:
            return f"{'-' if self.im < 0 else ''}{im}i"
        return f"{self.re}{'-' if self.im < 0 else '+'}{im}i"


I = GaussianRational(0, 1)


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class PrimeFieldElement:
    """Element of GF(p) for a word-sized prime p."""

    __slots__ = ("val", "p")

    def __init__(self, val: int, p: int):
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.val = int(val) % p
        self.p = p

    @classmethod
    def _raw(cls, val, p):
        z = object.__new__(cls)
        z.val = val
        z.p = p
        return z

    def _coerce(self, other):
        if isinstance(other, PrimeFieldElement):
            if other.p != self.p:
                raise ArithmeticDomainError(f"GF({self.p}) vs GF({other.p})")
            return other.val
        if isinstance(other, int) and not isinstance(other, bool):
            return other % self.p
        raise ArithmeticDomainError(f"GF({self.p}) vs {type(other).__name__}")

    def __add__(self, other):
        return PrimeFieldElement._raw((self.val + self._coerce(other)) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return PrimeFieldElement._raw((self.val - self._coerce(other)) % self.p, self.p)

    def __rsub__(self, other):
        return PrimeFieldElement._raw((self._coerce(other) - self.val) % self.p, self.p)

    def __mul__(self, other):
        return PrimeFieldElement._raw(self.val * self._coerce(other) % self.p, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return PrimeFieldElement._raw(self.val * pow(o, -1, self.p) % self.p, self.p)

    def __rtruediv__(self, other):
        return PrimeFieldElement._raw(self._coerce(other), self.p) / self

    def __neg__(self):
        return PrimeFieldElement._raw(-self.val % self.p, self.p)

    def __pow__(self, n: int):
        if n < 0:
            if self.val == 0:
                raise ZeroDivisionError(f"division by zero in GF({self.p})")
            return PrimeFieldElement._raw(pow(pow(self.val, -1, self.p), -n, self.p), self.p)
        # 0**0 == 1, matching the all-ones convention for the zeroth Hadamard power
        return PrimeFieldElement._raw(pow(self.val, n, self.p), self.p)

    def conjugate(self):
        return self

    def __bool__(self):
        return self.val != 0

    def __eq__(self, other):
        if isinstance(other, PrimeFieldElement):
            return self.p == other.p and self.val == other.val
        if isinstance(other, int):
            return self.val == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.val, self.p))

    def __repr__(self):
        return f"PrimeFieldElement({self.val}, {self.p})"

    def __str__(self):
        return str(self.val)


def _mismatch(a, b):
    raise ArithmeticDomainError(
        f"cannot combine {type(a).__name__} with {type(b).__name__}"
    )


def scalar_conj(z):
    """Complex conjugate; real and prime-field values are fixed points."""
    if isinstance(z, (int, Fraction)):
        return z
    if isinstance(z, (GaussianRational, complex, PrimeFieldElement)):
        return z.conjugate()
    if isinstance(z, float):
        return z
    raise ArithmeticDomainError(f"unsupported scalar {type(z).__name__}")


def modulus_squared(z):
    """|z|^2 as an exact Fraction for exact domains, a float otherwise."""
    if isinstance(z, PrimeFieldElement):
        raise UnsupportedDomainError("modulus is undefined over GF(p)")
    if isinstance(z, (int, Fraction)):
        return Fraction(z) * z
    if isinstance(z, GaussianRational):
        return z.abs2()
    if isinstance(z, (complex, float)):
        return abs(z) ** 2
    raise ArithmeticDomainError(f"unsupported scalar {type(z).__name__}")


_GAUSS_RE = re.compile(
    r"""^\s*(?:
        (?P<re>[+-]?\d+(?:/\d+)?)?\s*
        (?:(?P<sign>[+-])?\s*(?P<im>\d+(?:/\d+)?)?\s*\*?\s*(?P<i>[ij]))?
    )\s*$""",
    re.X,
)


def parse_gaussian(text: str) -> GaussianRational:
    """Parse ``"3"``, ``"-2/3"``, ``"2i"``, ``"-i"``, ``"1/2+1/2i"`` and similar."""
    m = _GAUSS_RE.match(text)
    if not m or (m.group("re") is None and m.group("i") is None):
        raise ParseError(f"not a Gaussian rational: {text!r}")
    re_part = Fraction(m.group("re")) if m.group("re") else Fraction(0)
    im_part = Fraction(0)
    if m.group("i"):
        if m.group("re") and not m.group("sign"):
            if m.group("im"):
                raise ParseError(f"not a Gaussian rational: {text!r}")
            # "2i", "-3/4i": the leading number is the imaginary coefficient
            return GaussianRational(0, Fraction(m.group("re")))
        im_part = Fraction(m.group("im")) if m.group("im") else Fraction(1)
        if m.group("sign") == "-":
            im_part = -im_part
    return GaussianRational(re_part, im_part)


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class Domain:
    """Arithmetic domain of matrix entries."""

    name: str = ""
    exact: bool = True
    is_field_complex: bool = False

    def coerce(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def is_zero(self, x, scale: float = 1.0) -> bool:
        return not x

    def eq(self, a, b, scale: float = 1.0) -> bool:
        return a == b

    def conj(self, x):
        return scalar_conj(x)

    def abs2(self, x):
        return modulus_squared(x)

    def real_sign(self, x, scale: float = 1.0) -> int:
        """Sign of a real-valued scalar (-1, 0, 1)."""
        raise UnsupportedDomainError(f"no order on {self.name}")

    def is_real(self, x, scale: float = 1.0) -> bool:
        return True

    def to_json(self, x):
        raise NotImplementedError

    def from_json(self, obj):
        return self.coerce(obj)

    def __repr__(self):
        return f"<Domain {self.name}>"


class RationalDomain(Domain):
    name = "rational"

    def coerce(self, x):
        if isinstance(x, GaussianRational):
            if x.im:
                raise ArithmeticDomainError(f"{x} is not real")
            return x.re
        if isinstance(x, (PrimeFieldElement, complex, float)):
            raise ArithmeticDomainError(f"cannot coerce {type(x).__name__} to rational")
        return _frac(x)

    def real_sign(self, x, scale=1.0):
        return (x > 0) - (x < 0)

    def to_json(self, x):
        return format_rational(x)

    def __eq__(self, other):
        return isinstance(other, RationalDomain)

    def __hash__(self):
        return hash("rational")


class GaussianDomain(Domain):
    name = "gaussian-rational"
    is_field_complex = True

    def coerce(self, x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, str):
            return parse_gaussian(x)
        if isinstance(x, dict):
            return GaussianRational(_frac(str(x.get("re", 0))), _frac(str(x.get("im", 0))))
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return GaussianRational._raw(Fraction(x), Fraction(0))
        raise ArithmeticDomainError(f"cannot coerce {type(x).__name__} to Gaussian rational")

    def is_real(self, x, scale=1.0):
        return not x.im

    def real_sign(self, x, scale=1.0):
        if x.im:
            raise ArithmeticDomainError(f"{x} is not real")
        return (x.re > 0) - (x.re < 0)

    def to_json(self, x):
        return {"re": format_rational(x.re), "im": format_rational(x.im)}

    def __eq__(self, other):
        return isinstance(other, GaussianDomain)

    def __hash__(self):
        return hash("gaussian-rational")


class PrimeField(Domain):
    exact = True

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p
        self.name = f"gf({p})"

    def coerce(self, x):
        if isinstance(x, PrimeFieldElement):
            if x.p != self.p:
                raise ArithmeticDomainError(f"GF({x.p}) element in GF({self.p})")
            return x
        if isinstance(x, dict):
            if int(x.get("p", self.p)) != self.p:
                raise ArithmeticDomainError("prime mismatch in JSON scalar")
            return PrimeFieldElement._raw(int(x["val"]) % self.p, self.p)
        if isinstance(x, str):
            x = _frac(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ArithmeticDomainError(f"{x} has no image in GF({self.p})")
            return PrimeFieldElement._raw(x.numerator * pow(x.denominator, -1, self.p) % self.p, self.p)
        if isinstance(x, int):
            return PrimeFieldElement._raw(x % self.p, self.p)
        raise ArithmeticDomainError(f"cannot coerce {type(x).__name__} to GF({self.p})")

    def abs2(self, x):
        raise UnsupportedDomainError("modulus is undefined over GF(p)")

    def conj(self, x):
        return x

    def to_json(self, x):
        return {"val": x.val, "p": self.p}

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("gf", self.p))


class FloatDomain(Domain):
    """Double-precision complex entries with one zero tolerance for everything.

    ``z`` counts as zero when ``|z| <= tol * max(1, scale)``.  Equality built on
    this is not transitive.
    """

    exact = False
    is_field_complex = True
    name = "float"

    def __init__(self, tolerance: float = DEFAULT_TOLERANCE):
        if not tolerance >= 0:
            raise ValueError("tolerance must be non-negative")
        self.tolerance = float(tolerance)

    def coerce(self, x):
        if isinstance(x, GaussianRational):
            return complex(x)
        if isinstance(x, PrimeFieldElement):
            raise ArithmeticDomainError("cannot embed GF(p) in the float domain")
        if isinstance(x, dict):
            return complex(float(Fraction(str(x.get("re", 0)))), float(Fraction(str(x.get("im", 0)))))
        if isinstance(x, str):
            return complex(parse_gaussian(x))
        return complex(x)

    def _thresh(self, scale):
        return self.tolerance * max(1.0, float(scale))

    def is_zero(self, x, scale=1.0):
        return abs(x) <= self._thresh(scale)

    def eq(self, a, b, scale=1.0):
        return abs(a - b) <= self._thresh(scale)

    def is_real(self, x, scale=1.0):
        return abs(complex(x).imag) <= self._thresh(scale)

    def real_sign(self, x, scale=1.0):
        r = complex(x).real
        if abs(r) <= self._thresh(scale):
            return 0
        return 1 if r > 0 else -1

    def to_json(self, x):
        x = complex(x)
        return {"re": x.real, "im": x.imag}

    def __eq__(self, other):
        return isinstance(other, FloatDomain) and other.tolerance == self.tolerance

    def __hash__(self):
        return hash(("float", self.tolerance))


RATIONAL = RationalDomain()
GAUSSIAN = GaussianDomain()


def domain_from_name(name: str, tolerance: float = DEFAULT_TOLERANCE, p: int | None = None) -> Domain:
    """Resolve ``rational``, ``gaussian-rational``, ``float``, ``gf`` / ``gf:<p>``."""
    key = name.strip().lower()
    if key in ("rational", "q"):
        return RATIONAL
    if key in ("gaussian-rational", "gaussian", "qi"):
        return GAUSSIAN
    if key in ("float", "complex-float"):
        return FloatDomain(tolerance)
    if key.startswith("gf"):
        rest = key[2:].lstrip(":()")
        rest = rest.rstrip(")")
        prime = int(rest) if rest else p
        if prime is None:
            raise ParseError("prime field domain needs a modulus")
        return PrimeField(prime)
    raise ParseError(f"unknown domain {name!r}")


def infer_domain(values) -> Domain:
    """Smallest exact domain holding every Python value in ``values``."""
    dom = RATIONAL
    for v in values:
        if isinstance(v, PrimeFieldElement):
            return PrimeField(v.p)
        if isinstance(v, (complex, float)) and not isinstance(v, bool):
            return FloatDomain()
        if isinstance(v, GaussianRational) and v.im:
            dom = GAUSSIAN
    return dom


def float_scale(values) -> float:
    """Largest magnitude among ``values`` (float), used as a tolerance scale."""
    best = 0.0
    for v in values:
        try:
            best = max(best, abs(complex(v)))
        except TypeError:
            return 1.0
    return best if math.isfinite(best) else 1.0
