"""Exact scalar fields: the rationals, the Gaussian rationals and prime fields.

Every scalar is an immutable value with exact arithmetic; nothing in this
package ever touches floating point.  A small ``Field`` object bundles the
zero/one constants, coercion and the lossless string round-trip used by the
scenario/report formats ("p/q", "p/q+r/s i", plain residues mod p).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import UsageError

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")

__all__ = [
    "Field",
    "RationalField",
    "GaussianRationalField",
    "PrimeField",
    "GaussianRational",
    "FpElement",
    "QQ",
    "QQI",
    "GF",
    "is_prime",
]


def is_prime(n: int) -> bool:
    """Trial division; moduli in this package are tiny."""
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class GaussianRational:
    """Element of Q(i), kept as an exact pair of Fractions."""

    re: Fraction
    im: Fraction

    @staticmethod
    def of(re, im=0) -> "GaussianRational":
        return GaussianRational(Fraction(re), Fraction(im))

    def __add__(self, other):
        other = _as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        other = _as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        norm = self.re * self.re + self.im * self.im
        if norm == 0:
            raise ZeroDivisionError("inverse of 0 in Q(i)")
        return GaussianRational(self.re / norm, -self.im / norm)

    def __truediv__(self, other):
        other = _as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        other = _as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        # Rational values must hash like their Fraction counterpart so that
        # GaussianRational(3, 0) == Fraction(3) stays consistent.
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)} i"


def _strict_fraction(token: str, original: str) -> Fraction:
    if not _RATIONAL_RE.match(token):
        raise UsageError(f"not an exact scalar (decimals rejected): {original!r}")
    return Fraction(token)


def _as_gaussian(value):
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Fraction)):
        return GaussianRational(Fraction(value), Fraction(0))
    return NotImplemented


@dataclass(frozen=True)
class FpElement:
    """Residue in the prime field F_p."""

    value: int
    p: int

    def _check(self, other):
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise UsageError(f"mixed moduli {self.p} and {other.p}")
            return other
        if isinstance(other, int):
            return FpElement(other % self.p, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return FpElement((self.value + other.value) % self.p, self.p)

    __radd__ = __add__

    def __neg__(self):
        return FpElement(-self.value % self.p, self.p)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return FpElement((self.value - other.value) % self.p, self.p)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return FpElement((self.value * other.value) % self.p, self.p)

    __rmul__ = __mul__

    def inverse(self) -> "FpElement":
        if self.value == 0:
            raise ZeroDivisionError(f"inverse of 0 mod {self.p}")
        return FpElement(pow(self.value, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other % self.p
        if isinstance(other, FpElement):
            return self.p == other.p and self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FpElement({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


class Field:
    """Common interface: constants, coercion and string round-trip."""

    characteristic: int = 0

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def coerce(self, value):
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def format(self, value) -> str:
        return str(value)


class RationalField(Field):
    characteristic = 0

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def coerce(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, GaussianRational) and value.im == 0:
            return value.re
        raise UsageError(f"cannot coerce {value!r} into Q")

    def parse(self, text: str):
        s = text.strip()
        if not _RATIONAL_RE.match(s):
            raise UsageError(f"not an exact rational (decimals rejected): {text!r}")
        return Fraction(s)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


class GaussianRationalField(Field):
    characteristic = 0

    def zero(self):
        return GaussianRational(Fraction(0), Fraction(0))

    def one(self):
        return GaussianRational(Fraction(1), Fraction(0))

    def i(self):
        return GaussianRational(Fraction(0), Fraction(1))

    def coerce(self, value):
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussianRational(Fraction(value), Fraction(0))
        if isinstance(value, str):
            return self.parse(value)
        raise UsageError(f"cannot coerce {value!r} into Q(i)")

    def parse(self, text: str):
        """Accepts "p/q", "p/q+r/s i", "p/q-r/s i" (the space before i is
        optional)."""
        s = text.strip()
        if s.endswith("i"):
            body = s[:-1].strip()
            # split at the sign separating real and imaginary parts, ignoring
            # a leading sign on the real part
            for pos in range(len(body) - 1, 0, -1):
                if body[pos] in "+-" and body[pos - 1] not in "+-/":
                    re_txt, sign, im_txt = body[:pos], body[pos], body[pos + 1 :]
                    break
            else:
                re_txt, sign, im_txt = "0", "+", body
            re_part = _strict_fraction(re_txt.strip(), text)
            im_part = _strict_fraction(im_txt.strip() or "1", text)
            if sign == "-":
                im_part = -im_part
            return GaussianRational(re_part, im_part)
        return GaussianRational(_strict_fraction(s, text), Fraction(0))

    def format(self, value) -> str:
        value = self.coerce(value)
        return str(value)

    def __repr__(self):
        return "QQi"

    def __eq__(self, other):
        return isinstance(other, GaussianRationalField)

    def __hash__(self):
        return hash("QQi")


class PrimeField(Field):
    def __init__(self, p: int):
        if not is_prime(p):
            raise UsageError(f"{p} is not prime")
        self.p = p
        self.characteristic = p

    def zero(self):
        return FpElement(0, self.p)

    def one(self):
        return FpElement(1, self.p)

    def coerce(self, value):
        if isinstance(value, FpElement):
            if value.p != self.p:
                raise UsageError(f"element of F_{value.p} used in F_{self.p}")
            return value
        if isinstance(value, int):
            return FpElement(value % self.p, self.p)
        if isinstance(value, str):
            return self.parse(value)
        raise UsageError(f"cannot coerce {value!r} into F_{self.p}")

    def parse(self, text: str):
        try:
            return FpElement(int(text.strip(), 10) % self.p, self.p)
        except ValueError as exc:
            raise UsageError(f"not a residue mod {self.p}: {text!r}") from exc

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = RationalField()
QQI = GaussianRationalField()

_gf_cache: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    """The prime field F_p (instances cached per modulus)."""
    field = _gf_cache.get(p)
    if field is None:
        field = _gf_cache[p] = PrimeField(p)
    return field
