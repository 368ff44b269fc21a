"""The degree-n symmetric power of SL(2,Q) on binary forms and the full
reality/rationality classifier for SL(2,Q) |x V_n.

V_n is the space of homogeneous degree-n polynomials in x, y with the
monomial basis x^n, x^(n-1) y, ..., y^n (coefficient a_i on x^(n-i) y^i).
Substituting a matrix into the variables can be read in two orders; the
module picks, once and empirically, the order that makes the map a genuine
homomorphism.  Under that convention diag(r, 1/r) maps to
diag(r^n, r^(n-2), ..., r^-n) and the antidiagonal witnesses
[[0, t], [-1/t, 0]] map to antidiagonal matrices whose middle entry for
even n is (-1)^(n/2) -- the sign that decides solvability of the
conjugation system on the invariant middle coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Optional, Sequence

from .errors import UsageError
from .fields import QQ
from .groups import (
    Certificate,
    Inverse,
    OrderResult,
    Power,
    element_order,
    element_power,
)
from .linalg import Matrix, Vector
from .semidirect import make_power_witness, make_real_witness

__all__ = [
    "SL2Element",
    "SL2VElement",
    "RealityResult",
    "RationalityResult",
    "rho",
    "antidiagonal_witness",
    "classify_real",
    "negation_witness_search",
    "classify_rational_sl2v",
    "DEFAULT_T_GRID",
]

DEFAULT_T_GRID = tuple(
    Fraction(t) for t in (1, -1, 2, -2, Fraction(1, 2), Fraction(-1, 2),
                          3, -3, Fraction(1, 3), Fraction(-1, 3))
)
_DIAG_GRID = tuple(Fraction(s) for s in (1, 2, Fraction(1, 2), 3))


@dataclass(frozen=True)
class SL2Element:
    """Matrix [[a, b], [c, d]] with ad - bc = 1, over Q."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    @staticmethod
    def of(a, b, c, d) -> "SL2Element":
        a, b, c, d = (QQ.coerce(v) for v in (a, b, c, d))
        if a * d - b * c != 1:
            raise UsageError("determinant must be exactly 1")
        return SL2Element(a, b, c, d)

    @staticmethod
    def identity_element() -> "SL2Element":
        return SL2Element.of(1, 0, 0, 1)

    @staticmethod
    def diagonal(r) -> "SL2Element":
        r = QQ.coerce(r)
        if not r:
            raise UsageError("diagonal entry must be nonzero")
        return SL2Element.of(r, 0, 0, 1 / r)

    def __mul__(self, other: "SL2Element") -> "SL2Element":
        return SL2Element(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "SL2Element":
        return SL2Element(self.d, -self.b, -self.c, self.a)

    def identity(self) -> "SL2Element":
        return SL2Element.identity_element()

    @property
    def is_diagonal(self) -> bool:
        return self.b == 0 and self.c == 0

    def to_matrix(self) -> Matrix:
        return Matrix.from_rows(QQ, [[self.a, self.b], [self.c, self.d]])

    def __repr__(self):
        return f"SL2[{self.a} {self.b}; {self.c} {self.d}]"


def antidiagonal_witness(t) -> SL2Element:
    """[[0, t], [-1/t, 0]]: the elements conjugating diag(r, 1/r) to its
    inverse are exactly these."""
    t = QQ.coerce(t)
    if not t:
        raise UsageError("t must be nonzero")
    return SL2Element.of(0, t, -1 / t, 0)


def _binomial_expansion(p, q, e: int) -> list[Fraction]:
    """Coefficients of (p x + q y)^e on x^(e-j) y^j, j = 0..e."""
    return [comb(e, j) * p ** (e - j) * q ** j for j in range(e + 1)]


def _substitution_matrix(g: SL2Element, n: int, row_convention: bool) -> Matrix:
    """Matrix of p |-> p(first, second) in the monomial basis, where
    (first, second) = (ax+cy, bx+dy) for the row convention and
    (ax+by, cx+dy) otherwise."""
    if row_convention:
        first = (g.a, g.c)
        second = (g.b, g.d)
    else:
        first = (g.a, g.b)
        second = (g.c, g.d)
    cols = []
    for i in range(n + 1):
        lhs = _binomial_expansion(first[0], first[1], n - i)
        rhs = _binomial_expansion(second[0], second[1], i)
        out = [Fraction(0)] * (n + 1)
        for j1, c1 in enumerate(lhs):
            for j2, c2 in enumerate(rhs):
                out[j1 + j2] += c1 * c2
        cols.append(out)
    return Matrix(QQ, n + 1, n + 1,
                  tuple(cols[i][j] for j in range(n + 1) for i in range(n + 1)))


@lru_cache(maxsize=1)
def _row_convention() -> bool:
    """Pick the substitution order that composes covariantly.

    Tested once on non-commuting sample pairs; exactly one order is a
    homomorphism and it is kept for every later call."""
    samples = [
        (SL2Element.of(1, 1, 0, 1), SL2Element.of(1, 0, 1, 1)),
        (SL2Element.of(2, 0, 0, Fraction(1, 2)), SL2Element.of(0, 1, -1, 0)),
    ]
    for convention in (True, False):
        ok = all(
            _substitution_matrix(g * h, 3, convention)
            == _substitution_matrix(g, 3, convention) * _substitution_matrix(h, 3, convention)
            for g, h in samples
        )
        if ok:
            return convention
    raise AssertionError("neither substitution order is a homomorphism")


@lru_cache(maxsize=4096)
def rho(g: SL2Element, n: int) -> Matrix:
    """The (n+1)-dimensional symmetric-power image of g, exact over Q."""
    if n < 0:
        raise UsageError("degree must be nonnegative")
    return _substitution_matrix(g, n, _row_convention())


@dataclass(frozen=True)
class SL2VElement:
    """Pair (h, v) in SL(2,Q) |x V_n, realized as [[rho(h), v], [0, 1]].

    The SL(2) component is kept exactly (not just its rho-image), so the
    two-fold kernel of rho for even n is never collapsed."""

    h: SL2Element
    v: Vector

    @property
    def degree(self) -> int:
        return self.v.dim - 1

    def __mul__(self, other: "SL2VElement") -> "SL2VElement":
        return SL2VElement(self.h * other.h,
                           rho(self.h, self.degree).apply(other.v) + self.v)

    def inverse(self) -> "SL2VElement":
        inv = self.h.inverse()
        return SL2VElement(inv, -(rho(inv, self.degree).apply(self.v)))

    def identity(self) -> "SL2VElement":
        return SL2VElement(SL2Element.identity_element(), Vector.zero(QQ, self.v.dim))

    def __repr__(self):
        return f"({self.h!r}, {self.v!r})"


@dataclass(frozen=True)
class RealityResult:
    verdict: str  # "real" | "not_real" | "unknown"
    certificate: Optional[Certificate] = None
    reason: str = ""
    searched: tuple = ()

    @property
    def is_real(self) -> bool:
        return self.verdict == "real"


@dataclass(frozen=True)
class RationalityResult:
    verdict: str  # "rational" | "not_rational" | "unknown"
    order: OrderResult
    certificates: dict
    reason: str = ""


def negation_witness_search(v: Vector, n: int,
                            t_grid: Sequence = DEFAULT_T_GRID,
                            diag_grid: Sequence = _DIAG_GRID) -> Optional[SL2Element]:
    """First h from the configured families with rho(h) v = -v, if any.

    Families: -I; antidiagonals [[0,t],[-1/t,0]] over the t grid; those
    antidiagonals conjugated by diagonal elements over a small grid."""
    target = -v
    minus_i = SL2Element.of(-1, 0, 0, -1)
    candidates = [minus_i]
    for t in t_grid:
        candidates.append(antidiagonal_witness(t))
    for s in diag_grid:
        d = SL2Element.diagonal(s)
        for t in t_grid:
            candidates.append(d * antidiagonal_witness(t) * d.inverse())
    seen = set()
    for h in candidates:
        if h in seen:
            continue
        seen.add(h)
        if rho(h, n).apply(v) == target:
            return h
    return None


def _forced_not_real(v: Vector, n: int) -> Optional[str]:
    """The sound obstruction for even n with trivial rho(x): a vector
    supported purely on x^n (or y^n) cannot be negated, because
    rho(h) sends it to a scaled n-th power of a linear form and
    L^n = -x^n has no real solution for even n."""
    if n % 2:
        return None
    nonzero = [i for i, c in enumerate(v.entries) if c]
    if len(nonzero) == 1 and nonzero[0] in (0, n):
        mono = "x^n" if nonzero[0] == 0 else "y^n"
        return (f"v is supported on the pure {mono} coordinate; rho(h)v is a "
                f"scaled n-th power of a linear form and cannot equal -v for even n")
    return None


def _searched_families(t_grid) -> tuple:
    return ("-I", f"antidiagonal t in {tuple(str(t) for t in t_grid)}",
            "diagonal-conjugated antidiagonals")


def _reality_certificate_central(x: SL2Element, v: Vector, h: SL2Element) -> Certificate:
    """Certificate for central x (rho(x) = +-I up to parity): witness (h, 0)."""
    witness = SL2VElement(h, Vector.zero(QQ, v.dim))
    return Certificate.make(SL2VElement(x, v), witness, Inverse())


def classify_real(x: SL2Element, v: Vector, t=Fraction(1)) -> RealityResult:
    """Decide whether (x, v) is conjugate to its inverse in SL(2,Q) |x V_n.

    x must already be diagonal (conjugate it into diag(r, 1/r) first); t
    selects the antidiagonal witness family member used in certificates."""
    t = QQ.coerce(t)
    if not t:
        raise UsageError("t must be nonzero")
    if not x.is_diagonal:
        raise UsageError("x must be diagonal; conjugate into diag(r, 1/r) first")
    n = v.dim - 1
    r = x.a
    subject = SL2VElement(x, v)

    if n % 2 == 1:
        if r == 1:
            # rho(-I) = -I negates every vector
            h = SL2Element.of(-1, 0, 0, -1)
            return RealityResult("real", _reality_certificate_central(x, v, h))
        # rho(x) has no exponent-zero entry for odd n, so the one-level
        # conjugator construction applies for every translation
        y = antidiagonal_witness(t)
        affine_cert = make_real_witness(rho(x, n), v, rho(y, n))
        witness = SL2VElement(y, affine_cert.witness.translation)
        return RealityResult("real", Certificate.make(subject, witness, Inverse()))

    # even n
    if r == 1 or r == -1:
        h = negation_witness_search(v, n)
        if h is not None:
            return RealityResult("real", _reality_certificate_central(x, v, h))
        forced = _forced_not_real(v, n)
        if forced is not None:
            return RealityResult("not_real", reason=forced)
        return RealityResult("unknown",
                             reason="no negating element found in the bounded families",
                             searched=_searched_families(DEFAULT_T_GRID))

    # even n, r != +-1: the conjugator linear part is forced to be an
    # antidiagonal rho(y_t); solve the translation system row by row
    X = rho(x, n)
    Y = rho(antidiagonal_witness(t), n)
    Xinv = X.inverse()
    m = n // 2
    middle_scale = Y[m, m] + QQ.one()
    if middle_scale * v[m] != 0:
        return RealityResult(
            "not_real",
            reason=(
                "every element conjugating diag(r,1/r) to its inverse is an "
                "antidiagonal [[0,t],[-1/t,0]], whose symmetric power scales the "
                f"invariant middle coordinate by {Y[m, m]}; the middle row of the "
                "conjugation system reads 0 = "
                f"-({Y[m, m]} + 1) v_mid with v_mid = {v[m]}, which is unsolvable"
            ),
        )
    Yv = Y.apply(v)
    w = []
    for i in range(n + 1):
        if i == m:
            w.append(QQ.zero())  # free coordinate, fixed to 0
            continue
        denom = QQ.one() - Xinv[i, i]
        w.append((-Yv[i] - Xinv[i, i] * v[i]) / denom)
    witness = SL2VElement(antidiagonal_witness(t), Vector(QQ, tuple(w)))
    return RealityResult("real", Certificate.make(subject, witness, Inverse()))


def _certified_infinite(x: SL2Element, v: Vector) -> bool:
    """Structural proof that (x, v) has infinite order (char 0)."""
    n = v.dim - 1
    r = x.a
    if r != 1 and r != -1:
        return True  # x itself has infinite order
    image = rho(x, n)
    if image.is_identity():
        return not v.is_zero()  # pure translation telescopes
    return False


def classify_rational_sl2v(x: SL2Element, v: Vector, bound: int = 10_000,
                           t=Fraction(1)) -> RationalityResult:
    """Rationality of (x, v): conjugacy onto every generating power.

    Infinite order leaves only the k = -1 generator, so rationality is
    exactly reality and the reality certificate is reused."""
    if not x.is_diagonal:
        raise UsageError("x must be diagonal; conjugate into diag(r, 1/r) first")
    subject = SL2VElement(x, v)
    order = element_order(subject, bound=min(bound, 64))
    if not order.is_finite:
        order = OrderResult.exceeds(bound)

    if order.is_finite:
        m = order.value
        certs = {1: Certificate.make(subject, subject.identity(), Power(1))}
        missing = []
        for k in range(2, m):
            if gcd(k, m) != 1:
                continue
            h = _power_witness_in_sl2(x, k)
            n = v.dim - 1
            if h is not None and not (rho(x, n) - Matrix.identity_of(QQ, n + 1)).det() == 0:
                affine_cert = make_power_witness(rho(x, n), v, rho(h, n), k)
                witness = SL2VElement(h, affine_cert.witness.translation)
                certs[k] = Certificate.make(subject, witness, Power(k))
            elif h is not None and _central_power_ok(x, v, h, k):
                witness = SL2VElement(h, Vector.zero(QQ, v.dim))
                certs[k] = Certificate.make(subject, witness, Power(k))
            else:
                missing.append(k)
        if missing:
            return RationalityResult("unknown", order, certs,
                                     reason=f"no fixed-point-free route for k in {missing}")
        return RationalityResult("rational", order, certs)

    if not _certified_infinite(x, v):
        return RationalityResult("unknown", order, {},
                                 reason="order bound exceeded without a structural "
                                        "infiniteness certificate")
    reality = classify_real(x, v, t)
    if reality.verdict == "real":
        return RationalityResult("rational", order, {-1: reality.certificate},
                                 reason="infinite order: rational iff real")
    if reality.verdict == "not_real":
        return RationalityResult("not_rational", order, {},
                                 reason="infinite order and not real: " + reality.reason)
    return RationalityResult("unknown", order, {}, reason=reality.reason)


def _power_witness_in_sl2(x: SL2Element, k: int) -> Optional[SL2Element]:
    """h with h x h^-1 = x^k for diagonal x, from the structured families."""
    target = element_power(x, k)
    if target == x:
        return SL2Element.identity_element()
    if target == x.inverse():
        return antidiagonal_witness(1)
    return None


def _central_power_ok(x: SL2Element, v: Vector, h: SL2Element, k: int) -> bool:
    """For central rho(x) the translation correction vanishes, so only a
    directly verifiable zero-translation witness is accepted."""
    subject = SL2VElement(x, v)
    witness = SL2VElement(h, Vector.zero(QQ, v.dim))
    return witness * subject * witness.inverse() == element_power(subject, k)
