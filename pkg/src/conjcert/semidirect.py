"""Semidirect products H x| N and the constructive conjugator machinery.

Two realizations are used throughout:

* ``AffineElement`` (A, b), the block matrix [[A, b], [0, 1]].  This is the
  canonical convention: a pair multiplies as (A,b)(C,d) = (AC, Ad + b).
* ``SemidirectElement`` (h, n), the group product h.n with
  (h1,n1)(h2,n2) = (h1 h2, act(h2^-1)(n1) . n2).

They are intertwined by the documented change of variable b = h.v: the map
(h, v) -> (h, h.v) is an isomorphism onto the affine picture for vector N.

The one-level conjugator solves (x - I) w = b; the multi-level lift walks a
central series, solving one quotient equation per level and re-verifying the
accumulated conjugator by exact multiplication at the end.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional, Sequence

from .errors import (
    CertificateError,
    FixedPointError,
    PresentationError,
    UsageError,
)
from .fields import Field
from .groups import Certificate, Inverse, Power, element_order, element_power
from .linalg import Matrix, Vector, has_fixed_point, kernel_basis, solve_linear

__all__ = [
    "AffineElement",
    "SemidirectProduct",
    "SemidirectElement",
    "LinearAction",
    "CentralSeriesLevel",
    "CentralSeriesPresentation",
    "vector_presentation",
    "reduce_translation",
    "make_real_witness",
    "make_power_witness",
    "lift_central_series",
    "real_witness_via_lift",
    "rational_witness_via_lift",
    "pair_from_affine",
    "affine_from_pair",
]

ORDER_PROBE_BOUND = 1024


@dataclass(frozen=True)
class AffineElement:
    """Pair (linear, translation) realizing [[A, b], [0, 1]]."""

    linear: Matrix
    translation: Vector

    @staticmethod
    def of(linear: Matrix, translation) -> "AffineElement":
        if not linear.is_square:
            raise UsageError("linear part must be square")
        if not linear.det():
            raise UsageError("linear part must be invertible")
        if not isinstance(translation, Vector):
            translation = Vector.of(linear.field, translation)
        return AffineElement(linear, translation)

    def __post_init__(self):
        if self.linear.rows != self.translation.dim:
            raise UsageError("translation dimension does not match linear part")

    def __mul__(self, other: "AffineElement") -> "AffineElement":
        return AffineElement(self.linear * other.linear,
                             self.linear.apply(other.translation) + self.translation)

    def inverse(self) -> "AffineElement":
        inv = self.linear.inverse()
        return AffineElement(inv, -inv.apply(self.translation))

    def identity(self) -> "AffineElement":
        n = self.linear.rows
        return AffineElement(Matrix.identity_of(self.linear.field, n),
                             Vector.zero(self.linear.field, n))

    def __repr__(self):
        return f"Affine({self.linear!r} | {self.translation!r})"


class LinearAction:
    """Map from acting-group elements to invertible matrices; the identity
    and homomorphism laws are spot-checked on the supplied samples."""

    def __init__(self, field: Field, dim: int, matrix_of: Callable, samples: Sequence = ()):
        self.field = field
        self.dim = dim
        self._matrix_of = matrix_of
        samples = list(samples)
        if samples:
            ident = samples[0].identity()
            if self(ident) != Matrix.identity_of(field, dim):
                raise UsageError("action does not send the identity to I")
            for g in samples:
                for h in samples:
                    if self(g * h) != self(g) * self(h):
                        raise UsageError("action is not a homomorphism on samples")

    def __call__(self, h) -> Matrix:
        m = self._matrix_of(h)
        if m.rows != self.dim or m.cols != self.dim:
            raise UsageError("action matrix has the wrong dimension")
        return m


class SemidirectProduct:
    """Group on pairs (h, n); the action is conjugation of H on N."""

    def __init__(self, action: Callable, n_multiply: Callable, n_inverse: Callable,
                 n_identity, h_identity, name: str = "semidirect"):
        self.action = action
        self.n_multiply = n_multiply
        self.n_inverse = n_inverse
        self.n_identity = n_identity
        self.h_identity = h_identity
        self.name = name

    def element(self, h, n) -> "SemidirectElement":
        return SemidirectElement(self, h, n)

    def identity(self) -> "SemidirectElement":
        return SemidirectElement(self, self.h_identity, self.n_identity)

    def embed_h(self, h) -> "SemidirectElement":
        return SemidirectElement(self, h, self.n_identity)

    def embed_n(self, n) -> "SemidirectElement":
        return SemidirectElement(self, self.h_identity, n)


@dataclass(frozen=True)
class SemidirectElement:
    group: SemidirectProduct = dc_field(compare=False, repr=False)
    h: object
    n: object

    def __mul__(self, other: "SemidirectElement") -> "SemidirectElement":
        G = self.group
        h2_inv = other.h.inverse()
        return SemidirectElement(
            G, self.h * other.h, G.n_multiply(G.action(h2_inv, self.n), other.n)
        )

    def inverse(self) -> "SemidirectElement":
        G = self.group
        return SemidirectElement(G, self.h.inverse(), G.action(self.h, G.n_inverse(self.n)))

    def identity(self) -> "SemidirectElement":
        return self.group.identity()

    def __repr__(self):
        return f"({self.h!r}, {self.n!r})"


def pair_from_affine(a: AffineElement) -> tuple[Matrix, Vector]:
    """(A, b) as the group product h.v: h = A, v = A^-1 b."""
    return a.linear, a.linear.inverse().apply(a.translation)


def affine_from_pair(h: Matrix, v: Vector) -> AffineElement:
    """The pair h.v in the block-matrix picture: translation b = h.v."""
    return AffineElement(h, h.apply(v))


# ---------------------------------------------------------------------------
# One-level (vector group) conjugators
# ---------------------------------------------------------------------------

def reduce_translation(x: Matrix, b: Vector) -> Vector:
    """The unique w with (I,w) (x,b) (I,w)^-1 = (x,0), i.e. (x - I) w = b.

    Requires x to act without nonzero fixed points."""
    x._require_square("reduce_translation")
    if x.rows != b.dim:
        raise UsageError("translation dimension does not match x")
    shifted = x - Matrix.identity_of(x.field, x.rows)
    if has_fixed_point(x):
        raise FixedPointError("x has a nonzero fixed point; no unique conjugator",
                              kernel=kernel_basis(shifted))
    w = solve_linear(shifted, b)
    assert w is not None  # shifted is invertible here
    return w


def _conjugating_frame(x: Matrix, b: Vector) -> AffineElement:
    w = reduce_translation(x, b)
    ident = Matrix.identity_of(x.field, x.rows)
    return AffineElement(ident, w)


def make_real_witness(x: Matrix, b: Vector, h: Matrix) -> Certificate:
    """Certificate g with g (x,b) g^-1 = (x,b)^-1, built as c^-1 (h,0) c."""
    if h * x * h.inverse() != x.inverse():
        raise UsageError("h does not conjugate x to its inverse")
    c = _conjugating_frame(x, b)
    g = c.inverse() * AffineElement(h, Vector.zero(x.field, x.rows)) * c
    subject = AffineElement(x, b)
    return Certificate.make(subject, g, Inverse())


def make_power_witness(x: Matrix, b: Vector, h: Matrix, k: int) -> Certificate:
    """Certificate g with g (x,b) g^-1 = (x,b)^k, built as c^-1 (h,0) c."""
    if h * x * h.inverse() != x ** k:
        raise UsageError(f"h does not conjugate x to x^{k}")
    c = _conjugating_frame(x, b)
    g = c.inverse() * AffineElement(h, Vector.zero(x.field, x.rows)) * c
    subject = AffineElement(x, b)
    cert = Certificate.make(subject, g, Power(k))
    order = element_order(x, bound=ORDER_PROBE_BOUND)
    if order.is_finite:
        # Ord((x,b)) divides Ord(x): (x,b)^m = c^-1 (x^m, 0) c = e
        if element_power(subject, order.value) != subject.identity():
            raise CertificateError("order of (x,b) fails to divide order of x")
    return cert


# ---------------------------------------------------------------------------
# Central-series presentations and the lifting algorithm
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CentralSeriesLevel:
    """Quotient data for one level N_j / N_{j+1}."""

    dim: int
    project: Callable  # N_j element -> Vector (class in the quotient)
    section: Callable  # Vector -> N_j element (any set-theoretic lift)
    act: Callable      # acting element -> dim x dim Matrix


class CentralSeriesPresentation:
    """A nilpotent group N given by carrier operations, a conjugation action
    of H on N, and per-level quotient data for the central series."""

    def __init__(self, field: Field, multiply: Callable, inverse: Callable, identity,
                 action: Callable, levels: Sequence[CentralSeriesLevel], name: str = "N"):
        self.field = field
        self.multiply = multiply
        self.inverse = inverse
        self.identity = identity
        self.action = action
        self.levels = tuple(levels)
        self.name = name

    def validate(self, h_samples: Sequence = (), vector_samples: Optional[dict] = None):
        """Spot-check the presentation invariants on samples.

        ``vector_samples`` maps a level index to quotient vectors used to
        probe project/section round-trips and the quotient homomorphism."""
        vector_samples = vector_samples or {}
        for j, lvl in enumerate(self.levels):
            vecs = vector_samples.get(j, [Vector.unit(self.field, lvl.dim, i)
                                          for i in range(lvl.dim)])
            for v in vecs:
                if lvl.project(lvl.section(v)) != v:
                    raise PresentationError(f"level {j}: project(section(v)) != v")
            for v in vecs:
                for w in vecs:
                    lifted = self.multiply(lvl.section(v), lvl.section(w))
                    if lvl.project(lifted) != v + w:
                        raise PresentationError(f"level {j}: project is not additive")
            for h in h_samples:
                ident = h.identity()
                if lvl.act(ident) != Matrix.identity_of(self.field, lvl.dim):
                    raise PresentationError(f"level {j}: act(e) != I")
                for h2 in h_samples:
                    if lvl.act(h * h2) != lvl.act(h) * lvl.act(h2):
                        raise PresentationError(f"level {j}: act not multiplicative")

    def semidirect(self, h_identity) -> SemidirectProduct:
        return SemidirectProduct(self.action, self.multiply, self.inverse,
                                 self.identity, h_identity, name=self.name)


def vector_presentation(field: Field, dim: int, matrix_of: Callable) -> CentralSeriesPresentation:
    """The one-level presentation of a vector group V under a linear action."""
    level = CentralSeriesLevel(
        dim=dim,
        project=lambda v: v,
        section=lambda v: v,
        act=matrix_of,
    )
    return CentralSeriesPresentation(
        field,
        multiply=lambda a, b: a + b,
        inverse=lambda a: -a,
        identity=Vector.zero(field, dim),
        action=lambda h, v: matrix_of(h).apply(v),
        levels=[level],
        name="vector",
    )


def check_fixed_point_free(x, pres: CentralSeriesPresentation):
    """Fail fast with the offending level if any quotient action of x fixes
    a nonzero vector."""
    for j, lvl in enumerate(pres.levels):
        a = lvl.act(x)
        if has_fixed_point(a):
            ident = Matrix.identity_of(pres.field, lvl.dim)
            raise FixedPointError(
                f"action of x on level {j} quotient has a nonzero fixed point",
                kernel=kernel_basis(a - ident), level=j)


def lift_central_series(x, n, pres: CentralSeriesPresentation):
    """u in N with (e,u) (x,e) (e,u)^-1 = (x,n), by descending the series.

    At each level the quotient equation (act^-1 - I) w = project(residual)
    is solved, the solution lifted through the section, and the residual
    pushed into the next term of the series; the final conjugator is
    re-verified by exact multiplication."""
    check_fixed_point_free(x, pres)
    G = pres.semidirect(x.identity())
    target = G.element(x, n)
    x_embedded = G.embed_h(x)
    u = pres.identity
    residual = n
    for j, lvl in enumerate(pres.levels):
        a = lvl.act(x)
        ident = Matrix.identity_of(pres.field, lvl.dim)
        v_j = lvl.project(residual)
        omega = solve_linear(a.inverse() - ident, v_j)
        assert omega is not None  # invertible by the fixed-point check
        w_j = lvl.section(omega)
        u = pres.multiply(w_j, u)
        conjugated = G.embed_n(u) * x_embedded * G.embed_n(u).inverse()
        residue_elem = conjugated.inverse() * target
        if residue_elem.h != x.identity():
            raise PresentationError("conjugate lost its acting component")
        residual = residue_elem.n
        if not lvl.project(residual).is_zero():
            raise PresentationError(
                f"residual fails to descend past level {j}: "
                f"project_{j} = {lvl.project(residual)!r}")
    if residual != pres.identity:
        raise PresentationError("residual nonzero after the last level")
    if G.embed_n(u) * x_embedded * G.embed_n(u).inverse() != target:
        raise PresentationError("lifted conjugator failed exact verification")
    return u


def _witness_via_lift(x, n, pres: CentralSeriesPresentation, h, relation) -> Certificate:
    G = pres.semidirect(x.identity())
    if isinstance(relation, Inverse):
        expected = x.inverse()
    else:
        expected = element_power(x, relation.k)
    if h * x * h.inverse() != expected:
        raise UsageError(f"h does not witness the {relation.describe()} relation for x")
    u = lift_central_series(x, n, pres)
    u_elem = G.embed_n(u)
    g = u_elem * G.embed_h(h) * u_elem.inverse()
    return Certificate.make(G.element(x, n), g, relation)


def real_witness_via_lift(x, n, pres: CentralSeriesPresentation, h) -> Certificate:
    """Certificate for (x,n) ~ (x,n)^-1 in H x| N, composed from the lifted
    conjugator and an H-level reality witness."""
    return _witness_via_lift(x, n, pres, h, Inverse())


def rational_witness_via_lift(x, n, pres: CentralSeriesPresentation, h, k: int) -> Certificate:
    """Certificate for (x,n) ~ (x,n)^k, composed from the lifted conjugator
    and an H-level witness for x ~ x^k."""
    return _witness_via_lift(x, n, pres, h, Power(k))
