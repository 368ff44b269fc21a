"""Rationality in affine groups GL(n) |x F^n from a rational finite-order
linear part.

A finite-order x is semisimple, so F^n = ker(x - I) + im(x - I) splits
exactly and stays computable over Q; no Jordan form over R is needed.
Certificates for (x, v) are produced either directly (no fixed point), or
by restricting to the image block and lifting the block witness back, or --
when the translation has a nonzero kernel component -- by proving the
element has infinite order via the telescoping translation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd
from typing import Optional

from .errors import ConjcertError, TheoremViolation, UsageError
from .groups import Certificate, Inverse, Power, element_order
from .linalg import (
    Matrix,
    Vector,
    column_space_basis,
    kernel_basis,
    kron,
    solve_linear,
)
from .semidirect import AffineElement, make_power_witness

__all__ = [
    "EigenOneSplitting",
    "LinearRationalityResult",
    "AffineRationalityResult",
    "split_at_eigenvalue_one",
    "rationality_certificates_linear",
    "extract_block_certificate",
    "classify_affine_rational",
    "telescoped_translation",
]

DEFAULT_RETRIES = 64
TELESCOPE_STEPS = 30


@dataclass(frozen=True)
class EigenOneSplitting:
    """Basis-adapted decomposition F^n = ker(x - I) + im(x - I)."""

    kernel: tuple
    image: tuple
    change_of_basis: Matrix
    inverse_basis: Matrix
    restricted: Matrix  # x on the image block, in the image basis

    @property
    def kernel_dim(self) -> int:
        return len(self.kernel)

    @property
    def image_dim(self) -> int:
        return len(self.image)


def split_at_eigenvalue_one(x: Matrix, m: int) -> EigenOneSplitting:
    """Validated splitting at the eigenvalue 1 for x with x^m = I."""
    x._require_square("split_at_eigenvalue_one")
    n = x.rows
    ident = Matrix.identity_of(x.field, n)
    if x ** m != ident:
        raise UsageError(f"x^{m} != I; not a finite-order input")
    shifted = x - ident
    kernel = kernel_basis(shifted)
    image = column_space_basis(shifted)
    if len(kernel) + len(image) != n:
        raise UsageError("kernel and image dimensions do not add up; "
                         "x is not semisimple at 1")
    P = Matrix.from_columns(x.field, list(kernel) + list(image))
    if not P.det():
        raise UsageError("kernel and image intersect nontrivially; "
                         "x is not semisimple at 1")
    P_inv = P.inverse()
    adapted = P_inv * x * P
    d = len(kernel)
    for i in range(n):
        for j in range(n):
            expected_identity = i < d and j < d
            if expected_identity and adapted[i, j] != (x.field.one() if i == j else x.field.zero()):
                raise UsageError("x does not act as the identity on its fixed space")
            if (i < d) != (j < d) and adapted[i, j] != x.field.zero():
                raise UsageError("splitting is not x-invariant")
    restricted = Matrix(x.field, n - d, n - d,
                        tuple(adapted[i, j] for i in range(d, n) for j in range(d, n)))
    return EigenOneSplitting(tuple(kernel), tuple(image), P, P_inv, restricted)


@dataclass(frozen=True)
class LinearRationalityResult:
    """Conjugators g_k with g_k x g_k^-1 = x^k for the generating powers.

    ``not_rational`` lists k whose conjugation equation has no solution at
    all (a proof that x is not rational); ``inconclusive`` lists k where a
    solution space exists but no invertible member was found within the
    retry budget."""

    order: int
    certificates: dict
    not_rational: tuple
    inconclusive: tuple

    @property
    def complete(self) -> bool:
        return not self.not_rational and not self.inconclusive


def _conjugation_solution_space(x: Matrix, target: Matrix) -> list[Matrix]:
    """Basis of {g : g x = target g} as matrices (row-major flattening)."""
    n = x.rows
    ident = Matrix.identity_of(x.field, n)
    op = kron(ident, x.transpose()) - kron(target, ident)
    return [Matrix(x.field, n, n, tuple(vec.entries)) for vec in kernel_basis(op)]


def _invertible_combination(basis: list[Matrix], rng: random.Random,
                            retries: int) -> Optional[Matrix]:
    for g in basis:
        if g.det():
            return g
    field = basis[0].field
    for _ in range(retries):
        combo = Matrix.zero_of(field, basis[0].rows, basis[0].cols)
        for g in basis:
            combo = combo + g.scale(field.coerce(rng.randint(-3, 3)))
        if combo.det():
            return combo
    return None


def rationality_certificates_linear(x: Matrix, m: int, seed: int = 0,
                                    retries: int = DEFAULT_RETRIES) -> LinearRationalityResult:
    """Solve g x = x^k g over the matrix space for every generating power k.

    Invertible solutions are picked deterministically: basis elements first,
    then seeded random small-coefficient combinations."""
    x._require_square("rationality_certificates_linear")
    ident = Matrix.identity_of(x.field, x.rows)
    if x ** m != ident:
        raise UsageError(f"x^{m} != I")
    order = element_order(x, bound=m + 1).value
    rng = random.Random(seed)
    certs = {1: ident}
    not_rational = []
    inconclusive = []
    for k in range(2, order):
        if gcd(k, order) != 1:
            continue
        target = x ** k
        basis = _conjugation_solution_space(x, target)
        if not basis:
            not_rational.append(k)
            continue
        g = _invertible_combination(basis, rng, retries)
        if g is None:
            inconclusive.append(k)
            continue
        assert g * x * g.inverse() == target
        certs[k] = g
    return LinearRationalityResult(order, certs, tuple(not_rational), tuple(inconclusive))


def extract_block_certificate(g: Matrix, x: Matrix, k: int,
                              splitting: EigenOneSplitting) -> Matrix:
    """Restrict a conjugator g x g^-1 = x^k to the image block.

    In the adapted basis the block of g mapping the kernel summand into the
    image summand must vanish (the image action has no eigenvalue 1); a
    violation is reported entry by entry since it would contradict the
    restriction argument."""
    if g * x * g.inverse() != x ** k:
        raise UsageError("g does not conjugate x to x^k")
    d = splitting.kernel_dim
    n = x.rows
    adapted = splitting.inverse_basis * g * splitting.change_of_basis
    offending = [(i, j, adapted[i, j])
                 for i in range(d, n) for j in range(d)
                 if adapted[i, j] != x.field.zero()]
    if offending:
        raise ConjcertError(f"mixing block failed to vanish at {offending}")
    block = Matrix(x.field, n - d, n - d,
                   tuple(adapted[i, j] for i in range(d, n) for j in range(d, n)))
    if not block.det():
        raise ConjcertError("restricted block is singular")
    if block * splitting.restricted * block.inverse() != splitting.restricted ** k:
        raise ConjcertError("restricted block fails the conjugation relation")
    return block


def telescoped_translation(x: Matrix, v: Vector, l: int) -> Vector:
    """(x^(l-1) + ... + x + I) v, the translation part of (x, v)^l."""
    total = Vector.zero(x.field, v.dim)
    power = Matrix.identity_of(x.field, x.rows)
    for _ in range(l):
        total = total + power.apply(v)
        power = power * x
    return total


@dataclass(frozen=True)
class AffineRationalityResult:
    verdict: str  # "rational" | "infinite_order" | "inconclusive"
    order: Optional[int]
    certificates: dict
    kernel_component: Optional[Vector] = None
    telescope: tuple = ()
    reality: Optional[Certificate] = None
    reality_refuted: bool = False
    note: str = ""


def _lift_block_certificate(x: Matrix, v: Vector, k: int, splitting: EigenOneSplitting,
                            block_witness: AffineElement) -> Certificate:
    """Assemble identity-on-kernel + block witness and verify in the full group."""
    field = x.field
    d = splitting.kernel_dim
    n = x.rows
    P, P_inv = splitting.change_of_basis, splitting.inverse_basis
    z, o = field.zero(), field.one()
    entries = []
    for i in range(n):
        for j in range(n):
            if i < d or j < d:
                entries.append(o if i == j else z)
            else:
                entries.append(block_witness.linear[i - d, j - d])
    lifted_linear = P * Matrix(field, n, n, tuple(entries)) * P_inv
    lifted_translation = P.apply(
        Vector(field, (z,) * d + tuple(block_witness.translation.entries))
    )
    witness = AffineElement(lifted_linear, lifted_translation)
    return Certificate.make(AffineElement(x, v), witness, Power(k))


def _bounded_reality_search(x: Matrix, v: Vector, seed: int,
                            retries: int) -> tuple[Optional[Certificate], bool]:
    """Structured search for g (x,v) g^-1 = (x,v)^-1 when x has fixed points.

    Any witness has linear part Y in the solution space of Y x = x^-1 Y, and
    the singular translation equation (I - x^-1) w = -Y v - x^-1 v is
    consistent exactly when every left-null functional of I - x^-1 kills the
    right-hand side -- a condition linear in the coordinates of Y.  Solving
    it cuts out an affine subspace; if that subspace is empty, (x, v) is
    provably not real (second return value True).  Otherwise invertible
    members are probed (deterministically seeded); absence after the retry
    budget is an honest partial result, not a proof."""
    field = x.field
    basis = _conjugation_solution_space(x, x.inverse())
    if not basis:
        return None, True  # x is not even real in the linear group
    ident = Matrix.identity_of(field, x.rows)
    shifted = ident - x.inverse()
    functionals = kernel_basis(shifted.transpose())
    if functionals:
        rows = [[f.dot(b.apply(v)) for b in basis] for f in functionals]
        rhs = Vector(field, tuple(-(f.dot(x.inverse().apply(v)))
                                  for f in functionals))
        system = Matrix(field, len(functionals), len(basis),
                        tuple(e for row in rows for e in row))
        particular = solve_linear(system, rhs)
        if particular is None:
            return None, True  # no linear part admits a consistent translation
        homogeneous = kernel_basis(system)
    else:
        particular = Vector.zero(field, len(basis))
        homogeneous = [Vector.unit(field, len(basis), i) for i in range(len(basis))]

    def assemble(coeffs: Vector) -> Matrix:
        total = Matrix.zero_of(field, x.rows, x.cols)
        for c, b in zip(coeffs.entries, basis):
            if c:
                total = total + b.scale(c)
        return total

    rng = random.Random(seed)
    coefficient_choices = [particular]
    for h in homogeneous:
        coefficient_choices.append(particular + h)
        coefficient_choices.append(particular - h)
    for _ in range(retries):
        combo = particular
        for h in homogeneous:
            combo = combo + h.scale(field.coerce(rng.randint(-3, 3)))
        coefficient_choices.append(combo)

    subject = AffineElement(x, v)
    for coeffs in coefficient_choices:
        y = assemble(coeffs)
        if not y.det():
            continue
        w = solve_linear(shifted, -(y.apply(v)) - x.inverse().apply(v))
        if w is None:
            continue  # only possible without functionals; defensive
        try:
            return Certificate.make(subject, AffineElement(y, w), Inverse()), False
        except ConjcertError:
            continue
    return None, False


def classify_affine_rational(x: Matrix, v: Vector, m: int, certs: dict,
                             telescope_steps: int = TELESCOPE_STEPS,
                             seed: int = 0) -> AffineRationalityResult:
    """Rationality of (x, v) given conjugators for the linear part.

    Case split follows the eigenvalue-1 geometry: no fixed point -> direct
    construction; zero kernel component -> block restriction and lift;
    nonzero kernel component -> infinite order (characteristic zero), where
    rational and real coincide and only a bounded witness search is offered."""
    x._require_square("classify_affine_rational")
    ident = Matrix.identity_of(x.field, x.rows)
    if x ** m != ident:
        raise UsageError(f"x^{m} != I")
    order = element_order(x, bound=m + 1).value
    needed = [k for k in range(2, order) if gcd(k, order) == 1]
    for k in needed:
        g = certs.get(k)
        if g is None:
            raise UsageError(f"missing conjugator for k = {k}")
        if not g.det() or g * x * g.inverse() != x ** k:
            raise UsageError(f"supplied conjugator for k = {k} fails verification")

    subject = AffineElement(x, v)
    if not kernel_basis(x - ident):
        certificates = {1: Certificate.make(subject, subject.identity(), Power(1))}
        for k in needed:
            certificates[k] = make_power_witness(x, v, certs[k], k)
        return AffineRationalityResult("rational", order, certificates,
                                       note="no nonzero fixed point; direct construction")

    try:
        splitting = split_at_eigenvalue_one(x, order)
    except UsageError:
        # only reachable when the characteristic divides the order (e.g.
        # unipotent parts over F_p): x is not semisimple at 1
        return AffineRationalityResult(
            "inconclusive", None, {},
            note="eigenvalue-1 splitting unavailable: x is not semisimple "
                 "at 1 (characteristic divides the order)")
    coords = splitting.inverse_basis.apply(v)
    d = splitting.kernel_dim
    v_kernel = Vector(x.field, coords.entries[:d])
    v_image = Vector(x.field, coords.entries[d:])

    if v_kernel.is_zero():
        certificates = {1: Certificate.make(subject, subject.identity(), Power(1))}
        for k in needed:
            block_g = extract_block_certificate(certs[k], x, k, splitting)
            block_cert = make_power_witness(splitting.restricted, v_image, block_g, k)
            certificates[k] = _lift_block_certificate(x, v, k, splitting,
                                                      block_cert.witness)
        return AffineRationalityResult(
            "rational", order, certificates,
            kernel_component=v_kernel,
            note="zero kernel component; block certificates lifted")

    if x.field.characteristic != 0:
        return AffineRationalityResult(
            "inconclusive", None, {}, kernel_component=v_kernel,
            note="nonzero kernel component over finite characteristic: the "
                 "telescoping order argument needs characteristic zero")

    telescope = []
    for l in range(1, telescope_steps + 1):
        tele = telescoped_translation(x, v, l)
        tele_kernel = Vector(x.field, splitting.inverse_basis.apply(tele).entries[:d])
        expected = v_kernel.scale(x.field.coerce(l))
        if tele_kernel != expected:
            raise TheoremViolation(
                f"telescoped kernel coordinate at step {l} is {tele_kernel!r}, "
                f"expected {expected!r}")
        telescope.append(tele_kernel)
    reality, refuted = _bounded_reality_search(x, v, seed, retries=16)
    note = ("kernel component grows linearly, so (x, v) has infinite order; "
            "rational iff real")
    if refuted:
        note += ("; no linear part admits a consistent translation equation, "
                 "so (x, v) is provably not real (hence not rational)")
    elif reality is None:
        note += "; no reality witness found in the bounded search (partial)"
    return AffineRationalityResult("infinite_order", None, {},
                                   kernel_component=v_kernel,
                                   telescope=tuple(telescope),
                                   reality=reality, reality_refuted=refuted,
                                   note=note)
