import random
from fractions import Fraction

import pytest

from conjcert.errors import FixedPointError, PresentationError, UsageError
from conjcert.fields import GF, QQ
from conjcert.groups import Inverse, Power
from conjcert.linalg import Matrix, Vector
from conjcert.semidirect import (
    AffineElement,
    CentralSeriesLevel,
    CentralSeriesPresentation,
    LinearAction,
    affine_from_pair,
    lift_central_series,
    make_power_witness,
    make_real_witness,
    pair_from_affine,
    rational_witness_via_lift,
    real_witness_via_lift,
    reduce_translation,
    vector_presentation,
)


def mat(rows, field=QQ):
    return Matrix.from_rows(field, rows)


def vec(values, field=QQ):
    return Vector.of(field, values)


def rnd_fraction(rng):
    return Fraction(rng.randint(-5, 5), rng.randint(1, 3))


def rnd_invertible(rng, n, field=QQ):
    while True:
        if field is QQ:
            m = mat([[rnd_fraction(rng) for _ in range(n)] for _ in range(n)])
        else:
            m = mat([[rng.randrange(field.p) for _ in range(n)] for _ in range(n)], field)
        if m.det():
            return m


def block_matrix(a: AffineElement) -> Matrix:
    n = a.linear.rows
    field = a.linear.field
    rows = []
    for i in range(n):
        rows.append(list(a.linear.row(i)) + [a.translation[i]])
    rows.append([field.zero()] * n + [field.one()])
    return Matrix(field, n + 1, n + 1, tuple(x for row in rows for x in row))


def test_affine_matches_block_matrices():
    rng = random.Random(1)
    for _ in range(20):
        a = AffineElement.of(rnd_invertible(rng, 2), [rnd_fraction(rng) for _ in range(2)])
        b = AffineElement.of(rnd_invertible(rng, 2), [rnd_fraction(rng) for _ in range(2)])
        assert block_matrix(a * b) == block_matrix(a) * block_matrix(b)
        assert block_matrix(a.inverse()) == block_matrix(a).inverse()


def test_affine_rejects_singular_linear_part():
    with pytest.raises(UsageError):
        AffineElement.of(mat([[1, 1], [1, 1]]), [0, 0])


def test_reduce_translation_zero():
    x = mat([[2, 0], [0, "1/2"]])
    assert reduce_translation(x, vec([0, 0])) == vec([0, 0])


def test_reduce_translation_diagonal():
    x = mat([[2, 0], [0, "1/2"]])
    w = reduce_translation(x, vec([1, 1]))
    assert w == vec([1, -2])
    # conjugation by (I, w) really kills the translation
    c = AffineElement.of(Matrix.identity_of(QQ, 2), w)
    s = AffineElement.of(x, [1, 1])
    conj = c * s * c.inverse()
    assert conj == AffineElement.of(x, [0, 0])


def test_reduce_translation_unique_and_deterministic():
    rng = random.Random(2)
    count = 0
    while count < 50:
        x = rnd_invertible(rng, 2)
        if (x - Matrix.identity_of(QQ, 2)).det() == 0:
            continue
        count += 1
        b = vec([rnd_fraction(rng) for _ in range(2)])
        w1 = reduce_translation(x, b)
        w2 = reduce_translation(x, b)
        assert w1 == w2
        b2 = b + vec([1, 0])
        assert reduce_translation(x, b2) != w1


def test_reduce_translation_fixed_point_error_carries_kernel():
    x = mat([[1, 0], [0, 2]])
    with pytest.raises(FixedPointError) as err:
        reduce_translation(x, vec([1, 1]))
    assert err.value.kernel and err.value.kernel[0] == vec([1, 0])


def test_make_real_witness_zero_translation():
    x = mat([[2, 0], [0, "1/2"]])
    h = mat([[0, 1], [-1, 0]])
    cert = make_real_witness(x, vec([0, 0]), h)
    assert cert.witness == AffineElement.of(h, [0, 0])
    assert cert.verified


def test_make_real_witness_diagonal():
    x = mat([[2, 0], [0, "1/2"]])
    h = mat([[0, 1], [-1, 0]])
    cert = make_real_witness(x, vec([1, 1]), h)
    assert cert.verified and cert.check()
    assert isinstance(cert.relation, Inverse)


def test_make_real_witness_rejects_bad_h():
    x = mat([[2, 0], [0, "1/2"]])
    with pytest.raises(UsageError):
        make_real_witness(x, vec([1, 1]), Matrix.identity_of(QQ, 2))


def test_make_power_witness_trivial():
    x = mat([[2, 0], [0, "1/2"]])
    cert = make_power_witness(x, vec([3, -4]), Matrix.identity_of(QQ, 2), 1)
    assert cert.witness == cert.witness.identity()


def test_make_power_witness_f2_matches_closed_form_conjugator():
    f2 = GF(2)
    x = mat([[1, 1], [1, 0]], f2)
    h = mat([[0, 1], [1, 0]], f2)
    assert h * x * h.inverse() == x ** 2
    for v in [(0, 0), (1, 0), (0, 1), (1, 1)]:
        b = vec(list(v), f2)
        cert = make_power_witness(x, b, h, 2)
        assert cert.verified
        s = AffineElement.of(x, b)
        closed_form = AffineElement.of(h, [v[1], v[1]])
        assert closed_form * s * closed_form.inverse() == s * s


def test_make_power_witness_minus_identity():
    x = -Matrix.identity_of(QQ, 2)
    cert = make_power_witness(x, vec([5, 7]), Matrix.identity_of(QQ, 2), 1)
    assert cert.verified


def test_semidirect_group_laws():
    rng = random.Random(3)
    for field in (QQ, GF(5)):
        pres = vector_presentation(field, 2, lambda h: h)
        G = pres.semidirect(Matrix.identity_of(field, 2))

        def rnd_elem():
            h = rnd_invertible(rng, 2, field)
            if field is QQ:
                n = vec([rnd_fraction(rng) for _ in range(2)])
            else:
                n = vec([rng.randrange(5) for _ in range(2)], field)
            return G.element(h, n)

        for _ in range(15):
            a, b, c = rnd_elem(), rnd_elem(), rnd_elem()
            assert (a * b) * c == a * (b * c)
            assert a * a.inverse() == G.identity()
            assert a.inverse() * a == G.identity()


def test_semidirect_consistent_with_affine_via_convention_map():
    rng = random.Random(4)
    pres = vector_presentation(QQ, 2, lambda h: h)
    G = pres.semidirect(Matrix.identity_of(QQ, 2))
    for _ in range(20):
        h1, h2 = rnd_invertible(rng, 2), rnd_invertible(rng, 2)
        v1 = vec([rnd_fraction(rng) for _ in range(2)])
        v2 = vec([rnd_fraction(rng) for _ in range(2)])
        a1, a2 = affine_from_pair(h1, v1), affine_from_pair(h2, v2)
        prod = G.element(h1, v1) * G.element(h2, v2)
        assert affine_from_pair(prod.h, prod.n) == a1 * a2
        back_h, back_v = pair_from_affine(a1)
        assert (back_h, back_v) == (h1, v1)


def test_lift_one_level_reduces_to_translation_solve():
    pres = vector_presentation(QQ, 2, lambda h: h)
    x = mat([[2, 0], [0, "1/2"]])
    v = vec([1, 1])
    u = lift_central_series(x, v, pres)
    # pair convention: (e,u)(x,e)(e,u)^-1 = (x,v) iff (x - I) u = -x v
    assert u == reduce_translation(x, -(x.apply(v)))


def test_lift_identity_input():
    pres = vector_presentation(QQ, 2, lambda h: h)
    x = mat([[2, 0], [0, "1/2"]])
    assert lift_central_series(x, vec([0, 0]), pres) == vec([0, 0])


def two_level_abelian_presentation():
    """Q^4 with the chain Q^4 > 0+0+Q^2 > 0; quotients are coordinate pairs."""
    field = QQ

    def act_top(h):
        return mat([[h[0, 0], h[0, 1]], [h[1, 0], h[1, 1]]])

    def act_bottom(h):
        return mat([[h[2, 2], h[2, 3]], [h[3, 2], h[3, 3]]])

    levels = [
        CentralSeriesLevel(
            dim=2,
            project=lambda n: vec([n[0], n[1]]),
            section=lambda v: vec([v[0], v[1], 0, 0]),
            act=act_top,
        ),
        CentralSeriesLevel(
            dim=2,
            project=lambda n: vec([n[2], n[3]]),
            section=lambda v: vec([0, 0, v[0], v[1]]),
            act=act_bottom,
        ),
    ]
    return CentralSeriesPresentation(
        field,
        multiply=lambda a, b: a + b,
        inverse=lambda a: -a,
        identity=Vector.zero(field, 4),
        action=lambda h, n: h.apply(n),
        levels=levels,
        name="Q4-two-level",
    )


def test_two_level_lift_verifies():
    pres = two_level_abelian_presentation()
    x = mat([
        [2, 0, 0, 0],
        [0, Fraction(1, 2), 0, 0],
        [0, 0, 3, 0],
        [0, 0, 0, Fraction(1, 3)],
    ])
    pres.validate(h_samples=[x, x.inverse()])
    rng = random.Random(5)
    for _ in range(10):
        n = vec([rnd_fraction(rng) for _ in range(4)])
        u = lift_central_series(x, n, pres)
        G = pres.semidirect(x.identity())
        u_el, x_el = G.embed_n(u), G.embed_h(x)
        assert u_el * x_el * u_el.inverse() == G.element(x, n)


def test_lift_fixed_point_reports_level():
    pres = two_level_abelian_presentation()
    x = mat([
        [2, 0, 0, 0],
        [0, Fraction(1, 2), 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
    ])
    with pytest.raises(FixedPointError) as err:
        lift_central_series(x, vec([1, 1, 1, 1]), pres)
    assert err.value.level == 1


def test_witnesses_via_lift():
    pres = two_level_abelian_presentation()
    x = mat([
        [2, 0, 0, 0],
        [0, Fraction(1, 2), 0, 0],
        [0, 0, 2, 0],
        [0, 0, 0, Fraction(1, 2)],
    ])
    swap = mat([[0, 1], [-1, 0]])
    h = mat([
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
        [0, 0, 0, 1],
        [0, 0, -1, 0],
    ])
    assert h * x * h.inverse() == x.inverse()
    rng = random.Random(6)
    for _ in range(5):
        n = vec([rnd_fraction(rng) for _ in range(4)])
        cert = real_witness_via_lift(x, n, pres, h)
        assert cert.verified and isinstance(cert.relation, Inverse)
    # trivial n gives the plain embedded witness
    cert = real_witness_via_lift(x, Vector.zero(QQ, 4), pres, h)
    assert cert.witness.h == h and cert.witness.n == Vector.zero(QQ, 4)
    assert swap * mat([[2, 0], [0, "1/2"]]) * swap.inverse() == mat([["1/2", 0], [0, 2]])


def test_rational_witness_via_lift_f2():
    f2 = GF(2)
    pres = vector_presentation(f2, 2, lambda h: h)
    x = mat([[1, 1], [1, 0]], f2)
    h = mat([[0, 1], [1, 0]], f2)
    for v in [(0, 0), (1, 0), (0, 1), (1, 1)]:
        cert = rational_witness_via_lift(x, vec(list(v), f2), pres, h, 2)
        assert cert.verified and cert.relation == Power(2)


def test_lift_rejects_wrong_witness():
    pres = vector_presentation(QQ, 2, lambda h: h)
    x = mat([[2, 0], [0, "1/2"]])
    with pytest.raises(UsageError):
        real_witness_via_lift(x, vec([1, 1]), pres, Matrix.identity_of(QQ, 2))


def test_any_set_theoretic_section_is_accepted():
    # sections only need project(section(v)) = v; junk in lower levels is
    # mopped up by the later solves and the final verification
    field = QQ
    levels = [
        CentralSeriesLevel(
            dim=1,
            project=lambda n: vec([n[0]]),
            section=lambda v: vec([v[0], 1]),
            act=lambda h: mat([[h[0, 0]]]),
        ),
        CentralSeriesLevel(
            dim=1,
            project=lambda n: vec([n[1]]),
            section=lambda v: vec([0, v[0]]),
            act=lambda h: mat([[h[1, 1]]]),
        ),
    ]
    pres = CentralSeriesPresentation(
        field,
        multiply=lambda a, b: a + b,
        inverse=lambda a: -a,
        identity=Vector.zero(field, 2),
        action=lambda h, n: h.apply(n),
        levels=levels,
    )
    x = mat([[2, 0], [0, 3]])
    u = lift_central_series(x, vec([1, 1]), pres)
    G = pres.semidirect(x.identity())
    u_el = G.embed_n(u)
    assert u_el * G.embed_h(x) * u_el.inverse() == G.element(x, vec([1, 1]))


def test_linear_action_validates_on_samples():
    rng = random.Random(8)
    samples = [rnd_invertible(rng, 2) for _ in range(4)]
    action = LinearAction(QQ, 2, lambda h: h, samples=samples)
    assert action(samples[0]) == samples[0]
    with pytest.raises(UsageError):
        LinearAction(QQ, 2, lambda h: h * h, samples=samples)  # not multiplicative
    with pytest.raises(UsageError):
        LinearAction(QQ, 1, lambda h: h, samples=samples)  # wrong dimension


def test_presentation_descent_check_detects_inconsistent_action():
    # a quotient action that does not match the carrier action leaves a
    # residual that fails to descend
    field = QQ
    bad_levels = [
        CentralSeriesLevel(
            dim=1,
            project=lambda n: vec([n[0]]),
            section=lambda v: vec([v[0], 0]),
            act=lambda h: mat([[h[1, 1]]]),  # wrong block
        ),
        CentralSeriesLevel(
            dim=1,
            project=lambda n: vec([n[1]]),
            section=lambda v: vec([0, v[0]]),
            act=lambda h: mat([[h[1, 1]]]),
        ),
    ]
    pres = CentralSeriesPresentation(
        field,
        multiply=lambda a, b: a + b,
        inverse=lambda a: -a,
        identity=Vector.zero(field, 2),
        action=lambda h, n: h.apply(n),
        levels=bad_levels,
    )
    x = mat([[2, 0], [0, 3]])
    with pytest.raises(PresentationError):
        lift_central_series(x, vec([1, 1]), pres)
