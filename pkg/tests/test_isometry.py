import pytest
from hypothesis import assume, given, settings, strategies as st

from k3lat import smith
from k3lat.criteria import d_alpha, double_beauville, hilbert_square_ns, l_alpha
from k3lat.errors import ContractError, NotIsometry, NotSquareTwo
from k3lat.isometry import (
    compose,
    identity,
    invariant_sublattice,
    is_involution,
    make_isometry,
    orientation_positive,
    reflection_fix,
    reflection_neg,
)
from k3lat.lattice import diagonal, is_primitive_vector, make_lattice, pairing, standard


def l1_delta():
    return hilbert_square_ns(l_alpha(1))


def test_reflection_fixes_d_and_negates_complement():
    lat, delta = l1_delta()
    d = lat.vector(1, 0, 0) - delta
    r = reflection_fix(lat, d)
    assert r(d) == d
    v = lat.vector(1, 0, -2)  # <v, d> = 4 - 4 = 0
    assert pairing(lat, v, d) == 0
    assert r(v) == -v


def test_reflection_needs_square_two():
    lat = l_alpha(1)
    with pytest.raises(NotSquareTwo):
        reflection_fix(lat, lat.vector(1, 0))


def test_sigma_squared_is_identity():
    lat, delta = l1_delta()
    s1 = reflection_fix(lat, lat.vector(1, 0, 0) - delta)
    assert compose(s1, s1).is_identity()


def test_kappa_is_reflection_in_d1():
    lat, delta = l1_delta()
    s1 = reflection_fix(lat, lat.vector(1, 0, 0) - delta)
    s2 = reflection_fix(lat, lat.vector(0, 1, 0) - delta)
    kappa = compose(s1, compose(s2, s1))
    d1 = lat.vector(4, -1, -3)
    assert kappa.matrix == reflection_fix(lat, d1).matrix
    assert is_involution(kappa)
    assert [v.coords for v in invariant_sublattice(kappa)] == [d1.coords]


def test_inverse_composes_to_identity():
    lat, delta = l1_delta()
    s1 = reflection_fix(lat, lat.vector(1, 0, 0) - delta)
    s2 = reflection_fix(lat, lat.vector(0, 1, 0) - delta)
    g = compose(s1, s2)
    assert compose(g, g.inverse()).is_identity()
    assert not is_involution(g)


def test_invariant_sublattice_identity_is_everything():
    lat = l_alpha(2)
    assert len(invariant_sublattice(identity(lat))) == 2


def test_u_swap_after_reflection():
    u = standard("U")
    swap = make_isometry(u, [[0, 1], [1, 0]])
    r = reflection_fix(u, u.vector(1, 1))
    # the reflection in e + f is exactly the swap
    assert r.matrix == swap.matrix
    g = compose(swap, r)
    assert smith.matmul(g.matrix, g.matrix) == smith.identity(2)
    assert g.is_identity()


def test_non_isometry_rejected():
    lat = l_alpha(1)
    with pytest.raises(NotIsometry):
        make_isometry(lat, [[1, 1], [0, 1]])


def k3sq_frame(lat):
    def u_sum(block):
        c = [0] * lat.rank
        c[2 * block] = c[2 * block + 1] = 1
        return lat.vector(*c)

    return [u_sum(0), u_sum(1), u_sum(2)]


def test_orientation_examples():
    lat = standard("K3_SQ")
    frame = k3sq_frame(lat)
    assert orientation_positive(identity(lat), frame) == 1
    assert orientation_positive(reflection_fix(lat, frame[0]), frame) == 1
    minus = make_isometry(lat, [[-int(i == j) for j in range(lat.rank)] for i in range(lat.rank)])
    assert orientation_positive(minus, frame) == -1


def test_orientation_rejects_bad_frames():
    lat = standard("K3_SQ")
    frame = k3sq_frame(lat)
    with pytest.raises(ContractError):
        orientation_positive(identity(lat), [frame[0], frame[0], frame[1]])
    neg = lat.vector(*([1, -1] + [0] * 21))
    with pytest.raises(ContractError):
        orientation_positive(identity(lat), [frame[0], frame[1], neg])
    with pytest.raises(ContractError):
        orientation_positive(identity(l_alpha(1)), [])


def test_reflection_neg_negates():
    lat = diagonal(6, -2)
    e = lat.vector(0, 1)
    r = reflection_neg(lat, e)
    assert r(e) == -e and r(lat.vector(1, 0)) == lat.vector(1, 0)


def test_kappa_alpha_up_to_100():
    for alpha in range(1, 101):
        rep = double_beauville(alpha)
        dv = d_alpha(alpha, rep.lattice)
        assert rep.kappa.matrix == reflection_fix(rep.lattice, dv).matrix
        assert [v.coords for v in invariant_sublattice(rep.kappa)] == [dv.coords]


# -- properties ------------------------------------------------------------------


@st.composite
def even_lattice_with_root(draw):
    """Random even lattice containing a primitive vector of square 2: the
    first basis vector has square 2."""
    n = draw(st.integers(2, 4))
    g = [[0] * n for _ in range(n)]
    g[0][0] = 2
    for i in range(n):
        for j in range(i, n):
            if (i, j) == (0, 0):
                continue
            val = 2 * draw(st.integers(-4, 4)) if i == j else draw(st.integers(-5, 5))
            g[i][j] = g[j][i] = val
    assume(smith.determinant(g) != 0)
    lat = make_lattice(g)
    # move the root around by a random unimodular change of basis
    coeffs = draw(st.lists(st.integers(-3, 3), min_size=n - 1, max_size=n - 1))
    m = smith.identity(n)
    for j, c in enumerate(coeffs, start=1):
        m[j][0] = c
    new_gram = smith.matmul(smith.transpose(m), smith.matmul(g, m))
    lat = make_lattice(new_gram)
    # the old first basis vector in new coordinates: solve m x = e0
    inv = identity_inverse_unipotent(m)
    d = lat.vector(*[row[0] for row in inv])
    return lat, d


def identity_inverse_unipotent(m):
    n = len(m)
    inv = smith.identity(n)
    for j in range(1, n):
        inv[j][0] = -m[j][0]
    return inv


@settings(max_examples=200, deadline=None)
@given(even_lattice_with_root())
def test_reflection_is_involution_with_rank_one_fixed(sample):
    lat, d = sample
    assert d.square == 2
    r = reflection_fix(lat, d)
    assert is_involution(r)
    assert r.det in (1, -1)
    inv = invariant_sublattice(r)
    assert len(inv) == 1 and inv[0].coords in (d.coords, (-d).coords)
    assert is_primitive_vector(lat, inv[0])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from([(1, 0, -1), (0, 1, -1), (4, -1, -3), (-1, 4, -3)]), min_size=3, max_size=3))
def test_compose_associative(choice):
    lat, _ = l1_delta()
    g, h, k = (reflection_fix(lat, lat.vector(*c)) for c in choice)
    left = compose(compose(g, h), k)
    right = compose(g, compose(h, k))
    assert left.matrix == right.matrix
    # the constructor re-verifies M^T G M = G; check again explicitly
    m = left.matrix
    assert smith.matmul(smith.transpose(m), smith.matmul(lat.gram, m)) == [list(r) for r in lat.gram]


def fixing_p(lat):
    """Isometries of K3_SQ fixing p = e1 + f1."""
    frame = k3sq_frame(lat)
    out = [reflection_fix(lat, frame[0])]
    for block in (1, 2):
        # (e + f) of a U block plus a square -4 vector of the first E8(-1): square -2, orthogonal to p
        c = [0] * lat.rank
        c[2 * block] = c[2 * block + 1] = 1
        c[6] = c[7] = 1
        v = lat.vector(*c)
        assert v.square == -2 and pairing(lat, v, frame[0]) == 0
        out.append(reflection_neg(lat, v))
    # hyperplane reflection in the positive vector e2 + f2: reverses orientation
    fix = reflection_fix(lat, frame[1])
    out.append(make_isometry(lat, [[-x for x in row] for row in fix.matrix]))
    return out


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=2, max_size=4))
def test_orientation_multiplicative(picks):
    lat = standard("K3_SQ")
    frame = k3sq_frame(lat)
    gens = fixing_p(lat)
    g = identity(lat)
    sign = 1
    for k in picks:
        g = compose(g, gens[k])
        sign *= orientation_positive(gens[k], frame)
    assert g(frame[0]) == frame[0]
    assert orientation_positive(g, frame) == sign


def test_orientation_generators_cover_both_signs():
    lat = standard("K3_SQ")
    frame = k3sq_frame(lat)
    assert {orientation_positive(g, frame) for g in fixing_p(lat)} == {1, -1}
