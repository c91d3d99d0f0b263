"""Symmetric-function oracles: three Schur routes, specializations, loops."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from trivertex.poly import LaurentPoly, Var
from trivertex.symfunc import (
    conjugate,
    det_poly,
    elementary,
    loop_elementary,
    loop_elementary_general,
    schur_at_one,
    schur_bialternant,
    schur_derivative_oracle,
    schur_jacobi_trudi,
    schur_pragacz,
    validate_partition,
)

Z = [Var.layer(t) for t in range(1, 8)]


def zp(i, e=1):
    return LaurentPoly.var(Z[i - 1], e)


def test_partition_validation():
    assert validate_partition((3, 1, 1, 0)) == (3, 1, 1, 0)
    with pytest.raises(ValueError):
        validate_partition((1, 2))
    with pytest.raises(ValueError):
        validate_partition((2, -1))


def test_conjugate_involution():
    assert conjugate((3, 1)) == (2, 1, 1)
    assert conjugate(()) == ()
    rng = random.Random(7)
    for _ in range(25):
        lam = sorted((rng.randrange(6) for _ in range(rng.randrange(5))), reverse=True)
        assert conjugate(conjugate(lam)) == tuple(p for p in lam if p > 0)


def test_elementary_values():
    vars3 = Z[:3]
    assert elementary(0, vars3).is_one()
    assert elementary(-1, vars3).is_zero()
    assert elementary(4, vars3).is_zero()
    e2 = zp(1) * zp(2) + zp(1) * zp(3) + zp(2) * zp(3)
    assert elementary(2, vars3) == e2


def test_elementary_derivative_drops_variable():
    # d/dz_k e_l = e_{l-1} over the other variables
    vars4 = Z[:4]
    for l in range(1, 5):
        for k in range(4):
            reduced = vars4[:k] + vars4[k + 1:]
            assert elementary(l, vars4).derivative(vars4[k]) == elementary(l - 1, reduced)


def test_det_poly_small():
    one = LaurentPoly.one()
    assert det_poly([]) == one
    assert det_poly([[zp(1)]]) == zp(1)
    m = [[zp(1), zp(2)], [zp(3), zp(4)]]
    assert det_poly(m) == zp(1) * zp(4) - zp(2) * zp(3)


def test_bialternant_examples():
    assert schur_bialternant((1,), Z[:2]) == zp(1) + zp(2)
    expected = (zp(1, 2) * zp(2, 2) * zp(3) + zp(1, 2) * zp(2) * zp(3, 2)
                + zp(1) * zp(2, 2) * zp(3, 2))
    assert schur_bialternant((2, 2, 1), Z[:3]) == expected
    assert schur_bialternant((), Z[:3]).is_one()


def test_jacobi_trudi_examples():
    assert schur_jacobi_trudi((2, 1), Z[:2]) == zp(1) * zp(2) * (zp(1) + zp(2))
    for k in range(1, 4):
        assert schur_jacobi_trudi((1,) * k, Z[:4]) == elementary(k, Z[:4])


def _random_partition(rng, max_weight=8):
    parts = []
    total = 0
    while True:
        p = rng.randrange(0, 5)
        if p == 0 or total + p > max_weight:
            break
        parts.append(p)
        total += p
    return tuple(sorted(parts, reverse=True))


def test_two_route_agreement_random():
    rng = random.Random(20260823)
    for _ in range(12):
        nv = rng.randrange(1, 5)
        lam = _random_partition(rng)
        lam = tuple(p for p in lam if p > 0)[:nv]
        assert schur_jacobi_trudi(lam, Z[:nv]) == schur_bialternant(lam, Z[:nv])


def test_pragacz_examples():
    # one block of two variables, part 1 -> s_(1,1) = e_2
    assert schur_pragacz([(1, 2)], [Z[:2]]) == elementary(2, Z[:2])
    # two blocks -> s_(2,2,1)
    got = schur_pragacz([(2, 2), (1, 1)], [Z[:2], [Z[2]]])
    assert got == schur_bialternant((2, 2, 1), Z[:3])
    # single block: no denominators, plain power product
    assert schur_pragacz([(3, 2)], [Z[:2]]) == LaurentPoly.monomial({Z[0]: 3, Z[1]: 3})
    # a non-final block of size 2: exponents count later variables, not blocks
    got = schur_pragacz([(2, 1), (1, 2), (0, 1)], [Z[:1], Z[1:3], Z[3:4]])
    assert got == schur_bialternant((2, 1, 1), Z[:4])


def test_pragacz_validation():
    with pytest.raises(ValueError):
        schur_pragacz([(1, 2)], [Z[:1]])
    with pytest.raises(ValueError):
        schur_pragacz([(1, 1), (2, 1)], [[Z[0]], [Z[1]]])


def test_schur_at_one():
    assert schur_at_one((1, 0), 2) == 2
    assert schur_at_one((0, 0, 0), 3) == 1
    assert schur_at_one((2, 2, 1), 3) == 3
    rng = random.Random(5)
    for _ in range(15):
        nv = rng.randrange(1, 5)
        lam = tuple(p for p in _random_partition(rng) if p > 0)[:nv]
        assert schur_at_one(lam, nv) == schur_jacobi_trudi(lam, Z[:nv]).at_one()


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=4), st.data())
def test_schur_symmetric_and_stable(nv, data):
    lam = data.draw(
        st.lists(st.integers(min_value=1, max_value=4), max_size=nv).map(
            lambda xs: tuple(sorted(xs, reverse=True))))
    s = schur_jacobi_trudi(lam, Z[:nv])
    # invariance under an adjacent transposition
    if nv >= 2:
        i = data.draw(st.integers(min_value=0, max_value=nv - 2))
        swapped = s.substitute({Z[i]: LaurentPoly.var(Z[i + 1]), Z[i + 1]: LaurentPoly.var(Z[i])})
        assert swapped == s
    # appending a zero variable changes nothing
    extended = schur_jacobi_trudi(lam, Z[:nv + 1]).substitute({Z[nv]: 0})
    assert extended == s


def test_derivative_oracle_m2():
    # d/dz1 (z1 * s_(1,0)) = d/dz1 (z1^2 + z1 z2) = 2 z1 + z2
    got = schur_derivative_oracle((1, 0), 2)
    assert got == 2 * zp(1) + zp(2)
    with pytest.raises(ValueError):
        schur_derivative_oracle((1, 0), 2, deriv_var_index=2)


def test_derivative_oracle_matches_formal_derivative():
    rng = random.Random(99)
    for _ in range(8):
        m = rng.randrange(1, 5)
        lam = tuple(p for p in _random_partition(rng, 6) if p > 0)[:m]
        lam = lam + (0,) * (m - len(lam))
        closed = LaurentPoly.monomial({Z[k]: m - k - 1 for k in range(m) if m - k - 1})
        closed = closed * schur_jacobi_trudi(lam, Z[:m])
        assert schur_derivative_oracle(lam, m) == closed.derivative(Z[0])


def test_derivative_oracle_elementary_case():
    # for lambda = (1^l, 0^(n-l)) the closed form collapses to
    # (n-1) z1^(n-2) prod_{k>=2} z_k^(n-k) e_l + prod z_k^(n-k) e_{l-1}(z2..zn)
    n = 4
    for l in (1, 2, 3):
        lam = (1,) * l + (0,) * (n - l)
        direct = schur_derivative_oracle(lam, n)
        pref1 = LaurentPoly.monomial({Z[0]: n - 2}) * LaurentPoly.monomial(
            {Z[k]: n - k - 1 for k in range(1, n) if n - k - 1})
        pref2 = LaurentPoly.monomial({Z[k]: n - k - 1 for k in range(n) if n - k - 1})
        expected = (n - 1) * pref1 * elementary(l, Z[:n]) + pref2 * elementary(l - 1, Z[1:n])
        assert direct == expected


def site(i, j):
    return Var.site(j, i, 1)


def test_loop_elementary_expansion():
    got = loop_elementary(2, site, 3)
    expected = (LaurentPoly.monomial({site(1, 1): 1, site(2, 2): 1})
                + LaurentPoly.monomial({site(1, 1): 1, site(2, 3): 1})
                + LaurentPoly.monomial({site(1, 2): 1, site(2, 3): 1}))
    assert got == expected


def test_loop_elementary_collapse_to_elementary():
    def flat(i, j):
        return Z[j - 1]

    for r in range(0, 4):
        assert loop_elementary(r, flat, 4) == elementary(r, Z[:4])


def test_loop_elementary_full_selection():
    got = loop_elementary(3, site, 3)
    assert got == LaurentPoly.monomial({site(1, 1): 1, site(2, 2): 1, site(3, 3): 1})


def test_loop_elementary_general():
    # sizes (2,1), 4 positions: 4 terms, slots 1,2 draw row 1, slot 3 row 2
    got = loop_elementary_general([2, 1], site, 4)
    assert len(got.terms) == 4
    expected = LaurentPoly.zero()
    from itertools import combinations
    for k1, k2, k3 in combinations(range(1, 5), 3):
        expected = expected + LaurentPoly.monomial(
            {site(1, k1): 1, site(1, k2): 1, site(2, k3): 1})
    assert got == expected
    # all sizes 1 specializes to loop_elementary
    assert loop_elementary_general([1, 1], site, 4) == loop_elementary(2, site, 4)
    with pytest.raises(ValueError):
        loop_elementary_general([3, 2], site, 4)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=4), st.integers(min_value=1, max_value=5))
def test_loop_elementary_pascal_recursion(k, n):
    # E_k(n) = E_k(n-1) + z_n^(k) * E_{k-1}(n-1)
    if k > n:
        return
    lhs = loop_elementary(k, site, n)
    keep = loop_elementary(k, site, n - 1) if k <= n - 1 else LaurentPoly.zero()
    last = LaurentPoly.var(site(k, n))
    take = loop_elementary(k - 1, site, n - 1) if k - 1 <= n - 1 else LaurentPoly.zero()
    assert lhs == keep + last * take
