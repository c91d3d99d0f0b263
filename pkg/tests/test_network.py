"""Slice-network layer operators: convention resolution, enumeration,
exact contraction, and the one-column strip operators."""

import itertools

import pytest

from trivertex.fock import LocalOp
from trivertex.network import (
    AmbiguousConvention,
    Convention,
    InvalidLabels,
    NoConventionFound,
    all_conventions,
    apply_layer,
    build_T,
    build_Y,
    count_configurations,
    default_convention,
    enumerate_configurations,
    enumerate_layer_terms,
    fixed_colors,
    inhomogeneous_spec,
    layer_transitions,
    resolve_convention,
    scalar_spec,
    sites,
    strip_vev,
    vacuum_state,
    vev,
)
from trivertex.poly import LaurentPoly, Var

Z = [Var.layer(t) for t in range(1, 7)]


def zmono(*exps):
    return LaurentPoly.monomial({Z[t]: e for t, e in enumerate(exps) if e}, 1)


def col_var(t, p):
    return Var.site(t, p, 1)


def row_vars(t, m):
    return [col_var(t, p) for p in range(1, m + 1)]


def test_sites_order_and_count():
    assert sites(2) == [(1, 1)]
    assert sites(4) == [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1)]
    for n in range(2, 7):
        assert len(sites(n)) == n * (n - 1) // 2


def test_resolved_convention_is_unique():
    conv = resolve_convention(4)
    assert conv == Convention("we", "staircase", "sum", "north_lateral")
    assert default_convention() == conv


def test_resolution_error_modes():
    losers = [c for c in all_conventions() if c.residual == "zero"]
    with pytest.raises(NoConventionFound):
        resolve_convention(4, candidates=losers)
    winner = Convention("we", "staircase", "sum", "north_lateral")
    with pytest.raises(AmbiguousConvention):
        resolve_convention(4, candidates=[winner, winner])
    with pytest.raises(ValueError):
        resolve_convention(3)


def test_anchor_expectation_values():
    assert vev(scalar_spec(4, (1, 2, 3, 3, 4))) == zmono(1, 2, 3, 3, 4)
    assert count_configurations(scalar_spec(4, (1, 2, 3, 3, 4))) == 1
    expected = zmono(3, 2, 2) + zmono(3, 3, 1) + zmono(2, 3, 2)
    assert vev(scalar_spec(4, (3, 3, 1))) == expected
    assert count_configurations(scalar_spec(4, (3, 3, 1))) == 3
    assert vev(scalar_spec(3, (2, 2))) == zmono(2, 2)


def test_single_site_layer_tables():
    conv = default_convention()
    def table(i):
        return sorted((t.alpha, t.ops) for t in enumerate_layer_terms(2, i, conv))
    assert table(0) == [(0, (LocalOp.ID_B,)), (1, (LocalOp.B_PLUS,))]
    assert table(1) == [(1, (LocalOp.T_PROJ,))]
    assert table(2) == [(1, (LocalOp.B_MINUS,)), (2, (LocalOp.ID_R,))]


def test_all_blue_coloring_always_survives():
    conv = default_convention()
    for n in (2, 3, 4):
        terms = enumerate_layer_terms(n, 0, conv)
        width = n * (n - 1) // 2
        assert any(t.alpha == 0 and t.ops == (LocalOp.ID_B,) * width for t in terms)


def test_neighbor_implications_hold_per_term():
    # with south neighbor at (k+1, l) and east neighbor at (k, l+1):
    # (1b, 1b) forces {1b, b+}; (1r, 1r) forces {1r, b-};
    # (t, 1b) forces t; (1r, t) forces t
    conv = default_convention()
    for n in (3, 4, 5):
        order = sites(n)
        idx = {s: j for j, s in enumerate(order)}
        for i in range(n + 1):
            for term in enumerate_layer_terms(n, i, conv):
                for (k, l) in order:
                    if (k + 1, l) not in idx or (k, l + 1) not in idx:
                        continue
                    here = term.ops[idx[(k, l)]]
                    south = term.ops[idx[(k + 1, l)]]
                    east = term.ops[idx[(k, l + 1)]]
                    if south is LocalOp.ID_B and east is LocalOp.ID_B:
                        assert here in (LocalOp.ID_B, LocalOp.B_PLUS)
                    if south is LocalOp.ID_R and east is LocalOp.ID_R:
                        assert here in (LocalOp.ID_R, LocalOp.B_MINUS)
                    if south is LocalOp.T_PROJ and east is LocalOp.ID_B:
                        assert here is LocalOp.T_PROJ
                    if south is LocalOp.ID_R and east is LocalOp.T_PROJ:
                        assert here is LocalOp.T_PROJ


def test_vev_homogeneity():
    for n, labels in ((3, (2, 1)), (4, (3, 3, 1)), (4, (4, 2, 1)), (3, (3, 2, 1))):
        value = vev(scalar_spec(n, labels))
        want = sum(labels)
        for mono, _ in value.sorted_terms():
            assert sum(e for _, e in mono) == want


def test_occupancy_bound_under_application():
    conv = default_convention()
    n, labels = 3, (0, 0, 0, 0)
    ket = {vacuum_state(n): LaurentPoly.one()}
    for t, label in enumerate(labels, start=1):
        terms = enumerate_layer_terms(n, label, conv)
        ket = apply_layer(terms, Z[t - 1], 0, ket, len(labels))
        assert max(max(s) for s in ket) <= t


def test_same_label_layers_commute():
    conv = default_convention()
    n, cutoff = 3, 4
    width = n * (n - 1) // 2
    for i in range(n + 1):
        for state in itertools.product(range(cutoff - 1), repeat=width):
            seen = {}
            for first, second in (("x", "y"), ("y", "x")):
                acc = {}
                for mid, a1 in layer_transitions(n, i, conv, state, cutoff):
                    for out, a2 in layer_transitions(n, i, conv, mid, cutoff):
                        key = (out, a2, a1) if first == "x" else (out, a1, a2)
                        acc[key] = acc.get(key, 0) + 1
                seen[first] = {k: v for k, v in acc.items() if v}
            assert seen["x"] == seen["y"]


def test_per_site_binding_collapses_to_scalar():
    conv = default_convention()
    n = 3
    z = Z[0]
    binding = {s: z for s in sites(n)}
    width = n * (n - 1) // 2
    for i in range(n + 1):
        terms = enumerate_layer_terms(n, i, conv)
        for state in itertools.product(range(2), repeat=width):
            ket = {state: LaurentPoly.one()}
            bar = apply_layer(terms, binding, 0, ket, 4)
            hom = apply_layer(terms, z, 0, ket, 4)
            shift = LaurentPoly.var(z) ** -i
            assert bar == {s: c * shift for s, c in hom.items()}


def test_configuration_listing():
    rows = enumerate_configurations(scalar_spec(4, (3, 3, 1)))
    assert len(rows) == 3
    weights = sorted(str(w) for _, w in rows)
    assert weights == sorted(["z1^3*z2^2*z3^2", "z1^3*z2^3*z3", "z1^2*z2^3*z3^2"])
    total = LaurentPoly.zero()
    for _, w in rows:
        total = total + w
    assert total == vev(scalar_spec(4, (3, 3, 1)))

    assert len(enumerate_configurations(scalar_spec(4, (1, 2, 3, 3, 4)))) == 1

    rows = enumerate_configurations(scalar_spec(2, (2,)))
    assert [str(w) for _, w in rows] == ["z1^2"]


def test_count_configurations_examples():
    assert count_configurations(scalar_spec(4, (4, 2, 1))) == 3
    assert count_configurations(scalar_spec(4, (1, 2, 3, 3, 4))) == 1


def test_invalid_labels():
    with pytest.raises(InvalidLabels):
        scalar_spec(3, (4,))
    with pytest.raises(InvalidLabels):
        fixed_colors(3, -1, default_convention())


def test_apply_layer_argument_errors():
    conv = default_convention()
    terms = enumerate_layer_terms(2, 0, conv)
    ket = {vacuum_state(2): LaurentPoly.one()}
    with pytest.raises(ValueError):
        apply_layer(terms, LaurentPoly.var(Z[0]), 1, ket, 2)
    with pytest.raises(ValueError):
        apply_layer(terms, {(1, 1): Z[0]}, 1, ket, 2)
    with pytest.raises(ValueError):
        apply_layer(terms, Z[0], 0, {(0, 0): LaurentPoly.one()}, 2)


def test_derivative_layer():
    # <O|X_2(z1)X_1(z2)|O> = z1^2 z2, so the z1-derivative layer gives 2 z1 z2
    base = vev(scalar_spec(3, (2, 1)))
    assert base == zmono(2, 1)
    hat = vev(scalar_spec(3, (2, 1), derivs=(1, 0)))
    assert hat == base.derivative(Z[0])


def test_layer_action_on_vacuum_n4():
    conv = default_convention()
    terms = enumerate_layer_terms(4, 1, conv)
    ket = apply_layer(terms, Z[0], 0, {vacuum_state(4): LaurentPoly.one()}, 3)
    z = LaurentPoly.var(Z[0])
    # site order (1,1),(1,2),(1,3),(2,1),(2,2),(3,1)
    assert ket == {
        (0, 0, 0, 0, 0, 0): z,
        (0, 1, 0, 0, 0, 0): z ** 2,
        (0, 0, 0, 0, 1, 0): z ** 2,
        (0, 0, 1, 0, 1, 0): z ** 3,
    }


def test_chain_entry_examples():
    one = LaurentPoly.one()
    T1 = build_T([col_var(1, 1)])
    assert T1((0,), 1, (0,), 1) == [(one, (LocalOp.T_PROJ,))]
    assert T1((1,), 0, (0,), 1) == [(LaurentPoly.var(col_var(1, 1)), (LocalOp.B_PLUS,))]
    T2 = build_T(row_vars(1, 2))
    assert T2((0, 0), 0, (0, 0), 0) == [(one, (LocalOp.ID_B, LocalOp.ID_B))]
    # chain-inconsistent boundary: nothing survives for either top output
    assert T2((1, 0), 0, (0, 1), 0) == []
    assert T2((1, 0), 0, (0, 1), 1) == []


def test_column_operator_tables_width2():
    z1, z2 = (LaurentPoly.var(v) for v in row_vars(1, 2))
    got = {ell: {ops: c for c, ops in build_Y(ell, 2, row_vars(1, 2))}
           for ell in (0, 1, 2)}
    assert got[0] == {
        (LocalOp.ID_R, LocalOp.ID_R): LaurentPoly.one(),
        (LocalOp.B_MINUS, LocalOp.ID_R): z1 ** -1,
    }
    assert got[1] == {
        (LocalOp.ID_B, LocalOp.B_MINUS): z2 ** -1,
        (LocalOp.B_PLUS, LocalOp.B_MINUS): z1 * z2 ** -1,
        (LocalOp.T_PROJ, LocalOp.ID_R): LaurentPoly.one(),
    }
    assert got[2] == {
        (LocalOp.ID_B, LocalOp.ID_B): LaurentPoly.one(),
        (LocalOp.B_PLUS, LocalOp.ID_B): z1,
        (LocalOp.T_PROJ, LocalOp.B_PLUS): z2,
    }


def test_top_column_operator_fixes_vacuum():
    for m in (1, 2, 3):
        layer = build_Y(m, m, row_vars(1, m))
        assert strip_vev([layer], (0,) * m, (0,) * m) == LaurentPoly.one()


def test_projected_first_column_operator():
    # pairing the top slot: <0^k| Y_0 |0>_1 acts as <0^(k-1)| on the rest,
    # and <0^k| Y_0 |1>_1 as (z^(1))^-1 <0^(k-1)|
    for k in (2, 3):
        layer = build_Y(0, k, row_vars(1, k))
        zinv = LaurentPoly.var(col_var(1, 1)) ** -1
        for rest in itertools.product(range(2), repeat=k - 1):
            hit = LaurentPoly.one() if not any(rest) else LaurentPoly.zero()
            assert strip_vev([layer], (0,) * k, (0,) + rest) == hit
            assert strip_vev([layer], (0,) * k, (1,) + rest) == hit * zinv


def test_reduction_to_one_column():
    for n, extra in ((3, 0), (3, 1), (4, 0)):
        labels = list(range(n, 1, -1)) + [0] * (extra + 1)
        lhs = vev(inhomogeneous_spec(n, labels))
        m = n - 1
        layers = [build_Y(min(t - 1, m), m, row_vars(t, m))
                  for t in range(1, len(labels) + 1)]
        rhs = strip_vev(layers, (0,) * m, (0,) * m)
        assert lhs == rhs
