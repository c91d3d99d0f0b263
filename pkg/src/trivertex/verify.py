"""Identity battery: every expectation-value identity checked exactly
against the independent symmetric-function oracles.

All checks return a CheckReport; nothing is approximate, a report passes
only on exact Laurent-polynomial (or exact rational) equality.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .fock import check_q0_relations, check_qosc_relations
from .lattice import TensorKind, local_tensor, q0_limit, tetrahedron_check
from .network import (
    Convention,
    apply_layer,
    build_Y,
    count_configurations,
    default_convention,
    enumerate_layer_terms,
    inhomogeneous_spec,
    layer_transitions,
    scalar_spec,
    strip_vev,
    vev,
)
from .poly import LaurentPoly, Var
from .symfunc import (
    elementary,
    loop_elementary,
    loop_elementary_general,
    redistributions,
    schur_at_one,
    schur_bialternant,
    schur_derivative_oracle,
    schur_jacobi_trudi,
    schur_pragacz,
)


@dataclass
class CheckReport:
    name: str
    params: dict
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_obj(self) -> dict:
        return {
            "name": self.name,
            "params": self.params,
            "passed": self.passed,
            "detail": self.detail,
            "seconds": round(self.seconds, 6),
        }


def reports_to_json(reports: Sequence[CheckReport]) -> str:
    return json.dumps([r.to_obj() for r in reports], indent=2, sort_keys=True)


def _report(name: str, params: dict, passed: bool, detail: Optional[dict],
            t0: float) -> CheckReport:
    return CheckReport(name, params, bool(passed), detail or {},
                       time.perf_counter() - t0)


def _mismatch(lhs, rhs) -> dict:
    return {"lhs": str(lhs), "rhs": str(rhs)}


# -- exchange relations ----------------------------------------------------

def _product_map(n: int, conv: Convention, outer: int, inner: int,
                 state: Tuple[int, ...], cutoff: int) -> Dict[tuple, int]:
    """Integer path map for X_outer(u) X_inner(v) |state>: keys are
    (out_state, exponent of u, exponent of v)."""
    acc: Dict[tuple, int] = {}
    for mid, a_in in layer_transitions(n, inner, conv, state, cutoff):
        for out, a_out in layer_transitions(n, outer, conv, mid, cutoff):
            key = (out, a_out, a_in)
            acc[key] = acc.get(key, 0) + 1
    return acc


def _zf_sides(n: int, conv: Convention, i: int, j: int, state: Tuple[int, ...],
              cutoff: int) -> Tuple[Dict[tuple, int], Dict[tuple, int]]:
    # left side X_i(x) X_j(y); keys (out, e_x, e_y)
    lhs = _product_map(n, conv, i, j, state, cutoff)
    rhs: Dict[tuple, int] = {}

    def add(key, c):
        v = rhs.get(key, 0) + c
        if v:
            rhs[key] = v
        else:
            rhs.pop(key, None)

    if i == j:
        for (out, a_out, a_in), c in _product_map(n, conv, i, i, state, cutoff).items():
            add((out, a_in, a_out), c)
    elif i < j:
        # X_i(y) X_j(x) + (1 - x/y) X_j(y) X_i(x)
        for (out, a_out, a_in), c in _product_map(n, conv, i, j, state, cutoff).items():
            add((out, a_in, a_out), c)
        for (out, a_out, a_in), c in _product_map(n, conv, j, i, state, cutoff).items():
            add((out, a_in, a_out), c)
            add((out, a_in + 1, a_out - 1), -c)
    else:
        # (x/y) X_i(y) X_j(x)
        for (out, a_out, a_in), c in _product_map(n, conv, i, j, state, cutoff).items():
            add((out, a_in + 1, a_out - 1), c)
    lhs = {k: c for k, c in lhs.items() if c}
    return lhs, rhs


def check_zf(n: int, pair: Tuple[int, int], cutoff: int = 4,
             varpair: Tuple[str, str] = ("x", "y"),
             convention: Optional[Convention] = None) -> CheckReport:
    """Exchange relation for the pair (i, j) on every basis ket with
    occupancy at most cutoff-2."""
    t0 = time.perf_counter()
    conv = convention or default_convention()
    i, j = pair
    width = n * (n - 1) // 2
    detail = None
    passed = True
    for state in itertools.product(range(cutoff - 1), repeat=width):
        lhs, rhs = _zf_sides(n, conv, i, j, state, cutoff)
        if lhs != rhs:
            passed = False
            detail = {"state": state, "vars": varpair,
                      **_mismatch(sorted(lhs.items()), sorted(rhs.items()))}
            break
    return _report("zf", {"n": n, "i": i, "j": j, "cutoff": cutoff}, passed,
                   detail, t0)


# -- factorized and Schur-valued expectation values ------------------------

def check_increasing_labels(n: int, labels: Sequence[int],
                            convention: Optional[Convention] = None) -> CheckReport:
    """Weakly increasing layer labels: the value is the pure monomial
    prod z_t^{i_t} from a single contributing configuration."""
    t0 = time.perf_counter()
    if any(labels[t] > labels[t + 1] for t in range(len(labels) - 1)):
        raise ValueError("labels must be weakly increasing")
    spec = scalar_spec(n, labels)
    got = vev(spec, convention)
    expected = LaurentPoly.monomial(
        {Var.layer(t): i for t, i in enumerate(labels, start=1) if i}, 1)
    count = count_configurations(spec, convention)
    passed = got == expected and count == 1
    detail = None if passed else {**_mismatch(got, expected), "count": count}
    return _report("increasing_labels", {"n": n, "labels": list(labels)},
                   passed, detail, t0)


def _block_layout(blocks: Sequence[Tuple[int, int]]):
    """Flattened labels, per-block variable groups, partition, prefactor."""
    m = len(blocks)
    labels: List[int] = []
    var_groups: List[List[Var]] = []
    t = 1
    for label, mult in blocks:
        group = []
        for _ in range(mult):
            labels.append(label)
            group.append(Var.layer(t))
            t += 1
        var_groups.append(group)
    parts: List[int] = []
    pref_exp: Dict[Var, int] = {}
    for k, (label, mult) in enumerate(blocks, start=1):
        parts.extend([label - m + k] * mult)
        for v in var_groups[k - 1]:
            if m - k:
                pref_exp[v] = m - k
    prefactor = LaurentPoly.monomial(pref_exp, 1)
    return labels, var_groups, tuple(parts), prefactor


def check_schur_correspondence(n: int, blocks: Sequence[Tuple[int, int]],
                               convention: Optional[Convention] = None) -> CheckReport:
    """Strictly decreasing labels with multiplicities: the expectation value
    factors as prod_k (block variables)^(m-k) times a Schur polynomial."""
    t0 = time.perf_counter()
    values = [b[0] for b in blocks]
    if any(values[k] <= values[k + 1] for k in range(len(values) - 1)):
        raise ValueError("block labels must be strictly decreasing")
    if values[0] > n or values[-1] < 0:
        raise ValueError("labels must sit in 0..n")
    labels, var_groups, parts, prefactor = _block_layout(blocks)
    all_vars = [v for g in var_groups for v in g]
    got = vev(scalar_spec(n, labels), convention)
    expected = prefactor * schur_jacobi_trudi(parts, all_vars)
    passed = got == expected
    return _report("schur_correspondence",
                   {"n": n, "blocks": [list(b) for b in blocks]},
                   passed, None if passed else _mismatch(got, expected), t0)


def check_multiple_commutation(n: int, blocks: Sequence[Tuple[int, int]],
                               cutoff: Optional[int] = None,
                               kets: Optional[Iterable[Tuple[int, ...]]] = None,
                               convention: Optional[Convention] = None) -> CheckReport:
    """Reordering identity: the label-decreasing product over its monomial
    prefactor equals the redistribution sum of label-increasing products.

    Checked as an identity of state combinations; denominators are cleared
    with the full pair product so both sides stay polynomial.
    """
    t0 = time.perf_counter()
    conv = convention or default_convention()
    labels, var_groups, _, prefactor = _block_layout(blocks)
    sizes = [len(g) for g in var_groups]
    all_vars = [v for g in var_groups for v in g]
    width = n * (n - 1) // 2
    total_layers = len(labels)
    if kets is None:
        kets = [(0,) * width]
    full_pair = LaurentPoly.one()
    for va, vb in itertools.combinations(all_vars, 2):
        full_pair = full_pair * (LaurentPoly.var(va) - LaurentPoly.var(vb))

    def apply_product(label_seq, var_seq, ket_state, cutoff_):
        combo = {ket_state: LaurentPoly.one()}
        for label, zv in zip(reversed(label_seq), reversed(var_seq)):
            terms = enumerate_layer_terms(n, label, conv)
            combo = apply_layer(terms, zv, 0, combo, cutoff_)
        return combo

    passed = True
    detail = None
    for ket_state in kets:
        cutoff_ = (cutoff if cutoff is not None
                   else max(ket_state, default=0) + total_layers)
        lhs = apply_product(labels, all_vars, ket_state, cutoff_)
        inv_pref = prefactor ** -1
        lhs = {s: c * inv_pref * full_pair for s, c in lhs.items()}
        rhs: Dict[Tuple[int, ...], LaurentPoly] = {}
        for groups, multiplier in redistributions(all_vars, sizes):
            rev_labels: List[int] = []
            rev_vars: List[Var] = []
            for k in range(len(blocks) - 1, -1, -1):
                rev_labels.extend([blocks[k][0]] * sizes[k])
                rev_vars.extend(groups[k])
            contrib = apply_product(rev_labels, rev_vars, ket_state, cutoff_)
            for s, c in contrib.items():
                add = c * multiplier
                acc = rhs.get(s)
                rhs[s] = add if acc is None else acc + add
        lhs = {s: c for s, c in lhs.items() if not c.is_zero()}
        rhs = {s: c for s, c in rhs.items() if not c.is_zero()}
        if lhs != rhs:
            passed = False
            detail = {"ket": ket_state, "lhs_states": len(lhs), "rhs_states": len(rhs)}
            break
    return _report("multiple_commutation",
                   {"n": n, "blocks": [list(b) for b in blocks]},
                   passed, detail, t0)


# -- derivatives, counting, averages ---------------------------------------

def check_derivative_value(n: int, labels: Sequence[int],
                           convention: Optional[Convention] = None) -> CheckReport:
    """First derivative in the first layer variable against the symbolic
    derivative of the closed Schur form (distinct labels)."""
    t0 = time.perf_counter()
    m = len(labels)
    if any(labels[k] <= labels[k + 1] for k in range(m - 1)):
        raise ValueError("labels must be strictly decreasing")
    derivs = [1] + [0] * (m - 1)
    got = vev(scalar_spec(n, labels, derivs=derivs), convention)
    parts = tuple(labels[k] - m + (k + 1) for k in range(m))
    expected = schur_derivative_oracle(parts, m)
    passed = got == expected
    return _report("derivative_value", {"n": n, "labels": list(labels)},
                   passed, None if passed else _mismatch(got, expected), t0)


def check_counting(n: int, blocks: Sequence[Tuple[int, int]],
                   convention: Optional[Convention] = None) -> CheckReport:
    """Configuration count at all-ones equals the specialized Schur value;
    for multiplicity-free labels also the pairwise product
    prod (i_k - i_l)/(l - k)."""
    t0 = time.perf_counter()
    labels, var_groups, parts, _ = _block_layout(blocks)
    count = count_configurations(scalar_spec(n, labels), convention)
    expected = schur_at_one(parts, len(labels))
    passed = count == expected
    detail = None
    if passed and all(mult == 1 for _, mult in blocks):
        prod = Fraction(1)
        m = len(labels)
        for k in range(m):
            for l in range(k + 1, m):
                prod *= Fraction(labels[k] - labels[l], l - k)
        passed = prod == count
        if not passed:
            detail = {"count": count, "product": str(prod)}
    elif not passed:
        detail = {"count": count, "expected": expected}
    return _report("counting", {"n": n, "blocks": [list(b) for b in blocks]},
                   passed, detail, t0)


def check_average_ratio(n: int, ell: int,
                        convention: Optional[Convention] = None) -> CheckReport:
    """Label sequence n, n-1, ..., skipping n-ell, ..., 0: the plain value is
    prod z_k^{n-k} e_ell(z_1..z_n), the first-layer-derivative value is its
    z_1 derivative, and the ratio of the two at all-ones is
    n - 1 + C(n-1, ell-1)/C(n, ell) = n - 1 + ell/n.
    """
    t0 = time.perf_counter()
    if not 1 <= ell <= n - 1:
        raise ValueError("need 1 <= ell <= n-1")
    labels = [v for v in range(n, -1, -1) if v != n - ell]
    zv = [Var.layer(t) for t in range(1, n + 1)]
    stair = LaurentPoly.monomial({zv[k]: n - 1 - k for k in range(n - 1)}, 1)
    plain = vev(scalar_spec(n, labels), convention)
    hat = vev(scalar_spec(n, labels, derivs=[1] + [0] * (n - 1)), convention)
    e_full = elementary(ell, zv)
    closed_plain = stair * e_full
    closed_hat = ((stair * e_full).derivative(zv[0]))
    # spelled out: (n-1) z1^{n-2} prod_{k>=2} z_k^{n-k} e_ell(z)
    #              + prod z_k^{n-k} e_{ell-1}(z_2..z_n)
    split_hat = (stair * LaurentPoly.monomial({zv[0]: -1}, n - 1) * e_full
                 + stair * elementary(ell - 1, zv[1:]))
    passed = plain == closed_plain and hat == closed_hat and hat == split_hat
    detail = None
    if passed:
        got = Fraction(hat.at_one(), plain.at_one())
        expected = Fraction(n - 1) + Fraction(ell, n)
        passed = got == expected
        if not passed:
            detail = {"got": str(got), "expected": str(expected)}
        else:
            detail = {"ratio": str(got)}
    else:
        detail = _mismatch(hat, closed_hat)
    return _report("average_ratio", {"n": n, "ell": ell}, passed, detail, t0)


# -- per-site-variable layers and loop functions ---------------------------

def _col_var(t: int, p: int) -> Var:
    return Var.site(t, p, 1)


def check_inhomogeneous(n: int, sizes: Sequence[int],
                        convention: Optional[Convention] = None) -> CheckReport:
    """Stacks with independent site variables: the value is the inverse
    first-column prefactor times the block loop elementary function, and
    depends on first-column variables only."""
    t0 = time.perf_counter()
    if len(sizes) != n or any(s < 1 for s in sizes):
        raise ValueError("need n block sizes, all at least 1")
    labels: List[int] = []
    for i in range(1, n):
        labels.extend([n - i + 1] * sizes[i - 1])
    labels.extend([0] * sizes[-1])
    got = vev(inhomogeneous_spec(n, labels), convention)
    W = sum(sizes)
    pref = LaurentPoly.one()
    t = 0
    for i in range(1, n):
        for _ in range(sizes[i - 1]):
            t += 1
            pref = pref * LaurentPoly.var(_col_var(t, i)) ** -1
    loop = loop_elementary_general(list(sizes[:-1]),
                                   lambda i, k: _col_var(k, i), W)
    expected = pref * loop
    passed = got == expected
    detail = None
    if passed:
        col1 = {_col_var(t, i) for t in range(1, W + 1) for i in range(1, n)}
        extra = set(got.variables()) - col1
        passed = not extra
        if extra:
            detail = {"non_column_vars": sorted(v.name for v in extra)}
    else:
        detail = _mismatch(got, expected)
    return _report("inhomogeneous", {"n": n, "sizes": list(sizes)},
                   passed, detail, t0)


# -- one-column identities -------------------------------------------------

def _column_layers(k: int, n_layers: int, start_ell: int = 0):
    """Y_{start_ell}(z_1) Y_{start_ell+1}(z_2) ... capped at Y_k, width k."""
    out = []
    for t in range(1, n_layers + 1):
        ell = min(start_ell + t - 1, k)
        out.append(build_Y(ell, k, [_col_var(t, p) for p in range(1, k + 1)]))
    return out


def _selection_sum(width: int, n_layers: int, first_row: int = 1,
                   first_col: int = 1) -> LaurentPoly:
    """sum over first_col <= j_1 < ... < j_width <= n_layers of
    prod_s z_{j_s}^{(first_row + s - 1)}."""
    span = n_layers - first_col + 1
    if width > span:
        return LaurentPoly.zero()
    return loop_elementary_general(
        [1] * width,
        lambda i, k: _col_var(k + first_col - 1, i + first_row - 1),
        span)


def check_one_column(k: int, n_layers: int,
                     bra_ones: int = 0) -> CheckReport:
    """Width-k column with bra <1^bra_ones, 0^(k-bra_ones)|: the chain of
    column operators equals the inverse staircase prefactor times the loop
    elementary selection sum."""
    t0 = time.perf_counter()
    if not 0 <= bra_ones <= k:
        raise ValueError("bra occupancies out of range")
    ell = k - bra_ones
    if n_layers < ell:
        raise ValueError("need at least %d layers" % ell)
    layers = _column_layers(k, n_layers, start_ell=bra_ones)
    bra = (1,) * bra_ones + (0,) * ell
    got = strip_vev(layers, bra, (0,) * k)
    pref = LaurentPoly.one()
    for t in range(1, ell + 1):
        pref = pref * LaurentPoly.var(_col_var(t, bra_ones + t)) ** -1
    expected = pref * _selection_sum(k, n_layers)
    passed = got == expected
    name = "one_column" if bra_ones == 0 else "mixed_boundary_column"
    params = {"k": k, "n_layers": n_layers}
    if bra_ones:
        params["bra_ones"] = bra_ones
    return _report(name, params, passed,
                   None if passed else _mismatch(got, expected), t0)


def check_mixed_boundary_column(k_ones: int, ell: int, n_layers: int) -> CheckReport:
    """Mixed bra <1^k, 0^ell| on a width-(k+ell) column strip."""
    return check_one_column(k_ones + ell, n_layers, bra_ones=k_ones)


def check_column_reduction(n: int, extra_zero_layers: int = 0,
                           convention: Optional[Convention] = None) -> CheckReport:
    """The full-triangle per-site-variable stack with labels n, n-1, ..., 2,
    then 0 repeated, equals the width-(n-1) column chain."""
    t0 = time.perf_counter()
    labels = list(range(n, 1, -1)) + [0] * (extra_zero_layers + 1)
    lhs = vev(inhomogeneous_spec(n, labels), convention)
    m = n - 1
    layers = _column_layers(m, len(labels))
    rhs = strip_vev(layers, (0,) * m, (0,) * m)
    passed = lhs == rhs
    return _report("column_reduction",
                   {"n": n, "zero_layers": extra_zero_layers + 1},
                   passed, None if passed else _mismatch(lhs, rhs), t0)


def check_column_decomposition(k: int, n_layers: int) -> CheckReport:
    """Top-slot projector decomposition of the width-k column value.

    The value splits over the position where the top slot returns to empty:
    piece i keeps occupancy 1 in the top slot through the first i-1 gaps and
    0 afterwards.  The pieces must sum to the total, match their closed
    forms, and the occupancy-2 and -3 projections at the first gap vanish.
    """
    t0 = time.perf_counter()
    if k < 2:
        raise ValueError("decomposition needs width at least 2")
    layers = _column_layers(k, n_layers)
    bra = ket = (0,) * k
    total = strip_vev(layers, bra, ket)
    passed = True
    detail: Dict[str, str] = {}

    pieces = []
    for i in range(1, n_layers + 1):
        projections = {g: (0, 1 if g < i else 0) for g in range(1, n_layers)}
        pieces.append(strip_vev(layers, bra, ket, projections))
    acc = LaurentPoly.zero()
    for p in pieces:
        acc = acc + p
    if acc != total:
        passed = False
        detail = _mismatch(acc, total)

    # closed forms: piece 1 skips the first layer entirely; piece i >= 2
    # routes the top slot through layer i
    if passed:
        z1 = LaurentPoly.var(_col_var(1, 1))
        base_pref = LaurentPoly.one()
        for p in range(1, k + 1):
            base_pref = base_pref * LaurentPoly.var(_col_var(p, p)) ** -1
        first_pref = LaurentPoly.one()
        for p in range(2, k + 1):
            first_pref = first_pref * LaurentPoly.var(_col_var(p, p)) ** -1
        expected_first = first_pref * _selection_sum(k - 1, n_layers,
                                                     first_row=2, first_col=2)
        if pieces[0] != expected_first:
            passed = False
            detail = {"piece": "1", **_mismatch(pieces[0], expected_first)}
    if passed:
        for i in range(2, n_layers + 1):
            zi = LaurentPoly.var(_col_var(i, 1))
            expected_i = (base_pref * zi
                          * _selection_sum(k - 1, n_layers,
                                           first_row=2, first_col=i + 1))
            if pieces[i - 1] != expected_i:
                passed = False
                detail = {"piece": str(i), **_mismatch(pieces[i - 1], expected_i)}
                break

    if passed:
        for m_ins in (2, 3):
            stray = strip_vev(layers, bra, ket, {1: (0, m_ins)})
            if not stray.is_zero():
                passed = False
                detail = {"projection": str(m_ins), "value": str(stray)}
                break
    return _report("column_decomposition", {"k": k, "n_layers": n_layers},
                   passed, detail if detail else None, t0)


# -- oracle cross-checks ---------------------------------------------------

def _random_partition(rng: random.Random, max_weight: int = 8,
                      max_parts: int = 4) -> Tuple[int, ...]:
    parts: List[int] = []
    budget = rng.randint(0, max_weight)
    while budget > 0 and len(parts) < max_parts:
        p = rng.randint(1, budget)
        parts.append(p)
        budget -= p
    parts.sort(reverse=True)
    return tuple(parts)


def check_schur_oracles(samples: int = 50, seed: int = 20260823) -> CheckReport:
    """Bialternant, determinant and redistribution forms of the Schur
    polynomial agree on random partitions."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    passed = True
    detail = None
    done = 0
    while done < samples:
        parts = _random_partition(rng)
        nv = rng.randint(max(1, len(parts)), 4)
        zvars = [Var.layer(t) for t in range(1, nv + 1)]
        jt = schur_jacobi_trudi(parts, zvars)
        bi = schur_bialternant(parts, zvars)
        lam = list(parts) + [0] * (nv - len(parts))
        blocks = [(value, len(list(grp)))
                  for value, grp in itertools.groupby(lam)]
        groups = []
        t = 0
        for _, mult in blocks:
            groups.append(zvars[t:t + mult])
            t += mult
        pr = schur_pragacz(blocks, groups)
        if not (jt == bi == pr):
            passed = False
            detail = {"parts": list(parts), "vars": nv}
            break
        done += 1
    return _report("schur_oracles", {"samples": samples, "seed": seed},
                   passed, detail, t0)


def check_loop_recursion(samples: int = 50, seed: int = 977) -> CheckReport:
    """Loop elementary functions satisfy the two-term column recursion
    E_r(cols 1..c) = E_r(cols 1..c-1) + E_{r-1}(cols 1..c-1) * z_c^{(r)}."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    passed = True
    detail = None
    var_of = lambda i, k: Var.site(k, i, 1)
    for _ in range(samples):
        c = rng.randint(1, 6)
        r = rng.randint(1, c)
        full = loop_elementary(r, var_of, c)
        drop = (loop_elementary(r, var_of, c - 1) if r <= c - 1
                else LaurentPoly.zero())
        shrink = (loop_elementary(r - 1, var_of, c - 1) if r >= 1
                  else LaurentPoly.zero())
        expected = drop + shrink * LaurentPoly.var(var_of(r, c))
        if full != expected:
            passed = False
            detail = {"rows": r, "cols": c}
            break
    return _report("loop_recursion", {"samples": samples, "seed": seed},
                   passed, detail, t0)


def check_deformed_limit() -> CheckReport:
    """Entrywise q->0 limit of the deformed tensors equals the undeformed
    z-dressed tensor, including the operator relations at small cutoffs."""
    t0 = time.perf_counter()
    z = Var.layer(1)
    lz = local_tensor(TensorKind.LZ, z)
    passed = q0_limit(TensorKind.LQZ, z) == lz and q0_limit(TensorKind.MQZ, z) == lz
    detail = None
    if passed:
        for cutoff in (3, 4):
            a = check_q0_relations(cutoff)
            b = check_qosc_relations(cutoff)
            if not (a["passed"] and b["passed"]):
                passed = False
                detail = {"cutoff": cutoff}
                break
    return _report("deformed_limit", {}, passed, detail, t0)


def check_tetrahedron(cutoff: int = 4) -> CheckReport:
    t0 = time.perf_counter()
    result = tetrahedron_check(cutoff)
    return _report("tetrahedron", {"cutoff": cutoff}, result["passed"],
                   None if result["passed"] else result, t0)


def check_convention() -> CheckReport:
    from .network import resolve_convention
    t0 = time.perf_counter()
    try:
        conv = resolve_convention(4)
    except Exception as exc:
        return _report("convention", {}, False, {"error": str(exc)}, t0)
    r1 = check_increasing_labels(4, (1, 2, 3, 3, 4), conv)
    spec = scalar_spec(4, (3, 3, 1))
    got = vev(spec, conv)
    z = [Var.layer(t) for t in (1, 2, 3)]
    expected = (LaurentPoly.monomial({z[0]: 3, z[1]: 2, z[2]: 2}, 1)
                + LaurentPoly.monomial({z[0]: 3, z[1]: 3, z[2]: 1}, 1)
                + LaurentPoly.monomial({z[0]: 2, z[1]: 3, z[2]: 2}, 1))
    ok2 = got == expected and count_configurations(spec, conv) == 3
    passed = r1.passed and ok2
    return _report("convention", {"resolved": str(conv)}, passed,
                   None if passed else _mismatch(got, expected), t0)


# -- instance grids --------------------------------------------------------

def schur_grid(max_vars: int = 5, max_blocks: int = 4, max_mult: int = 2):
    """(n, blocks) instances: strictly decreasing labels in 0..n, block
    multiplicities up to max_mult, total variables up to max_vars."""
    for n in (2, 3, 4):
        for m in range(1, max_blocks + 1):
            for values in itertools.combinations(range(n, -1, -1), m):
                for mults in itertools.product(range(1, max_mult + 1), repeat=m):
                    if sum(mults) > max_vars:
                        continue
                    yield n, tuple(zip(values, mults))


def increasing_grid(max_len: int = 5):
    for n in (2, 3, 4):
        for m in range(1, max_len + 1):
            for labels in itertools.combinations_with_replacement(range(n + 1), m):
                yield n, labels


def zf_grid():
    for n in (2, 3, 4):
        for i in range(n + 1):
            for j in range(n + 1):
                yield n, (i, j)


def inhomogeneous_grid():
    for n in (3, 4):
        for m_last in (1, 2, 3):
            yield n, tuple([1] * (n - 1) + [m_last])
    yield 3, (2, 1, 1)
    yield 3, (1, 2, 2)


def column_grid():
    # width, layers for the all-zero bra
    for k in (1, 2, 3):
        for n_layers in range(k, 6):
            yield "one_column", (k, n_layers)
    # mixed bra: k ones then ell zeros, width k + ell
    for k_ones in (1, 2, 3, 4):
        for ell in range(0, 4):
            if not 1 <= k_ones + ell <= 4:
                continue
            for n_layers in range(ell, 6):
                yield "mixed", (k_ones, ell, n_layers)
    for n in (3, 4):
        for extra in (0, 1):
            yield "reduction", (n, extra)
    for k in (2, 3):
        for n_layers in (3, 4):
            if n_layers >= k:
                yield "decomposition", (k, n_layers)


# -- battery ---------------------------------------------------------------

GROUPS = ("convention", "tetrahedron", "zf", "schur", "hat",
          "inhomogeneous", "columns", "oracles")


def run_battery(selection: str = "all") -> List[CheckReport]:
    """Run the selected check group (or all) and return the reports."""
    if selection != "all" and selection not in GROUPS:
        raise ValueError("unknown group %r" % selection)
    wanted = GROUPS if selection == "all" else (selection,)
    default_convention()
    reports: List[CheckReport] = []
    for group in wanted:
        if group == "convention":
            reports.append(check_convention())
        elif group == "tetrahedron":
            reports.append(check_tetrahedron(4))
        elif group == "zf":
            for n, pair in zf_grid():
                reports.append(check_zf(n, pair, cutoff=4))
        elif group == "schur":
            for n, blocks in schur_grid():
                reports.append(check_schur_correspondence(n, blocks))
                reports.append(check_counting(n, blocks))
            for n, labels in increasing_grid():
                reports.append(check_increasing_labels(n, labels))
            reports.append(check_multiple_commutation(4, ((3, 2), (1, 1))))
            reports.append(check_multiple_commutation(3, ((2, 1), (1, 1), (0, 1))))
        elif group == "hat":
            for labels in itertools.combinations(range(4, -1, -1), 4):
                reports.append(check_derivative_value(4, labels))
            for ell in (1, 2, 3):
                reports.append(check_average_ratio(4, ell))
        elif group == "inhomogeneous":
            for n, sizes in inhomogeneous_grid():
                reports.append(check_inhomogeneous(n, sizes))
        elif group == "columns":
            for kind, args in column_grid():
                if kind == "one_column":
                    reports.append(check_one_column(*args))
                elif kind == "mixed":
                    reports.append(check_mixed_boundary_column(*args))
                elif kind == "reduction":
                    reports.append(check_column_reduction(*args))
                else:
                    reports.append(check_column_decomposition(*args))
        elif group == "oracles":
            reports.append(check_schur_oracles())
            reports.append(check_loop_recursion())
            reports.append(check_deformed_limit())
    return reports
