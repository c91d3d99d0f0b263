"""Operator-valued vertex weights and the tetrahedron-equation verifier.

A local tensor is a 2x2x2x2 table: subscripts (i, j) are the two incoming
edge colors, superscripts (a, b) the outgoing ones, and each nonzero entry is
a Fock-space operator dressed with a monomial prefactor.  Four kinds exist:

* R0    — undeformed, no spectral variable (identities, raise, lower, project);
* LZ    — same entries with spectral weights z / z^-1 on raise / lower;
* LQZ   — the q-oscillator version (raise/lower/diagonal, plus a -q·k entry);
* MQZ   — LQZ with the deformation parameter negated, q -> -q.

The negation of MQZ lives in the application step, not the stored table:
`apply_entry` substitutes q -> -q into the combined coefficient, which also
negates the q's produced by the operator action itself.

Every nonzero entry conserves color: i + j = a + b.

The tetrahedron-equation check composes four such tensors on four color lines
and two Fock lines, in both orders, and compares the resulting maps sector by
sector with exact Laurent coefficients.
"""

from __future__ import annotations

from enum import Enum
from itertools import product
from typing import Dict, List, Optional, Tuple, Union

from .fock import LocalOp, apply_local
from .poly import LaurentPoly, Var


class MissingVariable(Exception):
    """A tensor kind that needs a spectral variable was built without one."""


class CutoffTooSmall(Exception):
    """The requested check needs a larger truncation to be exact."""


class TensorKind(Enum):
    R0 = "r0"
    LZ = "lz"
    LQZ = "lqz"
    MQZ = "mqz"


Entry = Tuple[LaurentPoly, LocalOp]
EntryTable = Dict[Tuple[int, int, int, int], Entry]

_Q = Var.q()
_MINUS_Q = LaurentPoly.var(_Q) * -1


def _as_invertible_poly(z: Union[Var, LaurentPoly]) -> LaurentPoly:
    if isinstance(z, Var):
        return LaurentPoly.var(z)
    return z


def local_tensor(kind: TensorKind, z: Optional[Union[Var, LaurentPoly]] = None) -> EntryTable:
    """Entry table for one tensor kind.

    `z` (a variable or an invertible Laurent monomial) is required for every
    kind except R0; MissingVariable otherwise.  For MQZ the returned
    prefactors are written in the un-negated deformation variable; the
    negation is applied by `apply_entry`.
    """
    one = LaurentPoly.one()
    if kind is TensorKind.R0:
        return {
            (0, 0, 0, 0): (one, LocalOp.ID_B),
            (1, 1, 1, 1): (one, LocalOp.ID_R),
            (1, 0, 0, 1): (one, LocalOp.B_PLUS),
            (0, 1, 1, 0): (one, LocalOp.B_MINUS),
            (0, 1, 0, 1): (one, LocalOp.T_PROJ),
        }
    if z is None:
        raise MissingVariable("tensor kind %s needs a spectral variable" % kind.value)
    zp = _as_invertible_poly(z)
    zm = zp ** -1
    if kind is TensorKind.LZ:
        return {
            (0, 0, 0, 0): (one, LocalOp.ID_B),
            (1, 1, 1, 1): (one, LocalOp.ID_R),
            (1, 0, 0, 1): (zp, LocalOp.B_PLUS),
            (0, 1, 1, 0): (zm, LocalOp.B_MINUS),
            (0, 1, 0, 1): (one, LocalOp.T_PROJ),
        }
    if kind in (TensorKind.LQZ, TensorKind.MQZ):
        return {
            (0, 0, 0, 0): (one, LocalOp.ID_B),
            (1, 1, 1, 1): (one, LocalOp.ID_R),
            (1, 0, 0, 1): (zp, LocalOp.A_PLUS),
            (0, 1, 1, 0): (zm, LocalOp.A_MINUS),
            (0, 1, 0, 1): (one, LocalOp.K),
            (1, 0, 1, 0): (_MINUS_Q, LocalOp.K),
        }
    raise ValueError("unknown tensor kind %r" % (kind,))


def kind_negates_q(kind: TensorKind) -> bool:
    return kind is TensorKind.MQZ


def apply_entry(kind: TensorKind, entry: Entry, m: int, cutoff: int) -> List[Tuple[int, LaurentPoly]]:
    """Act with one tensor entry on Fock occupancy m.

    Returns (occupancy, coefficient) pairs with the prefactor folded in and,
    for the negated kind, q -> -q applied to the combined coefficient.
    """
    prefactor, op = entry
    out = []
    for m2, c in apply_local(op, m, cutoff):
        coeff = prefactor * c
        if kind_negates_q(kind):
            coeff = coeff.substitute({_Q: _MINUS_Q})
        if not coeff.is_zero():
            out.append((m2, coeff))
    return out


def q0_limit(kind: TensorKind, z: Union[Var, LaurentPoly]) -> EntryTable:
    """Entrywise q -> 0 limit of a deformed tensor (LQZ or MQZ).

    Prefactors are evaluated at q = 0 (entries whose prefactor vanishes are
    dropped) and operators are mapped through their undeformed limits.
    """
    from .fock import q_to_zero

    if kind not in (TensorKind.LQZ, TensorKind.MQZ):
        raise ValueError("q0_limit applies to the deformed kinds only")
    table = local_tensor(kind, z)
    out: EntryTable = {}
    for key, (prefactor, op) in table.items():
        if kind_negates_q(kind):
            prefactor = prefactor.substitute({_Q: _MINUS_Q})
        at0 = prefactor.substitute({_Q: 0})
        if at0.is_zero():
            continue
        out[key] = (at0, q_to_zero(op))
    return out


# -- tetrahedron equation --------------------------------------------------

# A factor acts on two of the four color lines (first carries i/a, second
# carries j/b) and one of the two Fock lines.
Factor = Tuple[TensorKind, int, int, int, LaurentPoly]

State = Tuple[int, int, int, int, int, int]  # four colors then two occupancies


def _apply_factor(states: Dict[State, LaurentPoly], factor: Factor, space: int) -> Dict[State, LaurentPoly]:
    kind, line_a, line_b, fock, z = factor
    table = local_tensor(kind, z)
    by_input: Dict[Tuple[int, int], List[Tuple[int, int, Entry]]] = {}
    for (i, j, a, b), entry in table.items():
        by_input.setdefault((i, j), []).append((a, b, entry))
    fock_pos = 4 + (fock - 5)
    out: Dict[State, LaurentPoly] = {}
    for state, coeff in states.items():
        i, j = state[line_a - 1], state[line_b - 1]
        m = state[fock_pos]
        for a, b, entry in by_input.get((i, j), ()):
            for m2, c in apply_entry(kind, entry, m, space):
                nxt = list(state)
                nxt[line_a - 1] = a
                nxt[line_b - 1] = b
                nxt[fock_pos] = m2
                key = tuple(nxt)
                acc = out.get(key, LaurentPoly.zero()) + coeff * c
                if acc.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = acc
    return out


def tetrahedron_check(cutoff: int, zvars: Optional[Tuple[Var, Var, Var, Var]] = None) -> dict:
    """Verify the tetrahedron equation

        M_126(z1/z2) M_346(z3/z4) L_135(z1/z3) L_245(z2/z4)
          = L_245(z2/z4) L_135(z1/z3) M_346(z3/z4) M_126(z1/z2)

    on four color lines and two Fock lines, composing right to left, for all
    input sectors with Fock occupancies <= cutoff-2.  Each Fock line is hit by
    exactly two factors, so two levels of headroom make the truncated check
    exact; cutoff < 3 raises CutoffTooSmall.
    """
    if cutoff < 3:
        raise CutoffTooSmall("tetrahedron check needs cutoff >= 3")
    if zvars is None:
        zvars = tuple(Var.layer(i) for i in (1, 2, 3, 4))

    def ratio(i, j):
        return LaurentPoly.monomial({zvars[i - 1]: 1, zvars[j - 1]: -1})

    m126 = (TensorKind.MQZ, 1, 2, 6, ratio(1, 2))
    m346 = (TensorKind.MQZ, 3, 4, 6, ratio(3, 4))
    l135 = (TensorKind.LQZ, 1, 3, 5, ratio(1, 3))
    l245 = (TensorKind.LQZ, 2, 4, 5, ratio(2, 4))
    lhs_order = [l245, l135, m346, m126]  # application order (rightmost first)
    rhs_order = [m126, m346, l135, l245]

    space = cutoff + 1  # occupancies 0..cutoff reachable from cutoff-2 inputs
    sectors = 0
    mismatches = []
    for colors in product((0, 1), repeat=4):
        for m5 in range(cutoff - 1):
            for m6 in range(cutoff - 1):
                start: Dict[State, LaurentPoly] = {colors + (m5, m6): LaurentPoly.one()}
                lhs = start
                for f in lhs_order:
                    lhs = _apply_factor(lhs, f, space)
                rhs = start
                for f in rhs_order:
                    rhs = _apply_factor(rhs, f, space)
                sectors += 1
                if lhs != rhs:
                    mismatches.append({"input": colors + (m5, m6)})
    return {
        "cutoff": cutoff,
        "sectors": sectors,
        "mismatches": mismatches,
        "passed": not mismatches,
    }
