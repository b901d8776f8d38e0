"""Y-system lattice: relation generation (direct and via transposed coupling
exponents), solution checking, Cauchy propagation, the value-level map from
T-solutions to Y-solutions, and the converse reconstruction of a T-solution
from an unrestricted Y-solution.

Conventions, in scaled coordinates (u = k/t): a relation centered at (a, m, k)
reads

    Y(a,m,k-d_a) * Y(a,m,k+d_a) = N / D,
    N = prod of (1 + Y(b, ., .)) coupling factors,
    D = (1 + Y(a,m-1,k)^-1) * (1 + Y(a,m+1,k)^-1),

where denominator factors at level 0, and at level t_a*L in the restricted
system, are dropped (the inverse of those variables is treated as 0), and a
d_a = 1 coupling factor whose neighbor level m/d_b is not integral is 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from .cartan import CartanMatrix, is_tamely_laced
from .errors import (
    LevelOutOfRange,
    MissingValue,
    NotTamelyLaced,
    WindowTooNarrow,
    ZeroDivisor,
)
from .exactmath import evaluate, inverse, one_plus, random_nonzero_rational
from .tsystem import (
    Factor,
    LatticeVar,
    SolvePolicy,
    SystemSpec,
    ValueTable,
    _check_window,
    _initial_slab_vars,
    _sample_assignments,
    g_exponents,
    m_term,
    _boundary_filter,
)


@dataclass(frozen=True)
class YRelation:
    """One instantiated Y-system equation.  numerator lists (1+Y) factors,
    denominator lists (1+Y^-1) factors; boundary factors are already gone."""

    center: LatticeVar
    lhs: Tuple[LatticeVar, LatticeVar]
    numerator: Tuple[Factor, ...]
    denominator: Tuple[Factor, ...]

    def variables(self) -> Iterable[LatticeVar]:
        yield from self.lhs
        for var, _ in self.numerator:
            yield var
        for var, _ in self.denominator:
            yield var

    def to_json(self) -> dict:
        def fx(factors):
            return [[v.a + 1, v.m, v.k, e] for v, e in factors]

        c = self.center
        return {
            "center": {"a": c.a + 1, "m": c.m, "k": c.k},
            "lhs": [[v.a + 1, v.m, v.k] for v in self.lhs],
            "numerator": fx(self.numerator),
            "denominator": fx(self.denominator),
        }


def z_term(cm: CartanMatrix, b: int, p: int, m: int, k: int) -> List[Factor]:
    """The p^2 coupling factors (1 + Y(b, pm+j, k + p - |j| + 1 - 2k')) for
    j = -p+1..p-1 and k' = 1..p-|j|; level-0 factors (possible only at m = 0)
    are dropped."""
    out = []
    for j in range(-p + 1, p):
        width = p - abs(j)
        level = p * m + j
        if level <= 0:
            continue
        for kp in range(1, width + 1):
            out.append((LatticeVar(b, level, k + width + 1 - 2 * kp), 1))
    return out


def y_relation(sys: SystemSpec, a: int, m: int, k: int) -> YRelation:
    """Relation centered at (a, m, k) with the boundary conventions applied."""
    top = sys.max_center_m(a, "Y")
    if m < 1 or (top is not None and m > top):
        raise LevelOutOfRange(
            f"center level m={m} outside 1..{top} for node {a + 1}")
    cm = sys.cm
    da = cm.d[a]
    numerator: List[Factor] = []
    for b in cm.neighbors(a):
        db = cm.d[b]
        if da > 1:
            numerator.extend(z_term(cm, b, da // db, m, k))
        elif m % db == 0:
            numerator.append((LatticeVar(b, m // db, k), 1))
    denominator = _boundary_filter(
        sys, ((LatticeVar(a, m - 1, k), 1), (LatticeVar(a, m + 1, k), 1)))
    agg_n: Dict[LatticeVar, int] = {}
    for var, exp in numerator:
        agg_n[var] = agg_n.get(var, 0) + exp
    return YRelation(LatticeVar(a, m, k), (LatticeVar(a, m, k - da),
                                           LatticeVar(a, m, k + da)),
                     tuple(sorted(agg_n.items())), denominator)


def y_relation_via_transpose(cm: CartanMatrix, a: int, m: int, k: int) -> YRelation:
    """Numerator rebuilt from the transposed coupling exponents: the factor
    (1+Y(b,K,v)) enters with the exponent that T(a,m,k) carries in the
    coupling product of the T-relation centered at (b, K, v).  Must agree
    with y_relation for every tamely laced matrix."""
    if not is_tamely_laced(cm):
        raise NotTamelyLaced("transposed relation requires a tamely laced matrix")
    da = cm.d[a]
    target = LatticeVar(a, m, k)
    agg: Dict[LatticeVar, int] = {}
    reach = max(da - 1, 0)
    for b in cm.neighbors(a):
        # centers on a heavier neighbor sit at level m/d_b, centers on a
        # lighter one anywhere in [d_a(m-1)+1, d_a m + d_a - 1]
        for level in range(1, da * (m + 1) + 1):
            for v in range(k - reach, k + reach + 1):
                exp = g_exponents(cm, b, level, v).get(target, 0)
                if exp:
                    var = LatticeVar(b, level, v)
                    agg[var] = agg.get(var, 0) + exp
    sys = SystemSpec(cm, None, restricted=False)
    denominator = _boundary_filter(
        sys, ((LatticeVar(a, m - 1, k), 1), (LatticeVar(a, m + 1, k), 1)))
    return YRelation(target, (LatticeVar(a, m, k - da), LatticeVar(a, m, k + da)),
                     tuple(sorted(agg.items())), denominator)


def enumerate_y_relations(sys: SystemSpec, window) -> List[YRelation]:
    from .tsystem import enumerate_relations

    return enumerate_relations(sys, window, kind="Y", relation_fn=y_relation)


# ---------------------------------------------------------------------------
# checking
# ---------------------------------------------------------------------------


def _y_rhs(values, rel: YRelation):
    num = Fraction(1)
    for var, exp in rel.numerator:
        num = num * one_plus(values[var]) ** exp
    den = Fraction(1)
    for var, exp in rel.denominator:
        den = den * one_plus(inverse(values[var])) ** exp
    return num, den


def check_y_solution(table: ValueTable, relations: Iterable[YRelation],
                     mode: str = "exact", rng=None, samples: int = 3) -> List[dict]:
    """Violation report for a Y-value table; empty list means pass."""
    violations = []
    assignments = None
    if mode == "numeric":
        assignments = _sample_assignments(table.values.values(), rng, samples)
    for rel in relations:
        for var in rel.variables():
            table.get(var)
        lhs = table.get(rel.lhs[0]) * table.get(rel.lhs[1])
        num, den = _y_rhs(table.values, rel)
        if mode == "exact":
            ok = lhs * den == num
        else:
            ok = all(evaluate(lhs, at) * evaluate(den, at) == evaluate(num, at)
                     for at in assignments)
        if not ok:
            violations.append({
                "relation": rel.center.label("Y"),
                "lhs": str(lhs),
                "rhs": f"({num}) / ({den})",
            })
    return violations


# ---------------------------------------------------------------------------
# propagation
# ---------------------------------------------------------------------------


def propagate_y(sys: SystemSpec, window, initial: Optional[dict] = None,
                rng=None, policy: SolvePolicy = SolvePolicy()) -> ValueTable:
    """Fill the window from an initial slab of width 2*d_a per node.

    Every right-hand side factor of a Y-relation sits strictly below the
    slice being solved, so slice-major order works for every tamely laced
    matrix, restricted or capped unrestricted.  In the unrestricted case the
    top level t_a*level - 1 of each node has no relation inside the cap and
    is extended with sampled values instead; relations centered below it hold
    exactly either way.
    """
    if sys.level is None:
        raise LevelOutOfRange("propagation needs a level or an m-cap")
    lo, hi = _check_window(window)
    initial = dict(initial or {})
    slab = _initial_slab_vars(sys, (lo, hi), "Y")

    last_error = None
    for _ in range(policy.max_retries + 1):
        values = {}
        sampled = False
        for var in slab:
            given = initial.get(var)
            if given is None:
                sampled = True
                value = random_nonzero_rational(rng, policy.bits)
            else:
                value = given
            if value == 0:
                raise ZeroDivisor(f"initial value for {var.label('Y')} is zero")
            values[var] = value
        try:
            for k in range(lo, hi + 1):
                for a in range(sys.cm.r):
                    da = sys.cm.d[a]
                    if k < lo + 2 * da:
                        continue
                    backed = sys.max_center_m(a, "Y")
                    for m in range(1, sys.max_m_y(a) + 1):
                        var = LatticeVar(a, m, k)
                        if m > backed:
                            sampled = True
                            values[var] = random_nonzero_rational(rng, policy.bits)
                            continue
                        rel = y_relation(sys, a, m, k - da)
                        num, den = _y_rhs(values, rel)
                        if den == 0 or num == 0:
                            raise ZeroDivisor(f"degenerate side at {rel.center.label('Y')}")
                        values[var] = num / (den * values[rel.lhs[0]])
            return ValueTable("Y", sys, (lo, hi), values)
        except ZeroDivisor as err:
            last_error = err
            if rng is None or not sampled:
                raise
    raise ZeroDivisor(f"retries exhausted: {last_error}")


# ---------------------------------------------------------------------------
# T -> Y
# ---------------------------------------------------------------------------


def _t_value(table: ValueTable, var: LatticeVar):
    """Table value with the structural units filled in."""
    if var.m == 0:
        return Fraction(1)
    top = table.system.boundary_m(var.a)
    if top is not None and var.m == top:
        return Fraction(1)
    return table.values.get(var)


def _coupling_value(table: ValueTable, a: int, m: int, k: int):
    """Value of the coupling product of the relation centered at (a, m, k),
    or None where the table does not cover it."""
    result = Fraction(1)
    for var, exp in m_term(table.system.cm, a, m, k):
        val = _t_value(table, var)
        if val is None:
            return None
        result = result * val ** exp
    return result


def t_to_y(t_table: ValueTable):
    """Map a T-solution to the Y-family Y = M / (T_{m-1} T_{m+1}) on the
    sub-window where the formula's factors exist.

    Returns (y_table, violations).  The violations cover the two companion
    identities

        1 + Y(a,m,k)      = T(a,m,k-d) T(a,m,k+d) / (T_{m-1} T_{m+1})
        1 + Y(a,m,k)^-1   = T(a,m,k-d) T(a,m,k+d) / M

    wherever their factors exist and, for restricted systems, the boundary
    quantity M(a, t_a*L, k), which must collapse to exactly 1.
    """
    sys = t_table.system
    cm = sys.cm
    values: Dict[LatticeVar, Fraction] = {}
    violations: List[dict] = []
    lo, hi = t_table.window
    for a in range(cm.r):
        top = sys.max_m_y(a)
        if top is None:
            top = max((v.m for v in t_table.values if v.a == a), default=0)
        da = cm.d[a]
        for m in range(1, top + 1):
            for k in range(lo, hi + 1):
                below = _t_value(t_table, LatticeVar(a, m - 1, k))
                above = _t_value(t_table, LatticeVar(a, m + 1, k))
                coupling = _coupling_value(t_table, a, m, k)
                if below is None or above is None or coupling is None:
                    continue
                if below * above == 0:
                    raise ZeroDivisor(f"vanishing T pair under Y[a={a + 1},m={m},k={k}]")
                var = LatticeVar(a, m, k)
                y = coupling / (below * above)
                values[var] = y
                left = _t_value(t_table, LatticeVar(a, m, k - da))
                right = _t_value(t_table, LatticeVar(a, m, k + da))
                if left is None or right is None:
                    continue
                shifted = left * right
                if 1 + y != shifted / (below * above):
                    violations.append({"relation": f"one-plus {var.label('Y')}",
                                       "lhs": str(1 + y),
                                       "rhs": str(shifted / (below * above))})
                if coupling == 0 or y == 0:
                    violations.append({"relation": f"one-plus-inverse {var.label('Y')}",
                                       "lhs": "0", "rhs": "unit"})
                elif 1 + 1 / y != shifted / coupling:
                    violations.append({"relation": f"one-plus-inverse {var.label('Y')}",
                                       "lhs": str(1 + 1 / y),
                                       "rhs": str(shifted / coupling)})
    if sys.restricted:
        for a in range(cm.r):
            for k in range(lo, hi + 1):
                leftover = _boundary_filter(sys, m_term(cm, a, sys.boundary_m(a), k))
                if leftover:
                    violations.append({
                        "relation": f"boundary quantity at node {a + 1}, k={k}",
                        "lhs": "non-unit factors remain",
                        "rhs": "1",
                    })
    y_table = ValueTable("Y", sys, t_table.window, values)
    return y_table, violations


# ---------------------------------------------------------------------------
# Y -> T reconstruction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FreeChoicePolicy:
    kind: str = "random"  # "random" or "unit"
    max_retries: int = 16
    bits: int = 8


def _reconstruction_region(sys: SystemSpec, y_table: ValueTable, center: int,
                           caps: Dict[int, int]) -> Dict[Tuple[int, int], set]:
    """Fixpoint of the reachable region of the reconstruction schedule:
    per (node, level), the set of k for which the value is determined by the
    free slab, the level-1 extension rule, and the level-raising rule."""
    cm = sys.cm
    det: Dict[Tuple[int, int], set] = {}
    for a in range(cm.r):
        det[(a, 1)] = set(range(center - cm.d[a], center + cm.d[a]))
        for m in range(2, caps[a] + 1):
            det[(a, m)] = set()
    y_vars = y_table.values
    lo, hi = y_table.window
    span = range(lo - max(cm.d), hi + max(cm.d) + 1)

    changed = True
    while changed:
        changed = False
        for a in range(cm.r):
            da = cm.d[a]
            for k in span:
                if k in det[(a, 1)]:
                    continue
                kc = k - da if k >= center + da else k + da
                far = k - 2 * da if k >= center + da else k + 2 * da
                if LatticeVar(a, 1, kc) not in y_vars or far not in det[(a, 1)]:
                    continue
                if all(v.k in det.get((v.a, v.m), ()) for v, _ in m_term(cm, a, 1, kc)):
                    det[(a, 1)].add(k)
                    changed = True
            for m in range(2, caps[a] + 1):
                for k in span:
                    if k in det[(a, m)]:
                        continue
                    if LatticeVar(a, m - 1, k) not in y_vars:
                        continue
                    if (k - da) in det[(a, m - 1)] and (k + da) in det[(a, m - 1)] \
                            and (m == 2 or k in det[(a, m - 2)]):
                        det[(a, m)].add(k)
                        changed = True
    return det


def y_to_t(y_table: ValueTable, rng=None,
           policy: FreeChoicePolicy = FreeChoicePolicy(),
           center: Optional[int] = None) -> ValueTable:
    """Reconstruct an unrestricted T-solution whose image under t_to_y is the
    given Y-solution.

    Free data: T(a, 1, k) on the 2*d_a slices around the chosen center slice.
    Level 1 is extended outward (the extension of a node consumes the d_a-fold
    levels of its lighter neighbors, which the level-raising rule supplies in
    the interleaved order the dependencies dictate); levels m >= 2 come from
    the level-raising rule.  The exact determined sub-window is computed
    first; the returned table covers it and nothing else.
    """
    sys = y_table.system
    if sys.restricted:
        raise LevelOutOfRange("reconstruction applies to unrestricted Y-solutions only")
    cm = sys.cm
    lo, hi = y_table.window
    if center is None:
        center = (lo + hi) // 2
    for a in range(cm.r):
        probe = LatticeVar(a, 1, center)
        if probe not in y_table.values:
            raise WindowTooNarrow(probe.label("Y"))
    caps = {a: (sys.max_m_y(a) + 1 if sys.level is not None else
                max(cm.d) + 1) for a in range(cm.r)}
    det = _reconstruction_region(sys, y_table, center, caps)

    last_error = None
    for _ in range(policy.max_retries + 1):
        values: Dict[LatticeVar, Fraction] = {}
        for a in range(cm.r):
            for k in range(center - cm.d[a], center + cm.d[a]):
                free = (Fraction(1) if policy.kind == "unit"
                        else random_nonzero_rational(rng, policy.bits))
                values[LatticeVar(a, 1, k)] = free

        def t_at(var: LatticeVar) -> Fraction:
            if var.m == 0:
                return Fraction(1)
            got = values.get(var)
            if got is not None:
                return got
            a, m, k = var
            if k not in det.get((a, m), ()):  # outside the determined region
                raise MissingValue(var.label())
            da = cm.d[a]
            if m == 1:
                sign = 1 if k >= center + cm.d[a] else -1
                kc = k - sign * da
                y1 = y_table.values[LatticeVar(a, 1, kc)]
                coupling = Fraction(1)
                for v, e in m_term(cm, a, 1, kc):
                    coupling = coupling * t_at(v) ** e
                opposite = t_at(LatticeVar(a, 1, k - 2 * sign * da))
                if y1 == 0 or opposite == 0:
                    raise ZeroDivisor(f"degenerate extension at {var.label()}")
                value = (1 + 1 / y1) * coupling / opposite
            else:
                ym = y_table.values[LatticeVar(a, m - 1, k)]
                if ym == -1:
                    raise ZeroDivisor(f"1 + Y vanishes under {var.label()}")
                value = (t_at(LatticeVar(a, m - 1, k - da))
                         * t_at(LatticeVar(a, m - 1, k + da))
                         / ((1 + ym) * t_at(LatticeVar(a, m - 2, k))))
            if value == 0:
                raise ZeroDivisor(f"solved zero at {var.label()}")
            values[var] = value
            return value

        try:
            for (a, m), ks in sorted(det.items()):
                for k in sorted(ks):
                    t_at(LatticeVar(a, m, k))
            ks = [v.k for v in values]
            meta = {"free_choice": policy.kind, "center": center}
            return ValueTable("T", sys, (min(ks), max(ks)), values, meta)
        except ZeroDivisor as err:
            last_error = err
            if policy.kind == "unit" or rng is None:
                raise
    raise ZeroDivisor(f"retries exhausted: {last_error}")


# ---------------------------------------------------------------------------
# claim identities and the roundtrip
# ---------------------------------------------------------------------------


def claim_identities_check(t_table: ValueTable, y_table: ValueTable) -> List[dict]:
    """Pointwise verification, wherever every factor exists, of

        Y   = M / (T_{m-1} T_{m+1})
        1+Y = T(k-d) T(k+d) / (T_{m-1} T_{m+1})
        1+Y^-1 = T(k-d) T(k+d) / M
    """
    cm = t_table.system.cm
    violations = []
    for var, y in sorted(y_table.values.items()):
        a, m, k = var
        da = cm.d[a]
        below = _t_value(t_table, LatticeVar(a, m - 1, k))
        above = _t_value(t_table, LatticeVar(a, m + 1, k))
        left = _t_value(t_table, LatticeVar(a, m, k - da))
        right = _t_value(t_table, LatticeVar(a, m, k + da))
        coupling = _coupling_value(t_table, a, m, k)
        if None in (below, above, left, right) or coupling is None:
            continue
        pair = left * right
        inner = below * above
        if y != coupling / inner:
            violations.append({"relation": f"value {var.label('Y')}",
                               "lhs": str(y), "rhs": str(coupling / inner)})
        if 1 + y != pair / inner:
            violations.append({"relation": f"one-plus {var.label('Y')}",
                               "lhs": str(1 + y), "rhs": str(pair / inner)})
        if y != 0 and coupling != 0 and 1 + 1 / y != pair / coupling:
            violations.append({"relation": f"one-plus-inverse {var.label('Y')}",
                               "lhs": str(1 + 1 / y), "rhs": str(pair / coupling)})
    return violations


def _relation_holds(y_table: ValueTable, a: int, m: int, k: int) -> bool:
    sys = y_table.system
    top = sys.max_center_m(a, "Y")
    if m < 1 or (top is not None and m > top):
        return False
    rel = y_relation(sys, a, m, k)
    vals = y_table.values
    if any(v not in vals for v in rel.variables()):
        return False
    num, den = _y_rhs(vals, rel)
    return den != 0 and vals[rel.lhs[0]] * vals[rel.lhs[1]] * den == num


def recoverable_region(y_table: ValueTable, recovered: ValueTable) -> List[LatticeVar]:
    """Variables of the input Y-table that the reconstruction provably
    recovers: level 1 wherever the recovered table is defined, and level m
    wherever levels m-1 (shifted), m-2, and the input relation centered one
    level below all cooperate."""
    cm = y_table.system.cm
    good: set = set()
    for var in sorted(recovered.values, key=lambda v: (v.m, v.a, v.k)):
        a, m, k = var
        if var not in y_table.values:
            continue
        if m == 1:
            good.add(var)
            continue
        da = cm.d[a]
        if (LatticeVar(a, m - 1, k - da) in good
                and LatticeVar(a, m - 1, k + da) in good
                and (m == 2 or LatticeVar(a, m - 2, k) in good)
                and _relation_holds(y_table, a, m - 1, k)):
            good.add(var)
    return sorted(good)


def roundtrip_check(y_table: ValueTable, rng=None,
                    policy: FreeChoicePolicy = FreeChoicePolicy(),
                    center: Optional[int] = None):
    """y_to_t followed by t_to_y, compared exactly on the recoverable region.

    Returns (report dict, t_table).  The report counts the compared variables
    and lists mismatches (none expected) plus any claim-identity violations.
    """
    t_table = y_to_t(y_table, rng=rng, policy=policy, center=center)
    recovered, _ = t_to_y(t_table)
    region = recoverable_region(y_table, recovered)
    mismatches = []
    for var in region:
        if recovered.values[var] != y_table.values[var]:
            mismatches.append({"relation": var.label("Y"),
                               "lhs": str(recovered.values[var]),
                               "rhs": str(y_table.values[var])})
    claim = claim_identities_check(t_table, y_table)
    report = {
        "compared": len(region),
        "mismatches": mismatches,
        "claim_violations": claim,
        "pass": bool(region) and not mismatches and not claim,
    }
    return report, t_table


# ---------------------------------------------------------------------------
# empirical period detection
# ---------------------------------------------------------------------------


def detect_period(table: ValueTable, max_period: int) -> Optional[int]:
    """Smallest p <= max_period with value(a,m,k) == value(a,m,k+p) for every
    stored pair, or None.  Purely empirical."""
    lo, hi = table.window
    for p in range(1, max_period + 1):
        compared = 0
        ok = True
        for var, val in table.values.items():
            other = table.values.get(LatticeVar(var.a, var.m, var.k + p))
            if other is None:
                continue
            compared += 1
            if other != val:
                ok = False
                break
        if ok and compared:
            return p
    return None
