"""T-system lattice: relation generation, unit boundary substitution,
solution checking, slice-major Cauchy propagation, and the telescoping
identities used everywhere for cross-verification.

The spectral parameter u = k/t is kept as the integer k throughout.  A shift
of d_a/t is the integer shift d_a, and a shift of 1/t is 1.  Levels m are per
node; node a of a level-L system carries m = 1 .. t_a*L - 1 (restricted) with
unit values placed structurally at m = 0 and m = t_a*L.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Tuple

from .cartan import CartanMatrix, is_tamely_laced
from .errors import (
    EmptyWindow,
    LevelOutOfRange,
    MissingValue,
    NotTamelyLaced,
    UnschedulableDependency,
    ZeroDivisor,
)
from .exactmath import evaluate, random_nonzero_rational


def floor_div(a: int, b: int) -> int:
    """Floor of a/b, negative arguments included."""
    return a // b


class LatticeVar(NamedTuple):
    """One T- or Y-variable: node a (0-based), level m, scaled coordinate k."""

    a: int
    m: int
    k: int

    def label(self, kind: str = "T") -> str:
        return f"{kind}[a={self.a + 1},m={self.m},k={self.k}]"


Factor = Tuple[LatticeVar, int]


@dataclass(frozen=True)
class SystemSpec:
    """System descriptor: Cartan matrix plus level/cap bookkeeping.

    restricted=True is the level-L system with unit boundary at m = t_a*L.
    restricted=False is an unrestricted window whose levels are capped in the
    same node-dependent shape (m <= t_a*level for T, t_a*level - 1 for Y) but
    with no boundary condition; level=None removes the cap entirely.
    """

    cm: CartanMatrix
    level: Optional[int] = None
    restricted: bool = True

    def __post_init__(self):
        if not is_tamely_laced(self.cm):
            raise NotTamelyLaced("T/Y systems require a tamely laced Cartan matrix")
        if self.restricted and (self.level is None or self.level < 2):
            raise LevelOutOfRange("restricted systems need level >= 2")
        if self.level is not None and self.level < 1:
            raise LevelOutOfRange("level cap must be positive")

    def boundary_m(self, a: int) -> Optional[int]:
        if self.restricted:
            return self.cm.t_a[a] * self.level
        return None

    def max_m_t(self, a: int) -> Optional[int]:
        if self.level is None:
            return None
        top = self.cm.t_a[a] * self.level
        return top - 1 if self.restricted else top

    def max_m_y(self, a: int) -> Optional[int]:
        if self.level is None:
            return None
        return self.cm.t_a[a] * self.level - 1

    def max_center_m(self, a: int, kind: str) -> Optional[int]:
        """Largest m for which the relation centered at (a, m) stays inside
        the variable range (the m+1 factor is the binding constraint)."""
        if self.level is None:
            return None
        if self.restricted:
            return self.cm.t_a[a] * self.level - 1
        top = self.max_m_t(a) if kind == "T" else self.max_m_y(a)
        return top - 1

    def describe(self) -> dict:
        return {
            "matrix": self.cm.rows(),
            "level": self.level,
            "restricted": self.restricted,
        }


@dataclass(frozen=True)
class TRelation:
    """One instantiated T-system equation:
    lhs[0] * lhs[1] = prod(term_a) + prod(term_m), units already substituted."""

    center: LatticeVar
    lhs: Tuple[LatticeVar, LatticeVar]
    term_a: Tuple[Factor, ...]
    term_m: Tuple[Factor, ...]

    def variables(self) -> Iterable[LatticeVar]:
        yield from self.lhs
        for var, _ in self.term_a:
            yield var
        for var, _ in self.term_m:
            yield var

    def to_json(self) -> dict:
        def fx(factors):
            return [[v.a + 1, v.m, v.k, e] for v, e in factors]

        c = self.center
        return {
            "center": {"a": c.a + 1, "m": c.m, "k": c.k},
            "lhs": [[v.a + 1, v.m, v.k] for v in self.lhs],
            "termA": fx(self.term_a),
            "termM": fx(self.term_m),
        }


def _aggregate(factors: Iterable[Factor]) -> Tuple[Factor, ...]:
    agg: Dict[LatticeVar, int] = {}
    for var, exp in factors:
        agg[var] = agg.get(var, 0) + exp
    return tuple(sorted(agg.items()))


def s_term(cm: CartanMatrix, b: int, m: int, k: int,
           drop_units: bool = True) -> List[Factor]:
    """The d_b coupling factors of node b at composite level m, centered at k.

    Factor number k' = 1..d_b sits at level 1 + floor((m-k')/d_b) and scaled
    shift 2k' - 1 - m + floor((m-k')/d_b)*d_b.  Level-0 factors are units and
    are dropped unless drop_units is False.
    """
    if not is_tamely_laced(cm):
        raise NotTamelyLaced("s_term requires a tamely laced matrix")
    if m < 0:
        raise LevelOutOfRange("s_term needs m >= 0")
    db = cm.d[b]
    out = []
    for kp in range(1, db + 1):
        e = floor_div(m - kp, db)
        level = 1 + e
        if level == 0 and drop_units:
            continue
        shift = 2 * kp - 1 - m + e * db
        out.append((LatticeVar(b, level, k + shift), 1))
    return out


def m_term(cm: CartanMatrix, a: int, m: int, k: int) -> Tuple[Factor, ...]:
    """Coupling product of the relation centered at (a, m, k): for d_a > 1 the
    neighbors enter at level (d_a/d_b) m and the same slice, for d_a = 1 they
    enter through their s_term factors."""
    if not is_tamely_laced(cm):
        raise NotTamelyLaced("m_term requires a tamely laced matrix")
    da = cm.d[a]
    factors: List[Factor] = []
    for b in cm.neighbors(a):
        if da > 1:
            factors.append((LatticeVar(b, (da // cm.d[b]) * m, k), 1))
        else:
            factors.extend(s_term(cm, b, m, k))
    return _aggregate(factors)


def m_term_unified(cm: CartanMatrix, a: int, m: int, k: int) -> Tuple[Factor, ...]:
    """Same product assembled from the single double-product closed form
    (over neighbors b and k' = 1..-C_ab), used as an independent route."""
    if not is_tamely_laced(cm):
        raise NotTamelyLaced("m_term_unified requires a tamely laced matrix")
    da = cm.d[a]
    factors: List[Factor] = []
    for b in cm.neighbors(a):
        db = cm.d[b]
        cab = cm[a, b]
        cba = cm[b, a]
        for kp in range(1, -cab + 1):
            e = floor_div(da * (m - kp), db)
            level = -cba + e
            if level <= 0:
                continue
            # db * (-2k'+1)/C_ab is integral for every tamely laced matrix
            num = db * (-2 * kp + 1)
            assert num % cab == 0
            shift = num // cab + db * (-cba + e - 1) - da * m
            factors.append((LatticeVar(b, level, k + shift), 1))
    return _aggregate(factors)


def g_exponents(cm: CartanMatrix, a: int, m: int, k: int) -> Dict[LatticeVar, int]:
    """Exponent map of the unified coupling product (same data as m_term)."""
    return dict(m_term_unified(cm, a, m, k))


def _boundary_filter(sys: SystemSpec, factors: Iterable[Factor]) -> Tuple[Factor, ...]:
    """Drop unit factors: level 0 always, level t_b*L when restricted.
    Anything beyond the boundary would be a bug, so it raises."""
    kept = []
    for var, exp in factors:
        if var.m == 0:
            continue
        top = sys.boundary_m(var.a)
        if top is not None:
            if var.m == top:
                continue
            if var.m > top:
                raise LevelOutOfRange(f"factor {var.label()} beyond the boundary")
        kept.append((var, exp))
    return tuple(kept)


def t_relation(sys: SystemSpec, a: int, m: int, k: int) -> TRelation:
    """Relation centered at (a, m, k) with unit boundaries substituted."""
    top = sys.max_center_m(a, "T")
    if m < 1 or (top is not None and m > top):
        raise LevelOutOfRange(
            f"center level m={m} outside 1..{top} for node {a + 1}")
    da = sys.cm.d[a]
    lhs = (LatticeVar(a, m, k - da), LatticeVar(a, m, k + da))
    term_a = _boundary_filter(
        sys, ((LatticeVar(a, m - 1, k), 1), (LatticeVar(a, m + 1, k), 1)))
    term_m = _boundary_filter(sys, m_term(sys.cm, a, m, k))
    return TRelation(LatticeVar(a, m, k), lhs, term_a, term_m)


def _check_window(window) -> Tuple[int, int]:
    lo, hi = int(window[0]), int(window[1])
    if lo > hi:
        raise EmptyWindow(f"window {lo}..{hi} is empty")
    return lo, hi


def enumerate_relations(sys: SystemSpec, window, kind: str = "T",
                        relation_fn: Optional[Callable] = None) -> List:
    """All relations whose variables (after unit substitution) lie in the
    window.  Unrestricted windows additionally exclude centers whose m+1
    factor would exceed the level cap."""
    lo, hi = _check_window(window)
    if relation_fn is None:
        relation_fn = t_relation
    if sys.level is None:
        raise LevelOutOfRange("enumeration needs a level or an m-cap")
    out = []
    for a in range(sys.cm.r):
        top = sys.max_center_m(a, kind)
        for m in range(1, top + 1):
            for k in range(lo, hi + 1):
                rel = relation_fn(sys, a, m, k)
                if all(lo <= v.k <= hi for v in rel.variables()):
                    out.append(rel)
    return out


# ---------------------------------------------------------------------------
# value tables
# ---------------------------------------------------------------------------


@dataclass
class ValueTable:
    """Concrete values (Fractions, or rational functions in symbolic mode)
    for the lattice variables of one system on one window.  Unit boundary
    variables are never stored; relations substitute them structurally."""

    kind: str
    system: SystemSpec
    window: Tuple[int, int]
    values: Dict[LatticeVar, object] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def get(self, var: LatticeVar):
        try:
            return self.values[var]
        except KeyError:
            raise MissingValue(var.label(self.kind)) from None

    def product(self, factors: Iterable[Factor]):
        result = Fraction(1)
        for var, exp in factors:
            result = result * self.get(var) ** exp
        return result

    def to_json(self) -> dict:
        entries = [
            {"a": v.a + 1, "m": v.m, "k": v.k, "kind": self.kind,
             "value": str(val)}
            for v, val in sorted(self.values.items())
        ]
        return {
            "kind": self.kind,
            "system": self.system.describe(),
            "window": list(self.window),
            "meta": self.meta,
            "entries": entries,
        }

    def dump(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, sort_keys=True, indent=1)
            fh.write("\n")


def table_from_json(data, sys: Optional[SystemSpec] = None,
                    kind: Optional[str] = None) -> ValueTable:
    """Load a table dump; also accepts a bare entry array when the system
    descriptor is supplied by the caller."""
    if isinstance(data, list):
        entries = data
        window = None
        meta = {}
    else:
        entries = data["entries"]
        window = tuple(data["window"])
        meta = data.get("meta", {})
        if sys is None:
            sdesc = data["system"]
            from .cartan import new_cartan

            sys = SystemSpec(new_cartan(sdesc["matrix"]), sdesc["level"],
                             sdesc["restricted"])
        if kind is None:
            kind = data["kind"]
    if sys is None or kind is None:
        raise ValueError("bare entry arrays need an explicit system and kind")
    values = {}
    for row in entries:
        if row.get("kind", kind) != kind:
            raise ValueError(f"table mixes kinds {row['kind']!r} and {kind!r}")
        value = Fraction(row["value"])
        if value == 0:
            raise ValueError(
                f"zero value at (a={row['a']},m={row['m']},k={row['k']})")
        values[LatticeVar(row["a"] - 1, row["m"], row["k"])] = value
    if window is None:
        ks = [v.k for v in values]
        window = (min(ks), max(ks)) if ks else (0, 0)
    return ValueTable(kind, sys, window, values, meta)


# ---------------------------------------------------------------------------
# checking
# ---------------------------------------------------------------------------


def _sample_assignments(values, rng, samples):
    names = set()
    for val in values:
        if not isinstance(val, (int, Fraction)):
            names |= set(val.num.vars) | set(val.den.vars)
    out = []
    for _ in range(samples):
        out.append({n: random_nonzero_rational(rng) for n in sorted(names)})
    return out


def check_t_solution(table: ValueTable, relations: Iterable[TRelation],
                     mode: str = "exact", rng=None, samples: int = 3) -> List[dict]:
    """Violation report for a T-value table; empty list means pass.

    exact mode compares exactly (cross-multiplied for symbolic values);
    numeric mode evaluates symbolic entries at random assignments instead.
    """
    violations = []
    assignments = None
    if mode == "numeric":
        assignments = _sample_assignments(table.values.values(), rng, samples)
    for rel in relations:
        lhs = table.get(rel.lhs[0]) * table.get(rel.lhs[1])
        rhs = table.product(rel.term_a) + table.product(rel.term_m)
        if mode == "exact":
            ok = lhs == rhs
        else:
            ok = all(evaluate(lhs, at) == evaluate(rhs, at) for at in assignments)
        if not ok:
            violations.append({
                "relation": rel.center.label(table.kind),
                "lhs": str(lhs),
                "rhs": str(rhs),
            })
    return violations


# ---------------------------------------------------------------------------
# propagation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SolvePolicy:
    max_retries: int = 16
    bits: int = 8


def _initial_slab_vars(sys: SystemSpec, window, kind: str) -> List[LatticeVar]:
    lo, hi = window
    out = []
    for a in range(sys.cm.r):
        top = sys.max_m_t(a) if kind == "T" else sys.max_m_y(a)
        for m in range(1, top + 1):
            for k in range(lo, min(lo + 2 * sys.cm.d[a] - 1, hi) + 1):
                out.append(LatticeVar(a, m, k))
    return out


def propagate_t(sys: SystemSpec, window, initial: Optional[dict] = None,
                rng=None, policy: SolvePolicy = SolvePolicy()) -> ValueTable:
    """Fill the window slice by slice from an initial slab of width 2*d_a per
    node, solving T(a, m, k) from the relation centered d_a slices earlier.

    Within a slice, nodes are processed in decreasing d_a; that resolves every
    dependency when max d <= 2.  A coupling factor that lands on a slice that
    cannot be ready yet (which happens for max d >= 3) raises
    UnschedulableDependency naming the blocking variable.  A vanishing
    right-hand side resamples the free initial data up to max_retries times.
    """
    if not sys.restricted:
        raise LevelOutOfRange("propagate_t handles restricted systems only; "
                              "unrestricted T-solutions come from y_to_t")
    lo, hi = _check_window(window)
    initial = dict(initial or {})
    slab = _initial_slab_vars(sys, (lo, hi), "T")
    order = sorted(range(sys.cm.r), key=lambda a: -sys.cm.d[a])

    last_error = None
    for _ in range(policy.max_retries + 1):
        values = {}
        for var in slab:
            given = initial.get(var)
            value = given if given is not None else random_nonzero_rational(rng, policy.bits)
            if value == 0:
                raise ZeroDivisor(f"initial value for {var.label()} is zero")
            values[var] = value
        try:
            for k in range(lo, hi + 1):
                for a in order:
                    da = sys.cm.d[a]
                    if k < lo + 2 * da:
                        continue
                    for m in range(1, sys.max_m_t(a) + 1):
                        rel = t_relation(sys, a, m, k - da)
                        for var in rel.variables():
                            if var not in values and var != rel.lhs[1]:
                                if var.k >= k or var.k < lo:
                                    raise UnschedulableDependency(
                                        var.label(),
                                        f"solving {rel.lhs[1].label()} needs "
                                        f"{var.label()} at a not-yet-filled slice")
                                raise MissingValue(var.label())
                        rhs = _product(values, rel.term_a) + _product(values, rel.term_m)
                        new = rhs / values[rel.lhs[0]]
                        if new == 0:
                            raise ZeroDivisor(f"solved zero at {rel.lhs[1].label()}")
                        values[rel.lhs[1]] = new
            return ValueTable("T", sys, (lo, hi), values)
        except ZeroDivisor as err:
            last_error = err
            free = [v for v in slab if v not in initial]
            if rng is None or not free:
                raise
    raise ZeroDivisor(f"retries exhausted: {last_error}")


def _product(values: dict, factors: Iterable[Factor]):
    result = Fraction(1)
    for var, exp in factors:
        result = result * values[var] ** exp
    return result


# ---------------------------------------------------------------------------
# telescoping identities
# ---------------------------------------------------------------------------


def identity_check_1(p: int, window, values: Dict[Tuple[int, int], Fraction]) -> bool:
    """Telescoping identity for one node with arbitrary nonzero values:

      T_pm(k-p) T_pm(k+p) / (T_p(m-1)(k) T_p(m+1)(k))
        = prod over j = -p+1..p-1 and k' = 1..p-|j| of
            T_{pm+j}(kt-1) T_{pm+j}(kt+1) / (T_{pm+j-1}(kt) T_{pm+j+1}(kt)),

    with kt = k + p - |j| + 1 - 2k'.  values maps (m, k) -> Fraction; the
    identity is checked exactly at every center the table covers.
    """
    lo, hi = _check_window(window)

    def val(m, k):
        try:
            return values[(m, k)]
        except KeyError:
            raise MissingValue(f"(m={m},k={k})") from None

    checked = False
    for (m, k) in sorted(values):
        if m % p or m == 0:
            continue
        mm = m // p
        needed = [(p * (mm - 1), k), (p * (mm + 1), k)]
        if not all(n in values for n in needed) or not (lo <= k - p and k + p <= hi):
            continue
        if (p * mm, k - p) not in values or (p * mm, k + p) not in values:
            continue
        try:
            lhs = (val(p * mm, k - p) * val(p * mm, k + p)
                   / (val(p * (mm - 1), k) * val(p * (mm + 1), k)))
            rhs = Fraction(1)
            for j in range(-p + 1, p):
                for kp in range(1, p - abs(j) + 1):
                    kt = k + p - abs(j) + 1 - 2 * kp
                    rhs *= (val(p * mm + j, kt - 1) * val(p * mm + j, kt + 1)
                            / (val(p * mm + j - 1, kt) * val(p * mm + j + 1, kt)))
        except MissingValue:
            continue
        checked = True
        if lhs != rhs:
            return False
    if not checked:
        raise MissingValue("no fully covered center in the window")
    return True


def _s_value(values, db: int, m: int, k: int) -> Fraction:
    """Composite-level product at (m, k) built from single-node values, with
    level-0 factors treated as units."""
    result = Fraction(1)
    for kp in range(1, db + 1):
        e = floor_div(m - kp, db)
        level = 1 + e
        if level == 0:
            continue
        key = (level, k + 2 * kp - 1 - m + e * db)
        if key not in values:
            raise MissingValue(f"(m={key[0]},k={key[1]})")
        result *= values[key]
    return result


def identity_check_2(db: int, window, values: Dict[Tuple[int, int], Fraction]) -> bool:
    """Second telescoping identity, through the composite-level products:

      S_m(k-1) S_m(k+1) / (S_{m-1}(k) S_{m+1}(k))
        = T_{m/db}(k-db) T_{m/db}(k+db) / (T_{m/db-1}(k) T_{m/db+1}(k))
          when db divides m, and 1 otherwise,

    where level-0 T factors are units.  Checked exactly on every covered
    center; values maps (m, k) -> Fraction for a single node of weight db.
    """
    lo, hi = _check_window(window)
    max_m = max((m for m, _ in values), default=0)
    checked = False
    for m in range(1, db * max_m):
        for k in range(lo + db, hi - db + 1):
            try:
                lhs = (_s_value(values, db, m, k - 1) * _s_value(values, db, m, k + 1)
                       / (_s_value(values, db, m - 1, k) * _s_value(values, db, m + 1, k)))
                if m % db == 0:
                    mm = m // db
                    upper = values.get((mm + 1, k))
                    lower = Fraction(1) if mm == 1 else values.get((mm - 1, k))
                    outer_l = values.get((mm, k - db))
                    outer_r = values.get((mm, k + db))
                    if None in (upper, lower, outer_l, outer_r):
                        continue
                    rhs = outer_l * outer_r / (lower * upper)
                else:
                    rhs = Fraction(1)
            except MissingValue:
                continue
            checked = True
            if lhs != rhs:
                return False
    if not checked:
        raise MissingValue("no fully covered center in the window")
    return True
