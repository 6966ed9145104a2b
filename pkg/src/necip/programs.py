"""Branching programs and their four acceptance modes.

A program is a vertex set with two distinguished sinks, arc sets A0/A1
labelled by the bit value read, and a variable label on every non-sink
vertex.  An assignment ``a`` keeps the arcs whose label matches the bit of
the queried variable; acceptance is then

* existential   -- some kept path from the start to the 1-sink;
* parity        -- an odd number of such paths (acyclic programs only);
* deterministic -- follow the unique kept out-arc (programs must be acyclic
  with exactly one 0-arc and one 1-arc per non-sink vertex);
* limited       -- the program is deterministic over the inputs plus a set
  of guess variables, and the computed function is the OR over all guess
  assignments.

Structural rules from the data model: the two sinks are distinct, no arc
leaves a sink, no arc enters the start.  Programs where the start *is* a
sink are allowed and compute the constants at size zero.  Size counts the
non-sink vertices.
"""

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .boolfn import ARITY_CAP, TruthTable, enumeration_budget
from .errors import BudgetExceeded, StructureError

EXISTENTIAL = "existential"
PARITY = "parity"
DETERMINISTIC = "deterministic"
LIMITED = "limited"
SEMANTICS = (EXISTENTIAL, PARITY, DETERMINISTIC, LIMITED)


@dataclass(frozen=True)
class BranchingProgram:
    vertices: frozenset[int]
    start: int
    sink0: int
    sink1: int
    arcs0: frozenset[tuple[int, int]]
    arcs1: frozenset[tuple[int, int]]
    var: Mapping[int, int]  # non-sink vertex -> 1-based variable index
    variables: frozenset[int]  # declared input variables
    guess_vars: tuple[int, ...] = ()

    def __post_init__(self):
        if self.sink0 == self.sink1:
            raise StructureError("the two sinks must be distinct")
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "arcs0", frozenset(self.arcs0))
        object.__setattr__(self, "arcs1", frozenset(self.arcs1))
        object.__setattr__(self, "variables", frozenset(self.variables))
        object.__setattr__(self, "guess_vars", tuple(self.guess_vars))
        object.__setattr__(self, "var", dict(self.var))

    @property
    def sinks(self) -> tuple[int, int]:
        return (self.sink0, self.sink1)

    @property
    def delta(self) -> int:
        return len(self.guess_vars)

    def size(self) -> int:
        """Number of non-sink vertices."""
        return len(self.vertices) - 2

    def out_arcs(self, u: int, bit: int) -> list[int]:
        arcs = self.arcs1 if bit else self.arcs0
        return sorted(v for (w, v) in arcs if w == u)

    # -- serialization: sorted ids and arcs keep the bytes deterministic --

    def to_json_dict(self) -> dict:
        return {
            "vertices": sorted(self.vertices),
            "s": self.start,
            "t0": self.sink0,
            "t1": self.sink1,
            "a0": sorted([u, v] for (u, v) in self.arcs0),
            "a1": sorted([u, v] for (u, v) in self.arcs1),
            "var": {str(u): w for u, w in sorted(self.var.items())},
            "variables": sorted(self.variables),
            "guess_vars": list(self.guess_vars),
        }

    @classmethod
    def from_json_dict(cls, obj: Mapping) -> "BranchingProgram":
        return cls(
            vertices=frozenset(obj["vertices"]),
            start=obj["s"],
            sink0=obj["t0"],
            sink1=obj["t1"],
            arcs0=frozenset((u, v) for u, v in obj["a0"]),
            arcs1=frozenset((u, v) for u, v in obj["a1"]),
            var={int(u): int(w) for u, w in obj["var"].items()},
            variables=frozenset(obj["variables"]),
            guess_vars=tuple(obj.get("guess_vars", ())),
        )


# ---------------------------------------------------------------------------
# structural validation


def validate(program: BranchingProgram, semantics: str = EXISTENTIAL) -> list[str]:
    """Return a list of diagnostics; empty means the program is well formed.

    Deterministic and limited semantics additionally require acyclicity and
    exactly one out-arc per label per non-sink vertex; parity requires
    acyclicity.
    """
    if semantics not in SEMANTICS:
        raise ValueError(f"unknown semantics {semantics!r}")
    p = program
    issues: list[str] = []
    non_sinks = p.vertices - {p.sink0, p.sink1}
    if p.start not in p.vertices:
        issues.append("start vertex is not a vertex")
    allowed_vars = set(p.variables) | set(p.guess_vars)
    for u in non_sinks:
        if u not in p.var:
            issues.append(f"vertex {u} has no variable label")
        elif p.var[u] not in allowed_vars:
            issues.append(f"vertex {u} is labelled by undeclared variable {p.var[u]}")
    for u in p.var:
        if u in (p.sink0, p.sink1):
            issues.append(f"sink {u} carries a variable label")
    for name, arcs in (("a0", p.arcs0), ("a1", p.arcs1)):
        for (u, v) in arcs:
            if u not in p.vertices or v not in p.vertices:
                issues.append(f"{name} arc ({u},{v}) uses unknown vertices")
            if u in (p.sink0, p.sink1):
                issues.append(f"{name} arc leaves sink {u}")
            if v == p.start:
                issues.append(f"{name} arc enters the start vertex")
    if set(p.guess_vars) & set(p.variables):
        issues.append("guess variables overlap the input variables")
    if semantics in (DETERMINISTIC, LIMITED):
        for u in non_sinks:
            for bit, arcs in ((0, p.arcs0), (1, p.arcs1)):
                deg = sum(1 for (w, _) in arcs if w == u)
                if deg != 1:
                    issues.append(
                        f"vertex {u} has {deg} out-arcs labelled {bit}, needs exactly 1"
                    )
    if semantics in (DETERMINISTIC, LIMITED, PARITY) and not is_acyclic(p):
        issues.append(f"{semantics} semantics requires an acyclic program")
    if semantics == LIMITED and not p.guess_vars and p.delta == 0:
        pass  # zero guesses is legal: limited(0) coincides with deterministic
    return issues


def _topological_order(p: BranchingProgram) -> list[int] | None:
    """Topological order of all vertices, or None when the graph has a cycle."""
    succ: dict[int, list[int]] = {u: [] for u in p.vertices}
    indeg = {u: 0 for u in p.vertices}
    for (u, v) in list(p.arcs0) + list(p.arcs1):
        succ[u].append(v)
        indeg[v] += 1
    stack = sorted(u for u in p.vertices if indeg[u] == 0)
    order = []
    while stack:
        u = stack.pop()
        order.append(u)
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                stack.append(v)
    return order if len(order) == len(p.vertices) else None


def is_acyclic(p: BranchingProgram) -> bool:
    return _topological_order(p) is not None


# ---------------------------------------------------------------------------
# assignments


def _resolve(p: BranchingProgram, a, *, with_guesses: bool) -> dict[int, int]:
    """Accept a mapping {index: bit} or a positional sequence over 1..n(+delta)."""
    needed = set(p.variables) | (set(p.guess_vars) if with_guesses else set())
    if isinstance(a, Mapping):
        got = {int(i): int(b) & 1 for i, b in a.items()}
    else:
        got = {i + 1: int(b) & 1 for i, b in enumerate(a)}
    missing = needed - got.keys()
    if missing:
        raise ValueError(f"assignment misses variables {sorted(missing)}")
    return got


def _active_arcs(p: BranchingProgram, a: Mapping[int, int]):
    def active(u: int, v: int, bit: int) -> bool:
        return a[p.var[u]] == bit

    keep0 = [(u, v) for (u, v) in p.arcs0 if active(u, v, 0)]
    keep1 = [(u, v) for (u, v) in p.arcs1 if active(u, v, 1)]
    return keep0 + keep1


# ---------------------------------------------------------------------------
# single-input evaluation


def eval_existential(p: BranchingProgram, a) -> int:
    """1 iff the 1-sink is reachable from the start in the kept-arc graph."""
    a = _resolve(p, a, with_guesses=True)
    succ: dict[int, list[int]] = {}
    for (u, v) in _active_arcs(p, a):
        succ.setdefault(u, []).append(v)
    seen = {p.start}
    stack = [p.start]
    while stack:
        u = stack.pop()
        if u == p.sink1:
            return 1
        for v in succ.get(u, ()):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return 0


def eval_parity(p: BranchingProgram, a) -> int:
    """1 iff an odd number of kept paths leads from the start to the 1-sink."""
    a = _resolve(p, a, with_guesses=not p.guess_vars)
    counts = accepting_path_parities_single(p, a)
    return counts


def accepting_path_parities_single(p: BranchingProgram, a: Mapping[int, int]) -> int:
    succ: dict[int, list[int]] = {u: [] for u in p.vertices}
    indeg = {u: 0 for u in p.vertices}
    for (u, v) in _active_arcs(p, a):
        succ[u].append(v)
        indeg[v] += 1
    # Kahn order over the kept graph; a cycle in it is a semantic error
    stack = [u for u in p.vertices if indeg[u] == 0]
    order = []
    while stack:
        u = stack.pop()
        order.append(u)
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                stack.append(v)
    if len(order) != len(p.vertices):
        raise StructureError("parity semantics is undefined on cyclic programs")
    par = {u: 0 for u in p.vertices}
    par[p.sink1] = 1
    for u in reversed(order):
        if u in (p.sink0, p.sink1):
            continue
        x = 0
        for v in succ[u]:
            x ^= par[v]
        par[u] = x
    return par[p.start]


def eval_deterministic(p: BranchingProgram, a) -> int:
    """Follow the unique kept out-arc from the start until a sink."""
    a = _resolve(p, a, with_guesses=True)
    cur = p.start
    steps = 0
    limit = len(p.vertices) + 1
    while cur not in (p.sink0, p.sink1):
        nxt = p.out_arcs(cur, a[p.var[cur]])
        if len(nxt) != 1:
            raise StructureError(
                f"vertex {cur} has {len(nxt)} kept out-arcs; program is not deterministic"
            )
        cur = nxt[0]
        steps += 1
        if steps > limit:
            raise StructureError("cycle encountered under deterministic semantics")
    return 1 if cur == p.sink1 else 0


def eval_limited(p: BranchingProgram, a, delta: int | None = None) -> int:
    """OR of the deterministic value over all assignments of the guess variables."""
    if delta is not None and delta != p.delta:
        raise ValueError(f"program declares {p.delta} guess bits, caller said {delta}")
    base = _resolve(p, a, with_guesses=False)
    guesses = p.guess_vars
    for g in range(1 << len(guesses)):
        full = dict(base)
        for j, gv in enumerate(guesses):
            full[gv] = (g >> (len(guesses) - 1 - j)) & 1
        if eval_deterministic(p, full):
            return 1
    return 0


def size(p: BranchingProgram) -> int:
    return p.size()


# ---------------------------------------------------------------------------
# whole-table evaluation (vectorized over all assignments)


def _table_order(p: BranchingProgram) -> list[int]:
    return sorted(p.variables) + sorted(p.guess_vars)


def _bit_arrays(order: Sequence[int], m: int) -> dict[int, np.ndarray]:
    idx = np.arange(1 << m, dtype=np.int64)
    return {
        w: ((idx >> (m - 1 - pos)) & 1).astype(bool) for pos, w in enumerate(order)
    }


def _check_table_budget(m: int, budget: int | None):
    if m > ARITY_CAP:
        raise BudgetExceeded(f"tabulation arity {m} exceeds the cap {ARITY_CAP}")
    if (1 << m) > enumeration_budget(budget):
        raise BudgetExceeded(
            f"tabulating 2^{m} assignments exceeds the budget; raise NECIP_BUDGET"
        )


def to_truth_table(
    p: BranchingProgram, semantics: str = EXISTENTIAL, budget: int | None = None
) -> TruthTable:
    """Tabulate the chosen semantics.

    For existential/parity/deterministic the table ranges over the declared
    variables followed by the guess variables (sorted, big-endian); for
    limited semantics the guess axis is OR-folded away and the table ranges
    over the inputs only.
    """
    if semantics == LIMITED:
        checker = to_truth_table(p, DETERMINISTIC, budget)
        from .boolfn import or_projection

        return or_projection(checker, p.delta)
    order = _table_order(p)
    m = len(order)
    _check_table_budget(m, budget)
    bits = _bit_arrays(order, m)
    if semantics == PARITY:
        return TruthTable(m, _table_dag(p, bits, m, mode="parity"))
    if semantics == DETERMINISTIC:
        return TruthTable(m, _table_dag(p, bits, m, mode="or"))
    if semantics != EXISTENTIAL:
        raise ValueError(f"unknown semantics {semantics!r}")
    if is_acyclic(p):
        return TruthTable(m, _table_dag(p, bits, m, mode="or"))
    return TruthTable(m, _table_fixpoint(p, bits, m))


def _succ_lists(p: BranchingProgram):
    s0: dict[int, list[int]] = {}
    s1: dict[int, list[int]] = {}
    for (u, v) in p.arcs0:
        s0.setdefault(u, []).append(v)
    for (u, v) in p.arcs1:
        s1.setdefault(u, []).append(v)
    return s0, s1


def _table_dag(p: BranchingProgram, bits, m: int, mode: str) -> np.ndarray:
    order = _topological_order(p)
    if order is None:
        raise StructureError(f"{mode} tabulation requires an acyclic program")
    s0, s1 = _succ_lists(p)
    size_in = 1 << m
    if mode == "parity":
        zero = np.zeros(size_in, dtype=bool)
        combine = np.logical_xor
    else:
        zero = np.zeros(size_in, dtype=bool)
        combine = np.logical_or
    val: dict[int, np.ndarray] = {u: zero for u in p.vertices}
    val[p.sink1] = np.ones(size_in, dtype=bool)
    val[p.sink0] = np.zeros(size_in, dtype=bool)
    for u in reversed(order):
        if u in (p.sink0, p.sink1):
            continue
        acc0 = zero
        for v in s0.get(u, ()):
            acc0 = combine(acc0, val[v])
        acc1 = zero
        for v in s1.get(u, ()):
            acc1 = combine(acc1, val[v])
        val[u] = np.where(bits[p.var[u]], acc1, acc0)
    return val[p.start].astype(np.uint8)


def _table_fixpoint(p: BranchingProgram, bits, m: int) -> np.ndarray:
    """Existential reachability on a possibly cyclic program, all inputs at once."""
    s0, s1 = _succ_lists(p)
    size_in = 1 << m
    reach = {u: np.zeros(size_in, dtype=bool) for u in p.vertices}
    reach[p.sink1][:] = True
    for _ in range(len(p.vertices)):
        changed = False
        for u in p.vertices:
            if u in (p.sink0, p.sink1):
                continue
            acc0 = np.zeros(size_in, dtype=bool)
            for v in s0.get(u, ()):
                acc0 |= reach[v]
            acc1 = np.zeros(size_in, dtype=bool)
            for v in s1.get(u, ()):
                acc1 |= reach[v]
            new = np.where(bits[p.var[u]], acc1, acc0)
            if not np.array_equal(new, reach[u]):
                reach[u] = new
                changed = True
        if not changed:
            break
    return reach[p.start].astype(np.uint8)


def accepting_path_counts(p: BranchingProgram, budget: int | None = None) -> np.ndarray:
    """Number of start->1-sink paths per assignment (acyclic programs).

    Useful for the unique-accepting-path checks: a program has that property
    exactly when this vector matches its existential table.
    """
    order = _topological_order(p)
    if order is None:
        raise StructureError("path counting requires an acyclic program")
    table_order = _table_order(p)
    m = len(table_order)
    _check_table_budget(m, budget)
    bits = _bit_arrays(table_order, m)
    s0, s1 = _succ_lists(p)
    counts: dict[int, np.ndarray] = {
        u: np.zeros(1 << m, dtype=np.int64) for u in p.vertices
    }
    counts[p.sink1][:] = 1
    for u in reversed(order):
        if u in (p.sink0, p.sink1):
            continue
        acc0 = np.zeros(1 << m, dtype=np.int64)
        for v in s0.get(u, ()):
            acc0 += counts[v]
        acc1 = np.zeros(1 << m, dtype=np.int64)
        for v in s1.get(u, ()):
            acc1 += counts[v]
        counts[u] = np.where(bits[p.var[u]], acc1, acc0)
    return counts[p.start]


def eval_deterministic_batch(p: BranchingProgram, rows: np.ndarray) -> np.ndarray:
    """Deterministic evaluation of many assignments at once.

    ``rows`` has one assignment per row, column j holding variable j+1
    (inputs first, then guesses).  Used by the sampled verification path for
    programs too wide to tabulate.
    """
    ids = sorted(p.vertices)
    pos = {u: i for i, u in enumerate(ids)}
    nv = len(ids)
    varr = np.zeros(nv, dtype=np.int64)
    succ0 = np.zeros(nv, dtype=np.int64)
    succ1 = np.zeros(nv, dtype=np.int64)
    for u in ids:
        if u in (p.sink0, p.sink1):
            succ0[pos[u]] = pos[u]
            succ1[pos[u]] = pos[u]
            varr[pos[u]] = 1
            continue
        varr[pos[u]] = p.var[u]
        (v0,) = p.out_arcs(u, 0)
        (v1,) = p.out_arcs(u, 1)
        succ0[pos[u]] = pos[v0]
        succ1[pos[u]] = pos[v1]
    cur = np.full(rows.shape[0], pos[p.start], dtype=np.int64)
    sink_ids = (pos[p.sink0], pos[p.sink1])
    for _ in range(nv):
        at_sink = (cur == sink_ids[0]) | (cur == sink_ids[1])
        if at_sink.all():
            break
        bit = rows[np.arange(rows.shape[0]), varr[cur] - 1]
        nxt = np.where(bit == 1, succ1[cur], succ0[cur])
        cur = np.where(at_sink, cur, nxt)
    return (cur == sink_ids[1]).astype(np.uint8)
