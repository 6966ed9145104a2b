"""Hard-function families: Element Distinctness and Indirect Storage Access.

ED_{N,m} reads N fields of ceil(log2 m) bits; a field with binary value v
encodes the element v+1 of [m] (so every field is legal exactly when
v+1 <= m, and all inputs are legal when m is a power of two).  The output
is 1 iff all fields are legal and the N encoded values are pairwise
distinct.

ISA_{k,l} reads one bit through two levels of addressing: the k primary
bits select one of 2^k l-bit secondary pointers, and the selected pointer
indexes a 2^l-bit data string.  The graded family ISA_n fixes
l = k + ceil(log2 k) and evaluates ISA_{k,l} on a prefix, ignoring the
rest of the input; h_isa(k) is the exact arity of the grid member with
parameter k.
"""

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .boolfn import (
    ARITY_CAP,
    Partition,
    TruthTable,
    ceil_log2,
    enumeration_budget,
)
from .errors import BudgetExceeded

# ---------------------------------------------------------------------------
# layouts


@dataclass(frozen=True)
class IsaLayout:
    """1-based variable positions of an ISA_{k,l} instance."""

    k: int
    l: int

    def __post_init__(self):
        if self.k < 1 or self.l < 1:
            raise ValueError("ISA parameters must be positive")

    @property
    def arity(self) -> int:
        return self.k + (1 << self.k) * self.l + (1 << self.l)

    def primary_var(self, j: int) -> int:
        """Position of the j-th primary-pointer bit, j in [k]."""
        return j

    def secondary_var(self, p: int, j: int) -> int:
        """Position of bit j of the p-th secondary pointer, p in [2^k], j in [l]."""
        return self.k + (p - 1) * self.l + j

    def secondary_block(self, p: int) -> tuple[int, ...]:
        return tuple(self.secondary_var(p, j) for j in range(1, self.l + 1))

    def data_var(self, beta: int) -> int:
        """Position of the data bit addressed by secondary value beta in [0, 2^l)."""
        return self.k + (1 << self.k) * self.l + beta + 1

    def data_block(self) -> tuple[int, ...]:
        return tuple(self.data_var(b) for b in range(1 << self.l))


def _bin(bits: Sequence[int]) -> int:
    v = 0
    for b in bits:
        v = (v << 1) | (b & 1)
    return v


# ---------------------------------------------------------------------------
# evaluators


def ed_eval(N: int, m: int, a: Sequence[int]) -> int:
    """Element Distinctness on one assignment."""
    if m < N or N < 1:
        raise ValueError("ED requires m >= N >= 1")
    w = ceil_log2(m)
    if len(a) != N * w:
        raise ValueError(f"ED_{{{N},{m}}} expects {N * w} bits, got {len(a)}")
    values = []
    for i in range(N):
        v = _bin(a[i * w : (i + 1) * w])
        if v + 1 > m:
            return 0
        values.append(v)
    return 1 if len(set(values)) == N else 0


def isa_eval(k: int, l: int, a: Sequence[int]) -> int:
    """Indirect Storage Access on one assignment."""
    lay = IsaLayout(k, l)
    if len(a) != lay.arity:
        raise ValueError(f"ISA_{{{k},{l}}} expects {lay.arity} bits, got {len(a)}")
    alpha = _bin(a[:k])
    beta = _bin(a[k + l * alpha : k + l * alpha + l])
    return a[k + l * (1 << k) + beta] & 1


def h_isa(m: int) -> int:
    """Arity of the graded ISA family member with parameter m >= 1."""
    if m < 1:
        raise ValueError("h_isa requires m >= 1")
    return m + (1 << m) * (m + ceil_log2(m)) + (1 << (m + ceil_log2(m)))


def _family_parameter(n: int) -> int:
    """Largest k with h_isa(k) <= n, for n >= 5 (= h_isa(1))."""
    k = 1
    while h_isa(k + 1) <= n:
        k += 1
    return k


def isa_family_eval(n: int, a: Sequence[int]) -> int:
    """The graded family ISA_n: zero below arity 5, else ISA on a prefix."""
    if len(a) != n:
        raise ValueError(f"ISA_{n} expects {n} bits, got {len(a)}")
    if n < 5:
        return 0
    k = _family_parameter(n)
    return isa_eval(k, k + ceil_log2(k), a[: h_isa(k)])


# ---------------------------------------------------------------------------
# canonical partitions


def isa_partition(k: int, l: int) -> Partition:
    """Secondary-pointer blocks V_1..V_{2^k} followed by the rest U.

    Fixing the data string induces 2^(2^l) distinct subfunctions on each
    pointer block, which is what the lower-bound sums exploit.
    """
    lay = IsaLayout(k, l)
    blocks = [lay.secondary_block(p) for p in range(1, (1 << k) + 1)]
    u = tuple(range(1, k + 1)) + lay.data_block()
    return Partition(lay.arity, tuple(blocks) + (u,))


def isa_n_partition(n: int) -> tuple[Partition, int, int]:
    """Canonical partition of ISA_n plus (p, q) with r = 2^q on each of p blocks.

    Satisfies p >= n / (32 log2 n) and q >= n / 16; padding indices beyond
    the grid arity join the final block U (the function ignores them, so
    they carry no subfunctions).
    """
    if n < 5:
        raise ValueError("ISA_n partition requires n >= 5")
    k = _family_parameter(n)
    l = k + ceil_log2(k)
    base = isa_partition(k, l)
    u = base.blocks[-1] + tuple(range(h_isa(k) + 1, n + 1))
    part = Partition(n, base.blocks[:-1] + (u,))
    return part, 1 << k, 1 << l


def ed_partition(N: int, m: int) -> Partition:
    """One block per encoded number: N runs of ceil(log2 m) consecutive indices."""
    if m < N or N < 1:
        raise ValueError("ED requires m >= N >= 1")
    w = ceil_log2(m)
    blocks = tuple(tuple(range(i * w + 1, (i + 1) * w + 1)) for i in range(N))
    return Partition(N * w, blocks)


# ---------------------------------------------------------------------------
# vectorized tabulation


def ed_table(N: int, m: int) -> TruthTable:
    w = ceil_log2(m)
    n = N * w
    _check_tabulation(n)
    idx = np.arange(1 << n, dtype=np.int64)
    vals = [(idx >> (n - (i + 1) * w)) & ((1 << w) - 1) for i in range(N)]
    ok = np.ones(1 << n, dtype=bool)
    for v in vals:
        ok &= v + 1 <= m
    for i in range(N):
        for j in range(i + 1, N):
            ok &= vals[i] != vals[j]
    return TruthTable(n, ok.astype(np.uint8))


def isa_table(k: int, l: int) -> TruthTable:
    lay = IsaLayout(k, l)
    n = lay.arity
    _check_tabulation(n)
    idx = np.arange(1 << n, dtype=np.int64)
    alpha = idx >> (n - k)
    # secondary pointer alpha occupies positions k + l*alpha + 1 .. k + l*(alpha+1)
    beta = (idx >> (n - k - l * (alpha + 1))) & ((1 << l) - 1)
    # data bit beta sits at position k + l*2^k + beta + 1; below it lie
    # 2^l - 1 - beta lower-order bits
    out = (idx >> ((1 << l) - 1 - beta)) & 1
    return TruthTable(n, out.astype(np.uint8))


def isa_family_table(n: int) -> TruthTable:
    _check_tabulation(n)
    if n < 5:
        return TruthTable.constant(n, 0)
    k = _family_parameter(n)
    return isa_table(k, k + ceil_log2(k)).pad(n)


def _check_tabulation(n: int, budget: int | None = None):
    if n > ARITY_CAP:
        raise BudgetExceeded(f"arity {n} exceeds the dense-table cap {ARITY_CAP}")
    if (1 << n) > enumeration_budget(budget):
        raise BudgetExceeded(
            f"tabulating 2^{n} entries exceeds the budget "
            f"{enumeration_budget(budget)}; raise NECIP_BUDGET to allow it"
        )


# ---------------------------------------------------------------------------
# lazy evaluator wrapper


@dataclass(frozen=True)
class FunctionSpec:
    """A named Boolean function, evaluable pointwise and tabulable on demand.

    ``kind`` is one of ``ed`` (params N, m), ``isa`` (params k, l), ``isan``
    (param n) or ``table`` (a wrapped :class:`TruthTable`).
    """

    kind: str
    params: tuple[int, ...] = ()
    table: TruthTable | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in ("ed", "isa", "isan", "table"):
            raise ValueError(f"unknown function kind {self.kind!r}")
        if self.kind == "table" and self.table is None:
            raise ValueError("table kind needs a TruthTable")
        self.arity  # validate parameters eagerly

    @property
    def arity(self) -> int:
        if self.kind == "ed":
            N, m = self.params
            if m < N or N < 1:
                raise ValueError("ED requires m >= N >= 1")
            return N * ceil_log2(m)
        if self.kind == "isa":
            k, l = self.params
            return IsaLayout(k, l).arity
        if self.kind == "isan":
            (n,) = self.params
            return n
        return self.table.arity

    @property
    def name(self) -> str:
        if self.kind == "table":
            return f"table[{self.table.arity}]"
        return f"{self.kind}:{','.join(map(str, self.params))}"

    def evaluate(self, a: Sequence[int]) -> int:
        if self.kind == "ed":
            return ed_eval(*self.params, a)
        if self.kind == "isa":
            return isa_eval(*self.params, a)
        if self.kind == "isan":
            return isa_family_eval(self.params[0], a)
        return self.table.evaluate(a)

    def truth_table(self, budget: int | None = None) -> TruthTable:
        if self.kind == "table":
            return self.table
        _check_tabulation(self.arity, budget)
        if self.kind == "ed":
            return ed_table(*self.params)
        if self.kind == "isa":
            return isa_table(*self.params)
        return isa_family_table(self.params[0])

    def canonical_partition(self) -> Partition:
        if self.kind == "ed":
            return ed_partition(*self.params)
        if self.kind == "isa":
            return isa_partition(*self.params)
        if self.kind == "isan":
            return isa_n_partition(self.params[0])[0]
        raise ValueError("a plain table has no canonical partition")


def parse_function_spec(text: str) -> FunctionSpec:
    """Parse the CLI notation: ``ed:N,m``, ``isa:k,l``, ``isan:n``, ``table:<path>``."""
    kind, sep, rest = text.partition(":")
    if not sep:
        raise ValueError(f"malformed function spec {text!r}")
    kind = kind.strip().lower()
    if kind == "table":
        import json

        with open(rest, "r", encoding="utf-8") as fh:
            return FunctionSpec("table", table=TruthTable.from_json_dict(json.load(fh)))
    try:
        params = tuple(int(p) for p in rest.split(","))
    except ValueError:
        raise ValueError(f"malformed parameters in function spec {text!r}") from None
    expected = {"ed": 2, "isa": 2, "isan": 1}
    if kind not in expected:
        raise ValueError(f"unknown function kind {kind!r}")
    if len(params) != expected[kind]:
        raise ValueError(f"{kind} expects {expected[kind]} parameters")
    return FunctionSpec(kind, params)
