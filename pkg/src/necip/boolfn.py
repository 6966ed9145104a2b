"""Dense truth tables, restrictions, subfunction counting, combinatorial helpers.

Conventions used throughout the package:

* Variable indices are 1-based in every public signature: index ``i`` names
  the i-th input bit, as in the usual notation x_1, ..., x_n.  Zero-based
  offsets appear only inside array arithmetic.
* Truth tables are indexed big-endian: entry ``j`` holds the output on the
  input tuple whose bits spell ``j`` with x_1 as the most significant bit.
  Entry 0 is therefore the all-zero input.
* A subfunction of ``f`` on a block ``V`` is the function on V obtained by
  fixing every variable outside V; the subfunction count r_V(f) is the
  number of distinct such tables.  Subfunctions are represented as tables
  indexed by the sorted order of V.
"""

import math
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from ._kernels import pack_restriction_rows
from .errors import BudgetExceeded

ARITY_CAP = 26
DEFAULT_BUDGET = 1 << 24
_BUDGET_ENV = "NECIP_BUDGET"

# rows of the rho-enumeration are materialized in slabs of this many rows
_CHUNK_ROWS = 1 << 18


def enumeration_budget(budget: int | None = None) -> int:
    """Resolve the enumeration budget: explicit arg, else NECIP_BUDGET, else 2^24."""
    if budget is not None:
        return int(budget)
    env = os.environ.get(_BUDGET_ENV)
    return int(env) if env else DEFAULT_BUDGET


def ceil_log2(m: int) -> int:
    """Smallest w with 2^w >= m, for m >= 1."""
    if m < 1:
        raise ValueError("ceil_log2 requires m >= 1")
    return (m - 1).bit_length()


class TruthTable:
    """An n-ary Boolean function stored as a dense bit vector of length 2^n.

    The bit vector is a read-only uint8 numpy array; instances are immutable
    and safe to share between threads.
    """

    __slots__ = ("arity", "bits", "_hash")

    def __init__(self, arity: int, bits):
        if arity < 0:
            raise ValueError("arity must be non-negative")
        if arity > ARITY_CAP:
            raise ValueError(
                f"arity {arity} exceeds the dense-table cap {ARITY_CAP}; "
                "use a lazy FunctionSpec instead"
            )
        arr = np.ascontiguousarray(bits, dtype=np.uint8)
        if arr.ndim != 1 or arr.shape[0] != 1 << arity:
            raise ValueError(f"expected {1 << arity} bits, got shape {arr.shape}")
        if arr.max(initial=0) > 1:
            raise ValueError("table entries must be 0 or 1")
        arr.setflags(write=False)
        self.arity = arity
        self.bits = arr
        self._hash = None

    # -- constructors -------------------------------------------------

    @classmethod
    def from_function(cls, arity: int, fn) -> "TruthTable":
        """Tabulate ``fn(assignment_tuple) -> bit`` over all inputs."""
        size = 1 << arity
        bits = np.empty(size, dtype=np.uint8)
        for j in range(size):
            a = tuple((j >> (arity - 1 - i)) & 1 for i in range(arity))
            bits[j] = fn(a) & 1
        return cls(arity, bits)

    @classmethod
    def from_int(cls, arity: int, value: int) -> "TruthTable":
        """Build from the big-endian integer value of the bit vector."""
        size = 1 << arity
        if not 0 <= value < 1 << size:
            raise ValueError("table value out of range")
        bits = np.fromiter(
            ((value >> (size - 1 - j)) & 1 for j in range(size)), np.uint8, size
        )
        return cls(arity, bits)

    @classmethod
    def constant(cls, arity: int, value: int) -> "TruthTable":
        return cls(arity, np.full(1 << arity, value & 1, dtype=np.uint8))

    # -- basic protocol -----------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruthTable)
            and self.arity == other.arity
            and bool(np.array_equal(self.bits, other.bits))
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.arity, self.bits.tobytes()))
        return self._hash

    def __repr__(self) -> str:
        if self.arity <= 4:
            return f"TruthTable({self.arity}, {''.join(map(str, self.bits))})"
        return f"TruthTable(arity={self.arity})"

    def as_int(self) -> int:
        """Big-endian integer value of the bit vector (entry 0 is the top bit)."""
        val = 0
        for b in self.bits:
            val = (val << 1) | int(b)
        return val

    # -- operations ----------------------------------------------------

    def evaluate(self, assignment: Sequence[int]) -> int:
        """Output on a full assignment (position i holds variable i+1)."""
        if len(assignment) != self.arity:
            raise ValueError(
                f"assignment has {len(assignment)} bits, arity is {self.arity}"
            )
        idx = 0
        for b in assignment:
            idx = (idx << 1) | (b & 1)
        return int(self.bits[idx])

    def restrict(self, rho: "PartialAssignment | Mapping[int, int]") -> "TruthTable":
        """The subfunction on the complement of ``rho``'s domain.

        The result is indexed by the surviving variables in increasing
        order of their original indices.
        """
        rho = PartialAssignment.coerce(rho)
        n = self.arity
        for i in rho.domain:
            if not 1 <= i <= n:
                raise ValueError(f"restricted index {i} outside [1, {n}]")
        keep = [i for i in range(1, n + 1) if i not in set(rho.domain)]
        base = 0
        for i, b in rho.items:
            base += b << (n - i)
        offs = _index_offsets(n, keep)
        return TruthTable(len(keep), self.bits[base + offs])

    def depends_on(self, i: int) -> bool:
        """True iff some input pair differing only at variable i changes the output."""
        n = self.arity
        if not 1 <= i <= n:
            raise ValueError(f"index {i} outside [1, {n}]")
        cube = self.bits.reshape(1 << (i - 1), 2, 1 << (n - i))
        return bool(np.any(cube[:, 0, :] != cube[:, 1, :]))

    def support(self) -> tuple[int, ...]:
        """Indices of the variables the function depends on."""
        return tuple(i for i in range(1, self.arity + 1) if self.depends_on(i))

    def pad(self, new_arity: int) -> "TruthTable":
        """Append ignored variables n+1..new_arity.

        Subfunction counts on any V inside [n] are unchanged by padding.
        """
        if new_arity < self.arity:
            raise ValueError("pad target must not be smaller than the arity")
        return TruthTable(new_arity, np.repeat(self.bits, 1 << (new_arity - self.arity)))

    # -- serialization ---------------------------------------------------

    def to_json_dict(self) -> dict:
        """``{"arity": n, "bits_hex": ...}``.

        The hex string packs table entries in index order, eight per byte with
        the most significant bit first: big-endian bit 0 (the top bit of the
        first byte) is the output on the all-zero input.
        """
        packed = np.packbits(self.bits)  # bitorder='big'
        return {"arity": self.arity, "bits_hex": packed.tobytes().hex()}

    @classmethod
    def from_json_dict(cls, obj: Mapping) -> "TruthTable":
        arity = int(obj["arity"])
        raw = np.frombuffer(bytes.fromhex(obj["bits_hex"]), dtype=np.uint8)
        bits = np.unpackbits(raw, count=1 << arity)
        return cls(arity, bits)


@dataclass(frozen=True)
class PartialAssignment:
    """A value for each variable in a sorted domain of 1-based indices."""

    items: tuple[tuple[int, int], ...]

    def __post_init__(self):
        idxs = [i for i, _ in self.items]
        if any(i < 1 for i in idxs):
            raise ValueError("variable indices are 1-based")
        if sorted(set(idxs)) != idxs:
            raise ValueError("domain indices must be distinct and sorted")
        if any(b not in (0, 1) for _, b in self.items):
            raise ValueError("assigned values must be bits")

    @classmethod
    def from_dict(cls, d: Mapping[int, int]) -> "PartialAssignment":
        return cls(tuple(sorted((int(i), int(b)) for i, b in d.items())))

    @classmethod
    def coerce(cls, obj) -> "PartialAssignment":
        return obj if isinstance(obj, PartialAssignment) else cls.from_dict(obj)

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.items)

    def merged(self, other: "PartialAssignment | Mapping[int, int]") -> "PartialAssignment":
        other = PartialAssignment.coerce(other)
        if set(self.domain) & set(other.domain):
            raise ValueError("domains overlap")
        return PartialAssignment(tuple(sorted(self.items + other.items)))


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty blocks of 1-based indices covering [n]."""

    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "blocks", tuple(tuple(sorted(int(i) for i in b)) for b in self.blocks)
        )
        seen: set[int] = set()
        for block in self.blocks:
            if not block:
                raise ValueError("empty block")
            for i in block:
                if not 1 <= i <= self.n:
                    raise ValueError(f"index {i} outside [1, {self.n}]")
                if i in seen:
                    raise ValueError(f"index {i} repeated")
                seen.add(i)
        if len(seen) != self.n:
            raise ValueError("blocks do not cover [n]")

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def to_json_list(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    @classmethod
    def from_json_list(cls, n: int, obj: Iterable[Iterable[int]]) -> "Partition":
        return cls(n, tuple(tuple(b) for b in obj))


# ---------------------------------------------------------------------------
# subfunction counting


def _index_offsets(n: int, positions: Sequence[int]) -> np.ndarray:
    """Table offsets of all assignments to the given sorted 1-based positions.

    Entry y is the offset contributed by writing the big-endian bits of y
    into those positions (all other variables zero).
    """
    offs = np.zeros(1, dtype=np.int64)
    for i in positions:
        w = np.int64(1) << (n - i)
        offs = np.concatenate([offs, offs + w])
    return offs


def count_subfunctions(
    table: TruthTable,
    block: Sequence[int],
    *,
    return_tables: bool = False,
    budget: int | None = None,
):
    """Count the distinct subfunctions of ``table`` on ``block`` (= r_V(f)).

    Enumerates all 2^(n-|V|) assignments to the complement of V, de-duplicates
    the induced tables exactly, and returns the count (plus the tables when
    ``return_tables`` is set).  Raises :class:`BudgetExceeded` when the
    complement enumeration is larger than the budget.
    """
    n = table.arity
    V = sorted(set(int(i) for i in block))
    if V and not (1 <= V[0] and V[-1] <= n):
        raise ValueError(f"block indices must lie in [1, {n}]")
    comp = [i for i in range(1, n + 1) if i not in set(V)]
    n_rows = 1 << len(comp)
    if n_rows > enumeration_budget(budget):
        raise BudgetExceeded(
            f"subfunction enumeration needs 2^{len(comp)} restrictions, "
            f"budget is {enumeration_budget(budget)}"
        )
    v_off = _index_offsets(n, V)
    w_off = _index_offsets(n, comp)
    uniq_chunks = []
    for lo in range(0, n_rows, _CHUNK_ROWS):
        rows = pack_restriction_rows(table.bits, v_off, w_off[lo : lo + _CHUNK_ROWS])
        uniq_chunks.append(np.unique(rows, axis=0))
    uniq = np.unique(np.concatenate(uniq_chunks, axis=0), axis=0)
    count = int(uniq.shape[0])
    if not return_tables:
        return count
    b = len(V)
    tables = [TruthTable(b, np.unpackbits(row, count=1 << b)) for row in uniq]
    return count, tables


def or_projection(table: TruthTable, delta: int) -> TruthTable:
    """OR out the last ``delta`` variables: f(a) = OR_b g(a, b)."""
    if not 0 <= delta <= table.arity:
        raise ValueError("delta out of range")
    grouped = table.bits.reshape(-1, 1 << delta)
    return TruthTable(table.arity - delta, grouped.any(axis=1).astype(np.uint8))


def hamming_ball_volume(m: int, r: int) -> int:
    """Number of points within Hamming distance r in {0,1}^m, exactly."""
    if m < 0 or r < 0:
        raise ValueError("m and r must be non-negative")
    if r >= m:
        return 1 << m
    return sum(math.comb(m, i) for i in range(r + 1))


# ---------------------------------------------------------------------------
# set partitions


def iter_set_partitions(n: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All set partitions of [n] in restricted-growth (canonical) order.

    Blocks come out sorted by their minimum element, so the output order is
    deterministic; there are Bell(n) partitions.
    """
    if n == 0:
        yield ()
        return
    assignment = [0] * n

    def rec(i: int, num_blocks: int):
        if i == n:
            blocks: list[list[int]] = [[] for _ in range(num_blocks)]
            for v, b in enumerate(assignment, start=1):
                blocks[b].append(v)
            yield tuple(tuple(b) for b in blocks)
            return
        for b in range(num_blocks + 1):
            assignment[i] = b
            yield from rec(i + 1, max(num_blocks, b + 1))

    yield from rec(0, 0)


def bell_number(n: int) -> int:
    """Number of set partitions of [n]."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]
