"""Run-compressed permutations with inverse and exponentiation.

A permutation is covered by monotone runs; the run-label strings (by
position and by value) reduce apply/inverse to rank/select on compressed
sequences.  Four run kinds are supported:

  interleaved-general  runs are increasing or decreasing subsequences
  interleaved-strict   runs change by exactly +-1 (value chains)
  contiguous-general   maximal monotone segments
  contiguous-strict    maximal +-1 segments

Strict layouts replace the value-side label string with per-run records
(minimum, length, direction) plus a bounded-depth predecessor trie over
run minima.  Contiguous-general mirrors the strict layout built for the
inverse permutation; contiguous-strict needs only two predecessor tries.
An optional cycle-marking companion answers pi^k with walks bounded by
twice its sampling step.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field

import numpy as np

from .apseq import ApSequence
from .bits import ByteReader, ByteWriter
from .bitvec import bitvector, read_bitvector
from .errors import InputError, NotFoundError, OutOfRangeError, UnsupportedOperationError
from .stats import h_runs

KINDS = (
    "interleaved-general",
    "interleaved-strict",
    "contiguous-general",
    "contiguous-strict",
)


def _validate_permutation(pi) -> np.ndarray:
    arr = np.asarray(pi, dtype=np.int64)
    if arr.size == 0:
        raise InputError("empty input")
    if not np.array_equal(np.sort(arr), np.arange(1, arr.size + 1)):
        raise InputError("input is not a bijection on [1..n]")
    return arr


@dataclass
class RunDecomposition:
    kind: str
    n: int
    labels: np.ndarray  # run id per position, 1..rho
    lengths: np.ndarray  # per run
    increasing: np.ndarray  # bool per run
    min_values: np.ndarray  # minimum value per run
    starts: np.ndarray | None = None  # first position, contiguous kinds only

    @property
    def rho(self) -> int:
        return int(self.lengths.size)

    def entropy(self) -> float:
        return h_runs(self.lengths)

    def check_entropy_facts(self):
        h = self.entropy()
        assert h <= math.log2(self.rho) + 1e-12
        if self.n > 1:
            assert self.n * h >= (self.rho - 1) * math.log2(self.n) - 1e-9


def _cover_interleaved_general(arr: np.ndarray):
    """Patience covering into increasing runs: each value goes to the run
    with the largest smaller last element (equivalently, the first
    compatible run in creation order), else opens a run."""
    neg_tops: list[int] = []  # -last per run, ascending = creation order
    labels = np.zeros(arr.size, dtype=np.int64)
    for pos, v in enumerate(arr.tolist()):
        idx = bisect_left(neg_tops, -v)
        if idx == len(neg_tops):
            neg_tops.append(-v)
        else:
            neg_tops[idx] = -v
        labels[pos] = idx + 1
    rho = len(neg_tops)
    lengths = np.bincount(labels, minlength=rho + 1)[1:]
    increasing = np.ones(rho, dtype=bool)
    mins = np.full(rho, arr.size + 1, dtype=np.int64)
    for pos, v in enumerate(arr.tolist()):
        r = labels[pos] - 1
        if v < mins[r]:
            mins[r] = v
    return labels, lengths, increasing, mins


def _cover_interleaved_strict(arr: np.ndarray):
    """Greedy covering into +-1 value chains; a singleton extends either
    way, committed runs keep their direction, earliest run wins ties."""
    tops: dict[int, int] = {}  # current last value -> run index
    direction: list[int] = []  # 0 unset, +1 incrementing, -1 decrementing
    first: list[int] = []
    labels = np.zeros(arr.size, dtype=np.int64)
    for pos, v in enumerate(arr.tolist()):
        up = tops.get(v - 1)
        down = tops.get(v + 1)
        cand = []
        if up is not None and direction[up] >= 0:
            cand.append((up, 1))
        if down is not None and direction[down] <= 0:
            cand.append((down, -1))
        if cand:
            r, d = min(cand)
            direction[r] = d
            del tops[v - d]
        else:
            r = len(direction)
            direction.append(0)
            first.append(v)
        tops[v] = r
        labels[pos] = r + 1
    rho = len(direction)
    lengths = np.bincount(labels, minlength=rho + 1)[1:]
    increasing = np.array([d >= 0 for d in direction])
    mins = np.array(
        [f if direction[r] >= 0 else f - int(lengths[r]) + 1
         for r, f in enumerate(first)],
        dtype=np.int64,
    )
    return labels, lengths, increasing, mins


def _cover_contiguous(arr: np.ndarray, strict: bool):
    """Maximal left-to-right monotone segments (steps +-1 when strict)."""
    n = arr.size
    labels = np.zeros(n, dtype=np.int64)
    lengths, increasing, mins, starts = [], [], [], []
    i = 0
    run = 0
    while i < n:
        start = i
        up = True
        if i + 1 < n:
            step = int(arr[i + 1]) - int(arr[i])
            ok = step in (1, -1) if strict else True
            if ok:
                up = step > 0
                i += 1
                while i + 1 < n:
                    nxt = int(arr[i + 1]) - int(arr[i])
                    if strict and nxt != (1 if up else -1):
                        break
                    if not strict and (nxt > 0) != up:
                        break
                    i += 1
        run += 1
        labels[start : i + 1] = run
        lengths.append(i + 1 - start)
        increasing.append(up)
        seg = arr[start : i + 1]
        mins.append(int(seg.min()))
        starts.append(start + 1)
        i += 1
    return (
        labels,
        np.array(lengths, dtype=np.int64),
        np.array(increasing),
        np.array(mins, dtype=np.int64),
        np.array(starts, dtype=np.int64),
    )


def _relabel_by_min(labels, lengths, increasing, mins):
    """Renumber runs in order of minimum element."""
    order = np.argsort(mins, kind="stable")
    remap = np.empty(order.size + 1, dtype=np.int64)
    remap[order + 1] = np.arange(1, order.size + 1)
    return remap[labels], lengths[order], increasing[order], mins[order]


def decompose_runs(pi, kind: str) -> RunDecomposition:
    arr = _validate_permutation(pi)
    if kind not in KINDS:
        raise InputError(f"unknown run kind {kind!r}")
    starts = None
    if kind == "interleaved-general":
        labels, lengths, increasing, mins = _cover_interleaved_general(arr)
    elif kind == "interleaved-strict":
        labels, lengths, increasing, mins = _cover_interleaved_strict(arr)
        labels, lengths, increasing, mins = _relabel_by_min(
            labels, lengths, increasing, mins
        )
    else:
        labels, lengths, increasing, mins, starts = _cover_contiguous(
            arr, strict=(kind == "contiguous-strict")
        )
    dec = RunDecomposition(kind, arr.size, labels, lengths, increasing, mins, starts)
    dec.check_entropy_facts()
    return dec


class PredecessorStructure:
    """Bounded-depth trie over a key set; query(x) returns the largest
    stored key <= x with its auxiliary value."""

    def __init__(self, keys, aux, universe: int, epsilon: float = 0.5):
        if epsilon <= 0:
            raise InputError("epsilon must be positive")
        self.universe = max(1, universe)
        self.epsilon = epsilon
        self.branching = min(1 << 16, max(2, math.ceil(self.universe**epsilon)))
        depth = max(1, math.ceil(1.0 / epsilon))
        while self.branching**depth < self.universe:
            depth += 1
        self.depth = depth
        self._powers = [self.branching**(depth - 1 - d) for d in range(depth)]
        self.keys = np.asarray(keys, dtype=np.int64)
        self.aux = np.asarray(aux, dtype=np.int64)
        self._root = self._node()
        for key, a in zip(self.keys.tolist(), self.aux.tolist()):
            self._insert(int(key), int(a))

    @staticmethod
    def _node():
        return {"digits": [], "children": [], "max": None}

    def _insert(self, key: int, a: int):
        node = self._root
        x0 = key - 1
        for level in range(self.depth):
            if node["max"] is None or key > node["max"][0]:
                node["max"] = (key, a)
            digit = (x0 // self._powers[level]) % self.branching
            idx = bisect_left(node["digits"], digit)
            if idx == len(node["digits"]) or node["digits"][idx] != digit:
                node["digits"].insert(idx, digit)
                node["children"].insert(idx, self._node())
            node = node["children"][idx]
        node["max"] = (key, a)

    def query(self, x: int):
        """(key, aux) of the largest key <= x, or None."""
        if not 1 <= x <= self.universe:
            raise OutOfRangeError(f"query {x} outside universe [1..{self.universe}]")
        best = None
        node = self._root
        x0 = x - 1
        for level in range(self.depth):
            digit = (x0 // self._powers[level]) % self.branching
            idx = bisect_right(node["digits"], digit) - 1
            if idx < 0:
                return best
            if node["digits"][idx] < digit:
                ans = node["children"][idx]["max"]
                return ans if best is None or ans[0] >= best[0] else best
            if idx > 0:
                best = node["children"][idx - 1]["max"]
            node = node["children"][idx]
        return node["max"]


class CycleIndex:
    """Marked elements along permutation cycles with back/forward arrays,
    so pi^k resolves with at most 2*step applications of pi."""

    def __init__(self, pi: np.ndarray, step: int):
        if step < 1:
            raise InputError("power step must be >= 1")
        self.step = step
        n = pi.size
        marked = np.zeros(n, dtype=np.uint8)
        mark_cycle: list[int] = []
        mark_index: list[int] = []
        mark_pos: list[int] = []
        cycle_lengths: list[int] = []
        cycle_marks: list[list[int]] = []
        seen = np.zeros(n + 1, dtype=bool)
        for s in range(1, n + 1):  # ascending start = cycle minimum
            if seen[s]:
                continue
            cyc = []
            x = s
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = int(pi[x - 1])
            if len(cyc) >= step:
                cid = len(cycle_lengths)
                marks = []
                for idx, o in enumerate(range(0, len(cyc), step)):
                    e = cyc[o]
                    marked[e - 1] = 1
                    mark_pos.append(e - 1)
                    mark_cycle.append(cid)
                    mark_index.append(idx)
                    marks.append(e)
                cycle_lengths.append(len(cyc))
                cycle_marks.append(marks)
        order = np.argsort(np.array(mark_pos, dtype=np.int64), kind="stable")
        self.marked = bitvector(marked)
        self.mark_cycle = np.array(mark_cycle, dtype=np.int64)[order] if len(order) else np.zeros(0, np.int64)
        self.mark_index = np.array(mark_index, dtype=np.int64)[order] if len(order) else np.zeros(0, np.int64)
        self.cycle_lengths = np.array(cycle_lengths, dtype=np.int64)
        self.cycle_marks = [np.array(m, dtype=np.int64) for m in cycle_marks]

    def payload_bits(self) -> int:
        w = max(1, (len(self.marked) - 1).bit_length())
        nmarks = self.mark_cycle.size
        return self.marked.payload_bits() + nmarks * 2 * w + nmarks * w

    def serialize(self) -> bytes:
        w = ByteWriter()
        w.u64(self.step)
        w.blob(self.marked.serialize())
        w.u64_array(self.mark_cycle.astype(np.uint64))
        w.u64_array(self.mark_index.astype(np.uint64))
        w.u64_array(self.cycle_lengths.astype(np.uint64))
        w.u64(len(self.cycle_marks))
        for m in self.cycle_marks:
            w.u64_array(m.astype(np.uint64))
        return w.getvalue()

    @classmethod
    def deserialize(cls, data: bytes) -> "CycleIndex":
        r = ByteReader(data)
        obj = cls.__new__(cls)
        obj.step = r.u64()
        obj.marked = read_bitvector(ByteReader(r.blob()))
        obj.mark_cycle = r.u64_array().astype(np.int64)
        obj.mark_index = r.u64_array().astype(np.int64)
        obj.cycle_lengths = r.u64_array().astype(np.int64)
        obj.cycle_marks = [
            r.u64_array().astype(np.int64) for _ in range(r.u64())
        ]
        return obj


# --- storage layouts -------------------------------------------------------


class _InterleavedGeneralLayout:
    tag = 1

    def __init__(self, arr: np.ndarray, dec: RunDecomposition):
        labels_by_value = np.zeros(arr.size, dtype=np.int64)
        labels_by_value[arr - 1] = dec.labels  # s'[pi(i)] = s[i]
        self.s = ApSequence(dec.labels)
        self.sprime = ApSequence(labels_by_value)
        self.dirs = bitvector(dec.increasing.astype(np.uint8))

    def apply(self, i: int) -> int:
        r = self.s.access(i)
        j = self.s.rank(r, i)
        if not self.dirs.access(r):
            j = self.s.rank(r, len(self.s)) + 1 - j
        return self.sprime.select(r, j)

    def inverse(self, v: int) -> int:
        r = self.sprime.access(v)
        j = self.sprime.rank(r, v)
        if not self.dirs.access(r):
            j = self.sprime.rank(r, len(self.sprime)) + 1 - j
        return self.s.select(r, j)

    def payload_bits(self) -> int:
        return (
            self.s.payload_bits()
            + self.sprime.payload_bits()
            + self.dirs.payload_bits()
        )

    def serialize(self) -> bytes:
        w = ByteWriter()
        w.blob(self.s.serialize())
        w.blob(self.sprime.serialize())
        w.blob(self.dirs.serialize())
        return w.getvalue()

    @classmethod
    def deserialize(cls, data: bytes) -> "_InterleavedGeneralLayout":
        r = ByteReader(data)
        obj = cls.__new__(cls)
        obj.s = ApSequence.deserialize(r.blob())
        obj.sprime = ApSequence.deserialize(r.blob())
        obj.dirs = read_bitvector(ByteReader(r.blob()))
        return obj


class _InterleavedStrictLayout:
    """Label string + run records (min, length, direction) + predecessor
    trie over minima; values inside a run are consecutive."""

    tag = 2

    def __init__(self, arr, dec: RunDecomposition, epsilon: float):
        # runs must be labelled in min-value order
        self.s = ApSequence(dec.labels)
        self.mins = dec.min_values.astype(np.int64)
        self.lens = dec.lengths.astype(np.int64)
        self.incr = dec.increasing.copy()
        self.epsilon = epsilon
        self._build_pred(arr.size if hasattr(arr, "size") else int(arr))

    def _build_pred(self, n: int):
        self.pred = PredecessorStructure(
            self.mins, np.arange(1, self.mins.size + 1), n, self.epsilon
        )

    def apply(self, i: int) -> int:
        r = self.s.access(i)
        j = self.s.rank(r, i)
        m, l = int(self.mins[r - 1]), int(self.lens[r - 1])
        return m + j - 1 if self.incr[r - 1] else m + l - j

    def inverse(self, v: int) -> int:
        hit = self.pred.query(v)
        assert hit is not None, "run minima must cover all values"
        m, r = hit
        l = int(self.lens[r - 1])
        j = v - m + 1 if self.incr[r - 1] else m + l - v
        return self.s.select(r, j)

    def payload_bits(self) -> int:
        w = max(1, (len(self.s) - 1).bit_length())
        return self.s.payload_bits() + self.mins.size * (2 * w + 1)

    def serialize(self) -> bytes:
        w = ByteWriter()
        w.f64(self.epsilon)
        w.blob(self.s.serialize())
        w.u64_array(self.mins.astype(np.uint64))
        w.u64_array(self.lens.astype(np.uint64))
        w.blob(bitvector(self.incr.astype(np.uint8)).serialize())
        return w.getvalue()

    @classmethod
    def deserialize(cls, data: bytes) -> "_InterleavedStrictLayout":
        r = ByteReader(data)
        obj = cls.__new__(cls)
        obj.epsilon = r.f64()
        obj.s = ApSequence.deserialize(r.blob())
        obj.mins = r.u64_array().astype(np.int64)
        obj.lens = r.u64_array().astype(np.int64)
        dirs = read_bitvector(ByteReader(r.blob()))
        obj.incr = np.array([bool(dirs.access(i)) for i in range(1, len(dirs) + 1)])
        obj._build_pred(len(obj.s))
        return obj


class _ContiguousGeneralLayout:
    """Mirror layout: the strict machinery built for the inverse
    permutation, with apply/inverse swapped."""

    tag = 3

    def __init__(self, arr: np.ndarray, dec: RunDecomposition, epsilon: float):
        # contiguous run [p..q] of pi appears in pi^-1 as the value chain
        # p..q located at positions pi(p)..pi(q), direction preserved
        inv_labels = np.zeros(arr.size, dtype=np.int64)
        inv_labels[arr - 1] = dec.labels
        inner_dec = RunDecomposition(
            kind="interleaved-strict",
            n=arr.size,
            labels=inv_labels,
            lengths=dec.lengths,
            increasing=dec.increasing,
            min_values=dec.starts,  # value of a chain element = pi position
        )
        self.inner = _InterleavedStrictLayout(arr, inner_dec, epsilon)

    def apply(self, i: int) -> int:
        return self.inner.inverse(i)

    def inverse(self, v: int) -> int:
        return self.inner.apply(v)

    def payload_bits(self) -> int:
        return self.inner.payload_bits()

    def serialize(self) -> bytes:
        return self.inner.serialize()

    @classmethod
    def deserialize(cls, data: bytes) -> "_ContiguousGeneralLayout":
        obj = cls.__new__(cls)
        obj.inner = _InterleavedStrictLayout.deserialize(data)
        return obj


class _ContiguousStrictLayout:
    """Per-run records plus two predecessor tries: one keyed by run start
    position, one keyed by the minimum of the run's value interval."""

    tag = 4

    def __init__(self, arr: np.ndarray, dec: RunDecomposition, epsilon: float):
        self.n = arr.size
        self.starts = dec.starts.astype(np.int64)
        self.lens = dec.lengths.astype(np.int64)
        self.incr = dec.increasing.copy()
        self.pi_start = arr[self.starts - 1].astype(np.int64)
        self.epsilon = epsilon
        self._build_preds()

    def _build_preds(self):
        aux = np.arange(1, self.starts.size + 1)
        vmin = np.where(
            self.incr, self.pi_start, self.pi_start - self.lens + 1
        )
        self.pred_pos = PredecessorStructure(self.starts, aux, self.n, self.epsilon)
        self.pred_val = PredecessorStructure(vmin, aux, self.n, self.epsilon)

    def apply(self, i: int) -> int:
        j, r = self.pred_pos.query(i)
        d = i - j
        return int(self.pi_start[r - 1]) + (d if self.incr[r - 1] else -d)

    def inverse(self, v: int) -> int:
        _, r = self.pred_val.query(v)
        j, pv = int(self.starts[r - 1]), int(self.pi_start[r - 1])
        return j + (v - pv if self.incr[r - 1] else pv - v)

    def payload_bits(self) -> int:
        w = max(1, (self.n - 1).bit_length())
        return self.starts.size * (3 * w + 1)

    def serialize(self) -> bytes:
        w = ByteWriter()
        w.f64(self.epsilon)
        w.u64(self.n)
        w.u64_array(self.starts.astype(np.uint64))
        w.u64_array(self.lens.astype(np.uint64))
        w.u64_array(self.pi_start.astype(np.uint64))
        w.blob(bitvector(self.incr.astype(np.uint8)).serialize())
        return w.getvalue()

    @classmethod
    def deserialize(cls, data: bytes) -> "_ContiguousStrictLayout":
        r = ByteReader(data)
        obj = cls.__new__(cls)
        obj.epsilon = r.f64()
        obj.n = r.u64()
        obj.starts = r.u64_array().astype(np.int64)
        obj.lens = r.u64_array().astype(np.int64)
        obj.pi_start = r.u64_array().astype(np.int64)
        dirs = read_bitvector(ByteReader(r.blob()))
        obj.incr = np.array([bool(dirs.access(i)) for i in range(1, len(dirs) + 1)])
        obj._build_preds()
        return obj


_LAYOUTS = {
    1: _InterleavedGeneralLayout,
    2: _InterleavedStrictLayout,
    3: _ContiguousGeneralLayout,
    4: _ContiguousStrictLayout,
}
_KIND_TAG = {
    "interleaved-general": 1,
    "interleaved-strict": 2,
    "contiguous-general": 3,
    "contiguous-strict": 4,
}


class RunPermutation:
    """A permutation stored through its run decomposition."""

    def __init__(self, layout, decomposition: RunDecomposition, n: int,
                 companion: CycleIndex | None = None):
        self._layout = layout
        self.decomposition = decomposition
        self.n = n
        self.companion = companion
        self.last_power_walk = 0

    @classmethod
    def build(cls, pi, kind: str = "interleaved-general", epsilon: float = 0.5,
              power_step: int | None = None) -> "RunPermutation":
        arr = _validate_permutation(pi)
        dec = decompose_runs(arr, kind)
        return cls.from_decomposition(arr, dec, epsilon=epsilon, power_step=power_step)

    @classmethod
    def from_decomposition(cls, pi, dec: RunDecomposition, epsilon: float = 0.5,
                           power_step: int | None = None) -> "RunPermutation":
        arr = _validate_permutation(pi)
        tag = _KIND_TAG[dec.kind]
        if tag == 1:
            layout = _InterleavedGeneralLayout(arr, dec)
        elif tag == 2:
            layout = _InterleavedStrictLayout(arr, dec, epsilon)
        elif tag == 3:
            layout = _ContiguousGeneralLayout(arr, dec, epsilon)
        else:
            layout = _ContiguousStrictLayout(arr, dec, epsilon)
        companion = CycleIndex(arr, power_step) if power_step else None
        return cls(layout, dec, arr.size, companion)

    @property
    def rho(self) -> int:
        return self.decomposition.rho

    def apply(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise OutOfRangeError(f"position {i} out of [1..{self.n}]")
        return self._layout.apply(i)

    def inverse(self, v: int) -> int:
        if not 1 <= v <= self.n:
            raise OutOfRangeError(f"value {v} out of [1..{self.n}]")
        return self._layout.inverse(v)

    def power(self, i: int, k: int) -> int:
        """pi^k(i); negative k is the inverse power.  Walks forward along
        the cycle, jumping through the companion's mark arrays."""
        if self.companion is None:
            raise UnsupportedOperationError(
                "permutation was built without a power companion"
            )
        if not 1 <= i <= self.n:
            raise OutOfRangeError(f"position {i} out of [1..{self.n}]")
        self.last_power_walk = 0
        if k == 0:
            return i
        ci = self.companion
        t = ci.step
        visited = [i]
        y = i
        for _ in range(t + 1):
            if ci.marked.access(y):
                return self._power_from_mark(y, k, len(visited) - 1)
            y = self.apply(y)
            self.last_power_walk += 1
            if y == i:  # unmarked short cycle, fully walked
                L = len(visited)
                return visited[k % L]
            visited.append(y)
        raise AssertionError("mark not found within step bound")

    def _power_from_mark(self, m: int, k: int, d: int) -> int:
        ci = self.companion
        t = ci.step
        r = ci.marked.rank(m, 1)
        cid = int(ci.mark_cycle[r - 1])
        idx = int(ci.mark_index[r - 1])
        L = int(ci.cycle_lengths[cid])
        marks = ci.cycle_marks[cid]
        target = (idx * t + (k - d) % L) % L
        q = min(target // t, marks.size - 1)
        y = int(marks[q])
        for _ in range(target - q * t):
            y = self.apply(y)
            self.last_power_walk += 1
        return y

    def payload_bits(self) -> int:
        bits = self._layout.payload_bits()
        if self.companion is not None:
            bits += self.companion.payload_bits()
        return bits

    # --- serialization ----------------------------------------------------------

    def serialize(self) -> bytes:
        w = ByteWriter()
        w.u8(self._layout.tag)
        w.u64(self.n)
        dec = self.decomposition
        w.u8(KINDS.index(dec.kind))
        w.u64_array(dec.lengths.astype(np.uint64))
        w.u64_array(dec.min_values.astype(np.uint64))
        w.blob(bitvector(dec.increasing.astype(np.uint8)).serialize())
        w.u8(1 if dec.starts is not None else 0)
        if dec.starts is not None:
            w.u64_array(dec.starts.astype(np.uint64))
        w.blob(self._layout.serialize())
        w.u8(1 if self.companion is not None else 0)
        if self.companion is not None:
            w.blob(self.companion.serialize())
        return w.getvalue()

    @classmethod
    def deserialize(cls, data: bytes) -> "RunPermutation":
        r = ByteReader(data)
        tag = r.u8()
        n = r.u64()
        kind = KINDS[r.u8()]
        lengths = r.u64_array().astype(np.int64)
        mins = r.u64_array().astype(np.int64)
        dirs = read_bitvector(ByteReader(r.blob()))
        increasing = np.array([bool(dirs.access(i)) for i in range(1, len(dirs) + 1)])
        starts = r.u64_array().astype(np.int64) if r.u8() else None
        dec = RunDecomposition(kind, n, None, lengths, increasing, mins, starts)
        layout = _LAYOUTS[tag].deserialize(r.blob())
        companion = CycleIndex.deserialize(r.blob()) if r.u8() else None
        return cls(layout, dec, n, companion)


def build_run_permutation(pi, kind: str = "interleaved-general",
                          epsilon: float = 0.5,
                          power_step: int | None = None) -> RunPermutation:
    return RunPermutation.build(pi, kind, epsilon, power_step)
