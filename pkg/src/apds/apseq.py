"""Frequency-partitioned sequences: the core compressed rank/select store.

Symbols are grouped into classes by the rounded value of
lg(n/occ) * lg(n), so symbols in one class have near-equal frequency.
The class string t (one class id per position) carries the compressible
information and is stored in a wavelet tree; the projection of the
sequence onto each class is stored nearly plain (wavelet tree for small
class alphabets, chunked large-alphabet store otherwise).  A symbol->class
map m of length sigma dispatches queries:

    access(i)    = m.select_l(sub_l.access(t.rank_l(i))),  l = t.access(i)
    rank_a(i)    = sub_l.rank_c(t.rank_l(i)),   l = m.access(a), c = m.rank_l(a)
    select_a(j)  = t.select_l(sub_l.select_c(j))

General (non-effective) alphabets keep the occurring symbols in a sorted
dictionary and run the machinery over their ranks.
"""

from __future__ import annotations

import math

import numpy as np

from .bits import ByteReader, ByteWriter
from .bitvec import SparseDictionary
from .chunkseq import LargeSequence
from .errors import InputError, NotFoundError, OutOfRangeError
from .stats import EntropyReport, SectionSpace, distribution_entropy, h0
from .wavelet import PolySequence


def class_of(n: int, occ: int) -> int:
    """Frequency class ceil(lg(n/occ) * lg n) with deterministic rounding.

    The product is snapped to the nearest integer when within a few ulps,
    so near-boundary values round identically across platforms.
    """
    x = (math.log2(n) - math.log2(occ)) * math.log2(n)
    nearest = round(x)
    if abs(x - nearest) <= 4 * math.ulp(max(abs(x), 1.0)):
        return int(nearest)
    return int(math.ceil(x))


def poly_threshold(n: int) -> int:
    """Largest class alphabet stored in a wavelet tree."""
    return max(2, int(math.floor(math.log2(n))))


class Partition:
    """The class decomposition of a sequence over effective alphabet [1..sigma]."""

    def __init__(self, seq: np.ndarray):
        n = seq.size
        sigma = int(seq.max())
        occ = np.bincount(seq, minlength=sigma + 1)[1:]
        if (occ == 0).any():
            raise InputError("alphabet is not effective: some symbol is absent")
        self.n = n
        self.sigma = sigma
        self.occ = occ.astype(np.int64)
        # raw class value per symbol
        self.symbol_class = np.array(
            [class_of(n, int(c)) for c in occ], dtype=np.int64
        )
        self.class_values = np.unique(self.symbol_class)  # sorted raw ids
        self.num_classes = self.class_values.size
        # dense class index per symbol (1-based)
        self._dense = {int(v): i + 1 for i, v in enumerate(self.class_values)}
        self.symbol_class_dense = np.array(
            [self._dense[int(v)] for v in self.symbol_class], dtype=np.int64
        )
        self.t_raw = self.symbol_class[seq - 1]
        self.t_dense = self.symbol_class_dense[seq - 1]
        # class sub-alphabet sizes and projected sub-sequence lengths
        self.sub_sigma = np.bincount(
            self.symbol_class_dense, minlength=self.num_classes + 1
        )[1:]
        self.sub_len = np.zeros(self.num_classes, dtype=np.int64)
        for ci in range(1, self.num_classes + 1):
            self.sub_len[ci - 1] = int(self.occ[self.symbol_class_dense == ci].sum())

    def identity_terms(self):
        """(n*H0(t), sum |s_l| lg sigma_l, n*H0(s), n/lg n)."""
        n = self.n
        nh0t = n * distribution_entropy(self.sub_len)
        sub = float(
            sum(
                int(l) * math.log2(int(s))
                for l, s in zip(self.sub_len, self.sub_sigma)
                if s > 1
            )
        )
        nh0s = n * distribution_entropy(self.occ)
        slack = n / math.log2(n) if n > 1 else 0.0
        return nh0t, sub, nh0s, slack

    def check_invariants(self):
        n = self.n
        if n == 1:
            assert self.num_classes == 1 and self.class_values[0] == 0
            return
        lgn = math.log2(n)
        assert self.class_values[0] >= 0
        assert self.class_values[-1] <= math.ceil(lgn * lgn)
        # class-size bound, for every member symbol
        factor = 2.0 ** (1.0 / lgn)
        for a in range(1, self.sigma + 1):
            ci = self.symbol_class_dense[a - 1]
            bound = factor * int(self.sub_len[ci - 1]) / int(self.occ[a - 1])
            assert self.sub_sigma[ci - 1] < bound, (
                f"class size bound violated for symbol {a}"
            )
        nh0t, sub, nh0s, slack = self.identity_terms()
        assert nh0t + sub < nh0s + slack + 1e-9 * max(1.0, nh0s + slack)


class ApSequence:
    """Compressed sequence with access/rank/select over [1..sigma] or a
    general alphabet remapped through a dictionary."""

    def __init__(self, seq, general_alphabet: bool = False, variant: str = "i"):
        arr = np.asarray(seq, dtype=np.int64)
        if arr.size == 0:
            raise InputError("empty input")
        if arr.min() < 1:
            raise InputError(f"invalid symbol {int(arr.min())}: symbols must be >= 1")
        if variant not in ("i", "ii"):
            raise InputError("variant must be 'i' or 'ii'")
        self.variant = variant
        if general_alphabet:
            uniq = np.unique(arr)
            self.alphabet_dict = SparseDictionary(uniq)
            arr = np.searchsorted(uniq, arr).astype(np.int64) + 1
        else:
            self.alphabet_dict = None
        self.partition = Partition(arr)
        self.n = self.partition.n
        self.sigma = self.partition.sigma
        self._build(arr)

    def _build(self, arr: np.ndarray):
        part = self.partition
        self.T = PolySequence(part.t_dense, alphabet_size=part.num_classes)
        self.M = PolySequence(
            part.symbol_class_dense, alphabet_size=part.num_classes
        )
        threshold = poly_threshold(self.n)
        self.subs = []
        for ci in range(1, part.num_classes + 1):
            mask = part.t_dense == ci
            # project and remap to the class-local alphabet [1..sigma_l]:
            # c-th smallest symbol of the class becomes c
            proj = arr[mask]
            members = np.flatnonzero(part.symbol_class_dense == ci) + 1
            local = np.searchsorted(members, proj) + 1
            sig_l = int(part.sub_sigma[ci - 1])
            if sig_l <= threshold:
                self.subs.append(PolySequence(local, alphabet_size=sig_l))
            else:
                self.subs.append(LargeSequence(local, alphabet_size=sig_l))

    # --- symbol mapping ---------------------------------------------------------

    def _internal_symbol(self, a: int):
        if self.alphabet_dict is None:
            return a if 1 <= a <= self.sigma else None
        if not 1 <= a <= self.alphabet_dict.universe_max:
            return None
        return self.alphabet_dict.index_of(a)

    def _external_symbol(self, a: int) -> int:
        if self.alphabet_dict is None:
            return a
        return self.alphabet_dict.value_of(a)

    # --- queries -----------------------------------------------------------------

    def __len__(self):
        return self.n

    def access(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise OutOfRangeError(f"position {i} out of [1..{self.n}]")
        li = self.T.access(i)
        pos = self.T.rank(li, i)
        x = self.subs[li - 1].access(pos)
        return self._external_symbol(self.M.select(li, x))

    def rank(self, a: int, i: int) -> int:
        if not 0 <= i <= self.n:
            raise OutOfRangeError(f"rank position {i} out of [0..{self.n}]")
        ai = self._internal_symbol(a)
        if ai is None or i == 0:
            return 0
        li = self.M.access(ai)
        c = self.M.rank(li, ai)
        return self.subs[li - 1].rank(c, self.T.rank(li, i))

    def select(self, a: int, j: int) -> int:
        if j < 1:
            raise OutOfRangeError("select rank must be >= 1")
        ai = self._internal_symbol(a)
        if ai is None:
            raise NotFoundError(f"symbol {a} does not occur")
        li = self.M.access(ai)
        c = self.M.rank(li, ai)
        return self.T.select(li, self.subs[li - 1].select(c, j))

    def occurrences(self, a: int) -> int:
        ai = self._internal_symbol(a)
        return int(self.partition.occ[ai - 1]) if ai else 0

    def decode(self) -> np.ndarray:
        """Reconstruct the stored sequence in one vectorized pass."""
        classes = self.T.decode()
        out = np.empty(self.n, dtype=np.int64)
        members_by_class = {}
        dense = self.partition.symbol_class_dense
        for ci in range(1, self.partition.num_classes + 1):
            members_by_class[ci] = np.flatnonzero(dense == ci) + 1
        for ci, sub in enumerate(self.subs, 1):
            mask = classes == ci
            out[mask] = members_by_class[ci][sub.decode() - 1]
        if self.alphabet_dict is not None:
            values = self.alphabet_dict.values()
            out = values[out - 1]
        return out

    # --- reporting ---------------------------------------------------------------

    def space_report(self) -> EntropyReport:
        part = self.partition
        nh0t, sub, nh0s, slack = part.identity_terms()
        sections = [
            SectionSpace("T", self.T.payload_bits() + self.T.topology_bits(),
                         self.T.directory_bits()),
            SectionSpace("M", self.M.payload_bits() + self.M.topology_bits(),
                         self.M.directory_bits()),
        ]
        for ci, s in enumerate(self.subs, 1):
            raw = int(part.class_values[ci - 1])
            payload = s.payload_bits()
            if isinstance(s, PolySequence):
                payload += s.topology_bits()
            sections.append(SectionSpace(f"s_{raw}", payload, s.directory_bits()))
        if self.alphabet_dict is not None:
            sections.append(
                SectionSpace("dict", self.alphabet_dict.payload_bits(),
                             self.alphabet_dict.directory_bits())
            )
        total = sum(x.payload_bits + x.directory_bits for x in sections)
        return EntropyReport(
            n=self.n,
            sigma=self.sigma,
            h0_bits=nh0s,
            partition_bits=nh0t + sub,
            bound_bits=nh0s + slack,
            total_bits=total,
            sections=sections,
            extra={"num_classes": part.num_classes, "variant": self.variant},
        )

    def payload_bits(self) -> int:
        return sum(s.payload_bits for s in self.space_report().sections)

    # --- serialization -------------------------------------------------------------

    def serialize(self) -> bytes:
        w = ByteWriter()
        w.u64(self.n)
        w.u8(1 if self.variant == "ii" else 0)
        w.u8(1 if self.alphabet_dict is not None else 0)
        if self.alphabet_dict is not None:
            w.blob(self.alphabet_dict.serialize())
        w.u64_array(self.partition.class_values.astype(np.uint64))
        w.blob(self.T.serialize())
        w.blob(self.M.serialize())
        w.u64(len(self.subs))
        for s in self.subs:
            w.u8(1 if isinstance(s, PolySequence) else 2)
            w.blob(s.serialize())
        return w.getvalue()

    @classmethod
    def deserialize(cls, data: bytes) -> "ApSequence":
        r = ByteReader(data)
        obj = cls.__new__(cls)
        obj.n = r.u64()
        obj.variant = "ii" if r.u8() else "i"
        obj.alphabet_dict = SparseDictionary.deserialize(r.blob()) if r.u8() else None
        class_values = r.u64_array().astype(np.int64)
        obj.T = PolySequence.deserialize(r.blob())
        obj.M = PolySequence.deserialize(r.blob())
        nsub = r.u64()
        obj.subs = []
        for _ in range(nsub):
            kind = r.u8()
            blob = r.blob()
            obj.subs.append(
                PolySequence.deserialize(blob) if kind == 1
                else LargeSequence.deserialize(blob)
            )
        obj._restore_partition(class_values)
        return obj

    def _restore_partition(self, class_values: np.ndarray):
        """Rebuild the partition summary from the stored components."""
        part = Partition.__new__(Partition)
        part.n = self.n
        part.sigma = self.M.n
        part.class_values = class_values
        part.num_classes = class_values.size
        dense = np.array(
            [self.M.access(a) for a in range(1, part.sigma + 1)], dtype=np.int64
        )
        part.symbol_class_dense = dense
        part.symbol_class = class_values[dense - 1]
        part.sub_sigma = np.bincount(dense, minlength=part.num_classes + 1)[1:]
        part.sub_len = np.array([len(s) for s in self.subs], dtype=np.int64)
        occ = np.zeros(part.sigma, dtype=np.int64)
        for a in range(1, part.sigma + 1):
            ci = dense[a - 1]
            c = self.M.rank(ci, a)
            occ[a - 1] = self.subs[ci - 1].occurrences(c)
        part.occ = occ
        part.t_raw = None  # not materialized after load
        part.t_dense = None
        self.partition = part
        self.sigma = part.sigma


def build_partition(seq, general_alphabet: bool = False, variant: str = "i") -> ApSequence:
    """Build an ApSequence and verify the partition invariants."""
    aps = ApSequence(seq, general_alphabet=general_alphabet, variant=variant)
    aps.partition.check_invariants()
    return aps
