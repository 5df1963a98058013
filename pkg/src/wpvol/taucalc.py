"""Exact psi-class intersection numbers <tau_{d1} ... tau_{dn}>_g.

Everything reduces to the normalization <tau_0^3>_0 = 1 and <tau_1>_1 = 1/24:
the string equation removes a tau_0 insertion, the dilaton equation removes a
tau_1 once only tau_1's remain, and the Dijkgraaf-Verlinde-Verlinde (KdV /
Virasoro) recursion handles the rest.  Marked points are distinguishable, so
the genus-splitting sums run over ordered pairs of labeled submultisets.

Values are exact rationals and are memoized per canonical key; the memo can
be persisted to a plain-text cache file (one "g|d1,...,dn|p/q" entry per
line, indices sorted descending, lines sorted for diff-stability).
"""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, NamedTuple, Optional, Tuple

from .qseries import double_factorial, format_rational, parse_rational

__all__ = [
    "TauKey",
    "MemoStore",
    "TauCalculator",
    "CacheFormatError",
    "save_cache",
    "load_cache",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)
_TORUS_ONE_POINT = Fraction(1, 24)

Indices = Iterable[int]


class TauKey(NamedTuple):
    """Canonical identifier of one correlator: genus plus the sorted index multiset."""

    genus: int
    indices: Tuple[int, ...]

    @classmethod
    def make(cls, genus: int, indices: Indices) -> "TauKey":
        if genus < 0:
            raise ValueError(f"genus must be >= 0, got {genus}")
        idx = tuple(sorted((int(d) for d in indices), reverse=True))
        if idx and idx[-1] < 0:
            raise ValueError("tau indices must be >= 0")
        return cls(int(genus), idx)

    @property
    def n(self) -> int:
        return len(self.indices)

    @property
    def dimension(self) -> int:
        return 3 * self.genus - 3 + self.n

    def is_stable(self) -> bool:
        return 2 * self.genus - 2 + self.n > 0

    def render(self) -> str:
        ds = ",".join(map(str, self.indices)) if self.indices else "-"
        return f"{self.genus}|{ds}"


_BASE_SPHERE = TauKey(0, (0, 0, 0))
_BASE_TORUS = TauKey(1, (1,))


class CacheFormatError(ValueError):
    """Malformed correlator cache file; carries the offending line number."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"cache line {line_no}: {reason}")
        self.line_no = line_no


class MemoStore:
    """TauKey -> Fraction cache, optionally tied to a backing text file.

    Entries are write-once: a stored value never changes, so concurrent
    writers racing on the same key are benign (both compute the same value).
    """

    def __init__(self, entries: Optional[Mapping[TauKey, Fraction]] = None,
                 path: Optional[str] = None):
        self.entries: dict = dict(entries or {})
        self.path = path

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MemoStore):
            return NotImplemented
        return self.entries == other.entries


def save_cache(store: MemoStore, path: Optional[str] = None) -> None:
    """Write every entry to `path` (or the store's own path), sorted for diffs."""
    target = path if path is not None else store.path
    if target is None:
        raise ValueError("no cache path given")
    lines = sorted(f"{key.render()}|{format_rational(value)}"
                   for key, value in store.entries.items())
    with open(target, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line + "\n")


def load_cache(path: str) -> MemoStore:
    """Read a cache file back; the round trip is bit-exact."""
    entries: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split("|")
            if len(parts) != 3:
                raise CacheFormatError(line_no, f"expected 3 '|'-separated fields, got {len(parts)}")
            g_text, ds_text, value_text = parts
            try:
                genus = int(g_text)
            except ValueError:
                raise CacheFormatError(line_no, f"malformed genus {g_text!r}") from None
            if ds_text == "-":
                indices: Tuple[int, ...] = ()
            else:
                try:
                    indices = tuple(int(d) for d in ds_text.split(","))
                except ValueError:
                    raise CacheFormatError(line_no, f"malformed index list {ds_text!r}") from None
            try:
                value = parse_rational(value_text)
                key = TauKey.make(genus, indices)
            except ValueError as exc:
                raise CacheFormatError(line_no, str(exc)) from None
            entries[key] = value
    return MemoStore(entries, path=path)


def _expand(counts: Counter) -> Tuple[int, ...]:
    out = []
    for v in sorted(counts, reverse=True):
        out.extend([v] * counts[v])
    return tuple(out)


def _ordered_splits(counts: Counter):
    """Yield (part, binomial weight, complement) over all labeled submultisets.

    The weight of choosing c_v of the m_v copies of value v is
    prod C(m_v, c_v), because the underlying marked points are labeled.
    """
    values = sorted(counts)
    mults = [counts[v] for v in values]
    for choice in itertools.product(*(range(m + 1) for m in mults)):
        left: list = []
        right: list = []
        weight = 1
        for v, m, c in zip(values, mults, choice):
            left.extend([v] * c)
            right.extend([v] * (m - c))
            weight *= comb(m, c)
        yield tuple(left), weight, tuple(right)


class TauCalculator:
    """Memoizing evaluator of tau-correlators.

    tau() is a pure function of the canonical key.  The memo relies on
    atomic dict writes; racing threads recompute identical values and
    either write wins, so cold and warm caches agree entry for entry.
    """

    def __init__(self, store: Optional[MemoStore] = None):
        self.store = store if store is not None else MemoStore()

    # -- evaluation ----------------------------------------------------------

    def tau(self, genus: int, indices: Indices) -> Fraction:
        """<tau_{d1} ... tau_{dn}>_g; 0 for unstable keys or dimension mismatch."""
        return self.tau_key(TauKey.make(genus, indices))

    def tau_key(self, key: TauKey) -> Fraction:
        g, ds = key.genus, key.indices
        n = len(ds)
        if 2 * g - 2 + n <= 0:
            return _ZERO
        if sum(ds) != 3 * g - 3 + n:
            return _ZERO
        memo = self.store.entries
        cached = memo.get(key)
        if cached is not None:
            return cached
        if key == _BASE_SPHERE:
            value = _ONE
        elif key == _BASE_TORUS:
            value = _TORUS_ONE_POINT
        elif ds[-1] == 0:
            value = self.string_reduced(g, ds)
        elif ds[0] == 1:
            value = self.dilaton_reduced(g, ds)
        else:
            value = self.dvv_reduced(g, ds, ds[0])
        memo[key] = value
        return value

    def tau_batch(self, genus: int, entries, zeros: int = 0) -> Fraction:
        """Correlator of a multiplicity vector: `entries` maps index i to its
        multiplicity (a mapping or (i, mult) pairs); `zeros` prepends tau_0's."""
        items = entries.items() if hasattr(entries, "items") else entries
        ds = [0] * zeros
        for i, mult in items:
            ds.extend([i] * mult)
        return self.tau(genus, ds)

    # -- one-step reductions (exposed for the consistency suite) --------------

    def string_reduced(self, genus: int, indices: Indices) -> Fraction:
        """Remove one tau_0 via the string equation: sum over lowering each
        other index by one (indices already at 0 drop out)."""
        ds = sorted(indices, reverse=True)
        if not ds or ds[-1] != 0:
            raise ValueError("string equation needs a tau_0 insertion")
        rest = Counter(ds[:-1])
        total = _ZERO
        for v in sorted(rest):
            if v == 0:
                continue
            lowered = rest.copy()
            lowered[v] -= 1
            lowered[v - 1] += 1
            total += rest[v] * self.tau_key(TauKey(genus, _expand(lowered)))
        return total

    def dilaton_reduced(self, genus: int, indices: Indices) -> Fraction:
        """Remove one tau_1 via the dilaton equation, picking up the Euler
        factor 2g - 2 + n of the remaining n-pointed correlator."""
        ds = sorted(indices, reverse=True)
        if 1 not in ds:
            raise ValueError("dilaton equation needs a tau_1 insertion")
        ds.remove(1)
        return Fraction(2 * genus - 2 + len(ds)) * self.tau_key(TauKey(genus, tuple(ds)))

    def dvv_reduced(self, genus: int, indices: Indices, pivot: int) -> Fraction:
        """One application of the DVV recursion, pivoting on an index k >= 2:

            (2k+1)!! <tau_k prod tau_{d_j}>_g =
                sum_j [(2(k+d_j)-1)!! / (2d_j-1)!!] <tau_{k+d_j-1} rest_j>_g
              + 1/2 sum_{a+b=k-2} (2a+1)!!(2b+1)!! [ <tau_a tau_b rest>_{g-1}
                  + sum_{g1+g2=g, I+J=rest} <tau_a I>_{g1} <tau_b J>_{g2} ]

        with (-1)!! = 1, unstable terms equal to 0, and the splitting sum over
        ordered pairs of labeled submultisets.  The pivot may be any index
        >= 2 present in the key; the result does not depend on the choice.
        """
        if pivot < 2:
            raise ValueError("DVV recursion pivots on an index >= 2")
        ds = sorted(indices, reverse=True)
        try:
            ds.remove(pivot)
        except ValueError:
            raise ValueError(f"pivot {pivot} not present in {ds}") from None
        k = pivot
        rest = Counter(ds)

        total = _ZERO
        for v in sorted(rest):
            merged = rest.copy()
            merged[v] -= 1
            merged[k + v - 1] += 1
            coeff = Fraction(rest[v] * double_factorial(2 * (k + v) - 1),
                             double_factorial(2 * v - 1))
            total += coeff * self.tau_key(TauKey.make(genus, _expand(merged)))

        split_sum = _ZERO
        rest_tuple = _expand(rest)
        splits = list(_ordered_splits(rest))
        for a in range(k - 1):
            b = k - 2 - a
            weight_ab = double_factorial(2 * a + 1) * double_factorial(2 * b + 1)
            inner = _ZERO
            if genus >= 1:
                inner += self.tau_key(TauKey.make(genus - 1, rest_tuple + (a, b)))
            for g1 in range(genus + 1):
                g2 = genus - g1
                for part, mult, complement in splits:
                    first = self.tau_key(TauKey.make(g1, part + (a,)))
                    if not first:
                        continue
                    second = self.tau_key(TauKey.make(g2, complement + (b,)))
                    if second:
                        inner += mult * first * second
            split_sum += weight_ab * inner

        total += split_sum / 2
        return total / double_factorial(2 * k + 1)
