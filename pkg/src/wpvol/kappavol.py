"""Weil-Petersson volumes V_{g,n} = <kappa_1^(3g-3+n)> from tau-correlators.

The kappa-to-tau conversion expresses V_{g,n}/(3g-3+n)! as a signed sum over
multi-indices l = (l_2, l_3, ...) of weight |l| = sum (i-1) l_i equal to the
complex dimension d = 3g-3+n:

    V_{g,n}/d! = sum_{|l|=d} <tau_0^n tau_2^{l_2} tau_3^{l_3} ...>_g
                 * (-1)^(g-1+n+||l||) / prod_i l_i! ((i-1)!)^{l_i}

with ||l|| = sum l_i.  The geometric volume of the moduli space carries an
extra pi^(2d)/(n! d!) on top of V_{g,n}; the normalized value
v_{g,n} = V_{g,n}/(n! d!) is what the generating series track.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Optional, Tuple

from .qseries import factorial, format_rational
from .taucalc import TauCalculator

__all__ = [
    "MultiIndex",
    "VolumeRecord",
    "enumerate_multiindices",
    "volume",
    "volume_table",
    "wp_volume_display",
    "CONVENTIONAL_ZEROS",
]

#: (g, n) pairs that are defined to have V = 0 rather than computed.
CONVENTIONAL_ZEROS = frozenset({(0, 0), (0, 1), (0, 2), (1, 0)})


@dataclass(frozen=True)
class MultiIndex:
    """Multiplicity vector l_i for i >= 2; only nonzero entries are stored.

    weight = |l| = sum (i-1) l_i   and   size = ||l|| = sum l_i.
    """

    entries: Tuple[Tuple[int, int], ...]  # (i, l_i) pairs, ascending in i

    def __post_init__(self):
        last = 1
        for i, mult in self.entries:
            if i < 2:
                raise ValueError(f"multi-index entries start at i = 2, got {i}")
            if mult < 1:
                raise ValueError(f"stored multiplicities must be >= 1, got l_{i} = {mult}")
            if i <= last:
                raise ValueError("entries must be strictly ascending in i")
            last = i

    @classmethod
    def from_dict(cls, mapping: Mapping[int, int]) -> "MultiIndex":
        return cls(tuple(sorted((i, m) for i, m in mapping.items() if m)))

    def items(self) -> Tuple[Tuple[int, int], ...]:
        return self.entries

    def get(self, i: int) -> int:
        for j, mult in self.entries:
            if j == i:
                return mult
        return 0

    @property
    def weight(self) -> int:
        return sum((i - 1) * mult for i, mult in self.entries)

    @property
    def size(self) -> int:
        return sum(mult for _, mult in self.entries)

    @property
    def max_index(self) -> int:
        return self.entries[-1][0] if self.entries else 0

    def decrement(self, i: int) -> "MultiIndex":
        """l with one copy of index i removed."""
        if self.get(i) < 1:
            raise ValueError(f"multi-index has no l_{i} to remove")
        return MultiIndex.from_dict({**dict(self.entries), i: self.get(i) - 1})

    def shift_down(self, j: int) -> "MultiIndex":
        """l with one copy of index j >= 3 turned into an index j - 1."""
        if j < 3:
            raise ValueError("can only shift indices j >= 3 down")
        if self.get(j) < 1:
            raise ValueError(f"multi-index has no l_{j} to shift")
        updated = dict(self.entries)
        updated[j] = updated[j] - 1
        updated[j - 1] = updated.get(j - 1, 0) + 1
        return MultiIndex.from_dict(updated)

    def to_json_dict(self) -> dict:
        return {str(i): mult for i, mult in self.entries}

    def __repr__(self) -> str:
        inner = ", ".join(f"l{i}={m}" for i, m in self.entries)
        return f"MultiIndex({inner})"


def _ascending_partitions(n: int) -> Iterator[Tuple[int, ...]]:
    """All partitions of n as ascending part tuples, in lexicographic order."""
    if n == 0:
        yield ()
        return
    a = [0] * (n + 1)
    k = 1
    a[1] = n
    while k != 0:
        x = a[k - 1] + 1
        y = a[k] - 1
        k -= 1
        while x <= y:
            a[k] = x
            y -= x
            k += 1
        a[k] = x + y
        yield tuple(a[: k + 1])


def enumerate_multiindices(weight: int, max_i: int) -> Iterator[MultiIndex]:
    """Every multi-index with |l| = weight and indices 2 <= i <= max_i, once each.

    Equivalent to the partitions of `weight` into parts <= max_i - 1 (a part p
    contributes one l_{p+1}); yielded in lexicographic order of the ascending
    part tuples, so downstream output is reproducible.
    """
    if weight < 0:
        raise ValueError("weight must be >= 0")
    if max_i < 2:
        raise ValueError("max_i must be >= 2")
    max_part = max_i - 1
    for parts in _ascending_partitions(weight):
        if parts and parts[-1] > max_part:
            continue
        counts: dict = {}
        for p in parts:
            counts[p + 1] = counts.get(p + 1, 0) + 1
        yield MultiIndex.from_dict(counts)


@dataclass(frozen=True)
class VolumeRecord:
    """One volume: exact V = <kappa_1^dim>, normalized v = V/(n! dim!)."""

    g: int
    n: int
    dim: int
    V: Fraction
    v: Fraction

    @property
    def pi_power(self) -> int:
        return 2 * self.dim

    def to_json_dict(self) -> dict:
        return {
            "g": self.g,
            "n": self.n,
            "dim": self.dim,
            "V": format_rational(self.V),
            "v": format_rational(self.v),
            "pi_power": self.pi_power,
        }

    def csv_row(self) -> str:
        return f"{self.g},{self.n},{self.dim},{format_rational(self.V)},{format_rational(self.v)}"


def volume(g: int, n: int, calc: Optional[TauCalculator] = None) -> VolumeRecord:
    """V_{g,n} via the kappa-to-tau conversion; conventional zeros are looked
    up before any computation, and negative dimension also returns 0."""
    if g < 0 or n < 0:
        raise ValueError("genus and point count must be >= 0")
    dim = 3 * g - 3 + n
    if (g, n) in CONVENTIONAL_ZEROS or dim < 0:
        return VolumeRecord(g, n, dim, Fraction(0), Fraction(0))
    if calc is None:
        calc = TauCalculator()
    total = Fraction(0)
    for l in enumerate_multiindices(dim, max(3 * g - 2 + n, 2)):
        bracket = calc.tau_batch(g, l.items(), zeros=n)
        if not bracket:
            continue
        denom = 1
        for i, mult in l.items():
            denom *= factorial(mult) * factorial(i - 1) ** mult
        term = bracket / denom
        if (g - 1 + n + l.size) % 2:
            term = -term
        total += term
    v = total / factorial(n)
    return VolumeRecord(g, n, dim, total * factorial(dim), v)


def volume_table(g: int, n_max: int, calc: Optional[TauCalculator] = None) -> list:
    if calc is None:
        calc = TauCalculator()
    return [volume(g, n, calc) for n in range(n_max + 1)]


def wp_volume_display(
    g: int, n: int, digits: int, calc: Optional[TauCalculator] = None
) -> Tuple[Fraction, int, str]:
    """(exact v, power of pi, decimal string) for the geometric volume
    v * pi^(2 dim).  The decimal rendering is the only place floating
    evaluation happens.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    rec = volume(g, n, calc)
    if not rec.v:
        return rec.v, rec.pi_power, "0"
    import mpmath

    with mpmath.workdps(digits + 10):
        value = (
            mpmath.mpf(rec.v.numerator)
            / mpmath.mpf(rec.v.denominator)
            * mpmath.pi ** rec.pi_power
        )
        rendered = mpmath.nstr(value, digits)
    return rec.v, rec.pi_power, rendered
