"""Genus-expansion series: y(x), the derivative chain f_i, and phi_g.

y(x) is the compositional inverse of x(y) = -sqrt(y) J0'(2 sqrt(y)); its
double antiderivative is the genus-0 generating series phi_0.  The chain

    f_1 = 1 - 1/y',   f_2 = y''/(y')^3,   f_i = f_{i-1}'/y'   (i >= 3)

feeds the closed genus-g form (g >= 2)

    phi_g = sum_{|l|=3g-3} <tau_2^{l_2} ... tau_{3g-2}^{l_{3g-2}}>_g
            * (y')^(2(g-1)+||l||) * prod_i f_i^{l_i}/l_i!

whose x^n coefficient must reproduce the normalized volume v_{g,n} computed
through the independent kappa-to-tau route.  The f_i also satisfy functional
equations as series in y, checked here coefficient by coefficient, and the
n-th derivative of phi_g has the same shape with tau_0^n inserted; both
identities are verified exactly.

Genus 1 is deliberately unsupported here: the closed form starts at genus 2,
and V_{1,n} stays available through the volume route.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .kappavol import MultiIndex, enumerate_multiindices, volume
from .qseries import Series, bessel_x_of_y, factorial, first_mismatch, format_rational
from .taucalc import TauCalculator

__all__ = [
    "GenusExpansionContext",
    "CheckReport",
    "build_y",
    "build_phi0",
    "build_f",
    "build_f_lemma",
    "build_phi_g",
    "check_derivative_formula",
    "check_induction_identity",
    "induction_sides",
    "lemma_report",
    "theorem_reports",
]


def build_y(order: int) -> Series:
    """y(x) with y(0) = 0, y'(0) = 1, by reverting the Bessel-derivative series."""
    return bessel_x_of_y(order).revert()


def build_phi0(order: int) -> Series:
    """phi_0, the genus-0 generating series: double antiderivative of y,
    both constants zero (its x^0..x^2 coefficients vanish)."""
    if order < 3:
        raise ValueError("phi_0 needs order >= 3")
    return build_y(order - 2).antiderivative(0).antiderivative(0)


class GenusExpansionContext:
    """y, y', and the f_i chain, all valid to a common truncation order.

    Every derivative costs one order, so the construction works at order
    order + i_max internally and exposes series truncated to `order`; the
    exposed f_i are then reliable for all i <= i_max.  Immutable once built;
    repeated powers of y' and of each f_i are cached per context.
    """

    def __init__(self, order: int, i_max: int):
        if order < 1:
            raise ValueError("order must be >= 1")
        if i_max < 2:
            raise ValueError("i_max must be >= 2")
        work = order + i_max
        y = build_y(work)
        y_prime = y.derivative()
        inv_y_prime = y_prime.reciprocal()
        f = {1: 1 - inv_y_prime, 2: y_prime.derivative() * inv_y_prime**3}
        for i in range(3, i_max + 1):
            f[i] = f[i - 1].derivative() * inv_y_prime
        self.order = order
        self.i_max = i_max
        self.y = y.truncate(order)
        self.y_prime = y_prime.truncate(order)
        self._f = {i: s.truncate(order) for i, s in f.items()}
        self._powers: dict = {}

    def f(self, i: int) -> Series:
        if not 1 <= i <= self.i_max:
            raise ValueError(f"f_{i} not built; context holds i = 1..{self.i_max}")
        return self._f[i]

    def y_prime_power(self, exponent: int) -> Series:
        return self._power(("y'", exponent), self.y_prime)

    def f_power(self, i: int, exponent: int) -> Series:
        return self._power((i, exponent), self.f(i))

    def _power(self, key: Tuple, base: Series) -> Series:
        cached = self._powers.get(key)
        if cached is None:
            cached = self._powers[key] = base ** key[1]
        return cached


def build_f(i: int, ctx: GenusExpansionContext) -> Series:
    """The i-th derivative-chain function, valid to ctx.order."""
    return ctx.f(i)


def build_f_lemma(i: int, ctx: GenusExpansionContext, order: Optional[int] = None) -> Series:
    """f_i through its functional equation
    f_i = sum_{k>=0} (-1)^(i+k) / (i+k-1)! * y^k / k!, composed with y(x).

    Only asserted for i >= 2: at i = 1 the k = 0 term would contradict
    f_1(0) = 0, and the identity there holds only with the sum started at
    k = 1, so i = 1 is rejected rather than picking a reading.
    Since y has valuation 1, summing k up to the truncation order is exact.
    """
    if i < 2:
        raise ValueError("the functional-equation form is asserted only for i >= 2")
    n = ctx.order if order is None else min(order, ctx.order)
    outer = Series(
        Fraction((-1) ** (i + k), factorial(i + k - 1) * factorial(k)) for k in range(n + 1)
    )
    return outer.compose(ctx.y.truncate(n))


def _phi_term(ctx: GenusExpansionContext, g: int, n: int, l: MultiIndex,
              bracket: Fraction) -> Series:
    term = ctx.y_prime_power(2 * (g - 1) + n + l.size)
    denom = 1
    for i, mult in l.items():
        term = term * ctx.f_power(i, mult)
        denom *= factorial(mult)
    return term * (bracket / denom)


def build_phi_g(g: int, ctx: GenusExpansionContext,
                calc: Optional[TauCalculator] = None) -> Series:
    """The closed genus-g generating series, g >= 2, to ctx.order."""
    if g < 2:
        raise ValueError("the closed genus form starts at g = 2 (use build_phi0 for g = 0)")
    if ctx.i_max < 3 * g - 2:
        raise ValueError(f"context needs i_max >= {3 * g - 2} for genus {g}")
    if calc is None:
        calc = TauCalculator()
    total = Series.zero(ctx.order)
    for l in enumerate_multiindices(3 * g - 3, 3 * g - 2):
        bracket = calc.tau_batch(g, l.items())
        if bracket:
            total = total + _phi_term(ctx, g, 0, l, bracket)
    return total


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one exact verification, with the first offending
    coefficient (or scalar pair) when it fails."""

    check: str
    passed: bool
    g: Optional[int] = None
    n: Optional[int] = None
    i: Optional[int] = None
    mismatch: Optional[tuple] = None  # (power or None, lhs, rhs)
    detail: Optional[dict] = None

    def to_json_dict(self) -> dict:
        out: dict = {"check": self.check}
        for field in ("g", "n", "i"):
            value = getattr(self, field)
            if value is not None:
                out[field] = value
        if self.detail:
            out.update(self.detail)
        out["pass"] = self.passed
        if self.mismatch is None:
            out["first_mismatch"] = None
        else:
            power, lhs, rhs = self.mismatch
            out["first_mismatch"] = {
                "power": power,
                "lhs": format_rational(lhs),
                "rhs": format_rational(rhs),
            }
        return out


def check_derivative_formula(g: int, n: int, ctx: GenusExpansionContext,
                             calc: Optional[TauCalculator] = None) -> CheckReport:
    """Compare the n-th formal derivative of phi_g with its closed form

        sum_{|l|=3g-3+n} <tau_0^n tau_2^{l_2} ...>_g
        * (y')^(2(g-1)+n+||l||) * prod f_i^{l_i}/l_i!

    as truncated series (exactly, to the order both sides support)."""
    if g < 2:
        raise ValueError("derivative check applies to g >= 2")
    if n < 0 or n > ctx.order:
        raise ValueError("need 0 <= n <= ctx.order")
    if ctx.i_max < 3 * g - 2 + n:
        raise ValueError(f"context needs i_max >= {3 * g - 2 + n}")
    if calc is None:
        calc = TauCalculator()
    lhs = build_phi_g(g, ctx, calc)
    for _ in range(n):
        lhs = lhs.derivative()
    rhs = Series.zero(ctx.order)
    for l in enumerate_multiindices(3 * g - 3 + n, 3 * g - 2 + n):
        bracket = calc.tau_batch(g, l.items(), zeros=n)
        if bracket:
            rhs = rhs + _phi_term(ctx, g, n, l, bracket)
    mm = first_mismatch(lhs, rhs)
    return CheckReport("derivative_formula", mm is None, g=g, n=n, mismatch=mm)


def induction_sides(g: int, n: int, l: MultiIndex,
                    calc: Optional[TauCalculator] = None) -> Tuple[Fraction, Fraction]:
    """Both sides of the index-shift identity that removes one tau_0:

        <tau_0^n prod tau_i^{l_i}> = l_2 (2(g-1) + (n-1) + (||l||-1))
            <tau_0^(n-1) prod tau_i^{l_i - d_{i,2}}>
          + sum_{j>=3} l_j <tau_0^(n-1) prod tau_i^{l_i - d_{i,j} + d_{i,j-1}}>

    (string equation followed by dilaton on the freed tau_1)."""
    if n < 1:
        raise ValueError("the identity removes a tau_0, so n >= 1")
    if l.weight != 3 * g - 3 + n:
        raise ValueError(f"multi-index weight {l.weight} != dimension {3 * g - 3 + n}")
    if calc is None:
        calc = TauCalculator()
    lhs = calc.tau_batch(g, l.items(), zeros=n)
    rhs = Fraction(0)
    l2 = l.get(2)
    if l2:
        euler = 2 * (g - 1) + (n - 1) + (l.size - 1)
        rhs += l2 * euler * calc.tau_batch(g, l.decrement(2).items(), zeros=n - 1)
    for j, mult in l.items():
        if j >= 3:
            rhs += mult * calc.tau_batch(g, l.shift_down(j).items(), zeros=n - 1)
    return lhs, rhs


def check_induction_identity(g: int, n: int, l: MultiIndex,
                             calc: Optional[TauCalculator] = None) -> bool:
    lhs, rhs = induction_sides(g, n, l, calc)
    return lhs == rhs


def lemma_report(i: int, ctx: GenusExpansionContext) -> CheckReport:
    """Exact coefficient comparison of the derivative-chain f_i with its
    functional-equation form."""
    mm = first_mismatch(build_f(i, ctx), build_f_lemma(i, ctx))
    return CheckReport("f_functional_equation", mm is None, i=i, mismatch=mm)


def theorem_reports(g: int, n_max: int, ctx: GenusExpansionContext,
                    calc: Optional[TauCalculator] = None) -> list:
    """Per-coefficient comparison [x^n] phi_g == v_{g,n} for n = 0..n_max.

    The two sides come from disjoint routes that share only the correlator
    engine: the genus-expansion series versus the kappa-to-tau volume sum.
    """
    if calc is None:
        calc = TauCalculator()
    if n_max > ctx.order:
        raise ValueError(f"context order {ctx.order} < n_max {n_max}")
    phi = build_phi_g(g, ctx, calc)
    reports = []
    for n in range(n_max + 1):
        lhs = phi[n]
        rhs = volume(g, n, calc).v
        mm = None if lhs == rhs else (n, lhs, rhs)
        reports.append(
            CheckReport("genus_series_vs_volume", mm is None, g=g, n=n, mismatch=mm)
        )
    return reports
