"""Growth of the normalized volumes v_{g,n} = V_{g,n}/(n!(3g-3+n)!).

For large n the volumes behave like C^n * n^(-1 + 5(g-1)/2) with a growth
constant C independent of the genus.  C is predicted by the dominant
singularity of y(x): the radius of convergence is x_c = x(u_c), where u_c is
the smallest positive root of x'(u) = J0(2 sqrt(u)), i.e. u_c = (j_{0,1}/2)^2
with j_{0,1} the first zero of the Bessel function J0.  So C = 1/x_c.

The root and the radius are computed in exact rational arithmetic: bisection
on partial sums of the alternating series for J0(2 sqrt(u)), with the
alternating-series remainder as a rigorous enclosure.  Everything downstream
is carried as 50-digit decimals and reported at 10, so reruns are
bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Context, Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Tuple

from .kappavol import volume
from .taucalc import TauCalculator

__all__ = [
    "GrowthFit",
    "PRECISION",
    "REPORT_DIGITS",
    "bessel_j0_first_zero",
    "critical_point",
    "critical_radius",
    "predicted_growth_constant",
    "fit_growth",
    "compare_growth_constants",
    "growth_ratio_diagnostic",
    "predicted_exponent",
]

#: digits carried internally / reported in JSON
PRECISION = 50
REPORT_DIGITS = 10

_REPORT_CTX = Context(prec=REPORT_DIGITS)

_BISECTION_STEPS = 240
_TAIL_TOL = Fraction(1, 10**80)


def _fmt(x: Decimal) -> str:
    return str(_REPORT_CTX.create_decimal(x))


def _to_decimal(q: Fraction) -> Decimal:
    return Decimal(q.numerator) / Decimal(q.denominator)


def _j0_of_u_bracket(u: Fraction, tol: Fraction) -> Tuple[Fraction, Fraction]:
    """Rigorous enclosure of J0(2 sqrt(u)) = sum_m (-u)^m / (m!)^2 for u >= 0.

    Terms strictly decrease in magnitude once m^2 > u; from there the
    alternating remainder is bounded by the first omitted term.
    """
    total = Fraction(1)
    term = Fraction(1)
    m = 0
    while True:
        m += 1
        term *= -u / (m * m)
        total += term
        if m * m > u:
            bound = abs(term) * u / ((m + 1) * (m + 1))
            if bound < tol:
                return total - bound, total + bound


def _x_of_u_bracket(u: Fraction, tol: Fraction) -> Tuple[Fraction, Fraction]:
    """Enclosure of x(u) = sum_{k>=1} (-1)^(k-1) u^k / ((k-1)! k!), same scheme."""
    total = term = u
    k = 1
    while True:
        k += 1
        term *= -u / (k * (k - 1))
        total += term
        if k * (k - 1) > u:
            bound = abs(term) * u / ((k + 1) * k)
            if bound < tol:
                return total - bound, total + bound


@lru_cache(maxsize=1)
def _critical_interval() -> Tuple[Fraction, Fraction]:
    """Rational interval around u_c, the first positive root of J0(2 sqrt(u))."""
    lo, hi = Fraction(1), Fraction(2)
    lo_bracket = _j0_of_u_bracket(lo, _TAIL_TOL)
    hi_bracket = _j0_of_u_bracket(hi, _TAIL_TOL)
    if lo_bracket[0] <= 0 or hi_bracket[1] >= 0:
        raise RuntimeError("sign assumptions for the bisection bracket failed")
    for _ in range(_BISECTION_STEPS):
        mid = (lo + hi) / 2
        b_lo, b_hi = _j0_of_u_bracket(mid, _TAIL_TOL)
        if b_lo > 0:
            lo = mid
        elif b_hi < 0:
            hi = mid
        else:
            # enclosure straddles zero: mid is already within the tail
            # tolerance of the root, far below anything we report
            break
    return lo, hi


@lru_cache(maxsize=1)
def _critical_values() -> Tuple[Fraction, Fraction, Fraction, Fraction]:
    """(u_lo, u_hi, x_lo, x_hi): enclosures of the critical point and radius."""
    u_lo, u_hi = _critical_interval()
    mid = (u_lo + u_hi) / 2
    x_lo, x_hi = _x_of_u_bracket(mid, _TAIL_TOL)
    # |dx/du| = |J0(2 sqrt u)| <= 1, so the u-interval widens x by at most its width
    pad = u_hi - u_lo
    return u_lo, u_hi, x_lo - pad, x_hi + pad


def critical_point() -> Decimal:
    """u_c = (j_{0,1}/2)^2, where y(x) stops converging."""
    u_lo, u_hi, _, _ = _critical_values()
    with localcontext(Context(prec=PRECISION)):
        return +_to_decimal((u_lo + u_hi) / 2)


def bessel_j0_first_zero() -> Decimal:
    """First positive zero of J0, from the bisected critical point."""
    u_lo, u_hi, _, _ = _critical_values()
    with localcontext(Context(prec=PRECISION)):
        return 2 * _to_decimal((u_lo + u_hi) / 2).sqrt()


def critical_radius() -> Decimal:
    """x_c = x(u_c), the radius of convergence of y(x)."""
    _, _, x_lo, x_hi = _critical_values()
    with localcontext(Context(prec=PRECISION)):
        return +_to_decimal((x_lo + x_hi) / 2)


def predicted_growth_constant() -> Decimal:
    """C = 1/x_c, correct to well over 10 digits."""
    with localcontext(Context(prec=PRECISION)):
        return 1 / critical_radius()


def predicted_exponent(g: int) -> Fraction:
    """The power of n in the growth law: -1 + 5(g-1)/2."""
    return Fraction(-1) + Fraction(5 * (g - 1), 2)


@dataclass(frozen=True)
class GrowthFit:
    """Least-squares fit of log v_{g,n} = n log C + e log n + const."""

    g: int
    n_min: int
    n_max: int
    c_est: Decimal
    exponent_est: Decimal
    residual: Decimal

    def to_json_dict(self, predicted: Optional[Decimal] = None) -> dict:
        out = {
            "g": self.g,
            "C_est": _fmt(self.c_est),
            "exponent_est": _fmt(self.exponent_est),
        }
        if predicted is not None:
            out["predicted_C"] = _fmt(predicted)
            with localcontext(Context(prec=PRECISION)):
                out["rel_dev"] = _fmt(abs(self.c_est - predicted) / predicted)
        out["n_range"] = [self.n_min, self.n_max]
        return out


def _solve3(mat, vec):
    """3x3 linear solve over Decimal, partial pivoting."""
    m = [list(row) + [v] for row, v in zip(mat, vec)]
    for col in range(3):
        piv = max(range(col, 3), key=lambda r: abs(m[r][col]))
        if not m[piv][col]:
            raise ArithmeticError("singular normal equations")
        m[col], m[piv] = m[piv], m[col]
        for r in range(col + 1, 3):
            factor = m[r][col] / m[col][col]
            for c in range(col, 4):
                m[r][c] -= factor * m[col][c]
    out = [Decimal(0)] * 3
    for r in (2, 1, 0):
        s = m[r][3]
        for c in range(r + 1, 3):
            s -= m[r][c] * out[c]
        out[r] = s / m[r][r]
    return out


def fit_growth(g: int, n_min: int, n_max: int,
               calc: Optional[TauCalculator] = None) -> GrowthFit:
    """Fit the growth law to the exact volumes over n in [n_min, n_max].

    Needs at least 6 data points with v_{g,n} > 0; the exact rationals are
    converted to 50-digit decimals only here, at the very last step.
    """
    ns = list(range(n_min, n_max + 1))
    if len(ns) < 6:
        raise ValueError("growth fit needs at least 6 data points")
    if calc is None:
        calc = TauCalculator()
    values = [volume(g, n, calc).v for n in ns]
    if any(v <= 0 for v in values):
        raise ValueError("growth fit needs positive normalized volumes")
    with localcontext(Context(prec=PRECISION)):
        rows = []
        targets = []
        for n, v in zip(ns, values):
            dn = Decimal(n)
            rows.append((dn, dn.ln(), Decimal(1)))
            targets.append(_to_decimal(v).ln())
        ata = [[sum(r[a] * r[b] for r in rows) for b in range(3)] for a in range(3)]
        aty = [sum(r[a] * t for r, t in zip(rows, targets)) for a in range(3)]
        beta = _solve3(ata, aty)
        sq = Decimal(0)
        for r, t in zip(rows, targets):
            err = t - sum(r[c] * beta[c] for c in range(3))
            sq += err * err
        residual = (sq / len(rows)).sqrt()
        c_est = beta[0].exp()
    return GrowthFit(g, n_min, n_max, c_est, beta[1], residual)


def compare_growth_constants(g_list: Sequence[int], n_max: int,
                             n_min: Optional[int] = None,
                             calc: Optional[TauCalculator] = None) -> dict:
    """Fit each genus over [n_min or n_max//2, n_max] and report every fitted
    constant against the Bessel prediction, plus pairwise deviations when
    more than one genus is given."""
    if calc is None:
        calc = TauCalculator()
    low = n_max // 2 if n_min is None else n_min
    fits = [fit_growth(g, low, n_max, calc) for g in g_list]
    predicted = predicted_growth_constant()
    report = {
        "predicted_C": _fmt(predicted),
        "fits": [fit.to_json_dict(predicted) for fit in fits],
    }
    if len(fits) > 1:
        pairwise = []
        with localcontext(Context(prec=PRECISION)):
            for a in range(len(fits)):
                for b in range(a + 1, len(fits)):
                    dev = abs(fits[a].c_est - fits[b].c_est) / fits[b].c_est
                    pairwise.append(
                        {"g_a": fits[a].g, "g_b": fits[b].g, "rel_dev": _fmt(dev)}
                    )
        report["pairwise"] = pairwise
    return report


def growth_ratio_diagnostic(g: int, n_min: int, n_max: int,
                            calc: Optional[TauCalculator] = None) -> list:
    """The sequence v_{g,n+1}/v_{g,n} * ((n+1)/n)^(-e) with e the predicted
    exponent; it should settle toward the growth constant over the range."""
    if calc is None:
        calc = TauCalculator()
    e = predicted_exponent(g)
    out = []
    with localcontext(Context(prec=PRECISION)):
        de = _to_decimal(e)
        for n in range(n_min, n_max):
            ratio = volume(g, n + 1, calc).v / volume(g, n, calc).v
            scale = ((Decimal(n + 1) / Decimal(n)).ln() * de).exp()
            out.append(_to_decimal(ratio) / scale)
    return out
