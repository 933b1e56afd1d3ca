"""Effective level-norm thresholds for the torsion tower.

Every threshold has the shape ``(2*pi*q)^(2n)`` for an exact rational ``q``,
so it is evaluated once as an outward-rounded interval.  Comparisons with a
level norm refine the working precision until the interval no longer
contains the norm; ``satisfied=True`` is therefore a certificate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal, localcontext
from fractions import Fraction
from functools import lru_cache

from mpmath.ctx_iv import MPIntervalContext

from .errors import RMTorsionError
from .intervals import iv_lower, iv_upper

DEFAULT_PREC = 113
MAX_PREC = 4096
VARIANTS = ("torsion", "principal")


@lru_cache(maxsize=None)
def _ctx(prec):
    ctx = MPIntervalContext()
    ctx.prec = prec
    return ctx


def _iv(ctx, x):
    x = Fraction(x)
    return ctx.mpf(x.numerator) / x.denominator


def _check_n(n):
    if int(n) != n or n < 1:
        raise RMTorsionError("degree must be a positive integer")
    return int(n)


def _two_pi_power(q, n, prec=DEFAULT_PREC):
    ctx = _ctx(prec)
    return (2 * ctx.pi * _iv(ctx, q)) ** (2 * n)


def _rational(x):
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


def ample_threshold(n, lam=1, prec=DEFAULT_PREC):
    """Norm above which ``K - (lam - 1) D`` is ample modulo the boundary."""
    n = _check_n(n)
    lam = _rational(lam)
    if lam < 0:
        raise RMTorsionError("lambda must be nonnegative")
    return _two_pi_power(lam / n, n, prec)


def green_griffiths_threshold(n, prec=DEFAULT_PREC):
    """Norm above which entire curves land in the boundary."""
    return ample_threshold(n, n, prec)


def general_type_threshold(n, prec=DEFAULT_PREC):
    return ample_threshold(n, 1, prec)


def minimal_model_threshold(variant="torsion", prec=DEFAULT_PREC):
    """Surface case: ``(2 pi)^4`` for torsion covers, ``(2 pi)^2`` for principal ones."""
    if variant == "torsion":
        return _two_pi_power(1, 2, prec)
    if variant == "principal":
        return _two_pi_power(1, 1, prec)
    raise RMTorsionError(f"variant must be one of {VARIANTS}")


def elliptic_free_threshold(n):
    return 4 ** _check_n(n)


def nef_slope_coefficient(n, nm, variant="torsion", prec=DEFAULT_PREC):
    """Coefficient ``1 - (n / 2 pi) |Nm n|^(1/2n)``; exponent ``1/n`` for principal covers.

    ``nm`` may be a rational number or an mpmath interval.
    """
    n = _check_n(n)
    if variant not in VARIANTS:
        raise RMTorsionError(f"variant must be one of {VARIANTS}")
    ctx = _ctx(prec)
    x = ctx.mpf(nm) if not isinstance(nm, (int, Fraction, float)) else _iv(ctx, _rational(nm))
    if x.a < 0:
        raise RMTorsionError("level norm must be positive")
    k = 2 * n if variant == "torsion" else n
    root = ctx.exp(ctx.log(x) / k)
    return 1 - n * root / (2 * ctx.pi)


@dataclass
class ThresholdReport:
    name: str
    formula: str
    inputs: dict
    value: object
    satisfied: bool | None = None
    extra: dict = field(default_factory=dict)

    @property
    def lower(self):
        return iv_lower(self.value)

    @property
    def upper(self):
        return iv_upper(self.value)

    def to_json(self, digits=15):
        lo, hi = self.lower, self.upper
        out = {"name": self.name, "formula": self.formula,
               "inputs": {k: str(v) for k, v in self.inputs.items()},
               "value": float((lo + hi) / 2),
               "interval": [_sci(lo, digits, ROUND_FLOOR), _sci(hi, digits, ROUND_CEILING)],
               "satisfied": self.satisfied}
        out.update(self.extra)
        return out


def _sci(x, digits, rounding):
    """Scientific notation rounded in the given direction, so printed intervals stay outward."""
    with localcontext() as c:
        c.prec = digits + 1
        c.rounding = rounding
        d = Decimal(x.numerator) / Decimal(x.denominator)
    return f"{d:.{digits}e}"


def exceeds(nm, compute, prec=DEFAULT_PREC):
    """Decide ``nm > value`` where ``compute(prec)`` encloses the value.

    Returns None only if the decision is still open at MAX_PREC.
    """
    nm = _rational(nm)
    while prec <= MAX_PREC:
        v = compute(prec)
        if nm > iv_upper(v):
            return True
        if nm <= iv_lower(v):
            return False
        prec *= 2
    return None


def evaluate_level(n, nm, lam=None, variant="torsion"):
    """All thresholds for a level of norm ``nm`` in degree ``n``, with verdicts."""
    n = _check_n(n)
    nm = _rational(nm)
    if nm <= 0:
        raise RMTorsionError("level norm must be positive")
    lam = Fraction(1) if lam is None else _rational(lam)
    reports = []

    def add(name, formula, compute, inputs, extra=None):
        reports.append(ThresholdReport(name, formula, inputs, compute(DEFAULT_PREC),
                                       exceeds(nm, compute), extra or {}))

    add("ample", "(2*pi*lambda/n)^(2n)", lambda p: ample_threshold(n, lam, p),
        {"n": n, "lambda": lam, "Nm": nm},
        {"divisor": f"K - ({lam} - 1)D"})
    add("green_griffiths", "(2*pi)^(2n)", lambda p: green_griffiths_threshold(n, p),
        {"n": n, "Nm": nm})
    add("general_type", "(2*pi/n)^(2n)", lambda p: general_type_threshold(n, p),
        {"n": n, "Nm": nm})
    if n == 2:
        formula = "(2*pi)^4" if variant == "torsion" else "(2*pi)^2"
        add("minimal_model", formula, lambda p: minimal_model_threshold(variant, p),
            {"n": n, "Nm": nm, "variant": variant})
    ef = elliptic_free_threshold(n)
    reports.append(ThresholdReport("elliptic_free", "4^n", {"n": n, "Nm": nm},
                                   _iv(_ctx(DEFAULT_PREC), ef), nm > ef))
    slope = nef_slope_coefficient(n, nm, variant)
    exp = "1/(2n)" if variant == "torsion" else "1/n"
    reports.append(ThresholdReport(
        "nef_slope", f"1 - (n/(2*pi)) * Nm^({exp})",
        {"n": n, "Nm": nm, "variant": variant}, slope, None,
        {"divisor": "K + c D with c the value"}))
    return reports
