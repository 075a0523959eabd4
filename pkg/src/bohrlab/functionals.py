"""Refined Bohr-type coefficient sums with truncation-error certificates.

Every evaluator consumes a slice series (coefficient moduli along one
direction), sums the printed formula up to the truncation order, and adds a
certified bound for the dropped terms.  Reports carry ``margin = value +
tail_error - 1`` so a nonpositive margin certifies the inequality at that
radius: the tail always lands on the unsafe side.

The gap-sum evaluator also accepts an index shift for its squared block.
One of the norm-type statements indexes that block at ``s + m`` while the
linear block runs over ``s >= N``; the shift reproduces that asymmetric
indexing verbatim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .series import (
    Certificate,
    CoefficientSeries,
    LacunarySeries,
    MAX_EVAL_RADIUS,
    RadiusError,
    TailWeight,
    tail_bound,
)

__all__ = [
    "ConstraintResult",
    "ConstraintViolation",
    "EvaluationReport",
    "FunctionalKind",
    "FunctionalTag",
    "SupportError",
    "c_constant",
    "constraint_check",
    "eval_improved_bohr",
    "eval_gap_sum",
    "eval_lacunary_sum",
    "eval_rogosinski",
    "eval_rogosinski_center",
    "lemma_tail_bound_check",
    "report_csv_fields",
    "report_to_json",
    "s_star",
    "zero_schwarz_slice",
    "monomial_schwarz_slice",
]

_SUPPORT_TOL = 1e-12


class SupportError(ValueError):
    """A slice carries coefficients outside the support the formula assumes."""


class ConstraintViolation(ValueError):
    """The polynomial-weight constraint fails, so the evaluation is undefined."""


@dataclass(frozen=True)
class EvaluationReport:
    """Value, certified truncation error, and margin of one evaluation.

    ``margin`` is ``value + tail_error`` minus the comparison level (1 unless
    the inputs record another), computed on the unsafe side; ``inputs`` keeps
    provenance: functional kind, parameters, radius, input descriptor, and
    whether the input's class certificate makes the verdict meaningful.
    """

    value: float
    tail_error: float
    margin: float
    inputs: Mapping[str, object]


class FunctionalTag(str, Enum):
    A_PM = "A_PM"            # refined lacunary sum
    D_NM = "D_NM"            # refined gap sum
    G_MPN = "G_MPN"          # composed center term + tail sums
    H_PN = "H_PN"            # center term at the origin + tail sums
    I_M = "I_M"              # refined sum plus polynomial coefficient energy
    LEMMA_TAIL = "LEMMA_TAIL"  # tail-bound slack check


@dataclass(frozen=True)
class FunctionalKind:
    """Tagged choice of evaluator plus its parameters."""

    tag: FunctionalTag
    p: int | None = None
    m: int | None = None
    n: int | None = None
    p_exp: float | None = None
    d: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "tag", FunctionalTag(self.tag))
        if self.d is not None:
            object.__setattr__(self, "d", tuple(float(x) for x in self.d))
        t = self.tag
        if t is FunctionalTag.A_PM:
            if self.p is None or self.m is None or not 0 <= self.m <= self.p:
                raise ValueError("A_PM requires integers 0 <= m <= p")
        elif t is FunctionalTag.D_NM:
            if self.n is None or self.m is None or self.m < 0 or self.n < self.m + 1:
                raise ValueError("D_NM requires integers m >= 0 and N >= m + 1")
        elif t is FunctionalTag.G_MPN:
            if self.m is None or self.m < 1 or self.n is None or self.n < 1:
                raise ValueError("G_MPN requires integers m >= 1 and N >= 1")
            _check_p_exp(self.p_exp)
        elif t is FunctionalTag.H_PN:
            if self.n is None or self.n < 1:
                raise ValueError("H_PN requires an integer N >= 1")
            _check_p_exp(self.p_exp)
        elif t is FunctionalTag.I_M:
            if self.d is None:
                raise ValueError("I_M requires the weight sequence d")
            if any(x < 0.0 for x in self.d):
                raise ValueError("weights d_i must be nonnegative")
        else:  # LEMMA_TAIL
            if self.n is None or self.n < 1:
                raise ValueError("LEMMA_TAIL requires an integer N >= 1")

    # -- constructors ----------------------------------------------------
    @classmethod
    def lacunary(cls, p: int, m: int) -> "FunctionalKind":
        return cls(FunctionalTag.A_PM, p=p, m=m)

    @classmethod
    def gap(cls, n: int, m: int) -> "FunctionalKind":
        return cls(FunctionalTag.D_NM, n=n, m=m)

    @classmethod
    def rogosinski(cls, m: int, p_exp: float, n: int) -> "FunctionalKind":
        return cls(FunctionalTag.G_MPN, m=m, p_exp=float(p_exp), n=n)

    @classmethod
    def rogosinski_center(cls, p_exp: float, n: int) -> "FunctionalKind":
        return cls(FunctionalTag.H_PN, p_exp=float(p_exp), n=n)

    @classmethod
    def improved(cls, d: Sequence[float]) -> "FunctionalKind":
        return cls(FunctionalTag.I_M, d=tuple(d))

    @classmethod
    def tail_lemma(cls, n: int) -> "FunctionalKind":
        return cls(FunctionalTag.LEMMA_TAIL, n=n)

    def params(self) -> dict:
        out: dict[str, object] = {}
        for name in ("p", "m", "n", "p_exp"):
            if getattr(self, name) is not None:
                out[name] = getattr(self, name)
        if self.d is not None:
            out["d"] = list(self.d)
        return out

    def label(self) -> str:
        inner = ",".join(f"{k}={v}" for k, v in self.params().items())
        return f"{self.tag.value}({inner})"


def _check_p_exp(p_exp) -> None:
    if p_exp is None or not 0.0 < float(p_exp) <= 2.0:
        raise ValueError("the center exponent must lie in (0, 2]")


def _check_radius(r: float, *, allow_zero: bool = False) -> float:
    r = float(r)
    lo_ok = r >= 0.0 if allow_zero else r > 0.0
    if not lo_ok or r >= MAX_EVAL_RADIUS:
        raise RadiusError(
            f"radius {r!r} outside the supported range "
            f"{'[0' if allow_zero else '(0'}, {MAX_EVAL_RADIUS})"
        )
    return r


def _certified(series: CoefficientSeries) -> bool:
    return series.certificate is not Certificate.UNKNOWN


def _describe(obj: CoefficientSeries | LacunarySeries) -> str:
    if isinstance(obj, LacunarySeries):
        return (
            f"lacunary(m={obj.m}, p={obj.p}, T={obj.g.truncation_order}, "
            f"cert={obj.g.certificate.value})"
        )
    return f"series(T={obj.truncation_order}, cert={obj.certificate.value})"


def _report(
    kind: str,
    params: dict,
    r: float,
    value: float,
    tail: float,
    descriptor: str,
    certified: bool,
    threshold: float = 1.0,
) -> EvaluationReport:
    value, tail, threshold = float(value), float(tail), float(threshold)
    inputs = {"kind": kind, "params": params, "r": r, "function": descriptor,
              "certified": certified}
    if threshold != 1.0:
        inputs["threshold"] = threshold
    return EvaluationReport(
        value=value,
        tail_error=tail,
        margin=value + tail - threshold,
        inputs=inputs,
    )


def eval_lacunary_sum(f: LacunarySeries, r: float) -> EvaluationReport:
    """Refined sum for a slice supported on ``{s*p + m}``.

    value = sum_s |g_s| r^(sp+m)
          + (1/(r^m + |g_0| r^m) + r^(p-m)/(1-r^p)) * sum_{s>=1} |g_s|^2 r^(2(sp+m))

    evaluated with lacunary-aware tails (geometric in r^p).
    """
    m, p, g = f.m, f.p, f.g
    if not 0 <= m <= p:
        raise ValueError("the lacunary sum requires 0 <= m <= p")
    r = _check_radius(r)
    mods = np.abs(np.asarray(g.coeffs))
    rp = r**p
    rm = r**m
    powers = rp ** np.arange(mods.size)
    linear = rm * float(np.dot(mods, powers))
    lin_tail = rm * tail_bound(g, rp, TailWeight.LINEAR)
    sq = rm * rm * float(np.dot(mods[1:] ** 2, (powers[1:] ** 2)))
    sq_tail = rm * rm * tail_bound(g, rp, TailWeight.SQUARED)
    value, tail = linear, lin_tail
    if sq > 0.0 or sq_tail > 0.0:
        bracket = 1.0 / (rm * (1.0 + mods[0])) + r ** (p - m) / (1.0 - rp)
        value += bracket * sq
        tail += bracket * sq_tail
    return _report("A_PM", {"p": p, "m": m}, r, value, tail, _describe(f), _certified(g))


def eval_gap_sum(
    f: CoefficientSeries,
    m: int,
    n: int,
    r: float,
    squared_shift: int = 0,
) -> EvaluationReport:
    """Refined sum for a slice supported on ``{m} union {s >= N}``.

    value = |P_m| + sum_{s>=N} |P_s|
          + (1/(r^m + |P_m|) + r^(1-m)/(1-r)) * sum_{s>=N} |P_{s+shift}|^2

    with |P_s| = |c_s| r^s.  ``squared_shift`` reproduces the asymmetric
    squared-block indexing of the norm-type statement (shift = m); the
    default 0 is the plain refined gap sum.  At r = 0 every series term
    vanishes and the base term alone is returned; the bracket is never
    formed when its sum is empty, so no division occurs.
    """
    if m < 0 or n < m + 1:
        raise ValueError("the gap sum requires m >= 0 and N >= m + 1")
    if squared_shift < 0:
        raise ValueError("squared_shift must be >= 0")
    r = _check_radius(r, allow_zero=True)
    mods = np.abs(np.asarray(f.coeffs))
    T = f.truncation_order
    for s in range(min(n, T + 1)):
        if s != m and mods[s] > _SUPPORT_TOL:
            raise SupportError(
                f"coefficient c_{s} = {mods[s]!r} violates the support "
                f"{{{m}}} | {{s >= {n}}}"
            )
    pm = (mods[m] if m <= T else 0.0) * r**m
    idx = np.arange(n, T + 1, dtype=float)
    linear = pm + float(np.dot(mods[n:], r**idx))
    lin_tail = tail_bound(f, r, TailWeight.LINEAR)
    start = n + squared_shift
    sq_idx = np.arange(start, T + 1, dtype=float)
    sq = float(np.dot(mods[start:] ** 2, r ** (2.0 * sq_idx)))
    sq_tail = tail_bound(f, r, TailWeight.SQUARED)
    value, tail = linear, lin_tail
    if sq > 0.0 or sq_tail > 0.0:
        bracket = 1.0 / (r**m + pm) + r ** (1 - m) / (1.0 - r)
        value += bracket * sq
        tail += bracket * sq_tail
    params: dict[str, object] = {"n": n, "m": m}
    if squared_shift:
        params["squared_shift"] = squared_shift
    return _report("D_NM", params, r, value, tail, _describe(f), _certified(f))


def zero_schwarz_slice() -> CoefficientSeries:
    """The zero map: a Schwarz slice of every order."""
    return CoefficientSeries((0j,), 0.0, Certificate.SCHUR_EXACT)


def monomial_schwarz_slice(order: int, phase: complex = 1.0 + 0j) -> CoefficientSeries:
    """``lam -> phase * lam^order`` with |phase| = 1; the proof's slice choice."""
    if order < 1:
        raise ValueError("a Schwarz slice vanishes at 0, so order >= 1")
    if abs(abs(phase) - 1.0) > 1e-12:
        raise ValueError("phase must be unimodular")
    coeffs = (0j,) * order + (complex(phase),)
    return CoefficientSeries(coeffs, 0.0, Certificate.SCHUR_EXACT)


def _check_schwarz_slice(w: CoefficientSeries, order: int) -> None:
    if w.certificate is Certificate.UNKNOWN:
        raise ValueError("the inner map must carry a disk-self-map certificate")
    for s in range(min(order, w.truncation_order + 1)):
        if abs(w.coeffs[s]) > _SUPPORT_TOL:
            raise ValueError(
                f"inner map has a nonzero coefficient at index {s} < order {order}"
            )
    # Coefficients beyond the stored ones must also vanish below the order.
    if w.truncation_order + 1 < order and w.coefficient_bound > 0.0:
        raise ValueError("inner map truncation too short to certify its vanishing order")


def _composed_center(
    f: CoefficientSeries, w: CoefficientSeries, p_exp: float, r: float
) -> tuple[float, float]:
    """|f(w(r))|^p_exp with a certified upper increment.

    w(r) is a partial sum with LINEAR tail; the error transports through f
    with the growth bound |f'| <= 1/(1 - rho)^2 on |lam| <= rho < 1, and the
    exponent is applied monotonically, so (x + err)^p - x^p certifies it.
    """
    zeta = w(r)
    dw = tail_bound(w, r, TailWeight.LINEAR)
    zmag = abs(zeta)
    if zmag >= 1.0:
        raise RadiusError("inner map escaped the disk; certificate violated")
    x = abs(f(zeta))
    df = tail_bound(f, zmag, TailWeight.LINEAR)
    if dw > 0.0:
        df += dw / (1.0 - min(zmag + dw, MAX_EVAL_RADIUS)) ** 2
    head = x**p_exp
    err = (x + df) ** p_exp - head
    return head, err


def _rogosinski_core(
    f: CoefficientSeries,
    p_exp: float,
    n: int,
    r: float,
    w: CoefficientSeries,
    kind: str,
    params: dict,
    descriptor: str,
) -> EvaluationReport:
    _check_p_exp(p_exp)
    if n < 1:
        raise ValueError("N must be >= 1")
    r = _check_radius(r)
    head, head_err = _composed_center(f, w, p_exp, r)
    mods = np.abs(np.asarray(f.coeffs))
    T = f.truncation_order
    b = f.coefficient_bound

    idx = np.arange(n, T + 1, dtype=float)
    linear = float(np.dot(mods[n:], r**idx))
    lin_tail = tail_bound(f, r, TailWeight.LINEAR)

    t = (n - 1) // 2
    middle = 0.0
    mid_tail = 0.0
    if t >= 1:
        upto = min(t, T)
        middle = float(np.sum(mods[1 : upto + 1] ** 2)) * r**n / (1.0 - r)
        if t > T:
            mid_tail = (t - T) * b * b * r**n / (1.0 - r)

    sq_idx = np.arange(t + 1, T + 1, dtype=float)
    sq = float(np.dot(mods[t + 1 :] ** 2, r ** (2.0 * sq_idx)))
    sq_tail = tail_bound(f, r, TailWeight.SQUARED)
    bracket = 1.0 / (1.0 + mods[0]) + r / (1.0 - r)

    value = head + linear + middle + bracket * sq
    tail = head_err + lin_tail + mid_tail + bracket * sq_tail
    return _report(kind, params, r, value, tail, descriptor, _certified(f))


def eval_rogosinski(
    f: CoefficientSeries,
    schwarz_order: int,
    p_exp: float,
    n: int,
    r: float,
    w: CoefficientSeries | None = None,
) -> EvaluationReport:
    """Composed center term plus tail sums, with t = floor((N-1)/2):

    value = |f(w(r))|^p + sum_{s>=N} |P_s|
          + sgn(t) sum_{s=1..t} |P_s|^2 r^(N-2s)/(1-r)
          + (1/(1+|f(0)|) + r/(1-r)) sum_{s>t} |P_s|^2

    ``w`` is a certified slice of an order-``schwarz_order`` Schwarz mapping
    (so |w(lam)| <= |lam|^order); the default is the monomial lam^order.
    """
    if schwarz_order < 1:
        raise ValueError("the Schwarz order must be >= 1")
    if w is None:
        w = monomial_schwarz_slice(schwarz_order)
    _check_schwarz_slice(w, schwarz_order)
    params = {"m": schwarz_order, "p_exp": p_exp, "n": n}
    return _rogosinski_core(f, p_exp, n, r, w, "G_MPN", params, _describe(f))


def eval_rogosinski_center(
    f: CoefficientSeries, p_exp: float, n: int, r: float
) -> EvaluationReport:
    """The order-infinity limit: the composed center collapses to |f(0)|^p."""
    params = {"p_exp": p_exp, "n": n}
    return _rogosinski_core(
        f, p_exp, n, r, zero_schwarz_slice(), "H_PN", params, _describe(f)
    )


def s_star(f: CoefficientSeries, r: float) -> float:
    """Weighted coefficient energy ``sum_s s |P_s(z)|^2`` with its tail added."""
    head, tail = _s_star_parts(f, r)
    return head + tail


def _s_star_parts(f: CoefficientSeries, r: float) -> tuple[float, float]:
    r = _check_radius(r, allow_zero=True)
    mods = np.abs(np.asarray(f.coeffs))
    T = f.truncation_order
    s = np.arange(1, T + 1, dtype=float)
    head = float(np.dot(s * mods[1:] ** 2, r ** (2.0 * s))) if T >= 1 else 0.0
    return head, tail_bound(f, r, TailWeight.S_STAR)


@lru_cache(maxsize=None)
def c_constant(s: int) -> float:
    """max over a in [0, 1] of ``a (1+a)^2 (1-a^2)^(2s-2)``.

    Located by a 10^4-point grid followed by golden-section refinement of the
    bracketing interval to width 1e-12.  s = 1 is admitted as the endpoint
    case (maximum 4 at a = 1), which cross-checks the fixed first weight of
    the constraint.
    """
    if s < 1:
        raise ValueError("s must be >= 1")

    def fn(a: float) -> float:
        return a * (1.0 + a) ** 2 * (1.0 - a * a) ** (2 * s - 2)

    grid = np.linspace(0.0, 1.0, 10_000)
    vals = grid * (1.0 + grid) ** 2 * (1.0 - grid * grid) ** (2 * s - 2)
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = fn(x1), fn(x2)
    while hi - lo > 1e-12:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = fn(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = fn(x1)
    return float(max(f1, f2, fn(lo), fn(hi)))


@dataclass(frozen=True)
class ConstraintResult:
    ok: bool
    lhs: float
    excess: float


def constraint_check(d: Sequence[float]) -> ConstraintResult:
    """Check ``8 d_1 (3/8)^2 + sum_{s>=2} 2(2s-1) c_s d_s (3/8)^(2s) <= 1``.

    The first weight is the exact integer 8 (the endpoint maximum 4 doubled),
    so the boundary case d = (8/9,) lands at equality up to roundoff.
    """
    d = tuple(float(x) for x in d)
    if any(x < 0.0 for x in d):
        raise ValueError("weights d_i must be nonnegative")
    q = (3.0 / 8.0) ** 2
    lhs = 0.0
    for s, weight in enumerate(d, start=1):
        if weight == 0.0:
            continue
        factor = 8.0 if s == 1 else 2.0 * (2 * s - 1) * c_constant(s)
        lhs += factor * weight * q**s
    ok = lhs <= 1.0 + 1e-12
    return ConstraintResult(ok=ok, lhs=lhs, excess=max(0.0, lhs - 1.0))


def eval_improved_bohr(
    f: CoefficientSeries, d: Sequence[float], r: float
) -> EvaluationReport:
    """Refined sum plus the polynomial ``G(t) = sum d_i t^i`` of the energy.

    value = [refined sum with m = 0, N = 1] + G(S*) where S* is the weighted
    coefficient energy; requires :func:`constraint_check` to pass.
    """
    check = constraint_check(d)
    if not check.ok:
        raise ConstraintViolation(
            f"weight constraint violated by excess {check.excess!r}"
        )
    base = eval_gap_sum(f, 0, 1, r)
    head, tail = _s_star_parts(f, r)
    g_val = 0.0
    g_err = 0.0
    for i, weight in enumerate(d, start=1):
        if weight == 0.0:
            continue
        g_val += weight * head**i
        g_err += weight * ((head + tail) ** i - head**i)
    value = base.value + g_val
    total_tail = base.tail_error + g_err
    params = {"d": list(float(x) for x in d)}
    return _report("I_M", params, r, value, total_tail, _describe(f), _certified(f))


def lemma_tail_bound_check(f: CoefficientSeries, n: int, r: float) -> float:
    """Conservative slack of the refined tail bound at radius ``r``.

    Returns RHS - (LHS + LHS tail certificates) where, with t = floor((N-1)/2),

    LHS = sum_{s>=N} |P_s| + sgn(t) sum_{s=1..t} |P_s|^2 r^(N-2s)/(1-r)
        + (1/(1+|f(0)|) + r/(1-r)) sum_{s>t} |P_s|^2
    RHS = (1 - |f(0)|^2) r^N / (1 - r).

    The contract is slack >= 0 up to roundoff: the truncation certificates
    are already charged against the slack.
    """
    if n < 1:
        raise ValueError("N must be >= 1")
    r = _check_radius(r, allow_zero=True)
    mods = np.abs(np.asarray(f.coeffs))
    T = f.truncation_order
    b = f.coefficient_bound

    idx = np.arange(n, T + 1, dtype=float)
    linear = float(np.dot(mods[n:], r**idx))
    lin_tail = tail_bound(f, r, TailWeight.LINEAR)

    t = (n - 1) // 2
    middle = 0.0
    mid_tail = 0.0
    if t >= 1:
        upto = min(t, T)
        middle = float(np.sum(mods[1 : upto + 1] ** 2)) * r**n / (1.0 - r)
        if t > T:
            mid_tail = (t - T) * b * b * r**n / (1.0 - r)

    sq_idx = np.arange(t + 1, T + 1, dtype=float)
    sq = float(np.dot(mods[t + 1 :] ** 2, r ** (2.0 * sq_idx)))
    sq_tail = tail_bound(f, r, TailWeight.SQUARED)
    bracket = 1.0 / (1.0 + mods[0]) + r / (1.0 - r)

    lhs = linear + middle + bracket * sq + lin_tail + mid_tail + bracket * sq_tail
    rhs = (1.0 - mods[0] ** 2) * r**n / (1.0 - r)
    return rhs - lhs


def report_to_json(report: EvaluationReport) -> dict:
    return {
        "value": report.value,
        "tail_error": report.tail_error,
        "margin": report.margin,
        "inputs": dict(report.inputs),
    }


def report_csv_fields(report: EvaluationReport) -> list:
    inp = report.inputs
    params = inp.get("params", {})
    return [
        inp.get("kind", ""),
        ";".join(f"{k}={v}" for k, v in params.items()),
        inp.get("r", ""),
        report.value,
        report.tail_error,
        report.margin,
    ]
