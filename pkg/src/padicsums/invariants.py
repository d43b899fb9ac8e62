"""Decay invariants: branch contact orders and the oscillation exponent.

The magnitude of the sum S_m decays like p^(m(1-1/sigma)), where sigma is
the largest contact order of the weight polynomial g with the curve f = 0
at a critical point (a point of the curve where the Jacobian
J = f_x g_y - f_y g_x vanishes).  This module computes:

  * point_depth     -- minimal valuation of the partial derivatives at a point
  * curve_depth     -- its maximum over all points lifted to a probe level
  * contact_order   -- the t-order of g(branch(t)) - g(P) at a point, using
                       a blow-up chart when the point has positive depth
  * contact_exponent -- the maximum contact order over Z_p critical points,
                       found by a depth-limited lifting search whose classes
                       are certified (an exact or Hensel-unique critical
                       point lifts) or refuted (a dominant monomial pins the
                       Jacobian's valuation), with an honest heuristic flag
                       for anything left unresolved
  * decay_fit       -- least-squares slope of log_p |S_m| against m, checked
                       against the predicted exponent
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import IO, Sequence

import numpy as np

from .counting import BudgetError, lift_points
from .expsums import SumRecord
from .padic import INFINITY, _int_valuation
from .polynomials import BiPoly
from .series import (
    CurvePoint,
    HenselPreconditionError,
    SeriesOrder,
    _partial_vals_at,
    certify_point,
    hensel_param,
    ord_t,
    rescale_srp,
)

__all__ = [
    "ContactInconclusiveError",
    "ContactOrder",
    "CurveDepthReport",
    "DecayReport",
    "DepthBound",
    "ExponentCertificate",
    "WeightConstantError",
    "Witness",
    "contact_exponent",
    "contact_exponent_onevar",
    "contact_order",
    "curve_depth",
    "decay_fit",
    "point_depth",
    "write_decay_csv",
    "write_decay_json",
]

DEFAULT_SEARCH_DEPTH = 6
_PRECISION_START = 16
_PRECISION_CAP = 256
_ORDER_CAP = 512
_NEWTON_WITNESS_LEVEL = 48
_ZERO_FLOOR = 1e-8


class ContactInconclusiveError(ArithmeticError):
    """Contact order undecided at the precision caps; carries the trace."""

    def __init__(self, message: str, trace):
        super().__init__(message + "; trace: " + "; ".join(trace))
        self.trace = tuple(trace)


class WeightConstantError(ValueError):
    """The weight polynomial is constant along the curve."""


# -- depth of points and curves -------------------------------------------------


@dataclass(frozen=True)
class DepthBound:
    """min(v(f_x), v(f_y)) at a point; `exact` False means only '>= value'."""

    value: int
    exact: bool
    level: int


def point_depth(f: BiPoly, pt: CurvePoint) -> DepthBound:
    """Depth of the point: how far the curve is from a unit-derivative chart.

    Derivative values are exact integers, but for a point only certified mod
    p^level a vanishing residue proves nothing beyond v >= level, so the
    bound is clipped there and flagged inexact.
    """
    vx, vy = _partial_vals_at(f, pt)
    v = min(vx, vy)
    if v is INFINITY:
        # exact point with both partials literally zero: singular over Z
        return DepthBound(pt.level, False, pt.level)
    if pt.exact:
        return DepthBound(v, True, pt.level)
    return DepthBound(v, v < pt.level, pt.level)


@dataclass(frozen=True)
class CurveDepthReport:
    """Max point depth over every point lifted to the probe level."""

    max_depth: int
    probe_level: int
    complete: bool
    witness: tuple[int, int] | None

    def to_json_dict(self) -> dict:
        return {
            "max_depth": self.max_depth,
            "probe_level": self.probe_level,
            "complete": self.complete,
            "witness": list(self.witness) if self.witness else None,
        }


def curve_depth(f: BiPoly, p: int, probe: int = 3) -> CurveDepthReport:
    """Maximum depth over points mod p^probe that lift to level 2*probe.

    This is a finite-depth lower bound for the true supremum; `complete` is
    False when some point's depth was still indeterminate at the probe
    level, in which case rerunning with a larger probe is the remedy.
    """
    level = 2 * probe
    pts = lift_points(f, p, level)
    best, witness, complete = 0, None, True
    for x, y in pts.pairs():
        d = point_depth(f, certify_point(f, x, y, p, level))
        if not d.exact:
            complete = False
        if d.value > best:
            best, witness = d.value, (x, y)
    return CurveDepthReport(best, level, complete, witness)


# -- contact order of the weight along a branch ---------------------------------


@dataclass(frozen=True)
class ContactOrder:
    """t-order of g along the branch through a point, with its chart data.

    `chart_scale` is 0 when the branch lives in the original coordinates and
    e when the point had depth e >= 1 and the blow-up substitution
    (x, y) -> (p^(e+1) x, p^(e+1) y) was needed first.  `leading_val` is the
    valuation of the leading series coefficient in that chart.
    """

    order: int
    leading_val: int
    chart_scale: int
    confident: bool
    anchor: CurvePoint
    trace: tuple[str, ...]


def _rescaled_weight(g: BiPoly, x0: int, y0: int, p: int, e: int) -> BiPoly:
    """Translate g to the point and pull it through the blow-up chart.

    Dividing by p^(D(e+1)), D the least total degree after translation,
    keeps coefficients integral while removing the uniform scale the
    substitution introduces; the t-order is unchanged, the leading valuation
    is measured in the chart.
    """
    gt = g.shift(x0, y0)
    g0 = gt - BiPoly.constant(gt.coefficient(0, 0))
    if g0.is_zero:
        raise WeightConstantError("weight polynomial is constant")
    d = g0.low_degree()
    scale = p ** (e + 1)
    return g0.scale_vars(scale, scale).divide_exact(p ** (d * (e + 1)))


def _contact_attempt(
    f: BiPoly, g: BiPoly, pt: CurvePoint, order: int, precision: int
) -> tuple[SeriesOrder | None, int, CurvePoint]:
    """One (T, N) attempt; returns (series order or None, chart scale, anchor)."""
    if not pt.exact and precision > pt.level:
        raise HenselPreconditionError(
            f"point certified to level {pt.level}, below working precision {precision}",
            None,
        )
    depth = point_depth(f, pt)
    if not depth.exact:
        raise HenselPreconditionError(
            f"point depth indeterminate at level {pt.level}; recertify deeper",
            depth.value,
        )
    e = depth.value
    p = pt.p
    if e == 0:
        param = hensel_param(f, pt, order=order, precision=precision)
        series = param.compose_poly(g)
        return ord_t(series, start=1), 0, param.anchor
    need = 2 * e + 2
    if not pt.exact and pt.level < need:
        raise HenselPreconditionError(
            f"point certified to level {pt.level}, need {need} for depth {e}",
            e,
        )
    ft = f.shift(pt.x, pt.y)
    fstar = rescale_srp(ft, p, e)
    seed_level = precision if pt.exact else min(precision, pt.level - (2 * e + 1))
    seed = certify_point(fstar, 0, 0, p, max(1, seed_level))
    param = hensel_param(fstar, seed, order=order, precision=precision)
    gstar = _rescaled_weight(g, pt.x, pt.y, p, e)
    series = param.compose_poly(gstar)
    return ord_t(series, start=1), e, param.anchor


def contact_order(
    f: BiPoly,
    g: BiPoly,
    pt: CurvePoint,
    *,
    order_start: int | None = None,
    precision_start: int = _PRECISION_START,
    order_cap: int = _ORDER_CAP,
    precision_cap: int = _PRECISION_CAP,
) -> ContactOrder:
    """First t-order at which g moves along the branch through the point.

    Escalation policy: a run of all-zero residues doubles the t-order first
    (the contact may simply exceed it), then the p-adic precision; a leading
    coefficient divisible by p^(N/2) is treated as unreliable and triggers a
    doubled N as well.  Exhausting both caps raises with the full trace.
    """
    if g.is_constant:
        raise WeightConstantError("weight polynomial is constant")
    T = order_start or (2 * max(1, f.degree()) * max(1, g.degree()) + 4)
    N = precision_start
    trace: list[str] = []
    best: tuple[SeriesOrder, int, CurvePoint] | None = None
    while True:
        try:
            found, scale, anchor = _contact_attempt(f, g, pt, T, N)
        except HenselPreconditionError as exc:
            trace.append(f"T={T} N={N}: {exc}")
            raise ContactInconclusiveError(
                "cannot parametrize at the requested precision", trace
            ) from exc
        if found is None:
            trace.append(f"T={T} N={N}: all residues zero")
            if T < order_cap:
                T = min(2 * T, order_cap)
                continue
            if N < precision_cap and (pt.exact or 2 * N <= pt.level):
                N = min(2 * N, precision_cap)
                continue
            raise ContactInconclusiveError(
                "contact order undecided at the caps (weight may be constant "
                "along this branch)",
                trace,
            )
        if found.confident:
            return ContactOrder(found.order, found.leading_val, scale, True, anchor, tuple(trace))
        trace.append(
            f"T={T} N={N}: order {found.order} with leading valuation "
            f"{found.leading_val} (low confidence)"
        )
        best = (found, scale, anchor)
        if N < precision_cap and (pt.exact or 2 * N <= pt.level):
            N = min(2 * N, precision_cap)
            continue
        found, scale, anchor = best
        return ContactOrder(found.order, found.leading_val, scale, False, anchor, tuple(trace))


# -- the oscillation exponent ----------------------------------------------------


@dataclass(frozen=True)
class Witness:
    """A certified critical point with its measured contact order."""

    x: int
    y: int
    level: int
    order: int
    leading_val: int
    chart_scale: int
    certified_by: str

    def to_json_dict(self) -> dict:
        return {
            "x": self.x,
            "y": self.y,
            "level": self.level,
            "order": self.order,
            "leading_val": self.leading_val,
            "chart_scale": self.chart_scale,
            "certified_by": self.certified_by,
        }


@dataclass(frozen=True)
class ExponentCertificate:
    """The oscillation exponent with its witnesses and search provenance.

    confidence == "certified" means every candidate class in the critical
    locus search was either witnessed by a lifted critical point or refuted;
    "heuristic" admits unresolved classes at the depth/budget limits, so the
    exponent is a certified lower bound that the reported sums still obey.
    """

    exponent: int
    witnesses: tuple[Witness, ...]
    search_depth: int
    confidence: str
    notes: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "witnesses": [w.to_json_dict() for w in self.witnesses],
            "search_depth": self.search_depth,
            "confidence": self.confidence,
            "notes": list(self.notes),
        }


_big_level = 10**6  # stands for "at least the class level" in bound terms


def _pinned_valuation(c: int, p: int) -> int | None:
    """v(x) for every lift of a class representative, or None if unpinned."""
    return None if c == 0 else _int_valuation(c, p)


def _monomial_refutes(jac: BiPoly, x0: int, y0: int, p: int) -> bool:
    """True when one monomial of jac dominates on the whole class.

    With v(x) and v(y) pinned by nonzero representatives, each monomial has
    an exact valuation on every lift; a unique minimum forces
    v(jac) = min < infinity there, so no lift can be a critical point.
    """
    vx = _pinned_valuation(x0, p)
    vy = _pinned_valuation(y0, p)
    exact: list[int] = []
    bounds: list[int] = []
    for (i, j), c in jac.terms.items():
        vc = _int_valuation(c, p)
        known_x = i == 0 or vx is not None
        known_y = j == 0 or vy is not None
        vx_term = 0 if i == 0 else i * (vx if vx is not None else _big_level)
        vy_term = 0 if j == 0 else j * (vy if vy is not None else _big_level)
        total = vc + vx_term + vy_term
        if known_x and known_y:
            exact.append(total)
        else:
            bounds.append(total)
    if not exact:
        return False
    low = min(exact)
    if exact.count(low) != 1:
        return False
    if bounds and min(bounds) <= low:
        return False
    return True


def _newton_certify(
    f: BiPoly, jac: BiPoly, x0: int, y0: int, p: int, k: int, target: int
) -> tuple[int, int] | None:
    """Unique critical point in the class by 2-variable Hensel refinement.

    Requires the Jacobian matrix of (f, jac) to have determinant valuation t
    with k >= 2t + 1 at the representative; then a unique common zero exists
    within p^-(k-t) and Newton doubles its certified digits each step.
    Returns the zero mod p^target, or None when the hypothesis fails or the
    refined zero leaves the class.
    """
    rows = (
        (f.partial("x"), f.partial("y")),
        (jac.partial("x"), jac.partial("y")),
    )
    det0 = (
        rows[0][0].evaluate(x0, y0) * rows[1][1].evaluate(x0, y0)
        - rows[0][1].evaluate(x0, y0) * rows[1][0].evaluate(x0, y0)
    )
    if det0 == 0:
        return None
    t = _int_valuation(det0, p)
    if k < 2 * t + 1:
        return None
    work = target + t + 4
    mod = p**work
    x, y = x0 % mod, y0 % mod
    goal = p ** (target + t)
    for _ in range(max(4, math.ceil(math.log2(target + 1)) + 4)):
        f1 = f.evaluate(x, y, mod)
        f2 = jac.evaluate(x, y, mod)
        if f1 % goal == 0 and f2 % goal == 0:
            break
        m00 = rows[0][0].evaluate(x, y, mod)
        m01 = rows[0][1].evaluate(x, y, mod)
        m10 = rows[1][0].evaluate(x, y, mod)
        m11 = rows[1][1].evaluate(x, y, mod)
        det = (m00 * m11 - m01 * m10) % mod
        if det == 0 or _int_valuation(det, p) != t:
            return None
        unit_inv = pow(det // p**t, -1, mod)
        num_x = (m11 * f1 - m01 * f2) % mod
        num_y = (m00 * f2 - m10 * f1) % mod
        if num_x % p**t or num_y % p**t:
            return None
        x = (x - num_x // p**t * unit_inv) % mod
        y = (y - num_y // p**t * unit_inv) % mod
    else:
        return None
    qk = p**k
    if (x - x0) % qk or (y - y0) % qk:
        return None  # the unique zero lives in a sibling class
    qt = p**target
    if f.evaluate(x, y, qt) or jac.evaluate(x, y, qt):
        return None
    return x % qt, y % qt


def _exact_hit(f: BiPoly, jac: BiPoly, x0: int, y0: int, q: int) -> tuple[int, int] | None:
    """Small integer representative solving both equations exactly, if any."""
    for x in (x0, x0 - q):
        for y in (y0, y0 - q):
            if f.evaluate(x, y) == 0 and jac.evaluate(x, y) == 0:
                return x, y
    return None


def _extend_classes(
    polys: Sequence[BiPoly], classes, p: int, k: int, budget: int
):
    """One digit-pair extension level for a simultaneous system."""
    if len(classes) * p * p > budget:
        raise BudgetError(
            f"critical-locus search needs {len(classes) * p * p} tests at "
            f"level {k + 1}, budget is {budget}"
        )
    q, q1 = p**k, p ** (k + 1)
    out = []
    for x, y in classes:
        for a in range(p):
            xa = x + q * a
            for b in range(p):
                yb = y + q * b
                if all(g.evaluate(xa, yb, q1) == 0 for g in polys):
                    out.append((xa, yb))
    return out


def contact_exponent(
    f: BiPoly,
    g: BiPoly,
    p: int,
    *,
    depth: int = DEFAULT_SEARCH_DEPTH,
    budget: int = 200_000,
    precision_start: int = _PRECISION_START,
    order_cap: int = _ORDER_CAP,
    precision_cap: int = _PRECISION_CAP,
) -> ExponentCertificate:
    """Largest contact order of g at a Z_p critical point of the curve.

    Candidates are the classes mod p^depth where both f and the Jacobian
    J = f_x g_y - f_y g_x vanish.  During the search a class is certified as
    soon as a unique critical point lifts in it (2-variable Hensel), refuted
    when a dominant Jacobian monomial pins v(J) finite on the whole class,
    and at full depth small exact solutions are recognized directly.  Points
    of the curve away from the critical locus contribute order 1.
    """
    if g.is_constant:
        raise WeightConstantError("weight polynomial is constant")
    jac = f.partial("x") * g.partial("y") - f.partial("y") * g.partial("x")
    if jac.is_zero:
        raise WeightConstantError(
            "the Jacobian of (f, g) vanishes identically: "
            "the weight is constant along every branch of the curve"
        )

    curve_mod_p = [
        (x, y) for x in range(p) for y in range(p) if f.evaluate(x, y, p) == 0
    ]
    notes: list[str] = []
    if not curve_mod_p:
        return ExponentCertificate(
            1, (), depth, "certified", ("curve has no points mod p",)
        )

    frontier = [
        (x, y) for (x, y) in curve_mod_p if jac.evaluate(x, y, p) == 0
    ]
    all_critical_mod_p = len(frontier) == len(curve_mod_p)

    witnesses: list[Witness] = []
    attempted = inconclusive = 0

    def measure(x: int, y: int, level: int, how: str) -> None:
        nonlocal attempted, inconclusive
        attempted += 1
        pt = certify_point(f, x, y, p, level)
        try:
            result = contact_order(
                f,
                g,
                pt,
                precision_start=precision_start,
                order_cap=order_cap,
                precision_cap=precision_cap,
            )
        except ContactInconclusiveError:
            inconclusive += 1
            notes.append(
                f"contact order at ({x % p**min(level, 4)}, {y % p**min(level, 4)}) "
                f"mod p^{min(level, 4)} undecided at the precision caps"
            )
            return
        witnesses.append(
            Witness(
                x=pt.x,
                y=pt.y,
                level=pt.level,
                order=result.order,
                leading_val=result.leading_val,
                chart_scale=result.chart_scale,
                certified_by=how,
            )
        )

    def resolve(classes, k: int, final: bool):
        """Split classes into (still open, resolved count)."""
        open_classes = []
        for x0, y0 in classes:
            if _monomial_refutes(jac, x0, y0, p):
                continue
            refined = _newton_certify(
                f, jac, x0, y0, p, k, _NEWTON_WITNESS_LEVEL
            )
            if refined is not None:
                measure(refined[0], refined[1], _NEWTON_WITNESS_LEVEL, "hensel-unique")
                continue
            if final:
                hit = _exact_hit(f, jac, x0, y0, p**k)
                if hit is not None:
                    measure(hit[0], hit[1], max(k, 2), "exact-point")
                    continue
            open_classes.append((x0, y0))
        return open_classes

    try:
        k = 1
        frontier = resolve(frontier, k, final=(depth == 1))
        while k < depth and frontier:
            frontier = _extend_classes((f, jac), frontier, p, k, budget)
            k += 1
            frontier = resolve(frontier, k, final=(k == depth))
        # refutation sweep: unresolved classes may die out a few levels deeper
        sweep = 0
        while frontier and sweep < depth:
            frontier = _extend_classes((f, jac), frontier, p, k, budget)
            k += 1
            sweep += 1
            frontier = resolve(frontier, k, final=True)
    except BudgetError as exc:
        notes.append(str(exc))

    if all_critical_mod_p and attempted > 0 and attempted == inconclusive:
        raise WeightConstantError(
            "every point of the curve mod p is critical and no branch shows "
            "the weight moving: the weight is constant on the curve"
        )

    confidence = "certified" if not frontier else "heuristic"
    if frontier:
        notes.append(f"{len(frontier)} candidate class(es) unresolved at depth {k}")
    exponent = max([1] + [w.order for w in witnesses])
    return ExponentCertificate(
        exponent=exponent,
        witnesses=tuple(witnesses),
        search_depth=depth,
        confidence=confidence,
        notes=tuple(notes),
    )


def contact_exponent_onevar(
    f_one: BiPoly, p: int, *, depth: int = DEFAULT_SEARCH_DEPTH, budget: int = 200_000
) -> ExponentCertificate:
    """Oscillation exponent of the one-variable sum of exp(2 pi i u f_one(x)/p^m).

    Computed along the graph y = f_one(x) with weight y; critical points are
    the Z_p roots of f_one'.  When the derivative's degree exceeds the root
    multiplicity the search certified, the remaining roots lie outside Z_p
    or beyond the search depth, and a note records that.
    """
    if f_one.uses_y():
        raise ValueError("expected a polynomial in x only")
    f = BiPoly.variable("y") - f_one
    cert = contact_exponent(f, BiPoly.variable("y"), p, depth=depth, budget=budget)
    deriv_degree = max(0, f_one.partial("x").degree())
    found = sum(w.order - 1 for w in cert.witnesses)
    if deriv_degree > found:
        cert = replace(
            cert,
            notes=cert.notes
            + (
                f"derivative degree {deriv_degree} exceeds certified root "
                f"multiplicity {found}: some critical points lie outside Z_p "
                "or beyond the search depth",
            ),
        )
    return cert


# -- decay regression -------------------------------------------------------------


@dataclass(frozen=True)
class DecayReport:
    """Observed decay of |S_m| against the predicted p^(m(1-1/sigma)) law."""

    exponent: int
    predicted_exponent: float
    fitted_slope: float | None
    a_estimate: float
    tolerance: float
    passed: bool
    all_zero: bool
    zero_levels: tuple[int, ...]
    records: tuple[SumRecord, ...]

    @property
    def decay_rate(self) -> float:
        """Per-level saving 1/exponent; predicted_exponent is its complement."""
        return 1.0 / self.exponent

    def to_json_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "predicted_exponent": self.predicted_exponent,
            "decay_rate": self.decay_rate,
            "fitted_slope": self.fitted_slope,
            "a_estimate": self.a_estimate,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "all_zero": self.all_zero,
            "zero_levels": list(self.zero_levels),
            "records": [r.to_json_dict() for r in self.records],
        }


def _is_zero_magnitude(record: SumRecord) -> bool:
    # float cancellation noise grows with the term count
    return record.magnitude <= max(_ZERO_FLOOR, record.point_count * 5e-14)


def decay_fit(
    records: Sequence[SumRecord],
    exponent: int | ExponentCertificate,
    tolerance: float = 0.05,
) -> DecayReport:
    """Fit log_p |S_m| ~ slope * m and compare against 1 - 1/exponent.

    Records indistinguishable from zero are listed and excluded from the
    fit; when everything vanishes the bound holds trivially.  The constant
    estimate A = max |S_m| / p^(m(1-1/sigma)) makes the pointwise bound
    |S_m| <= A p^(m(1-1/sigma)) tight by construction, so the meaningful
    check is the fitted slope.
    """
    if isinstance(exponent, ExponentCertificate):
        sigma = exponent.exponent
    else:
        sigma = exponent
    if sigma < 1:
        raise ValueError(f"exponent must be >= 1, got {sigma}")
    if not records:
        raise ValueError("no records to fit")
    p = records[0].p
    if any(r.p != p for r in records):
        raise ValueError("records mix different primes")
    predicted = 1.0 - 1.0 / sigma

    normalized = tuple(
        sorted((r.with_normalization(sigma) for r in records), key=lambda r: (r.m, r.u))
    )
    zero_levels = tuple(r.m for r in normalized if _is_zero_magnitude(r))
    live = [r for r in normalized if not _is_zero_magnitude(r)]

    a_estimate = max((r.normalized for r in normalized), default=0.0)
    if not live:
        return DecayReport(
            exponent=sigma,
            predicted_exponent=predicted,
            fitted_slope=None,
            a_estimate=0.0,
            tolerance=tolerance,
            passed=True,
            all_zero=True,
            zero_levels=zero_levels,
            records=normalized,
        )
    if len(live) < 3:
        raise ValueError(
            f"need at least 3 nonzero magnitudes for a slope fit, got {len(live)}"
        )
    ms = np.array([r.m for r in live], dtype=float)
    logs = np.array([math.log(r.magnitude, p) for r in live])
    slope = float(np.polyfit(ms, logs, 1)[0])
    passed = slope <= predicted + tolerance and math.isfinite(a_estimate)
    return DecayReport(
        exponent=sigma,
        predicted_exponent=predicted,
        fitted_slope=slope,
        a_estimate=a_estimate,
        tolerance=tolerance,
        passed=passed,
        all_zero=False,
        zero_levels=zero_levels,
        records=normalized,
    )


def write_decay_json(report: DecayReport, fh: IO[str], config: dict | None = None) -> None:
    payload = {"config": config or {}, "report": report.to_json_dict()}
    json.dump(payload, fh, indent=2, sort_keys=True)
    fh.write("\n")


def write_decay_csv(report: DecayReport, fh: IO[str], config: dict | None = None) -> None:
    """Two columns: level m and log_p of the magnitude (nonzero records only)."""
    for key in sorted(config or {}):
        fh.write(f"# {key}={config[key]}\n")
    fh.write(f"# predicted_exponent={report.predicted_exponent:.15g}\n")
    slope = "" if report.fitted_slope is None else f"{report.fitted_slope:.15g}"
    fh.write(f"# fitted_slope={slope}\n")
    fh.write(f"# passed={report.passed}\n")
    fh.write("m,logp_magnitude\n")
    for r in report.records:
        if not _is_zero_magnitude(r):
            fh.write(f"{r.m},{math.log(r.magnitude, r.p):.15g}\n")
