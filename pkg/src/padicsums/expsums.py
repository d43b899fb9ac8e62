"""Oscillatory character sums over enumerated point sets.

The sum attached to a curve f = 0, weight polynomial g, and scalar
z = u / p^m (gcd(u, p) = 1, m >= 1) is

    S_m = sum over (x, y) in Y_m of exp(2*pi*i * u*g(x,y) / p^m),

with Y_m the solution set mod p^m.  Phases are reduced mod p^m in integer
arithmetic before any float conversion, and terms are combined by pairwise
(tree) summation over the lexicographic point order, so results are
deterministic and the rounding error stays logarithmic in the term count.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, replace
from typing import IO, Iterable, Sequence

import numpy as np

from .counting import PointSet, _check_vector_safe, _eval_vec, lift_levels
from .padic import additive_char, is_prime
from .polynomials import BiPoly
from .series import Parametrization, SeriesPrecisionError, is_srp_series

__all__ = [
    "CSV_COLUMNS",
    "PhaseSpec",
    "SumRecord",
    "decay_records",
    "pairwise_sum",
    "sum_curve",
    "sum_onevar",
    "sum_parametric",
    "write_records_csv",
    "write_records_json",
]

CSV_COLUMNS = ("p", "m", "u", "f", "g", "re", "im", "magnitude", "point_count", "normalized")


@dataclass(frozen=True)
class PhaseSpec:
    """The scalar z = u / p^m with u a unit mod p: level m, numerator u."""

    p: int
    m: int
    u: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.m < 1:
            raise ValueError(f"phase level must be >= 1, got {self.m}")
        if self.u % self.p == 0:
            raise ValueError(
                f"u = {self.u} is divisible by p = {self.p}; "
                "the scalar must have valuation exactly -m"
            )
        object.__setattr__(self, "u", self.u % self.denominator)

    @property
    def denominator(self) -> int:
        return self.p**self.m


@dataclass(frozen=True)
class SumRecord:
    """One evaluated sum, with enough metadata to reproduce it."""

    p: int
    m: int
    u: int
    f: str
    g: str
    value: complex
    point_count: int
    normalized: float | None = None

    def __post_init__(self):
        # Triangle inequality: each term has modulus 1.
        if self.magnitude > self.point_count + 1e-6:
            raise ValueError(
                f"magnitude {self.magnitude} exceeds point count {self.point_count}"
            )

    @property
    def magnitude(self) -> float:
        return abs(self.value)

    def with_normalization(self, sigma: int) -> "SumRecord":
        scale = float(self.p) ** (self.m * (1.0 - 1.0 / sigma))
        return replace(self, normalized=self.magnitude / scale)

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "u": self.u,
            "f": self.f,
            "g": self.g,
            "re": _sig15(self.value.real),
            "im": _sig15(self.value.imag),
            "magnitude": _sig15(self.magnitude),
            "point_count": self.point_count,
            "normalized": None if self.normalized is None else _sig15(self.normalized),
        }

    def to_csv_row(self) -> list[str]:
        d = self.to_json_dict()
        out = []
        for col in CSV_COLUMNS:
            v = d[col]
            out.append("" if v is None else (f"{v:.15g}" if isinstance(v, float) else str(v)))
        return out


def _sig15(x: float) -> float:
    """Round to 15 significant digits so serialized output is stable."""
    return float(f"{x:.15g}")


def pairwise_sum(terms: Sequence[complex]) -> complex:
    """Tree reduction in the given order; deterministic for a fixed order."""
    n = len(terms)
    if n == 0:
        return 0j
    if n <= 8:
        total = 0j
        for t in terms:
            total += t
        return total
    half = n // 2
    return pairwise_sum(terms[:half]) + pairwise_sum(terms[half:])


def _phase_values(g: BiPoly, xs: np.ndarray, ys: np.ndarray, phase: PhaseSpec) -> np.ndarray:
    q = phase.denominator
    gv = _eval_vec(g, xs, ys, q)
    return (gv * (phase.u % q)) % q


def _char_sum(phases: np.ndarray, q: int) -> complex:
    theta = phases * (2.0 * math.pi / q)
    terms = np.cos(theta) + 1j * np.sin(theta)
    # np.add.reduce on a contiguous array is pairwise, hence deterministic.
    return complex(np.add.reduce(terms))


def sum_curve(f: BiPoly, g: BiPoly, phase: PhaseSpec, points: PointSet) -> SumRecord:
    """S_m over a pre-enumerated point set (so one set can serve many z)."""
    if points.p != phase.p:
        raise ValueError(f"point set has p = {points.p}, phase has p = {phase.p}")
    if points.m != phase.m:
        raise ValueError(
            f"point set level {points.m} does not match phase level {phase.m}"
        )
    phases = _phase_values(g, points.xs, points.ys, phase)
    value = _char_sum(phases, phase.denominator)
    return SumRecord(
        p=phase.p,
        m=phase.m,
        u=phase.u,
        f=str(f),
        g=str(g),
        value=value,
        point_count=len(points),
    )


def sum_onevar(f_one: BiPoly, phase: PhaseSpec) -> SumRecord:
    """Sum of exp(2*pi*i * u*f_one(x)/p^m) over all x mod p^m.

    This is the sum along the curve y = f_one(x) with weight y, visiting the
    graph through its x-coordinate.
    """
    if f_one.uses_y():
        raise ValueError("one-variable sums need a polynomial in x only")
    q = phase.denominator
    _check_vector_safe(q)
    xs = np.arange(q, dtype=np.int64)
    phases = _phase_values(f_one, xs, np.zeros_like(xs), phase)
    value = _char_sum(phases, q)
    return SumRecord(
        p=phase.p,
        m=phase.m,
        u=phase.u,
        f=str(BiPoly.variable("y") - f_one),
        g="y",
        value=value,
        point_count=q,
    )


def sum_parametric(
    param: Parametrization, g: BiPoly, l: int, phase: PhaseSpec
) -> SumRecord:
    """Branch-restricted sum: t ranges over p^l * Z/p^m along branch(t).

    The truncated series stands in for the full branch, which is only sound
    when every dropped term t^k c_k has valuation >= m across the range of
    t.  With v(t) >= l that needs (T+1)*l >= m in general, and the weaker
    T + (T+1)*l >= m when the series has the restricted coefficient growth
    v(c_k) >= k - 1.  Violations raise SeriesPrecisionError: recompute the
    parametrization with a larger t-order.
    """
    if l < 0:
        raise ValueError("l must be >= 0")
    if l > phase.m:
        raise ValueError(f"l = {l} exceeds the level m = {phase.m}")
    if param.p != phase.p:
        raise ValueError("parametrization prime does not match the phase")
    if param.n < phase.m:
        raise SeriesPrecisionError(
            f"series carries {param.n} p-adic digits, need at least m = {phase.m}: "
            "recompute the parametrization at higher precision"
        )
    T = param.series.order_cap
    if is_srp_series(param.series):
        tail_ok = T + (T + 1) * l >= phase.m
    else:
        tail_ok = (T + 1) * l >= phase.m
    if not tail_ok:
        raise SeriesPrecisionError(
            f"t-order {T} too small to restrict to v(t) >= {l} at level {phase.m}: "
            "recompute the parametrization with a larger t-order"
        )

    q = phase.denominator
    u = phase.u % q
    step = param.p**l
    count = q // step
    terms = []
    for s in range(count):
        x, y = param.point_at(step * s, q)
        terms.append(additive_char(u * g.evaluate(x, y, q), phase.m, phase.p))
    value = pairwise_sum(terms)
    return SumRecord(
        p=phase.p,
        m=phase.m,
        u=phase.u,
        f=f"branch at ({param.anchor.x % q}, {param.anchor.y % q})",
        g=str(g),
        value=value,
        point_count=count,
    )


def decay_records(
    f: BiPoly,
    g: BiPoly,
    p: int,
    m_range: Iterable[int],
    u: int = 1,
) -> list[SumRecord]:
    """One record per level in m_range, enumerating the curve tree once."""
    wanted = sorted(set(m_range))
    if not wanted:
        return []
    if wanted[0] < 1:
        raise ValueError("levels must be >= 1")
    records = []
    for level_set in lift_levels(f, p, wanted[-1]):
        if level_set.m in wanted:
            phase = PhaseSpec(p, level_set.m, u)
            records.append(sum_curve(f, g, phase, level_set))
    return records


# -- serialization -------------------------------------------------------------


def write_records_json(records: Sequence[SumRecord], fh: IO[str], config: dict | None = None) -> None:
    payload = {
        "config": config or {},
        "records": [r.to_json_dict() for r in records],
    }
    json.dump(payload, fh, indent=2, sort_keys=True)
    fh.write("\n")


def write_records_csv(records: Sequence[SumRecord], fh: IO[str], config: dict | None = None) -> None:
    for key in sorted(config or {}):
        fh.write(f"# {key}={config[key]}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(r.to_csv_row())
