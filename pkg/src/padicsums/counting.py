"""Point enumeration for plane curves over Z/p^m.

Two independent routes to the same set: `brute_points` scans the full
(Z/p^m)^2 grid, `lift_points` grows solutions digit by digit, using the
one-step Hensel formula at residues where a partial derivative is a unit
and exhaustive digit pairs elsewhere.  The brute route exists as an oracle
for the lifting route, so the two never share evaluation code paths.

All vectorized arithmetic stays in int64; guards cap the modulus so that
every intermediate product provably fits.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Iterator, Sequence

import numpy as np

from .polynomials import BiPoly

__all__ = [
    "BudgetError",
    "CountReport",
    "PointSet",
    "brute_points",
    "count_report",
    "lift_levels",
    "lift_points",
    "read_points",
    "write_points",
]

BRUTE_BUDGET = 10**8
# int64 safety: evaluation reduces mod p^m, so products stay below (p^m)^2.
_VECTOR_MODULUS_CAP = 2**31


class BudgetError(RuntimeError):
    """Requested enumeration exceeds the configured work or overflow budget."""


@dataclass(frozen=True)
class PointSet:
    """Solutions of f = 0 in (Z/p^m)^2, lexicographically sorted, no duplicates."""

    p: int
    m: int
    xs: np.ndarray
    ys: np.ndarray
    method: str

    def __post_init__(self):
        q = self.p**self.m
        for arr in (self.xs, self.ys):
            if len(arr) and (int(arr.min()) < 0 or int(arr.max()) >= q):
                raise ValueError(f"coordinates must be canonical residues mod {q}")
        order = np.lexsort((self.ys, self.xs))
        xs, ys = self.xs[order], self.ys[order]
        if len(xs) > 1:
            same = (np.diff(xs) == 0) & (np.diff(ys) == 0)
            if same.any():
                raise ValueError("duplicate points in a PointSet")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    def __len__(self) -> int:
        return len(self.xs)

    def __contains__(self, pair) -> bool:
        x, y = pair
        q = self.p**self.m
        x, y = x % q, y % q
        lo = np.searchsorted(self.xs, x, side="left")
        hi = np.searchsorted(self.xs, x, side="right")
        ys = self.ys[lo:hi]
        k = np.searchsorted(ys, y)
        return k < len(ys) and ys[k] == y

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for a, b in zip(self.xs, self.ys)]

    def same_points(self, other: "PointSet") -> bool:
        return (
            self.p == other.p
            and self.m == other.m
            and len(self) == len(other)
            and bool(np.array_equal(self.xs, other.xs))
            and bool(np.array_equal(self.ys, other.ys))
        )

    def reduce_mod(self, m_low: int) -> "PointSet":
        """Image of the set under reduction mod p^m_low."""
        if m_low > self.m:
            raise ValueError("cannot reduce to a higher level")
        q = self.p**m_low
        pairs = np.unique(
            np.stack([self.xs % q, self.ys % q], axis=1), axis=0
        )
        return PointSet(self.p, m_low, pairs[:, 0], pairs[:, 1], self.method)


def _check_vector_safe(q: int) -> None:
    if q > _VECTOR_MODULUS_CAP:
        raise BudgetError(
            f"modulus {q} exceeds the exact int64 evaluation cap {_VECTOR_MODULUS_CAP}"
        )


def _eval_vec(f: BiPoly, xs: np.ndarray, ys: np.ndarray, q: int) -> np.ndarray:
    """f(xs, ys) mod q, elementwise; exact because products fit in int64."""
    acc = np.zeros_like(xs)
    powers_x: dict[int, np.ndarray] = {}
    powers_y: dict[int, np.ndarray] = {}

    def power(base: np.ndarray, k: int, cache: dict[int, np.ndarray]) -> np.ndarray:
        if k == 0:
            return None  # caller multiplies by nothing
        got = cache.get(k)
        if got is not None:
            return got
        if k == 1:
            out = base % q
        else:
            half = power(base, k // 2, cache)
            out = half * half % q
            if k & 1:
                out = out * (base % q) % q
        cache[k] = out
        return out

    for (i, j), c in f.terms.items():
        term = np.full_like(xs, c % q)
        if i:
            term = term * power(xs, i, powers_x) % q
        if j:
            term = term * power(ys, j, powers_y) % q
        acc = (acc + term) % q
    return acc


def brute_points(f: BiPoly, p: int, m: int, budget: int = BRUTE_BUDGET) -> PointSet:
    """Full-grid oracle: test every pair in (Z/p^m)^2."""
    q = p**m
    if q * q > budget:
        raise BudgetError(
            f"brute enumeration needs {q * q} evaluations, budget is {budget}"
        )
    _check_vector_safe(q)
    ys = np.arange(q, dtype=np.int64)
    found_x, found_y = [], []
    chunk = max(1, 10**6 // q)
    for x0 in range(0, q, chunk):
        xs = np.arange(x0, min(x0 + chunk, q), dtype=np.int64)
        grid_x = np.repeat(xs, q)
        grid_y = np.tile(ys, len(xs))
        vals = _eval_vec(f, grid_x, grid_y, q)
        hit = vals == 0
        found_x.append(grid_x[hit])
        found_y.append(grid_y[hit])
    xs = np.concatenate(found_x) if found_x else np.empty(0, dtype=np.int64)
    ys = np.concatenate(found_y) if found_y else np.empty(0, dtype=np.int64)
    return PointSet(p, m, xs, ys, "brute")


def lift_levels(f: BiPoly, p: int, m: int) -> Iterator[PointSet]:
    """Yield the solution sets mod p, p^2, ..., p^m by digit lifting.

    At a residue where f_y mod p is nonzero, each of the p digits of x
    extends to exactly one digit of y (one Newton division); symmetrically
    for f_x; where both partials vanish mod p, all p^2 digit pairs are
    tested.  This is the standard smooth/singular fiber split, and it is
    what makes the counts grow by exactly p per level once every residue
    in play is smooth.
    """
    if m < 1:
        raise ValueError("level must be >= 1")
    _check_vector_safe(p**m)
    fx, fy = f.partial("x"), f.partial("y")

    grid = np.arange(p, dtype=np.int64)
    gx = np.repeat(grid, p)
    gy = np.tile(grid, p)
    hit = _eval_vec(f, gx, gy, p) == 0
    xs, ys = gx[hit], gy[hit]
    yield PointSet(p, 1, xs, ys, "lift")

    inv_table = np.array(
        [0] + [pow(v, -1, p) for v in range(1, p)], dtype=np.int64
    )
    digits = np.arange(p, dtype=np.int64)

    for k in range(1, m):
        q, q1 = p**k, p**(k + 1)
        fx_red = _eval_vec(fx, xs % p, ys % p, p)
        fy_red = _eval_vec(fy, xs % p, ys % p, p)
        smooth_y = fy_red != 0
        smooth_x = (~smooth_y) & (fx_red != 0)
        singular = ~(smooth_y | smooth_x)

        parts_x, parts_y = [], []

        sel = np.flatnonzero(smooth_y)
        if len(sel):
            base_x, base_y = xs[sel], ys[sel]
            inv = inv_table[fy_red[sel]]
            cx = (base_x[None, :] + q * digits[:, None]).ravel()
            cy = np.repeat(base_y[None, :], p, axis=0).ravel()
            inv_rep = np.repeat(inv[None, :], p, axis=0).ravel()
            resid = _eval_vec(f, cx, cy, q1) // q
            b = (-resid * inv_rep) % p
            parts_x.append(cx)
            parts_y.append((cy + q * b) % q1)

        sel = np.flatnonzero(smooth_x)
        if len(sel):
            base_x, base_y = xs[sel], ys[sel]
            inv = inv_table[fx_red[sel]]
            cy = (base_y[None, :] + q * digits[:, None]).ravel()
            cx = np.repeat(base_x[None, :], p, axis=0).ravel()
            inv_rep = np.repeat(inv[None, :], p, axis=0).ravel()
            resid = _eval_vec(f, cx, cy, q1) // q
            a = (-resid * inv_rep) % p
            parts_x.append((cx + q * a) % q1)
            parts_y.append(cy)

        sel = np.flatnonzero(singular)
        if len(sel):
            base_x, base_y = xs[sel], ys[sel]
            cx = (base_x[None, None, :] + q * digits[:, None, None] + 0 * digits[None, :, None]).ravel()
            cy = (base_y[None, None, :] + 0 * digits[:, None, None] + q * digits[None, :, None]).ravel()
            keep = _eval_vec(f, cx, cy, q1) == 0
            parts_x.append(cx[keep])
            parts_y.append(cy[keep])

        if parts_x:
            xs = np.concatenate(parts_x)
            ys = np.concatenate(parts_y)
        else:
            xs = np.empty(0, dtype=np.int64)
            ys = np.empty(0, dtype=np.int64)
        yield PointSet(p, k + 1, xs, ys, "lift")


def lift_points(f: BiPoly, p: int, m: int) -> PointSet:
    """Solution set mod p^m via the digit-lifting tree."""
    last = None
    for level in lift_levels(f, p, m):
        last = level
    assert last is not None
    return last


@dataclass(frozen=True)
class CountReport:
    """Growth of Card(Y_m) against the p^m law for a range of levels."""

    p: int
    m_values: tuple[int, ...]
    counts: tuple[int, ...]
    ratios: tuple[Fraction, ...]
    density: Fraction
    stabilized: bool
    stable_from: int | None

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "m": list(self.m_values),
            "counts": list(self.counts),
            "ratios": [str(r) for r in self.ratios],
            "density": str(self.density),
            "stabilized": self.stabilized,
            "stable_from": self.stable_from,
        }


def count_report(f: BiPoly, p: int, m_max: int) -> CountReport:
    """Counts for m = 1..m_max, consecutive ratios, and the density.

    The density Card(Y_m)/p^m is exact (a Fraction); `stabilized` records
    whether the ratios lock onto p from some level `stable_from` onwards,
    which is the dimension-one growth law for a curve with smooth lifting
    behavior in the tested range.
    """
    counts = [len(level) for level in lift_levels(f, p, m_max)]
    ratios = [Fraction(counts[i + 1], counts[i]) if counts[i] else Fraction(0)
              for i in range(len(counts) - 1)]
    stable_from = None
    for start in range(len(counts)):
        if all(counts[i + 1] == p * counts[i] for i in range(start, len(counts) - 1)):
            stable_from = start + 1  # smallest m with exact p-fold growth onward
            break
    return CountReport(
        p=p,
        m_values=tuple(range(1, m_max + 1)),
        counts=tuple(counts),
        ratios=tuple(ratios),
        density=Fraction(counts[-1], p**m_max),
        stabilized=stable_from is not None,
        stable_from=stable_from,
    )


# -- 0-dimensional systems (used by the critical-locus search) ---------------


def lift_system_levels(
    polys: Sequence[BiPoly], p: int, m: int, budget: int = 200_000
) -> Iterator[list[tuple[int, int]]]:
    """Simultaneous solutions of several polynomials mod p, ..., p^m.

    Plain digit-pair extension with no Hensel shortcut: intended for systems
    whose solution sets stay small (0-dimensional loci).  Raises BudgetError
    when a level would exceed `budget` candidate extensions.
    """
    pts = [
        (x, y)
        for x in range(p)
        for y in range(p)
        if all(g.evaluate(x, y, p) == 0 for g in polys)
    ]
    yield list(pts)
    for k in range(1, m):
        q, q1 = p**k, p**(k + 1)
        if len(pts) * p * p > budget:
            raise BudgetError(
                f"system tree needs {len(pts) * p * p} tests at level {k + 1}, "
                f"budget is {budget}"
            )
        nxt = []
        for x, y in pts:
            for a in range(p):
                xa = x + q * a
                for b in range(p):
                    yb = y + q * b
                    if all(g.evaluate(xa, yb, q1) == 0 for g in polys):
                        nxt.append((xa, yb))
        pts = nxt
        yield list(pts)


# -- serialization ------------------------------------------------------------


def write_points(ps: PointSet, f: BiPoly, fh: IO[str], extra_header: dict | None = None) -> None:
    """Write 'x,y' lines under a '# p=.. m=.. f=..' header."""
    fh.write(f"# p={ps.p} m={ps.m} f={f}\n")
    for key, value in (extra_header or {}).items():
        fh.write(f"# {key}={value}\n")
    for x, y in zip(ps.xs, ps.ys):
        fh.write(f"{int(x)},{int(y)}\n")


_HEADER_RE = re.compile(r"^#\s*p=(\d+)\s+m=(\d+)\s+f=(.*)$")


def read_points(fh: IO[str]) -> tuple[PointSet, dict]:
    """Inverse of write_points; returns the set and the header fields."""
    header: dict[str, str] = {}
    xs, ys = [], []
    for line in fh:
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            match = _HEADER_RE.match(line)
            if match:
                header["p"], header["m"], header["f"] = match.groups()
            else:
                key, _, value = line[1:].strip().partition("=")
                header.setdefault(key.strip(), value)
            continue
        sx, _, sy = line.partition(",")
        xs.append(int(sx))
        ys.append(int(sy))
    p, m = int(header["p"]), int(header["m"])
    return (
        PointSet(p, m, np.array(xs, dtype=np.int64), np.array(ys, dtype=np.int64), "file"),
        header,
    )
