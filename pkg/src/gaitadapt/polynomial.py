"""Single-variable polynomials defined by mixed boundary conditions.

Every trajectory piece in the planner and the landing adaptation is a
polynomial fixed by position / velocity / acceleration values at given
times.  :func:`solve_bvp` handles one piece; :func:`solve_coupled_bvp`
solves several pieces jointly when their derivatives are tied together
(cyclic steady-state walking).

Coefficients are stored in the absolute-time power basis,
``p(t) = sum(a[i] * t**i)``, but the linear systems are formed in a
normalized variable ``s = (t - t_lo) / (t_hi - t_lo)`` for conditioning.
Solved pieces keep their normalized coefficients too and are evaluated in
``s``; expanding a short, high-degree piece into powers of ``t`` produces
large alternating coefficients whose sum cancels badly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial, isfinite
from typing import Sequence

import numpy as np

from .errors import (
    CountMismatchError,
    OutOfDomainError,
    SingularSystemError,
    TooFewConditionsError,
)

RESIDUAL_TOL = 1e-9
DOMAIN_SLACK = 1e-9
_MAX_COND = 1e12


@dataclass(frozen=True)
class BoundaryCondition:
    """``p^(order)(time) == value``."""

    order: int
    time: float
    value: float

    def __post_init__(self):
        if self.order not in (0, 1, 2):
            raise ValueError(f"derivative order must be 0, 1 or 2, got {self.order}")
        if not isfinite(self.time):
            raise ValueError("condition time must be finite")


@dataclass(frozen=True)
class Coupling:
    """Cross-segment equality ``p_a^(order_a)(time_a) == sign * p_b^(order_b)(time_b)``."""

    seg_a: int
    order_a: int
    time_a: float
    seg_b: int
    order_b: int
    time_b: float
    sign: float = 1.0


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple[float, ...]
    t_lo: float
    t_hi: float
    # coefficients in s = (t - t_lo) / (t_hi - t_lo), when known
    local: tuple[float, ...] | None = field(default=None, compare=False, repr=False)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def domain(self) -> tuple[float, float]:
        return (self.t_lo, self.t_hi)

    def __call__(self, t: float, order: int = 0) -> float:
        return evaluate(self, t, order)

    def contains(self, t: float) -> bool:
        return self.t_lo - DOMAIN_SLACK <= t <= self.t_hi + DOMAIN_SLACK

    def derivative_coeffs(self, order: int) -> tuple[float, ...]:
        c = self.coeffs
        if order > self.degree:
            return (0.0,)
        return tuple(c[i] * (factorial(i) // factorial(i - order))
                     for i in range(order, len(c)))

    def sample(self, ts, order: int = 0) -> np.ndarray:
        """Vectorized evaluation over an array of times (domain-checked)."""
        ts = np.asarray(ts, dtype=float)
        if ts.size and (ts.min() < self.t_lo - DOMAIN_SLACK or ts.max() > self.t_hi + DOMAIN_SLACK):
            raise OutOfDomainError(f"samples leave domain [{self.t_lo}, {self.t_hi}]")
        if self.local is not None:
            scale = self.t_hi - self.t_lo
            ts = (ts - self.t_lo) / scale
            dc = _derivative(self.local, order)
        else:
            scale = 1.0
            dc = self.derivative_coeffs(order)
        out = np.zeros_like(ts)
        for c in reversed(dc):
            out = out * ts + c
        return out / scale ** order if order else out


def constant(value: float, t_lo: float, t_hi: float) -> Polynomial:
    return Polynomial((float(value),), float(t_lo), float(t_hi))


def evaluate(p: Polynomial, t: float, order: int = 0) -> float:
    """Horner evaluation of the ``order``-th derivative at ``t``.

    Orders above the degree evaluate to zero.
    """
    if not p.contains(t):
        raise OutOfDomainError(f"t={t!r} outside [{p.t_lo}, {p.t_hi}]")
    if p.local is None:
        c, x, scale = p.coeffs, t, 1.0
    else:
        scale = p.t_hi - p.t_lo
        c, x = p.local, (t - p.t_lo) / scale
    n = len(c)
    if order >= n:
        return 0.0
    acc = 0.0
    for i in range(n - 1, order - 1, -1):
        acc = acc * x + c[i] * (factorial(i) // factorial(i - order))
    return acc / scale ** order if order else acc


def _derivative(c: Sequence[float], order: int) -> tuple[float, ...]:
    if order >= len(c):
        return (0.0,)
    return tuple(c[i] * (factorial(i) // factorial(i - order)) for i in range(order, len(c)))


# --- system assembly ---------------------------------------------------------

def _basis_row(degree: int, s: float, order: int, scale: float) -> np.ndarray:
    """Row of d^order/dt^order of s^j, with s = (t - t_lo) / scale."""
    row = np.zeros(degree + 1)
    for j in range(order, degree + 1):
        row[j] = factorial(j) // factorial(j - order) * s ** (j - order)
    return row / scale ** order


def _to_absolute(c_norm: np.ndarray, t_lo: float, scale: float) -> tuple[float, ...]:
    # sum_j c_j ((t - t_lo)/scale)^j expanded in powers of t
    n = len(c_norm)
    out = [0.0] * n
    for j in range(n):
        cj = c_norm[j] / scale ** j
        if cj == 0.0:
            continue
        for i in range(j + 1):
            out[i] += cj * comb(j, i) * (-t_lo) ** (j - i)
    return tuple(float(v) for v in out)


def _from_normalized(c_norm: np.ndarray, t_lo: float, t_hi: float) -> Polynomial:
    local = tuple(float(v) for v in c_norm)
    return Polynomial(_to_absolute(c_norm, t_lo, t_hi - t_lo), t_lo, t_hi, local)


def _check_duplicates(keys):
    seen = set()
    for key in keys:
        if key in seen:
            raise SingularSystemError(f"duplicate boundary condition {key}")
        seen.add(key)


def _solve(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    try:
        cond = np.linalg.cond(matrix)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(str(exc)) from exc
    if not np.isfinite(cond) or cond > _MAX_COND:
        raise SingularSystemError(f"boundary-condition system is singular (cond={cond:.3g})")
    return np.linalg.solve(matrix, rhs)


def _check_domain(domain):
    t_lo, t_hi = float(domain[0]), float(domain[1])
    if not (isfinite(t_lo) and isfinite(t_hi)) or t_hi <= t_lo:
        raise ValueError(f"invalid domain {domain!r}")
    return t_lo, t_hi


def solve_bvp(conditions: Sequence[BoundaryCondition], domain: tuple[float, float],
              degree: int | None = None) -> Polynomial:
    """Polynomial of degree ``len(conditions) - 1`` meeting every condition.

    ``degree`` may be passed to assert the expected count; a shortfall
    raises :class:`TooFewConditionsError`, an excess
    :class:`CountMismatchError`.
    """
    conditions = list(conditions)
    if not conditions:
        raise TooFewConditionsError("at least one boundary condition is required")
    if degree is None:
        degree = len(conditions) - 1
    elif len(conditions) < degree + 1:
        raise TooFewConditionsError(f"degree {degree} needs {degree + 1} conditions, got {len(conditions)}")
    elif len(conditions) > degree + 1:
        raise CountMismatchError(f"degree {degree} takes {degree + 1} conditions, got {len(conditions)}")
    _check_duplicates((c.order, float(c.time)) for c in conditions)
    t_lo, t_hi = _check_domain(domain)
    scale = t_hi - t_lo

    a = np.array([_basis_row(degree, (c.time - t_lo) / scale, c.order, scale) for c in conditions])
    b = np.array([float(c.value) for c in conditions])
    c_norm = _solve(a, b)
    return _from_normalized(c_norm, t_lo, t_hi)


def solve_coupled_bvp(segments: Sequence[tuple[int, tuple[float, float]]],
                      conditions: Sequence[tuple[int, BoundaryCondition]],
                      couplings: Sequence[Coupling] = ()) -> list[Polynomial]:
    """Jointly solve several polynomial pieces.

    Args:
        segments: ``(degree, (t_lo, t_hi))`` per piece.
        conditions: ``(segment_index, BoundaryCondition)`` point constraints.
        couplings: derivative equalities tying two pieces together.

    The total constraint count must equal the total number of coefficients.
    """
    segments = [(int(d), _check_domain(dom)) for d, dom in segments]
    offsets = np.cumsum([0] + [d + 1 for d, _ in segments])
    n_unknown = int(offsets[-1])
    n_eq = len(conditions) + len(couplings)
    if n_eq != n_unknown:
        raise CountMismatchError(f"{n_eq} constraints for {n_unknown} coefficients")
    _check_duplicates((i, c.order, float(c.time)) for i, c in conditions)

    rows, rhs = [], []
    for seg, cond in conditions:
        degree, (t_lo, t_hi) = segments[seg]
        scale = t_hi - t_lo
        row = np.zeros(n_unknown)
        row[offsets[seg]:offsets[seg + 1]] = _basis_row(degree, (cond.time - t_lo) / scale, cond.order, scale)
        rows.append(row)
        rhs.append(float(cond.value))
    for cp in couplings:
        row = np.zeros(n_unknown)
        da, (lo_a, hi_a) = segments[cp.seg_a]
        db, (lo_b, hi_b) = segments[cp.seg_b]
        row[offsets[cp.seg_a]:offsets[cp.seg_a + 1]] += _basis_row(
            da, (cp.time_a - lo_a) / (hi_a - lo_a), cp.order_a, hi_a - lo_a)
        row[offsets[cp.seg_b]:offsets[cp.seg_b + 1]] -= cp.sign * _basis_row(
            db, (cp.time_b - lo_b) / (hi_b - lo_b), cp.order_b, hi_b - lo_b)
        rows.append(row)
        rhs.append(0.0)

    solution = _solve(np.array(rows), np.array(rhs))
    out = []
    for k, (degree, (t_lo, t_hi)) in enumerate(segments):
        out.append(_from_normalized(solution[offsets[k]:offsets[k + 1]], t_lo, t_hi))
    return out


def residuals(p: Polynomial, conditions: Sequence[BoundaryCondition]) -> list[float]:
    """Signed residual of each condition, for diagnostics and tests."""
    return [evaluate(p, c.time, c.order) - c.value for c in conditions]


def quintic_transition(start: float, end: float, duration: float,
                       v0: float = 0.0, a0: float = 0.0) -> Polynomial:
    """Quintic on [0, duration] from (start, v0, a0) to (end, 0, 0)."""
    return solve_bvp([
        BoundaryCondition(0, 0.0, start),
        BoundaryCondition(1, 0.0, v0),
        BoundaryCondition(2, 0.0, a0),
        BoundaryCondition(0, duration, end),
        BoundaryCondition(1, duration, 0.0),
        BoundaryCondition(2, duration, 0.0),
    ], (0.0, duration))
