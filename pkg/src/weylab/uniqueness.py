"""Deciding whether two L-systems are equal or share their main operator.

Equality (same mu and h) is tested as equality of sampled impedance
functions. Sharing the main operator (same h) is tested by recovering the
angle alpha of a Donoghue transform mapping one impedance onto the other and
checking that mu_2 = mu(alpha) for it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .classify import STANDARD_GRID
from .errors import EqualParamsRequired, NoMatch, NotReal, PoleError
from .lsystem import LSystemParams, donoghue_transform, impedance_values, mu_alpha
from .mobius import angle_distance, canonical_alpha, chordal_distance
from .weyl import DEFAULT_CONFIG, SolverConfig

MATCH_GRID = STANDARD_GRID[STANDARD_GRID.imag >= 0.5]

EQUAL = "Equal"
SAME_MAIN_OPERATOR = "SameMainOperator"
DISTINCT = "Distinct"


@dataclass(frozen=True)
class MatchReport:
    verdict: str
    max_residual: float
    grid_size: int
    alpha: Optional[float] = None
    mu_check: Optional[bool] = None

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "alpha": self.alpha, "mu_check": self.mu_check,
                "max_residual": self.max_residual, "grid_size": self.grid_size}


def _grid(grid):
    return MATCH_GRID if grid is None else np.atleast_1d(np.asarray(grid, dtype=complex))


def impedance_match(a: LSystemParams, b: LSystemParams, grid=None, tol: float = 1e-6,
                    cfg: SolverConfig = DEFAULT_CONFIG, oracle: bool = False) -> MatchReport:
    """Equal iff max |V_a - V_b| / (1 + |V_a|) < tol on the grid."""
    if a.mu != b.mu or a.h != b.h:
        raise EqualParamsRequired(
            f"equality test needs identical (mu, h); got ({a.mu}, {a.h}) and ({b.mu}, {b.h})")
    grid = _grid(grid)
    va = impedance_values(a, grid, cfg, oracle)
    vb = impedance_values(b, grid, cfg, oracle)
    resid = float(np.max(np.abs(va - vb) / (1.0 + np.abs(va))))
    return MatchReport(EQUAL if resid < tol else DISTINCT, resid, grid.size)


def _null_direction(rows):
    """Unit (cos a, sin a) minimizing the stacked real rows; returns (alpha, sigma_ratio)."""
    _, s, vt = np.linalg.svd(rows)
    c, sn = vt[-1]
    ratio = s[-1] / s[0] if s[0] > 0 else 0.0
    return canonical_alpha(math.atan2(sn, c)), ratio


def find_donoghue_alpha(v1: Sequence[Tuple[complex, complex]],
                        v2: Sequence[Tuple[complex, complex]], tol: float = 1e-8) -> float:
    """Angle alpha in (0, pi] with v2 = donoghue_transform(v1, alpha) at every sample.

    Per sample, sin(a) (v2 - v1) = cos(a) (1 + v1 v2), i.e.
    tan(a) = (1 + v1 v2) / (v2 - v1); a real solution exists only when the
    complex ratio is real. All per-sample angles must agree within ``tol``
    (circular distance on 2a) and the forward transform must reproduce v2.
    """
    if len(v1) != len(v2):
        raise ValueError("sample lists differ in length")
    if len(v1) < 3:
        raise ValueError("need at least 3 paired samples")
    z1 = np.array([complex(z) for z, _ in v1])
    z2 = np.array([complex(z) for z, _ in v2])
    if np.any(z1 != z2):
        raise ValueError("samples must be taken at identical z")
    w1 = np.array([complex(v) for _, v in v1])
    w2 = np.array([complex(v) for _, v in v2])

    num = 1.0 + w1 * w2
    den = w2 - w1
    scale = np.abs(num) + np.abs(den)
    if np.all(np.abs(den) <= 1e-14 * np.maximum(scale, 1e-300)):
        return math.pi / 2

    angles = []
    rows = []
    for n, d, s in zip(num, den, scale):
        r = np.array([[-n.real, d.real], [-n.imag, d.imag]]) / s
        rows.append(r)
        alpha_k, ratio = _null_direction(r)
        # a genuine Donoghue pair has a rank-one 2x2 system per sample
        if ratio > tol:
            raise NoMatch(f"sample tan(alpha) is not real (singular-value ratio {ratio:.3g})")
        angles.append(alpha_k)
    alpha, _ = _null_direction(np.vstack(rows))
    spread = max(angle_distance(a, alpha) for a in angles)
    if spread > tol:
        raise NoMatch(f"per-sample angles disagree by {spread:.3g} rad")
    try:
        fwd = donoghue_transform(w1, alpha)
    except PoleError as exc:
        raise NoMatch(f"forward transform hits a pole at alpha={alpha:.6g}") from exc
    resid = float(np.max(np.abs(fwd - w2) / (1.0 + np.abs(w2))))
    if resid > max(tol, 1e-10):
        raise NoMatch(f"forward transform residual {resid:.3g}")
    return alpha


def shares_main_operator(a: LSystemParams, b: LSystemParams, grid=None, tol: float = 1e-8,
                         cfg: SolverConfig = DEFAULT_CONFIG, oracle: bool = False,
                         mu_tol: float = 1e-7) -> MatchReport:
    """SameMainOperator(alpha, mu_check) when V_b is a Donoghue transform of V_a."""
    grid = _grid(grid)
    if a.h != b.h:
        return MatchReport(DISTINCT, math.inf, grid.size)
    va = impedance_values(a, grid, cfg, oracle)
    vb = impedance_values(b, grid, cfg, oracle)
    try:
        alpha = find_donoghue_alpha(list(zip(grid, va)), list(zip(grid, vb)), tol)
    except NoMatch:
        resid = float(np.max(np.abs(va - vb) / (1.0 + np.abs(va))))
        return MatchReport(DISTINCT, resid, grid.size)
    resid = float(np.max(np.abs(donoghue_transform(va, alpha) - vb) / (1.0 + np.abs(vb))))
    try:
        mu_check = chordal_distance(mu_alpha(a.mu, a.h, alpha), b.mu) < mu_tol
    except NotReal:
        mu_check = False
    return MatchReport(SAME_MAIN_OPERATOR, resid, grid.size, alpha=alpha, mu_check=mu_check)
