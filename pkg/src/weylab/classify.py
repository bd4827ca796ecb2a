"""Sampled Herglotz/Stieltjes checks and accretive/sectorial classification.

Operator level (main operator T_h, boundary condition y'(l) = h y(l)) with
m0 = m_inf(-0):

* accretive   iff  Re h >= -m0
* sectorial   iff  Re h >  -m0, exact angle tan(beta) = Im h / (Re h + m0)
* extremal    iff  Re h == -m0

Extension level: Theta(mu, h) is accretive iff T_h is accretive and
mu >= mu* = (Im h)^2 / (m0 + Re h) + Re h (or mu = inf). Equality gives an
extremal system, mu = inf keeps the exact angle, anything in between is
sectorial with an angle strictly larger than beta and below pi/2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from .errors import Indeterminate, TailTooLarge
from .lsystem import BoundaryCondition, LSystemParams, impedance_values, quasi_kernel_xi
from .mobius import INF, ext_to_json, is_inf
from .potential import Potential
from .weyl import DEFAULT_CONFIG, SolverConfig, m_inf_at_minus_zero

STANDARD_RE = (-5.0, -2.0, -1.0, 0.5, 1.0, 2.0, 5.0)
STANDARD_IM = (0.1, 0.5, 1.0, 2.0, 10.0)
STANDARD_GRID = np.array([complex(x, y) for x in STANDARD_RE for y in STANDARD_IM])
NEGATIVE_SAMPLES = np.array([-0.1, -1.0, -10.0], dtype=complex)

# |Re h + m0| (or |mu - mu*|) below EQ_RTOL*(1+|m0|) counts as equality;
# between that and BAND_RTOL*(1+|m0|) the verdict is Indeterminate.
EQ_RTOL = 1e-6
BAND_RTOL = 1e-4

DEFAULT_TOL = 1e-7


@dataclass(frozen=True)
class FunctionVerdict:
    property: str
    holds: bool
    worst_violation: float
    witness_z: Optional[complex]
    grid_size: int

    def to_dict(self) -> dict:
        w = self.witness_z
        return {"property": self.property, "holds": self.holds,
                "worst_violation": self.worst_violation,
                "witness_z": None if w is None else [w.real, w.imag],
                "grid_size": self.grid_size}


def _verdict(name, parts, tol, grid_size):
    """``parts`` is a list of (violations, z) array pairs; pick the worst entry."""
    worst, witness = 0.0, None
    for viol, zs in parts:
        if viol.size and viol.max() > worst:
            k = int(np.argmax(viol))
            worst, witness = float(viol[k]), complex(zs[k])
    holds = worst <= tol
    return FunctionVerdict(name, holds, worst, None if holds else witness, grid_size)


def _herglotz_parts(f, grid, symmetry_stride):
    vals = np.asarray(f(grid), dtype=complex)
    parts = [(np.maximum(0.0, -vals.imag), grid)]
    sub = grid[::symmetry_stride]
    if sub.size:
        mirrored = np.asarray(f(sub.conjugate()), dtype=complex)
        parts.append((np.abs(mirrored - vals[::symmetry_stride].conjugate()), sub.conjugate()))
    return vals, parts


def _grid(grid):
    grid = STANDARD_GRID if grid is None else np.atleast_1d(np.asarray(grid, dtype=complex))
    if grid.size == 0:
        raise ValueError("empty grid")
    if np.any(grid.imag <= 0):
        raise ValueError("grid points must lie in the upper half-plane")
    return grid


def check_herglotz(f: Callable, grid=None, tol: float = DEFAULT_TOL,
                   symmetry_stride: int = 5) -> FunctionVerdict:
    """Im f >= -tol on ``grid`` and f(conj z) = conj f(z) on every ``symmetry_stride``-th point.

    ``f`` takes and returns complex arrays.
    """
    grid = _grid(grid)
    _, parts = _herglotz_parts(f, grid, symmetry_stride)
    return _verdict("Herglotz", parts, tol, grid.size)


def check_stieltjes(f: Callable, grid=None, tol: float = DEFAULT_TOL, negative=None,
                    symmetry_stride: int = 5) -> FunctionVerdict:
    """Herglotz, plus Im[z f(z)] / Im z >= -tol, plus f real on negative-axis samples."""
    grid = _grid(grid)
    negative = NEGATIVE_SAMPLES if negative is None else np.asarray(negative, dtype=complex)
    vals, parts = _herglotz_parts(f, grid, symmetry_stride)
    parts.append((np.maximum(0.0, -(grid * vals).imag / grid.imag), grid))
    if negative.size:
        parts.append((np.abs(np.asarray(f(negative), dtype=complex).imag), negative))
    return _verdict("Stieltjes", parts, tol, grid.size)


# -- operator / L-system classification ------------------------------------------

@dataclass(frozen=True)
class ExtensionClass:
    kind: str                       # "Sectorial" | "Extremal" | "NotAccretive"
    beta: Optional[float] = None    # exact angle, when known
    beta_bracket: Optional[tuple] = None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "beta": self.beta,
                "beta_bracket": None if self.beta_bracket is None else list(self.beta_bracket)}

    def __str__(self):
        if self.kind != "Sectorial":
            return self.kind
        if self.beta is not None:
            return f"Sectorial({self.beta:.10g})"
        lo, hi = self.beta_bracket
        return f"Sectorial(beta1 in ({lo:.10g}, {hi:.10g}))"


@dataclass(frozen=True)
class OperatorReport:
    operator_accretive: bool
    operator_sectorial: bool
    exact_angle_beta: Optional[float]
    operator_extremal: bool
    m_minus_zero: float


@dataclass(frozen=True)
class ClassificationReport:
    operator_accretive: bool
    operator_sectorial: bool
    exact_angle_beta: Optional[float]
    operator_extremal: bool
    extension_accretive: bool
    extension_class: ExtensionClass
    m_minus_zero: float
    quasi_kernel: BoundaryCondition

    def to_dict(self) -> dict:
        return {
            "operator_accretive": self.operator_accretive,
            "operator_sectorial": self.operator_sectorial,
            "exact_angle_beta": self.exact_angle_beta,
            "operator_extremal": self.operator_extremal,
            "extension_accretive": self.extension_accretive,
            "extension_class": self.extension_class.to_dict(),
            "m_minus_zero": ext_to_json(self.m_minus_zero),
            "quasi_kernel": self.quasi_kernel.to_json(),
        }


def _compare(value, threshold, scale):
    """-1, 0 (equal) or +1; None inside the uncertainty band."""
    d = value - threshold
    if abs(d) <= EQ_RTOL * scale:
        return 0
    if abs(d) <= BAND_RTOL * scale:
        return None
    return 1 if d > 0 else -1


def _operator_report(h: complex, m0: float):
    """(report, indeterminate) for the main operator T_h."""
    if is_inf(m0):
        return OperatorReport(True, True, None, False, m0), False
    cmp = _compare(h.real, -m0, 1.0 + abs(m0))
    indeterminate = cmp is None
    if indeterminate:
        cmp = 1 if h.real + m0 > 0 else -1
    if cmp == 0:
        rep = OperatorReport(True, False, None, True, m0)
    elif cmp > 0:
        beta = math.atan2(h.imag, h.real + m0)
        rep = OperatorReport(True, True, beta, False, m0)
    else:
        rep = OperatorReport(False, False, None, False, m0)
    return rep, indeterminate


def classify_main_operator(p: Potential, h, cfg: SolverConfig = DEFAULT_CONFIG,
                           m0: Optional[float] = None) -> OperatorReport:
    h = complex(h)
    if not h.imag > 0:
        raise ValueError("Im h must be > 0")
    if m0 is None:
        m0 = m_inf_at_minus_zero(p, cfg)
    rep, indeterminate = _operator_report(h, m0)
    if indeterminate:
        raise Indeterminate(f"Re h + m(-0) = {h.real + m0:.3g} is inside the uncertainty band",
                            report=rep)
    return rep


def accretive_threshold(h: complex, m0: float) -> float:
    """mu* = (Im h)^2 / (m0 + Re h) + Re h; inf when the operator is extremal."""
    if is_inf(m0):
        return h.real
    d = m0 + h.real
    if d <= 0:
        return INF
    return h.imag ** 2 / d + h.real


def classify_lsystem(sys: LSystemParams, cfg: SolverConfig = DEFAULT_CONFIG,
                     m0: Optional[float] = None) -> ClassificationReport:
    h = sys.h
    if m0 is None:
        m0 = m_inf_at_minus_zero(sys.potential, cfg)
    op, indeterminate = _operator_report(h, m0)
    qk = quasi_kernel_xi(sys)

    if not op.operator_accretive:
        ext_class = ExtensionClass("NotAccretive")
    elif is_inf(sys.mu):
        if op.operator_extremal:
            ext_class = ExtensionClass("Extremal")
        else:
            ext_class = ExtensionClass("Sectorial", beta=op.exact_angle_beta)
    elif op.operator_extremal:
        ext_class = ExtensionClass("NotAccretive")
    else:
        mu_star = accretive_threshold(h, m0)
        cmp = _compare(sys.mu, mu_star, 1.0 + abs(mu_star))
        if cmp is None:
            indeterminate = True
            cmp = 1 if sys.mu > mu_star else -1
        if cmp == 0:
            ext_class = ExtensionClass("Extremal")
        elif cmp > 0:
            lo = 0.0 if op.exact_angle_beta is None else op.exact_angle_beta
            ext_class = ExtensionClass("Sectorial", beta_bracket=(lo, math.pi / 2))
        else:
            ext_class = ExtensionClass("NotAccretive")

    report = ClassificationReport(
        operator_accretive=op.operator_accretive,
        operator_sectorial=op.operator_sectorial,
        exact_angle_beta=op.exact_angle_beta,
        operator_extremal=op.operator_extremal,
        extension_accretive=ext_class.kind != "NotAccretive",
        extension_class=ext_class,
        m_minus_zero=m0,
        quasi_kernel=qk,
    )
    if indeterminate:
        raise Indeterminate("classification falls inside a threshold uncertainty band",
                            report=report)
    return report


def impedance_verdicts(sys: LSystemParams, cfg: SolverConfig = DEFAULT_CONFIG,
                       oracle: bool = False, grid=None, tol: float = DEFAULT_TOL):
    """(Herglotz verdict, Stieltjes verdict) for the impedance of ``sys``."""
    f = lambda zs: impedance_values(sys, zs, cfg, oracle)  # noqa: E731
    return check_herglotz(f, grid, tol), check_stieltjes(f, grid, tol)


# -- quadratic forms ---------------------------------------------------------------

def _five_point(y, x, step):
    return (y(x - 2 * step) - 8 * y(x - step) + 8 * y(x + step) - y(x + 2 * step)) / (12 * step)


def _quad(f, a, b):
    val, _ = integrate.quad(f, a, b, limit=400, epsabs=1e-14, epsrel=1e-12)
    return val


def form_values(p: Potential, h, y, dy=None, upper: Optional[float] = None,
                tail_tol: float = 1e-8):
    """Real and imaginary parts of the boundary form on a test function y.

        re = int_l^X (|y'|^2 + q |y|^2) dx + Re h |y(l)|^2
        im = Im h |y(l)|^2

    ``y`` is either a callable (with optional derivative ``dy``; otherwise a
    five-point difference is used) or a pair of arrays ``(xs, ys)`` sampled on
    [l, X]. X defaults to 100*max(l, 1); pass ``upper=np.inf`` for callables
    with a known decay. TailTooLarge is raised when the estimated contribution
    beyond X exceeds ``tail_tol``.
    """
    h = complex(h)
    ell = p.left_endpoint
    if callable(y):
        X = 100.0 * max(ell, 1.0) if upper is None else float(upper)
        if dy is None:
            step = 1e-3
            dy = lambda x: _five_point(y, x, step * max(1.0, abs(x)))  # noqa: E731

        def density(x):
            return abs(dy(x)) ** 2 + p.evaluate(x) * abs(y(x)) ** 2

        bulk = _quad(density, ell, X)
        if math.isfinite(X):
            tail = _quad(density, X, math.inf)
            if abs(tail) > tail_tol:
                raise TailTooLarge(f"tail beyond X={X:g} is {tail:.3g} > {tail_tol:.3g}", tail)
        y_ell = complex(y(ell))
    else:
        xs, ys = (np.asarray(a) for a in y)
        ys = ys.astype(complex)
        if xs[0] != ell:
            raise ValueError("samples must start at the left endpoint")
        d = np.gradient(ys, xs, edge_order=2) if dy is None else np.asarray(dy, dtype=complex)
        dens = np.abs(d) ** 2 + p.evaluate(xs) * np.abs(ys) ** 2
        bulk = float(integrate.simpson(dens, x=xs))
        slope = (dens[-1] - dens[-2]) / (xs[-1] - xs[-2])
        tail = INF if slope >= 0 and dens[-1] != 0 else (dens[-1] ** 2 / -slope if dens[-1] else 0.0)
        if abs(tail) > tail_tol:
            raise TailTooLarge(f"estimated tail beyond X={xs[-1]:g} is {tail:.3g}", tail)
        y_ell = complex(ys[0])
    b = abs(y_ell) ** 2
    return bulk + h.real * b, h.imag * b
