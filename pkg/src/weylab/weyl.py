"""Numerical Weyl-Titchmarsh functions of -y'' + q y = z y on [l, inf).

``m_inf`` is computed from the logarithmic derivative u = y'/y of the
square-integrable solution, which obeys the Riccati equation

    u' = q(x) - z - u^2.

Integrating it backwards from a truncation point L, seeded with the WKB value
u(L) = i*sqrt(z - q(L)), is stable: perturbations decay like
exp(-2 Im sqrt(z) (L - x)) on the way down to l. Then m_inf(z) = -u(l).
The truncation length is doubled until two successive values agree.
"""
from __future__ import annotations

import functools
import math
import os
from dataclasses import dataclass, replace
from typing import List, NamedTuple, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .errors import BranchDomainError, IntegrationFailure, NonConvergence, PoleError
from .mobius import INF, canonical_alpha, lft
from .potential import Potential, on_cut, sqrt_cut


@dataclass(frozen=True)
class SolverConfig:
    """Truncation and integrator controls.

    ``initial_L``/``max_L`` default to 50 + l and 6400 + l. ``min_step`` is
    checked on the accepted steps (the final step onto the endpoint excluded).
    """
    initial_L: Optional[float] = None
    max_L: Optional[float] = None
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    first_step: Optional[float] = None
    min_step: float = 1e-10
    max_step: float = math.inf
    ode_rtol: float = 1e-11
    ode_atol: float = 1e-13
    pole_bound: float = 1e8

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("rel_tol and abs_tol must be positive")
        if not (self.min_step > 0 and self.max_step > self.min_step):
            raise ValueError("need 0 < min_step < max_step")

    def lengths(self, p: Potential):
        ell = p.left_endpoint
        Lmax = ell + 6400.0 if self.max_L is None else float(self.max_L)
        # the default start length yields to a smaller explicit max_L
        L0 = min(ell + 50.0, Lmax) if self.initial_L is None else float(self.initial_L)
        if not ell < L0 <= Lmax:
            raise ValueError(f"need l < initial_L <= max_L, got {ell}, {L0}, {Lmax}")
        return L0, Lmax

    @classmethod
    def from_env(cls, **kwargs) -> "SolverConfig":
        """Default config, with WEYLAB_MAX_L overriding max_L when set."""
        env = os.environ.get("WEYLAB_MAX_L")
        if env:
            kwargs.setdefault("max_L", float(env))
        return cls(**kwargs)


DEFAULT_CONFIG = SolverConfig()


@dataclass(frozen=True)
class WeylEvaluation:
    z: complex
    m: complex
    truncation_length: float
    est_error: float
    iterations: int
    converged: bool = True


class CauchyResult(NamedTuple):
    """Solution values at the end point, stored as (y, y') * exp(log_scale)."""
    y: complex
    dy: complex
    log_scale: float

    def unscaled(self):
        s = math.exp(self.log_scale)
        return self.y * s, self.dy * s


def _check_steps(sol, cfg, z):
    steps = np.abs(np.diff(sol.t))
    if steps.size > 1 and steps[:-1].min() < cfg.min_step:
        k = int(np.argmin(steps[:-1]))
        raise IntegrationFailure(
            f"step size {steps[k]:.3g} below min_step {cfg.min_step:.3g} near x={sol.t[k]:.6g}",
            x=float(sol.t[k]), step=float(steps[k]), z=z)


def solve_cauchy(p: Potential, z, y0, dy0, upto: float,
                 cfg: SolverConfig = DEFAULT_CONFIG) -> CauchyResult:
    """Solve -y'' + q y = z y with y(l) = y0, y'(l) = dy0 up to x = ``upto``.

    The state vector is renormalized between segments so that growing
    solutions never overflow; the accumulated factor is ``log_scale``.
    """
    ell = p.left_endpoint
    if not upto > ell:
        raise ValueError("upto must exceed the left endpoint")
    z = complex(z)
    state = np.array([y0, dy0], dtype=complex)
    log_scale = 0.0
    seg = 25.0 / (1.0 + abs(sqrt_cut(z)))

    def rhs(x, v):
        return np.array([v[1], (p.evaluate(x) - z) * v[0]])

    a = ell
    while a < upto:
        b = min(a + seg, upto)
        sol = solve_ivp(rhs, (a, b), state, method="DOP853", rtol=cfg.ode_rtol,
                        atol=cfg.ode_atol, first_step=cfg.first_step, max_step=cfg.max_step)
        if sol.status < 0:
            raise IntegrationFailure(sol.message, x=a, z=z)
        _check_steps(sol, cfg, z)
        state = sol.y[:, -1]
        norm = float(np.max(np.abs(state)))
        if norm > 1e50 or (0 < norm < 1e-50):
            state = state / norm
            log_scale += math.log(norm)
        a = b
    return CauchyResult(complex(state[0]), complex(state[1]), log_scale)


def riccati_log_derivative(p: Potential, zs, L: float, cfg: SolverConfig = DEFAULT_CONFIG):
    """u(l) = y'(l)/y(l) of the decaying solution, truncated at L, for each z in ``zs``."""
    zs = np.atleast_1d(np.asarray(zs, dtype=complex))
    ell = p.left_endpoint
    u0 = 1j * np.atleast_1d(sqrt_cut(zs - p.evaluate(L)))

    def rhs(x, u):
        return p.evaluate(x) - zs - u * u

    def pole(x, u):
        return float(np.max(np.abs(u))) - cfg.pole_bound
    pole.terminal = True

    sol = solve_ivp(rhs, (L, ell), u0, method="DOP853", rtol=cfg.ode_rtol,
                    atol=cfg.ode_atol, first_step=cfg.first_step,
                    max_step=cfg.max_step, events=pole)
    if sol.status == 1:
        x = float(sol.t_events[0][0])
        raise PoleError(f"|y'/y| exceeded {cfg.pole_bound:g} at x={x:.6g} (solution zero)",
                        where=x)
    if sol.status < 0:
        raise IntegrationFailure(f"Riccati integration failed: {sol.message}", z=zs)
    _check_steps(sol, cfg, zs)
    return sol.y[:, -1]


def _validate_z(z) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite z={z}")
    if on_cut(z):
        raise BranchDomainError(f"z={z} lies on the spectrum cut [0, inf)")
    return z


@functools.lru_cache(maxsize=512)
def _m_inf_levels(p: Potential, zs: tuple, cfg: SolverConfig):
    """Run the L-doubling protocol on upper-half-plane/negative points ``zs``.

    Returns arrays (m, L, est_error, iterations, converged).
    """
    zs = np.asarray(zs, dtype=complex)
    n = zs.size
    ell = p.left_endpoint
    L0, Lmax = cfg.lengths(p)
    m_out = np.full(n, np.nan + 0j)
    L_out = np.zeros(n)
    err_out = np.full(n, np.inf)
    it_out = np.zeros(n, dtype=int)
    done = np.zeros(n, dtype=bool)
    prev = None
    L = L0
    level = 0
    while True:
        level += 1
        active = np.flatnonzero(~done)
        m = -riccati_log_derivative(p, zs[active], L, cfg)
        m_out[active] = m
        L_out[active] = L
        it_out[active] = level
        if prev is not None:
            err = np.abs(m - prev[active])
            err_out[active] = err
            ok = err < np.maximum(cfg.abs_tol, cfg.rel_tol * np.abs(m))
            done[active[ok]] = True
        if done.all() or L >= Lmax:
            break
        prev = m_out.copy()
        L = min(ell + 2.0 * (L - ell), Lmax)
    return m_out, L_out, err_out, it_out, done.copy()


def m_inf_many(p: Potential, zs: Sequence[complex], cfg: SolverConfig = DEFAULT_CONFIG,
               raise_on_failure: bool = True) -> List[WeylEvaluation]:
    """Evaluate m_inf at every point of ``zs`` (batched integration).

    Points with Im z < 0 are computed at conj(z) and conjugated. With
    ``raise_on_failure=False`` unconverged points come back flagged instead of
    raising NonConvergence.
    """
    zs = [_validate_z(z) for z in np.atleast_1d(np.asarray(zs, dtype=complex))]
    if not zs:
        return []
    flip = np.array([z.imag < 0 for z in zs])
    w = tuple(z.conjugate() if f else z for z, f in zip(zs, flip))
    # identical points are integrated once
    uniq = tuple(dict.fromkeys(w))
    m, L, err, its, ok = _m_inf_levels(p, uniq, cfg)
    index = {z: k for k, z in enumerate(uniq)}
    out = []
    for z, f, wz in zip(zs, flip, w):
        k = index[wz]
        val = complex(m[k])
        ev = WeylEvaluation(z, val.conjugate() if f else val, float(L[k]),
                            float(err[k]), int(its[k]), bool(ok[k]))
        if not ev.converged and raise_on_failure:
            raise NonConvergence(
                f"m_inf({z}) not converged at L={ev.truncation_length:g}: "
                f"est_error={ev.est_error:.3g}", est_error=ev.est_error, evaluation=ev)
        out.append(ev)
    return out


def m_inf(p: Potential, z, cfg: SolverConfig = DEFAULT_CONFIG) -> WeylEvaluation:
    return m_inf_many(p, [z], cfg)[0]


def m_inf_values(p: Potential, zs, cfg: SolverConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Just the m values, as a complex array (raises on non-convergence)."""
    return np.array([ev.m for ev in m_inf_many(p, zs, cfg)], dtype=complex)


def m_alpha_from_m(m, alpha: float):
    """(sin a + m cos a) / (cos a - m sin a)."""
    a = canonical_alpha(alpha)
    s, c = math.sin(a), math.cos(a)
    return lft(c, s, -s, c, m, what=f"m_alpha(alpha={a:.6g})")


def m_alpha(p: Potential, alpha: float, z, cfg: SolverConfig = DEFAULT_CONFIG) -> complex:
    return m_alpha_from_m(m_inf(p, z, cfg).m, alpha)


def m_alpha_values(p: Potential, alpha: float, zs, cfg: SolverConfig = DEFAULT_CONFIG):
    return m_alpha_from_m(m_inf_values(p, zs, cfg), alpha)


@dataclass(frozen=True)
class MinusZeroFit:
    limit: float
    coefficients: tuple
    eps: tuple
    values: tuple
    residual: float
    diverged: bool = False


def minus_zero_fit(p: Potential, cfg: SolverConfig = DEFAULT_CONFIG, *, eps0: float = 1e-4,
                   n_eps: int = 7, n_terms: int = 3, fit_tol: float = 1e-6,
                   divergence_bound: float = 1e6) -> MinusZeroFit:
    """Extrapolate m_inf(-eps) to eps -> 0 with the basis {1, sqrt(eps), eps}.

    Samples are eps_k = eps0 * 4**-k for k = 0..n_eps-1; ``n_terms`` keeps the
    first 1, 2 or 3 basis functions.
    """
    if not 1 <= n_terms <= 3 or n_eps < n_terms:
        raise ValueError("need 1 <= n_terms <= 3 and n_eps >= n_terms")
    eps = eps0 * 4.0 ** -np.arange(n_eps)
    vals = m_inf_values(p, -eps + 0j, cfg)
    mags = np.abs(vals)
    if n_eps > 1 and np.all(np.diff(mags) > 0) and mags[-1] > divergence_bound:
        return MinusZeroFit(INF, (), tuple(float(e) for e in eps),
                            tuple(complex(v) for v in vals), 0.0, diverged=True)
    A = np.stack([np.ones_like(eps), np.sqrt(eps), eps], axis=1)[:, :n_terms]
    coef, *_ = np.linalg.lstsq(A, vals.real, rcond=None)
    a = float(coef[0])
    resid = float(np.max(np.abs(A @ coef - vals.real) + np.abs(vals.imag))) / (1.0 + abs(a))
    fit = MinusZeroFit(a, tuple(float(c) for c in coef), tuple(float(e) for e in eps),
                       tuple(complex(v) for v in vals), resid)
    if resid > fit_tol:
        raise NonConvergence(
            f"m(-0) extrapolation residual {resid:.3g} exceeds {fit_tol:.3g}", est_error=resid)
    return fit


def m_inf_at_minus_zero(p: Potential, cfg: SolverConfig = DEFAULT_CONFIG, **kwargs) -> float:
    """The boundary value m_inf(-0) as an extended real (``inf`` if it diverges)."""
    return minus_zero_fit(p, cfg, **kwargs).limit


def with_max_L(cfg: SolverConfig, max_L: float) -> SolverConfig:
    return replace(cfg, max_L=max_L)
