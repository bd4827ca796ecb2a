"""The two-parameter family of Schrodinger L-systems Theta(mu, h).

A system is identified by a potential, a real extension parameter mu (or
``inf``) and a boundary value h with Im h > 0. Everything here is expressed
through the Weyl function m = m_inf(z):

    V(z) = (m + mu) Im h / ((mu - Re h) m + mu Re h - |h|^2)        (finite mu)
    V(z) = Im h / (m + Re h)                                         (mu = inf)
    W(z) = (mu - h)/(mu - conj h) * (m + conj h)/(m + h)             (finite mu)
    W(z) = (m + conj h)/(m + h)                                      (mu = inf)
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NotReal
from .mobius import (INF, POLE_RTOL, canonical_alpha, cot_ext, ext, ext_from_json,
                     ext_to_json, is_inf, lft, parse_complex, tan_ext)
from .potential import Potential, oracle_m_inf, parse_potential_spec
from .weyl import DEFAULT_CONFIG, SolverConfig, m_inf_values


@dataclass(frozen=True)
class LSystemParams:
    potential: Potential
    mu: float
    h: complex

    def __post_init__(self):
        object.__setattr__(self, "mu", ext(self.mu))
        object.__setattr__(self, "h", complex(self.h))
        if not self.h.imag > 0:
            raise ValueError(f"Im h must be > 0 (got h={self.h})")

    def to_json(self) -> dict:
        return {"potential": self.potential.spec(), "mu": ext_to_json(self.mu),
                "h": [self.h.real, self.h.imag]}

    @classmethod
    def from_json(cls, obj: dict) -> "LSystemParams":
        pot = obj["potential"]
        if isinstance(pot, str):
            pot = parse_potential_spec(pot)
        h = obj["h"]
        if isinstance(h, (list, tuple)):
            h = complex(h[0], h[1])
        elif isinstance(h, str):
            h = parse_complex(h)
        elif isinstance(h, dict):
            h = complex(h["re"], h["im"])
        else:
            h = complex(h)
        return cls(pot, ext_from_json(obj["mu"]), h)

    def __str__(self):
        mu = "inf" if is_inf(self.mu) else f"{self.mu:g}"
        return f"Theta(mu={mu}, h={self.h:g}) over {self.potential.describe()}"


@dataclass(frozen=True)
class BoundaryCondition:
    """y'(l) = xi y(l) for finite xi; y(l) = 0 when xi is inf."""
    xi: float

    @property
    def is_dirichlet(self) -> bool:
        return is_inf(self.xi)

    @property
    def is_neumann(self) -> bool:
        return self.xi == 0.0

    def describe(self) -> str:
        if self.is_dirichlet:
            return "y(l)=0 (Dirichlet)"
        if self.is_neumann:
            return "y'(l)=0 (Neumann)"
        return f"y'(l)={self.xi!r}*y(l)"

    def to_json(self) -> dict:
        kind = "Dirichlet" if self.is_dirichlet else "Neumann" if self.is_neumann else "Robin"
        return {"xi": ext_to_json(self.xi), "kind": kind}


# -- closed forms in terms of m ---------------------------------------------------

def impedance_from_m(m, mu, h):
    mu, h = ext(mu), complex(h)
    if is_inf(mu):
        return lft(0.0, h.imag, 1.0, h.real, m, what="impedance")
    return lft(h.imag, mu * h.imag, mu - h.real, mu * h.real - abs(h) ** 2, m,
               what="impedance")


def transfer_from_m(m, mu, h):
    mu, h = ext(mu), complex(h)
    if is_inf(mu):
        pref = 1.0
    else:
        pref = lft(1.0, -h, 1.0, -h.conjugate(), mu, what="transfer prefactor")
    return pref * lft(1.0, h.conjugate(), 1.0, h, m, what="transfer")


def impedance_from_transfer(w):
    """V = i (W + 1)^{-1} (W - 1)."""
    return lft(1j, -1j, 1.0, 1.0, w, what="V from W")


def transfer_from_impedance(v):
    """W = (1 + iV)^{-1} (1 - iV)."""
    return lft(-1j, 1.0, 1j, 1.0, v, what="W from V")


def m_values(p: Potential, zs, cfg: SolverConfig = DEFAULT_CONFIG, oracle: bool = False):
    """m_inf on ``zs``: closed form when ``oracle`` is set, numerical otherwise."""
    zs = np.atleast_1d(np.asarray(zs, dtype=complex))
    if oracle:
        return np.array([oracle_m_inf(p, z) for z in zs], dtype=complex)
    return m_inf_values(p, zs, cfg)


def impedance_values(sys: LSystemParams, zs, cfg: SolverConfig = DEFAULT_CONFIG,
                     oracle: bool = False):
    return impedance_from_m(m_values(sys.potential, zs, cfg, oracle), sys.mu, sys.h)


def transfer_values(sys: LSystemParams, zs, cfg: SolverConfig = DEFAULT_CONFIG,
                    oracle: bool = False):
    return transfer_from_m(m_values(sys.potential, zs, cfg, oracle), sys.mu, sys.h)


def impedance(sys: LSystemParams, z, cfg: SolverConfig = DEFAULT_CONFIG,
              oracle: bool = False) -> complex:
    return complex(impedance_values(sys, [z], cfg, oracle)[0])


def transfer(sys: LSystemParams, z, cfg: SolverConfig = DEFAULT_CONFIG,
             oracle: bool = False) -> complex:
    return complex(transfer_values(sys, [z], cfg, oracle)[0])


# -- parameter maps ---------------------------------------------------------------

def xi_parameter(mu, h) -> float:
    """xi = (mu Re h - |h|^2) / (mu - Re h); Re h at mu = inf, inf at mu = Re h."""
    mu, h = ext(mu), complex(h)
    if is_inf(mu):
        return h.real
    den = mu - h.real
    num = mu * h.real - abs(h) ** 2
    if abs(den) <= POLE_RTOL * max(abs(num), 1e-300):
        return INF
    return num / den


def quasi_kernel_xi(sys: LSystemParams) -> BoundaryCondition:
    return BoundaryCondition(xi_parameter(sys.mu, sys.h))


def donoghue_transform(v, alpha: float):
    """(cos a + sin a * v) / (sin a - cos a * v)."""
    a = canonical_alpha(alpha)
    s, c = math.sin(a), math.cos(a)
    return lft(s, c, -c, s, v, what=f"Donoghue transform (alpha={a:.6g})")


def mu_alpha(mu, h, alpha: float, tol: float = 1e-8) -> float:
    """Parameter of the system whose impedance is the Donoghue transform of Theta(mu, h)."""
    mu, h = ext(mu), complex(h)
    if not h.imag > 0:
        raise ValueError("Im h must be > 0")
    e = cmath.exp(2j * canonical_alpha(alpha))
    hb = h.conjugate()
    if is_inf(mu):
        num = h + e * hb
        den = 1.0 + e
    else:
        num = h * (mu - hb) + e * (mu - h) * hb
        den = mu - hb + e * (mu - h)
    if abs(den) <= POLE_RTOL * max(abs(num), 1e-300):
        return INF
    val = num / den
    if abs(val.imag) > tol * (1.0 + abs(val.real)):
        raise NotReal(f"mu(alpha) = {val} is not real")
    return val.real


def alpha_for_mu(mu) -> float:
    """The unique alpha in (0, pi] with tan(alpha) = mu (inf -> pi/2, 0 -> pi)."""
    mu = ext(mu)
    if is_inf(mu):
        return math.pi / 2
    return canonical_alpha(math.atan(mu))


class Target(enum.Enum):
    NEG_M_INF = "neg_m_inf"
    INV_M_INF = "inv_m_inf"
    NEG_M_ALPHA = "neg_m_alpha"
    INV_M_ALPHA = "inv_m_alpha"


def realize(p: Potential, target, alpha: Optional[float] = None) -> LSystemParams:
    """The system with h = i whose impedance is -m_inf, 1/m_inf, -m_alpha or 1/m_alpha."""
    target = Target(target)
    if target in (Target.NEG_M_ALPHA, Target.INV_M_ALPHA) and alpha is None:
        raise ValueError(f"{target.value} needs alpha")
    if target is Target.NEG_M_INF:
        mu = 0.0
    elif target is Target.INV_M_INF:
        mu = INF
    elif target is Target.NEG_M_ALPHA:
        mu = tan_ext(alpha)
    else:
        c = cot_ext(alpha)
        mu = INF if is_inf(c) else -c
    return LSystemParams(p, mu, 1j)
