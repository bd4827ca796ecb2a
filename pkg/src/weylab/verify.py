"""Self-contained verification suites run by ``weylab verify``.

Each check returns a :class:`CheckResult`; suites are plain lists of checks.
Nothing here reads external data.
"""
from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from .classify import (STANDARD_GRID, check_stieltjes, classify_lsystem,
                       classify_main_operator, form_values)
from .lsystem import (LSystemParams, Target, donoghue_transform, impedance_from_m,
                      impedance_values, m_values, mu_alpha, realize, transfer_from_impedance,
                      transfer_values, xi_parameter)
from .mobius import angle_distance
from .potential import Potential, oracle_m_inf
from .uniqueness import DISTINCT, SAME_MAIN_OPERATOR, shares_main_operator
from .weyl import DEFAULT_CONFIG, m_alpha_from_m, m_inf_at_minus_zero, m_inf_many

NU_HALF = Potential.bessel(0.5)
NU_THREE_HALVES = Potential.bessel(1.5)
ORACLES = (NU_HALF, NU_THREE_HALVES)
ALPHAS = (math.pi / 6, math.pi / 4, math.pi / 3, 2 * math.pi / 3)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _oracle_agreement(p):
    t0 = time.perf_counter()
    evs = m_inf_many(p, STANDARD_GRID, DEFAULT_CONFIG)
    elapsed = time.perf_counter() - t0
    exact = np.array([oracle_m_inf(p, z) for z in STANDARD_GRID])
    got = np.array([e.m for e in evs])
    rel = float(np.max(np.abs(got - exact) / np.abs(exact)))
    return rel, elapsed


def check_oracle_nu_half():
    rel, elapsed = _oracle_agreement(NU_HALF)
    ok = rel < 1e-6 and elapsed < 5.0
    return CheckResult("C1 oracle agreement, Bessel nu=1/2", ok,
                       f"max rel err {rel:.2e} (<1e-6), {elapsed:.2f}s (<5s)")


def check_oracle_nu_three_halves():
    rel, elapsed = _oracle_agreement(NU_THREE_HALVES)
    m0 = m_inf_at_minus_zero(NU_THREE_HALVES)
    ok = rel < 1e-6 and abs(m0 - 1.0) < 1e-4
    return CheckResult("C2 oracle agreement + m(-0), Bessel nu=3/2", ok,
                       f"max rel err {rel:.2e} (<1e-6), m(-0)={m0:.10f} (1 +- 1e-4)")


def _realization_residual(p, oracle):
    m_num = m_values(p, STANDARD_GRID, oracle=oracle)
    m_ref = m_values(p, STANDARD_GRID, oracle=True)
    res = []
    v = impedance_from_m(m_num, 0.0, 1j)
    res.append(np.abs(v + m_ref) / np.abs(m_ref))
    v = impedance_from_m(m_num, math.inf, 1j)
    res.append(np.abs(v * m_ref - 1.0))
    for a in ALPHAS:
        ma = m_alpha_from_m(m_ref, a)
        v = impedance_from_m(m_num, realize(p, Target.NEG_M_ALPHA, a).mu, 1j)
        res.append(np.abs(v + ma) / np.abs(ma))
        v = impedance_from_m(m_num, realize(p, Target.INV_M_ALPHA, a).mu, 1j)
        res.append(np.abs(v * ma - 1.0))
    return float(max(r.max() for r in res))


def check_realizations():
    worst_oracle = max(_realization_residual(p, True) for p in ORACLES)
    worst_num = max(_realization_residual(p, False) for p in ORACLES)
    ok = worst_oracle < 1e-8 and worst_num < 1e-5
    return CheckResult("C3 realization identities", ok,
                       f"closed-form {worst_oracle:.2e} (<1e-8), numerical {worst_num:.2e} (<1e-5)")


def check_vw_duality():
    rng = np.random.default_rng(4)
    w_res = dual_res = 0.0
    for p in ORACLES:
        for mu in [0.0, math.inf, *rng.normal(0.0, 3.0, 6)]:
            for h in (1j, complex(rng.normal(), rng.uniform(0.2, 2.0))):
                sys = LSystemParams(p, mu, h)
                v = impedance_values(sys, STANDARD_GRID)
                w = transfer_values(sys, STANDARD_GRID)
                w_res = max(w_res, float(np.max(np.abs(w - transfer_from_impedance(v)))))
                dual = LSystemParams(p, xi_parameter(mu, h), h)
                vd = impedance_values(dual, STANDARD_GRID)
                dual_res = max(dual_res, float(np.max(np.abs(v * vd + 1.0))))
    ok = w_res < 1e-10 and dual_res < 1e-8
    return CheckResult("C4 V<->W and mu<->xi duality", ok,
                       f"|W-(1-iV)/(1+iV)| {w_res:.2e} (<1e-10), |V_mu V_xi+1| {dual_res:.2e} (<1e-8)")


def check_donoghue_consistency():
    rng = np.random.default_rng(5)
    p = NU_THREE_HALVES
    v_res = w_res = 0.0
    for _ in range(100):
        mu = float(rng.normal(0.0, 3.0))
        alpha = float(rng.uniform(0.0, math.pi))
        mua = mu_alpha(mu, 1j, alpha)
        base = LSystemParams(p, mu, 1j)
        moved = LSystemParams(p, mua, 1j)
        v_res = max(v_res, float(np.max(np.abs(
            impedance_values(moved, STANDARD_GRID)
            - donoghue_transform(impedance_values(base, STANDARD_GRID), alpha)))))
        w_res = max(w_res, float(np.max(np.abs(
            transfer_values(moved, STANDARD_GRID)
            + cmath.exp(2j * alpha) * transfer_values(base, STANDARD_GRID)))))
    ok = v_res < 1e-8 and w_res < 1e-8
    return CheckResult("C5 Donoghue / mu(alpha) consistency", ok,
                       f"impedance {v_res:.2e} (<1e-8), transfer rotation {w_res:.2e} (<1e-8)")


def check_nu_three_halves_classification():
    p = NU_THREE_HALVES
    op = classify_main_operator(p, 1j)
    tan_beta = math.tan(op.exact_angle_beta) if op.exact_angle_beta else float("nan")
    cls = {name: classify_lsystem(LSystemParams(p, mu, 1j)).extension_class
           for name, mu in [("1", 1.0), ("tan(pi/3)", math.tan(math.pi / 3)),
                            ("inf", math.inf), ("tan(pi/6)", math.tan(math.pi / 6))]}
    ok = (abs(tan_beta - 1.0) < 1e-4
          and cls["1"].kind == "Extremal"
          and cls["tan(pi/3)"].kind == "Sectorial" and cls["tan(pi/3)"].beta_bracket is not None
          and abs(cls["tan(pi/3)"].beta_bracket[0] - math.pi / 4) < 1e-4
          and cls["inf"].kind == "Sectorial" and abs(cls["inf"].beta - math.pi / 4) < 1e-4
          and cls["tan(pi/6)"].kind == "NotAccretive")
    detail = f"tan(beta)={tan_beta:.8f}; " + ", ".join(f"mu={k}: {v}" for k, v in cls.items())
    return CheckResult("C6 classification of the nu=3/2 family", ok, detail)


def check_nu_half_classification():
    p = NU_HALF
    op = classify_main_operator(p, 1j)
    c0 = classify_lsystem(realize(p, Target.NEG_M_INF)).extension_class
    ci = classify_lsystem(realize(p, Target.INV_M_INF)).extension_class
    ok = op.operator_extremal and c0.kind == "NotAccretive" and ci.kind == "Extremal"
    return CheckResult("classification of the nu=1/2 family (h=i)", ok,
                       f"operator extremal={op.operator_extremal}, mu=0: {c0}, mu=inf: {ci}")


def check_sharp_form():
    re_form, im_form = form_values(NU_THREE_HALVES, 1j, lambda x: 1.0 / x,
                                   lambda x: -1.0 / x ** 2, upper=math.inf)
    ok = abs(re_form - 1.0) <= 1e-6 and im_form == 1.0
    return CheckResult("C7 sharp form equality on y=1/x", ok,
                       f"re_form={re_form:.12f}, im_form={im_form!r}")


def check_stieltjes_predicate():
    p = NU_THREE_HALVES
    m0 = 1.0
    cases = {"1/m_inf": (realize(p, Target.INV_M_INF), True),
             "-m_inf": (realize(p, Target.NEG_M_INF), False)}
    for a in (math.pi / 4, math.pi / 3, math.pi / 6):
        # the boundary tan(alpha) = 1/m(-0) is inclusive; tan(pi/4) rounds below 1
        expected = math.tan(a) >= 1 / m0 - 1e-12
        cases[f"-m_alpha({a:.4f})"] = (realize(p, Target.NEG_M_ALPHA, a), expected)
    bad = []
    for name, (sys, expected) in cases.items():
        got = check_stieltjes(lambda zs, s=sys: impedance_values(s, zs)).holds
        if got != expected:
            bad.append(name)
    return CheckResult("C8 Stieltjes verdicts vs tan(alpha) >= 1/m(-0)", not bad,
                       "all agree" if not bad else "disagree: " + ", ".join(bad))


def check_uniqueness_round_trip():
    rng = np.random.default_rng(9)
    p = NU_THREE_HALVES
    worst, fails = 0.0, 0
    for _ in range(50):
        alpha = math.pi - float(rng.uniform(0.0, math.pi))  # in (0, pi]
        mu = float(rng.normal(0.0, 3.0))
        rep = shares_main_operator(LSystemParams(p, mu, 1j),
                                   LSystemParams(p, mu_alpha(mu, 1j, alpha), 1j))
        if rep.verdict != SAME_MAIN_OPERATOR or not rep.mu_check:
            fails += 1
            continue
        worst = max(worst, angle_distance(rep.alpha, alpha))
    cross = [shares_main_operator(LSystemParams(NU_HALF, mu, 1j),
                                  LSystemParams(NU_THREE_HALVES, mu, 1j)).verdict
             for mu in (0.0, 1.0, math.inf)]
    ok = fails == 0 and worst < 1e-8 and all(v == DISTINCT for v in cross)
    return CheckResult("C9 uniqueness round trip", ok,
                       f"{50 - fails}/50 recovered, worst angle err {worst:.2e} (<1e-8), "
                       f"cross-potential: {cross}")


PROPERTY_SYSTEMS = [(NU_THREE_HALVES, mu) for mu in (0.0, 1.0, math.tan(math.pi / 3), 2.5,
                                                      math.inf, -1.0)] + \
                   [(NU_HALF, mu) for mu in (0.0, math.inf, 1.0)]


def check_properties():
    sym_ok, stieltjes_ok, n_accretive = True, True, 0
    for p, mu in PROPERTY_SYSTEMS:
        sys = LSystemParams(p, mu, 1j)
        evs = m_inf_many(p, STANDARD_GRID)
        est = max(e.est_error for e in evs)
        v = impedance_values(sys, STANDARD_GRID)
        vc = impedance_values(sys, STANDARD_GRID.conjugate())
        # dV/dm bounded by the magnitude of V and 1/m on this grid
        m = np.array([e.m for e in evs])
        gain = np.abs(v) * (1 + np.abs(v)) / np.maximum(np.abs(m), 1e-12) + 1
        if np.any(np.abs(vc - v.conjugate()) > 2 * est * gain + 1e-15):
            sym_ok = False
        if classify_lsystem(sys).extension_accretive:
            n_accretive += 1
            if not check_stieltjes(lambda zs, s=sys: impedance_values(s, zs)).holds:
                stieltjes_ok = False
    return CheckResult("C10 Herglotz symmetry, accretive => Stieltjes", sym_ok and stieltjes_ok,
                       f"symmetry={'ok' if sym_ok else 'FAIL'}, {n_accretive} accretive systems "
                       f"Stieltjes={'ok' if stieltjes_ok else 'FAIL'}")


def check_sector_membership():
    rng = np.random.default_rng(11)
    worst = math.inf
    for _ in range(50):
        c = rng.normal(size=3) + 1j * rng.normal(size=3)
        pw = rng.uniform(1.0, 4.0, size=3)
        rate = rng.uniform(0.0, 2.0, size=3)
        y = lambda x, c=c, pw=pw, rate=rate: complex(np.sum(c * x ** -pw * np.exp(-rate * (x - 1))))
        dy = lambda x, c=c, pw=pw, rate=rate: complex(np.sum(
            c * x ** -pw * np.exp(-rate * (x - 1)) * (-pw / x - rate)))
        re_f, im_f = form_values(NU_THREE_HALVES, 1j, y, dy, upper=math.inf)
        worst = min(worst, re_f - abs(im_f))
    return CheckResult("sector membership (beta=pi/4) on 50 test functions", worst >= -1e-9,
                       f"min(re - |im|) = {worst:.3e}")


SUITES: Dict[str, List[Callable[[], CheckResult]]] = {
    "examples": [check_oracle_nu_half, check_oracle_nu_three_halves, check_nu_half_classification,
                 check_nu_three_halves_classification, check_sharp_form],
    "identities": [check_realizations, check_vw_duality, check_donoghue_consistency,
                   check_uniqueness_round_trip],
    "classification": [check_nu_three_halves_classification, check_stieltjes_predicate,
                       check_properties, check_sector_membership],
}


def run_suite(name: str) -> List[CheckResult]:
    if name == "all":
        checks = list(dict.fromkeys(c for suite in SUITES.values() for c in suite))
    else:
        checks = SUITES[name]
    results = []
    for check in checks:
        try:
            results.append(check())
        except Exception as exc:  # a crash is a failed check, not an aborted run
            results.append(CheckResult(check.__name__, False, f"{type(exc).__name__}: {exc}"))
    return results
