"""Linear-fractional helpers, angle canonicalization and the extended real line.

Extended reals are plain floats: ``math.inf`` is the single point at infinity
(``-inf`` is normalized to ``+inf``), everything else is a finite real.
"""
from __future__ import annotations

import math
import re

import numpy as np

from .errors import PoleError

# Mobius denominators below this fraction of the numerator count as poles.
POLE_RTOL = 1e-12

INF = math.inf


def ext(value) -> float:
    """Normalize to an extended real: both infinities become ``inf``."""
    value = float(value)
    if math.isnan(value):
        raise ValueError("NaN is not an extended real")
    return INF if math.isinf(value) else value


def is_inf(value) -> bool:
    return math.isinf(value)


def ext_to_json(value):
    value = ext(value)
    return {"inf": True} if is_inf(value) else {"finite": value}


def ext_from_json(obj) -> float:
    if isinstance(obj, (int, float)):
        return ext(obj)
    if isinstance(obj, str):
        return INF if obj.strip().lower() in ("inf", "+inf", "-inf", "infinity") else ext(obj)
    if isinstance(obj, dict):
        if obj.get("inf"):
            return INF
        if "finite" in obj:
            return ext(obj["finite"])
    raise ValueError(f"not an extended real: {obj!r}")


def chordal_distance(a, b) -> float:
    """Distance on the projective real line, where inf is an ordinary point."""
    a, b = ext(a), ext(b)
    if is_inf(a) and is_inf(b):
        return 0.0
    if is_inf(a):
        return 1.0 / math.hypot(1.0, b)
    if is_inf(b):
        return 1.0 / math.hypot(1.0, a)
    return abs(a - b) / (math.hypot(1.0, a) * math.hypot(1.0, b))


def canonical_alpha(alpha: float) -> float:
    """Reduce an angle modulo pi into (0, pi]; multiples of pi map to pi."""
    a = math.fmod(float(alpha), math.pi)
    if a <= 0.0:
        a += math.pi
    if a <= 1e-15 or math.pi - a <= 1e-15:
        return math.pi
    return a


def angle_distance(a: float, b: float) -> float:
    """Circular distance between two angles defined modulo pi (measured on 2*alpha)."""
    d = math.remainder(2.0 * (a - b), 2.0 * math.pi)
    return abs(d)


def tan_ext(alpha: float) -> float:
    """tan(alpha) on (0, pi], with alpha = pi/2 mapped to inf."""
    alpha = canonical_alpha(alpha)
    s, c = math.sin(alpha), math.cos(alpha)
    if abs(c) < 1e-15:
        return INF
    if abs(s) < 1e-15:
        return 0.0
    return s / c


def cot_ext(alpha: float) -> float:
    """cot(alpha) on (0, pi], with alpha = pi mapped to inf."""
    alpha = canonical_alpha(alpha)
    s, c = math.sin(alpha), math.cos(alpha)
    if abs(s) < 1e-15:
        return INF
    if abs(c) < 1e-15:
        return 0.0
    return c / s


def check_pole(num, den, what="linear-fractional map"):
    """Raise PoleError where |den| is negligible relative to |num|."""
    num = np.asarray(num)
    den = np.asarray(den)
    bad = np.abs(den) <= POLE_RTOL * np.maximum(np.abs(num), 1e-300)
    if np.any(bad):
        raise PoleError(f"{what}: denominator vanishes", where=np.flatnonzero(bad))


def lft(a, b, c, d, w, what="linear-fractional map"):
    """(a*w + b) / (c*w + d), elementwise, with pole detection."""
    w = np.asarray(w, dtype=complex)
    num = a * w + b
    den = c * w + d
    check_pole(num, den, what)
    out = num / den
    return out if out.ndim else complex(out)


_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(rf"\s*([+-]?{_NUM})\s*([+-])\s*({_NUM})\s*i\s*")


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` / ``a-bi``; both parts are mandatory."""
    m = _COMPLEX.fullmatch(text)
    if not m:
        raise ValueError(f"not a complex literal of the form a+bi: {text!r}")
    im = float(m.group(3))
    return complex(float(m.group(1)), -im if m.group(2) == "-" else im)
