"""Half-line potentials q(x) on [l, inf) and closed-form Weyl-function oracles.

Three kinds are supported:

* ``zero``   -- q = 0,
* ``bessel`` -- q = (nu^2 - 1/4) / x^2,
* ``table``  -- piecewise-linear interpolation of sampled values, continued
  by a constant tail beyond the last sample.

All potentials are immutable and hashable, so they can be used as cache keys
and shared across threads.
"""
from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import BranchDomainError, SpecParseError, Unavailable

ZERO = "zero"
BESSEL = "bessel"
TABLE = "table"


def sqrt_cut(z):
    """Square root with the cut on [0, inf) and Im sqrt(z) > 0 off the cut.

    Negative reals map to ``i*sqrt(|z|)``. On the cut itself the non-negative
    root is returned.
    """
    r = np.sqrt(np.asarray(z, dtype=complex))
    r = np.where(r.imag < 0, -r, r)
    return r if r.ndim else complex(r)


def on_cut(z) -> bool:
    z = complex(z)
    return z.imag == 0.0 and z.real >= 0.0


@dataclass(frozen=True)
class Potential:
    kind: str
    left_endpoint: float
    nu: Optional[float] = None
    xs: tuple = ()
    qs: tuple = ()
    tail: float = 0.0
    source: Optional[str] = field(default=None, compare=False)
    _x: np.ndarray = field(default=None, repr=False, compare=False, hash=False)
    _q: np.ndarray = field(default=None, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.kind not in (ZERO, BESSEL, TABLE):
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if not self.left_endpoint >= 0:
            raise ValueError("left endpoint must be >= 0")
        if self.kind == BESSEL:
            if self.nu is None or not self.nu > 0:
                raise ValueError("Bessel order nu must be > 0")
            if self.left_endpoint == 0:
                raise ValueError("Bessel potential is singular at x=0; use l > 0")
        if self.kind == TABLE:
            x = np.asarray(self.xs, dtype=float)
            q = np.asarray(self.qs, dtype=float)
            if x.ndim != 1 or x.size == 0 or x.shape != q.shape:
                raise ValueError("table needs matching, non-empty x and q columns")
            if np.any(np.diff(x) <= 0):
                raise ValueError("table x values must be strictly increasing")
            if x[0] != self.left_endpoint:
                raise ValueError(
                    f"first table point x={x[0]} must equal the left endpoint {self.left_endpoint}"
                )
            object.__setattr__(self, "_x", x)
            object.__setattr__(self, "_q", q)

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, left_endpoint: float = 0.0) -> "Potential":
        return cls(ZERO, float(left_endpoint))

    @classmethod
    def bessel(cls, nu: float, left_endpoint: float = 1.0) -> "Potential":
        return cls(BESSEL, float(left_endpoint), nu=float(nu))

    @classmethod
    def table(cls, xs: Sequence[float], qs: Sequence[float], tail: Optional[float] = None,
              source: Optional[str] = None) -> "Potential":
        xs = tuple(float(v) for v in xs)
        qs = tuple(float(v) for v in qs)
        if not xs:
            raise ValueError("table needs at least one point")
        if tail is None:
            tail = qs[-1]
        return cls(TABLE, xs[0], xs=xs, qs=qs, tail=float(tail), source=source)

    # -- evaluation -------------------------------------------------------

    def __call__(self, x):
        return self.evaluate(x)

    def evaluate(self, x):
        """q(x); scalar in, float out; array in, array out."""
        if self.kind == ZERO:
            return np.zeros_like(x, dtype=float) if np.ndim(x) else 0.0
        if self.kind == BESSEL:
            return (self.nu * self.nu - 0.25) / (np.asarray(x, dtype=float) ** 2) if np.ndim(x) \
                else (self.nu * self.nu - 0.25) / (x * x)
        # right=tail gives the constant continuation past the last sample
        val = np.interp(x, self._x, self._q, right=self.tail)
        return val if np.ndim(x) else float(val)

    @property
    def has_oracle(self) -> bool:
        return (self.kind == BESSEL and self.left_endpoint == 1.0
                and self.nu in (0.5, 1.5))

    def spec(self) -> str:
        """The command-line spec string that parses back to this potential."""
        if self.kind == ZERO:
            return f"zero:l={self.left_endpoint!r}"
        if self.kind == BESSEL:
            return f"bessel:nu={self.nu!r},l={self.left_endpoint!r}"
        if self.source is None:
            raise ValueError("in-memory table potential has no spec string")
        return f"table:{self.source},l={self.left_endpoint!r},tail={self.tail!r}"

    def describe(self) -> str:
        if self.kind == BESSEL:
            return f"Bessel(nu={self.nu:g}) on [{self.left_endpoint:g}, inf)"
        if self.kind == ZERO:
            return f"Zero on [{self.left_endpoint:g}, inf)"
        return f"SampledTable({len(self.xs)} points, tail={self.tail:g}) on [{self.left_endpoint:g}, inf)"


def oracle_m_inf(p: Potential, z) -> complex:
    """Closed-form Weyl function for the two Bessel examples on [1, inf).

    nu = 1/2:  m(z) = -i sqrt(z)
    nu = 3/2:  m(z) = 1 - i z / (sqrt(z) + i)
    """
    if not p.has_oracle:
        raise Unavailable(f"no closed-form m-function for {p.describe()}")
    z = complex(z)
    if on_cut(z):
        raise BranchDomainError(f"z={z} lies on the cut [0, inf)")
    k = sqrt_cut(z)
    if p.nu == 0.5:
        return -1j * k
    return 1 - 1j * z / (k + 1j)


# -- spec strings and table files ----------------------------------------------

_FLOAT = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"


def _parse_float(text, value, pos, name):
    if not re.fullmatch(_FLOAT, value or ""):
        raise SpecParseError(f"expected a number for {name!r}", text, pos)
    return float(value)


def parse_potential_spec(text: str) -> Potential:
    """Parse ``zero:l=<l>``, ``bessel:nu=<nu>[,l=<l>]`` or ``table:<path>[,l=<l>,tail=<q>]``."""
    kind, sep, rest = text.partition(":")
    kind = kind.strip().lower()
    if kind not in (ZERO, BESSEL, TABLE):
        raise SpecParseError(f"unknown potential kind {kind!r}", text, 0)
    base = len(kind) + len(sep)

    path = None
    params = {}
    positions = {}
    pos = base
    items = rest.split(",") if rest else []
    for n, item in enumerate(items):
        if kind == TABLE and n == 0:
            path = item
            if not path:
                raise SpecParseError("table spec needs a file path", text, pos)
        else:
            key, eq, value = item.partition("=")
            if not eq:
                raise SpecParseError(f"expected key=value, got {item!r}", text, pos)
            key = key.strip()
            allowed = {ZERO: ("l",), BESSEL: ("nu", "l"), TABLE: ("l", "tail")}[kind]
            if key not in allowed:
                raise SpecParseError(f"unknown key {key!r} for {kind}", text, pos)
            if key in params:
                raise SpecParseError(f"duplicate key {key!r}", text, pos)
            vpos = pos + len(item) - len(value)
            params[key] = _parse_float(text, value.strip(), vpos, key)
            positions[key] = vpos
        pos += len(item) + 1

    try:
        if kind == ZERO:
            return Potential.zero(params.get("l", 0.0))
        if kind == BESSEL:
            if "nu" not in params:
                raise SpecParseError("bessel spec needs nu=<value>", text, len(text))
            if params["nu"] <= 0:
                raise SpecParseError("Bessel order nu must be > 0", text, positions["nu"])
            return Potential.bessel(params["nu"], params.get("l", 1.0))
        if path is None:
            raise SpecParseError("table spec needs a file path", text, len(text))
        return read_table_csv(path, params.get("l"), params.get("tail"))
    except (OSError, ValueError) as exc:
        if isinstance(exc, SpecParseError):
            raise
        raise SpecParseError(str(exc), text, base) from exc


def read_table_csv(path, left_endpoint: Optional[float] = None,
                   tail: Optional[float] = None) -> Potential:
    """Read a ``x,q`` CSV table. The first x must equal ``left_endpoint`` when given."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader, [])]
        if header != ["x", "q"]:
            raise ValueError(f"{path}: header must be 'x,q', got {','.join(header)!r}")
        xs, qs = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected two columns")
            try:
                xs.append(float(row[0]))
                qs.append(float(row[1]))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: not a number") from None
    if not xs:
        raise ValueError(f"{path}: no data rows")
    if any(not math.isfinite(v) for v in xs + qs):
        raise ValueError(f"{path}: non-finite value")
    if left_endpoint is not None and xs[0] != left_endpoint:
        raise ValueError(f"{path}: first x={xs[0]} does not equal l={left_endpoint}")
    return Potential.table(xs, qs, tail=tail, source=str(path))


def write_table_csv(path, xs, qs) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "q"])
        for x, q in zip(xs, qs):
            w.writerow([repr(float(x)), repr(float(q))])
