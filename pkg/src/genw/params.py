"""Parameter container for the forward map z * prod (z - t_i)^p_i * exp(z)."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .errors import ParameterError


def _as_complex_tuple(values, name):
    out = []
    for j, v in enumerate(values):
        if isinstance(v, (list, tuple)):
            if len(v) != 2:
                raise ParameterError(f"{name}[{j}]: expected [re, im], got {v!r}")
            v = complex(float(v[0]), float(v[1]))
        try:
            out.append(complex(v))
        except (TypeError, ValueError):
            raise ParameterError(f"{name}[{j}]: not a number: {v!r}") from None
    return tuple(out)


@dataclass(frozen=True)
class ParamSet:
    """Roots ``t`` and exponents ``p`` of the forward map.

    Both are tuples of complex numbers of the same length ``m`` (possibly 0).
    Every root and exponent must be nonzero.
    """

    t: tuple[complex, ...] = ()
    p: tuple[complex, ...] = ()

    def __post_init__(self):
        t = _as_complex_tuple(self.t, "t")
        p = _as_complex_tuple(self.p, "p")
        if len(t) != len(p):
            raise ParameterError(f"t and p differ in length ({len(t)} != {len(p)})")
        for j, tj in enumerate(t):
            if tj == 0:
                raise ParameterError(f"t[{j}] is zero")
        for j, pj in enumerate(p):
            if pj == 0:
                raise ParameterError(f"p[{j}] is zero")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "p", p)

    @property
    def m(self) -> int:
        return len(self.t)

    @classmethod
    def of(cls, t: Sequence[complex] = (), p: Sequence[complex] = ()) -> "ParamSet":
        return cls(tuple(t), tuple(p))

    def to_dict(self) -> dict:
        return {
            "t": [[z.real, z.imag] for z in self.t],
            "p": [[z.real, z.imag] for z in self.p],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data) -> "ParamSet":
        if not isinstance(data, dict):
            raise ParameterError("params: expected a JSON object with keys 't' and 'p'")
        for key in ("t", "p"):
            if key not in data:
                raise ParameterError(f"params: missing field '{key}'")
            if not isinstance(data[key], list):
                raise ParameterError(f"params: field '{key}' must be a list of [re, im] pairs")
            for j, v in enumerate(data[key]):
                if not (isinstance(v, list) and len(v) == 2):
                    raise ParameterError(f"params: field '{key}[{j}]' must be a [re, im] pair")
        return cls(tuple(data["t"]), tuple(data["p"]))

    @classmethod
    def from_json(cls, text: str) -> "ParamSet":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"params: invalid JSON ({exc.msg})") from None
        return cls.from_dict(data)
