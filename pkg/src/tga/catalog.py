"""Instance descriptors, JSON config parsing and the built-in catalog."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from .algebra import TwistedGroupAlgebra
from .cocycle import make_factor_system, explicit_unchecked
from .exceptions import ConfigError, TGAError
from .field import FieldSpec, GF
from .group import Group, build_group

__all__ = ["InstanceSpec", "load_config", "parse_field", "default_catalog", "CATALOG_SEED"]

CATALOG_SEED = 2718
DEFAULT_FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2), (5, 2)]
DEFAULT_GROUPS = ["C1", "C2", "C3", "C4", "C5", "C6", "C2xC2", "C2xC4", "C3xC3",
                  "S3", "D4", "Q8", "Q8xC3"]


def parse_field(desc) -> FieldSpec:
    """``{"p": 5, "k": 1, "modulus": [...]}``, ``"GF(25)"``, ``"GF(5^2)"`` or an int q."""
    if isinstance(desc, FieldSpec):
        return desc
    if isinstance(desc, int):
        return _field_of_size(desc)
    if isinstance(desc, str):
        text = desc.strip().upper().replace(" ", "")
        if text.startswith("GF(") and text.endswith(")"):
            inner = text[3:-1]
            if "^" in inner:
                p, k = inner.split("^")
                return GF(int(p), int(k))
            return _field_of_size(int(inner))
        raise ConfigError(f"cannot parse field {desc!r}")
    if isinstance(desc, dict):
        return FieldSpec.from_json(desc)
    raise ConfigError(f"cannot parse field {desc!r}")


def _field_of_size(q: int) -> FieldSpec:
    for p in range(2, q + 1):
        if q % p == 0:
            k = round(math.log(q, p))
            if p**k != q:
                raise ConfigError(f"{q} is not a prime power")
            return GF(p, k)
    raise ConfigError(f"{q} is not a prime power")


@dataclass
class InstanceSpec:
    field: Any
    group: Any
    cocycle: Any = field(default_factory=lambda: {"kind": "trivial"})
    seed: Optional[int] = None
    budget: Optional[int] = None
    id: str = ""

    @classmethod
    def from_json(cls, obj: dict) -> "InstanceSpec":
        if not isinstance(obj, dict) or "field" not in obj or "group" not in obj:
            raise ConfigError("an instance needs 'field' and 'group'")
        return cls(obj["field"], obj["group"], obj.get("cocycle", {"kind": "trivial"}),
                   obj.get("seed"), obj.get("budget"), obj.get("id", ""))

    def resolve_parts(self) -> tuple[FieldSpec, Group]:
        return parse_field(self.field), build_group(self.group)

    def resolve(self, validate: bool = True) -> TwistedGroupAlgebra:
        K, G = self.resolve_parts()
        coc = self.cocycle
        if isinstance(coc, str):
            coc = {"kind": coc}
        if coc.get("kind") == "explicit" and not validate:
            rho = explicit_unchecked(G, K, coc["table"])
        else:
            rho = make_factor_system(coc, G, K)
        return TwistedGroupAlgebra(K, G, rho)

    def to_json(self):
        K, G = self.resolve_parts()
        out = {"id": self.label(), "field": K.to_json(), "group": G.to_json(), "cocycle": self.cocycle}
        if self.seed is not None:
            out["seed"] = self.seed
        if self.budget is not None:
            out["budget"] = self.budget
        return out

    def label(self) -> str:
        if self.id:
            return self.id
        K, G = self.resolve_parts()
        coc = self.cocycle if isinstance(self.cocycle, dict) else {"kind": self.cocycle}
        return f"{K!r}[{G.label or G.kind}]/{coc.get('kind')}"


def load_config(path: Union[str, Path]) -> list[InstanceSpec]:
    """Read one instance object, a list of them, or ``{"instances": [...]}``."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if isinstance(data, dict) and "instances" in data:
        data = data["instances"]
    items = data if isinstance(data, list) else [data]
    return [InstanceSpec.from_json(item) for item in items]


def _lambdas(K: FieldSpec, d: int) -> list:
    """Nontrivial lambda in K with lambda^d = 1."""
    return [e for e in K.elements() if not e.is_zero() and e != 1 and e**d == 1]


def default_catalog(seed: int = CATALOG_SEED, coboundaries: int = 3) -> list[InstanceSpec]:
    """Every (field, group) pair with trivial, seeded coboundary and lambda-pairing cocycles."""
    out = []
    for (p, k), gname in itertools.product(DEFAULT_FIELDS, DEFAULT_GROUPS):
        K = GF(p, k)
        G = build_group(gname)
        fdesc = K.to_json()
        base = f"{K!r}[{gname}]"
        out.append(InstanceSpec(fdesc, gname, {"kind": "trivial"}, id=f"{base}/trivial"))
        rng = np.random.default_rng([seed, p, k, G.order, DEFAULT_GROUPS.index(gname)])
        for i in range(coboundaries):
            codes = rng.integers(1, K.q, size=G.order)
            codes[0] = 1
            mu = [K.from_int(int(c)).to_json() for c in codes]
            out.append(InstanceSpec(fdesc, gname, {"kind": "coboundary", "mu": mu},
                                    id=f"{base}/coboundary{i}"))
        if G.kind == "direct_product" and all(f.kind == "cyclic" for f in G.params):
            d = math.gcd(G.params[0].order, G.params[1].order)
            for lam in _lambdas(K, d):
                out.append(InstanceSpec(fdesc, gname, {"kind": "lambda_pairing", "lambda": lam.to_json()},
                                        id=f"{base}/lambda={lam!r}"))
    return out
