"""Loading manifold input documents (JSON, ``"schema": 1``) and the bundled examples."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .fpgroup import Presentation
from .linalg import Matrix
from .numfield import QQ, NumberField
from .pairing import SymmetryData
from .rep import ComplexPair, Representation, SL2CRep, lift_representation, validate

BUNDLED = ("figure8", "5_2", "6_3")
ALIASES = {"figure-eight": "figure8", "fig8": "figure8", "4_1": "figure8", "52": "5_2", "63": "6_3"}


class InputError(ValueError):
    """Malformed input document (a usage error)."""


@dataclass
class ManifoldInput:
    name: str
    field: NumberField
    presentation: Presentation
    rep: Representation
    sl2c: SL2CRep | None
    symmetry: SymmetryData | None
    provenance: str
    raw: dict


def bundled_path(name: str) -> Path:
    name = ALIASES.get(name, name)
    return Path(str(resources.files("cuspforge") / "data" / f"{name}.json"))


def resolve(path_or_name: str) -> Path:
    """An existing file path, or the name of a bundled example."""
    p = Path(path_or_name)
    if p.exists():
        return p
    b = bundled_path(p.stem if p.suffix == ".json" else path_or_name)
    if b.exists():
        return b
    raise InputError(f"no such input file or bundled example: {path_or_name}")


def load_input(path_or_name, validate_rep: bool = True) -> ManifoldInput:
    if isinstance(path_or_name, dict):
        data = path_or_name
    else:
        try:
            data = json.loads(resolve(str(path_or_name)).read_text())
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from None
    return parse_input(data, validate_rep)


def parse_input(data: dict, validate_rep: bool = True) -> ManifoldInput:
    if data.get("schema") != 1:
        raise InputError("unsupported or missing schema version (expected 1)")
    try:
        field = NumberField.from_json(data["field"]) if "field" in data else QQ
        p = data["presentation"]
        pres = Presentation.from_strings(p["generators"], p["relators"], p.get("peripherals", []))
        hol = data["holonomy"]
        form = hol.get("form", "SO31")
        mats = hol["matrices"]
        missing = [g for g in pres.generators if g not in mats]
        if missing:
            raise InputError(f"holonomy is missing generators {missing}")
        sl2 = None
        if form == "SL2C":
            images = [
                [[ComplexPair(field(e[0]), field(e[1])) for e in row] for row in mats[g]] for g in pres.generators
            ]
            sl2 = SL2CRep(pres, images, field)
            if validate_rep:
                validate(sl2)
            rep = lift_representation(sl2)
        elif form in ("SO31", "SL4"):
            rep = Representation(
                pres, [Matrix.from_rows([[field(e) for e in row] for row in mats[g]]) for g in pres.generators], form, field
            )
        else:
            raise InputError(f"unknown holonomy form {form!r}")
        sym = SymmetryData.from_json(data["symmetry"]) if "symmetry" in data else None
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed input document: {exc!r}") from None
    if validate_rep:
        validate(rep)
    return ManifoldInput(data.get("name", "unnamed"), field, pres, rep, sl2, sym, data.get("provenance", ""), data)
