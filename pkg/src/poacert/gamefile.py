"""JSON game and configuration files.

Numbers may be plain JSON numbers or strings: "3/4" is parsed as a
rational, and so is "0.25".  In exact mode every number becomes a Fraction
(floats via their shortest decimal representation), otherwise everything
becomes int/float.  Emission mirrors this: rationals are written as "p/q"
strings so a file round-trips losslessly through exact mode.

Game schema: weights, resources, strategies (per player: list of lists of
resource ids), basis (list of {kind, degree?, table?}), coefficients
(resource id -> list, one entry per basis function), alpha (n x n), and
optional beta / epsilon.  A configuration file is the same minus the
model-specific parts: weights, alpha, basis, optional beta / epsilon / sf.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .games import (
    INDICATOR,
    MAX,
    MONOMIAL,
    SUM,
    TABLE,
    BasisFunction,
    CongestionModel,
    GameError,
    GeneralizedGame,
    SocialSpec,
    identity_matrix,
)
from .formulations import WorstCaseConfig


class GameFileError(GameError):
    """Malformed input file; maps to the validation exit code."""


def parse_number(x, exact: bool):
    try:
        if isinstance(x, bool):
            raise GameFileError(f"booleans are not numbers: {x!r}")
        if isinstance(x, int):
            return Fraction(x) if exact else x
        if isinstance(x, float):
            return Fraction(str(x)) if exact else x
        if isinstance(x, str):
            f = Fraction(x)
            return f if exact else (int(f) if f.denominator == 1 else float(f))
    except (ValueError, ZeroDivisionError) as err:
        raise GameFileError(f"bad number {x!r}: {err}") from None
    raise GameFileError(f"bad number {x!r}")


def emit_number(x):
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return x


def _matrix(raw, n: int, what: str, exact: bool):
    if not isinstance(raw, list) or len(raw) != n or any(
        not isinstance(row, list) or len(row) != n for row in raw
    ):
        raise GameFileError(f"{what} must be an {n}x{n} array")
    return tuple(tuple(parse_number(x, exact) for x in row) for row in raw)


def _require(doc: dict, key: str):
    if key not in doc:
        raise GameFileError(f"missing field {key!r}")
    return doc[key]


def parse_basis(raw, exact: bool) -> tuple:
    if not isinstance(raw, list) or not raw:
        raise GameFileError("basis must be a non-empty array")
    out = []
    for item in raw:
        if not isinstance(item, dict) or "kind" not in item:
            raise GameFileError(f"bad basis entry {item!r}")
        kind = item["kind"]
        if kind == MONOMIAL:
            out.append(BasisFunction.monomial(int(item.get("degree", 1))))
        elif kind == INDICATOR:
            out.append(BasisFunction.indicator())
        elif kind == TABLE:
            table = item.get("table")
            if not isinstance(table, dict) or not table:
                raise GameFileError("table basis entry needs a non-empty table object")
            mapping = {
                parse_number(k, exact): parse_number(v, exact) for k, v in table.items()
            }
            out.append(BasisFunction.lookup(mapping))
        else:
            raise GameFileError(f"unknown basis kind {kind!r}")
    return tuple(out)


def emit_basis(basis) -> list:
    out = []
    for f in basis:
        if f.kind == MONOMIAL:
            out.append({"kind": MONOMIAL, "degree": f.degree})
        elif f.kind == INDICATOR:
            out.append({"kind": INDICATOR})
        else:
            out.append(
                {"kind": TABLE, "table": {str(emit_number(k)): emit_number(v) for k, v in f.table}}
            )
    return out


@dataclass
class GameDocument:
    game: GeneralizedGame
    beta: Optional[tuple]  # None means "not stated"; callers default to identity
    epsilon: object

    def spec(self, kind: str) -> SocialSpec:
        beta = self.beta
        if beta is None:
            exact = isinstance(self.game.model.weights[0], Fraction)
            beta = identity_matrix(self.game.model.n, exact=exact)
        return SocialSpec(kind, beta)


def _load(path: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as err:
        raise GameFileError(f"cannot read {path}: {err}") from None
    except json.JSONDecodeError as err:
        raise GameFileError(f"{path} is not valid JSON: {err}") from None
    if not isinstance(doc, dict):
        raise GameFileError(f"{path}: top level must be an object")
    return doc


def load_game(path: str, exact: bool = False) -> GameDocument:
    doc = _load(path)
    try:
        weights = tuple(parse_number(x, exact) for x in _require(doc, "weights"))
        n = len(weights)
        resources = tuple(str(e) for e in _require(doc, "resources"))
        raw_strats = _require(doc, "strategies")
        if not isinstance(raw_strats, list) or len(raw_strats) != n:
            raise GameFileError("strategies must list one entry per player")
        strategies = tuple(
            tuple(frozenset(str(e) for e in strat) for strat in per)
            for per in raw_strats
        )
        model = CongestionModel(weights, resources, strategies)
        basis = parse_basis(_require(doc, "basis"), exact)
        raw_coeffs = _require(doc, "coefficients")
        if not isinstance(raw_coeffs, dict):
            raise GameFileError("coefficients must map resource id to an array")
        coeffs = {}
        for e in resources:
            if e not in raw_coeffs:
                raise GameFileError(f"coefficients missing resource {e!r}")
            vec = raw_coeffs[e]
            if not isinstance(vec, list) or len(vec) != len(basis):
                raise GameFileError(
                    f"coefficients[{e!r}] must have {len(basis)} entries"
                )
            coeffs[e] = tuple(parse_number(x, exact) for x in vec)
        alpha = _matrix(_require(doc, "alpha"), n, "alpha", exact)
        game = GeneralizedGame(model, basis, coeffs, alpha)
        beta = _matrix(doc["beta"], n, "beta", exact) if "beta" in doc else None
        epsilon = parse_number(doc.get("epsilon", 0), exact)
    except GameError as err:
        raise GameFileError(f"{path}: {err}") from None
    return GameDocument(game, beta, epsilon)


def emit_game(game: GeneralizedGame, beta=None, epsilon=None) -> dict:
    doc = {
        "weights": [emit_number(w) for w in game.model.weights],
        "resources": list(game.model.resources),
        "strategies": [
            [sorted(strat) for strat in per] for per in game.model.strategies
        ],
        "basis": emit_basis(game.basis),
        "coefficients": {
            e: [emit_number(c) for c in game.coefficients[e]]
            for e in game.model.resources
        },
        "alpha": [[emit_number(x) for x in row] for row in game.alpha],
    }
    if beta is not None:
        doc["beta"] = [[emit_number(x) for x in row] for row in beta]
    if epsilon is not None:
        doc["epsilon"] = emit_number(epsilon)
    return doc


def load_config(path: str, exact: bool = False, sf=None, epsilon=None) -> WorstCaseConfig:
    """Worst-case configuration; sf/epsilon arguments override the file."""
    doc = _load(path)
    try:
        weights = tuple(parse_number(x, exact) for x in _require(doc, "weights"))
        n = len(weights)
        alpha = _matrix(_require(doc, "alpha"), n, "alpha", exact)
        basis = parse_basis(_require(doc, "basis"), exact)
        if beta_raw := doc.get("beta"):
            beta = _matrix(beta_raw, n, "beta", exact)
        else:
            beta = identity_matrix(n, exact=exact)
        kind = sf if sf is not None else doc.get("sf", SUM)
        if kind not in (SUM, MAX):
            raise GameFileError(f"sf must be {SUM!r} or {MAX!r}, got {kind!r}")
        if epsilon is None:
            epsilon = parse_number(doc.get("epsilon", 0), exact)
        return WorstCaseConfig(weights, alpha, SocialSpec(kind, beta), epsilon, basis)
    except GameError as err:
        raise GameFileError(f"{path}: {err}") from None


def write_json(path: str, doc: dict) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=False)
        fh.write("\n")
