"""Experiment configs: validation, canonical hashing, and builders.

One JSON format serves every command; each command reads the sections
it needs.  Validation is strict (unknown keys are errors) and every
complaint names the exact config path.  The canonical hash covers the
normalized config, so two spellings of the same experiment ("C": 6 vs
"C": "6") hash identically and byte-identical outputs embed it.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any, Optional

from .core import GraphProvider, VertexId, ball
from .engine import BudgetSchedule
from .errors import ConfigError
from .groups import cayley_provider, family_provider, group_by_name
from .strategies import STRATEGY_NAMES, make_strategy

GROUP_KINDS = ("free-abelian", "free", "heisenberg", "lamplighter", "bs12", "grigorchuk")
FAMILY_KINDS = ("regular-tree", "grid", "bead-chain", "path", "star")

_TOP_KEYS = {
    "label",
    "graph",
    "fire",
    "schedule",
    "strategy",
    "horizon",
    "escape_radius",
    "caps",
    "growth",
    "folner",
    "certify",
    "semigroup",
    "seed",
    "out",
}


def _expect(cond: bool, where: str, detail: str) -> None:
    if not cond:
        raise ConfigError(where, detail)


def _expect_keys(obj: dict, allowed: set, where: str) -> None:
    unknown = sorted(set(obj) - allowed)
    _expect(not unknown, where, f"unknown keys {unknown}; allowed: {sorted(allowed)}")


def _expect_int(value: Any, where: str, minimum: Optional[int] = None) -> int:
    _expect(isinstance(value, int) and not isinstance(value, bool), where, f"expected an integer, got {value!r}")
    if minimum is not None:
        _expect(value >= minimum, where, f"must be >= {minimum}, got {value}")
    return value


def _expect_str(value: Any, where: str) -> str:
    _expect(isinstance(value, str), where, f"expected a string, got {value!r}")
    return value


def _parse_fraction(value: Any, where: str) -> Fraction:
    if isinstance(value, bool):
        raise ConfigError(where, f"expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise ConfigError(where, f"not a rational: {value!r}") from None
    raise ConfigError(where, f"expected an integer or 'p/q' string, got {value!r}")


def normalize_graph(spec: Any, where: str = "graph") -> dict:
    _expect(isinstance(spec, dict), where, f"expected an object, got {spec!r}")
    kind = spec.get("kind")
    _expect(kind in ("group", "family"), f"{where}.kind", f"must be 'group' or 'family', got {kind!r}")
    out: dict = {"kind": kind}
    if kind == "group":
        _expect_keys(spec, {"kind", "group", "params", "generators"}, where)
        group = _expect_str(spec.get("group"), f"{where}.group")
        _expect(group in GROUP_KINDS, f"{where}.group", f"unknown group {group!r}; known: {list(GROUP_KINDS)}")
        out["group"] = group
        params = spec.get("params", {})
        _expect(isinstance(params, dict), f"{where}.params", "expected an object")
        out["params"] = _normalize_group_params(group, params, f"{where}.params")
        gens = spec.get("generators")
        if gens is not None:
            _expect(
                isinstance(gens, list) and gens and all(isinstance(s, str) for s in gens),
                f"{where}.generators",
                "expected a non-empty list of element ids",
            )
            out["generators"] = list(gens)
    else:
        _expect_keys(spec, {"kind", "family", "params"}, where)
        family = _expect_str(spec.get("family"), f"{where}.family")
        _expect(family in FAMILY_KINDS, f"{where}.family", f"unknown family {family!r}; known: {list(FAMILY_KINDS)}")
        out["family"] = family
        params = spec.get("params", {})
        _expect(isinstance(params, dict), f"{where}.params", "expected an object")
        out["params"] = _normalize_family_params(family, params, f"{where}.params")
    return out


def _normalize_group_params(group: str, params: dict, where: str) -> dict:
    if group in ("free-abelian", "free"):
        _expect_keys(params, {"rank"}, where)
        rank = _expect_int(params.get("rank", 2), f"{where}.rank", minimum=1)
        return {"rank": rank}
    if group == "grigorchuk":
        _expect_keys(params, {"max_radius"}, where)
        out = {}
        if "max_radius" in params:
            out["max_radius"] = _expect_int(params["max_radius"], f"{where}.max_radius", minimum=1)
        return out
    _expect_keys(params, set(), where)
    return {}


def _normalize_family_params(family: str, params: dict, where: str) -> dict:
    if family == "regular-tree":
        _expect_keys(params, {"degree"}, where)
        return {"degree": _expect_int(params.get("degree", 3), f"{where}.degree", minimum=3)}
    if family == "grid":
        _expect_keys(params, {"dim"}, where)
        return {"dim": _expect_int(params.get("dim", 2), f"{where}.dim", minimum=1)}
    if family == "bead-chain":
        _expect_keys(params, {"profile", "sizes"}, where)
        out: dict = {}
        if "sizes" in params:
            sizes = params["sizes"]
            _expect(
                isinstance(sizes, list) and sizes and all(isinstance(s, int) for s in sizes),
                f"{where}.sizes",
                "expected a non-empty list of integers",
            )
            out["sizes"] = list(sizes)
        else:
            profile = params.get("profile", "doubling")
            _expect_str(profile, f"{where}.profile")
            out["profile"] = profile
        return out
    if family == "path":
        _expect_keys(params, {"n"}, where)
        return {"n": _expect_int(params.get("n", 9), f"{where}.n", minimum=2)}
    if family == "star":
        _expect_keys(params, {"leaves"}, where)
        return {"leaves": _expect_int(params.get("leaves", 3), f"{where}.leaves", minimum=1)}
    raise ConfigError(where, f"unknown family {family!r}")


def build_provider(graph_spec: dict) -> GraphProvider:
    spec = normalize_graph(graph_spec)
    if spec["kind"] == "group":
        group = group_by_name(spec["group"], **spec["params"])
        return cayley_provider(group, spec.get("generators"))
    return family_provider(spec["family"], **spec["params"])


def normalize_fire(spec: Any, where: str = "fire") -> Any:
    if isinstance(spec, list):
        _expect(bool(spec), where, "initial fire must not be empty")
        _expect(all(isinstance(v, str) for v in spec), where, "expected vertex id strings")
        return sorted(set(spec))
    if isinstance(spec, dict):
        _expect_keys(spec, {"ball"}, where)
        radius = _expect_int(spec.get("ball"), f"{where}.ball", minimum=0)
        return {"ball": radius}
    raise ConfigError(where, f"expected a list of ids or {{'ball': r}}, got {spec!r}")


def resolve_fire(fire_spec: Any, provider: GraphProvider) -> list[VertexId]:
    """Fire spec to a sorted id list; {'ball': r} burns the whole ball of
    radius r around the basepoint."""
    spec = normalize_fire(fire_spec)
    if isinstance(spec, dict):
        return sorted(ball(provider, provider.basepoint, spec["ball"]).ids())
    for v in spec:
        try:
            provider.validate(v)
        except Exception as exc:
            raise ConfigError("fire", str(exc)) from exc
    return spec


def normalize_schedule(spec: Any, where: str = "schedule") -> dict:
    _expect(isinstance(spec, dict), where, f"expected an object, got {spec!r}")
    _expect_keys(spec, {"C", "d"}, where)
    c = _parse_fraction(spec.get("C"), f"{where}.C")
    _expect(c >= 0, f"{where}.C", f"must be >= 0, got {c}")
    d = _expect_int(spec.get("d", 0), f"{where}.d", minimum=0)
    return {"C": str(c), "d": d}


def build_schedule(spec: Any) -> BudgetSchedule:
    norm = normalize_schedule(spec)
    return BudgetSchedule(Fraction(norm["C"]), norm["d"])


def normalize_strategy(spec: Any, where: str = "strategy") -> dict:
    _expect(isinstance(spec, dict), where, f"expected an object, got {spec!r}")
    _expect_keys(spec, {"name", "params"}, where)
    name = _expect_str(spec.get("name"), f"{where}.name")
    _expect(name in STRATEGY_NAMES, f"{where}.name", f"unknown strategy {name!r}; known: {list(STRATEGY_NAMES)}")
    params = spec.get("params", {})
    _expect(isinstance(params, dict), f"{where}.params", "expected an object")
    return {"name": name, "params": params}


def build_strategy(spec: Any, graph, fire, schedule):
    norm = normalize_strategy(spec)
    try:
        return make_strategy(norm["name"], norm["params"], graph, fire, schedule)
    except ValueError as exc:
        raise ConfigError("strategy", str(exc)) from exc


def normalize_caps(spec: Any, where: str = "caps") -> dict:
    _expect(isinstance(spec, dict), where, f"expected an object, got {spec!r}")
    _expect_keys(spec, {"vertices", "nodes"}, where)
    out = {}
    if "vertices" in spec:
        out["vertices"] = _expect_int(spec["vertices"], f"{where}.vertices", minimum=1)
    if "nodes" in spec:
        out["nodes"] = _expect_int(spec["nodes"], f"{where}.nodes", minimum=1)
    return out


def normalize_config(config: Any) -> dict:
    """Validate a parsed config and return its normalized form.

    Command-specific section requirements are checked by the command;
    this pass checks every section that is present.
    """
    _expect(isinstance(config, dict), "config", f"expected a JSON object, got {config!r}")
    _expect_keys(config, _TOP_KEYS, "config")
    out: dict = {}
    if "label" in config:
        out["label"] = _expect_str(config["label"], "label")
    if "graph" in config:
        out["graph"] = normalize_graph(config["graph"])
    if "fire" in config:
        out["fire"] = normalize_fire(config["fire"])
    if "schedule" in config:
        out["schedule"] = normalize_schedule(config["schedule"])
    if "strategy" in config:
        out["strategy"] = normalize_strategy(config["strategy"])
    if "horizon" in config:
        out["horizon"] = _expect_int(config["horizon"], "horizon", minimum=1)
    if "escape_radius" in config:
        out["escape_radius"] = _expect_int(config["escape_radius"], "escape_radius", minimum=1)
    if "caps" in config:
        out["caps"] = normalize_caps(config["caps"])
    if "growth" in config:
        g = config["growth"]
        _expect(isinstance(g, dict), "growth", "expected an object")
        _expect_keys(g, {"max_radius", "fit_window"}, "growth")
        norm_g: dict = {"max_radius": _expect_int(g.get("max_radius", 10), "growth.max_radius", minimum=2)}
        if "fit_window" in g:
            w = g["fit_window"]
            _expect(
                isinstance(w, list) and len(w) == 2 and all(isinstance(x, int) for x in w),
                "growth.fit_window",
                f"expected [n_min, n_max], got {w!r}",
            )
            norm_g["fit_window"] = list(w)
        out["growth"] = norm_g
    if "folner" in config:
        f = config["folner"]
        _expect(isinstance(f, dict), "folner", "expected an object")
        _expect_keys(f, {"max_radius"}, "folner")
        out["folner"] = {"max_radius": _expect_int(f.get("max_radius", 10), "folner.max_radius", minimum=0)}
    if "certify" in config:
        c = config["certify"]
        _expect(isinstance(c, dict), "certify", "expected an object")
        _expect_keys(c, {"truncation_depth", "horizon"}, "certify")
        depth = _expect_int(c.get("truncation_depth"), "certify.truncation_depth", minimum=1)
        horizon = _expect_int(c.get("horizon", depth), "certify.horizon", minimum=1)
        _expect(horizon <= depth, "certify.horizon", f"must be <= truncation_depth {depth}, got {horizon}")
        out["certify"] = {"truncation_depth": depth, "horizon": horizon}
    if "semigroup" in config:
        s = config["semigroup"]
        _expect(isinstance(s, dict), "semigroup", "expected an object")
        _expect_keys(s, {"max_word_length", "depth", "pair"}, "semigroup")
        norm_s = {
            "max_word_length": _expect_int(s.get("max_word_length", 3), "semigroup.max_word_length", minimum=1),
            "depth": _expect_int(s.get("depth", 8), "semigroup.depth", minimum=1),
        }
        if "pair" in s:
            pair = s["pair"]
            _expect(
                isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, str) for x in pair),
                "semigroup.pair",
                f"expected [u, v] element ids, got {pair!r}",
            )
            norm_s["pair"] = list(pair)
        out["semigroup"] = norm_s
    if "seed" in config:
        out["seed"] = _expect_int(config["seed"], "seed", minimum=0)
    if "out" in config:
        o = config["out"]
        _expect(isinstance(o, dict), "out", "expected an object")
        _expect_keys(o, {"trace", "report"}, "out")
        out["out"] = {k: _expect_str(v, f"out.{k}") for k, v in o.items()}
    return out


def require_sections(config: dict, sections: list[str], command: str) -> None:
    for s in sections:
        _expect(s in config, s, f"required by '{command}'")


def config_hash(normalized: dict) -> str:
    """Stable 16-hex-digit digest of a normalized config."""
    blob = json.dumps(normalized, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("ascii")).hexdigest()[:16]


def load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fp:
            raw = json.load(fp)
    except FileNotFoundError:
        raise ConfigError("config", f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"{path} is not valid JSON: {exc.msg} (line {exc.lineno})") from None
    return normalize_config(raw)
