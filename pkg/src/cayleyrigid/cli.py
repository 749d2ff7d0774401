"""Command-line driver.

Every command prints one JSON document (or text/DOT where requested) and
exits with 0 on pass, 1 on a property violation, 2 when a resource cap was
hit and 3 for a bad configuration.  Failing runs embed their configuration
under ``"replay"`` so they can be re-run with ``--replay FILE``.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from dataclasses import asdict, dataclass, field, fields
from itertools import combinations

from sympy import factorint
from sympy.utilities.iterables import partitions

from . import geodesics as geo
from . import rigidity as rig
from .errors import GeodesicLimitExceeded, ResourceLimitExceeded, SearchLimitExceeded
from .groups import GeneratingSet, GeneratingSetError, GroupSpec, make_group, validate_generating_set
from .metric import DEFAULT_MAX_VERTICES, torsion_diameter, word_metric

EXIT_PASS, EXIT_FAIL, EXIT_LIMIT, EXIT_CONFIG = 0, 1, 2, 3

COMMANDS = (
    "ball",
    "parity",
    "convexity",
    "geodesics",
    "construct-pair",
    "verify-rigidity",
    "flip-demo",
)


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class ExperimentConfig:
    command: str
    group: str | None = None
    gens: str | None = None
    radius: int = 3
    window: str | None = None
    type: str | None = None
    base: str | None = None
    source: str | None = None
    target: str | None = None
    map: str = "identity"
    c: str = "0,1,2"
    lines: int = 1
    rank: int = 1
    torsion_order: int = 2
    seed: int = 0
    threads: int = 1
    max_vertices: int = DEFAULT_MAX_VERTICES
    max_geodesics: int = 10_000
    format: str = "json"

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> ExperimentConfig:
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(key, "unknown field in replay file")
        if "command" not in data:
            raise ConfigError("command", "missing")
        return cls(**data)


_TUPLE = re.compile(r"\(([^()]*)\)")


def parse_group(text: str | None) -> GroupSpec:
    if not text:
        raise ConfigError("group", "required, e.g. \"1,[2]\"")
    m = re.fullmatch(r"\s*(-?\d+)\s*,\s*\[\s*([-\d,\s]*)\]\s*", text)
    if not m:
        raise ConfigError("group", f"cannot parse {text!r}; expected \"rank,[factors]\"")
    factors = [int(f) for f in m.group(2).split(",") if f.strip()]
    try:
        return make_group(int(m.group(1)), factors)
    except ValueError as exc:
        raise ConfigError("group", str(exc)) from None


def _tuples(text: str, field_name: str, dim: int) -> list[tuple[int, ...]]:
    found = _TUPLE.findall(text)
    rest = _TUPLE.sub("", text).replace(",", "").strip()
    if not found or rest:
        raise ConfigError(field_name, f"cannot parse {text!r}; expected parenthesized integer tuples")
    out = []
    for i, body in enumerate(found):
        try:
            vals = tuple(int(x) for x in body.split(",") if x.strip())
        except ValueError:
            raise ConfigError(f"{field_name}[{i}]", f"non-integer entry in ({body})") from None
        if len(vals) != dim:
            raise ConfigError(f"{field_name}[{i}]", f"({body}) has {len(vals)} coordinates, group needs {dim}")
        out.append(vals)
    return out


def parse_element(text: str | None, g: GroupSpec, field_name: str):
    if text is None:
        raise ConfigError(field_name, "required")
    vals = _tuples(text, field_name, g.dim)
    if len(vals) != 1:
        raise ConfigError(field_name, "expected exactly one tuple")
    return g.from_coords(vals[0])


def parse_gens(text: str | None, g: GroupSpec) -> GeneratingSet:
    if not text:
        raise ConfigError("gens", "required, e.g. \"(1,0),(1,1)\"")
    s = GeneratingSet.from_tuples(g, _tuples(text, "gens", g.dim))
    try:
        validate_generating_set(s)
    except GeneratingSetError as exc:
        raise ConfigError("gens", str(exc)) from None
    return s


def parse_window(text: str | None, default: int = 4) -> tuple[int, int]:
    if text is None:
        return -default, default
    parts = [p.strip() for p in text.split(",")]
    try:
        if len(parts) == 1:
            w = int(parts[0])
            if w < 0:
                raise ValueError
            return -w, w
        if len(parts) == 2:
            a, b = int(parts[0]), int(parts[1])
            if a > b:
                raise ValueError
            return a, b
    except ValueError:
        pass
    raise ConfigError("window", f"cannot parse {text!r}; expected \"w\" or \"a,b\" with a <= b")


def _parse_cs(text: str) -> list[int]:
    try:
        cs = sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError:
        raise ConfigError("c", f"cannot parse {text!r}") from None
    if not cs or cs[0] < 0:
        raise ConfigError("c", "need non-negative integers")
    return cs


@dataclass
class Outcome:
    code: int
    payload: dict
    text: str | None = None
    extra: dict = field(default_factory=dict)


def _status(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def cmd_ball(cfg: ExperimentConfig) -> Outcome:
    g = parse_group(cfg.group)
    s = parse_gens(cfg.gens, g)
    if cfg.radius < 0:
        raise ConfigError("radius", "must be non-negative")
    m = word_metric(s, cfg.max_vertices)
    b = m.ball(cfg.radius)
    payload = {
        "command": "ball",
        "group": g.to_json(),
        "gens": s.to_json(),
        "radius": cfg.radius,
        "beta": b.growth(),
        "shells": b.shell_sizes(),
        "torsion_diameter": torsion_diameter(s, cfg.max_vertices),
        "saturated": b.saturated,
    }
    if cfg.format == "dot":
        return Outcome(EXIT_PASS, payload, b.to_dot())
    payload["ball"] = b.to_json()
    return Outcome(EXIT_PASS, payload)


def cmd_parity(cfg: ExperimentConfig) -> Outcome:
    g = parse_group(cfg.group)
    s = parse_gens(cfg.gens, g)
    rep = rig.torsion_parity(s, cfg.max_vertices)
    payload = {"command": "parity", **rep.to_json(), "status": _status(rep.agree)}
    return Outcome(EXIT_PASS if rep.agree else EXIT_FAIL, payload)


def cmd_convexity(cfg: ExperimentConfig) -> Outcome:
    g = parse_group(cfg.group)
    s = parse_gens(cfg.gens, g)
    t = parse_element(cfg.type, g, "type")
    if t not in s:
        raise ConfigError("type", f"{t!r} is not in the generating set")
    a, b = parse_window(cfg.window)
    cs = _parse_cs(cfg.c)
    if cfg.lines < 1:
        raise ConfigError("lines", "must be positive")
    bases = [parse_element(cfg.base, g, "base") if cfg.base else g.zero()]
    rng = random.Random(cfg.seed)
    pool = word_metric(s, cfg.max_vertices).ball(max(b - a, 1)).vertices
    while len(bases) < cfg.lines:
        bases.append(pool[rng.randrange(len(pool))])

    maximal = geo.max_norm_generators(s).elements
    cert = None
    if t in maximal and not t.is_torsion():
        cert = geo.quasiconvexity_certificate(s, t)

    reports = []
    violated = False
    for h in bases:
        line = geo.algebraic_line(s, h, t, a, b)
        entry = {"base": h.to_json(), "geodesic": geo.is_geodesic_window(line)}
        if not entry["geodesic"]:
            entry["verdict"] = "NOT_GEODESIC"
            # a maximal-type algebraic line must be geodesic
            if cert is not None:
                violated = True
            reports.append(entry)
            continue
        conv = geo.is_convex_on_window(line)
        entry["verdict"] = "CONVEX" if conv.convex else "NOT_CONVEX"
        if not conv.convex:
            n, m, seg = conv.witness
            entry["witness"] = {"n": n, "m": m, "geodesic": seg.to_json()}
            pair = geo.nonconvexity_witness_by_reordering(line)
            if pair is not None:
                entry["reordering_witness"] = [pair[0].to_json(), pair[1].to_json()]
        if cert is not None:
            ft = {}
            for c in cs:
                res = geo.check_fellow_traveller(line, cert, c)
                ft[str(c)] = {"C": res.C, "pairs": res.pairs_checked, "status": _status(res.ok)}
                if not res.ok:
                    ft[str(c)]["violation"] = res.violation
                    violated = True
            entry["fellow_traveller"] = ft
        reports.append(entry)

    payload = {
        "command": "convexity",
        "type": t.to_json(),
        "window": [a, b],
        "maximal_type": cert is not None,
        "certificate": None if cert is None else cert.to_json(cs),
        "lines": reports,
        "status": _status(not violated),
    }
    return Outcome(EXIT_FAIL if violated else EXIT_PASS, payload)


def cmd_geodesics(cfg: ExperimentConfig) -> Outcome:
    g = parse_group(cfg.group)
    s = parse_gens(cfg.gens, g)
    x = parse_element(cfg.source, g, "source") if cfg.source else g.zero()
    y = parse_element(cfg.target, g, "target")
    count = geo.count_geodesics(s, x, y, cfg.max_vertices)
    payload = {
        "command": "geodesics",
        "source": x.to_json(),
        "target": y.to_json(),
        "distance": word_metric(s, cfg.max_vertices).distance(x, y),
        "count": count,
    }
    try:
        segs = geo.enumerate_geodesics(s, x, y, cfg.max_geodesics, cfg.max_vertices)
    except GeodesicLimitExceeded as exc:
        payload["error"] = str(exc)
        return Outcome(EXIT_LIMIT, payload)
    payload["geodesics"] = [seg.to_json() for seg in segs]
    ok = len(segs) == count and all(seg.is_geodesic() for seg in segs)
    payload["status"] = _status(ok)
    return Outcome(EXIT_PASS if ok else EXIT_FAIL, payload)


def abelian_groups_of_order(rank: int, k: int) -> list[GroupSpec]:
    """All groups ``Z^rank x T`` with ``|T| = k``, one per isomorphism class."""
    per_prime = []
    for p, e in sorted(factorint(k).items()):
        per_prime.append([[p**i for i, mult in part.items() for _ in range(mult)] for part in partitions(e)])
    out = []

    def build(i, acc):
        if i == len(per_prime):
            out.append(make_group(rank, acc))
            return
        for choice in per_prime[i]:
            build(i + 1, acc + choice)

    build(0, [])
    return sorted(set(out), key=lambda g: (len(g.torsion), g.torsion))


def cmd_construct_pair(cfg: ExperimentConfig) -> Outcome:
    if cfg.rank < 0:
        raise ConfigError("rank", "must be non-negative")
    if cfg.torsion_order < 1:
        raise ConfigError("torsion_order", "must be positive")
    groups = [parse_group(cfg.group)] if cfg.group else abelian_groups_of_order(cfg.rank, cfg.torsion_order)
    witnesses = []
    for g in groups:
        s, w = rig.build_corollary_witness(g, cfg.radius)
        witnesses.append({
            "group": g.to_json(),
            "gens": s.to_json(),
            "vertices": w.domain_graph.n,
            "edges": len(w.domain_graph.edges),
            "verified": w.preserves_edges(),
            "bijection": w.to_json(),
        })
    pairs = []
    for g1, g2 in combinations(groups, 2):
        phi = rig.corollary_pair_isomorphism(g1, g2, cfg.radius)
        pairs.append({
            "domain": g1.to_json(),
            "codomain": g2.to_json(),
            "vertices": phi.domain_graph.n,
            "fixes_origin": phi.fixes_origin(),
            "verified": phi.preserves_edges() and phi.preserves_shells(),
            "bijection": phi.to_json(),
        })
    ok = all(w["verified"] for w in witnesses) and all(p["verified"] for p in pairs)
    payload = {
        "command": "construct-pair",
        "rank": groups[0].rank,
        "torsion_order": groups[0].torsion_order(),
        "radius": cfg.radius,
        "witnesses": witnesses,
        "pairs": pairs,
        "status": _status(ok),
    }
    return Outcome(EXIT_PASS if ok else EXIT_FAIL, payload)


def parse_map(text: str, g: GroupSpec):
    """``identity``, ``negate``, ``translate:(..)`` or ``flip:n``."""
    kind, _, arg = text.partition(":")
    if kind == "identity":
        return lambda x: x
    if kind == "negate":
        return rig.negation_map
    if kind == "translate":
        return rig.translation_map(parse_element(arg, g, "map"))
    if kind == "flip":
        if g != GroupSpec(1, (2,)):
            raise ConfigError("map", "flip maps need --group \"1,[2]\"")
        try:
            return rig.flip_map(int(arg))
        except ValueError:
            raise ConfigError("map", f"flip position {arg!r} is not an integer") from None
    raise ConfigError("map", f"unknown map {text!r}")


def cmd_verify_rigidity(cfg: ExperimentConfig) -> Outcome:
    g = parse_group(cfg.group)
    s = parse_gens(cfg.gens, g)
    phi = parse_map(cfg.map, g)
    auto = rig.verify_graph_automorphism(phi, s, cfg.radius)
    payload = {
        "command": "verify-rigidity",
        "map": cfg.map,
        "radius": cfg.radius,
        "automorphism": {"status": _status(auto.ok), "vertices": auto.vertices, "violation": auto.violation},
    }
    if not auto.ok:
        payload["status"] = "FAIL"
        return Outcome(EXIT_FAIL, payload)
    window = word_metric(s, cfg.max_vertices).ball(cfg.radius).vertices
    rep = rig.induced_free_map(phi, g, g, window)
    payload["induced_free_map"] = rep.to_json()
    ga = rig.group_affinity(phi, window)
    payload["group_level_affine"] = ga.affine
    if ga.witness is not None:
        payload["group_level_witness"] = ga.witness
    payload["status"] = _status(rep.ok)
    return Outcome(EXIT_PASS if rep.ok else EXIT_FAIL, payload)


def cmd_flip_demo(cfg: ExperimentConfig) -> Outcome:
    g = make_group(1, [2])
    s = GeneratingSet.from_tuples(g, [(1, 0), (1, 1)])
    phi = rig.flip_map(0)
    r = max(cfg.radius, 2)
    auto = rig.verify_graph_automorphism(phi, s, r)
    window = word_metric(s).ball(r).vertices
    rep = rig.induced_free_map(phi, g, g, window)
    ga = rig.group_affinity(phi, window)
    ok = auto.ok and rep.ok and not ga.affine
    payload = {
        "command": "flip-demo",
        "group": g.to_json(),
        "gens": s.to_json(),
        "radius": r,
        "automorphism": _status(auto.ok),
        "induced_free_map": rep.to_json(),
        "group_level_affine": ga.affine,
        "non_affinity_witness": ga.witness,
        "status": _status(ok),
    }
    return Outcome(EXIT_PASS if ok else EXIT_FAIL, payload)


HANDLERS = {
    "ball": cmd_ball,
    "parity": cmd_parity,
    "convexity": cmd_convexity,
    "geodesics": cmd_geodesics,
    "construct-pair": cmd_construct_pair,
    "verify-rigidity": cmd_verify_rigidity,
    "flip-demo": cmd_flip_demo,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cayleyrigid", description="Cayley graph rigidity experiments")
    p.add_argument("command", nargs="?", choices=COMMANDS)
    p.add_argument("--group")
    p.add_argument("--gens")
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--window")
    p.add_argument("--type")
    p.add_argument("--base")
    p.add_argument("--source")
    p.add_argument("--target")
    p.add_argument("--map", default="identity", help="identity | negate | translate:(..) | flip:n")
    p.add_argument("--c", default="0,1,2", help="closeness parameters for the fellow-traveller check")
    p.add_argument("--lines", type=int, default=1, help="number of lines (extra bases drawn with --seed)")
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--torsion-order", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--max-vertices", type=int, default=DEFAULT_MAX_VERTICES)
    p.add_argument("--max-geodesics", type=int, default=10_000)
    p.add_argument("--format", choices=("json", "dot", "text"), default="json")
    p.add_argument("--replay", metavar="FILE")
    return p


def _config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    if ns.replay:
        try:
            with open(ns.replay) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("replay", str(exc)) from None
        if isinstance(data, dict) and "replay" in data:
            data = data["replay"]
        if not isinstance(data, dict):
            raise ConfigError("replay", "expected a JSON object")
        return ExperimentConfig.from_json(data)
    if ns.command is None:
        raise ConfigError("command", "missing")
    values = {f.name: getattr(ns, f.name) for f in fields(ExperimentConfig)}
    return ExperimentConfig(**values)


def _check_caps(cfg: ExperimentConfig) -> None:
    if cfg.command not in HANDLERS:
        raise ConfigError("command", f"unknown command {cfg.command!r}")
    for name in ("threads", "max_vertices", "max_geodesics"):
        if getattr(cfg, name) < 1:
            raise ConfigError(name, "must be positive")
    if cfg.format not in ("json", "dot", "text"):
        raise ConfigError("format", f"unknown format {cfg.format!r}")
    if cfg.format == "dot" and cfg.command != "ball":
        raise ConfigError("format", "dot output is only available for the ball command")


def _render_text(payload: dict) -> str:
    lines = []
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Run the CLI and return ``(exit_code, stdout_text)``."""
    ns = build_parser().parse_args(argv)
    cfg = None
    try:
        cfg = _config_from_args(ns)
        _check_caps(cfg)
        out = HANDLERS[cfg.command](cfg)
    except ConfigError as exc:
        return EXIT_CONFIG, json.dumps({"error": "config", "field": exc.field, "message": str(exc)}, sort_keys=True) + "\n"
    except (ResourceLimitExceeded, SearchLimitExceeded, GeodesicLimitExceeded) as exc:
        payload = {"error": "resource limit", "message": str(exc)}
        if cfg is not None:
            payload["replay"] = cfg.to_json()
        return EXIT_LIMIT, json.dumps(payload, sort_keys=True) + "\n"
    if out.code != EXIT_PASS:
        out.payload["replay"] = cfg.to_json()
    if out.text is not None and cfg.format == "dot":
        return out.code, out.text
    if cfg.format == "text":
        return out.code, _render_text(out.payload)
    return out.code, json.dumps(out.payload, sort_keys=True, indent=2) + "\n"


def main(argv: list[str] | None = None) -> int:
    code, text = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
