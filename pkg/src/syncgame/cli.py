"""Command-line interface: ``syncgame <group> <command> ...``.

JSON (sorted keys) is written to stdout.  Failures exit nonzero with an error
object on stderr.  Graph arguments are files, or one of the built-in names
K<n>, C<n>, P<n>, E<n> (edgeless) and frucht.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

import numpy as np

from . import __version__
from .bcs import (
    LinearSystemZ2,
    eliminate,
    graph_of_system,
    magic_square_instance,
    magic_square_witness,
    parse_system,
    pushforward_iso_witness,
    sync_bcs_game,
)
from .certificates import (
    classical_qaut_certificate,
    degree_obstruction,
    isospectrality_obstruction,
    niso_pipeline,
    validate_subset,
)
from .config import Config, load_config
from .game_algebra import algebra_of_game, equivalence_maps, iso_algebra, small_systems
from .games import (
    CondProb,
    QuantumWitness,
    SyncGame,
    hom_game,
    is_perfect_strategy,
    is_winning_function,
    iso_game,
    perfect_deterministic_search,
    point_mass,
    strategy_from_witness,
    verify_magic_unitary_witness,
)
from .graphs import (
    Graph,
    automorphism_order,
    char_poly,
    complete_graph,
    cycle_graph,
    empty_graph,
    frucht,
    is_isomorphic,
    is_isospectral,
    parse_graph,
    path_graph,
    spectrum_is_simple,
)
from .ncalg import (
    InconclusiveUpTo,
    NontrivialCertified,
    TrivialCertified,
    complete,
    find_boolean_evaluation,
    format_presentation,
    parse_map,
    parse_presentation,
    triviality_status,
    verify_homomorphism,
)
from .quantum_graph import check_quantum_adjacency, from_classical, quantum_graph_from_json, quantum_graph_to_json


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _fail("UsageError", message, code=2)


def _fail(kind: str, message: str, code: int = 1):
    sys.stderr.write(json.dumps({"error": kind, "message": message}, sort_keys=True) + "\n")
    raise SystemExit(code)


def _read(path: str) -> str:
    with open(path) as fh:
        return fh.read()


_BUILTIN = re.compile(r"([KCPE])(\d+)$")


def load_graph(arg: str) -> Graph:
    if os.path.exists(arg):
        return parse_graph(_read(arg))
    if arg.lower() == "frucht":
        return frucht()
    m = _BUILTIN.match(arg)
    if m:
        n = int(m.group(2))
        return {"K": complete_graph, "C": cycle_graph, "P": path_graph, "E": empty_graph}[m.group(1)](n)
    raise CliError(f"no graph file or built-in graph named {arg!r}")


def load_system(arg: str) -> LinearSystemZ2:
    if os.path.exists(arg):
        return parse_system(_read(arg))
    builtins = dict(small_systems())
    builtins["magic-square"] = magic_square_instance()
    if arg in builtins:
        return builtins[arg]
    raise CliError(f"no system file or built-in system named {arg!r} (built-ins: {sorted(builtins)})")


def load_json(path: str):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON at line {exc.lineno} ({exc.msg})") from None


def emit(payload, cfg: Config) -> None:
    if cfg.format == "json" or not isinstance(payload, dict):
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
        return
    for key in sorted(payload):
        value = payload[key]
        if not isinstance(value, str):
            value = json.dumps(value, sort_keys=True)
        sys.stdout.write(f"{key}: {value}\n")


def emit_text(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# -- graph --------------------------------------------------------------------

def cmd_graph(args, cfg):
    g = load_graph(args.file)
    if args.action == "info":
        return {"n": g.n, "edges": g.edge_count, "degrees": list(g.degrees), "regular": g.is_regular(),
                "char_poly": str(char_poly(g)), "simple_spectrum": spectrum_is_simple(g),
                "aut_order": automorphism_order(g)}
    if args.action == "charpoly":
        p = char_poly(g)
        return {"char_poly": str(p), "coefficients": [int(c) for c in p.coefficients],
                "simple_spectrum": spectrum_is_simple(g)}
    if args.action == "aut":
        return {"aut_order": automorphism_order(g)}
    if args.file2 is None:
        raise CliError("graph iso needs two graphs")
    h = load_graph(args.file2)
    perm = is_isomorphic(g, h)
    return {"isomorphic": perm is not None, "permutation": None if perm is None else list(perm),
            "isospectral": is_isospectral(g, h)}


# -- qgraph -------------------------------------------------------------------

def _load_qgraph(path: str):
    if os.path.exists(path) and _read(path).lstrip().startswith("{"):
        return quantum_graph_from_json(load_json(path))
    return from_classical(load_graph(path))


def cmd_qgraph(args, cfg):
    if args.action == "check":
        qg = _load_qgraph(args.file)
        out = check_quantum_adjacency(qg, cfg.tol).to_json()
        out["delta"] = qg.delta
        out["dimension"] = qg.qset.dimension
        return out
    return quantum_graph_to_json(from_classical(load_graph(args.file)))


# -- game ---------------------------------------------------------------------

def _build_game(kind: str, operands: list[str]) -> SyncGame:
    if kind in ("hom", "iso"):
        if len(operands) != 2:
            raise CliError(f"{kind} needs two graphs")
        x, y = load_graph(operands[0]), load_graph(operands[1])
        return hom_game(x, y) if kind == "hom" else iso_game(x, y)
    if len(operands) != 1:
        raise CliError("syncbcs needs one system")
    return sync_bcs_game(load_system(operands[0]))


def _load_game(path: str) -> SyncGame:
    return SyncGame.from_json(load_json(path))


def _load_strategy(path: str, game: SyncGame) -> CondProb:
    data = load_json(path)
    if isinstance(data, dict) and "function" in data:
        h = data["function"]
        if len(h) != game.n_inputs:
            raise CliError("strategy function must give one output per input")
        idx = {label: a for a, label in enumerate(game.outputs)}
        return point_mass([idx[x] if isinstance(x, str) else int(x) for x in h], game)
    if isinstance(data, dict) and "E" in data:
        return strategy_from_witness(QuantumWitness.from_json(data), game)
    if isinstance(data, dict) and "p" in data:
        return CondProb(np.asarray(data["p"], dtype=float))
    raise CliError("strategy file needs a 'function', 'p' or 'E' field")


def cmd_game(args, cfg):
    if args.action == "build":
        return _build_game(args.kind, args.operands).to_json()
    game = _load_game(args.file)
    if args.action == "solve":
        h = perfect_deterministic_search(game)
        return {"solution": None if h is None else [game.outputs[a] for a in h],
                "winning": h is not None and is_winning_function(game, h)}
    p = _load_strategy(args.strategy, game)
    return {"perfect": is_perfect_strategy(p, game)}


# -- algebra ------------------------------------------------------------------

def _build_algebra(kind: str, operands: list[str], full: bool):
    if kind == "iso":
        if len(operands) != 2:
            raise CliError("iso needs two graphs")
        return iso_algebra(load_graph(operands[0]), load_graph(operands[1]), reduced=not full)
    return algebra_of_game(_build_game(kind, operands))


def _status_json(status, pres) -> dict:
    if isinstance(status, TrivialCertified):
        out = {"verdict": status.verdict, "degree": status.degree}
        if status.certificate is not None:
            out["certificate_terms"] = len(status.certificate.terms)
            out["certificate_verified"] = status.certificate.verify(pres)
            out["certificate"] = status.certificate.to_json(pres.alphabet)
        return out
    if isinstance(status, NontrivialCertified):
        names = pres.alphabet.names
        return {"verdict": status.verdict, "kind": status.kind,
                "witness": {names[k]: str(v) for k, v in sorted(status.witness.items())}}
    assert isinstance(status, InconclusiveUpTo)
    return {"verdict": status.verdict, "degree": status.degree, "rules": status.rules,
            "saturated": status.saturated, "incomplete": status.incomplete}


def cmd_algebra(args, cfg):
    if args.action == "build":
        alg = _build_algebra(args.kind, args.operands, args.full)
        return format_presentation(alg.pres)
    if args.action == "triviality":
        pres = parse_presentation(_read(args.pres), name=os.path.basename(args.pres))
        evaluation = None if args.no_search else find_boolean_evaluation(pres)
        status = triviality_status(pres, cfg.degree, evaluation=evaluation, rule_cap=cfg.rule_cap, tol=cfg.tol)
        return _status_json(status, pres)
    src = parse_presentation(_read(args.src))
    dst = parse_presentation(_read(args.dst))
    images = parse_map(_read(args.map), src, dst)
    rs = complete(dst, max(cfg.degree, dst.max_degree()), rule_cap=cfg.rule_cap)
    report = verify_homomorphism(src, rs, images).to_json()
    report["degree"] = rs.degree_bound
    report["saturated"] = rs.saturated
    return report


# -- witness ------------------------------------------------------------------

def cmd_witness(args, cfg):
    if args.action == "magic-square":
        return magic_square_witness().to_json()
    w = QuantumWitness.from_json(load_json(args.witness))
    return verify_magic_unitary_witness(w, load_graph(args.x), load_graph(args.y), cfg.tol).to_json()


# -- cert ---------------------------------------------------------------------

def cmd_cert(args, cfg):
    if args.action == "qaut":
        return classical_qaut_certificate(load_graph(args.x), support_eps=cfg.support_eps).to_json()
    if args.y is None:
        raise CliError(f"cert {args.action} needs two graphs")
    x, y = load_graph(args.x), load_graph(args.y)
    if args.action == "degree":
        return degree_obstruction(x, y).to_json()
    return isospectrality_obstruction(x, y).to_json()


# -- repro --------------------------------------------------------------------

def repro_frucht(cfg) -> dict:
    g = frucht()
    cert = classical_qaut_certificate(g, support_eps=cfg.support_eps)
    ev = cert.evidence
    return {"verdict": cert.verdict, "simple_spectrum": ev["simple_spectrum"],
            "distinct_eigenvalues": ev.get("distinct_eigenvalues"), "aut_order": ev.get("aut_order"),
            "supports_ok": ev.get("supports_ok"), "pair_margin": ev.get("pair_margin"),
            "band_hits": ev.get("band_hits"), "char_poly": ev["char_poly"]}


def repro_magic_square(cfg) -> dict:
    sys_ = magic_square_instance()
    elim = eliminate(sys_)
    gb = graph_of_system(sys_)
    g0 = graph_of_system(sys_.homogeneous())
    w = magic_square_witness()
    game = sync_bcs_game(sys_)
    iso_w = pushforward_iso_witness(sys_, w)
    push = verify_magic_unitary_witness(iso_w, gb, g0, cfg.tol)
    return {
        "classically_solvable": elim.solution is not None,
        "elimination_certificate": list(elim.certificate) if elim.certificate else None,
        "vertices": gb.n,
        "isospectral": is_isospectral(gb, g0),
        "isomorphic": is_isomorphic(gb, g0) is not None,
        "deterministic_strategy": perfect_deterministic_search(game) is not None,
        "witness_dimension": w.d,
        "witness_projection_residual": w.projection_residual(),
        "witness_row_sum_residual": w.row_sum_residual(),
        "quantum_strategy_perfect": is_perfect_strategy(strategy_from_witness(w, game), game),
        "iso_witness_ok": push.ok,
        "iso_witness_residual": push.residual,
    }


def cmd_repro(args, cfg):
    if args.target == "frucht":
        return repro_frucht(cfg)
    if args.target == "niso":
        subset = None if args.subset is None else validate_subset(int(v) for v in args.subset.split(","))
        return niso_pipeline(subset)
    if args.target == "magic-square":
        return repro_magic_square(cfg)
    if args.system is None:
        raise CliError("equivalence-maps needs a system (file, 1x2 or 2x3)")
    degree = args.degree if args.degree is not None else 3
    return equivalence_maps(load_system(args.system), degree=degree, rule_cap=cfg.rule_cap).to_json()


# -- parser -------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--degree", type=int, help="degree bound for completion")
    p.add_argument("--rule-cap", type=int, help="maximum number of rewrite rules")
    p.add_argument("--tol", type=float, help="numeric tolerance")
    p.add_argument("--support-eps", type=float, help="eigenvector support threshold")
    p.add_argument("--threads", type=int, help="worker threads (results do not depend on it)")
    p.add_argument("--format", choices=["json", "text"], help="output format")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="syncgame", description="Synchronous games, game algebras and quantum graphs.")
    parser.add_argument("--version", action="version", version=__version__)
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    g = groups.add_parser("graph", help="classical graph queries")
    gs = g.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("info", "charpoly", "aut", "iso"):
        p = gs.add_parser(name, parents=[common])
        p.add_argument("file")
        p.add_argument("file2", nargs="?")
    g.set_defaults(func=cmd_graph)

    q = groups.add_parser("qgraph", help="quantum graphs")
    qs = q.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("check", "from-classical"):
        qs.add_parser(name, parents=[common]).add_argument("file")
    q.set_defaults(func=cmd_qgraph)

    gm = groups.add_parser("game", help="synchronous games")
    gms = gm.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = gms.add_parser("build", parents=[common])
    p.add_argument("kind", choices=["hom", "iso", "syncbcs"])
    p.add_argument("operands", nargs="+")
    gms.add_parser("solve", parents=[common]).add_argument("file")
    p = gms.add_parser("verify-strategy", parents=[common])
    p.add_argument("file")
    p.add_argument("strategy")
    gm.set_defaults(func=cmd_game)

    a = groups.add_parser("algebra", help="game *-algebras")
    as_ = a.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = as_.add_parser("build", parents=[common])
    p.add_argument("kind", choices=["hom", "iso", "syncbcs"])
    p.add_argument("operands", nargs="+")
    p.add_argument("--full", action="store_true", help="iso: full game algebra instead of the reduced one")
    p = as_.add_parser("triviality", parents=[common])
    p.add_argument("pres")
    p.add_argument("--no-search", action="store_true", help="skip the search for a scalar evaluation")
    p = as_.add_parser("verify-hom", parents=[common])
    p.add_argument("src")
    p.add_argument("dst")
    p.add_argument("map")
    a.set_defaults(func=cmd_algebra)

    w = groups.add_parser("witness", help="quantum witnesses")
    ws = w.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = ws.add_parser("verify", parents=[common])
    p.add_argument("witness")
    p.add_argument("x")
    p.add_argument("y")
    ws.add_parser("magic-square", parents=[common])
    w.set_defaults(func=cmd_witness)

    c = groups.add_parser("cert", help="certificates and obstructions")
    cs = c.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("qaut", "degree", "isospectral"):
        p = cs.add_parser(name, parents=[common])
        p.add_argument("x")
        p.add_argument("y", nargs="?")
    c.set_defaults(func=cmd_cert)

    r = groups.add_parser("repro", help="one-shot reproductions")
    rs = r.add_subparsers(dest="target", required=True, parser_class=_Parser)
    rs.add_parser("frucht", parents=[common])
    rs.add_parser("niso", parents=[common]).add_argument("--subset", help="six comma-separated Frucht vertices")
    rs.add_parser("magic-square", parents=[common])
    rs.add_parser("equivalence-maps", parents=[common]).add_argument("system", nargs="?")
    r.set_defaults(func=cmd_repro)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config({"degree": args.degree, "rule_cap": args.rule_cap, "tol": args.tol,
                           "support_eps": args.support_eps, "threads": args.threads, "format": args.format})
        payload = args.func(args, cfg)
    except SystemExit:
        raise
    except (CliError, ValueError, OSError, RuntimeError, KeyError, OverflowError) as exc:
        _fail(type(exc).__name__, str(exc))
    if isinstance(payload, str):
        emit_text(payload)
    else:
        emit(payload, cfg)
    return 0


if __name__ == "__main__":
    sys.exit(main())
