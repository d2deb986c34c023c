"""Command-line front end: germ invariants, symbols, expansions, campaigns.

Exit codes are part of the interface and scripts may branch on them:
0 success (and, for campaigns, no violations), 2 unusable input, 3 germ
condition violated, 4 undefined invariant, 5 resource cap exceeded,
6 numeric non-convergence, 7 invariance violation found.

JSON output is emitted with sorted keys and fixed indentation, so a rerun
with the same configuration produces byte-identical bytes; campaign
commands are seeded and the numeric probes are deterministic.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .boardman import (
    DEFAULT_GENERATOR_CAP,
    DEFAULT_MAX_STEPS,
    boardman_symbol,
)
from .equivlab import CorpusSpec, describe_germ, invariance_report, random_germ
from .errors import (
    GermConditionError,
    GermkitError,
    NonConvergenceError,
    ParseError,
    ResourceLimitError,
    StructuralError,
    UndefinedInvariantError,
)
from .germinv import MapGerm, germ_from_file, identity_germ
from .germparse import parse_germ_file, print_polynomial
from .polycore import Polynomial
from .puiseux import DEFAULT_MAX_TERMS, puiseux_expansions, puiseux_pairs
from .tangentnum import (
    DEFAULT_GRID_STEP,
    lattice_grid,
    theorem31_probe,
    unipotent_quadruple,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_GERM_CONDITION = 3
EXIT_UNDEFINED = 4
EXIT_RESOURCE = 5
EXIT_NONCONVERGENCE = 6
EXIT_VIOLATION = 7

# the four demonstration germs, as germ-file source so the parser is the
# single entry point for every germ the tool touches
_GERM_PRESETS = {
    "paper-f0": "format 1\nkind polynomial-map\nvars x y\ncomponent x^4 + y^9\n",
    "paper-f1": (
        "format 1\nkind polynomial-map\nvars x y\n"
        "component x^4 + x^2*y^6 + y^9\n"
    ),
    "paper-f": "format 1\nkind polynomial-map\nvars x y\ncomponent x^4 + y^5\n",
    "paper-g": (
        "format 1\nkind polynomial-map\nvars x y\n"
        "component x^4 - 2*x^2*y^3 - 4*x*y^5 + y^6 + y^7\n"
    ),
}


@dataclass(frozen=True)
class CliConfig:
    """One command with every knob it can read; unset knobs stay None."""

    command: str
    input: str | None = None
    preset: str | None = None
    json_mode: bool = False
    seed: int = 42
    count: int | None = None
    moves: int = 10
    max_steps: int = DEFAULT_MAX_STEPS
    generator_cap: int = DEFAULT_GENERATOR_CAP
    grid_step: float = DEFAULT_GRID_STEP
    m_exp: int = 20
    max_terms: int = DEFAULT_MAX_TERMS
    expand: int | None = None
    swap: bool = False


def _emit_json(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _read_source(config: CliConfig) -> str:
    if config.preset is not None:
        return _GERM_PRESETS[config.preset]
    if config.input == "-":
        return sys.stdin.read()
    return Path(config.input).read_text(encoding="utf-8")


def _load_germ(config: CliConfig) -> tuple[MapGerm, tuple[str, ...]]:
    source = parse_germ_file(_read_source(config))
    return germ_from_file(source), source.var_names


def _component_strings(germ: MapGerm, var_names) -> list[str]:
    return [print_polynomial(c, var_names) for c in germ.components]


# -- single-germ commands -----------------------------------------------------


def cmd_invariants(config: CliConfig) -> int:
    germ, var_names = _load_germ(config)
    try:
        order = germ.order()
    except UndefinedInvariantError as exc:
        print(f"order undefined: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED
    rank = germ.rank()
    hpart = _component_strings(germ.first_homogeneous_part(), var_names)
    if config.json_mode:
        _emit_json({"order": order, "rank": rank, "hpart": hpart})
    else:
        print(f"order: {order}")
        print(f"rank: {rank}")
        print("H_f: (" + ", ".join(hpart) + ")")
    return EXIT_OK


def cmd_hpart(config: CliConfig) -> int:
    germ, var_names = _load_germ(config)
    try:
        order = germ.order()
    except UndefinedInvariantError as exc:
        print(f"order undefined: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED
    hpart = _component_strings(germ.first_homogeneous_part(), var_names)
    if config.json_mode:
        _emit_json({"order": order, "components": hpart})
    else:
        print(f"order: {order}")
        print("H_f: (" + ", ".join(hpart) + ")")
    return EXIT_OK


def cmd_symbol(config: CliConfig) -> int:
    germ, _ = _load_germ(config)
    symbol = boardman_symbol(
        germ,
        max_steps=config.max_steps,
        generator_cap=config.generator_cap,
    )
    if config.json_mode:
        payload = symbol.to_json_dict()
        if config.expand is not None:
            payload["expanded"] = symbol.expand(config.expand)
        _emit_json(payload)
    else:
        print(f"symbol: {symbol.pretty()}")
        print(f"status: {symbol.status.value}")
        if config.expand is not None:
            entries = ", ".join(str(v) for v in symbol.expand(config.expand))
            print(f"expanded: [{entries}]")
    return EXIT_OK


def cmd_puiseux(config: CliConfig) -> int:
    germ, _ = _load_germ(config)
    if germ.nvars != 2 or germ.ncomps != 1:
        raise StructuralError(
            "puiseux needs a 2-variable, single-component germ, found "
            f"{germ.nvars} variables and {germ.ncomps} components"
        )
    curve = germ.components[0]
    if config.swap:
        curve = Polynomial(2, {(j, i): c for (i, j), c in curve.terms.items()})
    branches = puiseux_expansions(curve, max_terms=config.max_terms)
    if config.json_mode:
        _emit_json({"branches": [b.to_json_dict() for b in branches]})
    else:
        print(f"branches: {len(branches)}")
        for idx, b in enumerate(branches, start=1):
            exps = " ".join(str(e) for e in b.char_exponents) or "-"
            if b.complete:
                pairs = (
                    "{" + "; ".join(f"({m},{n})" for m, n in puiseux_pairs(b)) + "}"
                )
                state = "complete"
            else:
                pairs = "{?}"
                state = "incomplete"
            print(f"branch {idx}: char exponents {exps} pairs {pairs} {state}")
    if any(not b.complete for b in branches):
        print(
            "error: some branches hit the term budget before separating",
            file=sys.stderr,
        )
        return EXIT_NONCONVERGENCE
    return EXIT_OK


# -- campaign commands --------------------------------------------------------


def cmd_invariance(config: CliConfig) -> int:
    spec = CorpusSpec(seed=config.seed, count=config.count)
    report = invariance_report(
        spec,
        moves_per_germ=config.moves,
        max_steps=config.max_steps,
        generator_cap=config.generator_cap,
    )
    if config.json_mode:
        _emit_json(report.to_json_dict())
    else:
        print(f"germs: {spec.count}")
        print(f"moves per germ: {report.moves_per_germ}")
        print(f"cases: {len(report.cases)}")
        print(f"violations: {report.violation_count}")
        print(f"errors: {report.error_count}")
        for case in report.cases:
            for v in case.violations:
                print(f"  germ {case.germ_index} move {case.move_index}: {v}")
    return EXIT_VIOLATION if report.violation_count else EXIT_OK


def cmd_tangent(config: CliConfig) -> int:
    scales = tuple(2**j for j in range(config.m_exp + 1))
    grid = lattice_grid(2, config.grid_step)
    if config.preset == "unipotent":
        pair = unipotent_quadruple()
        report = theorem31_probe(
            pair.f, pair.phi, pair.psi, g=pair.g, grid=grid, m_sequence=scales
        )
    else:  # paper-f: f = x^4 + y^5 with identity changes
        f = germ_from_file(parse_germ_file(_GERM_PRESETS["paper-f"]))
        report = theorem31_probe(
            f, identity_germ(2), identity_germ(1), grid=grid, m_sequence=scales
        )
    if config.json_mode:
        _emit_json({"preset": config.preset, "k": report.k, "rows": report.to_json_rows()})
    else:
        print(f"preset: {config.preset}")
        print(f"k: {report.k}")
        for m, d1, d2, r in report.rows:
            print(f"m={m}: D1={d1!r} D2={d2!r} R={r!r}")
    return EXIT_OK


def cmd_corpus(config: CliConfig) -> int:
    spec = CorpusSpec(seed=config.seed, count=config.count)
    rows = []
    for index in range(spec.count):
        germ = random_germ(spec, index)
        row: dict = {"index": index, "components": describe_germ(germ)}
        try:
            symbol = boardman_symbol(
                germ,
                max_steps=config.max_steps,
                generator_cap=config.generator_cap,
            )
            row["order"] = germ.order()
            row["rank"] = germ.rank()
            row["symbol"] = symbol.to_json_dict()
            row["error"] = None
        except (ResourceLimitError, UndefinedInvariantError) as exc:
            row["order"] = row["rank"] = row["symbol"] = None
            row["error"] = str(exc)
        rows.append(row)
    if config.json_mode:
        _emit_json({"seed": spec.seed, "count": spec.count, "germs": rows})
    else:
        for row in rows:
            components = ", ".join(row["components"])
            if row["error"] is None:
                runs = row["symbol"]["runs"]
                tail = " ".join(
                    f"{v}x{'inf' if c is None else c}" for v, c in runs
                )
                print(
                    f"germ {row['index']}: ({components}) "
                    f"order={row['order']} rank={row['rank']} symbol runs {tail}"
                )
            else:
                print(f"germ {row['index']}: ({components}) error: {row['error']}")
    return EXIT_OK


_HANDLERS = {
    "invariants": cmd_invariants,
    "symbol": cmd_symbol,
    "hpart": cmd_hpart,
    "puiseux": cmd_puiseux,
    "invariance": cmd_invariance,
    "tangent": cmd_tangent,
    "corpus": cmd_corpus,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="germkit",
        description="invariants, Boardman symbols, and Puiseux data of map germs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def germ_input(p, presets):
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("-i", "--input", metavar="FILE",
                           help="germ file to read, or - for standard input")
        group.add_argument("--preset", choices=presets,
                           help="embedded demonstration germ")

    def json_flag(p):
        p.add_argument("--json", dest="json_mode", action="store_true",
                       help="emit JSON instead of text")

    def cap_flags(p):
        p.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS,
                       help="iteration ceiling for symbol computation")
        p.add_argument("--gen-cap", dest="generator_cap", type=int,
                       default=DEFAULT_GENERATOR_CAP,
                       help="generator-count ceiling per iteration step")

    germ_presets = sorted(_GERM_PRESETS)

    p = sub.add_parser("invariants", help="order, rank, first homogeneous part")
    germ_input(p, germ_presets)
    json_flag(p)

    p = sub.add_parser("symbol", help="Boardman symbol of a germ")
    germ_input(p, germ_presets)
    json_flag(p)
    cap_flags(p)
    p.add_argument("--expand", type=int, metavar="N",
                   help="also print the first N symbol entries")

    p = sub.add_parser("hpart", help="first homogeneous part only")
    germ_input(p, germ_presets)
    json_flag(p)

    p = sub.add_parser("puiseux", help="Puiseux branches and pairs of a plane curve")
    germ_input(p, germ_presets)
    json_flag(p)
    p.add_argument("--max-terms", type=int, default=DEFAULT_MAX_TERMS,
                   help="term budget per branch")
    p.add_argument("--swap", action="store_true",
                   help="solve y as a function of x instead of x in y")

    p = sub.add_parser("invariance", help="contact-move invariance campaign")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--count", type=int, default=200, help="corpus size")
    p.add_argument("--moves", type=int, default=10, help="moves per germ")
    json_flag(p)
    cap_flags(p)

    p = sub.add_parser("tangent", help="rescaling limit probe for a preset pair")
    p.add_argument("--preset", choices=["paper-f", "unipotent"],
                   default="unipotent")
    p.add_argument("--grid-step", type=float, default=DEFAULT_GRID_STEP)
    p.add_argument("--m-exp", dest="m_exp", type=int, default=20,
                   help="largest scale is 2 to this power")
    json_flag(p)

    p = sub.add_parser("corpus", help="list a seeded corpus with its invariants")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--count", type=int, default=5, help="corpus size")
    json_flag(p)
    cap_flags(p)

    return parser


def _config_from_args(args: argparse.Namespace) -> CliConfig:
    fields = {
        name: getattr(args, name)
        for name in CliConfig.__dataclass_fields__
        if hasattr(args, name)
    }
    return CliConfig(**fields)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    config = _config_from_args(args)
    try:
        return _HANDLERS[config.command](config)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (StructuralError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GermConditionError as exc:
        print(f"germ condition violated: {exc}", file=sys.stderr)
        return EXIT_GERM_CONDITION
    except UndefinedInvariantError as exc:
        print(f"undefined invariant: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except NonConvergenceError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except GermkitError as exc:  # pragma: no cover - safety net
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
