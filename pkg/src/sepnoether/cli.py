"""Command-line front end.

Exit codes: 0 success/MATCH, 1 internal error, 2 parse error, 3 cap
exceeded, 4 invalid input, 5 MISMATCH. Every numeric/path option can also be
set through an environment variable named SEPNOETHER_<OPTION>, e.g.
SEPNOETHER_WORKERS=4 or SEPNOETHER_CACHE_DIR=~/.cache/sepnoether; flags win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import abelian, cache
from . import blockmonoid as bm
from .abelian import GroupSpec
from .betasep import DEFAULT_SWEEP_CAP, BetaSepResult, SweepOptions, beta_sep, upper_bound
from .constructions import check_support_divisibility, construction, verify_theorems
from .errors import InvalidInput, ParseError, PreconditionError, SepNoetherError
from .lattice import is_group_atom, refute_by_scaling

log = logging.getLogger("sepnoether")

ENV_PREFIX = "SEPNOETHER_"
EXIT_MISMATCH = 5


@dataclass
class RunConfig:
    group: str
    elements: str | None = None
    max_len: int | None = None
    workers: int = 1
    symmetry: bool = False
    audit: bool = False
    output: str = "plain"
    cache_dir: Path | None = None
    node_cap: int = bm.DEFAULT_NODE_CAP
    sweep_cap: int = DEFAULT_SWEEP_CAP

    def __post_init__(self):
        if self.workers < 1:
            raise InvalidInput("--workers must be >= 1")
        if self.node_cap < 1 or self.sweep_cap < 1:
            raise InvalidInput("caps must be >= 1")
        if self.output not in ("plain", "json", "csv"):
            raise InvalidInput(f"unknown output format {self.output!r}")

    def sweep_options(self) -> SweepOptions:
        opts = SweepOptions.audit() if self.audit else SweepOptions(symmetry=self.symmetry)
        opts.workers = self.workers
        opts.node_cap = self.node_cap
        opts.sweep_cap = self.sweep_cap
        return opts


def _env(name: str, default=None, cast=str):
    raw = os.environ.get(ENV_PREFIX + name.upper())
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError as exc:
        raise ParseError(f"bad value for {ENV_PREFIX}{name.upper()}: {raw!r}") from exc


def _group(text: str, with_elements: bool = False) -> tuple[GroupSpec, str | None]:
    raw = abelian.parse_group_moduli(text)
    G = abelian.parse_group(text)
    notice = None
    if tuple(n for n in raw if n != 1) != G.moduli:
        notice = f"{text} canonicalized to {G.text()}"
        if with_elements:
            raise ParseError(f"{notice}; give the group in invariant-factor form ({G.text()}) when listing elements")
    return G, notice


def parse_vector(text: str) -> tuple[int, ...]:
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ParseError(f"vector must look like [11,1,3], got {text!r}")
    try:
        return tuple(int(x) for x in body[1:-1].split(",") if x.strip())
    except ValueError as exc:
        raise ParseError(f"cannot parse vector {text!r}") from exc


def _context(cfg: RunConfig) -> bm.Context:
    G, _ = _group(cfg.group, with_elements=cfg.elements is not None)
    if cfg.elements is None:
        return bm.full_group_context(G)
    return bm.Context(G, abelian.parse_elements(G, cfg.elements))


def _vec(v) -> str:
    return "[" + ",".join(map(str, v)) + "]"


def _emit(cfg: RunConfig, payload: dict, plain_lines: list[str], csv_rows: list[list]) -> None:
    if cfg.output == "json":
        print(json.dumps(payload, indent=2))
    elif cfg.output == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(csv_rows)
        sys.stdout.write(buf.getvalue())
    else:
        print("\n".join(plain_lines))


# ---------------------------------------------------------------------------
# commands


def cmd_group_info(cfg: RunConfig) -> int:
    G, notice = _group(cfg.group)
    info = {
        "schema": 1,
        "group": G.text(),
        "name": str(G),
        "rank": G.rank,
        "exponent": G.exponent,
        "order": G.order,
        "d_star": abelian.d_star(G),
        "upper_bound": upper_bound(G),
    }
    if notice:
        info["notice"] = notice
    lines = ([f"notice: {notice}"] if notice else []) + [
        f"group        {G} ({G.text()})",
        f"rank         {G.rank}",
        f"exponent     {G.exponent}",
        f"order        {G.order}",
        f"d*           {info['d_star']}",
        f"upper bound  {info['upper_bound']}  (floor(exp*(rank+1)/2))",
    ]
    rows = [["key", "value"]] + [[k, v] for k, v in info.items() if k != "schema"]
    _emit(cfg, info, lines, rows)
    return 0


def cmd_atoms(cfg: RunConfig, davenport: bool = False) -> int:
    if davenport:
        G, _ = _group(cfg.group)
        D = bm.davenport(G, node_cap=cfg.node_cap)
        payload = {"schema": 1, "group": G.text(), "davenport": D, "d_star_plus_one": abelian.d_star(G) + 1}
        _emit(cfg, payload, [f"D({G}) = {D}"], [["group", "davenport"], [G.text(), D]])
        return 0
    ctx = _context(cfg)
    atoms = bm.enumerate_atoms(ctx, cfg.max_len, node_cap=cfg.node_cap)
    payload = {
        "schema": 1,
        "group": ctx.group.text(),
        "elements": [list(g) for g in ctx.elements],
        "max_len": cfg.max_len,
        "count": len(atoms),
        "atoms": [{"vector": list(a), "length": bm.length(a)} for a in atoms],
    }
    lines = [f"{len(atoms)} atoms over {ctx.group} elements {' '.join(map(str, ctx.elements))}"]
    lines += [f"{_vec(a):<24} length {bm.length(a)}" for a in atoms]
    rows = [["vector", "length"]] + [[_vec(a), bm.length(a)] for a in atoms]
    _emit(cfg, payload, lines, rows)
    return 0


def cmd_group_atom(cfg: RunConfig, vector: str, refute_scaling: bool = False) -> int:
    if cfg.elements is None:
        raise ParseError("group-atom needs --elements")
    ctx = _context(cfg)
    m = parse_vector(vector)
    verdict = is_group_atom(ctx, m, node_cap=cfg.node_cap)
    payload = {
        "schema": 1,
        "group": ctx.group.text(),
        "elements": [list(g) for g in ctx.elements],
        "vector": list(m),
        "is_atom": bm.is_atom(ctx, m),
        "verdict": "GROUP-ATOM" if verdict.is_group_atom else "NOT",
        "generating_set_size": verdict.generating_set_size,
        "witness": verdict.witness.to_json() if verdict.witness else None,
    }
    lines = [payload["verdict"]]
    if verdict.witness:
        lines.append(f"witness: {verdict.witness}")
    if refute_scaling:
        try:
            ref = refute_by_scaling(ctx, m)
            payload["refute_scaling"] = {
                "ell": ref.ell,
                "ell_inverse": ref.ell_inverse,
                "branch": ref.branch,
                "decomposition": ref.decomposition.to_json(),
            }
            lines.append(f"scaling (l={ref.ell}): {ref.decomposition}")
        except PreconditionError as exc:
            payload["refute_scaling"] = {"error": str(exc)}
            lines.append(f"scaling refutation not applicable: {exc}")
    rows = [["verdict", "vector"], [payload["verdict"], _vec(m)]]
    _emit(cfg, payload, lines, rows)
    return 0


def _beta_sep_payload(G: GroupSpec, cfg: RunConfig) -> dict:
    opts = cfg.sweep_options()
    params = {
        "node_cap": cfg.node_cap,
        "sweep_cap": cfg.sweep_cap,
        "prune": opts.prune,
        "symmetry": opts.symmetry,
        "include_identity": opts.include_identity,
    }
    key = cache.cache_key(G, "beta-sep", params)
    if cfg.cache_dir is not None:
        hit = cache.load(cfg.cache_dir, key)
        if hit is not None:
            if cache.witness_reverifies(G, hit):
                log.info("serving %s from cache", G)
                return hit
            log.warning("cached result for %s failed re-verification; recomputing", G)
    result: BetaSepResult = beta_sep(G, opts)
    payload = result.to_json()
    if cfg.cache_dir is not None:
        cache.store(cfg.cache_dir, key, payload)
    return payload


def _batch_groups(path: str) -> list[str]:
    lines = Path(path).read_text().splitlines()
    return [ln.strip() for ln in lines if ln.strip() and not ln.strip().startswith("#")]


def cmd_beta_sep(cfg: RunConfig, batch: str | None = None) -> int:
    texts = _batch_groups(batch) if batch else [cfg.group]
    payloads = [_beta_sep_payload(_group(t)[0], cfg) for t in texts]
    rows = [["group", "beta_sep", "upper_bound", "witness_elements", "witness_vector", "subsets_examined", "elapsed_ms"]]
    lines = []
    for p in payloads:
        w = p["witness"]
        els = ";".join("(" + ",".join(map(str, g)) + ")" for g in w["elements"])
        rows.append([p["group"], p["beta_sep"], p["upper_bound"], els, _vec(w["vector"]), p["subsets_examined"], p["elapsed_ms"]])
        lines.append(
            f"beta_sep({p['group']}) = {p['beta_sep']}  (upper bound {p['upper_bound']}; "
            f"witness {_vec(w['vector'])} over {els}; {p['subsets_examined']} contexts, {p['elapsed_ms']} ms)"
        )
    _emit(cfg, payloads[0] if len(payloads) == 1 else {"schema": 1, "results": payloads}, lines, rows)
    return 0


def cmd_verify(cfg: RunConfig, batch: str | None = None) -> int:
    texts = _batch_groups(batch) if batch else [cfg.group]
    reports = [verify_theorems(_group(t)[0], cfg.sweep_options()) for t in texts]
    rows = [["group", "theorem", "applies", "closed_form", "computed", "status"]]
    lines = []
    for rep in reports:
        lines.append(
            f"{rep.group}: beta_sep = {rep.computed if rep.computed is not None else 'not computed'}; "
            f"bounds {rep.lower_bound} <= . <= {rep.upper_bound}; overall {rep.status}"
        )
        for e in rep.entries:
            rows.append([rep.group.text(), e["theorem"], e["applies"], e["closed_form"], e["computed"], e["status"]])
            closed = e["closed_form"] if e["closed_form"] is not None else "-"
            lines.append(f"  {e['theorem']:<11} applies={str(e['applies']):<5} closed={closed!s:<4} {e['status']}")
        lines.extend(f"  note: {n}" for n in rep.notes)
    payload = reports[0].to_json() if len(reports) == 1 else {"schema": 1, "results": [r.to_json() for r in reports]}
    _emit(cfg, payload, lines, rows)
    return EXIT_MISMATCH if any(r.status == "MISMATCH" for r in reports) else 0


def cmd_witness(cfg: RunConfig, prime: int | None = None) -> int:
    G, _ = _group(cfg.group)
    pkg = construction(G, prime)
    certified = pkg.verify(cfg.node_cap)
    divisibility = check_support_divisibility(pkg, pkg.cert_divisor, cfg.node_cap)
    payload = pkg.to_json() | {"certified": certified, "support_divisibility": divisibility}
    els = ";".join("(" + ",".join(map(str, g)) + ")" for g in pkg.ctx.elements)
    lines = [
        f"{pkg.table} table for {G}: elements {els}",
        f"m = {_vec(pkg.m)}, length {pkg.claimed_length}",
        f"certificate ({pkg.certificate_kind}, i={pkg.cert_index}, d={pkg.cert_divisor}): {'certified' if certified else 'FAILED'}",
        f"sub-support divisibility by {pkg.cert_divisor}: {'ok' if divisibility else 'FAILED'}",
    ]
    rows = [["group", "vector", "length", "certified"], [G.text(), _vec(pkg.m), pkg.claimed_length, certified]]
    _emit(cfg, payload, lines, rows)
    return 0 if certified and divisibility else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", required=True, help="e.g. '12,4' or 'C12xC4'")
    common.add_argument("--output", choices=["plain", "json", "csv"], default=_env("output", "plain"))
    common.add_argument("--node-cap", type=int, default=_env("node_cap", bm.DEFAULT_NODE_CAP, int))
    common.add_argument("--sweep-cap", type=int, default=_env("sweep_cap", DEFAULT_SWEEP_CAP, int))
    common.add_argument("-v", "--verbose", action="store_true")

    sweep = argparse.ArgumentParser(add_help=False)
    sweep.add_argument("--workers", type=int, default=_env("workers", 1, int))
    sweep.add_argument("--symmetry", action="store_true", help="visit one context per Aut(G)-orbit")
    sweep.add_argument("--audit", action="store_true", help="disable all prunings")
    sweep.add_argument("--cache-dir", type=Path, default=_env("cache_dir", None, Path))
    sweep.add_argument("--batch", help="file with one group spec per line")

    ctx = argparse.ArgumentParser(add_help=False)
    ctx.add_argument("--elements", help="e.g. '(1,0);(1,1);(0,1)'")

    parser = argparse.ArgumentParser(prog="sepnoether", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("group-info", parents=[common], help="structural constants of G")
    p = sub.add_parser("atoms", parents=[common, ctx], help="atoms of a block monoid")
    p.add_argument("--max-len", type=int)
    p.add_argument("--davenport", action="store_true", help="compute D(G) over all nonzero elements")
    p = sub.add_parser("group-atom", parents=[common, ctx], help="group-atom test with witness")
    p.add_argument("--vector", required=True, help="e.g. '[11,1,3]'")
    p.add_argument("--refute-scaling", action="store_true")
    sub.add_parser("beta-sep", parents=[common, sweep], help="exhaustive beta_sep(G)")
    sub.add_parser("verify", parents=[common, sweep], help="compare beta_sep with the closed forms")
    p = sub.add_parser("witness", parents=[common], help="explicit long group atom")
    p.add_argument("--prime", type=int)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        parser = build_parser()
    except SepNoetherError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = RunConfig(
            group=args.group,
            elements=getattr(args, "elements", None),
            max_len=getattr(args, "max_len", None),
            workers=getattr(args, "workers", 1),
            symmetry=getattr(args, "symmetry", False),
            audit=getattr(args, "audit", False),
            output=args.output,
            cache_dir=getattr(args, "cache_dir", None),
            node_cap=args.node_cap,
            sweep_cap=args.sweep_cap,
        )
        if args.command == "group-info":
            return cmd_group_info(cfg)
        if args.command == "atoms":
            return cmd_atoms(cfg, davenport=args.davenport)
        if args.command == "group-atom":
            return cmd_group_atom(cfg, args.vector, args.refute_scaling)
        if args.command == "beta-sep":
            return cmd_beta_sep(cfg, args.batch)
        if args.command == "verify":
            return cmd_verify(cfg, args.batch)
        if args.command == "witness":
            return cmd_witness(cfg, args.prime)
    except SepNoetherError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    parser.error(f"unknown command {args.command}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
