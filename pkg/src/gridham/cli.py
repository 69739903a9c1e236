"""Command-line front end.

Exit codes: 0 Hamiltonian (or success for commands without a verdict),
1 not Hamiltonian, 2 bad input or a failed run.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import __version__
from . import generators as gen
from .cover import CycleCover, NoCover
from .grid import GridError, GridGraph, parse_grid, to_mask
from .hamilton import is_hamiltonian, search_all_components
from .height import render_ascii
from .oracle import CapExceeded, DEFAULT_CAP, enumerate_covers, min_cycles_bruteforce, z_components
from .render import render_svg
from .sampler import (
    EmptyTarget,
    MarkovChain,
    NotHamiltonian,
    RestartsExhausted,
    SamplerConfig,
    sample_hamiltonian,
    start_cover,
)

log = logging.getLogger("gridham")


class InputError(Exception):
    pass


@dataclass
class RunResult:
    command: list[str]
    instance: str | None
    payload: dict[str, Any]
    config: dict[str, Any] = field(default_factory=dict)
    timing: dict[str, float] | None = None
    version: str = __version__
    exit_code: int = 0

    def to_json(self) -> str:
        body = {
            "command": self.command,
            "instance": self.instance,
            "payload": self.payload,
            "config": self.config,
            "timing": self.timing,
            "version": self.version,
        }
        return json.dumps(body, sort_keys=True, indent=2) + "\n"


def instance_hash(g: GridGraph) -> str:
    return "sha256:" + hashlib.sha256(to_mask(g.normalized()).encode()).hexdigest()


def read_instance(path: str) -> GridGraph:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return parse_grid(text)
    except GridError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _parse_component(text: str | None) -> tuple[int, ...] | None:
    if text is None:
        return None
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise InputError(f"bad component signature {text!r}; expected comma separated integers") from exc


def _points(pts) -> list[list[int]]:
    return [[p[0], p[1]] for p in pts]


# ---------------------------------------------------------------- commands


def cmd_check(args) -> RunResult:
    g = read_instance(args.path)
    verdict = is_hamiltonian(g, jobs=args.jobs)
    payload: dict[str, Any] = {"hamiltonian": verdict.hamiltonian, "reason": verdict.reason}
    if verdict.cycle is not None:
        payload["cycle"] = _points(verdict.cycle)
    elif verdict.search is not None:
        payload["minimum"] = verdict.search.minimum
        payload["certificates"] = [c.to_json() for c in verdict.search.components]
    return RunResult([], instance_hash(g), payload, exit_code=0 if verdict.hamiltonian else 1)


def cmd_mincycles(args) -> RunResult:
    g = read_instance(args.path)
    try:
        res = search_all_components(g, jobs=args.jobs)
    except NoCover as exc:
        raise InputError(f"no cycle cover: {exc}") from exc
    payload = {
        "minimum": res.minimum,
        "witness": res.witness.to_json(),
        "components": [{"signature": list(c.signature), "p": c.p} for c in res.components],
    }
    return RunResult([], instance_hash(g), payload, exit_code=0 if res.minimum == 1 else 1)


def _generate(args) -> GridGraph:
    ps = args.params
    fam = args.family

    def need(n: int, names: str) -> list[int]:
        if len(ps) != n:
            raise InputError(f"{fam} takes {n} parameter(s): {names}")
        return ps

    try:
        if fam == "rect":
            w, h = need(2, "width height")
            return gen.rectangle(w, h)
        if fam == "aztec":
            (n,) = need(1, "n")
            return gen.aztec(n)
        if fam == "chipped-aztec":
            n, k = need(2, "n k")
            return gen.chipped_aztec(n, k, args.seed)
        if fam == "tower":
            stages = ps[0] if ps else 3
            return gen.tower(3, stages)
        if fam == "random-polyomino":
            (cells,) = need(1, "cells")
            if args.holes:
                return gen.holed_polyomino(cells, args.holes, args.seed)
            return gen.random_polyomino(cells, args.seed)
    except gen.InvalidParams as exc:
        raise InputError(str(exc)) from exc
    raise InputError(f"unknown family {fam!r}")


def cmd_gen(args) -> RunResult:
    g = _generate(args)
    mask = to_mask(g)
    return RunResult([], instance_hash(g), {"mask": mask, "vertices": len(g.points)})


def _chain_job(job) -> dict:
    g, start_mask, seed, burnin, steps = job
    chain = MarkovChain(CycleCover.from_mask(g, start_mask), seed)
    chain.run(burnin)
    ones = 0
    for _ in range(steps):
        chain.step()
        ones += chain.p == 1
    meta = chain.metadata()
    meta["ones_after_burnin"] = ones
    meta["final"] = CycleCover.from_mask(g, chain.mask).to_json()
    return meta


def _chain_seeds(seed: int, count: int) -> list[int]:
    if count == 1:
        return [seed]
    rng = random.Random(seed)
    return [rng.getrandbits(64) for _ in range(count)]


def _run_chains(g: GridGraph, component, cfg: SamplerConfig, chains: int, jobs: int) -> list[dict]:
    try:
        start = start_cover(g, component)
    except NoCover as exc:
        raise InputError(f"no cycle cover: {exc}") from exc
    work = [(g, start.mask, s, cfg.burnin_for(g), cfg.steps) for s in _chain_seeds(cfg.seed, chains)]
    if jobs > 1 and chains > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_chain_job, work))
    return [_chain_job(w) for w in work]


def _sampler_config(args) -> SamplerConfig:
    try:
        return SamplerConfig(seed=args.seed, steps=args.steps, burnin=args.burnin, max_restarts=args.restarts)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def cmd_sample(args) -> RunResult:
    g = read_instance(args.path)
    cfg = _sampler_config(args)
    component = _parse_component(args.component)
    config = {"seed": cfg.seed, "steps": cfg.steps, "burnin": cfg.burnin_for(g), "chains": args.chains}
    if args.hamiltonian:
        try:
            cover, chain = sample_hamiltonian(g, component, cfg)
        except (NotHamiltonian, RestartsExhausted) as exc:
            raise InputError(str(exc)) from exc
        payload = {"cover": cover.to_json(), "run": chain.metadata()}
        return RunResult([], instance_hash(g), payload, config)
    runs = _run_chains(g, component, cfg, args.chains, args.jobs)
    samples = [r.pop("final") for r in runs]
    for r in runs:
        r.pop("ones_after_burnin")
    return RunResult([], instance_hash(g), {"samples": samples, "runs": runs}, config)


def cmd_estimate(args) -> RunResult:
    g = read_instance(args.path)
    cfg = _sampler_config(args)
    component = _parse_component(args.component)
    runs = _run_chains(g, component, cfg, args.chains, args.jobs)
    ones = sum(r.pop("ones_after_burnin") for r in runs)
    for r in runs:
        r.pop("final")
    total = cfg.steps * len(runs)
    payload = {"ratio": ones / total, "samples": total, "runs": runs}
    config = {"seed": cfg.seed, "steps": cfg.steps, "burnin": cfg.burnin_for(g), "chains": args.chains}
    return RunResult([], instance_hash(g), payload, config)


def _load_cover(g: GridGraph, path: str) -> CycleCover:
    try:
        data = json.load(sys.stdin if path == "-" else open(path, encoding="utf-8"))
        if "cover" in data:
            data = data["cover"]
        return CycleCover.from_point_pairs(g, [(tuple(a), tuple(b)) for a, b in data["edges"]])
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: not a cover: {exc}") from exc


def cmd_render(args) -> RunResult:
    g = read_instance(args.path)
    if args.cover:
        cover = _load_cover(g, args.cover)
    else:
        try:
            cover = search_all_components(g, jobs=args.jobs).witness
        except NoCover as exc:
            raise InputError(f"no cycle cover: {exc}") from exc
    picture = render_svg(cover) if args.svg else render_ascii(cover)
    return RunResult([], instance_hash(g), {"format": "svg" if args.svg else "text", "picture": picture})


def cmd_oracle(args) -> RunResult:
    g = read_instance(args.path)
    cap = None if args.cap == 0 else args.cap
    try:
        cat = enumerate_covers(g, cap)
    except CapExceeded as exc:
        raise InputError(str(exc)) from exc
    by_p: dict[str, int] = {}
    for p in cat.p:
        by_p[str(p)] = by_p.get(str(p), 0) + 1
    payload: dict[str, Any] = {"covers": len(cat), "by_cycles": dict(sorted(by_p.items(), key=lambda kv: int(kv[0])))}
    if len(cat):
        comps = z_components(cat, distances=False)
        mins = min_cycles_bruteforce(cat, comps)
        payload["minimum"] = mins.overall
        payload["components"] = comps.count
        payload["hamiltonian_cycles"] = by_p.get("1", 0)
    if args.dump:
        payload["dump"] = cat.dump()
    return RunResult([], instance_hash(g), payload, {"cap": cap})


# ---------------------------------------------------------------- text output


def _text(command: str, res: RunResult) -> str:
    p = res.payload
    if command == "gen":
        return p["mask"]
    if command == "render":
        return p["picture"]
    if command == "check":
        lines = ["hamiltonian" if p["hamiltonian"] else f"not hamiltonian: {p['reason']}"]
        if "cycle" in p:
            lines.append(" ".join(f"({x},{y})" for x, y in p["cycle"]))
        return "\n".join(lines) + "\n"
    if command == "mincycles":
        lines = [f"minimum cycles: {p['minimum']}"]
        for c in p["components"]:
            sig = ",".join(map(str, c["signature"])) or "-"
            lines.append(f"  component {sig}: {c['p']}")
        return "\n".join(lines) + "\n"
    if command == "sample":
        if "cover" in p:
            covers = [p["cover"]]
        else:
            covers = p["samples"]
        return "".join(f"p={c['p']} cycles={json.dumps(c['cycles'])}\n" for c in covers)
    if command == "estimate":
        return f"ratio {p['ratio']:.6f} over {p['samples']} steps\n"
    if command == "oracle":
        lines = [f"covers: {p['covers']}"]
        for k, v in p["by_cycles"].items():
            lines.append(f"  {k} cycle(s): {v}")
        if "minimum" in p:
            lines.append(f"minimum: {p['minimum']}  components: {p['components']}")
        out = "\n".join(lines) + "\n"
        return out + p["dump"] if "dump" in p else out
    return json.dumps(p, sort_keys=True) + "\n"


# ---------------------------------------------------------------- parser


COMMANDS = {
    "check": cmd_check,
    "mincycles": cmd_mincycles,
    "gen": cmd_gen,
    "sample": cmd_sample,
    "estimate": cmd_estimate,
    "render": cmd_render,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing in JSON output")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")

    chain = argparse.ArgumentParser(add_help=False)
    chain.add_argument("--seed", type=int, default=0)
    chain.add_argument("--steps", type=int, default=10_000)
    chain.add_argument("--burnin", type=int, default=None, help="default 10 * squares^2")
    chain.add_argument("--chains", type=int, default=1, help="independent chains")
    chain.add_argument("--component", default=None, help="hole-value signature, e.g. '2,-1'")

    parser = argparse.ArgumentParser(prog="gridham", description="Hamiltonian cycles and cycle covers of grid graphs")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="decide Hamiltonicity")
    p.add_argument("path")
    p = sub.add_parser("mincycles", parents=[common], help="fewest cycles in a cover, per component")
    p.add_argument("path")

    p = sub.add_parser("gen", parents=[common], help="generate an instance mask")
    p.add_argument("family", choices=gen.FAMILIES)
    p.add_argument("params", nargs="*", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--holes", type=int, default=0, choices=(0, 1, 2))

    p = sub.add_parser("sample", parents=[common, chain], help="run the cover Markov chain")
    p.add_argument("path")
    p.add_argument("--hamiltonian", action="store_true", help="return a Hamiltonian cycle, checking once per burn-in period")
    p.add_argument("--restarts", type=int, default=100, help="extra burn-in periods to try with --hamiltonian")
    p = sub.add_parser("estimate", parents=[common, chain], help="fraction of chain time on Hamiltonian cycles")
    p.add_argument("path")
    p.set_defaults(restarts=100)

    p = sub.add_parser("render", parents=[common], help="draw a cover with height labels")
    p.add_argument("path")
    p.add_argument("--cover", default=None, help="cover JSON (edges list); default is a fewest-cycles cover")
    p.add_argument("--svg", action="store_true")

    p = sub.add_parser("oracle", parents=[common], help="brute-force enumeration of all covers")
    p.add_argument("path")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="edge cap, 0 for none")
    p.add_argument("--dump", action="store_true", help="include the hex catalog dump")
    return parser


def _setup_logging() -> None:
    level = os.environ.get("GRIDHAM_LOG")
    if not level:
        return
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.DEBUG),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def main(argv: Sequence[str] | None = None) -> int:
    _setup_logging()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        res = COMMANDS[args.command](args)
    except (InputError, EmptyTarget) as exc:
        print(f"gridham {args.command}: {exc}", file=sys.stderr)
        return 2
    res.command = argv
    if args.timing:
        res.timing = {"seconds": round(time.perf_counter() - t0, 6)}
    log.debug("%s finished in %.3fs", args.command, time.perf_counter() - t0)
    out = res.to_json() if args.format == "json" else _text(args.command, res)
    sys.stdout.write(out)
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
