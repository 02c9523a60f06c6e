"""Command-line front end: ``blochlab compute | verify | suite``.

Exit codes: 0 success, 1 a check failed, 2 bad input (ring syntax or
usage), 3 a size cap was hit, 4 an internal consistency error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import __version__
from .bloch import bloch_report, identity_battery, parse_targets
from .config import Caps, default_caps, parse_caps
from .errors import (GenerationIncomplete, IllDefined, NotAHom, NotStable, ParseError,
                     TooLarge)
from .rings import FiniteRing, parse_ring
from .suite import DEFAULT_CORPUS, run_suite, suite_json

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_TOO_LARGE, EXIT_INTERNAL = 0, 1, 2, 3, 4
SCHEMA = "1"


@dataclass
class RunConfig:
    ring_spec: str
    targets: list
    output: str | None = None
    format: str = "json"
    caps: Caps = Caps()
    threads: int = 1


def render_report(ring: FiniteRing, targets, fmt: str = "json") -> str:
    body = bloch_report(ring, targets)
    body["meta"] = {"schema": SCHEMA, "version": __version__, "targets": list(targets)}
    if fmt == "json":
        return json.dumps(body, sort_keys=True, indent=2) + "\n"
    return _as_text(body)


def _as_text(body: dict) -> str:
    lines = [f"ring {body['ring']['spec']}: |A| = {body['ring']['size']}, "
             f"{body['ring']['units']} units, wn = {{{', '.join(body['ring']['wn'])}}}"]
    for name, g in sorted(body["groups"].items()):
        if name == "homology":
            for h, rec in sorted(g.items()):
                lines.append(f"  {h} = {rec['description']}")
            continue
        extra = ""
        if g.get("generated_by"):
            extra = f"  (generated by {g['generated_by'][0]})"
        lines.append(f"  {name} = {g['description']}{extra}")
    for group, elems in sorted(body["elements"].items()):
        for name, e in sorted(elems.items()):
            lines.append(f"    {group}: {name} has order {e['order']}")
    for name, m in sorted(body["maps"].items()):
        lines.append(f"  {name}: {json.dumps(m, sort_keys=True)}")
    if body["battery"]:
        b = body["battery"]
        lines.append(f"  battery: {b['total'] - len(b['failures'])}/{b['total']} passed")
    return "\n".join(lines) + "\n"


def _write(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_compute(cfg: RunConfig) -> int:
    ring = parse_ring(cfg.ring_spec, cfg.caps)
    cfg.caps.check(f"ring {cfg.ring_spec}", ring.size, "ring")
    _write(render_report(ring, cfg.targets, cfg.format), cfg.output)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    ring = parse_ring(cfg.ring_spec, cfg.caps)
    cfg.caps.check(f"ring {cfg.ring_spec}", ring.size, "ring")
    rep = identity_battery(ring)
    if cfg.format == "json":
        body = {"meta": {"schema": SCHEMA, "version": __version__}, "ring": ring.spec_string,
                "checks": [{"identity": c.identity, "params": c.params, "passed": c.passed}
                           for c in rep.checks],
                "summary": rep.summary(), "ok": rep.ok}
        text = json.dumps(body, sort_keys=True, indent=2) + "\n"
    else:
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.identity}  {c.params}".rstrip() for c in rep.checks]
        if not any(c.identity == "C expansion" for c in rep.checks):
            lines.append("note: wn(A) is empty, so the [x]-identities hold vacuously")
        lines.append(f"{len(rep.checks) - len(rep.failures)}/{len(rep.checks)} passed")
        text = "\n".join(lines) + "\n"
    _write(text, cfg.output)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_suite(corpus, threads: int = 1, caps: Caps | None = None, output: str | None = None,
              fmt: str = "json") -> int:
    if not corpus:
        raise ValueError("the corpus is empty")
    result = run_suite(list(corpus), threads, caps)
    acyc = result.pop("acyclicity_by_ring")
    body = {"meta": {"schema": SCHEMA, "version": __version__}, "corpus": list(corpus),
            "criteria": result, "acyclicity_by_ring": acyc,
            "ok": all(v["passed"] for v in result.values())}
    if fmt == "json":
        text = suite_json(body) + "\n"
    else:
        text = "\n".join(f"criterion {n:>2} [{'PASS' if v['passed'] else 'FAIL'}] {v['title']}"
                         for n, v in sorted(result.items(), key=lambda kv: int(kv[0]))) + "\n"
    _write(text, output)
    return EXIT_OK if body["ok"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="blochlab", description="Refined Bloch groups of small finite rings.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--output", "-o", help="write to this file instead of stdout")
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--caps", default="", help="cap overrides, e.g. ring=81,cliques=100000")

    c = sub.add_parser("compute", help="compute groups and elements for one ring")
    c.add_argument("--ring", required=True)
    c.add_argument("--targets", default="rp,pb")
    common(c)
    v = sub.add_parser("verify", help="run the identity battery for one ring")
    v.add_argument("--ring", required=True)
    common(v)
    s = sub.add_parser("suite", help="run the acceptance criteria over a corpus")
    s.add_argument("--corpus", default=",".join(DEFAULT_CORPUS),
                   help="ring specs separated by ';' or ','")
    common(s)
    return p


def _split_corpus(text: str) -> list:
    # ring specs may contain commas only inside parentheses
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch in ",;" and depth == 0:
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    out.append(cur.strip())
    return [s for s in out if s]


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        caps = parse_caps(args.caps, default_caps())
    except ValueError as e:
        parser.error(str(e))
    if args.threads < 1:
        parser.error("--threads must be positive")
    try:
        if args.command == "suite":
            corpus = _split_corpus(args.corpus)
            if not corpus:
                parser.error("the corpus is empty")
            return cmd_suite(corpus, args.threads, caps, args.output, args.format)
        targets = ["battery"] if args.command == "verify" else None
        if args.command == "compute":
            try:
                targets = parse_targets(args.targets)
            except ValueError as e:
                parser.error(str(e))
        cfg = RunConfig(args.ring, targets, args.output, args.format, caps, args.threads)
        return cmd_compute(cfg) if args.command == "compute" else cmd_verify(cfg)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except TooLarge as e:
        print(f"too large: {e}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except (IllDefined, GenerationIncomplete, NotStable, NotAHom, AssertionError) as e:
        print(f"internal error ({type(e).__name__}): {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
