"""Command line entry point: ``exotic4 <subcommand> ...`` or ``python -m exotic4``."""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import rbd, swcalc, words
from .scenario import ScenarioError, report_json, report_text, run_scenario

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


_CHAIN_TOKEN = re.compile(r"[(\[]?-?\d+(?:[x×*]\d+)?(?:,-?\d+(?:[x×*]\d+)?)*[)\]]?,?")


def _protect_chain(argv: list[str]) -> list[str]:
    # entries like -2x14 would otherwise be taken for option flags
    if not argv or argv[0] != "identify" or "--" in argv:
        return argv
    chain = [t for t in argv[1:] if _CHAIN_TOKEN.fullmatch(t)]
    rest = [t for t in argv[1:] if not _CHAIN_TOKEN.fullmatch(t)]
    return [argv[0], *rest, "--", *chain]


def parse_chain(tokens: list[str]) -> list[int]:
    """Accept '-18 -2x14', '-18,-2×14' or plain integers."""
    out = []
    for tok in re.split(r"[\s,]+", " ".join(tokens).strip(" ()[]")):
        if not tok:
            continue
        m = re.fullmatch(r"(-?\d+)(?:[x×\*](\d+))?", tok)
        if m is None:
            raise ValueError(f"bad chain entry {tok!r}")
        out.extend([int(m.group(1))] * int(m.group(2) or 1))
    return out


def _emit(args, payload: dict, text: str) -> None:
    out = json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n" if args.json else text
    sys.stdout.write(out)
    if getattr(args, "report", None):
        Path(args.report).write_text(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8")


def cmd_verify_word(args) -> int:
    u, v = words.parse_word(args.word1), words.parse_word(args.word2)
    mu, mv = words.eval_word(u), words.eval_word(v)
    ok = mu == mv
    payload = {"word1": str(u), "word2": str(v), "matrix1": mu.rows(), "matrix2": mv.rows(), "equivalent": ok}
    _emit(args, payload, f"{u} -> {mu.rows()}\n{v} -> {mv.rows()}\n{'pass' if ok else 'fail'}: "
                         f"{'equal' if ok else 'different'} in SL(2,Z)\n")
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_collect(args) -> int:
    f = words.collect_a_powers(args.word)
    summary = words.factorization_summary(f)
    lines = [f"a^{f.a_power}"]
    for blk in summary["blocks"]:
        lines.append(f"  ({blk['conjugator']}) b^{blk['multiplicity']} ({blk['conjugator']})^-1   cycle {tuple(blk['cycle'])}")
    lines.append("fibers: " + " ".join(summary["fibers"]) + f"   twists: {summary['twists']}")
    _emit(args, summary, "\n".join(lines) + "\n")
    return EXIT_PASS


def cmd_chain(args) -> int:
    chain = rbd.cpq_chain(rbd.CpqLabel(args.p, args.q))
    payload = {"p": args.p, "q": args.q, "chain": list(chain.coefficients), "length": len(chain),
               "abs_det": abs(rbd.chain_determinant(chain))}
    _emit(args, payload, f"{chain}\n")
    return EXIT_PASS


def cmd_identify(args) -> int:
    chain = rbd.PlumbingChain(tuple(parse_chain(args.chain)))
    label = rbd.identify_cpq(chain)
    payload = {"chain": list(chain.coefficients), "p": label and label.p, "q": label and label.q}
    text = f"C_({label.p},{label.q})\n" if label else "not a C_(p,q) chain\n"
    _emit(args, payload, text)
    return EXIT_PASS if label else EXIT_FAIL


def cmd_sw(args) -> int:
    sw = swcalc.triple_surgery_sw(args.twist, args.surgeries)
    if args.blowups:
        sw = swcalc.blow_up_sw(sw, args.blowups)
    top_exps, top_val = max(sw.poly.items())
    payload = {
        "twist": args.twist,
        "surgeries": args.surgeries,
        "blowups": args.blowups,
        "sw": sw.to_dict(),
        "top_value": top_val,
        "top_class": dict(zip(sw.poly.variables, top_exps)),
    }
    factors = "".join(f" * ({e} + {e}^-1)" for e in sw.exceptional)
    text = (f"SW = ({sw.poly}){factors}\n"
            f"basic classes: {sw.basic_class_count}\n"
            f"top value: {top_val}\n")
    _emit(args, payload, text)
    return EXIT_PASS


def cmd_run(args) -> int:
    report = run_scenario(args.scenario)
    text = report_json(report) if args.json else report_text(report)
    sys.stdout.write(text)
    if args.report:
        Path(args.report).write_text(report_json(report), encoding="utf-8")
    return EXIT_PASS if report["verdict"] == "pass" else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="exotic4", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--report", metavar="PATH", help="also write the JSON result to PATH")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify-word", parents=[common], help="compare two words in SL(2,Z)")
    p.add_argument("word1")
    p.add_argument("word2")
    p.set_defaults(func=cmd_verify_word)

    p = sub.add_parser("collect", parents=[common], help="collect the powers of a in a positive word")
    p.add_argument("word")
    p.set_defaults(func=cmd_collect)

    p = sub.add_parser("chain", parents=[common], help="plumbing chain of C_(p,q)")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("identify", parents=[common], help="recognize a chain as C_(p,q)")
    p.add_argument("chain", nargs="+")
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("sw", parents=[common], help="SW function after twist-knot surgeries and blow-ups")
    p.add_argument("--twist", type=int, required=True)
    p.add_argument("--surgeries", type=int, default=3)
    p.add_argument("--blowups", type=int, default=0)
    p.set_defaults(func=cmd_sw)

    p = sub.add_parser("run", parents=[common], help="run a scenario file")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_run)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_protect_chain(argv))
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
