"""Command line driver: ``trackalg <subcommand> ...``.

Exit status: 0 when every requested check passes, 2 when a law fails (the
report is still written), 1 on input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .laws import DEFAULT_SEED, _jsonable, default_budget, replaying

REPORT_SCHEMA = "trackalg/report"
REPORT_VERSION = 1

EXIT_OK, EXIT_INPUT, EXIT_LAW = 0, 1, 2


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers


def _load(path):
    from .instance_io import FormatError, SchemaViolation, load_instance
    from .trackcat import InstanceError

    try:
        return load_instance(path)
    except FileNotFoundError as e:
        raise InputError(f"unreadable file: {e}") from None
    except SchemaViolation as e:
        raise InputError(f"schema violation in {path} {e}") from None
    except FormatError as e:
        raise InputError(f"malformed instance file: {e}") from None
    except InstanceError as e:
        raise InputError(f"invalid instance {path}: {e}") from None


def _require_valid(inst, args):
    from .trackcat import axiom_check

    rep = axiom_check(inst.T, args.budget, args.seed)
    if not rep.passed:
        raise InputError(f"instance {inst.T.name} fails axiom_check; run `trackalg validate` for the report")


def _section(obj) -> dict:
    return obj.to_dict()


def _selector(inst, token: str):
    """A named 0-cell or a literal ``A>B:c1.c2...``."""
    if token in inst.named:
        return inst.named[token]
    if ">" in token and ":" in token:
        head, coords = token.split(":", 1)
        A, B = head.split(">", 1)
        objs = {str(o): o for o in inst.T.objects}
        if A not in objs or B not in objs:
            raise InputError(f"class selector {token!r}: unknown object")
        try:
            v = tuple(int(c) for c in coords.split(".")) if coords else ()
        except ValueError:
            raise InputError(f"class selector {token!r}: coordinates must be integers") from None
        A, B = objs[A], objs[B]
        if not inst.T.hom(A, B).c0.contains(v):
            raise InputError(f"class selector {token!r}: not a 0-cell of ({A}, {B})")
        return A, B, v
    raise InputError(f"class selector {token!r}: no such named element")


def _pseudo(inst, ring: str, p: int | None):
    from .pseudo import PreconditionError, build_pseudo_integral, build_pseudo_padic

    if inst.graph is None:
        raise InputError("instance has no generator graph ('graph' and 'lift' sections)")
    if inst.G is None:
        raise InputError("instance has no linearity system ('linearity' section)")
    try:
        if ring == "zpp":
            return build_pseudo_padic(inst.graph, inst.lift, inst.T, inst.G, p)
        return build_pseudo_integral(inst.graph, inst.lift, inst.T, inst.G)
    except PreconditionError as e:
        raise InputError(f"precondition failed: {e}") from None


def _config(args, **extra) -> dict:
    cfg = {"instance": getattr(args, "instance", None), "seed": args.seed, "budget": args.budget}
    cfg.update(extra)
    return {k: v for k, v in cfg.items() if v is not None}


# ---------------------------------------------------------------------------
# subcommands; each returns (passed, sections, lines)


def cmd_validate(args):
    from .linearity import verify_linearity
    from .trackcat import axiom_check

    inst = _load(args.instance)
    sections, lines = {}, []
    rep = axiom_check(inst.T, args.budget, args.seed)
    sections["axioms"] = _section(rep)
    lines.append(rep.summary())
    passed = rep.passed
    if inst.G is not None:
        lrep = verify_linearity(inst.T, inst.G, args.budget, args.seed)
        sections["linearity"] = _section(lrep)
        lines.append(lrep.summary())
        if lrep.info.get("equations"):
            lines.append(f"{lrep.info['equations']} linearity equations passed")
        passed = passed and lrep.passed
    return passed, sections, lines, _config(args)


def cmd_linearity(args):
    from .linearity import check_integer_laws, check_iterated_laws, check_torsion, verify_linearity

    inst = _load(args.instance)
    if inst.G is None:
        raise InputError("instance has no linearity system ('linearity' section)")
    T, G = inst.T, inst.G
    p = inst.pipeline.get("p")
    reps = [verify_linearity(T, G, args.budget, args.seed),
            check_integer_laws(T, G, 3, p),
            check_iterated_laws(T, G, args.n_max, args.budget, args.seed)]
    sections = {r.title.split("[")[0]: _section(r) for r in reps}
    lines = [r.summary() for r in reps]
    passed = all(r.passed for r in reps)
    if p is not None:
        t = check_torsion(T, p)
        sections["torsion"] = t.to_dict()
        lines.append(f"{'PASS' if t.passed else 'FAIL'} {t.name}" + (f" ({t.note})" if t.note else ""))
        passed = passed and t.passed
    return passed, sections, lines, _config(args, n_max=args.n_max, p=p)


def cmd_strictify(args):
    from .strictify import StrictifyError, strictify_pipeline

    inst = _load(args.instance)
    _require_valid(inst, args)
    ring = args.ring or inst.pipeline.get("ring", "zpp")
    p = inst.pipeline.get("p", 2)
    wb = args.word_bound if args.word_bound is not None else inst.pipeline.get("word_bound", 2)
    if inst.graph is None:
        raise InputError("instance has no generator graph ('graph' and 'lift' sections)")
    try:
        d = strictify_pipeline(inst.T, inst.G, inst.graph, inst.lift, ring, p, wb, budget=args.budget,
                               seed=args.seed)
    except StrictifyError as e:
        raise InputError(f"strictification precondition failed: {e}") from None
    return d.passed, {"dossier": d.to_dict()}, [d.summary()], _config(args, ring=ring, p=p, word_bound=wb)


def cmd_brackets(args):
    from .brackets import BracketError, make_problem, massey_product, toda_bracket, transfer_check
    from .strictify import FiniteDG

    inst = _load(args.instance)
    _require_valid(inst, args)
    T = inst.T
    tokens = [t for t in (args.classes or "").split(",") if t]
    if len(tokens) != 3:
        raise InputError("--classes needs exactly three selectors x1,x2,x3")
    (A1, B1, x1), (A2, B2, x2), (A3, B3, x3) = (_selector(inst, t) for t in tokens)
    if A1 != B2 or A2 != B3:
        raise InputError("class selectors are not composable: need x1: Y1 -> Y0, x2: Y2 -> Y1, x3: Y3 -> Y2")
    objects = (A3, A2, A1, B1)
    try:
        problem = make_problem(T, objects, [T.h0_class(A1, B1, x1), T.h0_class(A2, B2, x2),
                                             T.h0_class(A3, B3, x3)])
    except BracketError as e:
        raise InputError(f"bracket problem rejected: {e}") from None
    sections, lines, findings = {}, [], []
    toda = toda_bracket(T, problem)
    sections["toda"] = toda.to_dict()
    lines.append(toda.summary())
    passed = bool(toda.elements)
    if not toda.is_coset:
        findings.append("toda bracket is not a coset of the indeterminacy subgroup")
    if getattr(T, "structure", None) is not None:
        m = massey_product(FiniteDG(T), problem)
        sections["massey"] = m.to_dict()
        agree = set(m.elements) == set(toda.elements)
        sections["toda_equals_massey"] = agree
        lines.append(m.summary())
        lines.append(f"Toda = Massey on the DG instance: {'PASS' if agree else 'FAIL'}")
        passed = passed and agree
    wb = args.word_bound if args.word_bound is not None else min(inst.pipeline.get("word_bound", 2), 2)
    if inst.graph is not None and inst.G is not None:
        ring = args.ring or inst.pipeline.get("ring", "zpp")
        P = _pseudo(inst, ring, inst.pipeline.get("p", 2))
        tr = transfer_check(P, problem, wb, 2)
        sections["transfer"] = tr.to_dict()
        lines.append(tr.summary())
        passed = passed and tr.passed
        if not tr.source.is_coset:
            findings.append("massey product in B is not a coset of the indeterminacy subgroup")
    sections["findings"] = findings
    lines.extend(f"finding: {f}" for f in findings)
    return passed, sections, lines, _config(args, classes=tokens, word_bound=wb)


def cmd_zigzag(args):
    from .strictify import StrictifyError, dg_laws, dk_view, factorization_check, q_tilde, relax

    inst = _load(args.instance)
    wb = args.word_bound if args.word_bound is not None else 3
    try:
        R, Q, P = relax(inst.T, wb)
    except StrictifyError as e:
        raise InputError(f"zigzag needs a bilinear instance: {e}") from None
    q0, q1 = q_tilde(R)
    verdict = dk_view(R, q0, q1, inst.T, wb, 1, "Q~")
    fac = factorization_check(R, wb, 1, args.budget, args.seed)
    laws = dg_laws(R, min(wb, 2), 1, args.budget, args.seed)
    lines = [f"DK verdict Q~: {'equivalence' if verdict.equivalence else 'NOT an equivalence'} (word bound {wb})"]
    lines += [f"  - {r}" for r in verdict.reasons]
    lines += [fac.summary(), laws.summary()]
    sections = {"Q~": verdict.to_dict(), "factorization": _section(fac), "relaxation laws": _section(laws)}
    return verdict.equivalence and fac.passed and laws.passed, sections, lines, _config(args, word_bound=wb)


def cmd_fixtures(args):
    from .fixtures import BUILTINS, FixtureError, corpus_instance
    from .instance_io import dumps, instance_doc

    if args.action != "gen":
        raise InputError(f"unknown fixtures action {args.action!r}")
    if args.name not in BUILTINS:
        raise InputError(f"unknown fixture {args.name!r}; choose from {', '.join(BUILTINS)}")
    try:
        text = dumps(instance_doc(corpus_instance(args.name)))
    except FixtureError as e:
        raise InputError(str(e)) from None
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return None


COMMANDS = {"validate": cmd_validate, "linearity": cmd_linearity, "strictify": cmd_strictify,
            "brackets": cmd_brackets, "zigzag": cmd_zigzag}


# ---------------------------------------------------------------------------
# argument parsing and report assembly


def _budget(v: str) -> int:
    try:
        n = int(v)
    except ValueError:
        raise argparse.ArgumentTypeError("budget must be an integer") from None
    if n <= 0:
        raise argparse.ArgumentTypeError("budget must be positive")
    return n


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="trackalg", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", metavar="subcommand")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=_budget, default=None,
                        help="cases per law before sampling (default: $TRACKALG_BUDGET or 20000)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--format", choices=("human", "json"), default="human")
    common.add_argument("--output", "-o", help="also write the structured report to this file")
    common.add_argument("--replay", help="re-run only the failing witnesses of an earlier structured report")

    for name, help_ in [("validate", "axiom check and linearity equations"),
                        ("linearity", "linearity equations, integer and iterated laws"),
                        ("strictify", "pseudo-functor, strictification and zigzag dossier"),
                        ("brackets", "Toda brackets, Massey products and transfer"),
                        ("zigzag", "relaxation of a bilinear instance and DK comparison")]:
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("instance")
        if name in ("strictify", "brackets", "zigzag"):
            p.add_argument("--word-bound", type=int, default=None)
        if name in ("strictify", "brackets"):
            p.add_argument("--ring", choices=("zpp", "z"), default=None)
        if name == "brackets":
            p.add_argument("--classes", required=True, help="three selectors x1,x2,x3")
        if name == "linearity":
            p.add_argument("--n-max", type=int, default=4)

    f = sub.add_parser("fixtures", help="emit shipped fixtures")
    f.add_argument("action", choices=("gen",))
    f.add_argument("name")
    f.add_argument("--output", "-o")
    return ap


def _witnesses(report: dict) -> dict:
    out = {}

    def walk(v):
        if isinstance(v, dict):
            if "name" in v and v.get("passed") is False and isinstance(v.get("witness"), dict):
                out[v["name"]] = v["witness"]
            for x in v.values():
                walk(x)
        elif isinstance(v, list):
            for x in v:
                walk(x)

    walk(report)
    return out


def _replay_line(argv, report_path) -> str:
    cmd, skip = [], False
    for a in argv:
        if skip:
            skip = False
        elif a == "--replay":
            skip = True
        elif not a.startswith("--replay="):
            cmd.append(a)
    return "trackalg " + " ".join(cmd) + f" --replay {report_path or '<report.json>'}"


def run(argv) -> int:
    parser = build_parser()
    known = set(COMMANDS) | {"fixtures"}
    if argv and not argv[0].startswith("-") and argv[0] not in known:
        print(f"error: unknown subcommand {argv[0]!r} (expected one of: {', '.join(sorted(known))})",
              file=sys.stderr)
        return EXIT_INPUT
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        print("error: missing subcommand", file=sys.stderr)
        return EXIT_INPUT
    try:
        if args.command == "fixtures":
            cmd_fixtures(args)
            return EXIT_OK
        if args.budget is None:
            try:
                args.budget = default_budget()
            except ValueError:
                raise InputError("TRACKALG_BUDGET must be an integer") from None
        fn = COMMANDS[args.command]
        if args.replay:
            from .instance_io import FormatError, read_json
            try:
                prior = read_json(args.replay)
            except (FileNotFoundError, FormatError) as e:
                raise InputError(f"replay: {e}") from None
            wits = _witnesses(prior)
            if not wits:
                raise InputError(f"replay: {args.replay} contains no failing witnesses")
            with replaying(wits):
                passed, sections, lines, config = fn(args)
            config["replay"] = args.replay
        else:
            passed, sections, lines, config = fn(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    report = {"schema": REPORT_SCHEMA, "version": REPORT_VERSION, "command": args.command,
              "config": config, "passed": passed, "sections": _jsonable(sections)}
    if not passed:
        report["replay"] = _replay_line(argv, args.output)
        lines.append(f"replay: {report['replay']}")
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    if args.format == "json":
        sys.stdout.write(text)
    else:
        sys.stdout.write("\n".join(lines) + f"\n{'PASS' if passed else 'FAIL'}\n")
    return EXIT_OK if passed else EXIT_LAW


def main(argv=None) -> int:
    code = run(sys.argv[1:] if argv is None else list(argv))
    if argv is None:
        sys.exit(code)
    return code
