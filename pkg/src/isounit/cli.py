"""Command-line front end.

Exit status: 0 success, 1 validation failure, 2 input or I/O failure.
Only the payload goes to stdout; diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import sys

from .lexicon import LexiconError, load_lexicon, load_lexicon_collect, tag_sentence
from .matcher import explain_match
from .pipeline import Engine, bundled_lexicon, translate_document
from .ruledsl import (
    RuleSyntaxError, builtin_catalog, builtin_source, format_rules, parse_rules, parse_rules_collect,
)
from .units import UnbalancedDelimiterError, detect_units

EXIT_OK, EXIT_INVALID, EXIT_INPUT = 0, 1, 2


class _InputError(Exception):
    pass


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _catalog(args):
    if not args.rules:
        return builtin_catalog()
    try:
        return parse_rules(_read(args.rules))
    except RuleSyntaxError as exc:
        raise _InputError(f"{args.rules}: {exc}") from exc


def _lexicon(path):
    try:
        return load_lexicon(_read(path))
    except LexiconError as exc:
        raise _InputError(f"{path}: {exc}") from exc


def cmd_translate(args) -> int:
    engine = Engine.create(_lexicon(args.lexicon), _catalog(args))
    text = _read(args.input)
    trace_fh = None
    if args.trace_out:
        try:
            trace_fh = open(args.trace_out, "w", encoding="utf-8")
        except OSError as exc:
            raise _InputError(f"cannot write {args.trace_out}: {exc.strerror}") from exc
    status = EXIT_OK
    try:
        for res in translate_document(engine, text, workers=args.workers):
            if res.error is not None:
                _err(f"sentence {res.id}: {res.error}")
                status = EXIT_INPUT
                print()
            else:
                print(res.output)
            if args.trace or trace_fh:
                print(res.trace.to_json(), file=trace_fh or sys.stderr)
    finally:
        if trace_fh:
            trace_fh.close()
    return status


def cmd_validate(args) -> int:
    if not (args.rules or args.lexicon or args.builtin):
        _err("validate: give --rules FILE, --lexicon FILE or --builtin")
        return EXIT_INPUT
    failed = False
    if args.builtin:
        rules, errors = parse_rules_collect(builtin_source())
        failed |= _report("builtin", rules, errors)
    if args.rules:
        rules, errors = parse_rules_collect(_read(args.rules))
        failed |= _report(args.rules, rules, errors)
    if args.lexicon:
        entries, errors = load_lexicon_collect(_read(args.lexicon).splitlines())
        for e in errors:
            _err(f"{args.lexicon}: {e}")
        if errors:
            failed = True
        else:
            print(f"{len(entries)} lexicon entries OK")
    return EXIT_INVALID if failed else EXIT_OK


def _report(label, rules, errors) -> bool:
    for e in errors:
        _err(f"{label}: {e}")
    if not errors:
        print(f"{len(rules)} rules OK")
    return bool(errors)


def cmd_match(args) -> int:
    catalog = _catalog(args)
    ids = [r.id for r in catalog]
    if args.rule_id not in ids:
        _err(f"unknown rule id {args.rule_id!r}; valid ids: {', '.join(ids)}")
        return EXIT_INVALID
    rule = catalog[ids.index(args.rule_id)]
    lexicon = _lexicon(args.lexicon) if args.lexicon else bundled_lexicon()
    tokens = tag_sentence(lexicon, args.sentence)
    try:
        units = detect_units(tokens)
    except UnbalancedDelimiterError as exc:
        raise _InputError(str(exc)) from exc
    furthest = None
    for unit in units:
        result, failed = explain_match(rule, tokens, unit)
        if result is not None:
            print(f"unit\t{unit.start}-{unit.end}\t{unit.text(tokens)}")
            for b in result.bindings:
                surface = " ".join(t.surface for t in tokens[b.start:b.end])
                print(f"{b.name}\t{b.start}-{b.end}\t{surface}")
            return EXIT_OK
        if failed is not None:
            furthest = failed if furthest is None else max(furthest, failed)
    where = "no candidate units" if furthest is None else f"furthest pattern position {furthest}"
    print(f"no match ({where})")
    return EXIT_OK


def cmd_catalog(args) -> int:
    sys.stdout.write(format_rules(_catalog(args)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isounit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def rules_opt(p):
        p.add_argument("--rules", metavar="FILE", help="rule file (default: builtin catalog)")

    p = sub.add_parser("translate", help="translate text, one sentence per output line")
    rules_opt(p)
    p.add_argument("--lexicon", metavar="FILE", required=True)
    p.add_argument("--in", dest="input", metavar="FILE", default="-", help="input file, - for stdin")
    p.add_argument("--trace", action="store_true", help="write JSON-lines trace to stderr")
    p.add_argument("--trace-out", metavar="FILE", help="write the trace to FILE instead")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("validate", help="check rule and lexicon files")
    rules_opt(p)
    p.add_argument("--lexicon", metavar="FILE")
    p.add_argument("--builtin", action="store_true", help="validate the embedded catalog")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("match", help="show how one rule matches a sentence")
    rules_opt(p)
    p.add_argument("--lexicon", metavar="FILE", help="default: bundled lexicon")
    p.add_argument("rule_id")
    p.add_argument("sentence")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("catalog", help="print the rule catalog in DSL form")
    rules_opt(p)
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _InputError as exc:
        _err(str(exc))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
