"""Command-line front end.

Exit codes: 0 success (warnings allowed), 1 validation errors present,
2 usage, parse or I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from fragforge import bibliography, constraints, model, publish, query, store
from fragforge.errors import DuplicateKey, FragforgeError, ParseError

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_FAILURE = 2
LIBRARY_ENV = "WSML_LIBRARY"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--library", default=argparse.SUPPRESS, metavar="PATH",
        help=f"library root (default: ${LIBRARY_ENV})",
    )
    parser = _Parser(prog="fragforge", description="Catalog of classified method fragments.", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("init", help="create a library tree", parents=[common])
    p.add_argument("path")
    p.add_argument("--no-seed", action="store_true", help="start without the seeded dimensions")

    add = sub.add_parser("add", help="add a fragment, dimension or document", parents=[common])
    add_sub = add.add_subparsers(dest="record", required=True, parser_class=_Parser)

    p = add_sub.add_parser("fragment", parents=[common])
    p.add_argument("--id", required=True)
    p.add_argument("--kind", required=True)
    p.add_argument("--name", required=True)
    partial = p.add_mutually_exclusive_group()
    partial.add_argument("--partial", dest="partial", action="store_true", default=None)
    partial.add_argument("--not-partial", dest="partial", action="store_false")
    p.add_argument("--comprises", action="append", default=[], metavar="ID")
    p.add_argument("--from", dest="source", metavar="ID")
    p.add_argument("--to", dest="target", metavar="ID")
    p.add_argument("--relation-type", metavar="ID")

    p = add_sub.add_parser("dimension", parents=[common])
    p.add_argument("--id", required=True)
    p.add_argument("--name", required=True)
    p.add_argument("--class", dest="klass", required=True, choices=[c.value for c in model.DimensionClass])
    p.add_argument("--value", action="append", default=[], metavar="ID=LABEL[=DESCRIPTION]")
    p.add_argument("--method", required=True, metavar="TEXT")
    p.add_argument("--method-cite", action="append", default=[], metavar="KEY")
    p.add_argument("--mandatory-for", action="append", default=[], metavar="KIND")
    p.add_argument("--multi-valued", action="store_true")

    p = add_sub.add_parser("document", parents=[common])
    p.add_argument("--id", required=True)
    p.add_argument("--kind", required=True, choices=[k.value for k in model.DocumentKind])
    p.add_argument("--bibkey", required=True)
    p.add_argument("--target")
    p.add_argument("--content-path")
    p.add_argument("--precedes", metavar="ID")

    p = sub.add_parser("characterize", help="attach a characterization property", parents=[common])
    p.add_argument("id")
    p.add_argument("--dim", required=True)
    p.add_argument("--value", required=True)
    p.add_argument("--modality", required=True, choices=[m.value for m in model.Modality])
    p.add_argument("--motivation", required=True)
    p.add_argument("--cite", action="append", default=[], metavar="KEY")

    p = sub.add_parser("bib", help="bibliography maintenance", parents=[common])
    bib_sub = p.add_subparsers(dest="bib_command", required=True, parser_class=_Parser)
    p = bib_sub.add_parser("import", parents=[common])
    p.add_argument("file")

    p = sub.add_parser("validate", help="check integrity rules", parents=[common])
    p.add_argument("--profile", default="strict", choices=sorted(constraints.PROFILES))
    p.add_argument("--format", default="text", choices=["text", "jsonl"])

    p = sub.add_parser("query", help="select fragments", parents=[common])
    p.add_argument("expr")
    p.add_argument("--format", default="text", choices=["text", "jsonl"])

    p = sub.add_parser("report", help="curation reports", parents=[common])
    p.add_argument("kind", choices=["coverage", "orthogonality", "stats"])
    p.add_argument("--threshold", type=float, default=query.DEFAULT_THRESHOLD)

    p = sub.add_parser("publish", help="render the static site", parents=[common])
    p.add_argument("--out", required=True)
    return parser


def _library_root(args) -> Path:
    root = getattr(args, "library", None) or os.environ.get(LIBRARY_ENV)
    if not root:
        raise UsageError(f"no library given; pass --library PATH or set {LIBRARY_ENV}")
    return Path(root)


def _jsonl(record: dict) -> str:
    return json.dumps(record, ensure_ascii=False, sort_keys=True)


def _cmd_init(args, out) -> int:
    root = Path(args.path)
    if root.exists() and (not root.is_dir() or any(root.iterdir())):
        raise UsageError(f"{root} already exists and is not an empty directory")
    store.save_library(model.new_library(seed=not args.no_seed), root)
    return EXIT_OK


def _cmd_add(args, out) -> int:
    root = _library_root(args)
    lib = store.load_library(root)
    if args.record == "fragment":
        relation = None
        if args.source or args.target or args.relation_type:
            if not (args.source and args.target and args.relation_type):
                raise UsageError("--from, --to and --relation-type must be given together")
            relation = model.Relation(args.source, args.target, args.relation_type)
        frag = model.MethodFragment(
            id=args.id, kind=args.kind, name=args.name, partial=args.partial,
            comprises=tuple(args.comprises), relation=relation,
        )
        lib = model.add_fragment(lib, frag)
    elif args.record == "dimension":
        values = []
        for spec in args.value:
            parts = spec.split("=", 2)
            if len(parts) < 2:
                raise UsageError(f"--value expects ID=LABEL[=DESCRIPTION], got {spec!r}")
            values.append(model.DimensionValue(*parts))
        dim = model.CharacterizationDimension(
            id=args.id, name=args.name, dimension_class=args.klass, values=tuple(values),
            method=model.CharacterizationMethod(args.method, tuple(args.method_cite)),
            mandatory_for=frozenset(args.mandatory_for), multi_valued=args.multi_valued,
        )
        lib = model.add_dimension(lib, dim)
    else:
        doc = model.DocumentRecord(
            id=args.id, kind=args.kind, bibkey=args.bibkey, target=args.target,
            content_path=args.content_path, precedes=args.precedes,
        )
        lib = model.add_document(lib, doc)
    store.save_library(lib, root)
    return EXIT_OK


def _cmd_characterize(args, out) -> int:
    if not args.motivation.strip():
        raise UsageError("--motivation must not be empty")
    root = _library_root(args)
    lib = store.load_library(root)
    prop = model.CharacterizationProperty(
        dimension=args.dim, value=args.value, modality=args.modality,
        motivation=model.Motivation(args.motivation, tuple(args.cite)),
    )
    store.save_library(model.attach_property(lib, args.id, prop), root)
    return EXIT_OK


def _cmd_bib(args, out) -> int:
    root = _library_root(args)
    lib = store.load_library(root)
    try:
        pubs = bibliography.parse_bibtex(Path(args.file).read_text(encoding="utf-8"))
    except (ParseError, DuplicateKey) as exc:
        raise FragforgeError(f"{args.file}:{exc}") from exc
    store.save_library(bibliography.add_publications(lib, pubs), root)
    return EXIT_OK


def _cmd_validate(args, out) -> int:
    lib = store.load_library(_library_root(args))
    findings = constraints.validate(lib, constraints.get_profile(args.profile))
    for f in findings:
        if args.format == "jsonl":
            print(_jsonl(f.as_dict()), file=out)
        else:
            print(f"{f.code}\t{f.severity}\t{f.subject}\t{f.message}", file=out)
    return EXIT_FINDINGS if constraints.has_errors(findings) else EXIT_OK


def _cmd_query(args, out) -> int:
    lib = store.load_library(_library_root(args))
    for fid in query.eval_query(lib, query.parse_query(args.expr)):
        print(_jsonl({"id": fid}) if args.format == "jsonl" else fid, file=out)
    return EXIT_OK


def _cmd_report(args, out) -> int:
    lib = store.load_library(_library_root(args))
    if args.kind == "coverage":
        for fid, missing in query.coverage_report(lib):
            print(f"{fid}\t{','.join(missing)}", file=out)
    elif args.kind == "orthogonality":
        if not 0 <= args.threshold <= 1:
            raise UsageError("--threshold must lie in [0, 1]")
        for dim_a, dim_b, v in query.orthogonality_report(lib, args.threshold):
            print(f"{dim_a}\t{dim_b}\t{v:.3f}", file=out)
    else:
        for name, count in query.stats_report(lib):
            print(f"{name}\t{count}", file=out)
    return EXIT_OK


def _cmd_publish(args, out) -> int:
    lib = store.load_library(_library_root(args))
    for path in publish.publish_site(lib, args.out):
        print(path, file=out)
    return EXIT_OK


_COMMANDS = {
    "init": _cmd_init,
    "add": _cmd_add,
    "characterize": _cmd_characterize,
    "bib": _cmd_bib,
    "validate": _cmd_validate,
    "query": _cmd_query,
    "report": _cmd_report,
    "publish": _cmd_publish,
}


def run(argv: Sequence[str], out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
        return _COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(exc, file=err)
        return EXIT_FAILURE
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else EXIT_FAILURE
    except (FragforgeError, OSError) as exc:
        print(f"fragforge: error: {exc}", file=err)
        return EXIT_FAILURE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
