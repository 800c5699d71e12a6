"""Command line interface: ``qore pideg | sweep | remove | verify | run``.

Exit codes: 0 success, 1 input error, 2 verification failure or mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from .errors import NoClosedForm, QoreError
from .families import (
    KINDS,
    MULTI,
    ExponentAssignment,
    FamilyId,
    closed_form_pidegree,
    family_field,
    family_matrix,
    family_ore_spec,
)
from .pidegree import IntMatrix, exponent_matrix, pi_degree

EXIT_OK, EXIT_INPUT, EXIT_FAIL = 0, 1, 2

CSV_COLUMNS = ["family", "n", "r", "ell", "h", "pi_degree", "closed_form", "match"]


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def parse_range(text) -> list[int]:
    """'5' -> [5]; '2..6' -> [2, 3, 4, 5, 6]."""
    if isinstance(text, int):
        return [text]
    text = str(text).strip()
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
            if lo > hi:
                raise InputError(f"empty range {text!r}")
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError:
        raise InputError(f"bad integer or range {text!r}") from None


def parse_assign(text) -> dict[str, int]:
    """'q1=1,q2=2,g12=3' or a dict -> exponent dict."""
    if text is None:
        return {}
    if isinstance(text, dict):
        items = text.items()
    else:
        items = []
        for part in str(text).split(","):
            if not part.strip():
                continue
            if "=" not in part:
                raise InputError(f"bad assignment {part!r}; expected name=int")
            k, v = part.split("=", 1)
            items.append((k.strip(), v.strip()))
    try:
        return {k: int(v) for k, v in items}
    except (TypeError, ValueError):
        raise InputError(f"non-integer exponent in {text!r}") from None


def _single(values: list[int], flag: str) -> int:
    if len(values) != 1:
        raise InputError(f"{flag} takes a single value here")
    return values[0]


def load_matrices(path: str) -> list[IntMatrix]:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None
    if isinstance(data, dict) and "matrices" in data:
        data = data["matrices"]
    items = data if isinstance(data, list) else [data]
    return [IntMatrix.from_json(m) for m in items]


# -- reports ---------------------------------------------------------------


def _pideg_row(label: str, n: int, r: int, B: IntMatrix, closed) -> dict:
    rep = pi_degree(B, r)
    row = {
        "family": label,
        "n": n,
        "r": r,
        "ell": rep.ell,
        "h": rep.h,
        "pi_degree": rep.pi_degree,
        "invariant_factors": list(rep.invariant_factors),
        "closed_form": closed,
        "match": None if closed is None else closed == rep.pi_degree,
    }
    return row


def _family_row(kind: str, n: int, r: int, assign: dict) -> dict:
    fid = FamilyId(kind, n)
    if kind in MULTI:
        B = family_matrix(fid, ExponentAssignment(assign, r))
    else:
        B = family_matrix(fid)
    try:
        closed = closed_form_pidegree(fid, r)
    except NoClosedForm:
        closed = None
    return _pideg_row(kind, n, r, B, closed)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list):
        return "(" + ", ".join(str(x) for x in v) + ")"
    return str(v)


def render(rows: list[dict], fmt: str, columns: Sequence[str]) -> str:
    if fmt == "json":
        return json.dumps(rows if len(rows) != 1 else rows[0], sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in rows:
            w.writerow([_fmt(row.get(c)) for c in CSV_COLUMNS])
        return buf.getvalue()
    table = [list(columns)] + [[_fmt(row.get(c)) for c in columns] for row in rows]
    widths = [max(len(r[i]) for r in table) for i in range(len(columns))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(r, widths)).rstrip() for r in table]
    return "\n".join(lines) + "\n"


def _emit(text: str, output: str | None):
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


TEXT_COLUMNS = ["family", "n", "r", "ell", "invariant_factors", "h", "pi_degree", "closed_form", "match"]


# -- commands --------------------------------------------------------------


def cmd_pideg(args) -> int:
    if args.source == "family":
        n = _single(parse_range(args.n), "--n")
        r = _single(parse_range(args.r), "--r")
        rows = [_family_row(args.kind, n, r, parse_assign(args.assign))]
    else:
        r = _single(parse_range(args.r), "--r")
        rows = []
        for k, B in enumerate(load_matrices(args.input)):
            rows.append(_pideg_row(f"matrix[{k}]", B.rows, r, B, None))
    _emit(render(rows, args.format, TEXT_COLUMNS), args.output)
    return EXIT_OK


def cmd_sweep(args) -> int:
    rs = parse_range(args.r)
    rows = []
    if args.source == "family":
        fid_kind = args.kind
        ns = parse_range(args.n)
        assign = parse_assign(args.assign)
        for n in ns:
            FamilyId(fid_kind, n)
        for n in ns:
            for r in rs:
                if r < 1:
                    raise InputError(f"root order must be positive, got {r}")
                rows.append(_family_row(fid_kind, n, r, assign))
    else:
        mats = load_matrices(args.input)
        for k, B in enumerate(mats):
            for r in rs:
                rows.append(_pideg_row(f"matrix[{k}]", B.rows, r, B, None))
    _emit(render(rows, args.format, CSV_COLUMNS), args.output)
    return EXIT_FAIL if any(row["match"] is False for row in rows) else EXIT_OK


def cmd_remove(args) -> int:
    from .removal import iterate_removal

    n = _single(parse_range(args.n), "--n")
    fid = FamilyId(args.kind, n)
    assign = parse_assign(args.assign)
    r = None if args.r is None else _single(parse_range(args.r), "--r")
    if r is not None and fid.kind in MULTI and not assign:
        raise InputError(f"{fid.kind} at a root of unity needs --assign")
    field = family_field(fid, r, assign or None)
    spec = family_ore_spec(fid, field)
    res = iterate_removal(spec, max_index=args.max_index)
    out = {
        "family": fid.kind,
        "n": n,
        "r": r,
        "vars": list(spec.vars),
        "steps": [s.removed_var for s in res.steps],
        "ore_generators": [str(g) for g in res.ore_generators],
        "lambda": [[str(x) for x in row] for row in res.lambda_final],
    }
    if r is not None:
        M = exponent_matrix(res.lambda_final, field)
        out["exponent_matrix"] = M.tolist()
        out["exponent_base"] = "q^(1/2)" if fid.kind == "euclidean-odd" else "q"
        rep = pi_degree(M, field.order)
        out["pi_degree"] = rep.pi_degree
    if args.format == "json":
        text = json.dumps(out, sort_keys=True, indent=2) + "\n"
    else:
        lines = [f"{fid} over {field}", f"removed, in order: {', '.join(out['steps']) or 'nothing'}", "Ore set generators:"]
        lines += [f"  {g}" for g in out["ore_generators"]]
        lines.append("commutation scalars:")
        lines += ["  " + "  ".join(row) for row in out["lambda"]]
        if r is not None:
            lines.append(f"PI degree: {out['pi_degree']}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_suite

    results = run_suite(args.suite)
    if args.format == "json":
        rows = [{"suite": s, "check": c.name, "ok": c.ok, "detail": c.detail} for s, c in results]
        text = json.dumps(rows, sort_keys=True, indent=2) + "\n"
    else:
        text = "".join(
            f"{'PASS' if c.ok else 'FAIL'}  {s:9s} {c.name}" + (f"\n      {c.detail}" if c.detail else "") + "\n"
            for s, c in results
        )
    _emit(text, args.output)
    return EXIT_OK if all(c.ok for _, c in results) else EXIT_FAIL


def cmd_run(args) -> int:
    """Execute a JSON run manifest: {"command": ..., plus the flags by name}."""
    try:
        with open(args.manifest) as fh:
            m = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {args.manifest}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"manifest is not valid JSON: {exc}") from None
    if not isinstance(m, dict) or "command" not in m:
        raise InputError("manifest needs a 'command' field")
    if ("family" in m) == ("input" in m) and m["command"] in ("pideg", "sweep"):
        raise InputError("manifest needs exactly one of 'family' or 'input'")
    argv = [str(m["command"])]
    if m["command"] in ("pideg", "sweep"):
        argv += ["family", str(m["family"])] if "family" in m else ["matrix", "--input", str(m["input"])]
    elif m["command"] == "remove":
        argv += [str(m.get("family", ""))]
    elif m["command"] == "verify":
        argv += [str(m.get("suite", "all"))]
    else:
        raise InputError(f"unknown manifest command {m['command']!r}")
    for key in ("n", "r", "assign", "format", "output", "max_index"):
        if key in m and m[key] is not None:
            val = m[key]
            if key == "assign" and isinstance(val, dict):
                val = ",".join(f"{k}={v}" for k, v in sorted(val.items()))
            argv += [f"--{key.replace('_', '-')}", str(val)]
    return main(argv)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qore", description="PI degrees and derivation removal for quantum algebras at roots of unity")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, formats=("text", "json", "csv")):
        sp.add_argument("--format", choices=formats, default="text")
        sp.add_argument("--output", help="write the report here instead of stdout")

    def sources(sp, ranged: bool):
        srcs = sp.add_subparsers(dest="source", required=True, parser_class=_Parser)
        fam = srcs.add_parser("family", help="a named family")
        fam.add_argument("kind", choices=KINDS)
        fam.add_argument("--n", required=True, help="size" + (" or range a..b" if ranged else ""))
        fam.add_argument("--r", required=True, help="root order" + (" or range a..b" if ranged else ""))
        fam.add_argument("--assign", help="exponents for multiparameter families, e.g. q1=1,q2=2,g12=3")
        common(fam)
        mat = srcs.add_parser("matrix", help="skew-symmetric matrices from a JSON file")
        mat.add_argument("--input", required=True)
        mat.add_argument("--r", required=True)
        common(mat)

    sp = sub.add_parser("pideg", help="PI degree of a family or a matrix")
    sources(sp, ranged=False)
    sp.set_defaults(func=cmd_pideg)

    sp = sub.add_parser("sweep", help="PI degrees over ranges of n and r, checked against closed forms")
    sources(sp, ranged=True)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("remove", help="run the iterated derivation removal on a family")
    sp.add_argument("kind", choices=KINDS)
    sp.add_argument("--n", required=True)
    sp.add_argument("--r", help="root order; generic parameters when omitted")
    sp.add_argument("--assign", help="exponents for multiparameter families")
    sp.add_argument("--max-index", type=int, default=64, help="cap on higher-derivation indices")
    common(sp, ("text", "json"))
    sp.set_defaults(func=cmd_remove)

    sp = sub.add_parser("verify", help="run a self-check suite")
    sp.add_argument("suite", choices=("qarith", "scalars", "ore", "removal", "pidegree", "families", "all"))
    common(sp, ("text", "json"))
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("run", help="execute a JSON run manifest")
    sp.add_argument("manifest")
    sp.set_defaults(func=cmd_run)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, QoreError) as exc:
        print(f"qore: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
