"""Command-line entry point: ``kmhecke <command> [options]``.

Exit codes: 0 success, 1 mathematical error, 2 usage error, 3 failed
verification.  Errors are printed to stdout as ``{"error": {...}}`` in JSON
mode so scripts can tell them apart from results.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import _linalg as la
from .apartment import AffineWeylElt, LocalChamber, is_classical
from .errors import MathError, Undecidable
from .galleries import enumerate_folded, minimal_lifting_count
from .hecke_path import enumerate_decorations, enumerate_paths, segment_lifting_count
from .root_system import DEFAULT_CAP, PRESETS, System, build_system, preset
from .structure_constants import product, settings, structure_constant

__all__ = ["main", "parse_element", "parse_point", "format_element", "ParseError", "load_system"]

EXIT_OK, EXIT_MATH, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2, 3


class ParseError(ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        super().__init__(f"{msg} at position {pos} in {text!r}")
        self.text, self.pos, self.msg = text, pos, msg


class UsageError(Exception):
    pass


# --- element grammar -------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.text, self.pos = text, 0

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] == " ":
            self.pos += 1

    def peek(self, lit: str) -> bool:
        self.skip()
        return self.text.startswith(lit, self.pos)

    def expect(self, lit: str) -> None:
        if not self.peek(lit):
            raise ParseError(self.text, self.pos, f"expected {lit!r}")
        self.pos += len(lit)

    def integer(self) -> int:
        self.skip()
        m = re.compile(r"-?\d+").match(self.text, self.pos)
        if not m:
            raise ParseError(self.text, self.pos, "expected an integer")
        self.pos = m.end()
        return int(m.group())

    def word(self) -> tuple[int, ...]:
        if self.peek("e"):
            self.pos += 1
            return ()
        out = []
        while True:
            self.expect("s")
            out.append(self.integer())
            if not self.peek("."):
                return tuple(out)
            self.pos += 1

    def element(self):
        lam = None
        if self.peek("t["):
            self.pos += 2
            lam = [self.integer()]
            while self.peek(","):
                self.pos += 1
                lam.append(self.integer())
            self.expect("]")
            if not self.peek("*"):
                return tuple(lam), ()
            self.pos += 1
        word = self.word()
        return (tuple(lam) if lam is not None else None), word


def parse_element(text: str, system: System) -> AffineWeylElt:
    """Parse ``t[1,0]*s1.s2``, ``t[1,0]``, ``s1.s2`` or ``e``."""
    p = _Parser(text)
    lam, word = p.element()
    p.skip()
    if p.pos != len(p.text):
        raise ParseError(text, p.pos, "trailing input")
    if lam is None:
        lam = tuple(0 for _ in range(system.d))
    if len(lam) != system.d:
        raise ParseError(text, 0, f"translation needs {system.d} coordinates")
    if any(i < 1 or i > system.n for i in word):
        raise ParseError(text, 0, f"simple index out of range 1..{system.n}")
    return AffineWeylElt(lam, system.from_word(word))


def parse_point(text: str, system: System) -> tuple:
    """``1,0,1/2`` or ``[1, 0, 1/2]`` or ``t[1,0,0]``."""
    body = text.strip()
    body = body[2:] if body.startswith("t[") else body.lstrip("[")
    body = body.rstrip("]")
    try:
        vals = tuple(Fraction(x.strip()) for x in body.split(","))
    except (ValueError, ZeroDivisionError):
        raise ParseError(text, 0, "expected comma-separated rationals") from None
    if len(vals) != system.d:
        raise ParseError(text, 0, f"point needs {system.d} coordinates")
    return la.normalize(vals)


def parse_chamber(text: str, at: tuple, system: System) -> LocalChamber:
    """``+s1.s2`` or ``-e``: sign then a word for the direction."""
    text = text.strip()
    if not text or text[0] not in "+-":
        raise ParseError(text, 0, "chamber must start with + or -")
    p = _Parser(text[1:])
    word = p.word()
    if p.pos != len(p.text):
        raise ParseError(text, p.pos + 1, "trailing input")
    return LocalChamber(at, 1 if text[0] == "+" else -1, system.from_word(word))


def parse_word(text: str) -> tuple[int, ...]:
    text = text.strip()
    if text in ("", "e", "[]"):
        return ()
    if text[0] in "s":
        p = _Parser(text)
        w = p.word()
        if p.pos != len(text):
            raise ParseError(text, p.pos, "trailing input")
        return w
    try:
        return tuple(int(x) for x in text.strip("[]").split(","))
    except ValueError:
        raise ParseError(text, 0, "expected a word like s1.s2 or 1,2") from None


def format_element(g: AffineWeylElt) -> str:
    word = ".".join(f"s{i}" for i in g.w.word) or "e"
    if not any(g.lam):
        return word
    lam = ",".join(str(c) for c in g.lam)
    return f"t[{lam}]" if not g.w.word else f"t[{lam}]*{word}"


def _elt_json(g: AffineWeylElt) -> dict:
    return {"lambda": list(g.lam), "word": list(g.w.word)}


# --- system loading -----------------------------------------------------------------

def load_system(source: str) -> System:
    if source in PRESETS:
        return preset(source)
    path = Path(source)
    if not path.exists():
        raise UsageError(f"unknown preset or missing file: {source}")
    text = path.read_text()
    if path.suffix == ".toml":
        try:
            import tomllib  # type: ignore[import-not-found]
        except ImportError:  # Python 3.10
            import tomli as tomllib
        data = tomllib.loads(text)
    else:
        data = json.loads(text)
    data.setdefault("name", path.stem)
    return build_system(data)


def _apply_env() -> None:
    cap = os.environ.get("KMHECKE_NODE_CAP")
    if cap:
        settings.node_cap = int(cap)


# --- output -------------------------------------------------------------------------

@dataclass
class Out:
    fmt: str
    stream: io.TextIOBase

    def emit(self, doc: dict, rows: list[dict] | None = None, text: str | None = None) -> None:
        if self.fmt == "json":
            self.stream.write(json.dumps(doc, indent=2, sort_keys=False) + "\n")
        elif self.fmt == "csv":
            rows = rows or []
            if rows:
                w = csv.DictWriter(self.stream, fieldnames=list(rows[0]), lineterminator="\n")
                w.writeheader()
                w.writerows(rows)
        else:
            self.stream.write((text if text is not None else json.dumps(doc, indent=2)) + "\n")


def _terms_doc(system: System, w, v, res) -> tuple[dict, list, str]:
    terms = []
    rows = []
    lines = []
    for u, p in res.sorted_items():
        terms.append({"u": _elt_json(u), "u_text": format_element(u), "poly": p.to_json(), "poly_text": str(p)})
        rows.append({"u": format_element(u), "poly": str(p)})
        lines.append(f"{format_element(u)}\t{p}")
    doc = {"system": system.name, "w": format_element(w), "v": format_element(v), "terms": terms}
    return doc, rows, "\n".join(lines) if lines else "0"


# --- commands -----------------------------------------------------------------------

def cmd_multiply(args, system: System, out: Out) -> int:
    w, v = parse_element(args.w, system), parse_element(args.v, system)
    doc, rows, text = _terms_doc(system, w, v, product(w, v))
    out.emit(doc, rows, text)
    return EXIT_OK


def cmd_constant(args, system: System, out: Out) -> int:
    w, v, u = (parse_element(x, system) for x in (args.w, args.v, args.u))
    p = structure_constant(w, v, u)
    doc = {"system": system.name, "w": format_element(w), "v": format_element(v),
           "u": format_element(u), "poly": p.to_json(), "poly_text": str(p)}
    out.emit(doc, [{"u": format_element(u), "poly": str(p)}], str(p))
    return EXIT_OK


def cmd_paths(args, system: System, out: Out) -> int:
    shape = parse_point(args.shape, system)
    start = parse_point(getattr(args, "from"), system)
    end = parse_point(args.to, system) if args.to else None
    base = LocalChamber(tuple(0 for _ in range(system.d)), 1, system.identity())
    dom = system.dominantize(shape)
    if not hasattr(dom, "J"):
        raise Undecidable(f"cannot dominate {shape}")
    initial = None
    if args.dir_length is not None or not is_classical(system):
        # infinite orbit: first directions w·μ with ℓ(w) bounded
        bound = args.dir_length if args.dir_length is not None else 2
        initial = sorted({system.act(w, dom.lam) for w in system.elements(bound)})
    paths = enumerate_paths(dom.lam, start, base, end=end, initial=initial, cap=settings.node_cap)
    docs, rows, lines = [], [], []
    for k, path in enumerate(paths):
        d = path.to_json()
        d["lifting_count"] = str(segment_lifting_count(path))
        d["decorations"] = [dp.to_json()["decorations"] for dp in enumerate_decorations(path)]
        docs.append(d)
        pts = " -> ".join("(" + ",".join(str(c) for c in p) + ")" for p in path.breakpoints)
        rows.append({"index": k, "breakpoints": pts, "lifting_count": d["lifting_count"]})
        lines.append(f"{pts}\t{d['lifting_count']}")
    doc = {"system": system.name, "shape": [str(c) for c in dom.lam], "paths": docs}
    if initial is not None:
        doc["initial_directions"] = [[str(c) for c in xi] for xi in initial]
    out.emit(doc, rows, "\n".join(lines))
    return EXIT_OK


def cmd_galleries(args, system: System, out: Out) -> int:
    z = parse_point(args.at, system)
    start = parse_chamber(args.start, z, system)
    omega = parse_chamber(args.omega, z, system)
    gtype = parse_word(args.type)
    items = enumerate_folded(start, omega, gtype)
    docs, rows, lines = [], [], []
    for g, m in items:
        docs.append({"folds": list(g.folds), "end": repr(g.end), "kinds": [s.kind for s in g.steps],
                     "monomial": str(m)})
        rows.append({"folds": "".join(map(str, g.folds)), "end": repr(g.end), "monomial": str(m)})
        lines.append(f"{''.join(map(str, g.folds))}\t{g.end!r}\t{m}")
    total = sum((m for _, m in items), start=minimal_lifting_count(start, gtype) * 0)
    doc = {"system": system.name, "galleries": docs, "sum": str(total),
           "minimal_lifting_count": str(minimal_lifting_count(start, gtype))}
    out.emit(doc, rows, "\n".join(lines + [f"sum\t{total}"]))
    return EXIT_OK


def cmd_verify(args, system: System, out: Out) -> int:
    from .suites import CHECKS, ProductLog, suite_elements
    check = CHECKS[args.kind]
    elements = suite_elements(system, args.suite)
    log = ProductLog(args.threads)
    kwargs = {"seed": args.seed} if args.kind == "choices" else {}
    rep = check(system, elements, log, args.suite, **kwargs)
    doc = rep.to_json()
    status = "PASS" if rep.ok else "FAIL"
    out.emit(doc, [{"kind": rep.kind, "system": rep.system, "suite": rep.suite,
                    "checked": rep.checked, "ok": rep.ok}],
             f"{status} {rep.kind} {rep.system}/{rep.suite}: {rep.checked} checks, "
             f"{len(rep.failures)} failures")
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_presets(args, system, out: Out) -> int:
    from .suites import suite_names
    docs = [{**PRESETS[k], "suites": suite_names(k)} for k in sorted(PRESETS)]
    out.emit({"presets": docs}, [{"name": d["name"], "n": d["n"], "d": d["d"]} for d in docs],
             "\n".join(f"{d['name']}\tn={d['n']}\td={d['d']}\tgcm={d['gcm']}" for d in docs))
    return EXIT_OK


# --- argument parsing ---------------------------------------------------------------

class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _ArgParser(add_help=False)
    common.add_argument("--system", default="a1", help="preset name or path to a JSON/TOML config")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--threads", type=int, default=1)

    p = _ArgParser(prog="kmhecke", description="Structure constants of Iwahori–Hecke algebras")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("multiply", parents=[common])
    m.add_argument("--w", required=True)
    m.add_argument("--v", required=True)
    m.set_defaults(fn=cmd_multiply)

    c = sub.add_parser("constant", parents=[common])
    c.add_argument("--w", required=True)
    c.add_argument("--v", required=True)
    c.add_argument("--u", required=True)
    c.set_defaults(fn=cmd_constant)

    pa = sub.add_parser("paths", parents=[common])
    pa.add_argument("--shape", required=True)
    pa.add_argument("--from", required=True)
    pa.add_argument("--to")
    pa.add_argument("--dir-length", type=int, help="bound ℓ(w) for first directions w·μ (default 2 off the classical case)")
    pa.set_defaults(fn=cmd_paths)

    g = sub.add_parser("galleries", parents=[common])
    g.add_argument("--at", required=True)
    g.add_argument("--start", required=True)
    g.add_argument("--omega", required=True)
    g.add_argument("--type", required=True)
    g.set_defaults(fn=cmd_galleries)

    v = sub.add_parser("verify", parents=[common])
    v.add_argument("kind", choices=("assoc", "oracle", "q1", "positivity", "partition", "choices",
                                    "support", "units"))
    v.add_argument("--suite", default="full")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(fn=cmd_verify)

    pr = sub.add_parser("presets", parents=[common])
    pr.set_defaults(fn=cmd_presets)
    return p


def main(argv: list[str] | None = None, stream=None) -> int:
    stream = stream or sys.stdout
    fmt = "json"
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format
        out = Out(fmt, stream)
        _apply_env()
        system = load_system(args.system)
        return args.fn(args, system, out)
    except (UsageError, ParseError, KeyError) as exc:
        _error(stream, fmt, "usage", exc)
        return EXIT_USAGE
    except MathError as exc:
        _error(stream, fmt, type(exc).__name__, exc)
        return EXIT_MATH


def _error(stream, fmt: str, kind: str, exc: Exception) -> None:
    msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
    if fmt == "json":
        stream.write(json.dumps({"error": {"type": kind, "message": str(msg)}}) + "\n")
    else:
        sys.stderr.write(f"error ({kind}): {msg}\n")


if __name__ == "__main__":
    sys.exit(main())
