"""Command-line front end.

Every command loads (or enumerates and caches) the catalog described by
``--quiver`` and prints a deterministic report, either as readable text or
as flat ``key=value`` lines.  Exit status: 0 success, 1 a check failed,
2 bad input.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .catalog import Catalog, OutOfCatalogError, enumerate_catalog
from .character import (
    Character,
    NotDecomposableError,
    char_of_module,
    decompose,
    degree,
    endolength,
    module_characters,
    verify_axioms,
)
from .homs import DEFAULT_SEED
from .io import CacheError, SpecError, cache_path, cache_read, cache_write, parse_quiver_spec
from .quiver import BudgetExceeded, Rep
from .subcat import all_subclosed_sets, compare_orders, sub_chi, verify_sub_theorem
from .ziegler import build_model, topology_report

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


class Out:
    """Collects a report once and renders it as text or key=value lines."""

    def __init__(self):
        self.rows: list[tuple[str | None, str, str | None]] = []

    def kv(self, key: str, value, text: str | None | bool = None):
        """``text=None`` renders ``key: value`` in text mode; ``text=False`` hides the row there."""
        self.rows.append((key, _val(value), text))

    def note(self, text: str):
        self.rows.append((None, "", text))

    def render(self, fmt: str) -> str:
        lines = []
        for key, value, text in self.rows:
            if fmt == "kv":
                if key is not None:
                    lines.append(f"{key}={value}")
            elif text is False:
                continue
            elif text is not None:
                lines.append(text)
            elif key is not None:
                lines.append(f"{key}: {value}")
        return "\n".join(lines) + "\n"


def _val(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (tuple, list)):
        return "(" + ",".join(_val(x) for x in v) + ")"
    return str(v)


# --- inputs --------------------------------------------------------------


def load_catalog(args) -> Catalog:
    try:
        text = Path(args.quiver).read_text()
    except OSError as exc:
        raise InputError(f"cannot read quiver file: {exc}") from None
    spec = parse_quiver_spec(text)
    p = args.field if args.field is not None else (spec.field or 2)
    per_vertex = args.bound if args.bound is not None else spec.per_vertex
    total = args.total_bound if args.total_bound is not None else spec.total
    if per_vertex is None and total is None:
        raise InputError("no dimension bound: pass --bound/--total-bound or add a 'bound' line")
    args._bound_for_cap = total if total is not None else per_vertex
    if args.cache:
        path = cache_path(args.cache, spec.quiver, p, per_vertex, total)
        if path.exists():
            c = cache_read(path)
            if c.quiver != spec.quiver or c.p != p or c.seed != args.seed:
                raise CacheError(f"cache {path} does not match the requested quiver, field or seed")
            return c
        c = enumerate_catalog(spec.quiver, p, per_vertex=per_vertex, total=total, seed=args.seed)
        cache_write(c, path)
        return c
    return enumerate_catalog(spec.quiver, p, per_vertex=per_vertex, total=total, seed=args.seed)


def _cap(args) -> int:
    return args.cap if args.cap is not None else 2 * args._bound_for_cap


_TERM = re.compile(r"^(?:(\d+)\s*\*\s*)?([A-Za-z0-9_.]+)(?:\^(\d+))?$")


def parse_module(text: str, c: Catalog) -> Rep:
    """Catalog names joined by ``+`` (``S1+2*M11``, ``M11^2``), or ``dims=1,1;a=1`` with rows split by ``/``."""
    text = text.strip()
    if text.startswith("dims="):
        return _explicit_module(text, c)
    mult = np.zeros(len(c.entries), dtype=np.int64)
    for term in text.split("+"):
        m = _TERM.match(term.strip())
        if not m:
            raise InputError(f"cannot parse module term {term!r}")
        k = int(m.group(1) or 1) * int(m.group(3) or 1)
        try:
            mult[c.index_of(m.group(2))] += k
        except ValueError:
            raise InputError(f"unknown catalog entry {m.group(2)!r}; known: {', '.join(c.names)}") from None
    if not mult.any():
        raise InputError("the zero module has no character")
    return c.sum_of(mult)


def _explicit_module(text: str, c: Catalog) -> Rep:
    q = c.quiver
    fields = dict(part.split("=", 1) for part in text.split(";") if part)
    try:
        dims = [int(d) for d in fields.pop("dims").split(",")]
    except (KeyError, ValueError):
        raise InputError("explicit module needs dims=d1,d2,...") from None
    if len(dims) != len(q.vertices):
        raise InputError(f"expected {len(q.vertices)} dimensions, got {len(dims)}")
    maps = {}
    for label, body in fields.items():
        if label not in [a.label for a in q.arrows]:
            raise InputError(f"unknown arrow {label!r}")
        try:
            maps[label] = [[int(x) for x in row.split(",")] for row in body.split("/")]
        except ValueError:
            raise InputError(f"bad matrix for arrow {label!r}") from None
    try:
        return Rep.from_dict(q, dims, maps, c.p)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def parse_character(text: str, c: Catalog) -> Character:
    body = text.strip().strip("()")
    try:
        vals = [int(v) for v in body.split(",") if v.strip()]
    except ValueError:
        raise InputError(f"character literal must be integers, got {text!r}") from None
    if len(vals) != len(c.entries):
        raise InputError(f"character literal needs {len(c.entries)} values (one per entry: {', '.join(c.names)})")
    if any(v < 0 for v in vals):
        raise InputError("character values must be non-negative")
    return Character(c, tuple(vals), label=f"({','.join(map(str, vals))})")


# --- commands ------------------------------------------------------------


def _header(out: Out, c: Catalog, args):
    out.kv("quiver", ",".join(c.quiver.vertices) + ";" + ",".join(f"{a.label}:{a.source}->{a.target}" for a in c.quiver.arrows))
    out.kv("field", c.p)
    out.kv("seed", c.seed)
    out.kv("complete", c.complete, f"catalog: {len(c.entries)} entries, {'complete' if c.complete else 'truncated (incomplete)'}")


def cmd_catalog(c: Catalog, args, out: Out) -> int:
    _header(out, c, args)
    out.kv("entries", len(c.entries))
    for name, e in zip(c.names, c.entries):
        maps = ";".join(f"{a.label}=" + "/".join(",".join(map(str, r)) for r in m.tolist()) for a, m in zip(c.quiver.arrows, e.maps))
        out.kv(f"entry.{name}", e.dims, f"  {name:8s} dims {_val(e.dims)}  {maps}")
        out.kv(f"entry.{name}.maps", maps, False)
    for dims, tag in sorted(c.strata.items()):
        out.kv(f"stratum.{_val(dims)}", tag, False if tag == "exhaustive" else f"  stratum {_val(dims)}: {tag}")
    return EXIT_OK


def cmd_char(c: Catalog, args, out: Out) -> int:
    m = parse_module(args.module, c)
    x = char_of_module(m, c)
    _header(out, c, args)
    out.kv("module", m.dims, f"character of {args.module} (dims {_val(m.dims)})")
    for name, v in zip(c.names, x.values):
        out.kv(f"value.{name}", v, f"  chi({name}) = {v}")
    out.kv("degree", degree(x))
    out.kv("endolength", endolength(m, c))
    return EXIT_OK


def cmd_decompose(c: Catalog, args, out: Out) -> int:
    x = parse_character(args.character, c)
    _header(out, c, args)
    try:
        res = decompose(x)
    except NotDecomposableError as exc:
        out.kv("decomposable", False, f"not decomposable: {exc.reason}")
        if exc.coefficients is not None:
            names = module_characters(c)
            out.kv("rational_solution", ",".join(f"{chi.label}:{a}" for chi, a in zip(names, exc.coefficients)))
        return EXIT_FAIL
    out.kv("decomposable", True)
    if res.relative_to_truncation:
        out.kv("relative_to_truncation", True)
    chis = module_characters(c)
    terms = []
    for chi in chis:
        n = res.multiplicities.get(chi, 0)
        if n:
            terms.append(f"{chi.label}:{n}")
            out.kv(f"mult.{chi.label}", n, False)
    out.note("{" + ", ".join(terms) + "}")
    return EXIT_OK


def cmd_topology(c: Catalog, args, out: Out) -> int:
    s = build_model(c, depth=args.depth)
    rep = topology_report(s)
    _header(out, c, args)
    out.kv("pool", len(s.pool))
    out.kv("verdict", rep.verdict.status, f"topology: {rep.verdict.status}, {rep.verdict.certified}/{rep.verdict.total} points")
    out.kv("certified", f"{rep.verdict.certified}/{rep.verdict.total}", False)
    if not c.complete:
        out.note("truncated catalog: unresolved points are not claimed to be non-isolated")
    for cert in rep.certificates:
        out.kv(f"isolated.{cert.point.label}", cert.describe(c).split(": ", 1)[1], "  isolated " + cert.describe(c))
    for x in rep.unresolved:
        out.kv(f"unresolved.{x.label}", True, f"  unresolved {x.label}")
    out.kv("distinct_opens", rep.distinct_opens)
    if args.opens:
        for k, (src, tgt, tag, members) in enumerate(rep.opens):
            out.kv(f"open.{k}", f"{src}->{tgt}[{tag}]{{{','.join(members)}}}", f"  U[{src} -> {tgt}] ({tag}) = {{{', '.join(members)}}}")
    return EXIT_OK


def cmd_subcat(c: Catalog, args, out: Out) -> int:
    s = build_model(c, depth=args.depth)
    _header(out, c, args)
    for x in s.points:
        members = sorted(sub_chi(x, s))
        out.kv(f"sub.{x.label}", "{" + ",".join(s.points[j].label for j in members) + "}")
    report = verify_sub_theorem(s)
    out.kv("sub_injective", report.injective, f"sub(x) injective over {report.pairs_checked} pairs: {_val(report.injective)}")
    fam = all_subclosed_sets(c)
    out.kv("subclosed_sets", len(fam))
    for k, st in enumerate(fam):
        out.kv(f"set.{k}", str(st), f"  [{k}] {st}")
    out.kv("hasse", ";".join(f"{i}<{j}" for i, j in fam.hasse()))
    atoms = fam.minimal_from(1)
    out.kv("minimal_nonempty", ";".join(str(a) for a in atoms))
    return EXIT_OK if report.injective else EXIT_FAIL


def cmd_verify(c: Catalog, args, out: Out) -> int:
    cap = _cap(args)
    _header(out, c, args)
    out.kv("cap", cap)
    chars = [parse_character(args.character, c)] if args.character else module_characters(c)
    total = 0
    status = EXIT_OK
    for x in chars:
        rep = verify_axioms(x, cap)
        total += len(rep.violations)
        out.kv(f"violations.{x.label}", len(rep.violations), f"  {x.label}: {len(rep.violations)} violations over {rep.sequences_checked} sequences")
        for k, line in enumerate(rep.describe()):
            out.kv(f"witness.{x.label}.{k}", line, f"    {line}")
        for skip in rep.skipped:
            out.kv(f"skipped.{x.label}", skip, f"    skipped {skip}")
        if not rep.additivity_ok:
            out.kv(f"additivity.{x.label}", False)
            status = EXIT_FAIL
    out.kv("violations", total, f"{total} violations")
    return EXIT_FAIL if total else status


def cmd_compare_orders(c: Catalog, args, out: Out) -> int:
    s = build_model(c, depth=args.depth)
    rep = compare_orders(s)
    _header(out, c, args)
    names = rep.points
    for i, j, a, b in rep.pairs:
        if i != j and (a or b):
            out.kv(f"pair.{names[i]}.{names[j]}", f"leq={_val(a)},sub={_val(b)}", f"  {names[i]} vs {names[j]}: <= {_val(a)}, sub {_val(b)}")
    out.kv("disagreements", len(rep.disagreements))
    for i, j, a, b in rep.disagreements:
        out.kv(f"disagree.{names[i]}.{names[j]}", f"leq={_val(a)},sub={_val(b)}")
    for j, down in enumerate(rep.down_sets):
        out.kv(f"U.{names[j]}", "{" + ",".join(names[i] for i in sorted(down)) + "}")
    out.kv("hasse_leq", ";".join(f"{names[i]}<{names[j]}" for i, j in rep.hasse(2)))
    out.kv("hasse_sub", ";".join(f"{names[i]}<{names[j]}" for i, j in rep.hasse(3)))
    return EXIT_OK


COMMANDS = {
    "catalog": cmd_catalog,
    "char": cmd_char,
    "decompose": cmd_decompose,
    "topology": cmd_topology,
    "subcat": cmd_subcat,
    "verify": cmd_verify,
    "compare-orders": cmd_compare_orders,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiver", required=True, help="quiver description file")
    common.add_argument("--field", type=int, default=None, help="prime characteristic (default 2)")
    common.add_argument("--bound", type=int, default=None, help="per-vertex dimension bound")
    common.add_argument("--total-bound", type=int, default=None, help="bound on the total dimension")
    common.add_argument("--cache", default=None, help="directory for catalog caches")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized steps")
    common.add_argument("--depth", type=int, default=2, help="composition depth of the morphism pool")
    common.add_argument("--cap", type=int, default=None, help="dimension cap for axiom checks (default 2 x bound)")
    common.add_argument("--format", choices=("text", "kv"), default="text")

    ap = argparse.ArgumentParser(prog="lengthchars", description="Characters on categories of quiver representations over F_p.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("catalog", parents=[common], help="list the indecomposables")
    p = sub.add_parser("char", parents=[common], help="character of a module")
    p.add_argument("module", help="e.g. M11, S1+2*M11, or dims=1,1;a=1")
    p = sub.add_parser("decompose", parents=[common], help="decompose a character literal")
    p.add_argument("character", help="values on the catalog entries, e.g. (1,2,3)")
    p = sub.add_parser("topology", parents=[common], help="isolated points and basic opens")
    p.add_argument("--opens", action="store_true", help="also list every basic open")
    sub.add_parser("subcat", parents=[common], help="subobject-closed sets and sub(x)")
    p = sub.add_parser("verify", parents=[common], help="check the character axioms")
    p.add_argument("character", nargs="?", default=None, help="check this literal instead of every module character")
    sub.add_parser("compare-orders", parents=[common], help="compare <= with inclusion of sub(x)")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.seed < 0 or args.seed >= 2**64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_INPUT
    out = Out()
    try:
        c = load_catalog(args)
        code = COMMANDS[args.command](c, args, out)
    except (InputError, SpecError, CacheError, OutOfCatalogError, BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(out.render(args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
