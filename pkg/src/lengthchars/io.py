"""Quiver description files and the on-disk catalog cache.

A quiver file is line oriented::

    # the A2 quiver
    vertex 1
    vertex 2
    arrow a : 1 -> 2
    field 2
    bound 2          # per-vertex bound; "bound total 3" caps the total dimension

A cache file is a two-line header (magic + version, sha256 of the body)
followed by a canonical JSON body.  Writes go to a temp file that is
renamed into place while holding an advisory lock.
"""

from __future__ import annotations

import fcntl
import hashlib
import json
import os
import re
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import linalg as la
from .catalog import Catalog
from .quiver import Quiver, QuiverError, Rep

CACHE_VERSION = 1
CACHE_MAGIC = "lengthchars-catalog"


class SpecError(ValueError):
    """Malformed quiver description; carries the offending line number."""

    def __init__(self, line: int | None, msg: str):
        super().__init__(f"line {line}: {msg}" if line is not None else msg)
        self.line = line


class CacheError(ValueError):
    pass


@dataclass(frozen=True)
class QuiverSpec:
    quiver: Quiver
    field: int | None = None
    per_vertex: int | None = None
    total: int | None = None

    def canonical(self) -> str:
        lines = [f"vertex {v}" for v in self.quiver.vertices]
        lines += [f"arrow {a.label} : {a.source} -> {a.target}" for a in self.quiver.arrows]
        return "\n".join(lines) + "\n"


_TOKEN = r"[A-Za-z0-9_.']+"
_ARROW = re.compile(rf"^arrow\s+({_TOKEN})\s*:\s*({_TOKEN})\s*->\s*({_TOKEN})$")


def parse_quiver_spec(doc: str) -> QuiverSpec:
    vertices: list[str] = []
    arrows: list[tuple[str, str, str]] = []
    opts: dict[str, int] = {}
    arrow_lines: dict[str, int] = {}
    for n, raw in enumerate(doc.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()[0]
        if head == "vertex":
            parts = line.split()
            if len(parts) != 2 or not re.fullmatch(_TOKEN, parts[1]):
                raise SpecError(n, f"malformed vertex line {raw!r}")
            if parts[1] in vertices:
                raise SpecError(n, f"duplicate vertex label {parts[1]!r}")
            vertices.append(parts[1])
        elif head == "arrow":
            m = _ARROW.match(line)
            if not m:
                raise SpecError(n, f"malformed arrow line {raw!r} (expected 'arrow <label> : <src> -> <tgt>')")
            label, s, t = m.groups()
            if label in arrow_lines:
                raise SpecError(n, f"duplicate arrow label {label!r}")
            if s == t:
                raise SpecError(n, f"arrow {label!r} is a loop at {s!r}; the quiver must be acyclic")
            arrow_lines[label] = n
            arrows.append((label, s, t))
        elif head in ("field", "bound"):
            parts = line.split()
            key = head
            if head == "bound" and len(parts) == 3 and parts[1] == "total":
                key, parts = "total", [parts[0], parts[2]]
            if len(parts) != 2 or not parts[1].isdigit():
                raise SpecError(n, f"malformed {head} line {raw!r}")
            if key in opts:
                raise SpecError(n, f"repeated {key} directive")
            opts[key] = int(parts[1])
            if key == "field" and not la.is_prime(opts[key]):
                raise SpecError(n, f"field characteristic {opts[key]} is not prime")
        else:
            raise SpecError(n, f"unknown directive {head!r}")
    for label, s, t in arrows:
        for v in (s, t):
            if v not in vertices:
                raise SpecError(arrow_lines[label], f"arrow {label!r} uses undeclared vertex {v!r}")
    if not vertices:
        raise SpecError(None, "no vertices declared")
    try:
        q = Quiver.from_edges(vertices, arrows)
    except QuiverError as exc:
        raise SpecError(None, str(exc)) from None
    return QuiverSpec(q, opts.get("field"), opts.get("bound"), opts.get("total"))


def parse_quiver(doc: str) -> Quiver:
    return parse_quiver_spec(doc).quiver


# --- cache ---------------------------------------------------------------


def _payload(c: Catalog) -> dict:
    q = c.quiver
    return {
        "quiver": {"vertices": list(q.vertices), "arrows": [[a.label, a.source, a.target] for a in q.arrows]},
        "p": c.p,
        "per_vertex": list(c.per_vertex),
        "total": c.total,
        "complete": c.complete,
        "seed": c.seed,
        "strata": [[list(k), v] for k, v in sorted(c.strata.items())],
        "entries": [{"dims": list(e.dims), "maps": [m.tolist() for m in e.maps]} for e in c.entries],
        "hom_dims": c.hom_dims.tolist(),
    }


def cache_key(q: Quiver, p: int, per_vertex, total) -> str:
    spec = QuiverSpec(q).canonical() + f"field {p}\nper_vertex {per_vertex}\ntotal {total}\nversion {CACHE_VERSION}\n"
    return hashlib.sha256(spec.encode()).hexdigest()[:16]


def cache_path(directory: str | os.PathLike, q: Quiver, p: int, per_vertex, total) -> Path:
    return Path(directory) / f"catalog-{cache_key(q, p, per_vertex, total)}.lcc"


def dumps(c: Catalog) -> bytes:
    body = json.dumps(_payload(c), sort_keys=True, separators=(",", ":")).encode()
    head = f"{CACHE_MAGIC} {CACHE_VERSION}\nsha256 {hashlib.sha256(body).hexdigest()}\n".encode()
    return head + body + b"\n"


def loads(data: bytes) -> Catalog:
    try:
        first, second, body = data.split(b"\n", 2)
    except ValueError:
        raise CacheError("truncated cache header") from None
    parts = first.decode(errors="replace").split()
    if len(parts) != 2 or parts[0] != CACHE_MAGIC:
        raise CacheError("not a catalog cache file")
    if parts[1] != str(CACHE_VERSION):
        raise CacheError(f"cache version mismatch: file has version {parts[1]}, reader expects version {CACHE_VERSION}")
    body = body.rstrip(b"\n")
    digest = second.decode(errors="replace").split()
    if len(digest) != 2 or digest[0] != "sha256" or digest[1] != hashlib.sha256(body).hexdigest():
        raise CacheError("checksum failure: cache file is corrupt or truncated")
    d = json.loads(body)
    q = Quiver.from_edges(d["quiver"]["vertices"], [tuple(a) for a in d["quiver"]["arrows"]])
    p = int(d["p"])
    entries = []
    for e in d["entries"]:
        dims = tuple(e["dims"])
        maps = []
        for k, m in enumerate(e["maps"]):
            s, t = q.arrow_ends(k)
            maps.append(np.array(m, dtype=np.int64).reshape(dims[t], dims[s]))
        entries.append(Rep(q, dims, tuple(maps), p))
    n = len(entries)
    hd = np.array(d["hom_dims"], dtype=np.int64).reshape(n, n)
    strata = {tuple(k): v for k, v in d["strata"]}
    return Catalog(q, p, tuple(d["per_vertex"]), d["total"], tuple(entries), hd, bool(d["complete"]), strata, int(d["seed"]))


class _Lock:
    def __init__(self, path: Path):
        self.path = path.with_name(path.name + ".lock")

    def __enter__(self):
        self.fh = open(self.path, "a+")
        fcntl.flock(self.fh, fcntl.LOCK_EX)
        return self

    def __exit__(self, *exc):
        fcntl.flock(self.fh, fcntl.LOCK_UN)
        self.fh.close()


def cache_write(c: Catalog, path: str | os.PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = dumps(c)
    with _Lock(path):
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    return path


def cache_read(path: str | os.PathLike) -> Catalog:
    return loads(Path(path).read_bytes())
