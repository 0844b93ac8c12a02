"""Exhaustive energy ranking of trees of a given order."""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path as FsPath
from typing import Iterable, Sequence

from .charpoly import phi_tilde
from .energy import EnergyValue, energy
from .enumeration import DEFAULT_CAP, level_sequences, forest_from_levels
from .errors import CapExceeded, UnresolvedTie
from .graph import canonical_code, from_canonical_code, recognize
from .poly import ExactPoly
from .quasiorder import Relation, compare

CACHE_ENV = "TREENERGY_CACHE_DIR"
CACHE_FILE = "energies.tsv"
MIN_TOL = 1e-14


@dataclass(frozen=True)
class RankingEntry:
    rank: int
    code: str
    spec: str | None
    energy: EnergyValue
    phi_tilde: ExactPoly
    tie_group: int
    tie: str = ""  # "", "identical" (same phi_tilde) or "unresolved"
    ordered_by: str = "energy"  # or "quasi-order" when radii overlapped

    def to_record(self) -> dict:
        return {
            "rank": self.rank,
            "code": self.code,
            "spec": self.spec,
            "energy": self.energy.midpoint,
            "radius": self.energy.radius,
            "tie_group": self.tie_group,
            "tie": self.tie,
            "ordered_by": self.ordered_by,
            "phi_tilde": str(self.phi_tilde),
        }


class EnergyCache:
    """Append-only tab-separated file: code, phi_tilde, midpoint, radius."""

    def __init__(self, directory: str | os.PathLike | None) -> None:
        self.path = None if directory is None else FsPath(directory) / CACHE_FILE
        self.data: dict[str, tuple[ExactPoly, EnergyValue]] = {}
        self.pending: list[str] = []
        if self.path is not None and self.path.exists():
            for line in self.path.read_text().splitlines():
                parts = line.split("\t")
                if len(parts) != 4:
                    continue
                code, poly, mid, rad = parts
                self.data[code] = (ExactPoly.from_text(poly), EnergyValue(float(mid), float(rad)))

    @classmethod
    def from_env(cls) -> "EnergyCache":
        return cls(os.environ.get(CACHE_ENV))

    def get(self, code: str, tol: float) -> tuple[ExactPoly, EnergyValue] | None:
        hit = self.data.get(code)
        if hit is not None and hit[1].radius <= tol:
            return hit
        return None

    def put(self, code: str, poly: ExactPoly, e: EnergyValue) -> None:
        self.data[code] = (poly, e)
        self.pending.append(f"{code}\t{poly}\t{e.midpoint!r}\t{e.radius!r}")

    def flush(self) -> None:
        if self.path is None or not self.pending:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a") as fh:
            fh.write("\n".join(self.pending) + "\n")
        self.pending.clear()


def _evaluate(layouts: Sequence[Sequence[int]], tol: float) -> list[tuple[str, str, float, float]]:
    out = []
    for layout in layouts:
        t = forest_from_levels(layout)
        e = energy(t, tol)
        out.append((canonical_code(t), str(phi_tilde(t)), e.midpoint, e.radius))
    return out


def _chunks(items: list, size: int) -> Iterable[list]:
    for i in range(0, len(items), size):
        yield items[i : i + size]


@dataclass
class _Row:
    code: str
    poly: ExactPoly
    e: EnergyValue
    ordered_by: str = "energy"


def _tighten(row: _Row, tol: float) -> None:
    row.e = energy(from_canonical_code(row.code), tol)


def rank_by_energy(
    n: int,
    top: int | None = None,
    tol: float = 1e-10,
    jobs: int = 1,
    cache: EnergyCache | None = None,
    strict: bool = False,
    cap: int = DEFAULT_CAP,
) -> list[RankingEntry]:
    """All trees of order ``n`` by certified energy, descending.

    Neighbours whose intervals overlap are recomputed at tighter tolerances
    down to 1e-14; if that does not separate them a strict quasi-order decides,
    otherwise they share a tie group (``identical`` when their ``phi_tilde``
    agree, else ``unresolved``; with ``strict`` the latter raises).
    """
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the enumeration cap {cap}")
    cache = cache if cache is not None else EnergyCache(None)
    layouts = list(level_sequences(n))
    rows: list[_Row] = []
    todo = []
    for layout in layouts:
        if cache.path is None:
            todo.append(layout)
            continue
        code = canonical_code(forest_from_levels(layout))
        hit = cache.get(code, tol)
        if hit is None:
            todo.append(layout)
        else:
            rows.append(_Row(code, hit[0], hit[1]))
    if jobs > 1 and len(todo) > 64:
        size = max(16, len(todo) // (jobs * 8))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = [r for chunk in pool.map(_evaluate, list(_chunks(todo, size)), [tol] * ((len(todo) + size - 1) // size)) for r in chunk]
    else:
        results = _evaluate(todo, tol)
    for code, poly, mid, rad in results:
        p = ExactPoly.from_text(poly)
        e = EnergyValue(mid, rad)
        rows.append(_Row(code, p, e))
        cache.put(code, p, e)
    cache.flush()

    rows.sort(key=lambda r: (-r.e.midpoint, r.code))
    limit = len(rows) if top is None else min(len(rows), top + 1)
    links: dict[int, str] = {}  # i -> kind of tie between rows i and i+1
    i = 0
    while i < limit - 1:
        a, b = rows[i], rows[i + 1]
        if a.poly == b.poly:
            links[i] = "identical"
            i += 1
            continue
        t = min(a.e.radius, b.e.radius, tol)
        while a.e.overlaps(b.e) and t > MIN_TOL:
            t = max(t / 100, MIN_TOL)
            _tighten(a, t)
            _tighten(b, t)
        if not a.e.overlaps(b.e):
            if b.e.lo > a.e.hi:
                rows[i], rows[i + 1] = b, a
                links.pop(i, None)
                i = max(i - 1, 0)
                continue
            links.pop(i, None)
            i += 1
            continue
        rel = compare(a.poly, b.poly).relation
        if rel is Relation.STRICTLY_GREATER:
            b.ordered_by = "quasi-order"
            links.pop(i, None)
            i += 1
            continue
        if rel is Relation.STRICTLY_LESS:
            a.ordered_by = "quasi-order"
            rows[i], rows[i + 1] = b, a
            i = max(i - 1, 0)
            continue
        if strict:
            raise UnresolvedTie(
                f"cannot order {a.code} and {b.code}: energies {a.e} and {b.e} overlap "
                f"at tolerance {MIN_TOL:g} and their phi_tilde are incomparable"
            )
        links[i] = "unresolved"
        i += 1

    count = len(rows) if top is None else min(len(rows), top)
    entries = []
    group = 1
    for r in range(count):
        if r == 0 or (r - 1) not in links:
            group = r + 1
        kind = links.get(r - 1, "") or links.get(r, "")
        row = rows[r]
        spec = recognize(from_canonical_code(row.code))
        entries.append(
            RankingEntry(r + 1, row.code, None if spec is None else str(spec), row.e, row.poly, group, kind, row.ordered_by)
        )
    return entries


CSV_FIELDS = ("rank", "code", "spec", "energy", "radius", "tie_group")


def ranking_csv(entries: Sequence[RankingEntry]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for e in entries:
        w.writerow([e.rank, e.code, e.spec or "", f"{e.energy.midpoint:.12f}", f"{e.energy.radius:.3e}", e.tie_group])
    return buf.getvalue()


def ranking_json(entries: Sequence[RankingEntry]) -> str:
    return json.dumps([e.to_record() for e in entries], indent=2)
