"""Enumeration of admissible triples and the on-disk result cache.

The cache is a CSV table (one row per ordered triple) plus a JSON sidecar
holding the full records.  Re-running a search only evaluates triples that
are not cached yet; rows are kept in canonical (Np1, Np2, Np3) order.
"""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Optional, Sequence

from sympy import primerange

from .conic import DEFAULT_HEIGHT_BOUND, ConicSolution
from .errors import PreconditionFailed
from .ok_ring import QuadField, RingElement, class_numbers, fundamental_unit
from .redei import build_redei, pair_admissible, triple_admissible, triple_report
from .residue import PrimeIdeal, ideals_above, normalized_generator, quad_symbol

CSV_COLUMNS = ("p", "Np1", "pi1", "Np2", "pi2", "Np3", "pi3", "symbol")


@dataclass(frozen=True)
class SearchRecord:
    p: int
    triple: tuple[PrimeIdeal, PrimeIdeal, PrimeIdeal]
    pis: tuple[RingElement, RingElement, RingElement]
    symbol: int
    solution: ConicSolution
    timestamp: str

    @property
    def key(self) -> tuple:
        return tuple(P.sort_key() for P in self.triple)

    def csv_row(self) -> list[str]:
        row = [str(self.p)]
        for P, pi in zip(self.triple, self.pis):
            row += [str(P.norm), pi.to_text()]
        return row + [str(self.symbol)]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "triple": [P.to_json() for P in self.triple],
            "pis": [pi.to_json() for pi in self.pis],
            "symbol": self.symbol,
            "solution": self.solution.to_json(),
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_json(cls, data: dict) -> SearchRecord:
        return cls(
            int(data["p"]),
            tuple(PrimeIdeal.from_json(d) for d in data["triple"]),
            tuple(RingElement.from_json(d) for d in data["pis"]),
            int(data["symbol"]),
            ConicSolution.from_json(data["solution"]),
            data["timestamp"],
        )

    def recompute(self) -> int:
        """Re-derive the symbol from the stored solution."""
        p1, p2, p3 = self.triple
        data = build_redei(p1, p2, solution=self.solution)
        return triple_report(p1, p2, p3, data).symbol


def check_search_field(p: int) -> QuadField:
    field = QuadField(p)
    if class_numbers(field).h_plus != 1:
        raise PreconditionFailed(f"Q(√{p}) has nontrivial narrow class group")
    if p % 8 != 5:
        raise PreconditionFailed("the conic route needs p = 5 mod 8")
    return field


def candidate_ideals(field: QuadField, norm_bound: int) -> list[PrimeIdeal]:
    """Odd principal primes with N = 1 mod 4, N <= bound and (eps/P) = 1."""
    eps = fundamental_unit(field).fundamental_unit
    out = []
    for ell in primerange(3, norm_bound + 1):
        if ell == field.p:
            continue
        for P in ideals_above(field, ell):
            if P.norm <= norm_bound and P.norm % 4 == 1 and P.generator is not None:
                if quad_symbol(eps, P) == 1:
                    out.append(P)
    return sorted(out, key=PrimeIdeal.sort_key)


def admissible_triples(field: QuadField, norm_bound: int) -> list[tuple[PrimeIdeal, PrimeIdeal, PrimeIdeal]]:
    ideals = candidate_ideals(field, norm_bound)
    pairs = [(a, b) for a in ideals for b in ideals if a != b and pair_admissible(a, b)]
    return [(a, b, c) for a, b in pairs for c in ideals if c not in (a, b) and triple_admissible(a, b, c)]


def _evaluate_chunk(args) -> list[dict]:
    triples, height_bound, timestamp = args
    out = []
    cache = {}
    for p1, p2, p3 in triples:
        if (p1, p2) not in cache:
            cache[(p1, p2)] = build_redei(p1, p2, height_bound)
        data = cache[(p1, p2)]
        res = triple_report(p1, p2, p3, data, height_bound=height_bound)
        pi3 = normalized_generator(p3, False, True)
        out.append(
            SearchRecord(
                p1.field.p,
                (p1, p2, p3),
                (data.pi1, data.pi2, pi3),
                res.symbol,
                res.solution,
                timestamp,
            ).to_json()
        )
    return out


def _chunks(items: Sequence, n: int) -> list[Sequence]:
    """Split into n contiguous ranges, keeping triples of one pair together."""
    if n <= 1 or len(items) < 2:
        return [items]
    size = -(-len(items) // n)
    bounds, start = [], 0
    while start < len(items):
        end = min(start + size, len(items))
        while end < len(items) and items[end][:2] == items[end - 1][:2]:
            end += 1
        bounds.append((start, end))
        start = end
    return [items[a:b] for a, b in bounds]


def run_search(
    p: int,
    norm_bound: int,
    jobs: int = 1,
    height_bound: int = DEFAULT_HEIGHT_BOUND,
    existing: Iterable[SearchRecord] = (),
) -> list[SearchRecord]:
    """All records for admissible triples up to the bound, existing ones reused."""
    field = check_search_field(p)
    known = {r.key: r for r in existing if r.p == p}
    todo = [t for t in admissible_triples(field, norm_bound) if tuple(P.sort_key() for P in t) not in known]
    timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    chunks = [(c, height_bound, timestamp) for c in _chunks(todo, jobs) if len(c)]
    if jobs > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_evaluate_chunk, chunks))
    else:
        results = [_evaluate_chunk(c) for c in chunks]
    for batch in results:
        for d in batch:
            rec = SearchRecord.from_json(d)
            known[rec.key] = rec
    return sorted(known.values(), key=lambda r: r.key)


# -- cache I/O ---------------------------------------------------------------


def sidecar_path(csv_path: Path) -> Path:
    return Path(csv_path).with_suffix(".json")


def records_csv(records: Sequence[SearchRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(r.csv_row())
    return buf.getvalue()


def load_cache(csv_path: Path) -> list[SearchRecord]:
    csv_path = Path(csv_path)
    if not csv_path.exists():
        return []
    side = sidecar_path(csv_path)
    try:
        with open(side, encoding="utf-8") as fh:
            data = json.load(fh)
        with open(csv_path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except (OSError, json.JSONDecodeError) as exc:
        raise OSError(f"cannot read search cache {csv_path} / {side}: {exc}") from exc
    records = [SearchRecord.from_json(d) for d in data["records"]]
    if not rows or tuple(rows[0]) != CSV_COLUMNS or len(rows) - 1 != len(records):
        raise OSError(f"search cache {csv_path} does not match its sidecar {side}")
    for row, rec in zip(rows[1:], records):
        if row != rec.csv_row():
            raise OSError(f"search cache {csv_path} row {row} disagrees with the sidecar")
    return records


def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_cache(csv_path: Path, records: Sequence[SearchRecord], meta: Optional[dict] = None):
    """Write the sidecar first, then the table, so a crash never leaves rows without records."""
    csv_path = Path(csv_path)
    side = sidecar_path(csv_path)
    payload = {"columns": list(CSV_COLUMNS), **(meta or {}), "records": [r.to_json() for r in records]}
    try:
        _atomic_write(side, json.dumps(payload, indent=1, ensure_ascii=False) + "\n")
        _atomic_write(csv_path, records_csv(records))
    except OSError as exc:
        raise OSError(f"cannot write search cache {csv_path}: {exc}") from exc
