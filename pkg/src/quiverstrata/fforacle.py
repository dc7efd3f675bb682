"""Exhaustive finite-field enumeration of representation points.

This layer is verification-only ground truth: it iterates every matrix
assignment over F_q, keeps the points satisfying the nilpotency bounds and
the mixed relations, and classifies each point by the Jordan types of its
loop actions.  Nothing here feeds back into the exact engine; the counting
identity ties the two together:

    |stratum| = (product of loop orbit counts) * q^(N - c)

with N the ambient arrow dimension and c the exact codimension.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .linsys import BadPrimeError, codim_c
from .partitions import (JordanAssignment, orbit_count_ff_cached,
                         partition_from_ranks, partitions_bounded)
from .quiver import BoundQuiverPresentation
from .strata import ambient_arrow_dim, assignments_for

__all__ = [
    "StratumCountTable",
    "EnumerationCapExceeded",
    "IdentityRow",
    "EstimateRow",
    "enumerate_and_classify",
    "verify_count_identity",
    "dimension_estimate",
    "count_table_csv",
]


class EnumerationCapExceeded(ValueError):
    pass


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    f = 2
    while f * f <= q:
        if q % f == 0:
            return False
        f += 1
    return True


@dataclass
class StratumCountTable:
    q: int
    dims: tuple[int, ...]
    counts: dict[JordanAssignment, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def enumerate_and_classify(pres: BoundQuiverPresentation, dims: Sequence[int],
                           q: int, max_points: int = 2_000_000
                           ) -> StratumCountTable:
    """Exhaustive point count per Jordan assignment.

    The loop matrices are pre-enumerated per vertex (only the nilpotent
    candidates survive, which prunes the dominant factor), then every
    combination of loop candidates and arrow matrices is tested against
    the relations.  ``max_points`` caps both each per-vertex enumeration
    and the final product of candidate counts.
    """
    if not _is_prime(q):
        raise ValueError("q must be prime")
    dims = tuple(int(d) for d in dims)
    quiver = pres.quiver
    if len(dims) != len(quiver.vertices):
        raise ValueError("dimension vector length must match the vertex count")
    dim_of = dict(zip(quiver.vertices, dims))
    order_of = pres.order_map

    # mixed-radix layout of the tally keys, one digit per vertex
    radices = [len(partitions_bounded(d, order_of[v]))
               for v, d in zip(quiver.vertices, dims)]
    weights = [0] * len(radices)
    w = 1
    for i in range(len(radices) - 1, -1, -1):
        weights[i] = w
        w *= radices[i]
    n_keys = w

    slot_of: dict[str, int] = {}
    cand_mats: list[np.ndarray] = []
    cand_types: list[np.ndarray] = []
    slot_rows: list[int] = []
    slot_cols: list[int] = []
    slot_weight: list[int] = []

    for a in quiver.arrows:
        d_t, d_s = dim_of[a.target], dim_of[a.source]
        if a.is_loop:
            v = a.source
            d = d_t
            if d == 0:
                mats = np.zeros((1, 0, 0), np.int64)
                types = np.zeros(1, np.int64)
            else:
                if q ** (d * d) > max_points:
                    raise EnumerationCapExceeded(
                        f"loop enumeration at {v!r} needs {q ** (d * d)} points, "
                        f"cap is {max_points}"
                    )
                mats, sigs = _kernels.enumerate_nilpotent(d, order_of[v], q)
                plist = partitions_bounded(d, order_of[v])
                index = {p.parts: k for k, p in enumerate(plist)}
                types = np.empty(mats.shape[0], np.int64)
                for k, sig in enumerate(sigs):
                    parts = _unpack_signature(int(sig), d, order_of[v])
                    types[k] = index[parts]
            vi = quiver.vertices.index(v)
            slot_weight.append(weights[vi])
            cand_types.append(types)
            cand_mats.append(mats)
            slot_rows.append(d)
            slot_cols.append(d)
        else:
            n_entries = d_t * d_s
            if n_entries == 0:
                mats = np.zeros((1, d_t, d_s), np.int64)
            else:
                count = q ** n_entries
                codes = np.arange(count, dtype=np.int64)
                mats = np.zeros((count, n_entries), np.int64)
                rem = codes.copy()
                for pos in range(n_entries - 1, -1, -1):
                    mats[:, pos] = rem % q
                    rem //= q
                mats = mats.reshape(count, d_t, d_s)
            cand_mats.append(mats)
            cand_types.append(np.zeros(mats.shape[0], np.int64))
            slot_rows.append(d_t)
            slot_cols.append(d_s)
            slot_weight.append(0)
        slot_of[a.name] = len(cand_mats) - 1

    work = 1
    for m in cand_mats:
        work *= m.shape[0]
    if work > max_points:
        raise EnumerationCapExceeded(f"{work} points exceed the cap {max_points}")

    # flatten candidates into one padded buffer
    dmax = max([max(r, c) for r, c in zip(slot_rows, slot_cols)], default=0)
    total_cands = sum(m.shape[0] for m in cand_mats)
    cand_flat = np.zeros((max(total_cands, 1), dmax, dmax), np.int64)
    cand_off = np.zeros(len(cand_mats), np.int64)
    cand_cnt = np.zeros(len(cand_mats), np.int64)
    cand_type = np.zeros(max(total_cands, 1), np.int64)
    pos = 0
    for k, (mats, types) in enumerate(zip(cand_mats, cand_types)):
        cand_off[k] = pos
        cand_cnt[k] = mats.shape[0]
        r, c = slot_rows[k], slot_cols[k]
        if r and c:
            cand_flat[pos:pos + mats.shape[0], :r, :c] = mats
        cand_type[pos:pos + mats.shape[0]] = types
        pos += mats.shape[0]

    # relations in flat arrays (only those with a nonzero equation grid)
    rel_rows: list[int] = []
    rel_cols: list[int] = []
    rel_term_start = [0]
    term_coeff: list[int] = []
    term_path_start = [0]
    path_slots: list[int] = []
    for rel in pres.relations:
        d_t, d_s = dim_of[rel.target], dim_of[rel.source]
        if d_t == 0 or d_s == 0:
            continue
        rel_rows.append(d_t)
        rel_cols.append(d_s)
        for coeff, path in rel.terms:
            den = coeff.denominator % q
            if den == 0:
                raise BadPrimeError(f"coefficient {coeff} cannot reduce mod {q}")
            term_coeff.append((coeff.numerator % q) * pow(den, q - 2, q) % q)
            path_slots.extend(slot_of[name] for name in path.arrows)
            term_path_start.append(len(path_slots))
        rel_term_start.append(len(term_coeff))

    tally = _kernels.tally_points(
        cand_flat, cand_off, cand_cnt,
        np.array(slot_rows, np.int64) if slot_rows else np.zeros(0, np.int64),
        np.array(slot_cols, np.int64) if slot_cols else np.zeros(0, np.int64),
        np.array(slot_weight, np.int64) if slot_weight else np.zeros(0, np.int64),
        cand_type,
        np.array(rel_rows, np.int64), np.array(rel_cols, np.int64),
        np.array(rel_term_start, np.int64), np.array(term_coeff, np.int64),
        np.array(term_path_start, np.int64),
        np.array(path_slots, np.int64) if path_slots else np.zeros(0, np.int64),
        q, n_keys,
    )

    per_vertex = [partitions_bounded(d, order_of[v])
                  for v, d in zip(quiver.vertices, dims)]
    counts: dict[JordanAssignment, int] = {}
    for key in np.nonzero(tally)[0]:
        rem = int(key)
        combo = []
        for radix, weight in zip(radices, weights):
            digit, rem = divmod(rem, weight)
            combo.append(per_vertex[len(combo)][digit])
        ja = JordanAssignment.for_presentation(pres, combo)
        counts[ja] = int(tally[key])
    return StratumCountTable(q, dims, counts)


def _unpack_signature(sig: int, d: int, m: int) -> tuple[int, ...]:
    ranks = []
    for _ in range(1, m):
        sig, digit = divmod(sig, d + 1)
        ranks.append(digit)
    return partition_from_ranks(d, ranks, m).parts


@dataclass(frozen=True)
class IdentityRow:
    assignment: JordanAssignment
    count: int
    predicted: int

    @property
    def ok(self) -> bool:
        return self.count == self.predicted


def verify_count_identity(table: StratumCountTable,
                          pres: BoundQuiverPresentation) -> list[IdentityRow]:
    """Per-stratum check of count = (orbit counts) * q^(N - c).

    A failure at desk scale means either the prime is bad for the exact
    rank or the engine miscounts; both are reportable findings.
    """
    q = table.q
    n = ambient_arrow_dim(pres, table.dims)
    rows = []
    for ja in assignments_for(pres, table.dims):
        c = codim_c(pres, ja)
        pred = q ** (n - c)
        for p in ja.partitions:
            pred *= orbit_count_ff_cached(p, q)
        rows.append(IdentityRow(ja, table.counts.get(ja, 0), pred))
    return rows


@dataclass(frozen=True)
class EstimateRow:
    assignment: JordanAssignment
    estimate: Optional[int]
    consistent: bool


def dimension_estimate(tables: Sequence[StratumCountTable]) -> list[EstimateRow]:
    """Integer growth exponent of each stratum count across field sizes.

    Rounds log_q(count) at each q; the estimates must agree across fields,
    otherwise the row is flagged inconsistent (largest field wins).  Strata
    absent from some table give no estimate.
    """
    if len({t.q for t in tables}) < 2:
        raise ValueError("need counts at two or more field sizes")
    ordered = sorted(tables, key=lambda t: t.q)
    keys: list[JordanAssignment] = []
    for t in ordered:
        for ja in t.counts:
            if ja not in keys:
                keys.append(ja)
    out = []
    for ja in keys:
        counts = [t.counts.get(ja, 0) for t in ordered]
        if any(c == 0 for c in counts):
            out.append(EstimateRow(ja, None, all(c == 0 for c in counts)))
            continue
        ests = [round(math.log(c) / math.log(t.q)) if c > 1 else 0
                for c, t in zip(counts, ordered)]
        out.append(EstimateRow(ja, ests[-1], len(set(ests)) == 1))
    return out


def count_table_csv(table: StratumCountTable,
                    pres: BoundQuiverPresentation) -> str:
    """CSV export: assignment, count, q, predicted count, pass/fail."""
    rows = verify_count_identity(table, pres)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["assignment", "count", "q", "predicted", "pass"])
    for row in rows:
        writer.writerow([row.assignment.serialize(), row.count, table.q,
                         row.predicted, "pass" if row.ok else "fail"])
    return buf.getvalue()
