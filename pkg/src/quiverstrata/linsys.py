"""Exact linear systems cut out by degree-1 relations on fixed Jordan data.

Fixing the loop matrices turns every degree-1 relation into a linear
condition on the entries of the non-loop arrow matrices.  The rank of the
stacked system is the codimension of its solution space inside the ambient
arrow space; everything here is exact rational arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple, Optional, Sequence

from . import _kernels
from .partitions import JordanAssignment, jordan_matrix
from .quiver import BoundQuiverPresentation, Relation

__all__ = [
    "SymbolicArrowEntry",
    "ConstraintSystem",
    "UnsupportedDegreeError",
    "BadPrimeError",
    "evaluate_relation",
    "assemble_system",
    "assemble_system_at",
    "rank_exact",
    "rank_mod",
    "codim_c",
    "c_additivity_split",
]


class UnsupportedDegreeError(ValueError):
    """A relation term does not contain exactly one non-loop arrow."""


class BadPrimeError(ValueError):
    """A rational entry cannot be reduced modulo the requested prime."""


class SymbolicArrowEntry(NamedTuple):
    arrow: str
    row: int
    col: int


@dataclass
class ConstraintSystem:
    """Stacked exact-rational system; columns are unknown arrow entries."""

    matrix: list[list[Fraction]]
    row_labels: list[tuple[int, int, int]]  # (relation index, i, j)
    columns: list[SymbolicArrowEntry]

    @property
    def ambient_dim(self) -> int:
        return len(self.columns)

    @property
    def n_rows(self) -> int:
        return len(self.matrix)

    def export_text(self) -> str:
        """Plain text dump: `rows cols` header, entries as num/den."""
        lines = [f"{self.n_rows} {self.ambient_dim}"]
        for row in self.matrix:
            lines.append(" ".join(f"{x.numerator}/{x.denominator}" for x in row))
        return "\n".join(lines) + "\n"


def _mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = [[Fraction(0)] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        for t in range(k):
            v = ai[t]
            if v:
                bt = b[t]
                oi = out[i]
                for j in range(m):
                    if bt[j]:
                        oi[j] += v * bt[j]
    return out


def _mat_pow(mat, k: int, d: int):
    out = [[Fraction(1) if i == j else Fraction(0) for j in range(d)] for i in range(d)]
    for _ in range(k):
        out = _mat_mul(out, mat)
    return out


def _as_rows(mat) -> list[list[Fraction]]:
    return [[Fraction(int(v)) if not isinstance(v, Fraction) else v for v in row]
            for row in mat]


def _decompose_term(pres: BoundQuiverPresentation, path) -> tuple[int, str, int]:
    """Split a degree-1 path into loop-power prefix, arrow, loop-power suffix."""
    quiver = pres.quiver
    pre = 0
    arrow_name: Optional[str] = None
    post = 0
    for name in path.arrows:
        a = quiver.arrow(name)
        if a.is_loop:
            if arrow_name is None:
                pre += 1
            else:
                post += 1
        else:
            if arrow_name is not None:
                raise UnsupportedDegreeError(
                    f"path {path} has degree {path.degree}; the linear engine "
                    "supports exactly one non-loop arrow per term"
                )
            arrow_name = name
    if arrow_name is None:
        raise UnsupportedDegreeError(f"path {path} contains no non-loop arrow")
    return pre, arrow_name, post


def evaluate_relation(pres: BoundQuiverPresentation, rel: Relation,
                      ja: JordanAssignment):
    """Evaluate a degree-1 relation on the Jordan matrices of ``ja``.

    Returns a d_target x d_source grid of linear forms, each a mapping
    from :class:`SymbolicArrowEntry` to its rational coefficient.  The
    forms have no constant part.
    """
    loop_mats = {v: _as_rows(jordan_matrix(p))
                 for v, p in zip(ja.vertices, ja.partitions)}
    dims = dict(zip(ja.vertices, ja.dims))
    return _evaluate_at(pres, rel, loop_mats, dims)


def _evaluate_at(pres: BoundQuiverPresentation, rel: Relation,
                 loop_mats: Mapping[str, list[list[Fraction]]],
                 dims: Mapping[str, int]):
    quiver = pres.quiver
    dt = dims[rel.target]
    ds = dims[rel.source]
    grid = [[dict() for _ in range(ds)] for _ in range(dt)]
    if rel.is_zero:
        return grid
    for coeff, path in rel.terms:
        pre, arrow_name, post = _decompose_term(pres, path)
        arrow = quiver.arrow(arrow_name)
        A = _mat_pow(loop_mats[arrow.target], pre, dims[arrow.target])
        B = _mat_pow(loop_mats[arrow.source], post, dims[arrow.source])
        for i in range(dt):
            for k in range(dims[arrow.target]):
                aik = A[i][k]
                if not aik:
                    continue
                for l in range(dims[arrow.source]):
                    for j in range(ds):
                        blj = B[l][j]
                        if not blj:
                            continue
                        key = SymbolicArrowEntry(arrow_name, k, l)
                        form = grid[i][j]
                        form[key] = form.get(key, Fraction(0)) + coeff * aik * blj
    return grid


def assemble_system_at(pres: BoundQuiverPresentation,
                       relations: Sequence[Relation],
                       loop_mats: Mapping[str, list[list[Fraction]]],
                       dims: Mapping[str, int]) -> ConstraintSystem:
    """Stack the evaluated relations into one exact system.

    Columns run over all non-loop arrows in declaration order, entries
    row-major, so the column count is the ambient arrow dimension.
    """
    columns: list[SymbolicArrowEntry] = []
    for a in pres.quiver.non_loop_arrows:
        for k in range(dims[a.target]):
            for l in range(dims[a.source]):
                columns.append(SymbolicArrowEntry(a.name, k, l))
    col_index = {c: idx for idx, c in enumerate(columns)}
    matrix: list[list[Fraction]] = []
    row_labels: list[tuple[int, int, int]] = []
    for ridx, rel in enumerate(relations):
        grid = _evaluate_at(pres, rel, loop_mats, dims)
        for i, row in enumerate(grid):
            for j, form in enumerate(row):
                out = [Fraction(0)] * len(columns)
                for key, val in form.items():
                    out[col_index[key]] = val
                matrix.append(out)
                row_labels.append((ridx, i, j))
    return ConstraintSystem(matrix, row_labels, columns)


def assemble_system(pres: BoundQuiverPresentation, ja: JordanAssignment,
                    relations: Optional[Sequence[Relation]] = None) -> ConstraintSystem:
    if relations is None:
        relations = pres.relations
    loop_mats = {v: _as_rows(jordan_matrix(p))
                 for v, p in zip(ja.vertices, ja.partitions)}
    dims = dict(zip(ja.vertices, ja.dims))
    return assemble_system_at(pres, relations, loop_mats, dims)


def rank_exact(cs: ConstraintSystem) -> int:
    """Rank over the rationals via fraction-free elimination, full pivoting."""
    int_rows = []
    for row in cs.matrix:
        den = 1
        for x in row:
            if x.denominator != 1:
                den = den * x.denominator // _gcd(den, x.denominator)
        int_rows.append([int(x * den) for x in row])
    return _kernels.exact_rank_int(int_rows)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def rank_mod(cs: ConstraintSystem, p: int) -> int:
    """Rank of the same system with entries reduced modulo a prime."""
    rows = []
    for row in cs.matrix:
        out = []
        for x in row:
            den = x.denominator % p
            if den == 0:
                raise BadPrimeError(f"denominator of {x} vanishes mod {p}")
            out.append((x.numerator % p) * pow(den, p - 2, p) % p)
        rows.append(out)
    if not rows or not rows[0]:
        return 0
    return _kernels.rank_mod_p(rows, p)


def codim_c(pres: BoundQuiverPresentation, ja: JordanAssignment,
            relations: Optional[Sequence[Relation]] = None) -> int:
    """Codimension of the arrow solution space for the given Jordan types."""
    return rank_exact(assemble_system(pres, ja, relations))


def c_additivity_split(pres: BoundQuiverPresentation, ja: JordanAssignment,
                       relations: Optional[Sequence[Relation]] = None
                       ) -> dict[tuple[int, int], int]:
    """Codimension table over single parts of the two endpoint partitions.

    All relations must share one target and one source vertex; the table
    entry (i, j) is the codimension computed with part i alone at the
    target and part j alone at the source.  The values sum to the full
    codimension.
    """
    from .partitions import Partition

    if relations is None:
        relations = pres.relations
    if not relations:
        raise ValueError("no relations to split")
    tgt = relations[0].target
    src = relations[0].source
    if tgt == src:
        raise ValueError("relations must join two distinct vertices")
    for rel in relations:
        if rel.target != tgt or rel.source != src:
            raise ValueError("relations must share endpoints for the split")
    p_parts = ja.partition(tgt).parts
    q_parts = ja.partition(src).parts
    table: dict[tuple[int, int], int] = {}
    for i, pi in enumerate(p_parts):
        for j, qj in enumerate(q_parts):
            sub = {v: part for v, part in zip(ja.vertices, ja.partitions)}
            sub[tgt] = Partition((pi,), pres.order(tgt))
            sub[src] = Partition((qj,), pres.order(src))
            sub_ja = JordanAssignment.for_presentation(pres, sub)
            table[(i, j)] = codim_c(pres, sub_ja, relations)
    return table
