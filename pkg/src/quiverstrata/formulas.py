"""Closed-form codimensions for the supported one-arrow relation shapes.

Each item fixes a relation shape on the two-vertex quiver with loops at
both ends (single parts p and q for the Jordan types) and states the rank
of the induced linear system:

    1   eps0^l a                                            p - l
    2   eps0^l a + eps0^(l-1) a eps1          (q = 2)       2 (p - l)
    3   eps0 a + a eps1                                     q (p - 1)
    4   eps0 a + b eps1                                     p q - 1
    5   eps0 a + a eps1 + b eps1^(q-1)                      q (p - 1) + 1
    6   sum_{i=q-l}^{q-1} eps0^(p+q-l-i-1) a eps1^i         l
    7   eps0^(p-1) a eps1^(q-2) + t eps0^(p-2) a eps1^(q-1)
          + eps0^(p-1) c eps1^(q-1)                         2
    8   eps0^(p-1) a eps1^(q-2) + eps0^(p-2) b eps1^(q-1)
          + eps0^(p-1) c eps1^(q-1)                         3
    9   eps0^(p-1) a eps1^(q-3) + eps0^(p-2) a eps1^(q-2)
          + t eps0^(p-3) a eps1^(q-1) + eps0^(p-2) c1 eps1^(q-1)
          + eps0^(p-1) c2 eps1^(q-1)             (t != 1)   4
    10  item 6 + eps0^(p-2) b eps1^(q-1)
          + eps0^(p-1) c eps1^(q-1)              (l >= 3)   l + 1
    11  item 6 + t eps0^(p-3) a eps1^(q-1) + eps0^(p-2) c1 eps1^(q-1)
          + eps0^(p-1) c2 eps1^(q-1)    (l >= 4, t != 0)    l + 1

Here a, b are linearly independent arrow combinations and c, c1, c2 are
arbitrary ones; the sweep instantiates them as distinct arrows.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .partitions import JordanAssignment, Partition
from .quiver import Arrow, BoundQuiverPresentation, Quiver, Relation
from .linsys import assemble_system, rank_exact

__all__ = [
    "SideConditionError",
    "FormulaCase",
    "c_closed_form",
    "formula_cases",
    "build_case",
    "evaluate_case",
]


class SideConditionError(ValueError):
    pass


# number of distinct arrow symbols each item consumes
_SYMBOLS = {1: 1, 2: 1, 3: 1, 4: 2, 5: 2, 6: 1, 7: 2, 8: 3, 9: 3, 10: 3, 11: 3}
_HAS_LAMBDA = {7, 9, 11}


def c_closed_form(item: int, p: Optional[int] = None, q: Optional[int] = None,
                  l: Optional[int] = None, lam: Optional[Fraction] = None) -> int:
    """Closed-form codimension of the given item, checking side conditions."""
    if item not in range(1, 12):
        raise SideConditionError(f"unknown item {item}")
    if p is None or p < 1:
        raise SideConditionError("p >= 1 required")
    if item == 1:
        if q not in (None, 1):
            raise SideConditionError("item 1 has q = 1")
        if l is None or not 1 <= l <= p:
            raise SideConditionError("item 1 needs 1 <= l <= p")
        return p - l
    if item == 2:
        if q not in (None, 2):
            raise SideConditionError("item 2 has q = 2")
        if l is None or not 1 <= l < p:
            raise SideConditionError("item 2 needs 1 <= l < p")
        return 2 * (p - l)
    if q is None or q < 1:
        raise SideConditionError("q >= 1 required")
    if item in (3, 4):
        if q > p:
            raise SideConditionError("q <= p required")
        return q * (p - 1) if item == 3 else p * q - 1
    if item == 5:
        if not 2 <= q <= p:
            raise SideConditionError("item 5 needs 2 <= q <= p")
        return q * (p - 1) + 1
    if item == 6:
        if l is None or not 1 <= l <= min(p, q):
            raise SideConditionError("item 6 needs 1 <= l <= min(p, q)")
        return l
    if item in (7, 8):
        if p < 2 or q < 2:
            raise SideConditionError("items 7 and 8 need p, q >= 2")
        return 2 if item == 7 else 3
    if item == 9:
        if p < 3 or q < 3:
            raise SideConditionError("item 9 needs p, q >= 3")
        if lam == 1:
            raise SideConditionError("item 9 needs lambda != 1")
        return 4
    if item == 10:
        if l is None or not 3 <= l <= min(p, q):
            raise SideConditionError("item 10 needs 3 <= l <= min(p, q)")
        return l + 1
    # item 11
    if l is None or not 4 <= l <= min(p, q):
        raise SideConditionError("item 11 needs 4 <= l <= min(p, q)")
    if lam == 0:
        raise SideConditionError("item 11 needs lambda != 0")
    return l + 1


def _term_shapes(item: int, p: int, q: int, l: Optional[int],
                 lam: Optional[Fraction]) -> list[tuple[Fraction, int, int, int]]:
    """(coefficient, eps0 power, symbol index, eps1 power) per term."""
    one = Fraction(1)
    if item == 1:
        return [(one, l, 0, 0)]
    if item == 2:
        return [(one, l, 0, 0), (one, l - 1, 0, 1)]
    if item == 3:
        return [(one, 1, 0, 0), (one, 0, 0, 1)]
    if item == 4:
        return [(one, 1, 0, 0), (one, 0, 1, 1)]
    if item == 5:
        return [(one, 1, 0, 0), (one, 0, 0, 1), (one, 0, 1, q - 1)]
    if item == 6:
        return [(one, p + q - l - i - 1, 0, i) for i in range(q - l, q)]
    if item == 7:
        return [(one, p - 1, 0, q - 2), (Fraction(lam), p - 2, 0, q - 1),
                (one, p - 1, 1, q - 1)]
    if item == 8:
        return [(one, p - 1, 0, q - 2), (one, p - 2, 1, q - 1),
                (one, p - 1, 2, q - 1)]
    if item == 9:
        return [(one, p - 1, 0, q - 3), (one, p - 2, 0, q - 2),
                (Fraction(lam), p - 3, 0, q - 1), (one, p - 2, 1, q - 1),
                (one, p - 1, 2, q - 1)]
    if item == 10:
        base = [(one, p + q - l - i - 1, 0, i) for i in range(q - l, q)]
        return base + [(one, p - 2, 1, q - 1), (one, p - 1, 2, q - 1)]
    base = [(one, p + q - l - i - 1, 0, i) for i in range(q - l, q)]
    return base + [(Fraction(lam), p - 3, 0, q - 1), (one, p - 2, 1, q - 1),
                   (one, p - 1, 2, q - 1)]


@dataclass(frozen=True)
class FormulaCase:
    item: int
    p: int
    q: int
    l: Optional[int]
    lam: Optional[Fraction]
    h: int

    def describe(self) -> str:
        bits = [f"item={self.item}", f"p={self.p}", f"q={self.q}"]
        if self.l is not None:
            bits.append(f"l={self.l}")
        if self.lam is not None:
            bits.append(f"lam={self.lam}")
        bits.append(f"h={self.h}")
        return " ".join(bits)


def build_case(case: FormulaCase):
    """Presentation, Jordan assignment, and expected codimension of a case."""
    expected = c_closed_form(case.item, case.p, case.q, case.l, case.lam)
    shapes = _term_shapes(case.item, case.p, case.q, case.l, case.lam)
    if any(a + 1 + b < 2 for _, a, _sym, b in shapes):
        raise SideConditionError("a term would be a bare arrow (length < 2)")
    n_sym = _SYMBOLS[case.item]
    if case.h < n_sym:
        raise SideConditionError(
            f"item {case.item} needs {n_sym} distinct arrows, h={case.h}"
        )
    m0 = max(case.p, max(a for _, a, _s, _b in shapes) + 1)
    m1 = max(case.q, max(b for _, _a, _s, b in shapes) + 1)
    vertices = ("0", "1")
    arrows = []
    if m0 >= 2:
        arrows.append(Arrow("e0", "0", "0"))
    if m1 >= 2:
        arrows.append(Arrow("e1", "1", "1"))
    arrow_names = [f"a{i + 1}" for i in range(case.h)]
    arrows.extend(Arrow(n, "1", "0") for n in arrow_names)
    quiver = Quiver(vertices, tuple(arrows))
    terms = []
    for coeff, a, sym, b in shapes:
        word = ["e0"] * a + [arrow_names[sym]] + ["e1"] * b
        terms.append((coeff, quiver.path(word)))
    rel = Relation.make(terms)
    pres = BoundQuiverPresentation(quiver, (m0, m1), (rel,))
    ja = JordanAssignment.for_presentation(
        pres, [Partition((case.p,), m0), Partition((case.q,), m1)]
    )
    return pres, ja, expected


def evaluate_case(case: FormulaCase) -> tuple[int, int]:
    """(expected closed form, computed exact rank) for one case."""
    pres, ja, expected = build_case(case)
    computed = rank_exact(assemble_system(pres, ja))
    return expected, computed


_DEFAULT_LAMBDAS = (Fraction(2), Fraction(-1), Fraction(1, 2))


def formula_cases(p_max: int = 6, hs: Sequence[int] = (1, 2, 3),
                  lambdas: Sequence[Fraction] = _DEFAULT_LAMBDAS,
                  items: Optional[Iterable[int]] = None) -> list[FormulaCase]:
    """Every admissible case with q <= p <= p_max, deterministic order."""
    wanted = set(items) if items is not None else set(range(1, 12))
    cases: list[FormulaCase] = []
    for item in sorted(wanted):
        lams: Sequence[Optional[Fraction]] = (
            lambdas if item in _HAS_LAMBDA else (None,)
        )
        for p in range(1, p_max + 1):
            qs = (1,) if item == 1 else (2,) if item == 2 else range(1, p + 1)
            for q in qs:
                if item == 2 and q > p:
                    continue
                for lam in lams:
                    for h in hs:
                        if h < _SYMBOLS[item]:
                            continue
                        if item in (1, 2, 6, 10, 11):
                            lo = {1: 1, 2: 1, 6: 1, 10: 3, 11: 4}[item]
                            hi = p if item == 1 else p - 1 if item == 2 else min(p, q)
                            ls: Iterable[Optional[int]] = range(lo, hi + 1)
                        else:
                            ls = (None,)
                        for l in ls:
                            case = FormulaCase(item, p, q, l, lam, h)
                            try:
                                c_closed_form(item, p, q, l, lam)
                                shapes = _term_shapes(item, p, q, l, lam)
                            except SideConditionError:
                                continue
                            if any(a + 1 + b < 2 for _, a, _s, b in shapes):
                                continue
                            cases.append(case)
    return cases
