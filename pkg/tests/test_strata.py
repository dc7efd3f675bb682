import pytest

from quiverstrata.families import build_family, parse_family_spec
from quiverstrata.partitions import JordanAssignment, Partition
from quiverstrata.quiver import parse_presentation
from quiverstrata.strata import (ScanCapExceeded,
                                 ambient_arrow_dim, assignments_for,
                                 build_nooverlap_presentation,
                                 split_gap_test, dim_vectors_up_to,
                                 max_stratum, nooverlap_dims,
                                 reducibility_scan, stratum_dim)


def _ja(pres, *parts_per_vertex):
    return JordanAssignment.for_presentation(
        pres,
        [Partition(tuple(parts), pres.orders[i])
         for i, parts in enumerate(parts_per_vertex)],
    )


def test_stratum_dim_with_relation(a1221):
    rep = stratum_dim(a1221, _ja(a1221, (2,), (2,)))
    assert rep.orbit_dims == (2, 2)
    assert rep.ambient_dim == 4
    assert rep.codim == 2
    assert rep.dim == 6
    assert rep.is_maximal


def test_stratum_dim_no_relations(aprime122):
    rep = stratum_dim(aprime122, _ja(aprime122, (2,), (2,)))
    assert rep.codim == 0
    assert rep.dim == 2 + 2 + 4


def test_stratum_dim_all_ones(aprime122):
    rep = stratum_dim(aprime122, _ja(aprime122, (1, 1), (1, 1)))
    assert rep.orbit_dims == (0, 0)
    assert rep.dim == rep.ambient_dim == 4
    assert not rep.is_maximal


def test_max_stratum_examples():
    for m in (2, 3):
        pres = build_family(parse_family_spec(f"A(1,{m},{m},1)"))
        rep = max_stratum(pres, (m, 2 * m))
        assert rep.assignment.partitions[0].parts == (m,)
        assert rep.assignment.partitions[1].parts == (m, m)
        assert rep.is_maximal

    pres = build_family(parse_family_spec("A(1,2,2,1)"))
    rep = max_stratum(pres, (0, 0))
    assert rep.dim == 0 and rep.assignment.dims == (0, 0)
    rep = max_stratum(pres, (3, 1))
    assert rep.assignment.partitions[0].parts == (2, 1)
    assert rep.assignment.partitions[1].parts == (1,)


def test_assignments_order_and_cap(a1221):
    jas = assignments_for(a1221, (2, 2))
    assert [j.serialize() for j in jas] == ["2|2", "2|1,1", "1,1|2", "1,1|1,1"]
    with pytest.raises(ScanCapExceeded):
        reducibility_scan(a1221, (2, 2), cap=3)


def test_scan_two_monomial_relations():
    text = """
vertex 0
vertex 1
loop e0 0 order 4
arrow x1 1 -> 0
arrow x2 1 -> 0
relation e0^1*x1
relation e0^2*x2
"""
    pres = parse_presentation(text)
    cert = reducibility_scan(pres, (3, 1))
    assert cert is not None
    assert cert.witness.assignment.serialize() == "2,1|1"
    assert cert.witness.codim == 1  # a2 - a1
    assert cert.maximal.codim == 3  # a2 + 2 - a1
    assert cert.margin >= 0


def test_scan_certificate_soundness_and_decomposition():
    pres = build_family(parse_family_spec("A(1,4,4,2)"))
    certs = reducibility_scan(pres, (4, 2), find_all=True)
    assert certs
    for cert in certs:
        fresh_max = stratum_dim(pres, cert.maximal.assignment)
        fresh_wit = stratum_dim(pres, cert.witness.assignment)
        assert fresh_max == cert.maximal
        assert fresh_wit == cert.witness
        assert not cert.witness.is_maximal
        assert cert.margin == cert.codim_gap + sum(cert.orbit_gaps)
        assert cert.margin >= 0


def test_scan_deterministic(a1221):
    pres = build_family(parse_family_spec("A(1,4,4,2)"))
    first = reducibility_scan(pres, (4, 2))
    second = reducibility_scan(pres, (4, 2))
    assert first == second
    assert reducibility_scan(a1221, (2, 2)) is None


def test_certificate_text_fields():
    pres = build_family(parse_family_spec("A(1,4,4,2)"))
    cert = reducibility_scan(pres, (4, 2))
    text = cert.to_text()
    assert "dimension vector: (4, 2)" in text
    assert "maximal assignment: 4|2" in text
    assert "witness assignment: 3,1|2" in text
    assert "margin: 0" in text


def test_dense_loop_pair_splitting_certificate():
    # independent two-term relation at d = (2m, 2): the codimension pair
    # (4m - 2, 4m - 4) makes splitting (2) into (1, 1) dimension-neutral
    for m in (2, 3):
        text = (f"vertex 0\nvertex 1\nloop e0 0 order {m}\nloop e1 1 order 2\n"
                "arrow a1 1 -> 0\narrow a2 1 -> 0\nrelation e0*a1 + a2*e1\n")
        pres = parse_presentation(text)
        certs = reducibility_scan(pres, (2 * m, 2), find_all=True)
        wanted = [c for c in certs
                  if c.witness.assignment.serialize() == f"{m},{m}|1,1"]
        assert len(wanted) == 1
        cert = wanted[0]
        assert cert.maximal.codim == 4 * m - 2
        assert cert.witness.codim == 4 * m - 4
        assert cert.margin == 0


def test_three_term_relation_codim_pairs():
    # eps0 a1 + a1 eps1 + a2 eps1^(p-1) on types ((m, m), (p)) versus
    # ((m, m), (p-1, 1)): 2(p(m-1) + 1) against 2((p-1)(m-1) + (m-1))
    from quiverstrata.linsys import codim_c

    for m0, p in ((3, 2), (3, 3), (4, 3)):
        text = (f"vertex 0\nvertex 1\nloop e0 0 order {m0}\nloop e1 1 order {p}\n"
                "arrow a1 1 -> 0\narrow a2 1 -> 0\n"
                f"relation e0*a1 + a1*e1 + a2*e1^{p - 1}\n")
        pres = parse_presentation(text)
        ja_max = JordanAssignment.for_presentation(
            pres, [Partition((m0,) * 2, m0), Partition((p,), p)])
        ja_wit = JordanAssignment.for_presentation(
            pres, [Partition((m0,) * 2, m0), Partition((p - 1, 1), p)])
        assert codim_c(pres, ja_max) == 2 * (p * (m0 - 1) + 1)
        assert codim_c(pres, ja_wit) == 2 * ((p - 1) * (m0 - 1) + (m0 - 1))


def test_split_gap_cases():
    # chain-truncation instance: gap 2, certificate exists
    pres = build_family(parse_family_spec("A(1,3,2,2)"))
    hit, gap = split_gap_test(pres, (2, 4))
    assert hit and gap == 2

    # no mixed relations: no conditions at all
    pres = build_family(parse_family_spec("Aprime(1,3,2)"))
    hit, gap = split_gap_test(pres, (2, 4))
    assert not hit and gap == 0

    # gap 1 is not enough
    pres = build_family(parse_family_spec("A(1,2,2,1)"))
    hit, gap = split_gap_test(pres, (2, 1))
    assert not hit and gap == 1


def test_split_gap_precondition():
    pres = build_family(parse_family_spec("A(1,2,2,1)"))
    with pytest.raises(ValueError):
        split_gap_test(pres, (3, 1))  # maximal (2,1) is not a single part
    with pytest.raises(ValueError):
        split_gap_test(pres, (1, 1))  # single part but p = 1


def test_nooverlap_dims_examples():
    assert nooverlap_dims(1, 1, 1, 1, 2) == (4, 4)
    u, v = nooverlap_dims(2, 1, 1, 2, 4)
    assert u == v
    with pytest.raises(ValueError):
        nooverlap_dims(1, 1, 2, 1, 4)  # n1 > n2 rejected
    with pytest.raises(ValueError):
        nooverlap_dims(1, 1, 1, 1, 4, lam=(0, 1))  # leading coefficient zero


def test_nooverlap_presentation_shape():
    pres = build_nooverlap_presentation(2, 2, 1, 2, 4)
    assert len(pres.quiver.vertices) == 3
    assert len(pres.quiver.non_loop_arrows) == 4
    assert len(pres.relations) == 2
    # second relation uses only the first hop arrow of 2 -> 1
    sources = {rel.source for rel in pres.relations}
    assert sources == {"1", "2"}


def test_nooverlap_nontrivial_lambda_vector():
    u, v = nooverlap_dims(1, 1, 2, 2, 4, lam=(1, 1, 0))
    assert u == v


def test_chain_scan_finds_middle_split_certificate():
    # the dimension tie between middle types (n2+1) and (n2, 1) is a
    # margin-zero certificate at d = (1, n2+1, 1)
    for h, l, n1, n2, m in [(1, 1, 1, 2, 4), (2, 1, 1, 1, 3), (1, 2, 2, 3, 4)]:
        chain = build_nooverlap_presentation(h, l, n1, n2, m)
        cert = reducibility_scan(chain, (1, n2 + 1, 1))
        assert cert is not None
        assert cert.margin == 0
        mid = cert.witness.assignment.partitions[1]
        assert mid.parts == (n2, 1)


def test_dim_vectors_up_to():
    vecs = dim_vectors_up_to(2, 2)
    assert vecs == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]
    assert dim_vectors_up_to(2, 0) == [(0, 0)]


def test_ambient_arrow_dim():
    pres = build_family(parse_family_spec("Aprime(3,2,2)"))
    assert ambient_arrow_dim(pres, (2, 3)) == 3 * 6
    assert ambient_arrow_dim(pres, (0, 5)) == 0
