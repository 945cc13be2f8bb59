import pytest

from pgroups import (
    InputError,
    agemo,
    catalog,
    center,
    centralizer,
    frattini,
    frattini_via_maximals,
    gamma3_agemo,
    hypothesis_report,
    lower_central,
    min_generators,
    omega1,
    refine_chain,
    subgroup_generated,
    trivial_subgroup,
    upper_central,
    whole_group,
)


def test_heisenberg_series(H3):
    z = center(H3)
    assert z.order == 3 and z.gens_json() == [[0, 0, 1]]
    assert frattini(H3).members == z.members
    assert lower_central(H3, 3).is_trivial
    assert agemo(H3).is_trivial
    assert gamma3_agemo(H3).is_trivial
    assert min_generators(H3) == 2


def test_m27_series(M27):
    phi = frattini(M27)
    assert phi.order == 3
    assert gamma3_agemo(M27).members == phi.members
    rep = hypothesis_report(M27)
    assert rep.powerful and rep.T == 0
    assert rep.center_cyclic


def test_abelian_reports(C9, C33):
    assert center(C9).order == 9
    assert lower_central(C9, 2).is_trivial
    assert hypothesis_report(C9).abelian
    assert "out of scope" in hypothesis_report(C9).to_dict()["note"]
    assert hypothesis_report(C33).center_rank == 2


def test_frattini_two_routes_agree(small_catalog_p3):
    for G in small_catalog_p3:
        assert frattini(G).members == frattini_via_maximals(G).members


def test_center_contained_in_centralizers(H3, M27, W3):
    for G in (H3, M27, W3):
        z = center(G)
        phi = frattini(G)
        assert z.members <= centralizer(G, phi).members
        assert centralizer(G, whole_group(G)).members == z.members


def test_central_series_monotone(W3):
    prev = None
    for i in range(1, 6):
        g = lower_central(W3, i)
        if prev is not None:
            assert g.members <= prev.members
        prev = g
    assert prev.is_trivial
    prev = trivial_subgroup(W3)
    for i in range(1, 5):
        z = upper_central(W3, i)
        assert prev.members <= z.members
        prev = z
    assert prev.order == W3.order


def test_omega1_requires_abelian(H3):
    with pytest.raises(InputError):
        omega1(H3, whole_group(H3))
    z = center(H3)
    assert omega1(H3, z).members == z.members


def test_subgroup_closure_audit(H3):
    from pgroups.series import Subgroup

    with pytest.raises(InputError):
        Subgroup(H3, frozenset([0, 9]), (9,))  # {e, a} is not closed
    with pytest.raises(InputError):
        Subgroup(H3, frozenset([1, 2]), (1,))  # missing the identity


def test_refine_chain_heisenberg(H3):
    ch = refine_chain(H3)
    assert ch.T == 1
    assert [l.order for l in ch.links] == [3, 1]
    assert all(l.is_normal for l in ch.links)


def test_refine_chain_powerful(M27):
    ch = refine_chain(M27)
    assert ch.T == 0 and len(ch.links) == 1


def test_refine_chain_D33():
    D33 = catalog.parse_group_spec("d:3,3")
    ch = refine_chain(D33)
    assert ch.T == 3
    for a, b in zip(ch.links, ch.links[1:]):
        assert a.order == 3 * b.order and b.members <= a.members


def test_refine_chain_deterministic(W3):
    ch1 = refine_chain.__wrapped__(W3)
    ch2 = refine_chain.__wrapped__(W3)
    assert [l.members for l in ch1.links] == [l.members for l in ch2.links]
    assert ch1.pivots == ch2.pivots


def test_hypothesis_heisenberg(H3):
    rep = hypothesis_report(H3)
    assert rep.center_cyclic
    # gamma3 G^p trivial: its centralizer is everything, so the main
    # hypothesis holds
    assert rep.main_hypothesis_holds
    assert not rep.cg_phi_in_phi and rep.cg_phi_witness is not None
    d = rep.to_dict()
    assert d["main_hypothesis_holds"] is True


def test_subgroup_generated_witnesses(H3):
    a = H3.gen(0)
    S = subgroup_generated(H3, [a])
    assert S.order == 3
    assert a.index in S.members
