import numpy as np
import pytest

import pgroups.gflinalg as la
from pgroups import (
    CapExceeded,
    InputError,
    annihilator_of_radical_power,
    catalog,
    center,
    conjugation_module,
    fixed_points,
    frattini,
    maximal_submodules,
    module_isomorphism,
    norm_operator,
    omega1,
    pullback_module,
    quotient,
    quotient_module,
    radical_series,
    regular_module,
    socle_filtration,
    socle_layer,
    submodule_as_module,
    submodule_embedding_count,
    submodules_of_dim,
    trivial_module,
    whole_group,
)


def test_regular_module_basics(C3, C33):
    R = regular_module(C3)
    assert R.dim == 3 and R.is_unipotent
    fp = fixed_points(R)
    assert fp.dim == 1
    assert tuple(fp.basis[0]) == (1, 1, 1)  # the norm vector
    R2 = regular_module(C33)
    assert R2.dim == 9 and fixed_points(R2).dim == 1


def test_regular_module_cap():
    G = catalog.parse_group_spec("d:3,5")  # order 5^6
    with pytest.raises(CapExceeded):
        regular_module(G, module_dim_cap=1024)


def test_action_matrices_satisfy_relations(H3):
    R = regular_module(H3)
    assert R.relations_hold()
    bad = [[list(r) for r in np.array(m)] for m in R.mats]
    bad[0][0][0] = (bad[0][0][0] + 1) % 3  # no longer a permutation action
    with pytest.raises(InputError):
        from pgroups.fpmod import FpModule

        FpModule(H3, tuple(tuple(tuple(r) for r in m) for m in bad))


def test_fixed_points_of_trivial_subgroup(C33):
    R = regular_module(C33)
    from pgroups import trivial_subgroup

    assert fixed_points(R, trivial_subgroup(C33)).dim == R.dim


def test_socle_and_radical_c3(C3):
    R = regular_module(C3)
    assert socle_filtration(R).dims == (1, 2, 3)
    assert [l.dim for l in radical_series(R).layers] == [3, 2, 1, 0]


def test_socle_and_radical_c33(C33):
    R = regular_module(C33)
    assert socle_filtration(R).dims[:2] == (1, 3)  # K2 has dim d + 1 = 3
    rads = [l.dim for l in radical_series(R).layers]
    assert rads[0] == 9 and rads[-1] == 0
    # nilpotency degree of J is at most (p-1) n + 1
    assert len(rads) - 1 <= (3 - 1) * 2 + 1


def test_trivial_module_filtration(C33):
    T = trivial_module(C33, 2)
    assert socle_filtration(T).dims == (2,)


def test_annihilators_align_with_socle(C3, C33):
    for L in (C3, C33):
        R = regular_module(L)
        for i in (1, 2, 3):
            ann = annihilator_of_radical_power(R, i)
            soc = socle_layer(R, i)
            assert np.array_equal(ann.basis_array, soc.basis_array)


def test_radical_products_contained(C33):
    """J^a J^b is inside J^(a+b) (checked via spanning products)."""
    R = regular_module(C33)
    layers = radical_series(R).layers
    p = 3
    for a in (1, 2):
        for b in (1, 2):
            if a + b >= len(layers):
                continue
            target = layers[a + b]
            for u in layers[a].basis_array:
                # right-multiplying a J^a vector by (g - 1) lands in J^(a+1)
                for m in R.mats:
                    v = (u @ ((m - la.eye(R.dim)) % p)) % p
                    assert target.module is R  # sanity
                    if b == 1:
                        assert la.in_rowspace(v, layers[a + 1].basis_array, p)


def test_fixed_points_nonzero_for_unipotent(H3):
    R = regular_module(H3)
    assert fixed_points(R).dim >= 1


def test_norm_operator(C3, C33):
    for L in (C3, C33):
        R = regular_module(L)
        N = norm_operator(R)
        assert la.rank(N, 3) == 1
        onto_fixed = la.in_rowspace(N[0], fixed_points(R).basis_array, 3)
        assert onto_fixed


def test_quotient_module_dims(C33):
    R = regular_module(C33)
    K1 = socle_layer(R, 1)
    Q, proj = quotient_module(R, K1)
    assert Q.dim == 8
    assert fixed_points(Q).dim == 2


def test_conjugation_module_realization(H3):
    Z = omega1(H3, center(H3))
    M = conjugation_module(H3, Z)
    assert M.dim == 1
    real = M.realization
    c = H3.gen(2)
    assert tuple(real.encode(c)) == (1,)
    assert real.decode((2,)) == c * c
    with pytest.raises(InputError):
        conjugation_module(H3, whole_group(H3))


def test_pullback_module(H3):
    phi = frattini(H3)
    Q, proj = quotient(H3, phi.members)
    K = pullback_module(regular_module(Q), proj)
    assert K.dim == 9
    # Frattini subgroup acts trivially on the pullback
    for g in phi.gen_elements:
        assert np.array_equal(K.action_of(g), la.eye(9))


def test_submodule_enumeration_uniserial(C3):
    R = regular_module(C3)
    assert [len(submodules_of_dim(R, k)) for k in range(4)] == [1, 1, 1, 1]


def test_module_isomorphism_reflexive(C33):
    R = regular_module(C33)
    X = module_isomorphism(R, R)
    assert X is not None and la.det_nonzero(X, 3)
    T1 = trivial_module(C33, 1)
    assert module_isomorphism(R, T1) is None


def test_embedding_counts(C3, C33):
    R3 = regular_module(C3)
    K2, _ = submodule_as_module(R3, socle_layer(R3, 2))
    assert submodule_embedding_count(C3, K2) == 1
    R33 = regular_module(C33)
    K2b, _ = submodule_as_module(R33, socle_layer(R33, 2))
    assert K2b.dim == 3
    assert submodule_embedding_count(C33, K2b) == 1
    assert submodule_embedding_count(C33, trivial_module(C33)) == 1


def test_embedding_count_caps(C33):
    with pytest.raises(CapExceeded):
        submodule_embedding_count(C33, regular_module(C33))  # dim 9 > 6


def test_maximal_submodules(C3, C33):
    # group algebras are local: the augmentation ideal is the unique
    # maximal submodule
    R = regular_module(C3)
    maxes = maximal_submodules(R)
    assert len(maxes) == 1 and maxes[0].dim == 2
    R2 = regular_module(C33)
    maxes2 = maximal_submodules(R2)
    assert len(maxes2) == 1 and maxes2[0].dim == 8
    # a module with 2-dimensional head has (p^2-1)/(p-1) maximal submodules
    T2 = trivial_module(C33, 2)
    assert len(maximal_submodules(T2)) == 4
