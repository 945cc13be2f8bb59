"""Modules over GF(p)(G), derivation spaces, and the H^1 dimension
identities that drive the construction.

Shows the regular module's socle filtration, the solver/oracle agreement
on a small instance, and the step identity: for a CR module K over the
Frattini quotient, H^1 gains exactly d(d-1)/2 dimensions when pulled down
from G/Phi(G) to G.
"""

from pgroups import (
    catalog,
    derivation_space,
    enumerate_derivations_bruteforce,
    fixed_points,
    frattini,
    pullback_module,
    quotient,
    quotient_h1_dims,
    radical_series,
    regular_module,
    socle_filtration,
    trivial_module,
)

C33 = catalog.elementary_abelian(3, 2)
R = regular_module(C33)
print("regular module of (C3)^2: dim", R.dim)
print("  socle filtration dims:", socle_filtration(R).dims)
print("  radical series dims:  ", [l.dim for l in radical_series(R).layers])
print("  fixed points:", fixed_points(R).dim, "(the norm line)")

H3 = catalog.heisenberg(3)
M = trivial_module(H3)
space = derivation_space(H3, M)
print("\nDer(H3, trivial):", space.der_dim, "| inner:", space.ider_dim,
      "| H1:", space.h1_dim)
brute = enumerate_derivations_bruteforce(H3, M)
print("brute-force oracle count:", len(brute), "== 3^der_dim:",
      len(brute) == 3 ** space.der_dim)

print("\nFrattini step identity on the rank-2 class-2 group:")
D = catalog.parse_group_spec("d:2,3")
phi = frattini(D)
Q, proj = quotient(D, phi.members)
K = pullback_module(regular_module(Q), proj)
spaceK = derivation_space(D, K)
_, _, h_quot = quotient_h1_dims(D, K, phi)
print("  dim H1(D, K) =", spaceK.h1_dim)
print("  dim H1(D/Phi, K) =", h_quot)
print("  gained:", spaceK.h1_dim - h_quot, " (expected d(d-1)/2 = 1)")
