"""Characteristic subgroups, the refined Frattini chain, and the
hypothesis report that steers the automorphism construction.
"""

import json

from pgroups import (
    agemo,
    catalog,
    center,
    frattini,
    frattini_via_maximals,
    gamma3_agemo,
    hypothesis_report,
    lower_central,
    min_generators,
    refine_chain,
)

for spec in ("heisenberg:3", "m:3", "wreath:3", "d:3,3"):
    G = catalog.parse_group_spec(spec)
    print(f"== {G.name}  (order {G.order})")
    print("   d(G) =", min_generators(G))
    print("   |Z(G)| =", center(G).order)
    print("   |Phi(G)| =", frattini(G).order,
          " (agrees with maximal-subgroup intersection:",
          frattini(G).members == frattini_via_maximals(G).members, ")")
    print("   |G^p| =", agemo(G).order, "  |gamma_3 G^p| =", gamma3_agemo(G).order)
    print("   gamma orders:", [lower_central(G, i).order for i in (1, 2, 3, 4)])
    chain = refine_chain(G)
    print("   chain T =", chain.T, " link orders:", [l.order for l in chain.links])
    print("   hypothesis report:")
    print("   " + json.dumps(hypothesis_report(G).to_dict(), sort_keys=True))
    print()
