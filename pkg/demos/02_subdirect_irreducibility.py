# %% [markdown]
# Subdirectly irreducible lattices and OD-graphs
#
# A finite lattice is SI when its join-dependency digraph on
# join-irreducibles has a root. `is_subdirectly_irreducible` also computes
# the monolith congruence and refuses to answer if the two disagree.

# %%
from rellat.catalog import boolean, chain, m3, n5
from rellat.order_core import (
    digraph_root, is_isomorphic, is_subdirectly_irreducible, join_dependency, lattice_from_od_graph,
    od_graph,
)

for name, L in [("2-chain", chain(2)), ("3-chain", chain(3)), ("B2", boolean(2)), ("M3", m3()), ("N5", n5())]:
    rep = is_subdirectly_irreducible(L)
    pair = tuple(L.labels[x] for x in rep.monolith_pair) if rep.si else None
    print(f"{name:8s} SI={rep.si!s:5s} monolith pair={pair}")

# %% [markdown]
# N5 in detail: the dependency digraph and its root.

# %%
N = n5()
deps = join_dependency(N)
print({N.labels[j]: sorted(N.labels[k] for k in ks) for j, ks in deps.items()})
print("root:", N.labels[digraph_root(deps)])

# %% [markdown]
# The OD-graph (join-irreducibles, their order and minimal join-covers)
# is enough to rebuild the lattice.

# %%
od = od_graph(N)
for j in od.jis:
    covers = [sorted(N.labels[x] for x in C) for C in od.min_covers[j]]
    print(N.labels[j], "minimal covers:", covers)
print("rebuilt lattice isomorphic:", is_isomorphic(lattice_from_od_graph(od), N))
