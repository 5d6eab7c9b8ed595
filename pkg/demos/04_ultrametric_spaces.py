# %% [markdown]
# Spaces with set-valued distances
#
# The distance between two functions in D^A is the set of attributes where
# they differ. A space is pairwise complete when every split of a distance
# has an interpolating point; exactly those spaces are full section spaces.

# %%
from rellat.ultrametric import (
    all_modules, continuous_closure, hamming_space, is_pairwise_complete, kernel_subspace, represent,
    vv_module,
)

H = hamming_space(2, "ab")
gap = H.subspace([(0, 0), (0, 1), (1, 1)])
print("H complete:", bool(is_pairwise_complete(H)))
v = is_pairwise_complete(gap)
print("gap complete:", bool(v), " witness (f, g, alpha, beta):", v.witness)

# %% [markdown]
# Representing the gap space inside a section space: the map is an isometry
# but misses one section, the interpolant that was removed.

# %%
r = represent(gap)
print("surjective:", r.surjective)
print("missing:", set(r.section.points) - set(r.mapping.values()))

# %% [markdown]
# Modules are maps v: X -> P(A) with v(f) inside d(f, g) | v(g). Their zero
# sets are the continuous subspaces, and closing a set Y under the module
# built from it gives the least continuous subspace containing Y.

# %%
mods = all_modules(H)
print(len(mods), "modules on the 2x2 Hamming space")
for Y in [[(0, 0)], [(0, 0), (1, 1)], [(0, 1), (1, 0)]]:
    print(sorted(Y), "-> closure", sorted(continuous_closure(H, Y)))
vv = vv_module(H, [(0, 0), (1, 1)])
print("vv of the diagonal:", {f: "".join(sorted(vv(f))) or "-" for f in H.points})
print("its zero set:", sorted(kernel_subspace(vv)))
