# %% [markdown]
# From p-morphisms to lattice embeddings and back
#
# A surjective p-morphism from an S5 product frame onto F turns into a
# lattice embedding L(F) -> R(D, A). The converse direction reads a
# p-morphism back off an embedding.

# %%
from rellat.frame_lattice import embedding_from_cover, lattice_of_frame
from rellat.frames import Frame, PMorphism, uniform_product_frame
from rellat.reduction import cover_search, extract_pmorphism

total = [(x, y) for x in "xy" for y in "xy"]
F = Frame("ab", "xy", {"a": total, "b": total})
U = uniform_product_frame("ab", 2)

# diagonal to x, off-diagonal to y
psi = PMorphism(U, F, {w: "x" if w[0] == w[1] else "y" for w in U.worlds})
e = embedding_from_cover(psi)
print(f"L(F) has {e.source.n} elements, R(2,{{a,b}}) has {e.target.n}")
print("embedding:", e.is_embedding(), " keeps bounds:", e.preserves_bounds())
for x in range(e.source.n):
    print(f"  {e.source.labels[x]!s:14s} -> {e.target.labels[e(x)]}")

# %% [markdown]
# Going back: extract a p-morphism from the embedding alone.

# %%
V, back = extract_pmorphism(F, e)
print("extracted from", len(V.worlds), "worlds; valid:", bool(back.validate()), " onto:", back.is_surjective())
print("cover_search:", cover_search(F, 3).k)

# %% [markdown]
# Not every rooted, full S5 frame has a cover. In x -a- y -b- z one can go
# x to z by a then b but not by b then a, while product frames commute.

# %%
loops = lambda ws: [(w, w) for w in ws]  # noqa: E731
G = Frame("ab", "xyz", {"a": [(p, q) for p in "xy" for q in "xy"] + loops("z"),
                        "b": [(p, q) for p in "yz" for q in "yz"] + loops("x")})
res = cover_search(G, 3)
print("cover found:", bool(res), "|", res.reason)
print("L(G) has", lattice_of_frame(G).n, "elements")
