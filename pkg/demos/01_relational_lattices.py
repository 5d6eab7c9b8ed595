# %% [markdown]
# Relational lattices three ways
#
# R(D, A) is the lattice of pairs (alpha, Y) where Y is a set of functions
# A -> D closed under "differ only inside alpha". The same lattice shows up
# as the closed sets of the Hamming space on D^A and of the S5 product
# frame on D^A. This script builds all three for D = 2, A = {a, b}.

# %%
from rellat.frame_lattice import lattice_of_frame
from rellat.frames import uniform_product_frame
from rellat.order_core import find_isomorphism, ji_profile
from rellat.relational import relational_count, relational_lattice
from rellat.ultrametric import hamming_space, lattice_of_space

R = relational_lattice(2, "ab")
print("R(2,{a,b}) has", R.n, "elements; the counting formula says", relational_count(2, 2))

# %% [markdown]
# Elements print as `{attrs|points}`. The top is every attribute and every
# function; the bottom is empty.

# %%
print("top:", R.labels[R.top], " bottom:", R.labels[R.bottom])
prof = ji_profile(R)
print("join-irreducibles:", [str(R.labels[j]) for j in prof.jis])
print("join-primes:     ", [str(R.labels[j]) for j in prof.join_primes])

# %% [markdown]
# The attribute singletons are join-prime, the function singletons are not.
# Next, the Hamming space and the product frame give the same family.

# %%
S = lattice_of_space(hamming_space(2, "ab"))
U = lattice_of_frame(uniform_product_frame("ab", 2))
print("space lattice:", S.n, " frame lattice:", U.n)
print("same closed sets as R:", sorted(S.masks) == sorted(R.masks))
print("frame lattice isomorphic to R:", find_isomorphism(U, R) is not None)

# %% [markdown]
# Sizes grow doubly exponentially in |D|^|A|; counting never builds the lattice.

# %%
for d, k in [(2, 1), (3, 1), (2, 2), (3, 2), (2, 3), (4, 3), (2, 6)]:
    print(f"|D|={d} |A|={k}: {relational_count(d, k)}")
