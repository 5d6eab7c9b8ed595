# %% [markdown]
# Forbidding a sublattice with one quasiequation
#
# For an SI lattice L, phi_L has one variable per element, premises copying
# the operation tables of L, and a conclusion identifying the monolith pair.
# It holds in K exactly when L does not embed in K.

# %%
from rellat.catalog import boolean, chain, m3, n5
from rellat.horn import build_phi, eval_quasiequation
from rellat.order_core import find_embedding
from rellat.relational import relational_lattice

phi = build_phi(n5())
print(phi.premise_count(), "premises over", len(phi.variables), "variables")
print("; ".join(str(p) for p in phi.to_quasiequation().premises[:3]), "...")

# %%
targets = {"3-chain": chain(3), "B3": boolean(3), "M3": m3(), "N5": n5(), "R(2,{a,b})": relational_lattice(2, "ab")}
for L_name, L in [("M3", m3()), ("N5", n5())]:
    phi = build_phi(L)
    for K_name, K in targets.items():
        res = eval_quasiequation(K, phi)
        embeds = find_embedding(L, K) is not None
        print(f"phi_{L_name} in {K_name:10s}: holds={res.holds!s:5s} {L_name} embeds={embeds}")
