"""Grouping UFs by life expectancy.

Run with ``python3 docs/examples/04_clustering.py``.
"""
# %%
from pension_toolkit import load_reference_tables
from pension_toolkit.cluster import cluster_report, cut_dendrogram, distance_matrix, kmeans, life_features, \
    single_linkage

table, ufs = load_reference_tables()
names = {u.number: u.abbrev for u in ufs}

# %% [markdown]
# Single linkage on the life expectancy after 60. Two clusters split off the
# two longest-lived UFs.

# %%
feats = life_features(table, "after60", "total")
dend = single_linkage(distance_matrix(feats))
print("last merge heights:", dend.heights[-4:].round(3))
for k in (2, 4):
    rep = cluster_report(cut_dendrogram(dend, k), feats.ufs)
    print(k, {c: [names[u] for u in m] for c, m in rep.members.items() if len(m) < 6})

# %% [markdown]
# k-means on birth, male and female columns, compared with the hierarchical
# cut through the Rand index.

# %%
feats = life_features(table, "birth", "all", standardize=True)
flat = kmeans(feats, 4, seed=0)
hier = cut_dendrogram(single_linkage(distance_matrix(feats)), 4)
rep = cluster_report(flat, feats.ufs, hier)
print(f"k-means objective {flat.objective:.3f} after {flat.iterations} rounds, Rand index {rep.rand:.3f}")
for c, members in rep.members.items():
    print(c, " ".join(names[u] for u in members))
