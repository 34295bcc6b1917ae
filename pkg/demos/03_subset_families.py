"""
Subset families with small overlaps
===================================

Random greedy families of equal-size subsets, checked pair by pair.
"""

import warnings

from qidlab.designs import ad_condition, generate_family, verify_family

print("existence condition for eps=0.25, lambda=0.4:", ad_condition(0.25, 0.4))

with warnings.catch_warnings():
    warnings.simplefilter("ignore", UserWarning)
    fam = generate_family(20, 0.25, 0.4, 50, seed=1)

check = verify_family(fam)
print(f"{len(fam)} subsets of size {fam.subset_size}, overlap cap {fam.max_overlap}")
print("worst pair", check.worst_pair, "shares", check.worst_overlap, "elements; ok =", check.ok)
print("first few:", fam.subsets[:4])

# every 2-subset of {0,1,2,3} pairwise shares at most one element
with warnings.catch_warnings():
    warnings.simplefilter("ignore", UserWarning)
    print(generate_family(4, 0.5, 0.5, 6, mode="exhaustive").subsets)
