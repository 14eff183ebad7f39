"""Every pentagon and every D2 of the partition lattice on five points.

    python3 demos/small_sets.py
"""
from collections import Counter

from conlat import catalog
from conlat.algebra import FiniteAlgebra
from conlat.engine import PreconditionError, classify_d2, l14_square, search_n5_all
from conlat.partition import Partition, all_partitions

alg = FiniteAlgebra.set_only(5)
parts = list(all_partitions(5))

survey = search_n5_all(alg, parts)
print("pentagons:", Counter(c.name for c in survey.classifications))

d2 = Counter()
for a in parts:
    for g in parts:
        for b in parts:
            if a == g:
                continue
            try:
                d2[classify_d2(alg, {"alpha": a, "gamma": g, "beta": b}, relaxed=True).name] += 1
            except PreconditionError:
                pass
print("D2s:", d2)

# the square over gamma instead of beta
w = {"gamma": Partition.from_blocks(4, [[0, 1]]),
     "alpha": Partition.from_blocks(4, [[0, 1], [2, 3]]),
     "beta": Partition.from_blocks(4, [[0, 2], [1, 3]])}
lat, _ = l14_square(FiniteAlgebra.set_only(4), w)
print(f"square over gamma: {len(lat)} elements, matches L14: {catalog.identify(lat, families=())[0] == 'L14'}")
