"""Square a D1 and look at what comes out.

The five lifted generators of a D1 produce 17 congruences, not 13.  The
reason is visible directly: the diagonal of A(beta) is a union of blocks of
(alpha_0 ^ alpha_1) v (gamma_0 ^ gamma_1), so that join cannot be the top.

    python3 demos/d1_square.py
"""
from conlat import catalog
from conlat.algebra import FiniteAlgebra
from conlat.engine import TheoremViolation, build_subpower, generate_d1_square
from conlat.lattice import find_embedding, is_join_semidistributive, is_meet_semidistributive
from conlat.partition import Partition

n = 5
alpha = Partition.from_blocks(n, [[0, 1], [2, 3]])
gamma = Partition.from_blocks(n, [[0, 2], [1, 4]])
beta = Partition.from_blocks(n, [[3, 4]])
alg = FiniteAlgebra.set_only(n)

try:
    generate_d1_square(alg, {"alpha": alpha, "gamma": gamma, "beta": beta})
except TheoremViolation as exc:
    lat = exc.lattice
    print(exc)

d13 = catalog.build("D13").lattice
print("D13 embeds:", find_embedding(d13, lat) is not None)
print("meet-SD:", is_meet_semidistributive(lat), " join-SD:", is_join_semidistributive(lat))

ctx = build_subpower(alg, beta)
L = ctx.lifted
j = (L(alpha, 0) & L(alpha, 1)) | (L(gamma, 0) & L(gamma, 1))
print("blocks of (alpha_0 ^ alpha_1) v (gamma_0 ^ gamma_1):")
for block in ctx.tuple_partition(j):
    tag = "diagonal" if all(a == b for a, b in block) else "off-diagonal"
    print(f"   {tag:13s} {block}")
