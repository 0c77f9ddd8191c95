"""Side information on the 5-cycle: receiver i knows the bits of its two neighbors.

Sending all 5 bits is wasteful. A clique cover of the graph (a coloring of its
complement) needs 3 XORs, and the minrank says 3 is optimal among linear codes.

Run: python3 demos/index_code_c5.py
"""

from indexcoding.gf2 import minrank_oracle, vec_to_str
from indexcoding.graph import Graph
from indexcoding.index_code import code_from_coloring, code_from_matrix, decode_receiver, encode, verify_code

g = Graph.cycle(5)
res = minrank_oracle(g)
print(f"minrank of C5: {res.value} ({res.status}, {res.nodes} search nodes)")

code = code_from_matrix(res.witness.matrix(), g)
print("code from the minrank witness:")
print(code.to_text())

x = 0b10110  # bit i is x_i, printed as x_0 ... x_4 below
y = encode(code, x)
decoded = [decode_receiver(code, i, y, x) for i in range(g.n)]
print(f"message {vec_to_str(x, g.n)}: broadcast {vec_to_str(y, code.length)}, receivers decode {decoded}")

clique_code = code_from_coloring(g, [0, 0, 1, 1, 2])  # pairs {0,1}, {2,3} and {4}
for name, c in (("minrank", code), ("clique cover", clique_code)):
    v = verify_code(g, c)
    print(f"{name}: length {c.length}, all {v.words_checked} words decode: {v.ok}")
