"""Invariant factors of powers of the adjacency matrix."""

from adicamata import adic, dimension_group as dg
from adicamata.words import thue_morse_collared

A = adic.build_path_automaton(adic.build_bratteli(thue_morse_collared()))
M = dg.adjacency_matrix(A)
for row, q in zip(M.tolist(), M.labels):
    print(q, row)
rep = dg.dimension_group_report(M)
for k, f in enumerate(rep["invariant_factors_sequence"], 1):
    print(f"M^{k}: rank {rep['rank_sequence'][k - 1]}, invariant factors {f}")
print(rep["verdict"])
