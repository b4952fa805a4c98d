"""Build the integer automata Λ(x,s) and print their members in a window,
then the (empty) intersection −Λ(x,d) ∩ Λ(y,e)."""

from adicamata import adic, biminimality as bm
from adicamata.words import thue_morse_collared

B = adic.build_bratteli(thue_morse_collared())
A = adic.build_path_automaton(B)
system = bm.default_system(A, adic.build_adic_transducer(B))

for s in A.states:
    L = system.automaton_for("x", s)
    print(f"Λ(x,{s}) [{len(L.states)} states]:", L.members(-16, 16))

rep = bm.biminimality_report(system, oracle_range=128)
print("−Λ(x,d) ∩ Λ(y,e) empty:", rep["intersection_empty"])
print("leading zeros:", rep["leading_zeros"])
