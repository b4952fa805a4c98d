"""JSON and DOT interchange for automata, transducers and diagrams.

Output is deterministic: states follow the automaton's own order, transitions
are sorted by (source, symbol, target) position.
"""

from __future__ import annotations

import json
from typing import Any

from .adic import BratteliDiagram, PathWord
from .safety_automata import SafetyAutomaton, UltimatelyPeriodicWord, display
from .transducers import Transducer, pair_alphabet
from .words import WordWindow


def _ordered_transitions(A: SafetyAutomaton) -> list:
    si = {q: k for k, q in enumerate(A.states)}
    ai = {a: k for k, a in enumerate(A.alphabet)}
    return sorted(A.transitions, key=lambda t: (si[t[0]], ai[t[1]], si[t[2]]))


def _symbol(sym) -> str:
    if isinstance(sym, tuple) and len(sym) == 2:
        return f"{display(sym[0])}|{display(sym[1])}"
    return display(sym)


def automaton_to_dict(A: SafetyAutomaton) -> dict:
    return {
        "alphabet": [_symbol(a) for a in A.alphabet],
        "states": [display(q) for q in A.states],
        "initial": [display(q) for q in A.ordered_initial()],
        "transitions": [[display(s), _symbol(a), display(d)] for s, a, d in _ordered_transitions(A)],
    }


def automaton_from_dict(data: dict) -> SafetyAutomaton:
    for key in ("alphabet", "states", "initial", "transitions"):
        if key not in data:
            raise ValueError(f"missing key {key!r}")
    return SafetyAutomaton(
        tuple(data["states"]), tuple(data["alphabet"]),
        frozenset(tuple(t) for t in data["transitions"]), frozenset(data["initial"]),
    )


def transducer_to_dict(T: Transducer) -> dict:
    d = automaton_to_dict(T.underlying)
    # the full pair alphabet is implied; keep only the two letter lists
    del d["alphabet"]
    d["in_alphabet"] = [display(a) for a in T.in_alphabet]
    d["out_alphabet"] = [display(a) for a in T.out_alphabet]
    return d


def transducer_from_dict(data: dict) -> Transducer:
    ins, outs = tuple(data["in_alphabet"]), tuple(data["out_alphabet"])
    trans = set()
    for s, sym, d in data["transitions"]:
        a, sep, b = sym.partition("|")
        if not sep:
            a = b = sym  # diagonal shorthand
        trans.add((s, (a, b), d))
    U = SafetyAutomaton(tuple(data["states"]), pair_alphabet(ins, outs), frozenset(trans),
                        frozenset(data["initial"]))
    return Transducer(U, ins, outs)


def bratteli_to_dict(B: BratteliDiagram) -> dict:
    return {"vertices": list(B.vertices), "edges": [list(e) for e in B.sorted_edges()]}


def bratteli_from_dict(data: dict) -> BratteliDiagram:
    return BratteliDiagram(tuple(data["vertices"]), frozenset(tuple(e) for e in data["edges"]))


def to_dict(obj) -> Any:
    """Dispatch on the object type; falls back to the object itself for
    plain JSON values and to ``to_json``/``str`` where defined."""
    if isinstance(obj, Transducer):
        return {"kind": "transducer", **transducer_to_dict(obj)}
    if isinstance(obj, SafetyAutomaton):
        return {"kind": "automaton", **automaton_to_dict(obj)}
    if isinstance(obj, BratteliDiagram):
        return {"kind": "bratteli", **bratteli_to_dict(obj)}
    if isinstance(obj, WordWindow):
        return obj.to_json()
    if isinstance(obj, (PathWord, UltimatelyPeriodicWord)):
        return str(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return obj


def from_dict(data: dict):
    kind = data.get("kind")
    if kind == "transducer":
        return transducer_from_dict(data)
    if kind == "automaton":
        return automaton_from_dict(data)
    if kind == "bratteli":
        return bratteli_from_dict(data)
    raise ValueError(f"unknown kind {kind!r}")


def dumps(obj, **kw) -> str:
    kw.setdefault("indent", 2)
    kw.setdefault("ensure_ascii", False)
    return json.dumps(to_dict(obj), **kw) + "\n"


def loads(text: str):
    return from_dict(json.loads(text))


# -- DOT ---------------------------------------------------------------------------

def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(obj, name: str = "G") -> str:
    """Graphviz source.  Initial states get an incoming edge from an invisible
    point node; parallel edges with the same endpoints are merged into one
    edge with a comma-separated label."""
    if isinstance(obj, BratteliDiagram):
        lines = [f"digraph {_quote(name)} {{", "  rankdir=LR;"]
        for v in obj.vertices:
            lines.append(f"  {_quote(display(v))};")
        for s, d, r in obj.sorted_edges():
            lines.append(f"  {_quote(display(s))} -> {_quote(display(d))} [label={_quote(str(r))}];")
        return "\n".join(lines + ["}"]) + "\n"
    A = obj.underlying if isinstance(obj, Transducer) else obj
    if not isinstance(A, SafetyAutomaton):
        raise TypeError(f"cannot render {type(obj).__name__} as DOT")
    lines = [f"digraph {_quote(name)} {{", "  rankdir=LR;", "  node [shape=circle];"]
    init = A.ordered_initial()
    for k, q in enumerate(init):
        lines.append(f"  __init{k} [shape=point, style=invis];")
    for q in A.states:
        lines.append(f"  {_quote(display(q))};")
    for k, q in enumerate(init):
        lines.append(f"  __init{k} -> {_quote(display(q))};")
    grouped: dict = {}
    for s, a, d in _ordered_transitions(A):
        grouped.setdefault((s, d), []).append(_symbol(a))
    si = {q: k for k, q in enumerate(A.states)}
    for (s, d) in sorted(grouped, key=lambda e: (si[e[0]], si[e[1]])):
        label = ", ".join(grouped[(s, d)])
        lines.append(f"  {_quote(display(s))} -> {_quote(display(d))} [label={_quote(label)}];")
    return "\n".join(lines + ["}"]) + "\n"
