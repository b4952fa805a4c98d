"""JSON round trips and DOT output."""

import json

from hypothesis import given, settings

from adicamata import serialization as ser
from adicamata.safety_automata import language_equal
from adicamata.transducers import Transducer

from conftest import small_automata


@settings(max_examples=80, deadline=None)
@given(small_automata())
def test_automaton_roundtrip(Aut):
    back = ser.loads(ser.dumps(Aut))
    assert back.transitions == Aut.transitions
    assert back.initial == Aut.initial and set(back.states) == set(Aut.states)
    assert language_equal(back, Aut)


def test_transducer_roundtrip(mu):
    back = ser.loads(ser.dumps(mu))
    assert isinstance(back, Transducer)
    assert back.underlying.transitions == mu.underlying.transitions
    assert back.in_alphabet == mu.in_alphabet


def test_bratteli_roundtrip(diagram):
    back = ser.loads(ser.dumps(diagram))
    assert back.sorted_edges() == diagram.sorted_edges()


def test_deterministic(mu):
    assert ser.dumps(mu) == ser.dumps(ser.loads(ser.dumps(mu)))


def test_schema(A):
    d = json.loads(ser.dumps(A))
    assert d["kind"] == "automaton"
    assert set(d) == {"kind", "alphabet", "states", "initial", "transitions"}
    assert len(d["transitions"]) == 12


def test_unknown_kind():
    import pytest
    with pytest.raises(ValueError):
        ser.from_dict({"kind": "nope"})
    with pytest.raises(ValueError):
        ser.automaton_from_dict({"states": []})


def test_dot_initial_markers(mu, A):
    dot = ser.to_dot(mu, name="adic")
    assert dot.startswith('digraph "adic" {')
    assert dot.count("shape=point") == len(mu.underlying.initial) == 10
    dot_A = ser.to_dot(A)
    assert dot_A.count("shape=point") == 6
    # a→c carries one label, a→b one label: edges are merged per endpoint pair
    assert '"a" -> "c" [label="1_c"]' in dot_A


def test_dot_bratteli(diagram):
    dot = ser.to_dot(diagram)
    assert dot.count("->") == 12
