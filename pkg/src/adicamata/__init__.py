"""Automata for the Thue-Morse adic system.

Submodules: :mod:`words`, :mod:`safety_automata`, :mod:`transducers`,
:mod:`adic`, :mod:`odometer`, :mod:`biminimality`, :mod:`dimension_group`,
plus :mod:`serialization`, :mod:`pipeline` and :mod:`cli`.
"""

from .adic import build_adic_transducer, build_bratteli, build_path_automaton
from .safety_automata import SafetyAutomaton, UltimatelyPeriodicWord
from .transducers import Transducer
from .words import THUE_MORSE, thue_morse_collared

__version__ = "0.1.0"

__all__ = [
    "SafetyAutomaton",
    "Transducer",
    "UltimatelyPeriodicWord",
    "THUE_MORSE",
    "build_adic_transducer",
    "build_bratteli",
    "build_path_automaton",
    "thue_morse_collared",
]
