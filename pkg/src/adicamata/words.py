"""Substitutions on finite words: Thue-Morse, its collaring, and factor sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

BITS = ("0", "1")
STATE_NAMES = ("a", "b", "c", "d", "e", "f")


class IndeterminateError(ValueError):
    """A window is too short to decide a question that longer windows settle."""


class IndeterminateType:
    """Singleton returned by :func:`factor_split` when both alignments fit."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INDETERMINATE"

    def __bool__(self):
        return False


INDETERMINATE = IndeterminateType()


@dataclass(frozen=True)
class Substitution:
    """A letter-to-word morphism.  Words are tuples of letters (strings are
    accepted and split into characters when all letters are single chars)."""

    alphabet: tuple
    images: Mapping

    def __post_init__(self):
        alphabet = tuple(self.alphabet)
        images = {a: tuple(self.images[a]) for a in alphabet}
        for a, img in images.items():
            if not img:
                raise ValueError(f"image of {a!r} is empty")
            bad = [x for x in img if x not in alphabet]
            if bad:
                raise ValueError(f"image of {a!r} uses unknown letters {bad}")
        if set(self.images) - set(alphabet):
            raise ValueError("images given for letters outside the alphabet")
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "images", images)

    @property
    def is_constant_length(self) -> bool:
        return len({len(v) for v in self.images.values()}) == 1

    @property
    def length(self) -> int:
        if not self.is_constant_length:
            raise ValueError("substitution is not of constant length")
        return len(next(iter(self.images.values())))

    def __call__(self, w):
        return apply_substitution(self, w)

    def __hash__(self):
        return hash((self.alphabet, tuple(self.images[a] for a in self.alphabet)))

    def __eq__(self, other):
        return (isinstance(other, Substitution) and self.alphabet == other.alphabet
                and self.images == other.images)


@dataclass(frozen=True)
class DecoratedLetter:
    """The edge label ``i_j`` of the path automaton: bit ``i`` into state ``j``."""

    bit: int
    state: str

    def __post_init__(self):
        if self.bit not in (0, 1):
            raise ValueError(f"bit must be 0 or 1, got {self.bit!r}")

    @classmethod
    def parse(cls, text: str) -> "DecoratedLetter":
        bit, sep, state = text.partition("_")
        if not sep or bit not in BITS or not state:
            raise ValueError(f"bad decorated letter {text!r}")
        return cls(int(bit), state)

    def __str__(self):
        return f"{self.bit}_{self.state}"


@dataclass(frozen=True)
class WordWindow:
    """A finite binary word placed in ℤ: ``letters[0]`` sits at ``offset``."""

    letters: str
    offset: int = 0

    def __post_init__(self):
        letters = "".join(self.letters)
        if not letters:
            raise ValueError("window must be nonempty")
        if set(letters) - set(BITS):
            raise ValueError(f"window must be binary, got {letters!r}")
        object.__setattr__(self, "letters", letters)

    @property
    def start(self) -> int:
        return self.offset

    @property
    def end(self) -> int:
        """One past the last position."""
        return self.offset + len(self.letters)

    def __len__(self):
        return len(self.letters)

    def at(self, i: int) -> str:
        if not self.start <= i < self.end:
            raise IndexError(i)
        return self.letters[i - self.offset]

    def slice(self, lo: int, hi: int) -> "WordWindow":
        lo, hi = max(lo, self.start), min(hi, self.end)
        return WordWindow(self.letters[lo - self.offset:hi - self.offset], lo)

    def shift(self) -> "WordWindow":
        """σ: the letter at position 1 moves to the origin."""
        return WordWindow(self.letters, self.offset - 1)

    def contains(self, other: "WordWindow") -> bool:
        if not (self.start <= other.start and other.end <= self.end):
            return False
        return self.slice(other.start, other.end).letters == other.letters

    def __str__(self):
        k = -self.offset
        if 0 <= k <= len(self.letters):
            return self.letters[:k] + "." + self.letters[k:]
        return f"{self.letters}@{self.offset}"

    def to_json(self) -> dict:
        return {"offset": self.offset, "string": self.letters}


def _as_word(s: Substitution, w) -> tuple:
    if isinstance(w, str) and all(isinstance(a, str) and len(a) == 1 for a in s.alphabet):
        return tuple(w)
    return tuple(w)


def _like(template, word: tuple):
    """Return ``word`` as a string when the input was a string."""
    if isinstance(template, str) and all(isinstance(a, str) for a in word):
        return "".join(word)
    return word


def apply_substitution(s: Substitution, w):
    word = _as_word(s, w)
    out = []
    for a in word:
        if a not in s.images:
            raise ValueError(f"letter {a!r} not in the alphabet")
        out.extend(s.images[a])
    return _like(w, tuple(out))


def iterate(s: Substitution, w, n: int):
    for _ in range(n):
        w = apply_substitution(s, w)
    return w


def fixed_point_prefix(s: Substitution, seed, n: int):
    """ζⁿ(seed) for a prolongable seed."""
    if seed not in s.images:
        raise ValueError(f"letter {seed!r} not in the alphabet")
    if s.images[seed][0] != seed:
        raise ValueError(f"{seed!r} is not prolongable: its image does not start with it")
    if n < 0:
        raise ValueError("n must be nonnegative")
    start = seed if isinstance(seed, str) and len(seed) == 1 else (seed,)
    return iterate(s, start, n)


THUE_MORSE = Substitution(BITS, {"0": "01", "1": "10"})
DOUBLING = Substitution(("•",), {"•": ("•", "•")})


def _factors(word: Sequence, n: int) -> set:
    return {tuple(word[i:i + n]) for i in range(len(word) - n + 1)}


def legal_subwords(s: Substitution, n: int, seed=None) -> set:
    """Length-``n`` factors of sⁿ(seed) for large n, detected by the factor
    set being unchanged between two consecutive iterations (and nonempty)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if seed is None:
        seed = s.alphabet[0]
    w = (seed,)
    prev = None
    for _ in range(64):
        w = apply_substitution(s, w)
        cur = _factors(w, n)
        if cur and cur == prev:
            break
        prev = cur
    else:  # pragma: no cover - linear repetitivity makes this unreachable
        raise RuntimeError("factor set did not stabilize")
    if all(isinstance(a, str) and len(a) == 1 for a in s.alphabet):
        return {"".join(f) for f in cur}
    return cur


def is_overlap_free(w) -> bool:
    """No factor p q p q p with |pq| ≥ 1, i.e. no factor of length 2k+1 with
    period k."""
    n = len(w)
    for k in range(1, n // 2 + 1):
        run = 0  # consecutive positions i with w[i] == w[i+k]
        for i in range(n - k):
            run = run + 1 if w[i] == w[i + k] else 0
            if run >= k + 1:
                return False
    return True


def bar(w: str) -> str:
    """The involution 0 ↔ 1."""
    return w.translate(str.maketrans("01", "10"))


# -- collaring ---------------------------------------------------------------

# conventional names for the legal collared Thue-Morse letters
TM_COLLAR_NAMES = {"100": "a", "010": "b", "110": "c", "001": "d", "101": "e", "011": "f"}


def collar(s: Substitution, names: Mapping | None = None) -> Substitution:
    """Collared substitution on legal 3-blocks ``xyz``: the image of ``xyz``
    is the sequence of 3-blocks centred on the letters of s(y) inside s(xyz).

    ``names`` optionally renames the 3-block strings.
    """
    if not s.is_constant_length:
        raise ValueError("collaring needs a constant-length substitution")
    if not all(isinstance(a, str) and len(a) == 1 for a in s.alphabet):
        raise ValueError("collaring needs single-character letters")
    letters = sorted(legal_subwords(s, 3))
    names = dict(names or {x: x for x in letters})
    missing = [x for x in letters if x not in names]
    if missing:
        raise ValueError(f"no names for legal blocks {missing}")
    L = s.length
    images = {}
    for xyz in letters:
        big = apply_substitution(s, xyz)
        img = []
        for i in range(L, 2 * L):
            block = big[i - 1:i + 2]
            if block not in names:
                raise ValueError(f"illegal block {block!r} in the image of {xyz!r}")
            img.append(names[block])
        images[names[xyz]] = tuple(img)
    alphabet = sorted(names[x] for x in letters)
    return Substitution(tuple(alphabet), images)


def thue_morse_collared() -> Substitution:
    """collar(ζ) with letters renamed a..f."""
    return collar(THUE_MORSE, TM_COLLAR_NAMES)


def collar_letter_bits(name: str) -> str:
    """The 3-block ``xyz`` for a collared Thue-Morse letter name."""
    inverse = {v: k for k, v in TM_COLLAR_NAMES.items()}
    return inverse.get(name, name)


def project(name: str) -> str:
    """ˣyᶻ ↦ y."""
    return collar_letter_bits(name)[1]


# -- desubstitution ----------------------------------------------------------

def factor_split(w: WordWindow, blocks: Iterable = ("01", "10")):
    """Parity of the positions where the ζ-blocks of ``w`` start.

    Returns 0 or 1, or :data:`INDETERMINATE` when both alignments are
    consistent.  Raises ValueError when neither is.
    """
    blocks = set(blocks)
    good = []
    for q in (0, 1):
        first = w.start + ((q - w.start) % 2)
        ok = True
        for i in range(first, w.end - 1, 2):
            if w.letters[i - w.offset:i - w.offset + 2] not in blocks:
                ok = False
                break
        if ok:
            good.append(q)
    if not good:
        raise ValueError(f"window {w} is not legal")
    if len(good) == 2:
        return INDETERMINATE
    return good[0]


def desubstitute(w: WordWindow):
    """One step of ζ⁻¹: returns (parity, coarser window) with the parity q of
    the block alignment; the block starting at 2k+q becomes position k."""
    q = factor_split(w)
    if q is INDETERMINATE:
        raise IndeterminateError(f"window {w} does not determine the block alignment")
    first = w.start + ((q - w.start) % 2)
    last = first
    out = []
    while last + 2 <= w.end:
        out.append("0" if w.at(last) + w.at(last + 1) == "01" else "1")
        last += 2
    if not out:
        raise IndeterminateError(f"window {w} contains no complete block")
    return q, WordWindow("".join(out), (first - q) // 2)
