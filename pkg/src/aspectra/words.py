"""Words and rewriting moves over the generators of the affine symmetric group.

The alphabet for rank ``n`` has two kinds of letters: Coxeter generators
``a1 .. a{n+1}`` sitting on an (n+1)-cycle, so index arithmetic wraps mod
``n+1``, and signed translation generators ``g1 .. gn``.  Words are immutable
sequences of letters.  Rewriting happens only through explicitly requested
moves (cancel, commute, circular shift, braid replacement), so every
derivation can be recorded and replayed step by step.  Cancel, commute and
braid moves preserve the group element; a circular shift replaces a word by a
conjugate.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union


class WordError(ValueError):
    """Malformed letter, word, or rank."""


class ParseError(WordError):
    """Text does not conform to the word grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (token {position})")
        self.position = position


class MoveError(WordError):
    """Requested move is not applicable at the recorded position."""


def norm_index(i: int, n: int) -> int:
    """Map an arbitrary integer index to its representative in 1..n+1."""
    return (i - 1) % (n + 1) + 1


def cycle_adjacent(i: int, j: int, n: int) -> bool:
    """True when vertices ``i`` and ``j`` are neighbours on the (n+1)-cycle."""
    d = (i - j) % (n + 1)
    return d == 1 or d == n


@dataclass(frozen=True)
class Letter:
    """One generator occurrence: ``a`` letters are unsigned involutions,
    ``g`` letters carry a sign (exponent +1 or -1)."""

    kind: str
    index: int
    sign: int = 1

    def __post_init__(self) -> None:
        if self.kind not in ("a", "g"):
            raise WordError(f"unknown letter kind {self.kind!r}")
        if self.sign not in (1, -1):
            raise WordError(f"letter sign must be +1 or -1, got {self.sign}")
        if self.kind == "a" and self.sign != 1:
            raise WordError("Coxeter letters carry no sign")
        if self.index < 1:
            raise WordError(f"letter index must be positive, got {self.index}")

    @property
    def is_coxeter(self) -> bool:
        return self.kind == "a"

    @property
    def is_lattice(self) -> bool:
        return self.kind == "g"

    def inverse(self) -> Letter:
        if self.kind == "a":
            return self
        return Letter("g", self.index, -self.sign)

    def render(self) -> str:
        if self.kind == "a":
            return f"a{self.index}"
        return f"g{self.index}" if self.sign == 1 else f"g{self.index}^-1"


def a(i: int) -> Letter:
    return Letter("a", i)


def g(j: int, sign: int = 1) -> Letter:
    return Letter("g", j, sign)


@dataclass(frozen=True)
class Word:
    """Immutable word over the rank-``rank`` alphabet.

    Coxeter indices range over ``1..rank+1``, lattice indices over
    ``1..rank``.  Ranks below 2 are rejected: the rank-1 diagram does not
    close into the cycle this library models.
    """

    rank: int
    letters: tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        if self.rank < 2:
            raise WordError(f"rank must be >= 2, got {self.rank}")
        object.__setattr__(self, "letters", tuple(self.letters))
        for pos, let in enumerate(self.letters, start=1):
            bound = self.rank + 1 if let.is_coxeter else self.rank
            if not 1 <= let.index <= bound:
                raise WordError(
                    f"{let.render()} at position {pos}: index out of range "
                    f"1..{bound} for rank {self.rank}"
                )

    @classmethod
    def coxeter(cls, rank: int, *indices: int) -> Word:
        return cls(rank, tuple(a(i) for i in indices))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __mul__(self, other: Word) -> Word:
        if self.rank != other.rank:
            raise WordError("cannot concatenate words of different rank")
        return Word(self.rank, self.letters + other.letters)

    def inverse(self) -> Word:
        return Word(self.rank, tuple(l.inverse() for l in reversed(self.letters)))

    def is_coxeter_only(self) -> bool:
        return all(l.is_coxeter for l in self.letters)

    def render(self) -> str:
        return render_word(self)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Word({self.rank}, '{render_word(self)}')"


_TOKEN = re.compile(r"^([ag])([0-9]+)(?:\^(-?[0-9]+))?$")


def parse_word(text: str, rank: int) -> Word:
    """Parse whitespace-separated tokens ``a3``, ``g2``, ``g1^-2`` into a word.

    ``a`` tokens admit exponents +-1 only (the generators are involutions);
    ``g`` tokens admit any nonzero exponent, which expands into that many
    signed letters.  No rewriting happens here.
    """
    letters: list[Letter] = []
    for pos, token in enumerate(text.split(), start=1):
        m = _TOKEN.match(token)
        if m is None:
            raise ParseError(f"bad token {token!r}", pos)
        kind, index = m.group(1), int(m.group(2))
        exp = 1 if m.group(3) is None else int(m.group(3))
        if kind == "a":
            if exp not in (1, -1):
                raise ParseError(
                    f"{token!r}: Coxeter letters admit exponents +-1 only", pos
                )
            letters.append(Letter("a", index))
        else:
            if exp == 0:
                raise ParseError(f"{token!r}: zero exponent", pos)
            letters.extend([Letter("g", index, 1 if exp > 0 else -1)] * abs(exp))
    return Word(rank, tuple(letters))


def render_word(w: Word) -> str:
    """Render in the grammar accepted by :func:`parse_word`.

    Runs of equal lattice letters collapse into exponent notation, so the
    round trip ``parse_word(render_word(w), w.rank) == w`` holds.
    """
    parts: list[str] = []
    i = 0
    while i < len(w.letters):
        let = w.letters[i]
        if let.is_coxeter:
            parts.append(let.render())
            i += 1
            continue
        j = i
        while j < len(w.letters) and w.letters[j] == let:
            j += 1
        total = (j - i) * let.sign
        parts.append(f"g{let.index}" if total == 1 else f"g{let.index}^{total}")
        i = j
    return " ".join(parts)


@dataclass(frozen=True)
class Cancel:
    """Delete the equal Coxeter letters at positions p, p+1."""

    position: int


@dataclass(frozen=True)
class Commute:
    """Swap the commuting letters at positions p, p+1."""

    position: int


@dataclass(frozen=True)
class Circular:
    """Move the length-``split`` prefix to the back of the word."""

    split: int


@dataclass(frozen=True)
class Braid:
    """Replace the pattern x y x at positions p..p+2 by y x y, for
    cycle-adjacent Coxeter letters x, y."""

    position: int


@dataclass(frozen=True)
class Macro:
    """A derived relation applied as one recorded step.

    Macros do not belong to the primitive move set; traces record them for
    derivations that use proved relations (conjugation, letter-block
    commutation) as single strokes.  Every macro used here preserves the
    conjugacy class.
    """

    name: str


AdmissibleMove = Union[Cancel, Commute, Circular, Braid]
TraceStep = Union[Cancel, Commute, Circular, Braid, Macro]

_KIND_ORDER = {Cancel: 0, Commute: 1, Circular: 2, Braid: 3}


def letters_commute(x: Letter, y: Letter, n: int) -> bool:
    """Commutation table of the rank-``n`` alphabet.

    Two Coxeter letters commute iff their indices are distinct and not
    adjacent on the cycle.  A Coxeter letter ``a_k`` passes a lattice letter
    ``g_j`` iff k is none of j-1, j, j+1 mod n+1.  Lattice letters commute
    with each other (the translation subgroup is abelian).
    """
    if x.is_coxeter and y.is_coxeter:
        return x.index != y.index and not cycle_adjacent(x.index, y.index, n)
    if x.is_lattice and y.is_lattice:
        return True
    k = x.index if x.is_coxeter else y.index
    j = y.index if x.is_coxeter else x.index
    return k not in (norm_index(j - 1, n), j, norm_index(j + 1, n))


def _check(condition: bool, message: str) -> None:
    if not condition:
        raise MoveError(message)


def apply_move(w: Word, move: AdmissibleMove) -> Word:
    """Apply a single move at its recorded position, validating applicability."""
    ls = w.letters
    if isinstance(move, Cancel):
        p = move.position
        _check(1 <= p <= len(ls) - 1, f"Cancel position {p} out of range")
        x, y = ls[p - 1], ls[p]
        _check(x.is_coxeter and y.is_coxeter, "Cancel needs two Coxeter letters")
        _check(x == y, "Cancel needs equal adjacent letters")
        return Word(w.rank, ls[: p - 1] + ls[p + 1 :])
    if isinstance(move, Commute):
        p = move.position
        _check(1 <= p <= len(ls) - 1, f"Commute position {p} out of range")
        x, y = ls[p - 1], ls[p]
        _check(x != y, "swapping equal letters is vacuous")
        _check(letters_commute(x, y, w.rank), f"{x.render()} and {y.render()} do not commute")
        return Word(w.rank, ls[: p - 1] + (y, x) + ls[p + 1 :])
    if isinstance(move, Circular):
        k = move.split
        _check(1 <= k <= len(ls) - 1, f"Circular split {k} out of range")
        return Word(w.rank, ls[k:] + ls[:k])
    if isinstance(move, Braid):
        p = move.position
        _check(1 <= p <= len(ls) - 2, f"Braid position {p} out of range")
        x, y, z = ls[p - 1], ls[p], ls[p + 1]
        _check(x.is_coxeter and y.is_coxeter and z.is_coxeter, "Braid needs Coxeter letters")
        _check(x == z and x != y, "Braid needs an x y x pattern")
        _check(
            cycle_adjacent(x.index, y.index, w.rank),
            "Braid needs cycle-adjacent indices",
        )
        return Word(w.rank, ls[: p - 1] + (y, x, y) + ls[p + 2 :])
    raise MoveError(f"unknown move {move!r}")


def enumerate_moves(w: Word) -> list[AdmissibleMove]:
    """All applicable moves, ordered by kind (cancel, commute, circular,
    braid) and then by position."""
    ls = w.letters
    n = w.rank
    moves: list[AdmissibleMove] = []
    for p in range(1, len(ls)):
        x, y = ls[p - 1], ls[p]
        if x.is_coxeter and y.is_coxeter and x == y:
            moves.append(Cancel(p))
    for p in range(1, len(ls)):
        x, y = ls[p - 1], ls[p]
        if x != y and letters_commute(x, y, n):
            moves.append(Commute(p))
    if len(ls) >= 2:
        moves.extend(Circular(k) for k in range(1, len(ls)))
    for p in range(1, len(ls) - 1):
        x, y, z = ls[p - 1], ls[p], ls[p + 1]
        if (
            x.is_coxeter
            and y.is_coxeter
            and z.is_coxeter
            and x == z
            and x != y
            and cycle_adjacent(x.index, y.index, n)
        ):
            moves.append(Braid(p))
    return sorted(moves, key=lambda m: (_KIND_ORDER[type(m)], getattr(m, "position", getattr(m, "split", 0))))


@dataclass(frozen=True)
class MoveTrace:
    """A replayable derivation: the initial word and each (move, result) step."""

    initial: Word
    steps: tuple[tuple[TraceStep, Word], ...] = ()

    @property
    def final(self) -> Word:
        return self.steps[-1][1] if self.steps else self.initial

    def replay(self) -> None:
        """Re-apply every primitive step and confirm the recorded result.

        Macro steps are taken at face value here; their conjugacy claims are
        the business of the character-battery tests.
        """
        current = self.initial
        for move, result in self.steps:
            if isinstance(move, Macro):
                current = result
                continue
            applied = apply_move(current, move)
            if applied != result:
                raise MoveError(f"recorded result of {move} does not match replay")
            current = applied

    def render_lines(self) -> list[str]:
        lines = [f"start: {render_word(self.initial)}"]
        for move, result in self.steps:
            if isinstance(move, Macro):
                desc = f"macro[{move.name}]"
            else:
                pos = getattr(move, "position", getattr(move, "split", None))
                desc = f"{type(move).__name__.lower()}@{pos}"
            lines.append(f"{desc}: {render_word(result)}")
        return lines


class TraceBuilder:
    """Accumulates a MoveTrace while rewriting."""

    def __init__(self, initial: Word):
        self._initial = initial
        self._current = initial
        self._steps: list[tuple[TraceStep, Word]] = []

    @property
    def current(self) -> Word:
        return self._current

    def apply(self, move: AdmissibleMove) -> Word:
        self._current = apply_move(self._current, move)
        self._steps.append((move, self._current))
        return self._current

    def macro(self, name: str, result: Word) -> Word:
        self._steps.append((Macro(name), result))
        self._current = result
        return result

    def build(self) -> MoveTrace:
        return MoveTrace(self._initial, tuple(self._steps))
