"""Normal forms: echelon, block echelon, and the lattice-augmented form.

An echelon form over ``a_1..a_n`` is a word ``d_1 d_2 ... d_n`` where each
``d_i`` is either absent or the letter ``a_i``; its maximal runs are the
blocks.  A block echelon form keeps exactly one omitted index between
consecutive blocks.  The lattice-augmented ("tilde") form is a block echelon
word followed by a product ``g_1^{l_1} ... g_n^{l_n}`` whose exponents vanish
on block interiors and are at most 1 in absolute value after single-letter
blocks.  Each normalizer returns a form whose element is conjugate to the
input; conjugacy is asserted downstream through character batteries.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .affine import (
    AffinePermutation,
    FinitePermutation,
    eval_word,
    finite_lift,
    quotient_to_finite,
)
from .lattice import LatticeElement, coordinates
from .words import Letter, TraceBuilder, Word, a, enumerate_moves


class EchelonError(ValueError):
    pass


@dataclass(frozen=True)
class EchelonForm:
    """Presence flags for the letters a_1..a_n, read left to right."""

    rank: int
    flags: tuple[bool, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "flags", tuple(bool(f) for f in self.flags))
        if len(self.flags) != self.rank:
            raise EchelonError(f"need {self.rank} flags, got {len(self.flags)}")

    @classmethod
    def from_word(cls, w: Word) -> EchelonForm:
        flags = [False] * w.rank
        last = 0
        for let in w.letters:
            if not let.is_coxeter or let.index > w.rank or let.index <= last:
                raise EchelonError(f"{w.render()!r} is not in echelon shape")
            flags[let.index - 1] = True
            last = let.index
        return cls(w.rank, tuple(flags))

    def word(self) -> Word:
        return Word.coxeter(self.rank, *(i for i, f in enumerate(self.flags, start=1) if f))

    def length(self) -> int:
        return sum(self.flags)

    def blocks(self) -> tuple[tuple[int, int], ...]:
        out: list[tuple[int, int]] = []
        start = None
        for i, f in enumerate(self.flags, start=1):
            if f and start is None:
                start = i
            elif not f and start is not None:
                out.append((start, i - 1))
                start = None
        if start is not None:
            out.append((start, self.rank))
        return tuple(out)

    def cycle_type(self) -> tuple[int, ...]:
        """Cycle type of the image in the finite quotient: each block
        ``a_p..a_k`` contributes a (k-p+2)-cycle, the rest are fixed points."""
        parts = [k - p + 2 for p, k in self.blocks()]
        parts += [1] * (self.rank + 1 - sum(parts))
        return tuple(sorted(parts, reverse=True))


@dataclass(frozen=True)
class BlockEchelonForm:
    """Blocks ``(p, k)`` of consecutive letters with gaps of exactly one."""

    rank: int
    blocks: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple((int(p), int(k)) for p, k in self.blocks))
        prev_end = None
        for p, k in self.blocks:
            if not 1 <= p <= k <= self.rank:
                raise EchelonError(f"block ({p}, {k}) out of range for rank {self.rank}")
            if prev_end is not None and p != prev_end + 2:
                raise EchelonError(
                    f"block ({p}, {k}) must start at {prev_end + 2} (one-letter gap)"
                )
            prev_end = k
        # A valid block word is also a valid echelon word.
        EchelonForm(self.rank, self._flags())

    def _flags(self) -> tuple[bool, ...]:
        flags = [False] * self.rank
        for p, k in self.blocks:
            for i in range(p, k + 1):
                flags[i - 1] = True
        return tuple(flags)

    def word(self) -> Word:
        letters = []
        for p, k in self.blocks:
            letters.extend(a(i) for i in range(p, k + 1))
        return Word(self.rank, tuple(letters))

    def length(self) -> int:
        return sum(k - p + 1 for p, k in self.blocks)

    def cycle_type(self) -> tuple[int, ...]:
        return EchelonForm(self.rank, self._flags()).cycle_type()


@dataclass(frozen=True)
class TildeEchelonForm:
    """Block echelon word times ``g_1^{l_1} ... g_n^{l_n}``.

    Exponents vanish strictly inside every block, and a single-letter block
    ``a_p`` allows only ``l_p`` in {-1, 0, 1}.
    """

    block_part: BlockEchelonForm
    lattice_part: LatticeElement

    def __post_init__(self) -> None:
        n = self.block_part.rank
        if self.lattice_part.rank != n:
            raise EchelonError("lattice part rank mismatch")
        exps = self.lattice_part.exponents
        for p, k in self.block_part.blocks:
            if k > p:
                for i in range(p + 1, k + 1):
                    if i <= n and exps[i - 1] != 0:
                        raise EchelonError(
                            f"interior index {i} of block ({p}, {k}) carries exponent {exps[i - 1]}"
                        )
            elif abs(exps[p - 1]) > 1:
                raise EchelonError(
                    f"single-letter block a_{p} allows exponent -1..1, got {exps[p - 1]}"
                )

    @property
    def rank(self) -> int:
        return self.block_part.rank

    def word(self) -> Word:
        return self.block_part.word() * self.lattice_part.to_word()

    def to_json(self) -> dict:
        return {
            "blocks": [list(b) for b in self.block_part.blocks],
            "exponents": self.lattice_part.to_json(),
        }


def _require_quotient_word(x: Word) -> None:
    if not x.is_coxeter_only() or any(l.index > x.rank for l in x.letters):
        raise EchelonError(f"{x.render()!r} must use only a_1..a_{x.rank}")


def permutation_to_word(sigma: FinitePermutation) -> Word:
    """Reduced word for a finite permutation as a product of adjacent
    transpositions, found by bubble sorting the window."""
    n = sigma.size - 1
    images = list(sigma.images)
    swaps: list[int] = []
    changed = True
    while changed:
        changed = False
        for i in range(n):
            if images[i] > images[i + 1]:
                images[i], images[i + 1] = images[i + 1], images[i]
                swaps.append(i + 1)
                changed = True
    return Word.coxeter(n, *reversed(swaps))


def blocks_from_cycle_type(cycle_type: tuple[int, ...], rank: int) -> tuple[tuple[int, int], ...]:
    """Left-packed blocks of lengths (part - 1) separated by one-letter gaps."""
    blocks: list[tuple[int, int]] = []
    position = 1
    for part in sorted(cycle_type, reverse=True):
        if part <= 1:
            continue
        end = position + part - 2
        if end > rank:
            raise EchelonError(f"cycle type {cycle_type} does not fit rank {rank}")
        blocks.append((position, end))
        position = end + 2
    return tuple(blocks)


def a_echelon(x: Word) -> EchelonForm:
    """Echelon form of a word over ``a_1..a_n``, built directly from the
    cycle type of its finite image.

    The result is conjugate to the input in the finite quotient (same cycle
    type) and never longer than the input: a permutation with c cycles needs
    at least ``n+1-c`` transpositions, which is exactly the length produced.
    """
    _require_quotient_word(x)
    sigma = quotient_to_finite(eval_word(x))
    blocks = blocks_from_cycle_type(sigma.cycle_type(), x.rank)
    flags = [False] * x.rank
    for p, k in blocks:
        for i in range(p, k + 1):
            flags[i - 1] = True
    return EchelonForm(x.rank, tuple(flags))


def block_echelon(e: EchelonForm) -> BlockEchelonForm:
    """Compact the gaps of an echelon form to exactly one letter.

    The last block stays put; every earlier block slides right until it sits
    one gap away from its successor, preserving block lengths and hence the
    cycle type.  Already-compact forms are returned unchanged.
    """
    blocks = list(e.blocks())
    for t in range(len(blocks) - 2, -1, -1):
        p, k = blocks[t]
        limit = blocks[t + 1][0] - 2
        if k < limit:
            blocks[t] = (p + (limit - k), limit)
    return BlockEchelonForm(e.rank, tuple(blocks))


def decompose(w: Word) -> tuple[Word, LatticeElement]:
    """Split ``w = x * m`` with ``x`` a reduced word over ``a_1..a_n`` lifting
    the finite part and ``m`` the remaining pure translation."""
    pi = eval_word(w)
    finite_word = permutation_to_word(quotient_to_finite(pi))
    m = eval_word(finite_word).inverse() * pi
    return finite_word, coordinates(m)


def conjugator(sigma: FinitePermutation, tau: FinitePermutation) -> FinitePermutation:
    """Some h with ``h * sigma * h^-1 == tau``; requires equal cycle types."""
    if sigma.cycle_type() != tau.cycle_type():
        raise EchelonError(
            f"cycle types differ: {sigma.cycle_type()} vs {tau.cycle_type()}"
        )
    images = [0] * sigma.size
    for src, dst in zip(sigma.cycles(), tau.cycles()):
        for s, d in zip(src, dst):
            images[s - 1] = d
    return FinitePermutation(tuple(images))


def _block_tail_shape(w: Word) -> BlockEchelonForm | None:
    """Detect words already shaped as a block echelon word followed by
    lattice letters only; returns the block form or None."""
    letters = w.letters
    split = 0
    while split < len(letters) and letters[split].is_coxeter:
        split += 1
    if any(l.is_coxeter for l in letters[split:]):
        return None
    head = Word(w.rank, letters[:split])
    try:
        return block_echelon(EchelonForm.from_word(head))
    except EchelonError:
        return None


def tilde_echelon(w: Word, with_trace: bool = False):
    """Normal form of an arbitrary word: block echelon word times a
    constrained lattice tail, conjugate to the input.

    A word already shaped as block-word-times-lattice-tail keeps its block
    positions and only has the tail normalised in place.  Anything else is
    split into finite and translation parts, with the finite part replaced by
    the left-packed block form of its cycle type (conjugating the whole
    element accordingly).  Exponent normalisation then runs per block, left
    to right: inside a block ``a_p..a_h`` the highest-index nonzero exponent
    migrates one index down per step until only ``l_p`` survives, carrying
    the sum of the block's exponents; a single-letter block instead sheds its
    exponent two at a time, keeping parity and sign.
    """
    n = w.rank
    pi = eval_word(w)
    trace = TraceBuilder(w)

    in_place = _block_tail_shape(w)
    if in_place is not None and in_place.word().letters == tuple(
        l for l in w.letters if l.is_coxeter
    ):
        block_form = in_place
        m = eval_word(block_form.word()).inverse() * pi
        exps = list(coordinates(m).exponents)
        trace.macro("collect the lattice tail", _stage_word(block_form, exps))
    else:
        sigma = quotient_to_finite(pi)
        blocks = blocks_from_cycle_type(sigma.cycle_type(), n)
        block_form = BlockEchelonForm(n, blocks)
        block_word = block_form.word()
        tau = quotient_to_finite(eval_word(block_word))
        h = conjugator(sigma, tau)
        lift = finite_lift(h)
        conjugated = lift * pi * lift.inverse()
        m = eval_word(block_word).inverse() * conjugated
        exps = list(coordinates(m).exponents)
        conj_word = permutation_to_word(h)
        trace.macro(
            f"conjugate by {conj_word.render() or '1'} onto the cycle-type block form",
            _stage_word(block_form, exps),
        )

    for p, k in block_form.blocks:
        if k == p:
            while abs(exps[p - 1]) >= 2:
                exps[p - 1] -= 2 if exps[p - 1] > 0 else -2
                trace.macro(
                    f"peel g{p}^2 around the single-letter block a{p}",
                    _stage_word(block_form, exps),
                )
        else:
            for j in range(k, p, -1):
                if exps[j - 1] == 0:
                    continue
                moved = exps[j - 1]
                exps[j - 2] += moved
                exps[j - 1] = 0
                trace.macro(
                    f"clockwise transfer g{j}^{moved} -> g{j - 1} across a{p}..a{k}",
                    _stage_word(block_form, exps),
                )

    form = TildeEchelonForm(block_form, LatticeElement(tuple(exps)))
    if with_trace:
        return form, trace.build()
    return form


def _stage_word(block_form: BlockEchelonForm, exps: list[int]) -> Word:
    return block_form.word() * LatticeElement(tuple(exps)).to_word()


def echelon_by_search(x: Word, state_cap: int = 500_000) -> EchelonForm:
    """Independent small-scale validator: breadth-first search over
    admissible moves (which never increase length) until a word of echelon
    shape appears.  Exponential in general; intended for tiny ranks."""
    _require_quotient_word(x)
    from .words import apply_move

    start = x.letters
    seen = {start}
    queue: deque[tuple[Letter, ...]] = deque([start])
    while queue:
        letters = queue.popleft()
        word = Word(x.rank, letters)
        try:
            return EchelonForm.from_word(word)
        except EchelonError:
            pass
        for move in enumerate_moves(word):
            result = apply_move(word, move)
            if result.letters not in seen:
                if len(seen) >= state_cap:
                    raise EchelonError("search state cap exceeded")
                seen.add(result.letters)
                queue.append(result.letters)
    raise EchelonError(f"no echelon form reachable from {x.render()!r}")
