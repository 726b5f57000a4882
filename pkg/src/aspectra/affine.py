"""Window-notation model of the affine symmetric group.

A rank-``n`` affine permutation is a bijection ``f`` of the integers with
``f(i + n + 1) = f(i) + n + 1`` and ``sum(f(1..n+1)) = (n+1)(n+2)/2``.  It is
stored through its window ``[f(1), ..., f(n+1)]``.  Composition is exact
integer arithmetic, which makes this model the primary equality oracle of the
library.  Reducing a window mod ``n+1`` gives the finite-permutation quotient;
the kernel of that quotient is the translation lattice, coordinatised by
:func:`translation_vector`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .words import Letter, Word, a


class AffineError(ValueError):
    pass


@dataclass(frozen=True)
class FinitePermutation:
    """A permutation of ``1..N`` given by its tuple of images."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "images", tuple(self.images))
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise AffineError(f"not a bijection on 1..{len(self.images)}: {self.images}")

    @classmethod
    def identity(cls, size: int) -> FinitePermutation:
        return cls(tuple(range(1, size + 1)))

    @property
    def size(self) -> int:
        return len(self.images)

    def apply(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: FinitePermutation) -> FinitePermutation:
        # (self * other)(i) = self(other(i)): the right factor acts first.
        return FinitePermutation(tuple(self.images[j - 1] for j in other.images))

    def inverse(self) -> FinitePermutation:
        inv = [0] * self.size
        for i, v in enumerate(self.images, start=1):
            inv[v - 1] = i
        return FinitePermutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images, start=1))

    def cycles(self) -> list[list[int]]:
        """Cycles sorted by length (descending), then by smallest element."""
        seen: set[int] = set()
        out: list[list[int]] = []
        for start in range(1, self.size + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            k = self.apply(start)
            while k != start:
                cyc.append(k)
                seen.add(k)
                k = self.apply(k)
            out.append(cyc)
        out.sort(key=lambda c: (-len(c), c[0]))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cycles())


@dataclass(frozen=True)
class AffinePermutation:
    """Periodic bijection of the integers stored through one window."""

    window: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "window", tuple(self.window))
        period = len(self.window)
        if period < 3:
            raise AffineError("window must have length >= 3 (rank >= 2)")
        if len({v % period for v in self.window}) != period:
            raise AffineError(f"window values collide mod {period}: {self.window}")
        expected = period * (period + 1) // 2
        if sum(self.window) != expected:
            raise AffineError(
                f"window sums to {sum(self.window)}, expected {expected}: {self.window}"
            )

    @classmethod
    def identity(cls, rank: int) -> AffinePermutation:
        return cls(tuple(range(1, rank + 2)))

    @classmethod
    def translation(cls, coords: tuple[int, ...]) -> AffinePermutation:
        """Pure translation with the given displacement coordinates."""
        period = len(coords)
        if sum(coords) != 0:
            raise AffineError(f"translation coordinates must sum to 0: {coords}")
        return cls(tuple(i + c * period for i, c in enumerate(coords, start=1)))

    @property
    def rank(self) -> int:
        return len(self.window) - 1

    @property
    def period(self) -> int:
        return len(self.window)

    def apply(self, k: int) -> int:
        q, r = divmod(k - 1, self.period)
        return self.window[r] + q * self.period

    def __mul__(self, other: AffinePermutation) -> AffinePermutation:
        # (self * other)(i) = self(other(i)): matches left-to-right word order.
        if self.period != other.period:
            raise AffineError("rank mismatch")
        return AffinePermutation(tuple(self.apply(other.apply(i)) for i in range(1, self.period + 1)))

    def inverse(self) -> AffinePermutation:
        period = self.period
        residue_to_pos = {}
        for pos, v in enumerate(self.window, start=1):
            residue_to_pos[v % period] = (pos, v)
        win = []
        for i in range(1, period + 1):
            pos, v = residue_to_pos[i % period]
            win.append(pos + (i - v) // period * period)
        return AffinePermutation(tuple(win))

    def __pow__(self, e: int) -> AffinePermutation:
        if e < 0:
            return self.inverse() ** (-e)
        result = AffinePermutation.identity(self.rank)
        for _ in range(e):
            result = result * self
        return result

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.window, start=1))

    def to_json(self) -> list[int]:
        return list(self.window)


@lru_cache(maxsize=None)
def generator_image(i: int, n: int) -> AffinePermutation:
    """Affine transposition image of the i-th Coxeter generator.

    For ``i <= n`` this swaps ``i`` and ``i+1`` in every period; the extra
    cycle generator ``i = n+1`` swaps ``n+1`` and ``n+2``, whose window is
    ``[0, 2, ..., n, n+2]``.
    """
    if not 1 <= i <= n + 1:
        raise AffineError(f"generator index {i} out of range 1..{n + 1}")
    win = list(range(1, n + 2))
    if i <= n:
        win[i - 1], win[i] = win[i], win[i - 1]
    else:
        win[n] = n + 2
        win[0] = 0
    return AffinePermutation(tuple(win))


def _letter_image(let: Letter, n: int) -> AffinePermutation:
    if let.is_coxeter:
        return generator_image(let.index, n)
    # Lattice letters are defined by words in the Coxeter letters; the
    # definitions live one module up, hence the local import.
    from .lattice import g_image

    img = g_image(let.index, n)
    return img if let.sign == 1 else img.inverse()


def eval_word(w: Word) -> AffinePermutation:
    """Product of the letter images in word order (empty word: identity)."""
    result = AffinePermutation.identity(w.rank)
    for let in w.letters:
        result = result * _letter_image(let, w.rank)
    return result


def quotient_to_finite(p: AffinePermutation) -> FinitePermutation:
    """Reduce the window mod n+1 into ``1..n+1``; a group homomorphism."""
    period = p.period
    return FinitePermutation(tuple((v - 1) % period + 1 for v in p.window))


def finite_lift(sigma: FinitePermutation) -> AffinePermutation:
    """The affine permutation whose window is the finite permutation itself."""
    return AffinePermutation(sigma.images)


def translation_vector(p: AffinePermutation) -> tuple[int, ...]:
    """Displacement coordinates of the translation part of ``p``.

    Writing ``p = t * lift(quotient(p))`` with ``t`` a pure translation,
    returns the integer vector ``c`` with ``t(i) = i + c[i-1] * (n+1)``.
    The coordinates sum to zero; they vanish iff ``p`` is a finite lift.
    """
    period = p.period
    sigma_inv = quotient_to_finite(p).inverse()
    coords = []
    for i in range(1, period + 1):
        diff = p.apply(sigma_inv.apply(i)) - i
        q, r = divmod(diff, period)
        if r != 0:
            raise AffineError("window inconsistent with its own quotient")
        coords.append(q)
    return tuple(coords)


def is_pure_translation(p: AffinePermutation) -> bool:
    return quotient_to_finite(p).is_identity()


def equal(p: AffinePermutation, q: AffinePermutation) -> bool:
    """Window equality; this is group-element equality."""
    return p.window == q.window


@dataclass(frozen=True)
class BallNode:
    """One element of a word ball: its permutation, a shortest witnessing
    word, and the BFS parent edge (parent index and appended letter)."""

    perm: AffinePermutation
    word: Word
    parent: int
    letter: Letter | None


def element_ball(n: int, radius: int) -> list[BallNode]:
    """Deduplicated ball of elements reachable by Coxeter words of length
    <= radius, in BFS order (parents precede children; node 0 is the
    identity)."""
    gens = [(a(i), generator_image(i, n)) for i in range(1, n + 2)]
    start = AffinePermutation.identity(n)
    nodes = [BallNode(start, Word(n), -1, None)]
    index = {start: 0}
    frontier = [0]
    for _ in range(radius):
        next_frontier = []
        for node_idx in frontier:
            node = nodes[node_idx]
            for letter, img in gens:
                q = node.perm * img
                if q in index:
                    continue
                index[q] = len(nodes)
                nodes.append(BallNode(q, Word(n, node.word.letters + (letter,)), node_idx, letter))
                next_frontier.append(len(nodes) - 1)
        frontier = next_frontier
    return nodes
