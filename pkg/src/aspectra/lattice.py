"""Cyclic products, translation generators, and their commutation relations.

For rank ``n`` the cyclic product ``p_i`` is the length-``n`` word
``a_{i+1} a_{i+2} ... a_{i-1}`` running once around the cycle while skipping
``a_i``.  The translation generators are ``g_j = p_j^{-1} p_{j+1}`` for
``1 <= j <= n``; their images have identity finite part and they generate the
abelian normal translation subgroup.  The wrap-around product
``p_{n+1}^{-1} p_1`` is redundant and expands to ``g_1^{-1} ... g_n^{-1}``.

The ``rewrite_*`` functions return word pairs (lhs, rhs) that evaluate to the
same group element; higher layers compose them as macro moves.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .affine import (
    AffinePermutation,
    eval_word,
    quotient_to_finite,
    translation_vector,
)
from .words import Letter, Word, a, g, norm_index


class LatticeError(ValueError):
    pass


class NotATranslation(LatticeError):
    pass


def p_word(i: int, n: int) -> Word:
    """The length-``n`` word ``a_{i+1} ... a_{i-1}`` (indices mod n+1)."""
    if not 1 <= i <= n + 1:
        raise LatticeError(f"index {i} out of range 1..{n + 1}")
    return Word.coxeter(n, *(norm_index(i + k, n) for k in range(1, n + 1)))


def p_inv_word(i: int, n: int) -> Word:
    return p_word(i, n).inverse()


def g_word(j: int, n: int) -> Word:
    """Defining word of the j-th translation generator, ``p_j^{-1} p_{j+1}``."""
    if not 1 <= j <= n:
        raise LatticeError(f"lattice index {j} out of range 1..{n}")
    return p_inv_word(j, n) * p_word(norm_index(j + 1, n), n)


def g_expansion(j: int, sign: int, n: int) -> tuple[Letter, ...]:
    """Letters for ``g_j^sign`` with ``j`` normalised into 1..n+1.

    Index ``n+1`` names the redundant wrap-around generator, which expands in
    the chosen basis as ``g_1^{-sign} ... g_n^{-sign}``.
    """
    j = norm_index(j, n)
    if j <= n:
        return (g(j, sign),)
    return tuple(g(k, -sign) for k in range(1, n + 1))


@lru_cache(maxsize=None)
def p_image(i: int, n: int) -> AffinePermutation:
    return eval_word(p_word(i, n))


@lru_cache(maxsize=None)
def g_image(j: int, n: int) -> AffinePermutation:
    img = p_image(j, n).inverse() * p_image(norm_index(j + 1, n), n)
    if not quotient_to_finite(img).is_identity():
        raise LatticeError(f"g_{j} image is not a pure translation (rank {n})")
    return img


def rewrite_a_p(i: int, j: int, n: int, inverted: bool = False) -> tuple[Word, Word]:
    """Pass ``a_i`` through ``p_j`` (or through ``p_j^{-1}`` when inverted).

    Three cases by the relative position of the indices: i = j, i = j+1, and
    everything else.  Both sides of the returned pair evaluate equal.
    """
    if not (1 <= i <= n + 1 and 1 <= j <= n + 1):
        raise LatticeError(f"indices ({i}, {j}) out of range 1..{n + 1}")
    if not inverted:
        lhs = Word.coxeter(n, i) * p_word(j, n)
        tail = Word.coxeter(n, norm_index(i - 1, n))
        if i == j:
            rhs = p_word(norm_index(j - 1, n), n) * tail
        elif norm_index(j + 1, n) == i:
            rhs = p_word(norm_index(j + 1, n), n) * tail
        else:
            rhs = p_word(j, n) * tail
        return lhs, rhs
    # Inverted cases follow by moving a_{i+1} through p_j and rearranging;
    # the exceptional middle case is i + 1 = j (not j + 1 = i).
    lhs = Word.coxeter(n, i) * p_inv_word(j, n)
    tail = Word.coxeter(n, norm_index(i + 1, n))
    if i == j:
        rhs = p_inv_word(norm_index(j + 1, n), n) * tail
    elif norm_index(i + 1, n) == j:
        rhs = p_inv_word(norm_index(j - 1, n), n) * tail
    else:
        rhs = p_inv_word(j, n) * tail
    return lhs, rhs


def rewrite_p_p(i: int, j: int, n: int, variant: str = "plain") -> tuple[Word, Word]:
    """Product relations among cyclic products.

    plain:     p_i p_j        = p_{j+1} p_{i-1}
    inv_inv:   p_j^-1 p_i^-1  = p_{i-1}^-1 p_{j+1}^-1
    inv_plain: p_j^-1 p_i     = p_{i-1} p_{j-1}^-1
    """
    if not (1 <= i <= n + 1 and 1 <= j <= n + 1):
        raise LatticeError(f"indices ({i}, {j}) out of range 1..{n + 1}")
    ip, im = norm_index(i + 1, n), norm_index(i - 1, n)
    jp, jm = norm_index(j + 1, n), norm_index(j - 1, n)
    if variant == "plain":
        return p_word(i, n) * p_word(j, n), p_word(jp, n) * p_word(im, n)
    if variant == "inv_inv":
        return (
            p_inv_word(j, n) * p_inv_word(i, n),
            p_inv_word(im, n) * p_inv_word(jp, n),
        )
    if variant == "inv_plain":
        return p_inv_word(j, n) * p_word(i, n), p_word(im, n) * p_inv_word(jm, n)
    raise LatticeError(f"unknown variant {variant!r}")


def rewrite_a_g(k: int, j: int, n: int) -> tuple[Word, Word]:
    """Pass ``a_k`` through ``g_j``.

    Generic indices commute; the three exceptional neighbours are
    a_j g_j = g_j^-1 a_j,  a_{j-1} g_j = g_{j-1} g_j a_{j-1},  and
    a_{j+1} g_j = g_j g_{j+1} a_{j+1}, with wrap-around indices expanded
    through :func:`g_expansion`.
    """
    if not 1 <= k <= n + 1:
        raise LatticeError(f"Coxeter index {k} out of range 1..{n + 1}")
    if not 1 <= j <= n:
        raise LatticeError(f"lattice index {j} out of range 1..{n}")
    lhs = Word(n, (a(k), g(j)))
    if k == j:
        rhs = Word(n, (g(j, -1), a(k)))
    elif k == norm_index(j - 1, n):
        rhs = Word(n, g_expansion(j - 1, 1, n) + (g(j),) + (a(k),))
    elif k == norm_index(j + 1, n):
        rhs = Word(n, (g(j),) + g_expansion(j + 1, 1, n) + (a(k),))
    else:
        rhs = Word(n, (g(j), a(k)))
    return lhs, rhs


def _block_span(block: Word) -> tuple[int, int]:
    if len(block) < 2 or not block.is_coxeter_only():
        raise LatticeError("block must be a Coxeter run of length >= 2")
    indices = [l.index for l in block.letters]
    p, k = indices[0], indices[-1]
    if indices != list(range(p, k + 1)):
        raise LatticeError(f"block letters must be a consecutive ascending run, got {indices}")
    if k > block.rank:
        raise LatticeError("block must stay inside a_1..a_n")
    return p, k


def rewrite_block_g(block: Word, j: int, n: int, side: str = "right") -> tuple[Word, Word]:
    """Pass ``g_j`` through a consecutive run ``a_p ... a_k`` (k > p).

    side="right" rewrites ``block * g_j``:
        p <= j < k:            -> g_{j+1} * block
        j == k:                -> g_p^-1 ... g_k^-1 * block
        j < p-1 or j > k+1:    -> g_j * block
    side="left" rewrites ``g_j * block``:
        p < j <= k:            -> block * g_{j-1}
        j == p:                -> block * g_p^-1 ... g_k^-1
        j < p-1 or j > k+1:    -> block * g_j
    The indices j = p-1 and j = k+1 have no single-letter relation of this
    shape and raise.
    """
    p, k = _block_span(block)
    if not 1 <= j <= n:
        raise LatticeError(f"lattice index {j} out of range 1..{n}")
    inverses = Word(n, tuple(g(t, -1) for t in range(p, k + 1)))
    if side == "right":
        lhs = block * Word(n, (g(j),))
        if p <= j < k:
            return lhs, Word(n, (g(j + 1),)) * block
        if j == k:
            return lhs, inverses * block
        if j < p - 1 or j > k + 1:
            return lhs, Word(n, (g(j),)) * block
        raise LatticeError(f"no listed relation for g_{j} beside block a_{p}..a_{k}")
    if side == "left":
        lhs = Word(n, (g(j),)) * block
        if p < j <= k:
            return lhs, block * Word(n, (g(j - 1),))
        if j == p:
            return lhs, block * inverses
        if j < p - 1 or j > k + 1:
            return lhs, block * Word(n, (g(j),))
        raise LatticeError(f"no listed relation for g_{j} beside block a_{p}..a_{k}")
    raise LatticeError(f"unknown side {side!r}")


@dataclass(frozen=True)
class LatticeElement:
    """Exponent vector over the basis (g_1, ..., g_n)."""

    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))

    @property
    def rank(self) -> int:
        return len(self.exponents)

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def to_word(self) -> Word:
        n = self.rank
        letters: list[Letter] = []
        for j, e in enumerate(self.exponents, start=1):
            letters.extend([g(j, 1 if e > 0 else -1)] * abs(e))
        return Word(n, tuple(letters))

    def to_json(self) -> list[int]:
        return list(self.exponents)


@lru_cache(maxsize=None)
def _translation_basis(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(translation_vector(g_image(j, n)) for j in range(1, n + 1))


def coordinates(m: AffinePermutation) -> LatticeElement:
    """Exact integer coordinates of a pure translation over (g_1, ..., g_n).

    Solves the integer linear system over the translation vectors of the
    generators by exact elimination; raises :class:`NotATranslation` when the
    finite part of ``m`` is nontrivial.
    """
    if not quotient_to_finite(m).is_identity():
        raise NotATranslation(f"finite part of {m.window} is nontrivial")
    n = m.rank
    basis = _translation_basis(n)
    target = translation_vector(m)
    rows = n + 1
    cols = n
    aug = [
        [Fraction(basis[c][r]) for c in range(cols)] + [Fraction(target[r])]
        for r in range(rows)
    ]
    pivot_cols: list[int] = []
    row = 0
    for col in range(cols):
        pivot = next((r for r in range(row, rows) if aug[r][col] != 0), None)
        if pivot is None:
            continue
        aug[row], aug[pivot] = aug[pivot], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [x * inv for x in aug[row]]
        for r in range(rows):
            if r != row and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[row])]
        pivot_cols.append(col)
        row += 1
    solution = [Fraction(0)] * cols
    for idx, col in enumerate(pivot_cols):
        solution[col] = aug[idx][cols]
    for r in range(row, rows):
        if aug[r][cols] != 0:
            raise LatticeError("translation is outside the generator lattice")
    exps = []
    for value in solution:
        if value.denominator != 1:
            raise LatticeError(f"non-integer coordinate {value}")
        exps.append(int(value))
    result = LatticeElement(tuple(exps))
    return result
