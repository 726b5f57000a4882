"""Finite-dimensional representations of the rank-n affine symmetric group.

A representation assigns an exact rational invertible matrix to each of the
n+1 Coxeter generators; every defining relation of the cyclic diagram is
checked at construction.  Images of the translation generators are derived
from their defining words unless the construction supplies them directly
(quotient lifts send the whole translation subgroup to the identity).

Available constructions: the integer reflection representation of the cycle
diagram, lifts of the classical symmetric-group representations through the
finite quotient, and closure under direct sum, tensor product and rational
conjugation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations as iter_permutations

from . import ratmat
from .lattice import g_word
from .ratmat import Matrix
from .words import Word, cycle_adjacent, norm_index


class RepError(ValueError):
    pass


PERM_SPECS = ("trivial", "sign", "standard", "natural", "regular")


@dataclass(frozen=True)
class MatrixRep:
    """Validated generator images; immutable after construction."""

    rank: int
    dim: int
    a_images: tuple[Matrix, ...]
    g_images: tuple[Matrix, ...]
    g_inverses: tuple[Matrix, ...]
    name: str

    def a_image(self, i: int) -> Matrix:
        return self.a_images[i - 1]

    def g_image(self, j: int, sign: int = 1) -> Matrix:
        return self.g_images[j - 1] if sign == 1 else self.g_inverses[j - 1]

    def word_image(self, w: Word) -> Matrix:
        if w.rank != self.rank:
            raise RepError(f"word rank {w.rank} does not match rep rank {self.rank}")
        result = ratmat.eye(self.dim)
        for let in w.letters:
            factor = (
                self.a_image(let.index) if let.is_coxeter else self.g_image(let.index, let.sign)
            )
            result = ratmat.mat_mul(result, factor)
        return result


def char(rep: MatrixRep, w: Word) -> Fraction:
    """Trace of the word image; conjugation-invariant by construction."""
    return ratmat.mat_trace(rep.word_image(w))


@dataclass(frozen=True)
class Character:
    """The trace functional of one representation, as a callable value."""

    rep: MatrixRep

    def __call__(self, w: Word) -> Fraction:
        return char(self.rep, w)


def _validate_relations(rank: int, images: tuple[Matrix, ...]) -> None:
    n = rank
    dim = len(images[0])
    identity = ratmat.eye(dim)
    for i, m in enumerate(images, start=1):
        if len(m) != dim or any(len(row) != dim for row in m):
            raise RepError("generator images must share one square shape")
        if ratmat.mat_mul(m, m) != identity:
            raise RepError(f"image of a{i} is not an involution")
    for i in range(1, n + 2):
        for j in range(i + 1, n + 2):
            product = ratmat.mat_mul(images[i - 1], images[j - 1])
            order = 3 if cycle_adjacent(i, j, n) else 2
            if ratmat.mat_pow(product, order) != identity:
                raise RepError(f"braid relation fails for (a{i}, a{j})")


def make_rep(
    rank: int,
    a_images: tuple[Matrix, ...],
    name: str,
    g_images: tuple[Matrix, ...] | None = None,
) -> MatrixRep:
    """Validate the Coxeter relations and derive translation images.

    When ``g_images`` is supplied (quotient lifts) it is checked against the
    defining words; otherwise the defining words are evaluated directly.
    """
    if rank < 2:
        raise RepError("rank must be >= 2")
    if len(a_images) != rank + 1:
        raise RepError(f"need {rank + 1} generator images, got {len(a_images)}")
    a_images = tuple(ratmat.mat(m) for m in a_images)
    _validate_relations(rank, a_images)
    dim = len(a_images[0])
    derived = []
    for j in range(1, rank + 1):
        m = ratmat.eye(dim)
        for let in g_word(j, rank).letters:
            m = ratmat.mat_mul(m, a_images[let.index - 1])
        derived.append(m)
    if g_images is None:
        g_images = tuple(derived)
    else:
        g_images = tuple(ratmat.mat(m) for m in g_images)
        if list(g_images) != derived:
            raise RepError("supplied translation images disagree with the defining words")
    g_inverses = tuple(ratmat.mat_inv(m) for m in g_images)
    return MatrixRep(rank, dim, a_images, g_images, g_inverses, name)


# --- the reflection representation -----------------------------------------


@lru_cache(maxsize=None)
def tits_rep(n: int) -> MatrixRep:
    """Integer reflection representation on n+1 basis vectors.

    Generator i sends e_i to -e_i, adds e_i to the basis vectors of its two
    cycle neighbours, and fixes the rest; as a matrix this is the identity
    with row i replaced by -1 on the diagonal and +1 under both neighbours.
    Faithful, so it serves as the independent cross-check of the window
    model.
    """
    dim = n + 1
    images = []
    for i in range(1, dim + 1):
        m = [[Fraction(1) if r == c else Fraction(0) for c in range(dim)] for r in range(dim)]
        m[i - 1][i - 1] = Fraction(-1)
        m[i - 1][norm_index(i - 1, n) - 1] = Fraction(1)
        m[i - 1][norm_index(i + 1, n) - 1] = Fraction(1)
        images.append(tuple(tuple(row) for row in m))
    return make_rep(n, tuple(images), "tits")


# --- lifts of symmetric-group representations --------------------------------


def _transpositions(n: int) -> list[tuple[int, int]]:
    """The finite images of a_1..a_{n+1}: adjacent swaps (i, i+1) and the
    wrap-around swap (1, n+1)."""
    return [(i, i + 1) for i in range(1, n + 1)] + [(1, n + 1)]


def _perm_images(transposition: tuple[int, int], size: int) -> tuple[int, ...]:
    i, j = transposition
    images = list(range(1, size + 1))
    images[i - 1], images[j - 1] = j, i
    return tuple(images)


def _natural_matrix(images: tuple[int, ...]) -> Matrix:
    size = len(images)
    return tuple(
        tuple(Fraction(1) if images[c] == r + 1 else Fraction(0) for c in range(size))
        for r in range(size)
    )


def _standard_matrix(images: tuple[int, ...]) -> Matrix:
    """Action on the sum-zero subspace in the basis v_i = e_i - e_{i+1}."""
    size = len(images)
    cols = []
    for i in range(1, size):
        coords = [Fraction(0)] * (size - 1)
        a_, b_ = images[i - 1], images[i]
        if a_ < b_:
            for t in range(a_, b_):
                coords[t - 1] += 1
        else:
            for t in range(b_, a_):
                coords[t - 1] -= 1
        cols.append(coords)
    return tuple(tuple(cols[c][r] for c in range(size - 1)) for r in range(size - 1))


def perm_quotient_rep(n: int, spec: str) -> MatrixRep:
    """Lift of a symmetric-group representation through the finite quotient;
    every translation generator maps to the identity."""
    if spec not in PERM_SPECS:
        raise RepError(f"unknown spec {spec!r}; choose from {PERM_SPECS}")
    size = n + 1
    transpositions = _transpositions(n)
    if spec == "trivial":
        images = [ratmat.mat([[1]]) for _ in transpositions]
    elif spec == "sign":
        images = [ratmat.mat([[-1]]) for _ in transpositions]
    elif spec == "natural":
        images = [_natural_matrix(_perm_images(t, size)) for t in transpositions]
    elif spec == "standard":
        images = [_standard_matrix(_perm_images(t, size)) for t in transpositions]
    else:  # regular
        if n > 3:
            raise RepError("regular lift is capped at rank 3 (dimension 24)")
        elements = sorted(iter_permutations(range(1, size + 1)))
        index = {p: i for i, p in enumerate(elements)}
        images = []
        for t in transpositions:
            timg = _perm_images(t, size)
            m = [[Fraction(0)] * len(elements) for _ in elements]
            for p in elements:
                product = tuple(timg[q - 1] for q in p)
                m[index[product]][index[p]] = Fraction(1)
            images.append(tuple(tuple(row) for row in m))
    dim = len(images[0])
    g_identity = tuple(ratmat.eye(dim) for _ in range(n))
    return make_rep(n, tuple(images), f"perm:{spec}", g_images=g_identity)


# --- combinations -------------------------------------------------------------


def direct_sum(r: MatrixRep, s: MatrixRep) -> MatrixRep:
    if r.rank != s.rank:
        raise RepError("rank mismatch")
    images = tuple(ratmat.block_diag(a, b) for a, b in zip(r.a_images, s.a_images))
    return make_rep(r.rank, images, f"sum({r.name},{s.name})")


def tensor(r: MatrixRep, s: MatrixRep) -> MatrixRep:
    if r.rank != s.rank:
        raise RepError("rank mismatch")
    images = tuple(ratmat.kron(a, b) for a, b in zip(r.a_images, s.a_images))
    return make_rep(r.rank, images, f"tensor({r.name},{s.name})")


def conjugate(r: MatrixRep, c: Matrix, label: str | None = None) -> MatrixRep:
    c = ratmat.mat(c)
    if len(c) != r.dim:
        raise RepError(f"conjugator is {len(c)}x{len(c)}, rep dimension is {r.dim}")
    c_inv = ratmat.mat_inv(c)
    images = tuple(
        ratmat.mat_mul(ratmat.mat_mul(c_inv, m), c) for m in r.a_images
    )
    return make_rep(r.rank, images, label or f"conj({r.name})")


def standard_battery(n: int) -> tuple[MatrixRep, ...]:
    """The fixed battery used by the conjugacy-flavoured test suites."""
    trivial = perm_quotient_rep(n, "trivial")
    sign = perm_quotient_rep(n, "sign")
    standard = perm_quotient_rep(n, "standard")
    return (
        tits_rep(n),
        trivial,
        sign,
        standard,
        direct_sum(direct_sum(trivial, sign), standard),
    )


# --- randomised conjugators -----------------------------------------------


def random_unimodular(dim: int, rng: random.Random, steps: int = 12) -> Matrix:
    """Random integer matrix of determinant +-1 built from shear moves."""
    m = [[Fraction(1) if i == j else Fraction(0) for j in range(dim)] for i in range(dim)]
    for _ in range(steps):
        i, j = rng.sample(range(dim), 2)
        factor = Fraction(rng.choice([-2, -1, 1, 2]))
        if rng.random() < 0.5:
            m[i] = [x + factor * y for x, y in zip(m[i], m[j])]
        else:
            for row in m:
                row[i] = row[i] + factor * row[j]
    return tuple(tuple(row) for row in m)


def random_rational_invertible(dim: int, rng: random.Random) -> Matrix:
    """Random invertible matrix with small honest denominators."""
    while True:
        m = tuple(
            tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(dim))
            for _ in range(dim)
        )
        try:
            ratmat.mat_inv(m)
        except ratmat.SingularMatrixError:
            continue
        return m


# --- CLI spec mini-grammar ----------------------------------------------------


def parse_rep_spec(text: str, n: int) -> MatrixRep:
    """Parse ``tits``, ``perm:<name>``, ``sum(...)``, ``tensor(a,b)``,
    ``conj(spec,seed=<int>)``."""
    spec = text.strip()
    rep, rest = _parse_spec(spec, 0, n)
    if rest != len(spec):
        raise RepError(f"trailing input in rep spec {text!r}")
    return rep


def _parse_spec(text: str, pos: int, n: int) -> tuple[MatrixRep, int]:
    for head in ("sum", "tensor", "conj"):
        if text.startswith(head + "(", pos):
            args_start = pos + len(head) + 1
            parts, end = _split_args(text, args_start)
            if head == "sum":
                if not parts:
                    raise RepError("sum() needs at least one argument")
                reps = [parse_rep_spec(p, n) for p in parts]
                total = reps[0]
                for r in reps[1:]:
                    total = direct_sum(total, r)
                return total, end
            if head == "tensor":
                if len(parts) != 2:
                    raise RepError("tensor() takes exactly two arguments")
                return tensor(parse_rep_spec(parts[0], n), parse_rep_spec(parts[1], n)), end
            if len(parts) != 2 or not parts[1].startswith("seed="):
                raise RepError("conj() takes (spec, seed=<int>)")
            base = parse_rep_spec(parts[0], n)
            seed = int(parts[1][len("seed="):])
            c = random_unimodular(base.dim, random.Random(seed))
            return conjugate(base, c, label=f"conj({base.name},seed={seed})"), end
    remainder = text[pos:]
    for atom in ("tits",) + tuple(f"perm:{s}" for s in PERM_SPECS):
        if remainder == atom or remainder.startswith(atom + ",") or remainder.startswith(atom + ")"):
            rep = tits_rep(n) if atom == "tits" else perm_quotient_rep(n, atom.split(":")[1])
            return rep, pos + len(atom)
    raise RepError(f"cannot parse rep spec at {text[pos:]!r}")


def _split_args(text: str, start: int) -> tuple[list[str], int]:
    depth = 1
    args: list[str] = []
    current = []
    i = start
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                if current or args:
                    args.append("".join(current).strip())
                return [a for a in args if a], i + 1
        elif ch == "," and depth == 1:
            args.append("".join(current).strip())
            current = []
            i += 1
            continue
        current.append(ch)
        i += 1
    raise RepError(f"unbalanced parentheses in rep spec {text!r}")
