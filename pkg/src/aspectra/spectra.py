"""Probe sets, pencil divisors, trace sums, and the character verifier.

The pencil of a representation over an ordered probe set ``w_1 .. w_k`` is
``x_1 rho(w_1) + ... + x_k rho(w_k) - I``; its exact determinant (constant
term always ``(-1)^dim``) is the object compared between representations.
Two probe families are built in:

* ``K(n)``: every block echelon word over ``a_1..a_n`` whose blocks have
  length 1 or 2, plus the translation generators and their inverses.
* ``scriptK(n)``: one block word per cycle type of the finite quotient
  (including the empty word for the identity class), plus the translation
  generators and their inverses.

The verifier computes both divisors, exhaustively compares characters over a
deduplicated ball of short words, and reports whether the evidence respects
"equal divisors imply equal characters"; the opposite pattern is flagged as
critical since at this scale it can only mean an implementation bug.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from fractions import Fraction

from . import ratmat
from .affine import BallNode, element_ball, eval_word
from .echelon import BlockEchelonForm, blocks_from_cycle_type
from .poly import MERSENNE_61, MultiPoly, PitResult, PolyError, PolyMatrix, det_symbolic, pit_equal
from .ratmat import Matrix
from .reps import MatrixRep, char
from .words import Word, g, render_word


class SpectraError(ValueError):
    pass


@dataclass(frozen=True)
class ProbeSet:
    """Ordered probe words; the ordering fixes the pencil variables."""

    rank: int
    kind: str
    words: tuple[Word, ...]

    def __post_init__(self) -> None:
        images = [eval_word(w) for w in self.words]
        if len(set(images)) != len(images):
            raise SpectraError("probe words must induce distinct group elements")

    @property
    def size(self) -> int:
        return len(self.words)

    def labels(self) -> tuple[str, ...]:
        return tuple(render_word(w) or "1" for w in self.words)

    def provenance(self) -> tuple:
        return (self.kind, self.rank, self.labels())

    def restrict(self, indices: list[int], kind: str | None = None) -> ProbeSet:
        return ProbeSet(self.rank, kind or "custom", tuple(self.words[i] for i in indices))


def _small_block_patterns(n: int) -> list[tuple[tuple[int, int], ...]]:
    """All gap-one block placements on 1..n with blocks of length 1 or 2."""
    out: list[tuple[tuple[int, int], ...]] = []

    def walk(prefix: tuple[tuple[int, int], ...]) -> None:
        if prefix:
            out.append(prefix)
        # The first block may start anywhere; later blocks sit one gap after
        # their predecessor.
        starts = [prefix[-1][1] + 2] if prefix else list(range(1, n + 1))
        for p in starts:
            for length in (1, 2):
                k = p + length - 1
                if k <= n:
                    walk(prefix + ((p, k),))

    walk(())
    return sorted(set(out), key=_pattern_key)


def _pattern_key(blocks: tuple[tuple[int, int], ...]) -> tuple:
    total = sum(k - p + 1 for p, k in blocks)
    flat = tuple(x for b in blocks for x in b)
    return (total, flat)


def _g_tail(n: int) -> tuple[Word, ...]:
    plus = tuple(Word(n, (g(j),)) for j in range(1, n + 1))
    minus = tuple(Word(n, (g(j, -1),)) for j in range(1, n + 1))
    return plus + minus


def probe_set_K(n: int) -> ProbeSet:
    """Block echelon words with blocks of length at most 2 (nonempty; the
    gap-one requirement is built in), then g_1..g_n, then their inverses."""
    if n < 2:
        raise SpectraError("rank must be >= 2")
    words = tuple(BlockEchelonForm(n, blocks).word() for blocks in _small_block_patterns(n))
    return ProbeSet(n, "K", words + _g_tail(n))


def probe_set_script_K(n: int) -> ProbeSet:
    """One block word per cycle type of the finite quotient (the identity
    class contributes the empty word), then g_1..g_n, then their inverses."""
    if n < 2:
        raise SpectraError("rank must be >= 2")
    reps = [
        BlockEchelonForm(n, blocks_from_cycle_type(part, n)).word()
        for part in _partitions(n + 1)
    ]
    reps.sort(key=lambda w: (len(w), tuple(l.index for l in w.letters)))
    return ProbeSet(n, "scriptK", tuple(reps) + _g_tail(n))


def _partitions(total: int, cap: int | None = None) -> list[tuple[int, ...]]:
    cap = cap or total
    if total == 0:
        return [()]
    out = []
    for head in range(min(total, cap), 0, -1):
        for rest in _partitions(total - head, head):
            out.append((head,) + rest)
    return out


@dataclass(frozen=True)
class SpectralDivisor:
    """Exact pencil determinant plus the data needed to compare it."""

    poly: MultiPoly
    dim: int
    provenance: tuple

    def __post_init__(self) -> None:
        expected = Fraction(-1) ** self.dim
        if self.poly.constant_term() != expected:
            raise SpectraError(
                f"pencil constant term {self.poly.constant_term()} != (-1)^{self.dim}"
            )

    def to_json(self) -> dict:
        kind, rank, labels = self.provenance
        return {
            "probeSet": {"kind": kind, "rank": rank, "labels": list(labels)},
            "dim": self.dim,
            "poly": self.poly.to_json(),
        }


def pencil_matrix(rep: MatrixRep, probe: ProbeSet) -> PolyMatrix:
    if rep.rank != probe.rank:
        raise SpectraError(f"rep rank {rep.rank} does not match probe rank {probe.rank}")
    k = probe.size
    images = [rep.word_image(w) for w in probe.words]
    entries = []
    for r in range(rep.dim):
        row = []
        for c in range(rep.dim):
            terms = {}
            for idx, m in enumerate(images):
                if m[r][c]:
                    exp = tuple(1 if t == idx else 0 for t in range(k))
                    terms[exp] = m[r][c]
            if r == c:
                terms[(0,) * k] = terms.get((0,) * k, Fraction(0)) - 1
            row.append(MultiPoly(k, terms))
        entries.append(tuple(row))
    return PolyMatrix(tuple(entries))


def pencil_divisor(rep: MatrixRep, probe: ProbeSet) -> SpectralDivisor:
    """Exact determinant of the probe pencil."""
    return SpectralDivisor(det_symbolic(pencil_matrix(rep, probe)), rep.dim, probe.provenance())


def divisors_equal(d1: SpectralDivisor, d2: SpectralDivisor) -> bool:
    """Exact polynomial identity over a shared probe set."""
    if d1.provenance != d2.provenance:
        raise SpectraError(
            f"probe sets differ: {d1.provenance[:2]} vs {d2.provenance[:2]}"
        )
    if d1.dim != d2.dim:
        return False
    return d1.poly == d2.poly


def pencil_pit(
    rep1: MatrixRep,
    rep2: MatrixRep,
    probe: ProbeSet,
    trials: int = 4,
    prime: int = MERSENNE_61,
    rng: random.Random | None = None,
) -> PitResult:
    return pit_equal(
        pencil_matrix(rep1, probe), pencil_matrix(rep2, probe), trials, prime, rng
    )


# --- trace sums -----------------------------------------------------------------


def trace_sum(matrices: list[Matrix], signature: tuple[int, ...], max_total: int = 6) -> Fraction:
    """Sum of traces of all distinct products with the given signature.

    The signature lists how many times each tuple entry appears; the sum runs
    over every distinct arrangement of that multiset.
    """
    if len(signature) != len(matrices):
        raise SpectraError("signature length must match the tuple length")
    if any(m < 0 for m in signature):
        raise SpectraError("signature entries must be nonnegative")
    total_len = sum(signature)
    if total_len < 1:
        raise SpectraError("signature must have total at least 1")
    if total_len > max_total:
        raise SpectraError(f"signature total {total_len} exceeds bound {max_total}")
    letters: list[int] = []
    for idx, count in enumerate(signature):
        letters.extend([idx] * count)
    total = Fraction(0)
    for arrangement in sorted(set(itertools.permutations(letters))):
        product = ratmat.eye(len(matrices[0]))
        for idx in arrangement:
            product = ratmat.mat_mul(product, matrices[idx])
        total += ratmat.mat_trace(product)
    return total


# --- character balls -------------------------------------------------------------


def ball_characters(rep: MatrixRep, nodes: list[BallNode]) -> list[Fraction]:
    """Characters of every ball element, sharing matrix products along the
    BFS tree (one multiplication per element)."""
    mats: list[Matrix] = [ratmat.eye(rep.dim)]
    out: list[Fraction] = [ratmat.mat_trace(mats[0])]
    for node in nodes[1:]:
        m = ratmat.mat_mul(mats[node.parent], rep.a_image(node.letter.index))
        mats.append(m)
        out.append(ratmat.mat_trace(m))
    return out


# --- the end-to-end verifier -------------------------------------------------------


@dataclass(frozen=True)
class DeterminationReport:
    """Outcome of one divisor-versus-character comparison."""

    rank: int
    probe_kind: str
    probe_labels: tuple[str, ...]
    dims: tuple[int, int]
    method: str
    divisor_equal: bool
    char_budget: int
    char_equal: bool
    consistent: bool
    critical: bool
    violations: tuple[dict, ...]
    pit: PitResult | None
    timings: dict[str, float]

    def to_json(self, include_timings: bool = False) -> dict:
        data = {
            "probeSet": {"kind": self.probe_kind, "rank": self.rank, "labels": list(self.probe_labels)},
            "dims": list(self.dims),
            "divisorEqual": self.divisor_equal,
            "method": self.method,
            "charBudget": self.char_budget,
            "charEqual": self.char_equal,
            "consistent": self.consistent,
            "critical": self.critical,
            "violations": [dict(v) for v in self.violations],
        }
        if self.pit is not None:
            data["pit"] = self.pit.to_json()
        if include_timings:
            data["timings"] = dict(self.timings)
        return data


def verify_character_determination(
    rep1: MatrixRep,
    rep2: MatrixRep,
    probe: ProbeSet,
    word_budget: int = 6,
    method: str = "symbolic",
    pit_trials: int = 4,
    pit_prime: int = MERSENNE_61,
    rng: random.Random | None = None,
) -> DeterminationReport:
    """Compare pencil divisors and exhaustive short-word characters.

    ``method`` is ``symbolic``, ``pit``, or ``both`` (symbolic verdict plus a
    randomised cross-check, which must agree).  Characters are compared on
    the deduplicated ball of Coxeter words of length <= ``word_budget``.  The
    report is consistent unless the divisors agree while some character
    differs, which is flagged critical.
    """
    if rep1.rank != rep2.rank:
        raise SpectraError("rank mismatch")
    if method not in ("symbolic", "pit", "both"):
        raise SpectraError(f"unknown method {method!r}")
    timings: dict[str, float] = {}
    pit_result: PitResult | None = None
    start = time.perf_counter()
    if method in ("symbolic", "both"):
        d1 = pencil_divisor(rep1, probe)
        d2 = pencil_divisor(rep2, probe)
        divisor_equal = divisors_equal(d1, d2)
    timings["divisor_symbolic"] = time.perf_counter() - start
    if method in ("pit", "both"):
        start = time.perf_counter()
        pit_result = pencil_pit(rep1, rep2, probe, pit_trials, pit_prime, rng)
        timings["divisor_pit"] = time.perf_counter() - start
        if method == "pit":
            divisor_equal = pit_result.equal
        elif pit_result.equal != divisor_equal:
            raise SpectraError(
                "randomised and symbolic divisor verdicts disagree: "
                f"symbolic={divisor_equal} pit={pit_result.equal}"
            )

    start = time.perf_counter()
    nodes = element_ball(probe.rank, word_budget)
    chars1 = ball_characters(rep1, nodes)
    chars2 = ball_characters(rep2, nodes)
    violations = []
    for node, c1, c2 in zip(nodes, chars1, chars2):
        if c1 != c2:
            violations.append(
                {"word": render_word(node.word) or "1", "char1": str(c1), "char2": str(c2)}
            )
            if len(violations) >= 10:
                break
    char_equal = not violations
    timings["characters"] = time.perf_counter() - start

    critical = divisor_equal and not char_equal
    return DeterminationReport(
        rank=probe.rank,
        probe_kind=probe.kind,
        probe_labels=probe.labels(),
        dims=(rep1.dim, rep2.dim),
        method=method,
        divisor_equal=divisor_equal,
        char_budget=word_budget,
        char_equal=char_equal,
        consistent=not critical,
        critical=critical,
        violations=tuple(violations),
        pit=pit_result,
        timings=timings,
    )


# --- permuted-multiset conjugacy checks ----------------------------------------------


@dataclass(frozen=True)
class SignatureCheckReport:
    letters: tuple[str, ...]
    multiplicities: tuple[int, ...]
    arrangements: int
    consistent: bool
    violations: tuple[dict, ...]

    def to_json(self) -> dict:
        return {
            "letters": list(self.letters),
            "multiplicities": list(self.multiplicities),
            "arrangements": self.arrangements,
            "consistent": self.consistent,
            "violations": [dict(v) for v in self.violations],
        }


def signature_conjugacy_check(
    letters: list[Word],
    multiplicities: tuple[int, ...],
    battery: tuple[MatrixRep, ...],
    max_total: int = 8,
) -> SignatureCheckReport:
    """Check that every arrangement of the multiset has the same battery
    characters (the assertable form of 'all permutations are conjugate')."""
    if len(letters) != len(multiplicities):
        raise SpectraError("need one multiplicity per letter")
    total = sum(multiplicities)
    if not 1 <= total <= max_total:
        raise SpectraError(f"multiset size {total} outside 1..{max_total}")
    rank = letters[0].rank
    seq: list[int] = []
    for idx, count in enumerate(multiplicities):
        seq.extend([idx] * count)
    arrangements = sorted(set(itertools.permutations(seq)))
    reference: list[Fraction] | None = None
    violations = []
    for arrangement in arrangements:
        word = Word(rank)
        for idx in arrangement:
            word = word * letters[idx]
        values = [char(rep, word) for rep in battery]
        if reference is None:
            reference = values
        elif values != reference:
            violations.append(
                {
                    "arrangement": [render_word(letters[i]) or "1" for i in arrangement],
                    "chars": [str(v) for v in values],
                    "expected": [str(v) for v in reference],
                }
            )
    return SignatureCheckReport(
        letters=tuple(render_word(w) or "1" for w in letters),
        multiplicities=tuple(multiplicities),
        arrangements=len(arrangements),
        consistent=not violations,
        violations=tuple(violations),
    )


def split_block_word(blocks: tuple[tuple[int, int], ...], rank: int) -> list[Word]:
    """Decompose a block echelon word into probe-sized factors.

    Blocks of length at most 2 glue (together with the flanking letters of
    any neighbouring longer blocks) into words that stay inside the
    small-block probe family; a block of length >= 3 contributes its first
    two letters to the preceding factor, its interior letters as singleton
    pieces, and its last letter starts the next factor.  Concatenating the
    returned pieces in order restores the original word, and each letter of
    the word shares a piece with every non-commuting neighbour letter.
    """
    form = BlockEchelonForm(rank, blocks)
    big = [b for b in blocks if b[1] - b[0] + 1 >= 3]
    if not big:
        word = form.word()
        return [word] if len(word) else []
    pieces: list[Word] = []
    current: list[int] = []
    for p, k in blocks:
        if k - p + 1 < 3:
            current.extend(range(p, k + 1))
            continue
        current.extend([p, p + 1])
        pieces.append(Word.coxeter(rank, *current))
        pieces.extend(Word.coxeter(rank, i) for i in range(p + 2, k))
        current = [k]
    if current:
        pieces.append(Word.coxeter(rank, *current))
    return pieces
