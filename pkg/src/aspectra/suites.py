"""Verification batteries: relations, quotient structure, normal forms,
trace sums, and the divisor-to-character implication.

Each suite returns a list of violation records (empty means the battery
passed).  The command-line ``verify`` subcommand and the acceptance tests
both drive these functions, the latter with the documented desk-scale
parameters.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from . import ratmat
from .affine import (
    AffinePermutation,
    FinitePermutation,
    eval_word,
    generator_image,
    quotient_to_finite,
)
from .echelon import (
    BlockEchelonForm,
    a_echelon,
    echelon_by_search,
    permutation_to_word,
    tilde_echelon,
)
from .lattice import g_image, rewrite_a_g, rewrite_a_p, rewrite_block_g, rewrite_p_p
from .poly import MERSENNE_61, MultiPoly, PolyMatrix, det_symbolic, pit_equal
from .ratmat import Matrix
from .reps import (
    MatrixRep,
    char,
    conjugate,
    direct_sum,
    perm_quotient_rep,
    random_rational_invertible,
    standard_battery,
    tits_rep,
)
from .spectra import (
    ProbeSet,
    divisors_equal,
    pencil_divisor,
    pencil_pit,
    probe_set_K,
    probe_set_script_K,
    signature_conjugacy_check,
    split_block_word,
    trace_sum,
    verify_character_determination,
)
from .words import Word, a, g, render_word


def _tits_word_image(rep: MatrixRep, w: Word) -> Matrix:
    return rep.word_image(w)


def _relation_holds(lhs: Word, rhs: Word, rep: MatrixRep) -> bool:
    return eval_word(lhs) == eval_word(rhs) and _tits_word_image(rep, lhs) == _tits_word_image(rep, rhs)


def relation_suite(n: int) -> list[dict]:
    """Every defining relation and every derived letter relation, checked as
    exact window equality and exact reflection-matrix equality."""
    violations: list[dict] = []
    rep = tits_rep(n)

    def record(tag: str, lhs: Word, rhs: Word, **context) -> None:
        if not _relation_holds(lhs, rhs, rep):
            violations.append(
                {"suite": "relations", "relation": tag, "n": n, **context,
                 "lhs": render_word(lhs), "rhs": render_word(rhs)}
            )

    empty = Word(n)
    for i in range(1, n + 2):
        record("involution", Word.coxeter(n, i, i), empty, i=i)
        for j in range(i + 1, n + 2):
            order = 3 if (j - i) % (n + 1) in (1, n) else 2
            record("braid", Word.coxeter(n, *([i, j] * order)), empty, i=i, j=j)

    for i in range(1, n + 2):
        for j in range(1, n + 2):
            for inverted in (False, True):
                lhs, rhs = rewrite_a_p(i, j, n, inverted=inverted)
                record("a_through_p", lhs, rhs, i=i, j=j, inverted=inverted)
            for variant in ("plain", "inv_inv", "inv_plain"):
                lhs, rhs = rewrite_p_p(i, j, n, variant)
                record("p_times_p", lhs, rhs, i=i, j=j, variant=variant)

    for k in range(1, n + 2):
        for j in range(1, n + 1):
            lhs, rhs = rewrite_a_g(k, j, n)
            record("a_through_g", lhs, rhs, k=k, j=j)

    for p in range(1, n + 1):
        for k in range(p + 1, min(p + 3, n) + 1):
            block = Word.coxeter(n, *range(p, k + 1))
            for j in range(1, n + 1):
                if j in (p - 1, k + 1):
                    continue
                for side in ("right", "left"):
                    lhs, rhs = rewrite_block_g(block, j, n, side)
                    record("block_through_g", lhs, rhs, p=p, k=k, j=j, side=side)
    return violations


def quotient_suite(n: int) -> list[dict]:
    """Structure of the translation subgroup and the finite quotient:
    commutativity, stability under conjugation, and generation."""
    violations: list[dict] = []

    def record(check: str, **context) -> None:
        violations.append({"suite": "quotient", "check": check, "n": n, **context})

    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if g_image(i, n) * g_image(j, n) != g_image(j, n) * g_image(i, n):
                record("translations_commute", i=i, j=j)

    for k in range(1, n + 2):
        ak = generator_image(k, n)
        for j in range(1, n + 1):
            conj = ak * g_image(j, n) * ak
            if not quotient_to_finite(conj).is_identity():
                record("conjugate_stays_translation", k=k, j=j)

    # The finite images of a_1..a_n must generate the whole quotient.
    gens = [quotient_to_finite(generator_image(i, n)) for i in range(1, n + 1)]
    seen = {FinitePermutation.identity(n + 1)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for sigma in frontier:
            for geni in gens:
                product = sigma * geni
                if product not in seen:
                    seen.add(product)
                    nxt.append(product)
        frontier = nxt
    import math

    if len(seen) != math.factorial(n + 1):
        record("quotient_generated", size=len(seen), expected=math.factorial(n + 1))

    wrap = quotient_to_finite(generator_image(n + 1, n))
    expected = list(range(1, n + 2))
    expected[0], expected[n] = expected[n], expected[0]
    if wrap.images != tuple(expected):
        record("wrap_generator_image", got=list(wrap.images))
    return violations


def _random_word(n: int, rng: random.Random, max_len: int, lattice_share: float = 0.3) -> Word:
    letters = []
    for _ in range(rng.randint(0, max_len)):
        if rng.random() < lattice_share:
            letters.append(g(rng.randint(1, n), rng.choice([1, -1])))
        else:
            letters.append(a(rng.randint(1, n + 1)))
    return Word(n, tuple(letters))


def echelon_suite(
    n: int,
    seed: int = 0,
    samples: int = 100,
    max_len: int = 12,
    search_validation: bool = False,
) -> list[dict]:
    """Exhaustive finite-quotient echelon checks plus seeded random
    normal-form checks with battery-character conjugacy."""
    violations: list[dict] = []
    battery = standard_battery(n)

    for images in itertools.permutations(range(1, n + 2)):
        sigma = FinitePermutation(images)
        word = permutation_to_word(sigma)
        form = a_echelon(word)
        if form.cycle_type() != sigma.cycle_type():
            violations.append(
                {"suite": "echelon", "check": "cycle_type", "n": n,
                 "word": render_word(word), "got": form.cycle_type(),
                 "expected": sigma.cycle_type()}
            )
        if form.length() > len(word):
            violations.append(
                {"suite": "echelon", "check": "length_monotone", "n": n,
                 "word": render_word(word), "form_length": form.length()}
            )
        if search_validation:
            searched = echelon_by_search(word)
            if searched.cycle_type() != form.cycle_type():
                violations.append(
                    {"suite": "echelon", "check": "search_agreement", "n": n,
                     "word": render_word(word), "search": searched.cycle_type(),
                     "direct": form.cycle_type()}
                )

    rng = random.Random(seed)
    for _ in range(samples):
        w = _random_word(n, rng, max_len)
        form = tilde_echelon(w)  # constructor enforces the shape invariants
        out = form.word()
        for rep in battery:
            if char(rep, w) != char(rep, out):
                violations.append(
                    {"suite": "echelon", "check": "tilde_character", "n": n,
                     "word": render_word(w), "form": render_word(out), "rep": rep.name}
                )
                break
    return violations


def _tuple_pencil(matrices: list[Matrix]) -> PolyMatrix:
    k = len(matrices)
    dim = len(matrices[0])
    entries = []
    for r in range(dim):
        row = []
        for c in range(dim):
            terms = {}
            for idx, m in enumerate(matrices):
                if m[r][c]:
                    terms[tuple(1 if t == idx else 0 for t in range(k))] = m[r][c]
            if r == c:
                zero = (0,) * k
                terms[zero] = terms.get(zero, Fraction(0)) - 1
            row.append(MultiPoly(k, terms))
        entries.append(tuple(row))
    return PolyMatrix(tuple(entries))


def trace_sum_suite(
    seed: int = 0,
    tuples: int = 20,
    dim: int = 3,
    letters: int = 3,
    max_signature: int = 4,
    check_pit: bool = True,
) -> list[dict]:
    """Simultaneously conjugate matrix tuples must agree on every bounded
    signature trace sum and have identical pencil determinants."""
    violations: list[dict] = []
    rng = random.Random(seed)
    for t in range(tuples):
        a_tuple = [
            tuple(
                tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(dim))
                for _ in range(dim)
            )
            for _ in range(letters)
        ]
        c = random_rational_invertible(dim, rng)
        c_inv = ratmat.mat_inv(c)
        b_tuple = [ratmat.mat_mul(ratmat.mat_mul(c_inv, m), c) for m in a_tuple]
        for signature in itertools.product(range(max_signature + 1), repeat=letters):
            total = sum(signature)
            if not 1 <= total <= max_signature:
                continue
            if trace_sum(a_tuple, signature) != trace_sum(b_tuple, signature):
                violations.append(
                    {"suite": "trace_sum", "tuple": t, "signature": list(signature)}
                )
        pa, pb = _tuple_pencil(a_tuple), _tuple_pencil(b_tuple)
        if det_symbolic(pa) != det_symbolic(pb):
            violations.append({"suite": "trace_sum", "tuple": t, "check": "symbolic_divisor"})
        if check_pit:
            result = pit_equal(pa, pb, trials=4, prime=MERSENNE_61, rng=rng)
            if not result.equal:
                violations.append({"suite": "trace_sum", "tuple": t, "check": "pit_divisor"})
            if result.equal and result.bound > 1e-60:
                violations.append({"suite": "trace_sum", "tuple": t, "check": "pit_bound",
                                   "bound": result.bound})
    return violations


def _contrapositive_pairs(n: int) -> list[tuple[MatrixRep, MatrixRep]]:
    trivial = perm_quotient_rep(n, "trivial")
    sign = perm_quotient_rep(n, "sign")
    standard = perm_quotient_rep(n, "standard")
    return [
        (direct_sum(direct_sum(trivial, trivial), trivial), direct_sum(trivial, standard)),
        (direct_sum(sign, sign), standard),
        (direct_sum(trivial, sign), standard),
    ]


def determination_suite(
    n: int,
    seed: int = 0,
    probe_kind: str = "K",
    conjugators: int = 5,
    char_budget: int = 8,
    method: str = "both",
    contrapositive: bool = True,
    contrapositive_char_length: int = 4,
) -> list[dict]:
    """Equal divisors must travel with equal characters.

    Positive direction: every battery representation against seeded rational
    conjugates of itself (divisors and characters both equal).  Negative
    direction (rank 2): inequivalent equal-dimension pairs must separate both
    in the divisor and in some character of word length at most
    ``contrapositive_char_length``.
    """
    violations: list[dict] = []
    rng = random.Random(seed)
    probe = probe_set_K(n) if probe_kind == "K" else probe_set_script_K(n)

    for rep in standard_battery(n):
        for t in range(conjugators):
            c = random_rational_invertible(rep.dim, rng)
            other = conjugate(rep, c, label=f"conj({rep.name},#{t})")
            report = verify_character_determination(
                rep, other, probe, word_budget=char_budget, method=method, rng=rng
            )
            if not (report.divisor_equal and report.char_equal and report.consistent):
                violations.append(
                    {"suite": "determination", "case": "positive", "n": n,
                     "rep": rep.name, "conjugator": t, "probe": probe_kind,
                     "report": report.to_json()}
                )
            if report.pit is not None and report.pit.equal and report.pit.bound > 1e-60:
                violations.append(
                    {"suite": "determination", "case": "pit_bound", "n": n,
                     "rep": rep.name, "bound": report.pit.bound}
                )

    if contrapositive and n == 2:
        for rep1, rep2 in _contrapositive_pairs(n):
            report = verify_character_determination(
                rep1, rep2, probe, word_budget=char_budget, method=method, rng=rng
            )
            if report.critical:
                violations.append(
                    {"suite": "determination", "case": "CRITICAL", "n": n,
                     "rep1": rep1.name, "rep2": rep2.name, "probe": probe_kind,
                     "report": report.to_json()}
                )
                continue
            if report.divisor_equal or report.char_equal:
                violations.append(
                    {"suite": "determination", "case": "contrapositive", "n": n,
                     "rep1": rep1.name, "rep2": rep2.name, "probe": probe_kind,
                     "report": report.to_json()}
                )
                continue
            shortest = min(
                (len(v["word"].split()) for v in report.violations), default=None
            )
            if shortest is None or shortest > contrapositive_char_length:
                violations.append(
                    {"suite": "determination", "case": "short_word_split", "n": n,
                     "rep1": rep1.name, "rep2": rep2.name,
                     "shortest_split_length": shortest}
                )
    return violations


def sample_probe_multiset(
    n: int, rng: random.Random, max_total: int = 4
) -> tuple[list[Word], tuple[int, ...]]:
    """Seeded multiset in the shape produced by the lattice-augmented normal
    form: split block factors once each, plus signed translation letters with
    multiplicities, total size capped."""
    while True:
        blocks: list[tuple[int, int]] = []
        position = 1
        while position <= n:
            if rng.random() < 0.5:
                length = rng.randint(1, min(4, n - position + 1))
                blocks.append((position, position + length - 1))
                position += length + 1
            else:
                position += 1
        interior = {
            i for p, k in blocks if k > p for i in range(p + 1, k + 1)
        }
        exps = [0] * n
        for j in range(1, n + 1):
            if j in interior or rng.random() < 0.55:
                continue
            if any(p == k == j for p, k in blocks):
                exps[j - 1] = rng.choice([-1, 1])
            else:
                exps[j - 1] = rng.choice([-2, -1, 1, 2])
        pieces = split_block_word(tuple(blocks), n)
        letters = pieces + [
            Word(n, (g(j, 1 if exps[j - 1] > 0 else -1),))
            for j in range(1, n + 1)
            if exps[j - 1]
        ]
        multiplicities = tuple(
            [1] * len(pieces) + [abs(e) for e in exps if e]
        )
        total = sum(multiplicities)
        if 1 <= total <= max_total:
            return letters, multiplicities


def signature_suite(
    n: int, seed: int = 0, instances: int = 100, max_total: int = 4
) -> list[dict]:
    """Permutation-invariance of battery characters on normal-form multisets."""
    violations: list[dict] = []
    rng = random.Random(seed)
    battery = standard_battery(n)
    for t in range(instances):
        letters, multiplicities = sample_probe_multiset(n, rng, max_total)
        report = signature_conjugacy_check(letters, multiplicities, battery)
        if not report.consistent:
            violations.append(
                {"suite": "signature", "instance": t, "n": n, "report": report.to_json()}
            )
    return violations
