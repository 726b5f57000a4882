from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aspectra.affine import eval_word
from aspectra.reps import char, standard_battery
from aspectra.words import (
    Braid,
    Cancel,
    Circular,
    Commute,
    MoveError,
    ParseError,
    TraceBuilder,
    Word,
    WordError,
    a,
    apply_move,
    enumerate_moves,
    g,
    letters_commute,
    parse_word,
    render_word,
)


def test_parse_coxeter_word():
    w = parse_word("a1 a2 a1", 2)
    assert w.letters == (a(1), a(2), a(1))


def test_parse_expands_lattice_exponents():
    w = parse_word("g1^-2", 3)
    assert w.letters == (g(1, -1), g(1, -1))
    assert parse_word("g2^3", 3).letters == (g(2), g(2), g(2))


def test_parse_index_out_of_range():
    with pytest.raises(WordError, match="out of range"):
        parse_word("a4", 2)
    with pytest.raises(WordError):
        parse_word("g3", 2)


def test_parse_rejects_bad_tokens():
    with pytest.raises(ParseError, match="token 2"):
        parse_word("a1 b2", 2)
    with pytest.raises(ParseError, match="exponents"):
        parse_word("a1^2", 2)
    with pytest.raises(ParseError, match="zero exponent"):
        parse_word("g1^0", 2)
    # Involutions: an exponent of -1 is the letter itself.
    assert parse_word("a1^-1", 2).letters == (a(1),)


def test_render_collapses_lattice_runs():
    w = Word(3, (a(1), g(2), g(2), g(1, -1)))
    assert render_word(w) == "a1 g2^2 g1^-1"


words_strategy = st.integers(2, 4).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(
            st.one_of(
                st.integers(1, n + 1).map(a),
                st.tuples(st.integers(1, n), st.sampled_from([1, -1])).map(lambda t: g(*t)),
            ),
            max_size=10,
        ),
    )
)


@given(words_strategy)
def test_parse_render_round_trip(data):
    n, letters = data
    w = Word(n, tuple(letters))
    assert parse_word(render_word(w), n) == w


def test_cancel_example():
    w = Word(2, (a(2), a(2), a(1)))
    assert apply_move(w, Cancel(1)) == Word(2, (a(1),))


def test_braid_example():
    w = Word(2, (a(1), a(2), a(1)))
    assert apply_move(w, Braid(1)) == Word(2, (a(2), a(1), a(2)))


def test_circular_example():
    w = Word(3, (a(1), a(2), a(3)))
    assert apply_move(w, Circular(2)) == Word(3, (a(3), a(1), a(2)))


def test_move_not_applicable_errors():
    w = Word(3, (a(1), a(2)))
    with pytest.raises(MoveError, match="equal adjacent"):
        apply_move(w, Cancel(1))
    with pytest.raises(MoveError, match="do not commute"):
        apply_move(w, Commute(1))
    with pytest.raises(MoveError, match="out of range"):
        apply_move(w, Circular(5))
    with pytest.raises(MoveError, match="Cancel needs two Coxeter"):
        apply_move(Word(3, (g(1), g(1))), Cancel(1))


def test_enumerate_contains_cancel():
    assert Cancel(1) in enumerate_moves(Word(2, (a(1), a(1))))


def test_enumerate_contains_commute_for_distant_letters():
    assert Commute(1) in enumerate_moves(Word(3, (a(1), a(3))))


def test_enumerate_adjacent_pair_is_circular_only():
    # Derived by checking applicability against the rank-2 relation table:
    # indices 1 and 2 are cycle-adjacent, so no commute; too short for a
    # braid; letters differ, so no cancel.  Only the rotation applies.
    assert not letters_commute(a(1), a(2), 2)
    assert enumerate_moves(Word(2, (a(1), a(2)))) == [Circular(1)]


def test_enumerate_is_sorted_by_kind_then_position():
    moves = enumerate_moves(Word(3, (a(1), a(1), a(3))))
    kinds = [type(m).__name__ for m in moves]
    assert kinds == sorted(kinds, key=lambda k: ["Cancel", "Commute", "Circular", "Braid"].index(k))


@given(words_strategy)
@settings(max_examples=60)
def test_moves_preserve_or_shorten(data):
    n, letters = data
    w = Word(n, tuple(letters))
    image = eval_word(w)
    for move in enumerate_moves(w):
        result = apply_move(w, move)
        if isinstance(move, Cancel):
            assert len(result) == len(w) - 2
        else:
            assert len(result) == len(w)
        if not isinstance(move, Circular):
            # Cancel, commute and braid moves fix the group element exactly.
            assert eval_word(result) == image


def test_circular_moves_preserve_battery_characters():
    battery = standard_battery(2)
    w = parse_word("a1 a2 a3 g1 a2", 2)
    for move in enumerate_moves(w):
        if not isinstance(move, Circular):
            continue
        rotated = apply_move(w, move)
        for rep in battery:
            assert char(rep, w) == char(rep, rotated)


def test_trace_replay_detects_tampering():
    builder = TraceBuilder(Word(2, (a(1), a(1), a(2))))
    builder.apply(Cancel(1))
    trace = builder.build()
    trace.replay()
    assert trace.final == Word(2, (a(2),))
    bad = type(trace)(trace.initial, ((Cancel(1), Word(2, (a(1),))),))
    with pytest.raises(MoveError, match="does not match"):
        bad.replay()


def test_rank_bound():
    with pytest.raises(WordError, match="rank must be >= 2"):
        Word(1, ())
