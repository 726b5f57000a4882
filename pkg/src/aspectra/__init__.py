"""Exact word combinatorics and joint-spectral pencils for the affine
symmetric group: admissible rewriting with traces, echelon normal forms, the
translation subgroup, exact representation characters, and determinantal
probe-set comparisons."""

from .affine import (
    AffinePermutation,
    FinitePermutation,
    element_ball,
    equal,
    eval_word,
    finite_lift,
    generator_image,
    quotient_to_finite,
    translation_vector,
)
from .echelon import (
    BlockEchelonForm,
    EchelonForm,
    TildeEchelonForm,
    a_echelon,
    block_echelon,
    decompose,
    echelon_by_search,
    tilde_echelon,
)
from .lattice import (
    LatticeElement,
    coordinates,
    g_word,
    p_word,
    rewrite_a_g,
    rewrite_a_p,
    rewrite_block_g,
    rewrite_p_p,
)
from .poly import MERSENNE_61, MultiPoly, PolyMatrix, det_symbolic, pit_equal
from .reps import (
    Character,
    MatrixRep,
    char,
    conjugate,
    direct_sum,
    parse_rep_spec,
    perm_quotient_rep,
    standard_battery,
    tensor,
    tits_rep,
)
from .spectra import (
    ProbeSet,
    SpectralDivisor,
    divisors_equal,
    pencil_divisor,
    probe_set_K,
    probe_set_script_K,
    signature_conjugacy_check,
    trace_sum,
    verify_character_determination,
)
from .words import (
    AdmissibleMove,
    Braid,
    Cancel,
    Circular,
    Commute,
    Letter,
    MoveTrace,
    Word,
    apply_move,
    enumerate_moves,
    parse_word,
    render_word,
)

__version__ = "0.1.0"
