"""Exact sparse multivariate polynomials and pencil determinants.

Polynomials are maps from exponent vectors to nonzero rational coefficients,
all of one arity.  Serialisation sorts terms by graded lexicographic order
(total degree first), which makes the JSON form bit-stable.  Determinants of
polynomial matrices use cofactor expansion up to dimension 4 and fraction-free
(Bareiss) elimination with initial content stripping above that; both paths
are exact.  A modular evaluation backend supports randomised identity testing
with the usual degree-over-prime failure bound.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Mapping, Sequence

MERSENNE_61 = (1 << 61) - 1


class PolyError(ValueError):
    pass


def _norm_coeff(c):
    """Exact coefficient, stored as int when integral (cheaper arithmetic)."""
    if isinstance(c, int):
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def _clean(terms: Mapping[tuple[int, ...], Fraction], arity: int) -> dict[tuple[int, ...], Fraction]:
    out: dict[tuple[int, ...], Fraction] = {}
    for exp, coeff in terms.items():
        exp = tuple(int(e) for e in exp)
        if len(exp) != arity:
            raise PolyError(f"exponent vector {exp} does not match arity {arity}")
        if any(e < 0 for e in exp):
            raise PolyError(f"negative exponent in {exp}")
        c = _norm_coeff(coeff)
        if c != 0:
            out[exp] = c
    return out


@dataclass(frozen=True)
class MultiPoly:
    """Sparse polynomial with exact rational coefficients."""

    arity: int
    terms: dict[tuple[int, ...], Fraction]

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", _clean(self.terms, self.arity))

    # --- constructors -----------------------------------------------------

    @classmethod
    def _raw(cls, arity: int, terms: dict) -> MultiPoly:
        """Internal constructor for arithmetic results whose invariants hold
        by construction (validated exponents, no zero coefficients)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "arity", arity)
        object.__setattr__(obj, "terms", terms)
        return obj

    @classmethod
    def zero(cls, arity: int) -> MultiPoly:
        return cls(arity, {})

    @classmethod
    def const(cls, arity: int, value) -> MultiPoly:
        return cls(arity, {(0,) * arity: Fraction(value)})

    @classmethod
    def variable(cls, index: int, arity: int) -> MultiPoly:
        if not 0 <= index < arity:
            raise PolyError(f"variable index {index} out of range for arity {arity}")
        exp = tuple(1 if i == index else 0 for i in range(arity))
        return cls(arity, {exp: Fraction(1)})

    # --- ring structure ----------------------------------------------------

    def _coerce(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            if other.arity != self.arity:
                raise PolyError(f"arity mismatch: {self.arity} vs {other.arity}")
            return other
        return MultiPoly.const(self.arity, other)

    def __add__(self, other) -> MultiPoly:
        other = self._coerce(other)
        terms = dict(self.terms)
        for exp, coeff in other.terms.items():
            value = terms.get(exp, 0) + coeff
            if value:
                terms[exp] = value
            else:
                terms.pop(exp, None)
        return MultiPoly._raw(self.arity, terms)

    def __radd__(self, other) -> MultiPoly:
        return self + other

    def __neg__(self) -> MultiPoly:
        return MultiPoly._raw(self.arity, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> MultiPoly:
        return self + (-self._coerce(other))

    def __mul__(self, other) -> MultiPoly:
        other = self._coerce(other)
        left, right = self.terms, other.terms
        if len(left) > len(right):
            left, right = right, left
        terms: dict[tuple[int, ...], Fraction] = {}
        get = terms.get
        for e1, c1 in left.items():
            for e2, c2 in right.items():
                exp = tuple(map(int.__add__, e1, e2))
                value = get(exp, 0) + c1 * c2
                if value:
                    terms[exp] = value
                else:
                    del terms[exp]
        return MultiPoly._raw(self.arity, terms)

    def __rmul__(self, other) -> MultiPoly:
        return self * other

    def scale(self, c) -> MultiPoly:
        c = _norm_coeff(c)
        if c == 0:
            return MultiPoly._raw(self.arity, {})
        return MultiPoly._raw(self.arity, {e: _norm_coeff(c * v) for e, v in self.terms.items()})

    def __pow__(self, e: int) -> MultiPoly:
        if e < 0:
            raise PolyError("negative power")
        result = MultiPoly.const(self.arity, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # --- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.arity, Fraction(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def eval(self, point: Sequence) -> Fraction:
        if len(point) != self.arity:
            raise PolyError(f"point length {len(point)} does not match arity {self.arity}")
        values = [Fraction(x) for x in point]
        total = Fraction(0)
        for exp, coeff in self.terms.items():
            term = coeff
            for v, e in zip(values, exp):
                if e:
                    term *= v**e
            total += term
        return total

    def eval_mod(self, point: Sequence[int], prime: int) -> int:
        if len(point) != self.arity:
            raise PolyError(f"point length {len(point)} does not match arity {self.arity}")
        total = 0
        for exp, coeff in self.terms.items():
            c = coeff.numerator % prime * pow(coeff.denominator, -1, prime) % prime
            for v, e in zip(point, exp):
                if e:
                    c = c * pow(v % prime, e, prime) % prime
            total = (total + c) % prime
        return total

    def restrict(self, keep: Sequence[int]) -> MultiPoly:
        """Set every variable outside ``keep`` to zero and renumber the kept
        ones in the given order."""
        keep = list(keep)
        terms: dict[tuple[int, ...], Fraction] = {}
        for exp, coeff in self.terms.items():
            if any(e != 0 for i, e in enumerate(exp) if i not in keep):
                continue
            new_exp = tuple(exp[i] for i in keep)
            terms[new_exp] = terms.get(new_exp, Fraction(0)) + coeff
        return MultiPoly(len(keep), terms)

    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "terms": [
                {"exp": list(exp), "coeff": str(coeff)} for exp, coeff in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> MultiPoly:
        return cls(
            data["arity"],
            {tuple(t["exp"]): Fraction(t["coeff"]) for t in data["terms"]},
        )

    def render(self, names: Sequence[str] | None = None) -> str:
        if self.is_zero():
            return "0"
        names = names or [f"x{i + 1}" for i in range(self.arity)]
        parts = []
        for exp, coeff in self.sorted_terms():
            factors = [
                names[i] if e == 1 else f"{names[i]}^{e}"
                for i, e in enumerate(exp)
                if e
            ]
            if not factors:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append("*".join(factors))
            elif coeff == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{coeff}*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")


def _heap_key(exp: tuple[int, ...]) -> tuple:
    # Graded-lex maximum first on a min-heap: negate the grade and each entry
    # (elementwise negation reverses lexicographic order on nonneg vectors).
    return (-sum(exp), tuple(-e for e in exp))


def poly_div_exact(num: MultiPoly, den: MultiPoly) -> MultiPoly:
    """Exact division of multivariate polynomials; raises when not exact.

    Repeatedly cancels the graded-lex leading term of the remainder: when
    ``den`` divides ``num``, every leading-term ratio is one quotient term.
    A heap orders candidate leading exponents so each step is logarithmic.
    """
    if den.is_zero():
        raise PolyError("division by the zero polynomial")
    if num.is_zero():
        return MultiPoly.zero(num.arity)
    den_terms = sorted(den.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)
    den_lead, den_coeff = den_terms[0]
    remainder = dict(num.terms)
    heap = [(_heap_key(e), e) for e in remainder]
    heapq.heapify(heap)
    quotient: dict[tuple[int, ...], Fraction] = {}
    while heap:
        _, lead = heapq.heappop(heap)
        coeff = remainder.get(lead, 0)
        if not coeff:
            continue
        exp = tuple(map(int.__sub__, lead, den_lead))
        if any(e < 0 for e in exp):
            raise PolyError("division is not exact")
        if isinstance(coeff, int) and isinstance(den_coeff, int):
            factor = _norm_coeff(Fraction(coeff, den_coeff))
        else:
            factor = _norm_coeff(coeff / den_coeff)
        quotient[exp] = factor
        del remainder[lead]
        for de, dc in den_terms[1:]:
            target = tuple(map(int.__add__, exp, de))
            value = remainder.get(target, 0) - factor * dc
            if value:
                if target not in remainder:
                    heapq.heappush(heap, (_heap_key(target), target))
                remainder[target] = value
            else:
                remainder.pop(target, None)
    if remainder:
        raise PolyError("division is not exact")
    return MultiPoly._raw(num.arity, {e: c for e, c in quotient.items() if c})


@dataclass(frozen=True)
class PolyMatrix:
    """Square matrix of polynomials sharing one arity."""

    entries: tuple[tuple[MultiPoly, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(tuple(row) for row in self.entries))
        n = len(self.entries)
        if n == 0 or any(len(row) != n for row in self.entries):
            raise PolyError("matrix must be square and nonempty")
        arity = self.entries[0][0].arity
        if any(p.arity != arity for row in self.entries for p in row):
            raise PolyError("entries must share one arity")

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def arity(self) -> int:
        return self.entries[0][0].arity

    def eval_mod(self, point: Sequence[int], prime: int) -> list[list[int]]:
        return [[p.eval_mod(point, prime) for p in row] for row in self.entries]

    def max_entry_degree(self) -> int:
        return max(p.total_degree() for row in self.entries for p in row)


def det_cofactor(m: PolyMatrix) -> MultiPoly:
    """Cofactor expansion along the first row; the independent oracle."""
    return _det_cofactor(list(list(row) for row in m.entries), m.arity)


def _det_cofactor(rows: list[list[MultiPoly]], arity: int) -> MultiPoly:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = MultiPoly.zero(arity)
    for col in range(n):
        entry = rows[0][col]
        if entry.is_zero():
            continue
        minor = [row[:col] + row[col + 1 :] for row in rows[1:]]
        term = entry * _det_cofactor(minor, arity)
        total = total + (term if col % 2 == 0 else -term)
    return total


def _strip_content(row: list[MultiPoly]) -> tuple[list[MultiPoly], Fraction]:
    """Pull the rational content out of a row, leaving primitive integer
    coefficients (empty rows pass through with content 1)."""
    coeffs = [c for p in row for c in p.terms.values()]
    if not coeffs:
        return row, Fraction(1)
    num = 0
    den = 1
    for c in coeffs:
        num = gcd(num, c.numerator)
        den = den * c.denominator // gcd(den, c.denominator)
    content = Fraction(num, den)
    if content == 0:
        return row, Fraction(1)
    return [p.scale(1 / content) for p in row], content


def det_bareiss(m: PolyMatrix) -> MultiPoly:
    """Fraction-free elimination with up-front content stripping; exact."""
    arity = m.arity
    rows: list[list[MultiPoly]] = []
    scale = Fraction(1)
    for row in m.entries:
        stripped, content = _strip_content(list(row))
        rows.append(stripped)
        scale *= content
    n = m.dim
    sign = 1
    prev = MultiPoly.const(arity, 1)
    for k in range(n - 1):
        pivot_row = next((r for r in range(k, n) if not rows[r][k].is_zero()), None)
        if pivot_row is None:
            return MultiPoly.zero(arity)
        if pivot_row != k:
            rows[k], rows[pivot_row] = rows[pivot_row], rows[k]
            sign = -sign
        pivot = rows[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = poly_div_exact(
                    pivot * rows[i][j] - rows[i][k] * rows[k][j], prev
                )
            rows[i][k] = MultiPoly.zero(arity)
        prev = pivot
    return rows[n - 1][n - 1].scale(scale * sign)


def det_laplace(m: PolyMatrix) -> MultiPoly:
    """Row-by-row expansion sharing minors across column subsets.

    Processes one row at a time, keeping the determinant of every used
    column subset; each step multiplies a shared minor by a single matrix
    entry, which keeps intermediate products small for pencil-shaped
    matrices.  Division-free and exact.
    """
    arity = m.arity
    n = m.dim
    states: dict[int, MultiPoly] = {0: MultiPoly.const(arity, 1)}
    for r in range(n):
        nxt: dict[int, MultiPoly] = {}
        row = m.entries[r]
        for mask, minor in states.items():
            for c in range(n):
                bit = 1 << c
                if mask & bit:
                    continue
                entry = row[c]
                if entry.is_zero():
                    continue
                sign = -1 if bin(mask >> (c + 1)).count("1") % 2 else 1
                term = minor * entry
                if sign < 0:
                    term = -term
                new_mask = mask | bit
                if new_mask in nxt:
                    nxt[new_mask] = nxt[new_mask] + term
                else:
                    nxt[new_mask] = term
        if not nxt:
            return MultiPoly.zero(arity)
        states = nxt
    return states.get((1 << n) - 1, MultiPoly.zero(arity))


def det_symbolic(m: PolyMatrix) -> MultiPoly:
    """Exact determinant: cofactor expansion for dim <= 4, minor-sharing
    expansion above that (:func:`det_bareiss` remains available and is held
    to agree on every path by the test suite)."""
    if m.dim <= 4:
        return det_cofactor(m)
    return det_laplace(m)


def _det_mod(matrix: list[list[int]], prime: int) -> int:
    n = len(matrix)
    det = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if matrix[r][col] % prime), None)
        if pivot is None:
            return 0
        if pivot != col:
            matrix[col], matrix[pivot] = matrix[pivot], matrix[col]
            det = -det % prime
        inv = pow(matrix[col][col], -1, prime)
        det = det * matrix[col][col] % prime
        for r in range(col + 1, n):
            if matrix[r][col] % prime:
                f = matrix[r][col] * inv % prime
                matrix[r] = [(x - f * y) % prime for x, y in zip(matrix[r], matrix[col])]
    return det


@dataclass(frozen=True)
class PitResult:
    equal: bool
    trials: int
    prime: int
    bound: float
    witness: tuple[int, ...] | None

    def to_json(self) -> dict:
        return {
            "equal": self.equal,
            "trials": self.trials,
            "prime": self.prime,
            "falseEqualBound": self.bound,
            "witness": list(self.witness) if self.witness else None,
        }


def pit_equal(
    m1: PolyMatrix,
    m2: PolyMatrix,
    trials: int = 4,
    prime: int = MERSENNE_61,
    rng: random.Random | None = None,
) -> PitResult:
    """Randomised determinant-identity test.

    Evaluates both determinants at ``trials`` uniform points mod ``prime``.
    A disagreeing point certifies inequality; agreement on all trials bounds
    the false-equal probability by ``(degree_bound / prime) ** trials``.
    """
    if m1.arity != m2.arity:
        raise PolyError(f"arity mismatch: {m1.arity} vs {m2.arity}")
    rng = rng or random.Random(0)
    degree_bound = max(
        m1.dim * max(m1.max_entry_degree(), 0), m2.dim * max(m2.max_entry_degree(), 0), 1
    )
    if prime <= degree_bound:
        raise PolyError(f"prime {prime} too small relative to degree bound {degree_bound}")
    bound = (degree_bound / prime) ** trials
    for _ in range(trials):
        point = tuple(rng.randrange(prime) for _ in range(m1.arity))
        d1 = _det_mod(m1.eval_mod(point, prime), prime)
        d2 = _det_mod(m2.eval_mod(point, prime), prime)
        if d1 != d2:
            return PitResult(False, trials, prime, 0.0, point)
    return PitResult(True, trials, prime, bound, None)
