"""Exact simulator of the truncated (q,2)-Fock space over ``Q^d``.

States are sparse maps from basis words ``(i_1, ..., i_n)`` to rational
coefficients; the empty word is the vacuum.  The deformed inner product only
touches the last two tensor slots::

    <F, G>_n = <F, G>_tensor + q <F, swap_last_two(G)>_tensor      (n >= 2)

Creation prepends a test vector.  Annihilation is the adjoint of creation
for that inner product, which gives the three-branch rule implemented in
:func:`annihilate`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

Scalar = Fraction

__all__ = [
    "Scalar",
    "TruncationError",
    "TestVector",
    "LevelTensor",
    "FockState",
    "OperatorWord",
    "as_scalar",
    "check_q",
    "deformed_inner",
    "state_inner",
    "create",
    "annihilate",
    "apply_word",
    "vacuum_expectation",
    "project_low",
    "operator_norm_squared",
    "is_epsilon_plus",
]


class TruncationError(ValueError):
    """A creation operator would push a state above its truncation bound."""


def as_scalar(value) -> Fraction:
    """Coerce ``int``, ``Fraction`` or a ``"p/r"`` string to an exact rational.

    Floats are rejected: they would silently import binary rounding into
    an exact computation.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed rational {value!r}") from exc
    raise TypeError(f"cannot use {type(value).__name__} as an exact scalar")


def check_q(q) -> Fraction:
    q = as_scalar(q)
    if not -1 <= q <= 1:
        raise ValueError(f"q must lie in [-1, 1], got {q}")
    return q


@dataclass(frozen=True)
class TestVector:
    """Real test vector given by its coordinates in the canonical basis."""

    __test__ = False  # keep pytest from collecting this class

    coords: tuple[Fraction, ...]

    def __init__(self, coords: Iterable):
        coords = tuple(as_scalar(c) for c in coords)
        if not coords:
            raise ValueError("a test vector needs dimension >= 1")
        object.__setattr__(self, "coords", coords)

    @property
    def dimension(self) -> int:
        return len(self.coords)

    def dot(self, other: "TestVector") -> Fraction:
        if other.dimension != self.dimension:
            raise ValueError("dimension mismatch")
        return sum((a * b for a, b in zip(self.coords, other.coords)), Fraction(0))

    def norm2(self) -> Fraction:
        return self.dot(self)

    @classmethod
    def basis(cls, i: int, d: int) -> "TestVector":
        return cls(1 if j == i else 0 for j in range(d))


@dataclass(frozen=True)
class LevelTensor:
    """Element of the algebraic tensor power ``(Q^d)^{(x) n}``."""

    level: int
    dimension: int
    terms: Mapping[tuple[int, ...], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.level < 1 or self.dimension < 1:
            raise ValueError("level and dimension must be >= 1")
        clean = {}
        for key, c in self.terms.items():
            key = tuple(key)
            if len(key) != self.level:
                raise ValueError(f"key {key} does not have {self.level} entries")
            if any(not 0 <= i < self.dimension for i in key):
                raise ValueError(f"key {key} out of range for dimension {self.dimension}")
            c = as_scalar(c)
            if c:
                clean[key] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def from_vectors(cls, *vectors: TestVector) -> "LevelTensor":
        """Elementary tensor ``g_1 (x) ... (x) g_n``."""
        d = vectors[0].dimension
        if any(v.dimension != d for v in vectors):
            raise ValueError("dimension mismatch")
        terms = {}
        for key in product(range(d), repeat=len(vectors)):
            c = Fraction(1)
            for v, i in zip(vectors, key):
                c *= v.coords[i]
                if not c:
                    break
            if c:
                terms[key] = c
        return cls(len(vectors), d, terms)


def _tensor_dot(a: Mapping, b: Mapping) -> Fraction:
    if len(a) > len(b):
        a, b = b, a
    return sum((c * b[k] for k, c in a.items() if k in b), Fraction(0))


def _swap_last_two(terms: Mapping) -> dict:
    return {k[:-2] + (k[-1], k[-2]): c for k, c in terms.items()}


def deformed_inner(F: LevelTensor, G: LevelTensor, q) -> Fraction:
    """``<F, lambda_n G>`` for two tensors of the same level."""
    q = check_q(q)
    if F.level != G.level:
        raise ValueError(f"level mismatch: {F.level} vs {G.level}")
    if F.dimension != G.dimension:
        raise ValueError(f"dimension mismatch: {F.dimension} vs {G.dimension}")
    return _deformed_terms(F.terms, G.terms, F.level, q)


def _deformed_terms(a: Mapping, b: Mapping, n: int, q: Fraction) -> Fraction:
    value = _tensor_dot(a, b)
    if n >= 2 and q:
        value += q * _tensor_dot(a, _swap_last_two(b))
    return value


class FockState:
    """Immutable truncated Fock vector.

    ``terms`` maps basis words to coefficients; the word length is the
    particle level and ``()`` is the vacuum.  ``bound`` is the truncation
    level N; a state never stores anything above it.
    """

    __slots__ = ("dimension", "bound", "_terms")

    def __init__(self, dimension: int, bound: int, terms: Mapping | None = None):
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        if bound < 0:
            raise ValueError("truncation bound must be >= 0")
        clean = {}
        for key, c in (terms or {}).items():
            key = tuple(key)
            if len(key) > bound:
                raise TruncationError(
                    f"level {len(key)} exceeds truncation bound {bound}"
                )
            if any(not 0 <= i < dimension for i in key):
                raise ValueError(f"basis word {key} out of range")
            c = as_scalar(c)
            if c:
                clean[key] = clean.get(key, Fraction(0)) + c
        self.dimension = dimension
        self.bound = bound
        self._terms = {k: c for k, c in clean.items() if c}

    @classmethod
    def vacuum(cls, dimension: int, bound: int, coefficient=1) -> "FockState":
        return cls(dimension, bound, {(): coefficient})

    @classmethod
    def zero(cls, dimension: int, bound: int) -> "FockState":
        return cls(dimension, bound)

    @classmethod
    def from_levels(
        cls, dimension: int, bound: int, vacuum=0, levels: Mapping[int, LevelTensor] | None = None
    ) -> "FockState":
        terms = {(): vacuum}
        for n, tensor in (levels or {}).items():
            if tensor.level != n or tensor.dimension != dimension:
                raise ValueError(f"level-{n} component has the wrong shape")
            terms.update(tensor.terms)
        return cls(dimension, bound, terms)

    @property
    def terms(self) -> Mapping[tuple[int, ...], Fraction]:
        return dict(self._terms)

    @property
    def vacuum_coefficient(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def level(self, n: int) -> LevelTensor | None:
        """Level-``n`` component, or ``None`` when it is zero (``n >= 1``)."""
        part = {k: c for k, c in self._terms.items() if len(k) == n}
        return LevelTensor(n, self.dimension, part) if part else None

    @property
    def levels(self) -> list[int]:
        return sorted({len(k) for k in self._terms})

    @property
    def top_level(self) -> int:
        """Highest occupied level, ``-1`` for the zero vector."""
        return max((len(k) for k in self._terms), default=-1)

    def is_zero(self) -> bool:
        return not self._terms

    def with_bound(self, bound: int) -> "FockState":
        return FockState(self.dimension, bound, self._terms)

    def scaled(self, c) -> "FockState":
        c = as_scalar(c)
        return FockState(self.dimension, self.bound, {k: c * v for k, v in self._terms.items()})

    def __add__(self, other: "FockState") -> "FockState":
        self._check_compatible(other)
        terms = dict(self._terms)
        for k, c in other._terms.items():
            terms[k] = terms.get(k, Fraction(0)) + c
        return FockState(self.dimension, self.bound, terms)

    def __sub__(self, other: "FockState") -> "FockState":
        return self + other.scaled(-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FockState):
            return NotImplemented
        return self.dimension == other.dimension and self._terms == other._terms

    def __hash__(self):
        return hash((self.dimension, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {c}" for k, c in sorted(self._terms.items()))
        return f"FockState(d={self.dimension}, N={self.bound}, {{{body}}})"

    def _check_compatible(self, other: "FockState"):
        if self.dimension != other.dimension:
            raise ValueError("dimension mismatch")
        if self.bound != other.bound:
            raise ValueError("truncation bound mismatch")


def state_inner(s: FockState, t: FockState, q) -> Fraction:
    """Fock-space inner product: levels are orthogonal, each deformed."""
    q = check_q(q)
    if s.dimension != t.dimension:
        raise ValueError("dimension mismatch")
    by_level_s: dict[int, dict] = {}
    by_level_t: dict[int, dict] = {}
    for k, c in s._terms.items():
        by_level_s.setdefault(len(k), {})[k] = c
    for k, c in t._terms.items():
        by_level_t.setdefault(len(k), {})[k] = c
    total = Fraction(0)
    for n, part in by_level_s.items():
        other = by_level_t.get(n)
        if other:
            total += _deformed_terms(part, other, n, q)
    return total


def create(f: TestVector, s: FockState) -> FockState:
    """``A+(f) s``: prepend ``f`` to every tensor, ``Phi -> f``."""
    if f.dimension != s.dimension:
        raise ValueError("dimension mismatch")
    if not s.is_zero() and s.top_level >= s.bound:
        raise TruncationError(
            f"creation on level {s.top_level} overflows truncation bound {s.bound}"
        )
    support = [(i, c) for i, c in enumerate(f.coords) if c]
    out: dict[tuple[int, ...], Fraction] = {}
    for key, c in s._terms.items():
        for i, fi in support:
            k = (i,) + key
            out[k] = out.get(k, Fraction(0)) + fi * c
    return FockState(s.dimension, s.bound, out)


def annihilate(f: TestVector, s: FockState, q) -> FockState:
    """``A(f) s``, the adjoint of :func:`create` for the deformed product."""
    q = check_q(q)
    if f.dimension != s.dimension:
        raise ValueError("dimension mismatch")
    fc = f.coords
    out: dict[tuple[int, ...], Fraction] = {}

    def add(k, c):
        if c:
            out[k] = out.get(k, Fraction(0)) + c

    for key, c in s._terms.items():
        n = len(key)
        if n == 0:
            continue
        if n == 2:
            i, j = key
            add((j,), c * fc[i])
            add((i,), q * c * fc[j])
        else:
            # n == 1 lands on the vacuum key ()
            add(key[1:], c * fc[key[0]])
    return FockState(s.dimension, s.bound, out)


@dataclass(frozen=True)
class OperatorWord:
    """Product ``A^{e1}(f_{i1}) ... A^{em}(f_{im})`` read left to right.

    ``letters`` holds ``(sign, vector_index)`` pairs; ``vectors`` is the
    registry the indices point into.
    """

    letters: tuple[tuple[int, int], ...]
    vectors: tuple[TestVector, ...]

    def __init__(self, letters: Iterable[Sequence[int]], vectors: Iterable[TestVector]):
        letters = tuple((int(sg), int(ix)) for sg, ix in letters)
        vectors = tuple(vectors)
        dims = {v.dimension for v in vectors}
        if len(dims) > 1:
            raise ValueError("all registered vectors must share one dimension")
        for sg, ix in letters:
            if sg not in (1, -1):
                raise ValueError(f"sign must be +1 or -1, got {sg}")
            if not 0 <= ix < len(vectors):
                raise ValueError(f"vector index {ix} is not registered")
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "vectors", vectors)

    @classmethod
    def from_signs(cls, signs: Sequence[int], vectors: Sequence[TestVector]) -> "OperatorWord":
        """Word whose k-th letter uses ``vectors[k]`` (or the single vector)."""
        vectors = list(vectors)
        if len(vectors) == 1:
            return cls(((sg, 0) for sg in signs), vectors)
        if len(vectors) != len(signs):
            raise ValueError("need one vector per letter, or exactly one vector")
        return cls(((sg, k) for k, sg in enumerate(signs)), vectors)

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(sg for sg, _ in self.letters)

    @property
    def dimension(self) -> int:
        if not self.vectors:
            raise ValueError("word has no registered vectors")
        return self.vectors[0].dimension

    def __len__(self):
        return len(self.letters)


def apply_word(w: OperatorWord, s: FockState, q) -> FockState:
    """Apply the word to ``s``; the rightmost letter acts first."""
    q = check_q(q)
    for sg, ix in reversed(w.letters):
        f = w.vectors[ix]
        s = create(f, s) if sg == 1 else annihilate(f, s, q)
        if s.is_zero():
            break
    return s


def is_epsilon_plus(signs: Sequence[int]) -> bool:
    """Balanced with every suffix sum non-negative."""
    if len(signs) % 2:
        return False
    acc = 0
    for sg in reversed(signs):
        acc += sg
        if acc < 0:
            return False
    return acc == 0


def vacuum_expectation(w: OperatorWord, q, *, shortcut: bool = True) -> Fraction:
    """``<Phi, w Phi>``.

    With ``shortcut`` the sign pattern is screened first and only words
    with sign sequence in ``{-1,1}^{2n}_+`` are simulated.  Without it the
    word is always simulated, with a bound large enough that no creation
    can overflow.
    """
    q = check_q(q)
    if not w.letters:
        return Fraction(1)
    signs = w.signs
    if shortcut:
        if not is_epsilon_plus(signs):
            return Fraction(0)
        bound = len(signs) // 2
    else:
        bound = sum(1 for sg in signs if sg == 1)
    phi = FockState.vacuum(w.dimension, bound)
    return apply_word(w, phi, q).vacuum_coefficient


def project_low(s: FockState, levels: int = 2) -> FockState:
    """Projector onto the first ``levels`` particle spaces (``p_2`` by default)."""
    return FockState(s.dimension, s.bound, {k: c for k, c in s._terms.items() if len(k) < levels})


# -- operator norm -----------------------------------------------------------

def _is_psd(matrix: list[list[Fraction]]) -> bool:
    # exact symmetric elimination: a zero diagonal entry forces a zero row
    m = [row[:] for row in matrix]
    idx = list(range(len(m)))
    while idx:
        diag = [(m[i][i], i) for i in idx]
        if any(v < 0 for v, _ in diag):
            return False
        pivots = [i for v, i in diag if v > 0]
        if not pivots:
            return all(m[i][j] == 0 for i in idx for j in idx)
        p = pivots[0]
        piv = m[p][p]
        idx.remove(p)
        for i in idx:
            if m[i][p]:
                r = m[i][p] / piv
                row_i, row_p = m[i], m[p]
                for j in idx:
                    row_i[j] -= r * row_p[j]
    return True


def _gram(tensors: list[dict], n: int, q: Fraction) -> list[list[Fraction]]:
    return [[_deformed_terms(a, b, n, q) for b in tensors] for a in tensors]


def _level_norm2(f: TestVector, n: int, q: Fraction) -> Fraction:
    """max ||f (x) x||^2 / ||x||^2 over x in level n, by bisection + snapping."""
    d = f.dimension
    if n == 0:
        return f.norm2()
    basis = [{key: Fraction(1)} for key in product(range(d), repeat=n)]
    lifted = [create(f, FockState(d, n + 1, b))._terms for b in basis]
    G = _gram(basis, n, q)
    M = _gram(lifted, n + 1, q)

    def dominates(lam: Fraction) -> bool:
        return _is_psd([[lam * g - m for g, m in zip(gr, mr)] for gr, mr in zip(G, M)])

    lo, hi = Fraction(0), 2 * f.norm2() + 1
    for _ in range(64):
        mid = (lo + hi) / 2
        if dominates(mid):
            hi = mid
        else:
            lo = mid
    # snap to a small-denominator rational when it is provably the optimum:
    # cand*G - M is PSD and vanishes on some x of positive norm
    for den in (1000, 10**6):
        cand = ((lo + hi) / 2).limit_denominator(den)
        if not (lo <= cand <= hi and dominates(cand)):
            continue
        S = [[cand * g - m for g, m in zip(gr, mr)] for gr, mr in zip(G, M)]
        for x in _nullspace(S):
            gx = sum(x[i] * G[i][j] * x[j] for i in range(len(x)) for j in range(len(x)))
            if gx > 0:
                return cand
    return hi


def _nullspace(matrix: list[list[Fraction]]) -> list[list[Fraction]]:
    m = [row[:] for row in matrix]
    rows, cols = len(m), len(m[0]) if m else 0
    pivot_cols = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                fac = m[i][c]
                m[i] = [a - fac * b for a, b in zip(m[i], m[r])]
        pivot_cols.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivot_cols]
    basis = []
    for fc in free:
        x = [Fraction(0)] * cols
        x[fc] = Fraction(1)
        for i, pc in enumerate(pivot_cols):
            x[pc] = -m[i][fc]
        basis.append(x)
    return basis


def operator_norm_squared(f: TestVector, q, max_level: int = 3) -> Fraction:
    """``||A+(f)||^2`` restricted to levels ``<= max_level``.

    Computed level by level from exact Gram matrices; creation maps level n
    to level n+1, so the supremum over the truncated space is the largest
    per-level generalized eigenvalue.  Bisection brackets that eigenvalue;
    a small-denominator candidate inside the bracket is returned only after
    exact verification (PSD plus attainment on a vector of positive norm).
    Otherwise the upper end of the bracket is returned, within
    ``2^-64 (2||f||^2 + 1)`` of the true value.
    """
    q = check_q(q)
    if max_level < 2:
        raise ValueError("max_level must be >= 2")
    return max(_level_norm2(f, n, q) for n in range(max_level + 1))
