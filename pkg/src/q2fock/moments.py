"""Vacuum moments of the field operator ``Q(f) = A(f) + A+(f)``.

Three independent routes to ``u_n = <Phi, Q(f)^{2n} Phi>``:

* ``u_by_recursion`` -- renewal recursion over the Catalan-convolution
  closed form for ``v_n``;
* ``u_by_simulator`` -- brute-force expansion of ``Q(f)^{2n}`` through the
  exact Fock simulator;
* ``u_by_jacobi`` -- weighted Dyck-path counting for the single-mode chain
  ``Phi, f, f(x)f, ...`` whose squared norm ratios are
  ``(|f|^2, (1+q)|f|^2, |f|^2, |f|^2, ...)``.

All arithmetic is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from q2fock.combinatorics import (
    catalan_convolution,
    enumerate_epsilon_plus,
)
from q2fock.fock import OperatorWord, TestVector, as_scalar, check_q, vacuum_expectation

__all__ = [
    "MomentTable",
    "JacobiOperator",
    "MomentDisagreement",
    "v_closed_form",
    "u_by_recursion",
    "u_by_simulator",
    "v_by_simulator",
    "u_by_jacobi",
    "jacobi_operator",
    "v_from_u",
    "vector_with_norm2",
    "moment_table",
    "odd_moment_by_simulator",
]


class MomentDisagreement(ArithmeticError):
    """Two moment routes produced different values."""

    def __init__(self, index: int, values: dict):
        self.index = index
        self.values = values
        shown = ", ".join(f"{k}={v}" for k, v in values.items())
        super().__init__(f"moment routes disagree first at n={index}: {shown}")


@dataclass(frozen=True)
class MomentTable:
    q: Fraction
    norm2: Fraction
    u: tuple[Fraction, ...]
    v: tuple[Fraction, ...]

    def __post_init__(self):
        if self.u and self.u[0] != 1:
            raise ValueError("u_0 must be 1")
        if self.v and self.v[0] != 1:
            raise ValueError("v_0 must be 1")


@dataclass(frozen=True)
class JacobiOperator:
    """Squared off-diagonal entries of the single-mode Jacobi matrix."""

    weights: tuple[Fraction, ...]

    @property
    def size(self) -> int:
        return len(self.weights) + 1


def _positive_norm2(norm2) -> Fraction:
    norm2 = as_scalar(norm2)
    if norm2 <= 0:
        raise ValueError(f"norm2 must be positive, got {norm2}")
    return norm2


def v_closed_form(n: int, q, norm2) -> Fraction:
    """``v_n = |f|^{2n} sum_r (1+q)^r conv(n-1, r)``."""
    if n <= 0:
        raise ValueError("v_closed_form needs n >= 1")
    q, norm2 = check_q(q), _positive_norm2(norm2)
    a = 1 + q
    m = n - 1
    total = sum((a**r * catalan_convolution(m, r) for r in range(m + 1)), Fraction(0))
    return norm2**n * total


def u_by_recursion(N: int, q, norm2) -> MomentTable:
    if N < 0:
        raise ValueError("N must be >= 0")
    q, norm2 = check_q(q), _positive_norm2(norm2)
    v = [Fraction(1)] + [v_closed_form(k, q, norm2) for k in range(1, N + 1)]
    u = [Fraction(1)]
    for n in range(1, N + 1):
        u.append(sum((v[k] * u[n - k] for k in range(1, n + 1)), Fraction(0)))
    return MomentTable(q, norm2, tuple(u), tuple(v))


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def vector_with_norm2(norm2) -> TestVector:
    """A rational vector with the requested squared norm.

    ``p/r`` is written as ``(p*r)/r^2`` and ``p*r`` as a sum of at most four
    squares, using as few coordinates as possible.
    """
    norm2 = _positive_norm2(norm2)
    p, r = norm2.numerator, norm2.denominator
    target = p * r
    for k in range(1, 5):
        found = _squares(target, k)
        if found is not None:
            return TestVector(Fraction(c, r) for c in found)
    raise AssertionError("four-square decomposition failed")  # unreachable


def _squares(n: int, k: int):
    if k == 1:
        return (math.isqrt(n),) if _is_square(n) else None
    a = math.isqrt(n)
    while a >= 1:
        rest = _squares(n - a * a, k - 1)
        if rest is not None:
            return (a,) + rest
        a -= 1
    return None


def _single_vector(f) -> TestVector:
    return f if isinstance(f, TestVector) else vector_with_norm2(f)


def u_by_simulator(n: int, q, f, *, restricted: bool = True) -> Fraction:
    """Expand ``Q(f)^{2n}`` over sign words and evaluate each exactly.

    ``f`` is a :class:`TestVector` or a squared norm (a vector is then
    chosen by :func:`vector_with_norm2`).  ``restricted`` skips words whose
    sign sequence cannot contribute; ``restricted=False`` simulates all
    ``4^n`` words.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    q = check_q(q)
    f = _single_vector(f)
    if restricted:
        words = (e.values for e in enumerate_epsilon_plus(n))
    else:
        words = product((-1, 1), repeat=2 * n)
    return sum(
        (vacuum_expectation(OperatorWord.from_signs(w, [f]), q, shortcut=restricted) for w in words),
        Fraction(0),
    )


def odd_moment_by_simulator(n: int, q, f) -> Fraction:
    """``<Phi, Q(f)^{2n+1} Phi>`` over all sign words, no screening."""
    q = check_q(q)
    f = _single_vector(f)
    return sum(
        (
            vacuum_expectation(OperatorWord.from_signs(w, [f]), q, shortcut=False)
            for w in product((-1, 1), repeat=2 * n + 1)
        ),
        Fraction(0),
    )


def v_by_simulator(n: int, q, f) -> Fraction:
    """``sum over e in {-1,1}^{2(n-1)}_+ of <Phi, A(f) A^e(f)... A+(f) Phi>``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    q = check_q(q)
    f = _single_vector(f)
    return sum(
        (
            vacuum_expectation(OperatorWord.from_signs((-1,) + e.values + (1,), [f]), q)
            for e in enumerate_epsilon_plus(n - 1)
        ),
        Fraction(0),
    )


def jacobi_operator(N: int, q, norm2) -> JacobiOperator:
    q, norm2 = check_q(q), _positive_norm2(norm2)
    weights = [norm2 if k != 2 else (1 + q) * norm2 for k in range(1, N + 1)]
    return JacobiOperator(tuple(weights))


def u_by_jacobi(N: int, q, norm2) -> list[Fraction]:
    """``u_0..u_N`` as weighted Dyck-path sums.

    A path of length 2n picks up ``omega_h`` for every up-step to height h;
    this is ``e_0^T J^{2n} e_0`` with the square roots paired off.  Heights
    are capped at N, which never cuts a path of length <= 2N.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    w = jacobi_operator(N, q, norm2).weights
    top = N
    paths = [Fraction(1)] + [Fraction(0)] * top
    u = [Fraction(1)]
    for step in range(1, 2 * N + 1):
        nxt = [Fraction(0)] * (top + 1)
        for h, c in enumerate(paths):
            if not c:
                continue
            if h < top:
                nxt[h + 1] += c * w[h]
            if h > 0:
                nxt[h - 1] += c
        paths = nxt
        if step % 2 == 0:
            u.append(paths[0])
    return u


def v_from_u(u) -> list[Fraction]:
    """Invert the renewal recursion ``u_n = sum_k v_k u_{n-k}``."""
    v = [Fraction(1)]
    for n in range(1, len(u)):
        v.append(u[n] - sum((v[k] * u[n - k] for k in range(1, n)), Fraction(0)))
    return v


def moment_table(N: int, q, norm2, method: str = "closed") -> MomentTable:
    """Moment table by one route, or by all three with a cross-check.

    ``method="all"`` raises :class:`MomentDisagreement` at the first index
    where the routes differ.
    """
    q, norm2 = check_q(q), _positive_norm2(norm2)
    if method == "closed":
        return u_by_recursion(N, q, norm2)
    if method == "jacobi":
        u = u_by_jacobi(N, q, norm2)
        return MomentTable(q, norm2, tuple(u), tuple(v_from_u(u)))
    if method == "simulator":
        f = vector_with_norm2(norm2)
        u = [u_by_simulator(n, q, f) for n in range(N + 1)]
        v = [Fraction(1)] + [v_by_simulator(n, q, f) for n in range(1, N + 1)]
        return MomentTable(q, norm2, tuple(u), tuple(v))
    if method == "all":
        tables = {m: moment_table(N, q, norm2, m) for m in ("closed", "simulator", "jacobi")}
        for n in range(N + 1):
            us = {m: t.u[n] for m, t in tables.items()}
            vs = {m: t.v[n] for m, t in tables.items()}
            if len(set(us.values())) > 1:
                raise MomentDisagreement(n, {f"u[{m}]": x for m, x in us.items()})
            if len(set(vs.values())) > 1:
                raise MomentDisagreement(n, {f"v[{m}]": x for m, x in vs.items()})
        return tables["closed"]
    raise ValueError(f"unknown method {method!r}")
