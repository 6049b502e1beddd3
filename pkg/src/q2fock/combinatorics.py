"""Sign sequences, pair partitions and Catalan identities.

Positions are 1-based.  A sign sequence ``e`` of length 2n lies in
``{-1,1}^{2n}_+`` when it sums to zero and every suffix sum is non-negative;
reading left to right, ``-1`` opens a pair and ``+1`` closes one.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import comb, prod
from typing import Iterable, Iterator, Sequence

__all__ = [
    "EpsilonSequence",
    "PairPartition",
    "enumerate_epsilon_plus",
    "enumerate_epsilon_plus_star",
    "ncpp_of_epsilon",
    "epsilon_of_ncpp",
    "enumerate_pp",
    "pp_count_formula",
    "depth_profile",
    "restricted_partitions",
    "restricted_union",
    "restricted_total",
    "all_pair_partitions",
    "enumerate_ncpp",
    "catalan",
    "catalan_convolution",
    "catalan_convolution_direct",
    "catalan_convolution_closed",
    "catalan_convolution_series",
    "brute_force_pp_counts",
    "all_sign_sequences",
]


@dataclass(frozen=True)
class EpsilonSequence:
    values: tuple[int, ...]

    def __init__(self, values: Iterable[int]):
        values = tuple(int(v) for v in values)
        if any(v not in (-1, 1) for v in values):
            raise ValueError("entries must be -1 or +1")
        if len(values) % 2:
            raise ValueError("sequence length must be even")
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    @property
    def n(self) -> int:
        return len(self.values) // 2

    def suffix_sums(self) -> list[int]:
        """``sum_{h=p}^{2n} e(h)`` for p = 1..2n."""
        out, acc = [], 0
        for v in reversed(self.values):
            acc += v
            out.append(acc)
        return out[::-1]

    @property
    def is_plus(self) -> bool:
        sums = self.suffix_sums()
        return (not sums or sums[0] == 0) and all(s >= 0 for s in sums)

    @property
    def is_plus_star(self) -> bool:
        if not self.is_plus or not self.values:
            return False
        return all(s > 0 for s in self.suffix_sums()[1:])


@dataclass(frozen=True)
class PairPartition:
    """Pairs ``(l_h, r_h)`` with ``l_h < r_h``, sorted by ``l``."""

    pairs: tuple[tuple[int, int], ...]

    def __init__(self, pairs: Iterable[Sequence[int]]):
        pairs = tuple(sorted((int(l), int(r)) for l, r in pairs))
        points = sorted(p for pair in pairs for p in pair)
        if points != list(range(1, 2 * len(pairs) + 1)):
            raise ValueError(f"{pairs} does not partition 1..{2 * len(pairs)}")
        if any(l >= r for l, r in pairs):
            raise ValueError("each pair needs l < r")
        object.__setattr__(self, "pairs", pairs)

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def is_noncrossing(self) -> bool:
        for i, (l1, r1) in enumerate(self.pairs):
            for l2, r2 in self.pairs[i + 1:]:
                if (l1 < l2 < r1) != (l1 < r2 < r1):
                    return False
        return True

    def respects(self, e: EpsilonSequence) -> bool:
        vals = e.values
        return len(vals) == 2 * len(self.pairs) and all(
            vals[l - 1] == -1 and vals[r - 1] == 1 for l, r in self.pairs
        )

    def sort_key(self) -> tuple[int, ...]:
        return tuple(p for pair in self.pairs for p in pair)


def _as_eps(e) -> EpsilonSequence:
    return e if isinstance(e, EpsilonSequence) else EpsilonSequence(e)


def _require_plus(e: EpsilonSequence):
    if not e.is_plus:
        raise ValueError(f"{e.values} is not in {{-1,1}}^2n_+")


def _plus_sequences(n: int, strict: bool) -> Iterator[tuple[int, ...]]:
    # prefix sums stay <= 0 (< 0 strictly inside for the star variant);
    # -1 is tried first, which gives lexicographic order
    length = 2 * n
    seq: list[int] = []

    def walk(pos: int, prefix: int):
        if pos == length:
            if prefix == 0:
                yield tuple(seq)
            return
        remaining = length - pos
        for v in (-1, 1):
            nxt = prefix + v
            if nxt > 0 or -nxt > remaining - 1:
                continue
            if strict and nxt == 0 and pos + 1 < length:
                continue
            seq.append(v)
            yield from walk(pos + 1, nxt)
            seq.pop()

    yield from walk(0, 0)


def enumerate_epsilon_plus(n: int) -> list[EpsilonSequence]:
    if n < 0:
        raise ValueError("n must be >= 0")
    return [EpsilonSequence(s) for s in _plus_sequences(n, strict=False)]


def enumerate_epsilon_plus_star(n: int) -> list[EpsilonSequence]:
    if n < 1:
        raise ValueError("n must be >= 1")
    return [EpsilonSequence(s) for s in _plus_sequences(n, strict=True)]


def ncpp_of_epsilon(e) -> PairPartition:
    """The unique non-crossing partition respecting ``e`` (stack matching)."""
    e = _as_eps(e)
    _require_plus(e)
    stack, pairs = [], []
    for pos, v in enumerate(e.values, start=1):
        if v == -1:
            stack.append(pos)
        else:
            pairs.append((stack.pop(), pos))
    return PairPartition(pairs)


def epsilon_of_ncpp(p: PairPartition) -> EpsilonSequence:
    if not p.is_noncrossing:
        raise ValueError("partition is crossing")
    vals = [0] * (2 * len(p))
    for l, r in p.pairs:
        vals[l - 1], vals[r - 1] = -1, 1
    return EpsilonSequence(vals)


def enumerate_pp(e) -> list[PairPartition]:
    """Every pair partition with openers exactly at the ``-1`` positions."""
    e = _as_eps(e)
    if not e.is_plus:
        return []
    out: list[tuple[tuple[int, int], ...]] = []
    pairs: list[tuple[int, int]] = []

    def walk(pos: int, open_: list[int]):
        if pos > len(e):
            out.append(tuple(sorted(pairs)))
            return
        if e.values[pos - 1] == -1:
            open_.append(pos)
            walk(pos + 1, open_)
            open_.pop()
            return
        for k, l in enumerate(open_):
            pairs.append((l, pos))
            walk(pos + 1, open_[:k] + open_[k + 1:])
            pairs.pop()

    walk(1, [])
    parts = [PairPartition(p) for p in out]
    return sorted(parts, key=PairPartition.sort_key)


def pp_count_formula(e) -> int:
    """``prod_h (2h - l_h)`` over the pairs of the non-crossing partition."""
    theta = ncpp_of_epsilon(e)
    return prod(2 * h - l for h, (l, _) in enumerate(theta.pairs, start=1))


def depth_profile(p: PairPartition) -> tuple[int, ...]:
    """Number of pairs strictly enclosing each pair (non-crossing only)."""
    if not p.is_noncrossing:
        raise ValueError("depth is only defined for non-crossing partitions")
    return tuple(
        sum(1 for lk, rk in p.pairs if lk < l and r < rk) for l, r in p.pairs
    )


def _perfect_matchings(points: Sequence[int]) -> Iterator[list[tuple[int, int]]]:
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for k, partner in enumerate(rest):
        for tail in _perfect_matchings(rest[:k] + rest[k + 1:]):
            yield [(first, partner)] + tail


def restricted_partitions(e) -> list[PairPartition]:
    """Keep the depth >= 2 pairs of theta(e); re-pair the shallow points freely."""
    e = _as_eps(e)
    _require_plus(e)
    theta = ncpp_of_epsilon(e)
    depths = depth_profile(theta)
    deep = [pair for pair, dep in zip(theta.pairs, depths) if dep >= 2]
    shallow = sorted(p for pair, dep in zip(theta.pairs, depths) if dep < 2 for p in pair)
    parts = [PairPartition(deep + m) for m in _perfect_matchings(shallow)]
    return sorted(parts, key=PairPartition.sort_key)


def restricted_union(n: int) -> set[PairPartition]:
    """Union of the restricted sets over all of ``{-1,1}^{2n}_+``."""
    out: set[PairPartition] = set()
    for e in enumerate_epsilon_plus(n):
        out.update(restricted_partitions(e))
    return out


def restricted_total(n: int) -> int:
    """``sum_e |P_n(e)|`` over ``{-1,1}^{2n}_+``; counts (e, partition) pairs."""
    return sum(len(restricted_partitions(e)) for e in enumerate_epsilon_plus(n))


def all_pair_partitions(n: int) -> list[PairPartition]:
    """Every pair partition of 1..2n; (2n-1)!! of them."""
    return sorted(
        (PairPartition(m) for m in _perfect_matchings(list(range(1, 2 * n + 1)))),
        key=PairPartition.sort_key,
    )


def enumerate_ncpp(n: int) -> list[PairPartition]:
    """Non-crossing pair partitions built recursively: 1 pairs with an even 2k."""

    def build(lo: int, hi: int) -> list[list[tuple[int, int]]]:
        if lo > hi:
            return [[]]
        out = []
        for partner in range(lo + 1, hi + 1, 2):
            for inner in build(lo + 1, partner - 1):
                for outer in build(partner + 1, hi):
                    out.append([(lo, partner)] + inner + outer)
        return out

    return sorted((PairPartition(p) for p in build(1, 2 * n)), key=PairPartition.sort_key)


def catalan(n: int) -> int:
    if n < 0:
        raise ValueError("n must be >= 0")
    return comb(2 * n, n) // (n + 1)


def _check_conv_args(n: int, r: int):
    if n < 0 or r < 0 or r > n:
        raise ValueError(f"need 0 <= r <= n, got n={n}, r={r}")


@lru_cache(maxsize=None)
def _compositions_sum(m: int, r: int) -> int:
    # sum over i_1 + ... + i_r = m of C_{i_1}...C_{i_r}, peeling off i_1
    if r == 0:
        return 1 if m == 0 else 0
    return sum(catalan(i) * _compositions_sum(m - i, r - 1) for i in range(m + 1))


def catalan_convolution_direct(n: int, r: int) -> int:
    _check_conv_args(n, r)
    if r == 0:
        return 1 if n == 0 else 0
    return _compositions_sum(n - r, r)


def catalan_convolution_closed(n: int, r: int) -> int:
    """``r/(2n-r) * C(2n-r, n)``; undefined only at ``n = r = 0``."""
    _check_conv_args(n, r)
    if n == 0:
        raise ValueError("closed form is 0/0 at n = r = 0")
    num = r * comb(2 * n - r, n)
    q, rem = divmod(num, 2 * n - r)
    if rem:
        raise ArithmeticError(f"closed form not integral at n={n}, r={r}")
    return q


def catalan_convolution_series(n: int, r: int) -> int:
    """Coefficient of ``x^(n-r)`` in the truncated series ``C(x)^r``."""
    _check_conv_args(n, r)
    if r == 0:
        return 1 if n == 0 else 0
    m = n - r
    base = [catalan(k) for k in range(m + 1)]
    acc = [1] + [0] * m
    for _ in range(r):
        acc = [sum(acc[i] * base[k - i] for i in range(k + 1)) for k in range(m + 1)]
    return acc[m]


def catalan_convolution(n: int, r: int) -> int:
    """Direct convolution sum, cross-checked against the binomial form."""
    direct = catalan_convolution_direct(n, r)
    if n > 0:
        closed = catalan_convolution_closed(n, r)
        if closed != direct:
            raise ArithmeticError(
                f"Catalan convolution mismatch at n={n}, r={r}: direct {direct}, closed {closed}"
            )
    return direct


def brute_force_pp_counts(n: int) -> dict[tuple[int, ...], int]:
    """Bucket every pair partition of 1..2n by the sign sequence it induces."""
    counts: dict[tuple[int, ...], int] = {}
    for p in _perfect_matchings(list(range(1, 2 * n + 1))):
        vals = [0] * (2 * n)
        for l, r in p:
            vals[l - 1], vals[r - 1] = -1, 1
        key = tuple(vals)
        counts[key] = counts.get(key, 0) + 1
    return counts


def all_sign_sequences(length: int) -> Iterator[tuple[int, ...]]:
    return product((-1, 1), repeat=length)
