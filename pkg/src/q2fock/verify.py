"""Named registry of every library invariant.

Each check returns ``(ok, discrepancy)``; the discrepancy is a float for
numerical checks and ``0`` or a short description for exact ones.  Checks
are deterministic: randomized ones draw from a seeded generator.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from q2fock import combinatorics as comb
from q2fock import distribution as dist
from q2fock import moments as mom
from q2fock.fock import (
    FockState,
    OperatorWord,
    TestVector,
    annihilate,
    apply_word,
    create,
    operator_norm_squared,
    project_low,
    state_inner,
    vacuum_expectation,
)

__all__ = [
    "Invariant",
    "REGISTRY",
    "run_all",
    "random_vector",
    "random_state",
    "random_word_case",
    "Q_GRID",
    "NORM2_GRID",
    "FIELD_Q_GRID",
    "FIELD_NORM_GRID",
]

Result = tuple[bool, object]

Q_GRID = tuple(Fraction(x) for x in ("-1", "-1/2", "0", "1/2", "1"))
NORM2_GRID = tuple(Fraction(x) for x in ("1/4", "1", "9/4"))
FIELD_Q_GRID = (-0.75, -0.25, 0.25, 0.5, 0.75, 1.0)
FIELD_NORM_GRID = (0.5, 1.0)
A_GRID_ABOVE_ONE = tuple(1 + k / 50 for k in range(1, 51))
STIELTJES_T = (-0.5, -0.25, 0.25, 0.5)
SEED = 20240611


@dataclass(frozen=True)
class Invariant:
    name: str
    module: str
    check: Callable[[], Result]


REGISTRY: dict[str, Invariant] = {}


def _register(name: str, module: str):
    def deco(fn):
        REGISTRY[name] = Invariant(name, module, fn)
        return fn
    return deco


# -- random operator-level cases ---------------------------------------------

_SMALL = (Fraction(-2), Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 3), Fraction(1), Fraction(3, 2))
_QS = (Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1))


def random_vector(rng: random.Random, d: int) -> TestVector:
    while True:
        v = TestVector(rng.choice(_SMALL) for _ in range(d))
        if v.norm2():
            return v


def random_state(rng: random.Random, d: int, bound: int, top: int, terms: int = 4) -> FockState:
    out = {}
    for _ in range(terms):
        level = rng.randint(0, top)
        key = tuple(rng.randrange(d) for _ in range(level))
        out[key] = rng.choice(_SMALL)
    return FockState(d, bound, out)


def random_word_case(rng: random.Random, *, max_d: int = 3, max_len: int = 8):
    """``(q, d, word)`` with a random sign pattern and random vectors."""
    d = rng.randint(1, max_d)
    length = rng.randint(0, max_len)
    vectors = [random_vector(rng, d) for _ in range(length or 1)]
    signs = [rng.choice((-1, 1)) for _ in range(length)]
    if length:
        word = OperatorWord.from_signs(signs, vectors)
    else:
        word = OperatorWord((), vectors)
    return rng.choice(_QS), d, word


def _random_plus_word(rng: random.Random, n: int, d: int) -> OperatorWord:
    seqs = comb.enumerate_epsilon_plus(n)
    e = rng.choice(seqs)
    vectors = [random_vector(rng, d) for _ in range(2 * n)]
    return OperatorWord.from_signs(e.values, vectors)


def _first_failure(cases: Iterator[tuple[bool, object]]) -> Result:
    for ok, info in cases:
        if not ok:
            return False, info
    return True, 0


# -- fock_core ----------------------------------------------------------------

@_register("fock.adjointness", "fock_core")
def check_adjointness(cases: int = 200) -> Result:
    rng = random.Random(SEED)

    def gen():
        for _ in range(cases):
            d = rng.randint(1, 3)
            q = rng.choice(_QS)
            bound = rng.randint(1, 4)
            f = random_vector(rng, d)
            s = random_state(rng, d, bound, bound - 1)
            t = random_state(rng, d, bound, bound)
            lhs = state_inner(create(f, s), t, q)
            rhs = state_inner(s, annihilate(f, t, q), q)
            yield lhs == rhs, f"q={q} lhs={lhs} rhs={rhs}"

    return _first_failure(gen())


@_register("fock.linearity", "fock_core")
def check_linearity(cases: int = 100) -> Result:
    rng = random.Random(SEED + 1)

    def gen():
        for _ in range(cases):
            d = rng.randint(1, 3)
            q = rng.choice(_QS)
            bound = rng.randint(1, 4)
            f = random_vector(rng, d)
            s = random_state(rng, d, bound, bound - 1)
            t = random_state(rng, d, bound, bound - 1)
            a, b = rng.choice(_SMALL), rng.choice(_SMALL)
            combo = s.scaled(a) + t.scaled(b)
            ok = create(f, combo) == create(f, s).scaled(a) + create(f, t).scaled(b)
            ok = ok and annihilate(f, combo, q) == (
                annihilate(f, s, q).scaled(a) + annihilate(f, t, q).scaled(b)
            )
            yield ok, f"q={q} a={a} b={b}"

    return _first_failure(gen())


@_register("fock.sign_balance_vanishing", "fock_core")
def check_sign_balance(cases: int = 200) -> Result:
    rng = random.Random(SEED + 2)

    def gen():
        for _ in range(cases):
            q, _, w = random_word_case(rng)
            full = vacuum_expectation(w, q, shortcut=False)
            plus = len(w) % 2 == 0 and comb.EpsilonSequence(w.signs).is_plus
            if plus:
                yield full == vacuum_expectation(w, q), f"signs={w.signs}"
            else:
                yield full == 0, f"signs={w.signs} value={full}"

    return _first_failure(gen())


def _kappa(w: OperatorWord) -> Fraction:
    theta = comb.ncpp_of_epsilon(w.signs)
    out = Fraction(1)
    for l, r in theta.pairs:
        out *= w.vectors[w.letters[l - 1][1]].dot(w.vectors[w.letters[r - 1][1]])
    return out


@_register("fock.scalar_action", "fock_core")
def check_scalar_action(cases: int = 200) -> Result:
    rng = random.Random(SEED + 3)

    def gen():
        for _ in range(cases):
            d = rng.randint(1, 3)
            n = rng.randint(1, 4)
            q = rng.choice(_QS)
            r = rng.randint(2, 4)
            w = _random_plus_word(rng, n, d)
            key = tuple(rng.randrange(d) for _ in range(r))
            s = FockState(d, r + n, {key: 1})
            got = apply_word(w, s, q)
            kappa = _kappa(w)
            yield got == s.scaled(kappa), f"signs={w.signs} key={key} kappa={kappa}"

    return _first_failure(gen())


@_register("fock.commutation_pairing", "fock_core")
def check_commutation(cases: int = 200) -> Result:
    rng = random.Random(SEED + 4)

    def gen():
        for _ in range(cases):
            d = rng.randint(1, 3)
            q = rng.choice(_QS)
            f, g = random_vector(rng, d), random_vector(rng, d)
            rs, rt = rng.randint(0, 3), rng.randint(0, 3)
            bound = max(rs, rt) + 1
            s = FockState(d, bound, {tuple(rng.randrange(d) for _ in range(rs)): 1})
            t = FockState(d, bound, {tuple(rng.randrange(d) for _ in range(rt)): 1})
            lhs = state_inner(t, annihilate(f, create(g, s), q), q) - q * state_inner(
                project_low(t), create(g, annihilate(f, s, q)), q
            )
            rhs = f.dot(g) * state_inner(t, s, q)
            yield lhs == rhs, f"q={q} s={s} t={t} lhs={lhs} rhs={rhs}"

    return _first_failure(gen())


@_register("fock.level_invariance", "fock_core")
def check_level_invariance(cases: int = 100) -> Result:
    rng = random.Random(SEED + 5)

    def gen():
        for _ in range(cases):
            d = rng.randint(1, 3)
            q = rng.choice(_QS)
            n = rng.randint(1, 3)
            r = rng.randint(0, 3)
            signs = [1] * n + [-1] * n
            rng.shuffle(signs)
            w = OperatorWord.from_signs(signs, [random_vector(rng, d) for _ in signs])
            s = FockState(d, r + n, {tuple(rng.randrange(d) for _ in range(r)): 1})
            out = apply_word(w, s, q)
            yield set(out.levels) <= {r}, f"signs={signs} r={r} levels={out.levels}"

    return _first_failure(gen())


@_register("fock.operator_norm", "fock_core")
def check_operator_norm() -> Result:
    cases = [
        (Fraction(1, 2), TestVector([1]), Fraction(3, 2)),
        (Fraction(-1, 2), TestVector([1]), Fraction(1)),
        (Fraction(0), TestVector([2]), Fraction(4)),
        (Fraction(1), TestVector([1, 1]), Fraction(4)),
        (Fraction(1, 3), TestVector([1, 0, 1]), Fraction(8, 3)),
    ]
    for q, f, want in cases:
        got = operator_norm_squared(f, q)
        if got != want:
            return False, f"q={q} f={f} got={got} want={want}"
    return True, 0


# -- combinatorics --------------------------------------------------------------

@_register("combinatorics.epsilon_plus_count", "combinatorics")
def check_eps_plus_count() -> Result:
    for n in range(0, 9):
        got = len(comb.enumerate_epsilon_plus(n))
        if got != comb.catalan(n):
            return False, f"n={n} got {got}"
    return True, 0


@_register("combinatorics.epsilon_plus_star", "combinatorics")
def check_eps_plus_star() -> Result:
    for n in range(1, 9):
        star = comb.enumerate_epsilon_plus_star(n)
        if len(star) != comb.catalan(n - 1):
            return False, f"n={n} count {len(star)}"
        stripped = [comb.EpsilonSequence(e.values[1:-1]) for e in star]
        if stripped != comb.enumerate_epsilon_plus(n - 1):
            return False, f"n={n} stripping mismatch"
    return True, 0


@_register("combinatorics.unique_noncrossing", "combinatorics")
def check_unique_noncrossing() -> Result:
    for n in range(0, 7):
        for e in comb.enumerate_epsilon_plus(n):
            nc = [p for p in comb.enumerate_pp(e) if p.is_noncrossing]
            if nc != [comb.ncpp_of_epsilon(e)]:
                return False, f"e={e.values}"
    return True, 0


@_register("combinatorics.pp_count_formula", "combinatorics")
def check_pp_count() -> Result:
    for n in range(0, 7):
        brute = comb.brute_force_pp_counts(n)
        for signs in comb.all_sign_sequences(2 * n):
            e = comb.EpsilonSequence(signs)
            count = len(comb.enumerate_pp(e))
            if count != brute.get(signs, 0):
                return False, f"e={signs} enumerate {count} brute {brute.get(signs, 0)}"
            if e.is_plus and count != comb.pp_count_formula(e):
                return False, f"e={signs} formula {comb.pp_count_formula(e)}"
    return True, 0


@_register("combinatorics.ncpp_bijection", "combinatorics")
def check_ncpp_bijection() -> Result:
    for n in range(0, 9):
        image = {comb.ncpp_of_epsilon(e) for e in comb.enumerate_epsilon_plus(n)}
        ncpp = comb.enumerate_ncpp(n)
        if image != set(ncpp) or len(ncpp) != comb.catalan(n):
            return False, f"n={n}"
        for p in ncpp:
            if comb.ncpp_of_epsilon(comb.epsilon_of_ncpp(p)) != p:
                return False, f"round trip failed at {p.pairs}"
    return True, 0


@_register("combinatorics.restricted_sets", "combinatorics")
def check_restricted() -> Result:
    for n in range(0, 6):
        for e in comb.enumerate_epsilon_plus(n):
            theta = comb.ncpp_of_epsilon(e)
            deep = {p for p, dep in zip(theta.pairs, comb.depth_profile(theta)) if dep >= 2}
            parts = comb.restricted_partitions(e)
            if theta not in parts:
                return False, f"theta missing for {e.values}"
            if any(not deep <= set(p.pairs) for p in parts):
                return False, f"deep pair dropped for {e.values}"
            shallow = 2 * n - 2 * len(deep)
            if len(parts) != math.prod(range(shallow - 1, 0, -2)):
                return False, f"count {len(parts)} for {e.values}"
    return True, 0


@_register("combinatorics.convolution_series", "combinatorics")
def check_convolution() -> Result:
    for n in range(0, 11):
        for r in range(0, n + 1):
            direct = comb.catalan_convolution_direct(n, r)
            if direct != comb.catalan_convolution_series(n, r):
                return False, f"(n, r)=({n}, {r})"
            if n and direct != comb.catalan_convolution_closed(n, r):
                return False, f"closed form at (n, r)=({n}, {r})"
    return True, 0


# -- moments --------------------------------------------------------------------

@_register("moments.triple_agreement", "moments")
def check_triple(max_n: int = 5) -> Result:
    for q in Q_GRID:
        for norm2 in NORM2_GRID:
            try:
                mom.moment_table(max_n, q, norm2, "all")
            except mom.MomentDisagreement as exc:
                return False, f"q={q} norm2={norm2}: {exc}"
    return True, 0


@_register("moments.v_agreement", "moments")
def check_v(max_n: int = 5) -> Result:
    for q in Q_GRID:
        for norm2 in NORM2_GRID:
            f = mom.vector_with_norm2(norm2)
            for n in range(1, max_n + 1):
                a, b = mom.v_closed_form(n, q, norm2), mom.v_by_simulator(n, q, f)
                if a != b:
                    return False, f"q={q} norm2={norm2} n={n}: {a} vs {b}"
    return True, 0


@_register("moments.positivity", "moments")
def check_positivity() -> Result:
    for q in Q_GRID[1:]:
        for norm2 in NORM2_GRID:
            if any(u <= 0 for u in mom.u_by_recursion(8, q, norm2).u):
                return False, f"q={q} norm2={norm2}"
    return True, 0


@_register("moments.scaling", "moments")
def check_scaling() -> Result:
    for q in Q_GRID:
        base = mom.u_by_recursion(8, q, 1).u
        for c in (Fraction(1, 4), Fraction(9, 4), Fraction(7, 3)):
            scaled = mom.u_by_recursion(8, q, c).u
            if any(s != c**n * b for n, (s, b) in enumerate(zip(scaled, base))):
                return False, f"q={q} c={c}"
    return True, 0


@_register("moments.odd_vanish", "moments")
def check_odd() -> Result:
    for q in Q_GRID:
        for n in range(0, 4):
            value = mom.odd_moment_by_simulator(n, q, TestVector([1, 1]))
            if value != 0:
                return False, f"q={q} n={n} value={value}"
    return True, 0


# -- distribution ------------------------------------------------------------------

@_register("distribution.h_sign", "distribution")
def check_h_sign() -> Result:
    grid = [(k + 0.5) / 1000 for k in range(1000)]
    for a in (0.25, 0.5, 0.75, 0.9):
        bound = (a**3 + 3 * a * a) / (64 * (1 - a))
        wide = [-3 + 6 * x for x in grid]
        low = min(dist.aux_functions(a, x)[1] for x in wide + grid)
        if low < bound * (1 - 1e-12):
            return False, f"a={a} min h {low} below {bound}"
    for a in (1.25, 1.5, 1.75, 2.0):
        high = max(dist.aux_functions(a, x)[1] for x in grid)
        if not high < 0:
            return False, f"a={a} max h {high}"
    return True, 0


@_register("distribution.root_identities", "distribution")
def check_roots() -> Result:
    worst = 0.0
    for a in A_GRID_ABOVE_ONE:
        p = dist.spectral_params(a)
        if not 0 < p.a2 < p.a1 or p.a1 < 1 - 1e-15:
            return False, f"ordering fails at a={a}"
        errs = (
            p.a1 * p.a2 - 1 / (16 * (a - 1)),
            p.a1 - p.a2 - (a + 2) / 4,
            p.a1 + p.a2 - a * math.sqrt(a + 3) / (4 * math.sqrt(a - 1)),
        )
        worst = max(worst, *(abs(e) for e in errs))
    return worst <= 1e-12, worst


@_register("distribution.root_products", "distribution")
def check_root_products() -> Result:
    worst = 0.0
    for a in A_GRID_ABOVE_ONE:
        p = dist.spectral_params(a)
        a1, a2 = p.a1, p.a2
        e1 = (a1 * a2 + a1) * (a1 * a2 - a2) - (a - 1.5) ** 2 / (64 * (a - 1) ** 2)
        e2 = a1 * a1 + a2 * a2 - (a * a * (a + 3) - 2) / (16 * (a - 1))
        lhs = math.sqrt((a2 + 1) / a2) - math.sqrt(max(a1 - 1, 0.0) / a1)
        rhs = 2 * a * math.sqrt((a - 1) * (a + 3)) / math.sqrt(a * a + a - 1.5 + abs(a - 1.5))
        worst = max(worst, abs(e1), abs(e2), abs(lhs - rhs))
    return worst <= 1e-12, worst


@_register("distribution.A_closed_forms", "distribution")
def check_A() -> Result:
    worst = 0.0
    for a in A_GRID_ABOVE_ONE:
        p = dist.spectral_params(a)
        if p.A1 < 0:
            return False, f"A1 negative at a={a}"
        worst = max(
            worst,
            abs(p.A1 - dist.A1_by_definition(a)),
            abs(p.A2 - dist.A2_by_definition(a)),
            abs(dist.A2_by_definition(a) - p.a2 * dist.A1_by_definition(a)),
        )
    return worst <= 1e-12, worst


@_register("distribution.g_partial_fractions", "distribution")
def check_partial_fractions() -> Result:
    worst = 0.0
    for a in A_GRID_ABOVE_ONE:
        p = dist.spectral_params(a)
        for k in range(1, 200):
            x = k / 200
            g, _ = dist.aux_functions(a, x)
            pf = (1 / (p.a1 + p.a2)) * (1 / (p.a1 - x) + 1 / (p.a2 + x)) * math.sqrt((1 - x) / x)
            worst = max(worst, abs(-g - pf) / abs(pf))
    return worst <= 1e-10, worst


@_register("distribution.stieltjes_atomic", "distribution")
def check_stieltjes_atomic() -> Result:
    worst = 0.0
    for a in (1.25, 1.5, 1.75, 2.0):
        for t in STIELTJES_T:
            worst = max(worst, abs(dist.q2_stieltjes(a, t) - dist.mgf_S(a, t)))
    return worst <= 1e-7, worst


@_register("distribution.stieltjes_continuous", "distribution")
def check_stieltjes_continuous() -> Result:
    worst = 0.0
    for a in (0.25, 0.5, 0.75):
        for t in STIELTJES_T:
            worst = max(worst, abs(dist.q2_stieltjes(a, t) - dist.mgf_S(a, t)))
    return worst <= 1e-7, worst


@_register("distribution.moment_chain", "distribution")
def check_moment_chain(max_n: int = 5) -> Result:
    worst = 0.0
    for q in FIELD_Q_GRID:
        for norm in FIELD_NORM_GRID:
            d = dist.field_distribution(q, norm)
            u = mom.u_by_recursion(max_n, Fraction(q), Fraction(norm) ** 2).u
            for n in range(max_n + 1):
                got = dist.quadrature_moment(d, 2 * n, tol=1e-11).value
                worst = max(worst, abs(got - float(u[n])))
    return worst <= 1e-6, worst


@_register("distribution.total_mass", "distribution")
def check_total_mass() -> Result:
    worst = 0.0
    for q in FIELD_Q_GRID:
        for norm in FIELD_NORM_GRID:
            d = dist.field_distribution(q, norm)
            worst = max(worst, abs(dist.total_mass(d, tol=1e-12).value - 1))
            if any(not 0 < at.w < 1 for at in d.atoms):
                return False, f"atom weight out of range at q={q}"
    return worst <= 1e-8, worst


@_register("distribution.mgf_taylor", "distribution")
def check_mgf_taylor() -> Result:
    for q in Q_GRID:
        for norm2 in NORM2_GRID:
            if dist.mgf_taylor(q, norm2, 10) != list(mom.u_by_recursion(10, q, norm2).u):
                return False, f"q={q} norm2={norm2}"
    return True, 0


@_register("distribution.mgf_S_matches_T", "distribution")
def check_mgf_s() -> Result:
    worst = 0.0
    for a in (0.25, 0.5, 1.0, 1.25, 1.5, 1.75, 2.0):
        for x in (-0.9, -0.5, -0.1, 0.1, 0.5, 0.9):
            worst = max(worst, abs(dist.mgf_S(a, x) - dist.mgf_T(a - 1, 0.25, x)))
    return worst <= 1e-12, worst


@_register("distribution.standard_integrals", "distribution")
def check_standard() -> Result:
    worst = 0.0
    for which, alphas in ((1, (-0.5, 0.25, 0.5)), (2, (0.125, 1.0))):
        for alpha in alphas:
            worst = max(
                worst,
                abs(dist.standard_integral_quadrature(which, alpha)
                    - dist.standard_integral_closed(which, alpha)),
            )
    return worst <= 1e-9, worst


def run_all(names=None, *, stop_on_failure: bool = True):
    """Yield ``(name, ok, discrepancy)`` in registry order."""
    for name, inv in REGISTRY.items():
        if names is not None and name not in names:
            continue
        try:
            ok, info = inv.check()
        except Exception as exc:  # a crash is a failed invariant, reported by name
            ok, info = False, f"{type(exc).__name__}: {exc}"
        yield name, ok, info
        if stop_on_failure and not ok:
            return
