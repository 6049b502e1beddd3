"""Moment-generating functions and the vacuum law of the field operator.

Notation: ``a = 1 + q`` and ``nu = |f|``.  The squared field ``Q(f)^2`` at
``nu = 1/2`` lives on ``(0, 1)`` (plus one atom above 1 when ``a > 3/2``);
the field itself is obtained by ``Q(f) = 2 nu Q(f / (2 nu))`` and the
symmetric square root.

Every density is integrated in an angle variable: ``x = sin^2(theta)`` for
the squared law and ``x = 2 nu sin(theta)`` for the field.  Both turn into

    pref * cos^2(theta) / D(sin^2(theta))

with ``D(y) = 1 + 4(a-1)(a+2) y - 16(a-1) y^2``, which is smooth on the
whole integration range.  For ``a > 1`` the denominator is evaluated in the
factored form ``16(a-1)((a1 - 1) + cos^2)(a2 + sin^2)`` so that the double
zero at the support edge for ``a = 3/2`` cancels exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from q2fock import _accel
from q2fock.quadrature import (
    DEFAULT_BUDGET,
    MODE_POWER,
    MODE_STIELTJES,
    QuadratureResult,
    integrate,
)

__all__ = [
    "DomainError",
    "Kind",
    "Atom",
    "SpectralParams",
    "FieldDistribution",
    "Q2Distribution",
    "mgf_T",
    "mgf_taylor",
    "mgf_S",
    "aux_functions",
    "spectral_params",
    "A1_by_definition",
    "A2_by_definition",
    "q2_distribution",
    "field_distribution",
    "quadrature_moment",
    "total_mass",
    "cdf",
    "q2_stieltjes",
    "standard_integral_closed",
    "standard_integral_quadrature",
]

HALF_PI = 0.5 * math.pi


class DomainError(ValueError):
    """Argument outside the domain where a formula is defined."""


def _real(v) -> float:
    if isinstance(v, str):
        return float(Fraction(v))
    return float(v)


def _check_q(q: float) -> float:
    q = _real(q)
    if not -1.0 <= q <= 1.0:
        raise DomainError(f"q must lie in [-1, 1], got {q}")
    return q


def _check_a(a: float) -> float:
    a = _real(a)
    if not 0.0 < a <= 2.0:
        raise DomainError(f"a must lie in (0, 2], got {a}")
    return a


# --------------------------------------------------------------------------
# moment-generating functions


def mgf_T(q, norm2, x) -> float:
    """Generating function ``sum_n u_n x^n`` of the even vacuum moments.

    Evaluated pointwise on ``|x| < 1/(4 norm2)``; at ``q = -1`` the formula
    collapses to ``1/(1 - norm2 x)`` and the disc widens to ``|x| < 1/norm2``.
    """
    q, norm2, x = _check_q(q), _real(norm2), _real(x)
    if norm2 <= 0:
        raise DomainError(f"norm2 must be positive, got {norm2}")
    radius = 1.0 / norm2 if q == -1.0 else 0.25 / norm2
    if abs(x) >= radius:
        raise DomainError(f"x = {x} outside |x| < {radius}")
    if q == -1.0:
        num = 2.0
    else:
        num = 1.0 - q + (1.0 + q) * math.sqrt(1.0 - 4.0 * norm2 * x)
    den = num - 2.0 * norm2 * x
    if num == 0.0 or den == 0.0:
        raise DomainError(f"generating function has a zero numerator or denominator at x = {x}")
    return num / den


def _exact(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def _binom_half(k: int) -> Fraction:
    c = Fraction(1)
    for j in range(k):
        c *= (Fraction(1, 2) - j) / (j + 1)
    return c


def mgf_taylor(q, norm2, N: int) -> list[Fraction]:
    """First ``N + 1`` Taylor coefficients of ``mgf_T`` in exact arithmetic.

    Floats are converted to the rational they represent exactly.
    """
    if N < 0:
        raise DomainError("N must be >= 0")
    q, norm2 = _exact(q), _exact(norm2)
    if not -1 <= q <= 1:
        raise DomainError(f"q must lie in [-1, 1], got {q}")
    if norm2 <= 0:
        raise DomainError(f"norm2 must be positive, got {norm2}")
    root = [_binom_half(k) * (-4 * norm2) ** k for k in range(N + 1)]
    num = [(1 + q) * c for c in root]
    num[0] += 1 - q
    den = list(num)
    if N >= 1:
        den[1] -= 2 * norm2
    out: list[Fraction] = []
    for n in range(N + 1):
        acc = num[n] - sum((out[j] * den[n - j] for j in range(n)), Fraction(0))
        out.append(acc / den[0])
    return out


def mgf_S(a, x) -> float:
    """Generating function of ``Q(f)^2`` at ``|f| = 1/2`` in rationalized form."""
    a, x = _check_a(a), _real(x)
    if x >= 1.0:
        raise DomainError(f"x must be < 1, got {x}")
    if x == 0.0:
        return 1.0
    if a == 1.0:
        # common factor x^2 cancelled; keeps tiny x from underflowing to 0/0
        return 2.0 / (1.0 + math.sqrt(1.0 - x))
    # 2ax sqrt(1-x) written as 2ax - 2ax^2/(1 + sqrt(1-x)) so nothing cancels near a = 1
    num = 16 * (a - 1) - 4 * (a - 1) * (a + 1) * x - 2 * a * x * x / (1 + math.sqrt(1 - x))
    den = 16 * (a - 1) - 4 * (a - 1) * (a + 2) * x - x * x
    if den == 0.0:
        raise DomainError(f"denominator vanishes at x = {x}")
    return num / den


def aux_functions(a, x) -> tuple[float, float]:
    """``(g_a(x), h_a(x))`` with ``h_a`` the quadratic in the density denominator."""
    a, x = _check_a(a), _real(x)
    if a == 1.0:
        raise DomainError("h_a is undefined at a = 1")
    h = x * x - (a + 2) / 4 * x - 1 / (16 * (a - 1))
    if not 0.0 < x < 1.0:
        return 0.0, h
    return math.sqrt(1 - x) / (math.sqrt(x) * h), h


# --------------------------------------------------------------------------
# spectral parameters


@dataclass(frozen=True)
class SpectralParams:
    a: float
    a1: float
    a2: float
    A1: float
    A2: float

    @property
    def atom_weight(self) -> float:
        """Mass of the atom of ``Q(f)^2`` at ``a1`` (``|f| = 1/2``)."""
        return self.A1 / (16 * (self.a - 1))


def _roots(a: float) -> tuple[float, float]:
    s = math.sqrt((a + 2) ** 2 + 4 / (a - 1))
    return (s + a + 2) / 8, (s - a - 2) / 8


def spectral_params(a) -> SpectralParams:
    a = _real(a)
    if not 1.0 < a <= 2.0:
        raise DomainError(f"spectral parameters need a in (1, 2], got {a}")
    a1, a2 = _roots(a)
    A1 = 0.0 if a <= 1.5 else 16 * (a - 1) * (1 - a / math.sqrt(a * a + 2 * a - 3))
    return SpectralParams(a, a1, a2, A1, a2 * A1)


def A1_by_definition(a) -> float:
    a = _real(a)
    if not 1.0 < a <= 2.0:
        raise DomainError(f"need a in (1, 2], got {a}")
    a1, a2 = _roots(a)
    return 16 * (a - 1) - 2 * a / (a1 + a2) * (
        math.sqrt((a2 + 1) / a2) - math.sqrt(max(a1 - 1, 0.0) / a1)
    )


def A2_by_definition(a) -> float:
    a = _real(a)
    if not 1.0 < a <= 2.0:
        raise DomainError(f"need a in (1, 2], got {a}")
    a1, a2 = _roots(a)
    return 2 * a / (a1 + a2) * (
        a2 * math.sqrt(max(a1 - 1, 0.0) / a1) + a1 * math.sqrt((a2 + 1) / a2)
    ) - 2 * (2 * a * a + a - 2)


# --------------------------------------------------------------------------
# distributions


class Kind(str, Enum):
    POINT_MASS = "point_mass"
    TWO_POINT = "two_point"
    SEMICIRCLE = "semicircle"
    ABSOLUTELY_CONTINUOUS = "absolutely_continuous"
    DENSITY_PLUS_ATOMS = "density_plus_atoms"


@dataclass(frozen=True)
class Atom:
    x: float
    w: float


@dataclass(frozen=True)
class _Family:
    """Parameters of ``pref * cos^2 / D(sin^2)`` on ``[lo, hi]``."""

    pref: float
    a: float
    a1: float
    a2: float
    factored: bool
    lo: float
    hi: float

    def denominator(self, y: float) -> float:
        """``D(y)``; ``cos^2`` is passed as ``1 - y`` in the factored form."""
        if self.factored:
            return 16 * (self.a - 1) * ((self.a1 - 1) + (1 - y)) * (self.a2 + y)
        return 1 + 4 * (self.a - 1) * (self.a + 2) * y - 16 * (self.a - 1) * y * y

    def integrate(self, mode: int, k: int, scale: float, t: float,
                  tol: float, budget: int, lo=None, hi=None) -> QuadratureResult:
        return _accel.integrate_family(
            self.pref, self.a, self.a1, self.a2, self.factored, mode, k, scale, t,
            self.lo if lo is None else lo, self.hi if hi is None else hi, tol, budget,
        )


def _family(a: float, pref: float, lo: float, hi: float) -> _Family:
    if a > 1.0:
        a1, a2 = _roots(a)
        # a1 >= 1 always; clamp rounding so (a1 - 1) + cos^2 never goes negative
        return _Family(pref, a, max(a1, 1.0), a2, True, lo, hi)
    return _Family(pref, a, 0.0, 0.0, False, lo, hi)


@dataclass(frozen=True)
class FieldDistribution:
    """Vacuum law of ``Q(f)`` for given ``q`` and ``|f|``."""

    kind: Kind
    q: float
    norm: float
    atoms: tuple[Atom, ...]

    @property
    def a(self) -> float:
        return 1.0 + self.q

    @property
    def has_density(self) -> bool:
        return self.kind not in (Kind.POINT_MASS, Kind.TWO_POINT)

    @property
    def support(self) -> tuple[float, float]:
        """Closed interval containing all mass, atoms included."""
        edge = 2 * self.norm if self.has_density else 0.0
        far = max([abs(at.x) for at in self.atoms] + [edge])
        return -far, far

    def _family(self) -> _Family:
        return _family(self.a, 2 * self.a / math.pi, -HALF_PI, HALF_PI)

    def density(self, x: float) -> float:
        if not self.has_density:
            return 0.0
        y = x / (2 * self.norm)
        if not -1.0 < y < 1.0:
            return 0.0
        fam = self._family()
        return self.a / (math.pi * self.norm) * math.sqrt(1 - y * y) / fam.denominator(y * y)

    def moment(self, k: int, tol: float = 1e-10, budget: int = DEFAULT_BUDGET) -> QuadratureResult:
        return quadrature_moment(self, k, tol, budget)

    def cdf(self, x: float, tol: float = 1e-10) -> float:
        return cdf(self, x, tol)


@dataclass(frozen=True)
class Q2Distribution:
    """Law of ``Q(f)^2`` at ``|f| = 1/2``: density on ``(0, 1)`` plus atoms."""

    kind: Kind
    a: float
    atoms: tuple[Atom, ...]

    def _family(self) -> _Family:
        return _family(self.a, 4 * self.a / math.pi, 0.0, HALF_PI)

    def density(self, x: float) -> float:
        if not 0.0 < x < 1.0:
            return 0.0
        fam = self._family()
        return 2 * self.a / math.pi * math.sqrt((1 - x) / x) / fam.denominator(x)

    def moment(self, k: int, tol: float = 1e-10, budget: int = DEFAULT_BUDGET) -> QuadratureResult:
        if k < 0:
            raise DomainError("k must be >= 0")
        res = self._family().integrate(MODE_POWER, 2 * k, 1.0, 0.0, tol, budget)
        value = res.value + sum(at.w * at.x**k for at in self.atoms)
        return QuadratureResult(value, res.error, res.evaluations)

    def stieltjes(self, t: float, tol: float = 1e-10, budget: int = DEFAULT_BUDGET) -> QuadratureResult:
        """``int mu(dx) / (1 - t x)`` for ``|t| < 1``."""
        t = _real(t)
        if not -1.0 < t < 1.0:
            raise DomainError(f"t must lie in (-1, 1), got {t}")
        res = self._family().integrate(MODE_STIELTJES, 0, 1.0, t, tol, budget)
        value = res.value + sum(at.w / (1 - t * at.x) for at in self.atoms)
        return QuadratureResult(value, res.error, res.evaluations)


def q2_distribution(a) -> Q2Distribution:
    a = _check_a(a)
    if a == 1.0:
        return Q2Distribution(Kind.SEMICIRCLE, a, ())
    if a <= 1.5:
        return Q2Distribution(Kind.ABSOLUTELY_CONTINUOUS, a, ())
    p = spectral_params(a)
    return Q2Distribution(Kind.DENSITY_PLUS_ATOMS, a, (Atom(p.a1, p.atom_weight),))


def field_distribution(q, norm) -> FieldDistribution:
    q, norm = _check_q(q), _real(norm)
    if norm < 0:
        raise DomainError(f"norm must be >= 0, got {norm}")
    if norm == 0.0:
        return FieldDistribution(Kind.POINT_MASS, q, 0.0, (Atom(0.0, 1.0),))
    if q == -1.0:
        return FieldDistribution(Kind.TWO_POINT, q, norm, (Atom(-norm, 0.5), Atom(norm, 0.5)))
    if q == 0.0:
        return FieldDistribution(Kind.SEMICIRCLE, q, norm, ())
    if q <= 0.5:
        return FieldDistribution(Kind.ABSOLUTELY_CONTINUOUS, q, norm, ())
    a1, _ = _roots(1.0 + q)
    w = 0.5 * (1 - (1 + q) / math.sqrt(q * (q + 4)))
    loc = 2 * norm * math.sqrt(a1)
    return FieldDistribution(Kind.DENSITY_PLUS_ATOMS, q, norm, (Atom(-loc, w), Atom(loc, w)))


def quadrature_moment(dist: FieldDistribution, k: int, tol: float = 1e-10,
                      budget: int = DEFAULT_BUDGET) -> QuadratureResult:
    """``int x^k dL``: density part by quadrature, atoms summed exactly."""
    if k < 0:
        raise DomainError("k must be >= 0")
    if tol <= 0:
        raise DomainError("tol must be positive")
    atoms = sum(at.w * at.x**k for at in dist.atoms)
    if not dist.has_density:
        return QuadratureResult(atoms, 0.0, 0)
    res = dist._family().integrate(MODE_POWER, k, 2 * dist.norm, 0.0, tol, budget)
    return QuadratureResult(res.value + atoms, res.error, res.evaluations)


def total_mass(dist: FieldDistribution, tol: float = 1e-10,
               budget: int = DEFAULT_BUDGET) -> QuadratureResult:
    return quadrature_moment(dist, 0, tol, budget)


def cdf(dist: FieldDistribution, x: float, tol: float = 1e-10,
        budget: int = DEFAULT_BUDGET) -> float:
    """Right-continuous distribution function ``L((-inf, x])``."""
    if tol <= 0:
        raise DomainError("tol must be positive")
    x = _real(x)
    value = sum(at.w for at in dist.atoms if at.x <= x)
    if dist.has_density:
        y = x / (2 * dist.norm)
        if y > -1.0:
            upper = HALF_PI if y >= 1.0 else math.asin(y)
            value += dist._family().integrate(
                MODE_POWER, 0, 1.0, 0.0, tol, budget, hi=upper
            ).value
    return value


# --------------------------------------------------------------------------
# checks built directly on g_a, independent of the density family


def q2_stieltjes(a, t, tol: float = 1e-11, budget: int = DEFAULT_BUDGET) -> float:
    """``int mu_a(dx) / (1 - t x)`` with ``mu_a`` built from ``g_a``.

    For ``a > 1`` the continuous part is ``a/(8 pi (a-1)) (-g_a)`` plus the
    atom ``A1/(16(a-1))`` at ``a1``; for ``a < 1`` it is
    ``a/(8 pi (1-a)) g_a``.
    """
    a, t = _check_a(a), _real(t)
    if a == 1.0:
        raise DomainError("use the semicircle at a = 1")
    scale = a / (8 * math.pi * abs(a - 1))
    sign = -1.0 if a > 1 else 1.0

    def integrand(theta: float) -> float:
        s, c = math.sin(theta), math.cos(theta)
        x = s * s
        g, _ = aux_functions(a, x)
        return sign * g * 2 * s * c / (1 - t * x)

    value = scale * integrate(integrand, 0.0, HALF_PI, tol, budget).value
    if a > 1:
        p = spectral_params(a)
        value += p.atom_weight / (1 - t * p.a1)
    return value


def standard_integral_closed(which: int, alpha: float) -> float:
    """Closed forms of the two reference integrals over ``(0, 1)``.

    ``which=1``: ``int sqrt(1-x^2)/(1 - alpha x^2)`` for ``alpha in (-1, 1]``;
    ``which=2``: ``int sqrt(1-x^2)/(alpha + x^2)`` for ``alpha > 0``.
    """
    alpha = _real(alpha)
    if which == 1:
        if not -1.0 < alpha <= 1.0:
            raise DomainError("alpha must lie in (-1, 1]")
        if alpha == 0.0:
            return HALF_PI / 2
        return HALF_PI * (1 - math.sqrt(1 - alpha)) / alpha
    if which == 2:
        if alpha <= 0.0:
            raise DomainError("alpha must be positive")
        return HALF_PI * (math.sqrt((1 + alpha) / alpha) - 1)
    raise DomainError("which must be 1 or 2")


def standard_integral_quadrature(which: int, alpha: float, tol: float = 1e-12) -> float:
    alpha = _real(alpha)
    if which == 1:
        def f(theta):
            s, c = math.sin(theta), math.cos(theta)
            return c * c / (1 - alpha * s * s)
    elif which == 2:
        def f(theta):
            s, c = math.sin(theta), math.cos(theta)
            return c * c / (alpha + s * s)
    else:
        raise DomainError("which must be 1 or 2")
    return integrate(f, 0.0, HALF_PI, tol).value
