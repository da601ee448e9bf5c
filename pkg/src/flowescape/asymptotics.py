"""Asymptotics of escape rates along shrinking periodic-orbit hole families.

Fix a periodic point x of prime period p (cyclically admissible base word) and
take holes A_nu = the cylinder over nu repetitions of the base word. As nu
grows the hole measure mu_nu shrinks geometrically by the orbit weight c_o,
and the smallest zero z_nu >= 1 of the open inverse zeta admits an expansion

    z_nu = 1 + s_1 mu_nu + s_2 mu_nu^2 + ... + O(mu_nu^{k+1})

whose coefficients come out of a triangular recursion on Taylor data at z = 1.
The first two have closed forms: s_1 = (1 - c_o)/mu(phi) and s_2 = s_1^2 times
an overlap/cofactor bracket. Everything in this module works on the normalized
lattice (block steps, lattice 1) and converts to flow units only where noted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateLinearTermError,
    NoSignChangeError,
    NotCyclicallyAdmissibleError,
    NotPrimePeriodError,
    NotReducedError,
)
from .shift import (
    DEFAULT_STATE_CAP,
    CylinderFunction,
    MarkovShift,
    Word,
    cylinder_measure,
    is_reduced,
    refine_cylinder_function,
)
from .suspension import SuspensionSystem, build_suspension
from .zeta import (
    ONE_MINUS_Z,
    Polynomial,
    char_poly,
    cofactor_poly,
    deflate_at_one,
    smallest_root_geq_one,
    taylor_at_one,
)


# ===========================================================================
# Families
# ===========================================================================

@dataclass(frozen=True, eq=False)
class PeriodicOrbitFamily:
    """A periodic point with the precomputed pieces of its hole family.

    The ceiling is refined so its order n is a multiple of the period p (the
    expansion needs the hole words A_nu = base^nu to align with whole periods).
    ``orbit_height`` o is the normalized ceiling sum over one period,
    ``orbit_weight`` c_o the one-period transition weight, and ``deflated`` /
    ``cofactor`` the cached zeta pieces G and C_{t,t} of the closed chain.
    """

    system: SuspensionSystem
    base_word: Word
    period: int
    orbit_height: int
    orbit_weight: float
    word_measure: float
    t_word: Word
    t_index: int
    nu_min: int
    deflated: Polynomial
    cofactor: Polynomial

    @property
    def order_over_period(self) -> int:
        return self.system.order // self.period


def build_family(
    shift: MarkovShift,
    ceiling: CylinderFunction,
    base_word: Word,
    cap: int = DEFAULT_STATE_CAP,
) -> PeriodicOrbitFamily:
    """Validate a base word and precompute its hole-family data.

    The word must be cyclically admissible (the wrap transition included),
    of prime period, and reduced as a periodic word. An orbit weight c_o = 1
    (a deterministic cycle) leaves nothing to expand in and is rejected.
    """
    word = tuple(base_word)
    p = len(word)
    if p < 1:
        raise NotCyclicallyAdmissibleError("base word must be nonempty")
    if any(a < 0 or a >= shift.alphabet_size for a in word):
        raise NotCyclicallyAdmissibleError(f"base word {word} leaves the alphabet")
    for i in range(p):
        a, b = word[i], word[(i + 1) % p]
        if not shift.transitions[a, b] > 0.0:
            raise NotCyclicallyAdmissibleError(
                f"transition {a} -> {b} in the closed orbit of {word} is forbidden"
            )
    for d in range(1, p):
        if p % d == 0 and word == word[:d] * (p // d):
            raise NotPrimePeriodError(f"base word {word} is a power of {word[:d]}")
    if not is_reduced(shift, word * 2):
        raise NotReducedError(f"periodic word {word} admits no last-letter substitution")

    c_o = 1.0
    for i in range(p):
        c_o *= float(shift.transitions[word[i], word[(i + 1) % p]])
    if c_o >= 1.0 - 1e-12:
        raise DegenerateLinearTermError(
            f"orbit weight c_o = {c_o} leaves no room for the hole to shrink"
        )

    order = p * ((ceiling.order + p - 1) // p)
    padded = refine_cylinder_function(shift, ceiling, order, cap=cap)
    system = build_suspension(shift, padded, cap=cap)

    reps = (p + order - 1) // p + 1
    extended = word * reps
    orbit_height = sum(system.height_of(extended[j : j + order]) for j in range(p))
    t_word = extended[:order]
    t_index = system.block_index(t_word, 0)
    closed = char_poly(system.block_matrix)
    return PeriodicOrbitFamily(
        system=system,
        base_word=word,
        period=p,
        orbit_height=orbit_height,
        orbit_weight=c_o,
        word_measure=cylinder_measure(shift, word),
        t_word=t_word,
        t_index=t_index,
        nu_min=order // p + 1,
        deflated=deflate_at_one(closed),
        cofactor=cofactor_poly(system.block_matrix, t_index, t_index),
    )


def family_hole_word(family: PeriodicOrbitFamily, nu: int) -> Word:
    """The hole word A_nu = base^nu."""
    if nu < 1:
        raise ValueError(f"nu must be >= 1, got {nu}")
    return family.base_word * nu


def family_hole_measure(family: PeriodicOrbitFamily, nu: int) -> float:
    """mu_nu = mu([A_nu]) = (mu_w / c_o) * c_o^nu."""
    return cylinder_measure(family.system.base, family_hole_word(family, nu))


def family_zeta_op(family: PeriodicOrbitFamily, nu: int) -> Polynomial:
    """Open inverse zeta of the hole A_nu, assembled from cached family pieces.

    Uses the factorization with the family's explicit correlation polynomial
    sum_{k<s} (c_o z^o)^k, where s = nu - n/p, instead of rebuilding matrices
    of dimension growing with nu.
    """
    s = nu - family.order_over_period
    if s < 1:
        raise ValueError(
            f"nu = {nu} is below nu_min = {family.nu_min}; the hole is shorter than the order"
        )
    o = family.orbit_height
    corr = [0.0] * (o * (s - 1) + 1)
    for k in range(s):
        corr[o * k] = family.orbit_weight ** k
    closed = ONE_MINUS_Z * family.deflated
    alpha = family_hole_measure(family, nu) / cylinder_measure(
        family.system.base, family.t_word
    )
    return closed * Polynomial(tuple(corr)) + family.cofactor.shift_power(o * s).scale(alpha)


# ===========================================================================
# Expansion coefficients
# ===========================================================================

@dataclass(frozen=True)
class ExpansionCoefficients:
    """Expansion z_nu = 1 + sum_i s_i mu_nu^i on the normalized lattice.

    ``s_normalized`` are the recursion's coefficients; ``closed_normalized``
    holds the closed-form (s_1, s_2) for cross-checking. Flow-unit values
    divide s_i by lambda^i (the expansion of exp(lambda * rate) pulls one
    lattice factor per power of the hole measure).
    """

    nu: int
    order: int
    s_normalized: tuple[float, ...]
    closed_normalized: tuple[float, float]
    lattice_scale: float

    @property
    def s(self) -> tuple[float, ...]:
        return tuple(
            value / self.lattice_scale ** (i + 1)
            for i, value in enumerate(self.s_normalized)
        )

    @property
    def s1_closed(self) -> float:
        return self.closed_normalized[0] / self.lattice_scale

    @property
    def s2_closed(self) -> float:
        return self.closed_normalized[1] / self.lattice_scale ** 2


def _truncated_product(a: list[float], b: list[float], terms: int) -> list[float]:
    out = [0.0] * terms
    for i, x in enumerate(a[:terms]):
        if x == 0.0:
            continue
        for j, y in enumerate(b[: terms - i]):
            out[i + j] += x * y
    return out


def _root_equation_series(
    a: tuple[float, ...], b: tuple[float, ...], s: list[float], terms: int
) -> list[float]:
    """Coefficients in mu of sum_l a_l delta^l + mu sum_l b_l delta^l,
    truncated past mu^(terms-1), where delta(mu) = sum_i s_i mu^i."""
    delta = [0.0] + s
    delta += [0.0] * (terms - len(delta))
    out = [0.0] * terms
    power = [1.0] + [0.0] * (terms - 1)  # delta^l, starting at l = 0
    for l in range(terms):
        if 1 <= l < len(a):
            for i in range(terms):
                out[i] += a[l] * power[i]
        if l < len(b):
            for i in range(terms - 1):
                out[i + 1] += b[l] * power[i]
        power = _truncated_product(power, delta, terms)
    return out


def expansion_coefficients(
    family: PeriodicOrbitFamily, nu: int, order: int
) -> ExpansionCoefficients:
    """First ``order`` expansion coefficients s_1..s_k at the given nu.

    Solves g1(1 + delta) + mu_nu * g2(1 + delta) = 0 order by order in mu_nu,
    where g1 = (1-z)G/(1 - c_o z^o) is the nu-independent part and g2 carries
    the cofactor and the hole's geometric correlation tail. The linear
    coefficient a_1 = g1'(1) must not vanish (DegenerateLinearTermError).
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    s_count = nu - family.order_over_period
    if s_count < 1:
        raise ValueError(f"nu = {nu} is below nu_min = {family.nu_min}")
    o = family.orbit_height
    c_o = family.orbit_weight
    k0 = o * s_count
    den = Polynomial((1.0,) + (0.0,) * (o - 1) + (-c_o,))

    g1_num = ONE_MINUS_Z * family.deflated
    a = taylor_at_one(g1_num, den, order)
    if abs(a[1]) < 1e-12:
        raise DegenerateLinearTermError(f"linear coefficient {a[1]:.3e} vanishes")

    mu_t = cylinder_measure(family.system.base, family.t_word)
    head = family.cofactor * den
    tail = (ONE_MINUS_Z * family.deflated).scale(
        c_o ** (1 - family.order_over_period) / family.word_measure
    )
    g2_num = (head.scale(1.0 / mu_t) - tail).shift_power(k0)
    b = taylor_at_one(g2_num, den, max(order - 1, 0))

    s_values = [0.0] * order
    for j in range(1, order + 1):
        # With s_j still zero the mu^j coefficient misses exactly a_1 * s_j.
        series = _root_equation_series(a, b, s_values, order + 1)
        s_values[j - 1] = -series[j] / a[1]

    s_normalized = tuple(s_values)
    closed = _closed_forms(family, k0)
    return ExpansionCoefficients(
        nu=nu,
        order=order,
        s_normalized=s_normalized,
        closed_normalized=closed,
        lattice_scale=family.system.lattice_scale,
    )


def _closed_forms(family: PeriodicOrbitFamily, k0: int) -> tuple[float, float]:
    """Closed-form (s_1, s_2) on the normalized lattice."""
    c_o = family.orbit_weight
    o = family.orbit_height
    mass = family.system.mass_normalized
    g_poly = family.deflated
    c_poly = family.cofactor
    s1 = (1.0 - c_o) / mass
    bracket = (
        k0
        - g_poly.derivative()(1.0) / g_poly(1.0)
        - c_o * o / (1.0 - c_o)
        + c_poly.derivative()(1.0) / c_poly(1.0)
        + mass * c_o ** (1 - family.order_over_period)
        / (family.word_measure * (1.0 - c_o))
    )
    return s1, s1 * s1 * bracket


# ===========================================================================
# Verification sweeps
# ===========================================================================

@dataclass(frozen=True)
class AsymptoticsRow:
    """One nu of a family sweep, all on the normalized lattice."""

    nu: int
    mu_nu: float
    z_nu: float
    s1: float
    s2: float
    partial_sum: float
    residual_over_mu_k: float


def verify_expansion(
    family: PeriodicOrbitFamily, nus: "list[int] | tuple[int, ...]", order: int
) -> list[AsymptoticsRow]:
    """Locate z_nu and compare it against the order-``order`` partial sum.

    The root is first sought inside the theoretical bracket
    [1, 1 + 4 s_1 mu_nu], widening geometrically when nu is too small for the
    bracket to hold yet, with an unrestricted fallback at the end.
    """
    rows = []
    for nu in nus:
        coeffs = expansion_coefficients(family, nu, max(order, 2))
        s_norm = coeffs.s_normalized
        mu_nu = family_hole_measure(family, nu)
        poly = family_zeta_op(family, nu)
        root = None
        for widen in range(24):
            hi = 1.0 + (4.0 * s_norm[0] * mu_nu) * 2 ** widen
            try:
                root = smallest_root_geq_one(poly, hi=hi, companion_fallback=False)
                break
            except NoSignChangeError:
                continue
        if root is None:
            root = smallest_root_geq_one(poly)
        partial = 1.0 + sum(s_norm[i] * mu_nu ** (i + 1) for i in range(order))
        rows.append(
            AsymptoticsRow(
                nu=nu,
                mu_nu=mu_nu,
                z_nu=root,
                s1=s_norm[0],
                s2=s_norm[1],
                partial_sum=partial,
                residual_over_mu_k=abs(root - partial) / mu_nu ** order,
            )
        )
    return rows


@dataclass(frozen=True)
class LocalRateRow:
    """Escape rate over hole measure for one nu, against its limits.

    ``ratio_ceiling`` uses the family's own ceiling (flow units),
    ``ratio_unit`` the constant-1 ceiling; their limits are (1 - c_o)/mu(phi)
    and (1 - c_o).
    """

    nu: int
    mu_nu: float
    ratio_ceiling: float
    ratio_unit: float


@dataclass(frozen=True)
class LocalRateReport:
    rows: list[LocalRateRow]
    limit_ceiling: float
    limit_unit: float


def _family_rate(family: PeriodicOrbitFamily, nu: int) -> float:
    """Escape rate of the hole A_nu in flow units, via the family zeta root."""
    poly = family_zeta_op(family, nu)
    root = smallest_root_geq_one(poly)
    return float(np.log(root)) / family.system.lattice_scale


def local_rate_sweep(
    shift: MarkovShift,
    ceiling: CylinderFunction,
    base_word: Word,
    nus: "list[int] | tuple[int, ...]",
    cap: int = DEFAULT_STATE_CAP,
) -> LocalRateReport:
    """Escape rate over hole measure along the family, for the given ceiling
    and for the unit ceiling, with the respective local-rate limits."""
    from .shift import constant_function

    fam_ceiling = build_family(shift, ceiling, base_word, cap=cap)
    fam_unit = build_family(shift, constant_function(shift, 1.0), base_word, cap=cap)
    rows = []
    for nu in nus:
        mu_nu = family_hole_measure(fam_ceiling, nu)
        rows.append(
            LocalRateRow(
                nu=nu,
                mu_nu=mu_nu,
                ratio_ceiling=_family_rate(fam_ceiling, nu) / mu_nu,
                ratio_unit=_family_rate(fam_unit, nu) / mu_nu,
            )
        )
    return LocalRateReport(
        rows=rows,
        limit_ceiling=(1.0 - fam_ceiling.orbit_weight) / fam_ceiling.system.total_mass,
        limit_unit=1.0 - fam_unit.orbit_weight,
    )


@dataclass(frozen=True)
class SecondOrderRow:
    nu: int
    ratio: float


@dataclass(frozen=True)
class SecondOrderReport:
    rows: list[SecondOrderRow]
    limit: float


def second_order_check(
    family: PeriodicOrbitFamily, nus: "list[int] | tuple[int, ...]"
) -> SecondOrderReport:
    """(rate - s_1 mu_nu) / (nu mu_nu^2) against its limit s_1^2 * S_p(phi).

    Rates and s_1 are in flow units; the period sum S_p(phi) is
    lambda * orbit_height.
    """
    lam = family.system.lattice_scale
    s1_ext = (1.0 - family.orbit_weight) / family.system.total_mass
    rows = []
    for nu in nus:
        mu_nu = family_hole_measure(family, nu)
        rate = _family_rate(family, nu)
        rows.append(
            SecondOrderRow(nu=nu, ratio=(rate - s1_ext * mu_nu) / (nu * mu_nu ** 2))
        )
    return SecondOrderReport(
        rows=rows, limit=s1_ext ** 2 * lam * family.orbit_height
    )
