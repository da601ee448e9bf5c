"""Zeta determinants of the block chain and their open factorization.

For the closed chain, det(I - z Mbar) is the inverse zeta function of the
time-lambda map: a polynomial with a simple zero at z = 1 (row-stochastic
Perron root). Punching a cylinder hole multiplies in the hole's overlap
structure: with the quantities (alpha, k0, c_k) of the hole and the (t, r)
cofactor of I - z Mbar,

    det(I - z M_op) = det(I - z Mbar) * (1 + sum_k c_k z^k)
                      + C_{t,r}(z) * alpha * z^{k0}.

Everything here is dense polynomial arithmetic in float64: characteristic
polynomials and cofactors come from a Faddeev-LeVerrier pass, the (1 - z)
factor is removed by synthetic division, Taylor data at z = 1 feeds the
asymptotic expansions, and root isolation on [1, oo) turns determinants back
into spectral radii.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import (
    DimensionTooLargeError,
    FactorizationMismatchError,
    NoSignChangeError,
    NoZeroAtOneError,
    PoleAtOneError,
)
from .open_system import HoleQuantities, build_open_bordered, hole_quantities
from .shift import Word, cylinder_measure
from .suspension import SuspensionSystem

#: Largest matrix dimension accepted for dense polynomial extraction.
DENSE_DIMENSION_CAP = 320


# ===========================================================================
# Polynomials
# ===========================================================================

@dataclass(frozen=True)
class Polynomial:
    """Real polynomial with ascending coefficients, trailing zeros trimmed."""

    coefficients: tuple[float, ...]

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        while len(coeffs) > 1 and coeffs[-1] == 0.0:
            coeffs = coeffs[:-1]
        if not coeffs:
            coeffs = (0.0,)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z: float) -> float:
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * z + c
        return acc

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial((0.0,))
        return Polynomial(tuple(i * c for i, c in enumerate(self.coefficients) if i > 0))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coefficients, other.coefficients
        if len(a) < len(b):
            a, b = b, a
        return Polynomial(tuple(x + (b[i] if i < len(b) else 0.0) for i, x in enumerate(a)))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other.scale(-1.0)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        out = [0.0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a == 0.0:
                continue
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return Polynomial(tuple(out))

    def scale(self, factor: float) -> "Polynomial":
        return Polynomial(tuple(factor * c for c in self.coefficients))

    def shift_power(self, exponent: int) -> "Polynomial":
        """Multiply by z**exponent."""
        if exponent < 0:
            raise ValueError(f"exponent must be >= 0, got {exponent}")
        return Polynomial((0.0,) * exponent + self.coefficients)

    def taylor_at_one(self, terms: int) -> tuple[float, ...]:
        """First ``terms`` Taylor coefficients at z = 1 (powers of z - 1)."""
        return tuple(
            float(sum(c * comb(i, l) for i, c in enumerate(self.coefficients) if i >= l))
            for l in range(terms)
        )


ONE_MINUS_Z = Polynomial((1.0, -1.0))


# ===========================================================================
# Characteristic polynomials and cofactors (Faddeev-LeVerrier)
# ===========================================================================

def _leverrier(matrix: np.ndarray, entry: "tuple[int, int] | None" = None):
    """One Faddeev-LeVerrier pass over M.

    Returns the ascending coefficients of det(I - zM) and, when ``entry`` =
    (row, col) is given, the ascending coefficients of that entry of
    adj(I - zM) (which is the (col, row) cofactor of I - zM).
    """
    mat = np.asarray(matrix, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"matrix must be square, got shape {mat.shape}")
    size = mat.shape[0]
    if size > DENSE_DIMENSION_CAP:
        raise DimensionTooLargeError(
            f"dimension {size} exceeds the dense cap {DENSE_DIMENSION_CAP}"
        )
    det_coeffs = [1.0]
    adj_coeffs: "list[float] | None" = None
    if entry is not None:
        row, col = entry
        adj_coeffs = [1.0 if row == col else 0.0]
    acc = mat.copy()
    coeff = -float(np.trace(acc))
    det_coeffs.append(coeff)
    for k in range(2, size + 1):
        if adj_coeffs is not None and k - 1 <= size - 1:
            adj_coeffs.append(float(acc[entry[0], entry[1]]) + (coeff if entry[0] == entry[1] else 0.0))
        acc = mat @ (acc + coeff * np.eye(size))
        coeff = -float(np.trace(acc)) / k
        det_coeffs.append(coeff)
    return det_coeffs, adj_coeffs


def char_poly(matrix: np.ndarray) -> Polynomial:
    """det(I - zM) as a polynomial in z (reversed characteristic polynomial)."""
    det_coeffs, _ = _leverrier(matrix)
    return Polynomial(tuple(det_coeffs))


def cofactor_poly(matrix: np.ndarray, t_index: int, r_index: int) -> Polynomial:
    """(t, r) cofactor of I - zM, i.e. adj(I - zM)[r, t], 0-based indices."""
    size = np.asarray(matrix).shape[0]
    if not (0 <= t_index < size and 0 <= r_index < size):
        raise ValueError(f"cofactor indices ({t_index}, {r_index}) out of range for size {size}")
    if size == 1:
        return Polynomial((1.0,))
    _, adj_coeffs = _leverrier(matrix, entry=(r_index, t_index))
    return Polynomial(tuple(adj_coeffs))


# ===========================================================================
# Deflation, Taylor data, root isolation
# ===========================================================================

def deflate_at_one(poly: Polynomial, tol: float = 1e-9) -> Polynomial:
    """Divide by (1 - z), requiring a zero at z = 1 within ``tol``.

    Returns G with poly = (1 - z) G. Raises NoZeroAtOneError otherwise.
    """
    value = poly(1.0)
    if abs(value) >= tol:
        raise NoZeroAtOneError(f"|p(1)| = {abs(value):.3e} is not below {tol:.0e}")
    coeffs = poly.coefficients
    out = [coeffs[0]]
    for c in coeffs[1:-1]:
        out.append(c + out[-1])
    if len(coeffs) == 1:
        out = [0.0]
    return Polynomial(tuple(out))


def taylor_at_one(
    numerator: Polynomial, denominator: Polynomial, order: int
) -> tuple[float, ...]:
    """Taylor coefficients of numerator/denominator at z = 1, in powers of (z - 1).

    Common zeros at z = 1 are cancelled first; if the denominator still
    vanishes, PoleAtOneError is raised. Returns ``order + 1`` coefficients.
    """
    if order < 0:
        raise ValueError(f"order must be >= 0, got {order}")
    slack = 8
    num = list(numerator.taylor_at_one(order + 1 + slack))
    den = list(denominator.taylor_at_one(order + 1 + slack))
    num_scale = max(1.0, max(abs(c) for c in num))
    den_scale = max(1.0, max(abs(c) for c in den))
    for _ in range(slack):
        if abs(den[0]) > 1e-11 * den_scale:
            break
        if abs(num[0]) > 1e-11 * num_scale:
            raise PoleAtOneError("denominator vanishes at z = 1 but numerator does not")
        num.pop(0)
        den.pop(0)
    else:
        raise PoleAtOneError("denominator vanishes to high order at z = 1")
    out = []
    for l in range(order + 1):
        acc = num[l] - sum(out[j] * den[l - j] for j in range(l))
        out.append(acc / den[0])
    return tuple(out)


def smallest_root_geq_one(
    poly: Polynomial,
    hi: "float | None" = None,
    companion_fallback: bool = True,
) -> float:
    """Smallest real root of ``poly`` in [1, hi], assuming poly(1) >= 0.

    Scans for a sign change, then bisects and polishes with Newton. Without a
    sign change (even roots) it falls back to companion-matrix eigenvalues and
    polishes on the derivative when the root is multiple. Raises
    NoSignChangeError when nothing is found.
    """
    scale = max(abs(c) for c in poly.coefficients)
    at_one = poly(1.0)
    if abs(at_one) <= 1e-12 * max(1.0, scale):
        return 1.0
    if at_one < 0.0:
        raise ValueError(f"poly(1) = {at_one:.3e} is negative; no survival mass")

    brackets = [hi] if hi is not None else [float(2 ** j) for j in range(1, 22)]
    left = 1.0
    found: "tuple[float, float] | None" = None
    for right in brackets:
        if right <= left:
            continue
        xs = np.linspace(left, right, 512)
        prev_x, prev_v = left, poly(left)
        for x in xs[1:]:
            v = poly(float(x))
            if prev_v > 0.0 >= v:
                found = (prev_x, float(x))
                break
            prev_x, prev_v = float(x), v
        if found is not None:
            break
        left = right
    if found is not None:
        a, b = found
        for _ in range(200):
            if b - a <= 1e-15 * b:
                break
            mid = 0.5 * (a + b)
            if poly(mid) > 0.0:
                a = mid
            else:
                b = mid
        return _polish_candidate(poly, 0.5 * (a + b), a, b, scale)

    if companion_fallback and poly.degree >= 1:
        roots = np.roots(list(reversed(poly.coefficients)))
        top = hi if hi is not None else float(2 ** 21)
        candidates = [
            float(r.real)
            for r in roots
            if abs(r.imag) <= 1e-6 * max(1.0, abs(r.real))
            and 1.0 - 1e-8 <= r.real <= top * (1.0 + 1e-9)
        ]
        if candidates:
            cand = min(candidates)
            return _polish_candidate(poly, cand, 1.0, top, scale)
    raise NoSignChangeError("no root found at or beyond z = 1")


def _polish_candidate(
    poly: Polynomial, cand: float, lo: float, hi: float, scale: float
) -> float:
    """Newton-polish ``cand``, switching to the derivative at multiple roots.

    Near a multiple root the residual is noise-dominated and plain Newton
    stalls at sqrt(eps) accuracy, but the root location is then a simple root
    of the derivative, which polishes cleanly. The switch is only trusted when
    the polished derivative root really annihilates the polynomial.
    """
    deriv = poly.derivative()
    if poly.degree >= 2 and abs(deriv(cand)) <= 1e-7 * max(1.0, scale):
        # The true root can sit slightly outside a bracket that converged
        # inside the noise band, so polish within a pad, not the bracket.
        pad = 1e-6 * max(1.0, abs(cand))
        alt = _newton_polish(deriv, cand, cand - pad, cand + pad)
        if abs(poly(alt)) <= 1e-12 * max(1.0, scale):
            return alt
    return _newton_polish(poly, cand, lo, hi)


def _newton_polish(poly: Polynomial, start: float, lo: float, hi: float) -> float:
    deriv = poly.derivative()
    x = start
    for _ in range(30):
        dv = deriv(x)
        if dv == 0.0:
            break
        step = poly(x) / dv
        nxt = x - step
        if not (lo - 1e-12 <= nxt <= hi + 1e-9):
            break
        x = nxt
        if abs(step) <= 1e-16 * max(1.0, abs(x)):
            break
    return x


# ===========================================================================
# Open factorization
# ===========================================================================

@dataclass(frozen=True, eq=False)
class ZetaBundle:
    """Closed and open inverse zeta polynomials of a (system, hole) pair.

    ``zeta_open_inverse`` is assembled from the factorization (closed part
    times correlation polynomial plus cofactor term); ``max_deviation`` is its
    worst coefficient difference against the direct determinant of the
    bordered open matrix. ``cofactor_value`` = C_{t,r}(1) comes with its
    predicted value mu_t * G(1) / mass, the residue identity tying the
    cofactor to the invariant measure.
    """

    quantities: HoleQuantities
    zeta_closed_inverse: Polynomial
    deflated: Polynomial
    correlation: Polynomial
    cofactor: Polynomial
    zeta_open_inverse: Polynomial
    max_deviation: float
    cofactor_value: float
    cofactor_predicted: float


def correlation_poly(quantities: HoleQuantities) -> Polynomial:
    """The hole's correlation polynomial 1 + sum_{k=1}^{k0-1} c_k z^k."""
    return Polynomial((1.0,) + quantities.correlation)


def zeta_op_factorized(
    system: SuspensionSystem, hole: Word, tol: float = 1e-9
) -> ZetaBundle:
    """Assemble det(I - z M_op) from the factorization and cross-check it.

    The direct route takes the characteristic polynomial of the bordered open
    matrix; the assembled route multiplies the closed determinant by the
    correlation polynomial and adds the cofactor term. Coefficientwise
    disagreement beyond ``tol`` raises FactorizationMismatchError.
    """
    q = hole_quantities(system, hole)
    closed = char_poly(system.block_matrix)
    deflated = deflate_at_one(closed)
    cof = cofactor_poly(system.block_matrix, q.t_index, q.r_index)
    corr = correlation_poly(q)
    if q.k0 == 0:
        # Hole length equals the order: expanding det along the zeroed t-row
        # leaves exactly the (t, t) minor.
        assembled = cof
    else:
        assembled = closed * corr + cof.shift_power(q.k0).scale(q.alpha)
    direct = char_poly(build_open_bordered(system, hole).matrix)
    width = max(len(assembled.coefficients), len(direct.coefficients))
    deviation = 0.0
    for i in range(width):
        a = assembled.coefficients[i] if i < len(assembled.coefficients) else 0.0
        d = direct.coefficients[i] if i < len(direct.coefficients) else 0.0
        deviation = max(deviation, abs(a - d))
    if deviation > tol:
        raise FactorizationMismatchError(
            f"factorized and direct determinants differ by {deviation:.3e}"
        )
    mu_t = cylinder_measure(system.base, q.t_word)
    return ZetaBundle(
        quantities=q,
        zeta_closed_inverse=closed,
        deflated=deflated,
        correlation=corr,
        cofactor=cof,
        zeta_open_inverse=assembled,
        max_deviation=deviation,
        cofactor_value=cof(1.0),
        cofactor_predicted=mu_t * deflated(1.0) / system.mass_normalized,
    )


def escape_rate_zeta(system: SuspensionSystem, hole: Word) -> float:
    """Escape rate from the smallest zero >= 1 of the open inverse zeta."""
    bundle = zeta_op_factorized(system, hole)
    root = smallest_root_geq_one(bundle.zeta_open_inverse)
    return float(np.log(root)) / system.lattice_scale
