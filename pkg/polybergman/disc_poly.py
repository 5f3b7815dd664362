# Disc polynomials R^gamma_{m,n}(z, zbar) in Jacobi, explicit-sum and Rodrigues form,
# with their norms and the gamma = 0 reductions. Evaluators keep the input's shape.

import logging
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import gammaln

from .special_fn import JacobiParams, jacobi_eval_normalized, log_pochhammer, pochhammer

logger = logging.getLogger(__name__)

DiscPoint = Union[complex, NDArray]

# Factorial ratios above this total degree go through log-gamma.
LOG_SPACE_DEGREE = 30

# |z| slack for points that sit on the unit circle up to rounding
_EDGE_SLACK = 1e-12


@dataclass(frozen=True)
class WeightParam:
    gamma: float

    def __post_init__(self):
        if not self.gamma > -1:
            raise ValueError(f"Weight exponent gamma must exceed -1 (got {self.gamma})")

    def shifted(self, k: int) -> "WeightParam":
        return WeightParam(self.gamma + k)


@dataclass(frozen=True)
class Orders:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError(f"Disc polynomial orders must be nonnegative (got m={self.m}, n={self.n})")

    @property
    def low(self) -> int:
        return min(self.m, self.n)

    @property
    def gap(self) -> int:
        return abs(self.m - self.n)


def as_points(z: ArrayLike) -> NDArray:
    return np.asarray(z, dtype=complex)


def unwrap(values: NDArray):
    return values[()] if values.ndim == 0 else values


def check_disc(z: NDArray, closed: bool):
    radius = np.max(np.abs(z)) if z.size else 0.0
    if closed and radius > 1 + _EDGE_SLACK:
        raise ValueError(f"Point outside the closed unit disc (|z| = {radius:.6g})")
    if not closed and radius >= 1:
        raise ValueError(f"Point outside the open unit disc (|z| = {radius:.6g})")


def cpow(z: NDArray, k: int) -> NDArray:
    if k == 0:
        return np.ones_like(z)
    return np.power(z, k)


def falling_factorial(a: float, k: int) -> float:
    # a (a-1) ... (a-k+1)
    result = 1.0
    for i in range(k):
        result *= a - i
    return result


def _sum_coeff(gamma: float, m: int, n: int, j: int) -> float:
    # m! n! / (j! (gamma+1)_j (m-j)! (n-j)!)
    if m + n > LOG_SPACE_DEGREE:
        log_c = (
            gammaln(m + 1) + gammaln(n + 1) - gammaln(j + 1)
            - log_pochhammer(gamma + 1, j) - gammaln(m - j + 1) - gammaln(n - j + 1)
        )
        return float(np.exp(log_c))
    return math.comb(m, j) * math.comb(n, j) * math.factorial(j) / pochhammer(gamma + 1, j)


def eval_jacobi_form(g: WeightParam, o: Orders, z: DiscPoint) -> DiscPoint:
    """R^gamma_{m,n} through the normalised Jacobi polynomial in 2|z|^2 - 1."""
    # angular factor z^{m-l} zbar^{n-l}, l = min(m, n)
    z = as_points(z)
    check_disc(z, closed=True)
    k = o.low
    radial = jacobi_eval_normalized(JacobiParams(g.gamma, o.gap, k), 2 * np.abs(z) ** 2 - 1)
    return unwrap(cpow(z, o.m - k) * cpow(np.conj(z), o.n - k) * radial)


def eval_bivariate(g: WeightParam, o: Orders, z: DiscPoint, zeta: DiscPoint) -> DiscPoint:
    # Explicit sum with zbar replaced by an independent zeta; zeta = conj(z) gives R^gamma_{m,n}.
    z = as_points(z)
    zeta = as_points(zeta)
    one_minus = 1 - z * zeta
    total = np.zeros(np.broadcast(z, zeta).shape, dtype=complex)
    for j in range(o.low + 1):
        coeff = (-1) ** j * _sum_coeff(g.gamma, o.m, o.n, j)
        total = total + coeff * cpow(one_minus, j) * cpow(z, o.m - j) * cpow(zeta, o.n - j)
    return unwrap(total)


def eval_explicit_sum(g: WeightParam, o: Orders, z: DiscPoint) -> DiscPoint:
    z = as_points(z)
    check_disc(z, closed=True)
    return eval_bivariate(g, o, z, np.conj(z))


def _rodrigues_sum(g: WeightParam, o: Orders, lead: NDArray, other: NDArray) -> NDArray:
    # (-1)^n / (gamma+1)_n (1-|lead|^2)^(-gamma) d^n/dlead^n [lead^m (1 - lead*other)^(gamma+n)],
    # Leibniz-expanded; the (1-|.|^2)^gamma factors cancel term by term.
    m, n, gamma = o.m, o.n, g.gamma
    one_minus = 1 - lead * other
    total = np.zeros_like(lead)
    for j in range(min(n, m) + 1):
        coeff = math.comb(n, j) * falling_factorial(m, j) * pochhammer(gamma + j + 1, n - j)
        total = total + coeff * cpow(lead, m - j) * cpow(-other, n - j) * cpow(one_minus, j)
    return (-1) ** n / pochhammer(gamma + 1, n) * total


def eval_rodrigues(g: WeightParam, o: Orders, z: DiscPoint) -> DiscPoint:
    """Rodrigues-type form: a weighted n-th z-derivative of z^m (1 - z zbar)^(gamma+n)."""
    # prefactor (-1)^n / (gamma+1)_n; n = 0 is z^m
    z = as_points(z)
    check_disc(z, closed=False)
    return unwrap(_rodrigues_sum(g, o, z, np.conj(z)))


def eval_rodrigues_conj(g: WeightParam, o: Orders, w: DiscPoint) -> DiscPoint:
    # Conjugate form: derivative in wbar of wbar^m (1 - |w|^2)^(gamma+n).
    w = as_points(w)
    check_disc(w, closed=False)
    return unwrap(_rodrigues_sum(g, o, np.conj(w), w))


REPRESENTATIONS: dict[str, Callable[[WeightParam, Orders, DiscPoint], DiscPoint]] = {
    "jacobi": eval_jacobi_form,
    "sum": eval_explicit_sum,
    "rodrigues": eval_rodrigues,
}


def disc_poly(g: WeightParam, o: Orders, z: DiscPoint) -> DiscPoint:
    return eval_jacobi_form(g, o, z)


def log_norm_const(g: WeightParam, o: Orders) -> float:
    m, n, gamma = o.m, o.n, g.gamma
    return float(
        math.log(math.pi) + gammaln(m + 1) + gammaln(n + 1) - math.log(gamma + 1 + m + n)
        - log_pochhammer(gamma + 1, m) - log_pochhammer(gamma + 1, n)
    )


def norm_const(g: WeightParam, o: Orders) -> float:
    """Squared norm d^gamma_{m,n} = pi m! n! / ((gamma+1+m+n) (gamma+1)_m (gamma+1)_n)."""
    if o.m + o.n > LOG_SPACE_DEGREE:
        return math.exp(log_norm_const(g, o))
    m, n, gamma = o.m, o.n, g.gamma
    return (
        math.pi * math.factorial(m) * math.factorial(n)
        / ((gamma + 1 + m + n) * pochhammer(gamma + 1, m) * pochhammer(gamma + 1, n))
    )


def dbar_constant(g: WeightParam, m: int, j: int, k: int) -> float:
    """Constant C with d^k/dzbar^k R^gamma_{m,j} = C R^{gamma+k}_{m,j-k}."""
    # C = j!/(j-k)! (gamma+m+1)_k / (gamma+1)_k, zero when j < k
    if j < k:
        return 0.0
    return falling_factorial(j, k) * pochhammer(g.gamma + m + 1, k) / pochhammer(g.gamma + 1, k)


def dbar_derivative(g: WeightParam, o: Orders, k: int, z: DiscPoint) -> DiscPoint:
    z = as_points(z)
    check_disc(z, closed=False)
    if k < 0:
        raise ValueError(f"Derivative order must be nonnegative (got {k})")
    if o.n < k:
        return unwrap(np.zeros_like(z))
    lowered = eval_jacobi_form(g.shifted(k), Orders(o.m, o.n - k), z)
    return dbar_constant(g, o.m, o.n, k) * lowered


def koshelev_basis(m: int, p: int, z: DiscPoint) -> DiscPoint:
    """Koshelev's orthonormal polyanalytic basis e_{m,p} of the unweighted space."""
    # sqrt(m+p+1) / (sqrt(pi) (m+p)!) d^{m+p}/dz^p dzbar^m (|z|^2 - 1)^{m+p}, termwise on the binomial expansion
    if m < 0 or p < 0:
        raise ValueError(f"Koshelev indices must be nonnegative (got m={m}, p={p})")
    z = as_points(z)
    check_disc(z, closed=False)
    total_degree = m + p
    zbar = np.conj(z)
    total = np.zeros_like(z)
    for i in range(max(m, p), total_degree + 1):
        num = math.comb(total_degree, i) * math.factorial(i) ** 2
        den = math.factorial(i - p) * math.factorial(i - m) * math.factorial(total_degree)
        sign = -1 if (total_degree - i) % 2 else 1
        total = total + sign * (num / den) * cpow(z, i - p) * cpow(zbar, i - m)
    return unwrap(math.sqrt((total_degree + 1) / math.pi) * total)


def koshelev_constant(m: int, p: int) -> float:
    # e_{m,p} = koshelev_constant(m, p) * R^0_{m,p}
    return math.sqrt((m + p + 1) / math.pi)


def zernike_radial(m: int, n: int, r: ArrayLike):
    """Zernike radial polynomial R^{n-m}_{m+n}(r), equal to R^0_{m,n} on the positive axis."""
    if m > n:
        raise ValueError(f"zernike_radial needs m <= n (got m={m}, n={n})")
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(r > 1):
        raise ValueError("Zernike radius must lie in [0, 1]")
    return unwrap(np.real(as_points(eval_jacobi_form(WeightParam(0.0), Orders(m, n), r))))


def zernike_radial_classical(nu: int, k: int, r: ArrayLike):
    # Factorial-sum form of R^nu_k(r); zero when k - nu is odd.
    nu = abs(nu)
    r = np.asarray(r, dtype=float)
    output = np.zeros_like(r)
    if nu > k or (k - nu) % 2:
        return unwrap(output)
    for s in range((k - nu) // 2 + 1):
        coef = (-1) ** s * math.factorial(k - s) / (
            math.factorial(s) * math.factorial((k + nu) // 2 - s) * math.factorial((k - nu) // 2 - s)
        )
        output = output + coef * r ** (k - 2 * s)
    return unwrap(output)
