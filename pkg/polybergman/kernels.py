import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import gammaln

from .config import config
from .disc_poly import (
    DiscPoint, Orders, WeightParam, as_points, check_disc, cpow, eval_jacobi_form, falling_factorial, log_norm_const, unwrap,
)
from .special_fn import HypergeoParams, gauss_2f1, gauss_2f1_derivative, log_pochhammer, pochhammer

logger = logging.getLogger(__name__)


class TruncationInsufficientError(RuntimeError):
    """The series kernel's tail bound exceeds the requested relative tolerance."""


@dataclass(frozen=True)
class KernelSpec:
    gamma: WeightParam
    n: int
    truncation: int = field(default_factory=lambda: config.KERNEL_TRUNCATION)
    tol: float = field(default_factory=lambda: config.CHECK_TOL)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"True-space index must be nonnegative (got {self.n})")
        if self.truncation < 1:
            raise ValueError(f"Series truncation must be at least 1 (got {self.truncation})")
        if not self.tol > 0:
            raise ValueError(f"Kernel tolerance must be positive (got {self.tol})")


@dataclass(frozen=True, eq=False)
class KernelValue:
    value: Union[complex, NDArray]
    est_error: Union[float, NDArray] = 0.0
    # True for closed-form evaluations, whose est_error is the 0 sentinel
    analytic: bool = False


@dataclass(frozen=True)
class BoundConstant:
    partial_sum: float
    truncation: int
    diverges: bool
    # c - a - b of the 2F1 at argument 1; the series at 1 converges only if positive
    exponent: float


def bergman_kernel(g: WeightParam, z: DiscPoint, w: DiscPoint) -> DiscPoint:
    # (gamma+1) / (pi (1 - z wbar)^(gamma+2)); Re(1 - z wbar) > 0 keeps the principal branch
    z, w = as_points(z), as_points(w)
    check_disc(z, closed=False)
    check_disc(w, closed=False)
    return unwrap((g.gamma + 1) / (math.pi * np.power(1 - z * np.conj(w), g.gamma + 2)))


def series_tail_bound(spec: KernelSpec, z_abs: ArrayLike, w_abs: ArrayLike, start: Optional[int] = None) -> NDArray:
    """Upper bound of sum_{m >= start} |R_{m,n}(z) R_{m,n}(w)| / d_{m,n}."""
    # Normalised Jacobi factor of degree l = min(m, n) is bounded by
    # max(1, C(max(m,n), l) / C(l+gamma, l)). Terms with m <= n use |z|, |w| <= 1;
    # the m > n series in x = |z||w| closes with t_m / (1 - rho) once rho <= (1+x)/2.
    gamma, n = spec.gamma.gamma, spec.n
    start = spec.truncation + 1 if start is None else start
    x = np.asarray(z_abs, dtype=float) * np.asarray(w_abs, dtype=float)
    bound = np.zeros_like(x)

    m = start
    while m <= n:
        log_binom_low = log_pochhammer(gamma + 1, m) - gammaln(m + 1)
        log_binom_high = gammaln(n + 1) - gammaln(m + 1) - gammaln(n - m + 1)
        log_jacobi_max = max(0.0, log_binom_high - log_binom_low)
        bound = bound + math.exp(2 * log_jacobi_max - log_norm_const(spec.gamma, Orders(m, n)))
        m += 1

    log_binom_n = log_pochhammer(gamma + 1, n) - gammaln(n + 1)
    with np.errstate(divide="ignore"):
        log_x = np.log(x)

    done = np.zeros(x.shape, dtype=bool)
    for _ in range(config.SERIES_TERM_CAP):
        log_binom_m = gammaln(m + 1) - gammaln(n + 1) - gammaln(m - n + 1)
        log_jacobi_max = max(0.0, log_binom_m - log_binom_n)
        log_t = (m - n) * log_x + 2 * log_jacobi_max - log_norm_const(spec.gamma, Orders(m, n))
        term = np.exp(log_t)

        rho = (
            x * ((m + 1) / (m + 1 - n)) ** 2
            * (gamma + 2 + m + n) / (gamma + 1 + m + n)
            * max(1.0, (gamma + 1 + m) / (m + 1))
        )
        closing = (~done) & (rho <= (1 + x) / 2)
        bound = np.where(closing, bound + term / (1 - np.where(closing, rho, 0.0)), bound)
        bound = np.where(~done & ~closing, bound + term, bound)
        done = done | closing
        if np.all(done):
            return bound
        m += 1

    raise TruncationInsufficientError(f"Tail bound did not close within {config.SERIES_TERM_CAP} terms")


def true_kernel_series(spec: KernelSpec, z: DiscPoint, w: DiscPoint) -> KernelValue:
    """Truncated basis series sum_{m<=M} R_{m,n}(z) conj(R_{m,n}(w)) / d_{m,n}."""
    # Ascending m; est_error bounds the dropped tail and must stay within tol * |value|.
    z, w = as_points(z), as_points(w)
    check_disc(z, closed=False)
    check_disc(w, closed=False)

    total = np.zeros(np.broadcast(z, w).shape, dtype=complex)
    for m in range(spec.truncation + 1):
        o = Orders(m, spec.n)
        weight = math.exp(-log_norm_const(spec.gamma, o))
        total = total + eval_jacobi_form(spec.gamma, o, z) * np.conj(eval_jacobi_form(spec.gamma, o, w)) * weight

    est = series_tail_bound(spec, np.abs(z), np.abs(w))
    if np.any(est > spec.tol * np.abs(total)):
        worst = float(np.max(est - spec.tol * np.abs(total)))
        raise TruncationInsufficientError(
            f"Series kernel n={spec.n} truncated at M={spec.truncation}: tail bound exceeds tolerance by {worst:.3g}"
        )
    return KernelValue(value=unwrap(total), est_error=unwrap(est), analytic=False)


def xi_factor(g: WeightParam, n: int, x: DiscPoint) -> DiscPoint:
    # sum_m x^m / d_{m,n} = (gamma+n+1)(gamma+1)_n / (pi n!) * 2F1(gamma+n+2, gamma+1; gamma+n+1; x)
    gamma = g.gamma
    scale = (gamma + n + 1) * pochhammer(gamma + 1, n) / (math.pi * math.factorial(n))
    return scale * gauss_2f1(HypergeoParams(gamma + n + 2, gamma + 1, gamma + n + 1, x))


def true_kernel_closed(spec: KernelSpec, z: DiscPoint, w: DiscPoint) -> KernelValue:
    """Closed form of K^gamma_n(z, w)."""
    # Double Leibniz expansion of d^n/dz^n d^n/dwbar^n applied to
    # (1-|z|^2)^(gamma+n) (1-|w|^2)^(gamma+n) F(z wbar), F = 2F1(gamma+n+2, gamma+1; gamma+n+1; .).
    # The (1-|.|^2)^(-gamma) prefactors cancel term by term.
    z, w = as_points(z), as_points(w)
    check_disc(z, closed=False)
    check_disc(w, closed=False)
    gamma, n = spec.gamma.gamma, spec.n

    x = z * np.conj(w)
    hyper = HypergeoParams(gamma + n + 2, gamma + 1, gamma + n + 1, x)
    derivs = [gauss_2f1_derivative(hyper, s) for s in range(2 * n + 1)]

    zbar, wbar = np.conj(z), np.conj(w)
    one_minus_z = 1 - np.abs(z) ** 2
    one_minus_w = 1 - np.abs(w) ** 2

    total = np.zeros(x.shape, dtype=complex)
    for j in range(n + 1):
        z_part = math.comb(n, j) * pochhammer(gamma + j + 1, n - j) * cpow(-zbar, n - j) * one_minus_z ** j
        for k in range(n + 1):
            w_part = math.comb(n, k) * pochhammer(gamma + k + 1, n - k) * cpow(-w, n - k) * one_minus_w ** k
            inner = np.zeros_like(total)
            for i in range(min(j, k) + 1):
                inner = inner + math.comb(j, i) * falling_factorial(k, i) * cpow(z, k - i) * cpow(wbar, j - i) * derivs[j + k - i]
            total = total + z_part * w_part * inner

    prefactor = (gamma + n + 1) / (math.pi * math.factorial(n) * pochhammer(gamma + 1, n))
    return KernelValue(value=unwrap(prefactor * total), est_error=0.0, analytic=True)


def poly_kernel(g: WeightParam, n: int, z: DiscPoint, w: DiscPoint) -> DiscPoint:
    # Sum of the true kernels of order 0..n (the printed k = 1 start and fixed index are ledgered).
    total = 0
    for k in range(n + 1):
        total = total + true_kernel_closed(KernelSpec(g, k), z, w).value
    return total


def eval_bound_const(g: WeightParam, n: int, truncation: Optional[int] = None) -> BoundConstant:
    """Partial sum of sum_m 1/d_{m,n}, the square of the pointwise-bound constant."""
    # The full series is a multiple of 2F1(gamma+n+2, gamma+1; gamma+n+1; 1), finite only
    # when c - a - b = -gamma - 2 > 0, which never holds for gamma > -1.
    truncation = config.TRUNCATION if truncation is None else truncation
    partial = 0.0
    for m in range(truncation + 1):
        partial += math.exp(-log_norm_const(g, Orders(m, n)))

    exponent = -g.gamma - 2
    if exponent <= 0:
        logger.info(f"Evaluation-bound series diverges for gamma={g.gamma} (c-a-b={exponent})")
    return BoundConstant(partial_sum=partial, truncation=truncation, diverges=exponent <= 0, exponent=exponent)
