# Scalar special functions: Pochhammer symbols, the Gauss 2F1 series, Jacobi
# polynomials and Gauss-Jacobi quadrature.

import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import eigh_tridiagonal
from scipy.special import betaln, gammaln

from .config import config

logger = logging.getLogger(__name__)

Number = Union[float, complex, NDArray]


class NonConvergenceError(RuntimeError):
    """The hypergeometric series did not reach the tolerance within the term cap."""


@dataclass(frozen=True)
class JacobiParams:
    alpha: float
    beta: float
    degree: int

    def __post_init__(self):
        if not self.alpha > -1 or not self.beta > -1:
            raise ValueError(f"Jacobi exponents must exceed -1 (alpha={self.alpha}, beta={self.beta})")
        if self.degree < 0:
            raise ValueError(f"Jacobi degree must be nonnegative (got {self.degree})")


@dataclass(frozen=True, eq=False)
class HypergeoParams:
    a: float
    b: float
    c: float
    x: Number

    def __post_init__(self):
        if self.c <= 0 and float(self.c).is_integer():
            raise ValueError(f"2F1 lower parameter c={self.c} is a nonpositive integer")
        if np.any(np.abs(self.x) >= 1):
            raise ValueError("2F1 series requires |x| < 1")


def pochhammer(a: float, k: int) -> float:
    # Rising factorial (a)_k by forward product; (a)_0 = 1.
    if k < 0:
        raise ValueError(f"Pochhammer index must be nonnegative (got {k})")
    result = 1.0
    for i in range(k):
        result *= a + i
    return result


def log_pochhammer(a: float, k: int) -> float:
    if a <= 0:
        raise ValueError(f"log_pochhammer needs a > 0 (got {a})")
    return float(gammaln(a + k) - gammaln(a))


def gauss_2f1(p: HypergeoParams, tol: Optional[float] = None, max_terms: Optional[int] = None) -> Number:
    """Sum the Gauss hypergeometric series 2F1(a, b; c; x)."""
    # Term ratio (a+j)(b+j) / ((c+j)(j+1)) * x; stop once |term| <= tol * |partial sum|
    # at every point. Raises NonConvergenceError past the term cap.
    tol = config.SERIES_TOL if tol is None else tol
    max_terms = config.SERIES_TERM_CAP if max_terms is None else max_terms

    x = np.asarray(p.x, dtype=complex)
    term = np.ones_like(x)
    total = np.ones_like(x)
    j = 0
    while True:
        term = term * ((p.a + j) * (p.b + j) / ((p.c + j) * (j + 1))) * x
        j += 1
        total = total + term
        if np.all(np.abs(term) <= tol * np.abs(total)):
            break
        if j >= max_terms:
            logger.warning(f"2F1({p.a}, {p.b}; {p.c}) did not converge in {max_terms} terms")
            raise NonConvergenceError(
                f"2F1 series exceeded {max_terms} terms (max |x| = {np.max(np.abs(x)):.6g})"
            )

    return total[()] if total.ndim == 0 else total


def gauss_2f1_derivative(p: HypergeoParams, order: int, tol: Optional[float] = None) -> Number:
    # d^r/dx^r 2F1(a,b;c;x) = (a)_r (b)_r / (c)_r * 2F1(a+r, b+r; c+r; x)
    scale = pochhammer(p.a, order) * pochhammer(p.b, order) / pochhammer(p.c, order)
    shifted = HypergeoParams(p.a + order, p.b + order, p.c + order, p.x)
    return scale * gauss_2f1(shifted, tol)


def jacobi_eval(p: JacobiParams, x: ArrayLike) -> Number:
    """Standard Jacobi polynomial P_n^(alpha,beta)(x) by the three-term recurrence in n."""
    x = np.asarray(x, dtype=float)
    a, b, n = p.alpha, p.beta, p.degree

    prev = np.ones_like(x)
    if n == 0:
        return prev[()] if prev.ndim == 0 else prev

    curr = (a + 1) + (a + b + 2) * (x - 1) / 2
    for k in range(2, n + 1):
        s = 2 * k + a + b
        c1 = 2 * k * (k + a + b) * (s - 2)
        c2 = (s - 1) * (s * (s - 2) * x + a * a - b * b)
        c3 = 2 * (k + a - 1) * (k + b - 1) * s
        prev, curr = curr, (c2 * curr - c3 * prev) / c1

    return curr[()] if curr.ndim == 0 else curr


def jacobi_eval_normalized(p: JacobiParams, x: ArrayLike) -> Number:
    # Ratio against the recurrence value at 1, so x = 1 gives exactly 1.
    return jacobi_eval(p, x) / jacobi_eval(p, 1.0)


def gauss_jacobi_nodes(n_nodes: int, alpha: float, beta: float) -> tuple[NDArray, NDArray]:
    """Gauss-Jacobi rule for the weight (1-t)^beta (1+t)^alpha on [-1, 1]."""
    # alpha sits on (1+t): with t = 1 - 2r^2 the disc weight (1-r^2)^gamma is a
    # multiple of (1+t)^gamma. Golub-Welsch on the Jacobi matrix; weights are
    # mu_0 times the squared first eigenvector components. Nodes ascend.
    if n_nodes < 1:
        raise ValueError(f"Gauss-Jacobi rule needs at least one node (got {n_nodes})")
    if not alpha > -1 or not beta > -1:
        raise ValueError(f"Gauss-Jacobi exponents must exceed -1 (alpha={alpha}, beta={beta})")

    # a sits on (1-t), b on (1+t)
    a, b = float(beta), float(alpha)
    k = np.arange(n_nodes, dtype=float)
    s = 2 * k + a + b

    diag = np.empty(n_nodes)
    diag[0] = (b - a) / (a + b + 2)
    if n_nodes > 1:
        diag[1:] = (b * b - a * a) / (s[1:] * (s[1:] + 2))

    off = np.empty(n_nodes - 1)
    if n_nodes > 1:
        # k = 1 written without the (k+a+b)/(s-1) factor, which is 0/0 at a+b = -1
        off[0] = math.sqrt(4 * (1 + a) * (1 + b) / ((2 + a + b) ** 2 * (3 + a + b)))
        kk = k[2:]
        ss = s[2:]
        off[1:] = np.sqrt(4 * kk * (kk + a) * (kk + b) * (kk + a + b) / (ss * ss * (ss + 1) * (ss - 1)))

    mu0 = math.exp((a + b + 1) * math.log(2.0) + betaln(a + 1, b + 1))
    if n_nodes == 1:
        return diag.copy(), np.array([mu0])

    nodes, vectors = eigh_tridiagonal(diag, off)
    weights = mu0 * vectors[0, :] ** 2

    logger.debug(f"Gauss-Jacobi rule: n={n_nodes}, alpha={alpha}, beta={beta}")
    return nodes, weights
