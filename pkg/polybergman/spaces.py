# Hilbert-space layer over L^{2,gamma} of the unit disc: quadrature, inner products,
# basis expansion, projections and membership tests. Projections work in coefficient
# space; project_true_kernel keeps the kernel-integral form for cross-checks.

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .config import config
from .disc_poly import Orders, WeightParam, as_points, dbar_constant, eval_jacobi_form, norm_const
from .kernels import KernelSpec, true_kernel_closed
from .special_fn import gauss_jacobi_nodes

logger = logging.getLogger(__name__)

PAYLOAD_KEYS = ("gamma", "M", "J", "coeffs")


def _frozen(values: NDArray) -> NDArray:
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class QuadRule:
    """Product rule on the disc: Gauss-Jacobi in t = 1 - 2r^2 times uniform angles."""
    # nodes and weights are flattened radial-major with ascending radii
    gamma: WeightParam
    radii: NDArray
    radial_weights: NDArray
    angles: NDArray
    nodes: NDArray
    weights: NDArray

    @property
    def radial_nodes(self) -> int:
        return self.radii.size

    @property
    def angular_nodes(self) -> int:
        return self.angles.size


@dataclass(frozen=True)
class SampledFunction:
    func: Callable[[NDArray], ArrayLike]
    # declared poly-Bergman order: f = sum_{j<=order} zbar^j phi_j(z)
    order: Optional[int] = None
    label: str = "f"
    # impure callables are evaluated one node at a time in node order
    pure: bool = True

    def __call__(self, z: ArrayLike) -> NDArray:
        z = as_points(z)
        return np.broadcast_to(np.asarray(self.func(z), dtype=complex), z.shape).copy()

    def at_nodes(self, q: QuadRule) -> NDArray:
        if self.pure:
            return self(q.nodes)
        return np.array([complex(self.func(as_points(node))) for node in q.nodes], dtype=complex)


@dataclass(frozen=True, eq=False)
class CoeffTable:
    """Coefficients a_{m,j} of f = sum a_{m,j} R^gamma_{m,j}, 0 <= m <= M, 0 <= j <= J."""
    gamma: WeightParam
    coeffs: NDArray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex)
        if coeffs.ndim != 2:
            raise ValueError(f"Coefficient table must be two-dimensional (got shape {coeffs.shape})")
        object.__setattr__(self, "coeffs", _frozen(coeffs))

    @property
    def M(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def J(self) -> int:
        return self.coeffs.shape[1] - 1

    def norms(self) -> NDArray:
        return np.array([[norm_const(self.gamma, Orders(m, j)) for j in range(self.J + 1)] for m in range(self.M + 1)])

    def energy(self) -> float:
        # Plancherel: sum d_{m,j} |a_{m,j}|^2
        return float(np.sum(self.norms() * np.abs(self.coeffs) ** 2))

    def tail_energy(self, n: int) -> float:
        return float(np.sum((self.norms() * np.abs(self.coeffs) ** 2)[:, n + 1:]))

    def column(self, n: int) -> "CoeffTable":
        kept = np.zeros_like(self.coeffs)
        if n <= self.J:
            kept[:, n] = self.coeffs[:, n]
        return CoeffTable(self.gamma, kept)

    def truncated(self, n: int) -> "CoeffTable":
        return CoeffTable(self.gamma, self.coeffs[:, : n + 1])

    def dbar(self, k: int) -> "CoeffTable":
        """Coefficients of d^k f / dzbar^k in the R^{gamma+k} basis."""
        # column j >= k moves to j - k scaled by dbar_constant; columns j < k vanish
        if k < 0:
            raise ValueError(f"Derivative order must be nonnegative (got {k})")
        width = max(self.J - k, 0) + 1
        moved = np.zeros((self.M + 1, width), dtype=complex)
        for m in range(self.M + 1):
            for j in range(k, self.J + 1):
                moved[m, j - k] = dbar_constant(self.gamma, m, j, k) * self.coeffs[m, j]
        return CoeffTable(self.gamma.shifted(k), moved)

    def to_payload(self) -> dict:
        flat = self.coeffs.reshape(-1)
        return {
            "gamma": float(self.gamma.gamma),
            "M": self.M,
            "J": self.J,
            "coeffs": [[float(c.real), float(c.imag)] for c in flat],
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "CoeffTable":
        missing = [key for key in PAYLOAD_KEYS if key not in payload]
        if missing:
            raise ValueError(f"Coefficient payload is missing keys: {missing}")
        M, J = int(payload["M"]), int(payload["J"])
        pairs = np.asarray(payload["coeffs"], dtype=float)
        if pairs.shape != ((M + 1) * (J + 1), 2):
            raise ValueError(f"Coefficient payload has shape {pairs.shape}, expected {((M + 1) * (J + 1), 2)}")
        coeffs = (pairs[:, 0] + 1j * pairs[:, 1]).reshape(M + 1, J + 1)
        return cls(WeightParam(float(payload["gamma"])), coeffs)


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    residual: float
    norm_sq: float
    n: int


def build_quad_rule(g: WeightParam, radial_nodes: Optional[int] = None, angular_nodes: Optional[int] = None) -> QuadRule:
    # t = 1 - 2r^2: int_0^1 h(r) (1-r^2)^gamma r dr = 2^(-gamma-2) int h (1+t)^gamma dt
    radial_nodes = config.RADIAL_NODES if radial_nodes is None else radial_nodes
    angular_nodes = config.ANGULAR_NODES if angular_nodes is None else angular_nodes
    if radial_nodes < 1 or angular_nodes < 1:
        raise ValueError(f"Quadrature node counts must be positive (got {radial_nodes}, {angular_nodes})")

    t, wt = gauss_jacobi_nodes(radial_nodes, g.gamma, 0.0)
    # t ascending means r descending
    t, wt = t[::-1], wt[::-1]
    radii = np.sqrt((1 - t) / 2)
    radial_weights = wt * 2.0 ** (-g.gamma - 2)

    angles = 2 * math.pi * np.arange(angular_nodes) / angular_nodes
    nodes = (radii[:, None] * np.exp(1j * angles)[None, :]).reshape(-1)
    weights = np.repeat(radial_weights * (2 * math.pi / angular_nodes), angular_nodes)

    logger.debug(f"Disc rule gamma={g.gamma}: {radial_nodes} radial x {angular_nodes} angular nodes")
    return QuadRule(
        gamma=g,
        radii=_frozen(np.ascontiguousarray(radii)),
        radial_weights=_frozen(np.ascontiguousarray(radial_weights)),
        angles=_frozen(angles),
        nodes=_frozen(nodes),
        weights=_frozen(weights),
    )


def integrate(values: ArrayLike, q: QuadRule) -> complex:
    return complex(np.sum(np.asarray(values) * q.weights))


def inner_product(f: SampledFunction, h: SampledFunction, q: QuadRule) -> complex:
    # <f, h>_gamma = int f conj(h) d mu_gamma
    return integrate(f.at_nodes(q) * np.conj(h.at_nodes(q)), q)


def norm_sq(f: SampledFunction, q: QuadRule) -> float:
    values = f.at_nodes(q)
    return integrate(np.abs(values) ** 2, q).real


def gram_matrix(indices: list[Orders], q: QuadRule) -> NDArray:
    """Pairwise inner products of R^gamma_{m,n} over ``indices``."""
    values = [eval_jacobi_form(q.gamma, o, q.nodes) for o in indices]
    size = len(indices)
    gram = np.zeros((size, size), dtype=complex)
    for a in range(size):
        for b in range(size):
            gram[a, b] = integrate(values[a] * np.conj(values[b]), q)
    return gram


def _coefficients(values: NDArray, q: QuadRule, M: int, columns: range) -> NDArray:
    coeffs = np.zeros((M + 1, max(columns) + 1), dtype=complex)
    for m in range(M + 1):
        for j in columns:
            o = Orders(m, j)
            coeffs[m, j] = integrate(values * np.conj(eval_jacobi_form(q.gamma, o, q.nodes)), q) / norm_const(q.gamma, o)
    return coeffs


def expand(f: SampledFunction, M: int, J: int, q: QuadRule) -> CoeffTable:
    # a_{m,j} = <f, R_{m,j}> / d_{m,j} over the box m <= M, j <= J
    if M < 0 or J < 0:
        raise ValueError(f"Expansion box must be nonnegative (got M={M}, J={J})")
    table = CoeffTable(q.gamma, _coefficients(f.at_nodes(q), q, M, range(J + 1)))
    logger.debug(f"Expanded {f.label} on a {M + 1}x{J + 1} box")
    return table


def synthesize(table: CoeffTable, label: str = "f") -> SampledFunction:
    terms = [(Orders(m, j), table.coeffs[m, j]) for m in range(table.M + 1) for j in range(table.J + 1) if table.coeffs[m, j] != 0]
    order = max((o.n for o, _ in terms), default=0)

    def evaluate(z: NDArray) -> NDArray:
        total = np.zeros(z.shape, dtype=complex)
        for o, coeff in terms:
            total = total + coeff * eval_jacobi_form(table.gamma, o, z)
        return total

    return SampledFunction(evaluate, order=order, label=label)


def project_true(f: SampledFunction, n: int, M: int, q: QuadRule) -> SampledFunction:
    """Orthogonal projection onto the n-th true poly-Bergman space, truncated at m <= M."""
    values = f.at_nodes(q)
    coeffs = np.zeros((M + 1, n + 1), dtype=complex)
    coeffs[:, n] = _coefficients(values, q, M, range(n, n + 1))[:, n]
    return synthesize(CoeffTable(q.gamma, coeffs), label=f"P0_{n}({f.label})")


def project_poly(f: SampledFunction, n: int, M: int, q: QuadRule) -> SampledFunction:
    # Sum of the true projections k = 0..n: expand up to the declared order, keep j <= n.
    table = expand(f, M, max(n, f.order or 0), q)
    if table.J > n:
        logger.debug(f"P_{n}({f.label}) drops tail energy {table.tail_energy(n):.3g}")
    return synthesize(table.truncated(n), label=f"P_{n}({f.label})")


def project_true_kernel(f: SampledFunction, n: int, zetas: ArrayLike, q: QuadRule) -> NDArray:
    """Kernel-integral form of the true projection: int f(z) K^gamma_n(zeta, z) d mu_gamma(z)."""
    zetas = np.atleast_1d(as_points(zetas))
    values = f.at_nodes(q)
    spec = KernelSpec(q.gamma, n)
    return np.array([integrate(values * true_kernel_closed(spec, zeta, q.nodes).value, q) for zeta in zetas])


def membership_test(f: SampledFunction, n: int, M: int, J: int, q: QuadRule, tol: Optional[float] = None) -> MembershipResult:
    """Truncated test of f in the n-th weighted poly-Bergman space."""
    # member when the energy of columns j > n stays below tol^2 ||f||^2
    if J <= n:
        raise ValueError(f"Membership test needs J > n (got J={J}, n={n})")
    tol = config.CHECK_TOL if tol is None else tol
    table = expand(f, M, J, q)
    residual = table.tail_energy(n)
    total = norm_sq(f, q)
    return MembershipResult(member=residual < tol ** 2 * total, residual=residual, norm_sq=total, n=n)


def random_polyanalytic(order: int, degree: int, seed: int, g: WeightParam) -> tuple[SampledFunction, CoeffTable]:
    """Seeded finite combination sum_{j<=order, m<=degree} c_{m,j} R^gamma_{m,j}."""
    if order < 0 or degree < 0:
        raise ValueError(f"Order and degree must be nonnegative (got {order}, {degree})")
    rng = np.random.default_rng(seed)
    coeffs = rng.standard_normal((degree + 1, order + 1)) + 1j * rng.standard_normal((degree + 1, order + 1))
    table = CoeffTable(g, coeffs)
    f = synthesize(table, label=f"random({order},{degree},{seed})")
    return SampledFunction(f.func, order=order, label=f.label), table
