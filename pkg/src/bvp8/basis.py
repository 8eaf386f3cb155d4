"""Chebyshev basis terms, their derivatives, and the collocation grid.

The solver expands the free part of the solution in Chebyshev polynomials of
the first kind on [-1, +1], starting at degree 8: the lower degrees span the
same space as the monomial support functions consumed by the constraint
embedding, and keeping them would make the collocation system rank deficient.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

#: Highest derivative order needed anywhere in the solver (the ODE order).
MAX_ORDER = 8

#: Lowest admissible Chebyshev degree; degrees 0..7 duplicate the support span.
MIN_START_DEGREE = 8


def chebyshev_table(z, max_degree: int, max_order: int) -> np.ndarray:
    """Tabulate d^p T_k / dz^p for p = 0..max_order and k = 0..max_degree.

    Differentiating the three-term recurrence T_{k+1} = 2 z T_k - T_{k-1}
    p times gives one uniform recurrence for all orders,

        T^{(p)}_{k+1} = 2 p T^{(p-1)}_k + 2 z T^{(p)}_k - T^{(p)}_{k-1},

    seeded with T_0 = 1 and T_1 = z.  `z` may be a scalar or an array; the
    result has shape (max_order + 1, max_degree + 1) + z.shape.
    """
    z = np.asarray(z, dtype=float)
    table = np.zeros((max_order + 1, max_degree + 1) + z.shape)
    table[0, 0] = 1.0
    if max_degree >= 1:
        table[0, 1] = z
        if max_order >= 1:
            table[1, 1] = 1.0
    for k in range(1, max_degree):
        table[0, k + 1] = 2.0 * z * table[0, k] - table[0, k - 1]
        for p in range(1, max_order + 1):
            table[p, k + 1] = (
                2.0 * p * table[p - 1, k]
                + 2.0 * z * table[p, k]
                - table[p, k - 1]
            )
    return table


@dataclass(frozen=True)
class DomainMap:
    """Affine map between the problem domain [x_i, x_f] and basis domain [-1, +1].

    `c` is the constant slope dz/dx applied once per derivative order when
    basis derivatives are pulled back to the problem domain.
    """

    x_i: float
    x_f: float
    z_0: float = -1.0
    z_f: float = 1.0
    c: float = field(init=False)

    def __post_init__(self):
        if not self.x_f > self.x_i:
            raise ConfigurationError(
                f"degenerate domain: x_f={self.x_f} must exceed x_i={self.x_i}"
            )
        object.__setattr__(self, "c", (self.z_f - self.z_0) / (self.x_f - self.x_i))

    def to_z(self, x):
        # Snap the right endpoint so x_f maps to exactly z_f; the rounding of
        # c * (x_f - x_i) otherwise leaks into high-order basis derivatives.
        z = self.z_0 + self.c * (x - self.x_i)
        if np.ndim(x) == 0:
            return self.z_f if x == self.x_f else z
        return np.where(np.asarray(x) == self.x_f, self.z_f, z)

    def to_x(self, z):
        return self.x_i + (z - self.z_0) / self.c


@dataclass(frozen=True)
class ChebyshevBasis:
    """The m terms T_{start_degree} .. T_{start_degree + m - 1} on [-1, +1]."""

    m: int
    domain_map: DomainMap
    start_degree: int = MIN_START_DEGREE

    def __post_init__(self):
        if self.m < 1:
            raise ConfigurationError(f"need at least one basis term, got m={self.m}")
        if self.start_degree < MIN_START_DEGREE:
            raise ConfigurationError(
                f"start_degree={self.start_degree} overlaps the constraint "
                f"support functions; it must be at least {MIN_START_DEGREE}"
            )

    @property
    def max_degree(self) -> int:
        return self.start_degree + self.m - 1

    def eval(self, z, order: int = 0) -> np.ndarray:
        """Values of d^order T_k / dz^order for the m retained degrees.

        Derivatives are with respect to z; the caller applies the chain-rule
        factor c**order when working in the problem domain.  Output shape is
        z.shape + (m,).
        """
        if not 0 <= order <= MAX_ORDER:
            raise ValueError(f"order must be in 0..{MAX_ORDER}, got {order}")
        z = np.asarray(z, dtype=float)
        if np.any(np.abs(z) > 1.0 + 1e-12):
            raise ValueError("z outside [-1, +1]")
        table = chebyshev_table(z, self.max_degree, order)
        return np.moveaxis(table[order, self.start_degree:], 0, -1)


@dataclass(frozen=True)
class CollocationGrid:
    """Chebyshev-Gauss-Lobatto nodes in both coordinate systems."""

    n_points: int
    z_nodes: np.ndarray
    x_nodes: np.ndarray


def make_grid(domain_map: DomainMap, n_points: int) -> CollocationGrid:
    """Build the CGL grid z_k = -cos(k pi / (n_points - 1)), k = 0..n_points-1.

    The grid is symmetrized exactly (upper half mirrors the lower half, odd
    middle node forced to 0) and the mapped endpoints are snapped to x_i and
    x_f so boundary rows see the exact constraint locations.
    """
    if n_points < 2:
        raise ConfigurationError(f"need at least 2 grid points, got {n_points}")
    n = int(n_points)
    k = np.arange(n)
    z = -np.cos(np.pi * k / (n - 1))
    half = n // 2
    z[n - 1 - np.arange(half)] = -z[:half]
    if n % 2:
        z[half] = 0.0
    x = domain_map.to_x(z)
    x[0] = domain_map.x_i
    x[-1] = domain_map.x_f
    z.flags.writeable = False
    x.flags.writeable = False
    return CollocationGrid(n, z, x)
