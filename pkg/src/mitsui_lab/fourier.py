"""Trigonometric approximation of the indicator of a small box on a torus
(R/Z)^d times a finite abelian group of components.

The box indicator is enlarged by delta = 1/(4M) per side, smoothed with a
normalised box kernel of half-width delta and then truncated by a Fejer
(triangular) taper of bandwidth Y.  With phi the smoothed indicator and S
the trigonometric polynomial,

    1_P = S + G + H,   G = 1_P - phi (supported in the 1/(2M)-margin),
                       H = phi - S  (small away from the margin's edges).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

# a box side may be at most this fraction of the circle (or the whole circle)
MAX_SIDE = 0.2


@dataclass(frozen=True)
class TorusBox:
    """Open box {x : |x_i - c_i| < h_i (mod 1)}; h_i >= 1/2 means the full circle."""

    center: tuple
    half_widths: tuple

    @property
    def dimension(self) -> int:
        return len(self.center)

    def is_full(self, i) -> bool:
        return self.half_widths[i] >= 0.5

    def volume(self) -> float:
        return float(np.prod([min(2 * h, 1.0) for h in self.half_widths]))

    def contains(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        ok = np.ones(x.shape[0], dtype=bool)
        for i, (c, h) in enumerate(zip(self.center, self.half_widths)):
            if not self.is_full(i):
                ok &= np.abs(_wrap(x[:, i] - c)) < h
        return ok


def _wrap(x):
    """Representative in [-1/2, 1/2)."""
    return np.mod(x + 0.5, 1.0) - 0.5


def _axis_coefficients(c: float, h: float, Y: int, delta: float) -> np.ndarray:
    """Coefficients for frequencies -Y..Y on one axis."""
    k = np.arange(-Y, Y + 1)
    if h >= 0.5:
        return (k == 0).astype(complex)
    half = h + delta
    with np.errstate(divide="ignore", invalid="ignore"):
        box = np.where(k == 0, 2 * half, np.sin(2 * math.pi * k * half) / (math.pi * k))
    kern = np.sinc(2 * k * delta)
    taper = 1 - np.abs(k) / (Y + 1)
    return box * kern * taper * np.exp(-2j * math.pi * k * c)


def _axis_smoothed(x: np.ndarray, c: float, h: float, delta: float) -> np.ndarray:
    """Enlarged box indicator convolved with the box kernel: a trapezoid."""
    if h >= 0.5:
        return np.ones_like(x)
    d = np.abs(_wrap(x - c))
    return np.clip((h + 2 * delta - d) / (2 * delta), 0.0, 1.0)


@dataclass
class TorusIndicatorApprox:
    box: TorusBox
    component_orders: tuple     # invariants of the finite component group
    component: tuple            # the component g0 carrying P
    Y: int
    M: float
    axis_coefficients: list     # per axis, array over frequencies -Y..Y
    character_weights: np.ndarray   # conj(chi(g0)) / |G| for every character chi
    residual_bound: float = float("nan")       # sup |1_P - S - G| off the margin
    residual_sup_all: float = float("nan")     # sup |1_P - S - G| over the whole grid
    margin_volume: float = float("nan")

    @property
    def dimension(self) -> int:
        return self.box.dimension

    @property
    def delta(self) -> float:
        return 1 / (4 * self.M)

    @property
    def group_order(self) -> int:
        return int(np.prod(self.component_orders)) if self.component_orders else 1

    @property
    def c0(self) -> float:
        """Coefficient of the trivial frequency with the trivial character."""
        v = np.prod([a[self.Y] for a in self.axis_coefficients]) * self.character_weights[0]
        return float(v.real)

    def characters(self):
        """Character index tuples k; chi_k(g) = exp(2 pi i sum k_j g_j / e_j)."""
        return list(product(*[range(e) for e in self.component_orders]))

    def coefficient(self, xi, chi_index: int = 0) -> complex:
        xi = tuple(xi)
        if any(abs(k) > self.Y for k in xi):
            return 0j
        v = 1 + 0j
        for a, k in zip(self.axis_coefficients, xi):
            v *= a[k + self.Y]
        return complex(v * self.character_weights[chi_index])

    def coefficients(self) -> np.ndarray:
        """Dense array of shape (|G|, 2Y+1, ..., 2Y+1)."""
        out = self.character_weights.reshape((-1,) + (1,) * self.dimension)
        grid = np.ones((1,) * self.dimension, dtype=complex)
        for i, a in enumerate(self.axis_coefficients):
            shape = [1] * self.dimension
            shape[i] = -1
            grid = grid * a.reshape(shape)
        return out * grid[None]

    def frequency_count(self) -> int:
        return self.group_order * int(np.prod([np.count_nonzero(a) for a in self.axis_coefficients]))

    def max_abs_coefficient(self) -> float:
        m = float(np.prod([np.max(np.abs(a)) for a in self.axis_coefficients]))
        return m * float(np.max(np.abs(self.character_weights)))

    # evaluation on separable grids ---------------------------------------
    def axis_sums(self, grids: list) -> list:
        out = []
        k = np.arange(-self.Y, self.Y + 1)
        for a, x in zip(self.axis_coefficients, grids):
            out.append(np.real(np.exp(2j * math.pi * np.outer(x, k)) @ a))
        return out

    def component_factor(self, g) -> float:
        """sum_chi c_chi chi(g) = 1 if g == g0 else 0."""
        v = 0j
        for w, kk in zip(self.character_weights, self.characters()):
            v += w * np.exp(2j * math.pi * sum(kj * gj / e for kj, gj, e in
                                              zip(kk, g, self.component_orders)))
        return float(v.real)

    def measure_residual(self, points_per_axis: int | None = None) -> tuple[float, float]:
        """Grid sup of |1_P - S - G|, off the margin and overall, on the carrying component."""
        n = points_per_axis or 10 * self.Y
        x = np.arange(n) / n
        d = self.dimension
        S_axes = self.axis_sums([x] * d)
        phi_axes, ind_axes, enl_axes = [], [], []
        for i in range(d):
            c, h = self.box.center[i], self.box.half_widths[i]
            phi_axes.append(_axis_smoothed(x, c, h, self.delta))
            if h >= 0.5:
                ind_axes.append(np.ones(n, bool))
                enl_axes.append(np.ones(n, bool))
            else:
                dist = np.abs(_wrap(x - c))
                ind_axes.append(dist < h)
                enl_axes.append(dist < h + 2 * self.delta)
        S = _outer(S_axes) * self.component_factor(self.component)
        phi = _outer(phi_axes)
        ind = _outer(ind_axes)
        margin = (_outer(enl_axes) > 0.5) & (ind < 0.5)
        G = ind - phi
        resid = np.abs(ind - S - G)
        off = resid[~margin]
        return (float(off.max()) if off.size else 0.0), float(resid.max())


def _outer(parts):
    out = parts[0].astype(float)
    for p in parts[1:]:
        out = np.multiply.outer(out, p.astype(float))
    return out


def fourier_approximate_indicator(P: TorusBox, component_orders=(), Y: int = 100, M: float = 20,
                                  component=None, measure: bool = True) -> TorusIndicatorApprox:
    """Coefficients of the smoothed, tapered approximation to 1_P on the
    component ``component`` (default the identity) of the torus."""
    if Y < 1 or M <= 1:
        raise ValueError("need Y >= 1 and M > 1")
    for h in P.half_widths:
        if h < 0:
            raise ValueError("negative half-width")
        if MAX_SIDE + 1e-12 < 2 * h < 1.0:
            raise ValueError("box side must be at most 1/5 of the circle (or the whole circle)")
    orders = tuple(int(e) for e in component_orders)
    g0 = tuple(component) if component is not None else (0,) * len(orders)
    delta = 1 / (4 * M)
    axes = [_axis_coefficients(c, h, int(Y), delta) for c, h in zip(P.center, P.half_widths)]
    G = int(np.prod(orders)) if orders else 1
    weights = []
    for kk in product(*[range(e) for e in orders]):
        ph = sum(kj * gj / e for kj, gj, e in zip(kk, g0, orders))
        weights.append(np.exp(-2j * math.pi * ph) / G)
    approx = TorusIndicatorApprox(P, orders, g0, int(Y), float(M), axes, np.array(weights))
    enlarged = float(np.prod([1.0 if h >= 0.5 else min(2 * h + 4 * delta, 1.0) for h in P.half_widths]))
    approx.margin_volume = enlarged - P.volume()
    if measure:
        approx.residual_bound, approx.residual_sup_all = approx.measure_residual()
    return approx
