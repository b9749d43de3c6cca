"""Sampled functions on a uniform grid with integer-aligned compact support.

A function is represented by its values at the nodes ``x_j = j / S`` for
``k_min * S <= j < k_max * S`` where ``S`` is the number of samples per unit
length and ``[k_min, k_max)`` is an integer interval.  Evaluation outside the
support is exactly zero.  All L2 pairings use the left-endpoint rectangle
rule at spacing ``1/S``, i.e. samples are treated as the function's values.

Powers of two are the natural choice for ``S`` (dyadic shifts and dilations
stay grid-exact), but any positive integer is accepted: rational dilations
such as 3/2 produce sample rates like 96 that are not powers of two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


class GridError(ValueError):
    """A requested operation is not exact on the sampling grid."""


def _as_int(x, what):
    r = round(float(x))
    if abs(float(x) - r) > 1e-9:
        raise GridError(f"{what} = {x} is not an integer")
    return int(r)


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Complex samples of a compactly supported function on ``(1/S) Z``."""

    samples_per_unit: int
    k_min: int
    k_max: int
    values: np.ndarray

    def __post_init__(self):
        if self.samples_per_unit < 1:
            raise ValueError("samples_per_unit must be a positive integer")
        if self.k_max <= self.k_min:
            raise ValueError("support interval is empty")
        vals = np.ascontiguousarray(np.asarray(self.values, dtype=np.complex128))
        if vals.ndim != 1 or len(vals) != self.n_cells * self.samples_per_unit:
            raise ValueError(
                f"values must have length (k_max-k_min)*S = "
                f"{self.n_cells * self.samples_per_unit}, got {vals.shape}"
            )
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def n_cells(self) -> int:
        return self.k_max - self.k_min

    @property
    def j_min(self) -> int:
        """Global index of the first sample (x = j_min / S)."""
        return self.k_min * self.samples_per_unit

    def grid(self) -> np.ndarray:
        s = self.samples_per_unit
        return np.arange(self.k_min * s, self.k_max * s) / s

    def norm(self) -> float:
        return math.sqrt(max(inner_product(self, self).real, 0.0))


@dataclass(frozen=True)
class TFShift:
    """Time-frequency shift parameters (u, eta) for pi(u, eta)."""

    u: float
    eta: float

    def grid_exact(self, samples_per_unit: int) -> bool:
        return abs(self.u * samples_per_unit - round(self.u * samples_per_unit)) < 1e-9


def sample_function(recipe, support, samples_per_unit: int) -> SampledFunction:
    """Sample a named built-in (or a custom table) on the given grid.

    Parameters
    ----------
    recipe : str or tuple
        ``"gaussian"`` for exp(-x^2), ``"box"`` or ``("box", a, b)`` for the
        indicator of [a, b) (default [0, 1)), ``"box_sine"`` for
        1_[0,1)(x) sin(pi x), or ``("table", values)`` for explicit samples.
    support : (int, int)
        Integer interval [k_min, k_max).
    samples_per_unit : int
        Grid density S >= 2.
    """
    k0, k1 = support
    if k0 != int(k0) or k1 != int(k1):
        raise ValueError("support bounds must be integers")
    k0, k1 = int(k0), int(k1)
    if k1 <= k0:
        raise ValueError("support interval is empty")
    s = int(samples_per_unit)
    if s < 2:
        raise ValueError("samples_per_unit must be >= 2")

    name, args = (recipe, ()) if isinstance(recipe, str) else (recipe[0], tuple(recipe[1:]))
    x = np.arange(k0 * s, k1 * s) / s
    if name == "gaussian":
        vals = np.exp(-(x**2))
    elif name == "box":
        a, b = args if args else (0.0, 1.0)
        if not b > a:
            raise ValueError("box(a, b) requires b > a")
        vals = ((x >= a - 1e-12) & (x < b - 1e-12)).astype(float)
    elif name == "box_sine":
        vals = np.where((x >= -1e-12) & (x < 1.0 - 1e-12), np.sin(np.pi * x), 0.0)
    elif name == "table":
        (vals,) = args
        vals = np.asarray(vals, dtype=np.complex128)
        if len(vals) != (k1 - k0) * s:
            raise ValueError(
                f"custom table length {len(vals)} does not match support*S = {(k1 - k0) * s}"
            )
    else:
        raise ValueError(f"unknown recipe {name!r}")
    return SampledFunction(s, k0, k1, np.asarray(vals, dtype=np.complex128))


def inner_product(f: SampledFunction, g: SampledFunction) -> complex:
    """Rectangle-rule L2 pairing (1/S) sum f(x_j) conj(g(x_j)).

    Supports may differ; the functions are zero outside their supports.
    """
    if f.samples_per_unit != g.samples_per_unit:
        raise GridError(
            f"mismatched sample rates {f.samples_per_unit} != {g.samples_per_unit}"
        )
    s = f.samples_per_unit
    j0 = max(f.j_min, g.j_min)
    j1 = min(f.k_max * s, g.k_max * s)
    if j1 <= j0:
        return 0.0 + 0.0j
    fv = f.values[j0 - f.j_min : j1 - f.j_min]
    gv = g.values[j0 - g.j_min : j1 - g.j_min]
    return complex(np.vdot(gv, fv)) / s


def tf_shift(f: SampledFunction, shift) -> SampledFunction:
    """Apply pi(u, eta): x -> exp(2 pi i eta x) f(x - u).

    The time shift u must be grid-exact (u * S integer); the support is
    extended to the integer hull of the shifted support.  The frequency
    shift eta is an exact pointwise modulation for any real eta.
    """
    u, eta = (shift.u, shift.eta) if isinstance(shift, TFShift) else shift
    s = f.samples_per_unit
    du = _as_int(float(u) * s, "u * samples_per_unit")
    j0 = f.j_min + du
    k0 = j0 // s
    k1 = -((-(j0 + len(f.values))) // s)  # ceil division
    out = np.zeros((k1 - k0) * s, dtype=np.complex128)
    off = j0 - k0 * s
    out[off : off + len(f.values)] = f.values
    x = np.arange(k0 * s, k1 * s) / s
    out *= np.exp(2j * np.pi * float(eta) * x)
    return SampledFunction(s, k0, k1, out)


def fourier_transform(
    f: SampledFunction, out_S: int | None = None, out_support=None
) -> SampledFunction:
    """Trigonometric-sum Fourier transform onto a requested output grid.

    Computes ghat(w_m) = (1/S) sum_j f(x_j) exp(-2 pi i x_j w_m), i.e. the
    rectangle-rule quadrature of the Fourier integral at the output nodes.
    By default the output grid mirrors the input: same sample rate, support
    the symmetric hull [-c, c) with c = max(|k_min|, |k_max|, 1).
    """
    s_out = int(out_S) if out_S is not None else f.samples_per_unit
    if out_support is None:
        c = max(abs(f.k_min), abs(f.k_max), 1)
        c = max(min(c, f.samples_per_unit // 2), 1)  # clip to the Nyquist range
        out_support = (-c, c)
    k0, k1 = int(out_support[0]), int(out_support[1])
    if k1 <= k0:
        raise ValueError("output support interval is empty")
    # the sampled-sum transform is S-periodic in w; past S/2 the output is
    # the alias image, not the transform
    if max(abs(k0), abs(k1)) * 2 > f.samples_per_unit:
        raise GridError(
            f"output frequencies reach the alias image: need |w| <= S/2 = "
            f"{f.samples_per_unit // 2}; raise samples_per_unit"
        )
    x = f.grid()
    w = np.arange(k0 * s_out, k1 * s_out) / s_out
    out = np.empty(len(w), dtype=np.complex128)
    block = max(1, 2**22 // max(len(x), 1))
    for i in range(0, len(w), block):
        wb = w[i : i + block]
        out[i : i + block] = np.exp(-2j * np.pi * np.outer(wb, x)) @ f.values
    out /= f.samples_per_unit
    return SampledFunction(s_out, k0, k1, out)
