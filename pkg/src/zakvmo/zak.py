r"""Discrete Zak transform on the fundamental domain [0,1)^2.

For a sampled function f the transform is the finite sum

    Zf(x, w) = sum_k f(x + k) exp(-2 pi i k w),

evaluated at nodes (j/nx, m/nw) with no endpoint duplication.  Because the
sum over support cells is finite, the node values are exact for the sampled
data.  Values off the fundamental domain follow from the quasi-periodic
extension Zf(x + m, w + n) = exp(2 pi i m w) Zf(x, w); phases are computed
on demand, never stored.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import GridError, SampledFunction, fourier_transform, tf_shift


class AliasingError(ValueError):
    """The omega grid is too coarse for the function's support cells."""


@dataclass(eq=False)
class ZakGrid:
    """Zak values on the nx-by-nw node grid of [0,1)^2.

    ``source_cells`` records the integer support [k_min, k_max) of the
    originating function: each x-row of ``values`` is then exactly the
    trigonometric polynomial sum_k f(x+k) e^{-2 pi i k w} with k confined to
    that interval, which downstream consumers exploit for exact
    omega-integration.
    """

    nx: int
    nw: int
    values: np.ndarray
    source_S: int
    source_cells: tuple[int, int] | None = None


def zak_transform(f: SampledFunction, nx: int, nw: int) -> ZakGrid:
    """Evaluate the Zak transform of ``f`` at the (j/nx, m/nw) nodes.

    Requires nx to divide f.samples_per_unit (so the x-nodes are sample
    nodes) and nw >= number of support cells (so the omega direction is
    alias-free and the transform is unitary / invertible).
    """
    s = f.samples_per_unit
    if nx < 1 or s % nx != 0:
        raise GridError(f"nx = {nx} must divide samples_per_unit = {s}")
    if nw < f.n_cells:
        raise AliasingError(f"nw = {nw} < {f.n_cells} support cells of f")
    step = s // nx
    seq = f.values.reshape(f.n_cells, s)[:, ::step].T  # (nx, n_cells)
    kvec = np.arange(f.k_min, f.k_max)
    phases = np.exp(-2j * np.pi * np.outer(kvec, np.arange(nw) / nw))
    return ZakGrid(nx, nw, seq @ phases, s, (f.k_min, f.k_max))


def _node_index(val, n: int, what: str) -> int:
    if isinstance(val, (int, Fraction)):
        t = Fraction(val) * n
        if t.denominator != 1:
            raise GridError(f"{what} = {val} is not on the 1/{n} grid")
        return int(t)
    t = float(val) * n
    r = round(t)
    if abs(t - r) > 1e-9:
        raise GridError(f"{what} = {val} is not on the 1/{n} grid")
    return int(r)


def extended_values(Z: ZakGrid, ix, iw) -> np.ndarray:
    """Quasi-periodically extended values at integer node indices.

    ``ix`` and ``iw`` are (broadcastable) arrays of global node indices,
    addressing the points (ix / nx, iw / nw) anywhere in the plane.
    """
    ix = np.asarray(ix, dtype=np.int64)
    iw = np.asarray(iw, dtype=np.int64)
    wrap = ix // Z.nx
    jm = ix - wrap * Z.nx
    mm = np.mod(iw, Z.nw)
    phase = np.exp(2j * np.pi * wrap * (mm / Z.nw))
    return phase * Z.values[jm, mm]


def zak_extend(Z: ZakGrid, x, w) -> complex:
    """Evaluate the quasi-periodic extension at a single node (x, w).

    Both coordinates must lie on grid nodes modulo 1 (pass Fractions for
    exact queries); off-node queries raise GridError rather than
    interpolating.
    """
    ix = _node_index(x, Z.nx, "x")
    iw = _node_index(w, Z.nw, "w")
    return complex(extended_values(Z, np.array(ix), np.array(iw)))


def rolled(Z: ZakGrid, dj: int, dm: int) -> np.ndarray:
    """Full-grid values of Zf(x - dj/nx, w - dm/nw) with extension phases."""
    ix = (np.arange(Z.nx) - dj)[:, None]
    iw = (np.arange(Z.nw) - dm)[None, :]
    return extended_values(Z, ix, iw)


def inverse_zak(Z: ZakGrid, support) -> SampledFunction:
    """Recover samples from Zak values via discrete Fourier coefficients.

    The value at x + k is read off as the k-th inverse coefficient
    (1/nw) sum_m Z(x, w_m) exp(2 pi i k m / nw); exact whenever nw is at
    least the number of support cells (the omega rows are trigonometric
    polynomials of that many modes).  Output sample rate is nx.
    """
    k0, k1 = int(support[0]), int(support[1])
    if k1 - k0 > Z.nw:
        raise AliasingError(f"support spans {k1 - k0} cells > nw = {Z.nw}")
    kvec = np.arange(k0, k1)
    phases = np.exp(2j * np.pi * np.outer(np.arange(Z.nw) / Z.nw, kvec))
    cells = Z.values @ phases / Z.nw  # (nx, n_cells)
    return SampledFunction(Z.nx, k0, k1, cells.T.reshape(-1))


def zak_l2_norm(Z: ZakGrid) -> float:
    """Rectangle-rule L2([0,1]^2) norm of the grid values."""
    return float(np.sqrt(np.mean(np.abs(Z.values) ** 2)))


@dataclass(frozen=True)
class ZakIdentityReport:
    """Sup-norm deviations of the quasi-periodicity and covariance identities."""

    dev_quasiperiod: float  # (a) Zf(x+m, w+n) = e^{2 pi i m w} Zf(x, w)
    dev_shift: float  # (b) Z pi(u,eta) f = e^{2 pi i eta x} Zf(x-u, w-eta)
    dev_integer_shift: float  # (c) Z pi(m,n) f = e^{2 pi i (n x - m w)} Zf
    dev_fourier: float  # (d) Z fhat = e^{2 pi i x w} Zf(-w, x)

    def as_dict(self) -> dict:
        return {
            "a_quasiperiod": self.dev_quasiperiod,
            "b_shift": self.dev_shift,
            "c_integer_shift": self.dev_integer_shift,
            "d_fourier": self.dev_fourier,
        }


def check_zak_identities(f: SampledFunction, nx: int | None = None, nw: int | None = None) -> ZakIdentityReport:
    """Measure the four Zak identities on the common node grid.

    Identity (d) compares the Zak transform of the quadrature Fourier
    transform against the phase-twisted coordinate swap of Zf, so its
    deviation carries the Fourier quadrature error; (a)-(c) are exact up to
    rounding.  Requires nx == nw for the coordinate swap in (d).
    """
    s = f.samples_per_unit
    n = nx if nx is not None else min(s, 64)
    m = nw if nw is not None else n
    if n != m:
        raise GridError("identity (d) needs nx == nw (coordinate swap)")
    Z = zak_transform(f, n, m)
    xg = np.arange(n) / n
    wg = np.arange(m) / m

    # (a): recompute the defining sum at (x + p, w + q) and compare with the
    # extension phase; integer q drops out of the exponent exactly.
    dev_a = 0.0
    seq = f.values.reshape(f.n_cells, s)[:, :: s // n].T
    for p, q in ((1, 0), (0, 1), (1, 1), (2, 3)):
        kvec = np.arange(f.k_min - p, f.k_max - p)  # k' = k - p reindexes the sum
        phases = np.exp(-2j * np.pi * np.outer(kvec, wg))
        direct = seq @ phases
        predicted = np.exp(2j * np.pi * p * wg)[None, :] * Z.values
        dev_a = max(dev_a, float(np.max(np.abs(direct - predicted))))

    # (b): grid-exact fractional shift.
    u, eta = Fraction(1, 2), Fraction(1, 4)
    du, de = _node_index(u, n, "u"), _node_index(eta, m, "eta")
    lhs = zak_transform(tf_shift(f, (float(u), float(eta))), n, m).values
    rhs = np.exp(2j * np.pi * float(eta) * xg)[:, None] * rolled(Z, du, de)
    dev_b = float(np.max(np.abs(lhs - rhs)))

    # (c): integer lattice shifts.
    dev_c = 0.0
    for p, q in ((1, 1), (2, -1)):
        lhs = zak_transform(tf_shift(f, (p, q)), n, m).values
        rhs = np.exp(2j * np.pi * (q * xg[:, None] - p * wg[None, :])) * Z.values
        dev_c = max(dev_c, float(np.max(np.abs(lhs - rhs))))

    # (d): Zak of the Fourier transform vs the swapped-coordinate phase twist.
    fhat = fourier_transform(f)
    if fhat.n_cells > m:
        raise AliasingError("Fourier output support too wide for nw")
    Zh = zak_transform(fhat, n, m).values
    ij = np.arange(n)
    swap = extended_values(Z, -ij[None, :], ij[:, None])  # Zf(-w_m, x_j) at [j, m]
    rhs = np.exp(2j * np.pi * np.outer(xg, wg)) * swap
    dev_d = float(np.max(np.abs(Zh - rhs)))

    return ZakIdentityReport(dev_a, dev_b, dev_c, dev_d)


def zak_to_csv(Z: ZakGrid, path_or_buf, config_hash: str | None = None) -> None:
    """Write the grid as CSV rows (x, omega, re, im)."""
    buf = io.StringIO()
    if config_hash:
        buf.write(f"# config {config_hash}\n")
    buf.write("x,omega,re,im\n")
    for j in range(Z.nx):
        x = j / Z.nx
        row = Z.values[j]
        for m in range(Z.nw):
            v = row[m]
            buf.write(f"{x!r},{m / Z.nw!r},{float(v.real)!r},{float(v.imag)!r}\n")
    data = buf.getvalue()
    if hasattr(path_or_buf, "write"):
        path_or_buf.write(data)
    else:
        with open(path_or_buf, "w") as fh:
            fh.write(data)
