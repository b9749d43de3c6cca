r"""Mean-oscillation functionals on sampled 2-D fields.

Implements cube means F_Q, oscillations M_Q(F) = (|F - F_Q|)_Q, the
small-cube suprema S_{eps,U}(F), sliding cube averages F_[r], decay
profiles over dyadic eps, and randomized checkers for the quantitative
inequalities that make bounded/vanishing mean oscillation stable under
products, inverses, affine pullbacks and C^1 multipliers.

Grid conventions: fields live on uniform node grids; cubes are closed
squares with grid-aligned corners, and a cube of side s*h covers exactly
the s cells whose left endpoints lie inside it, so means are left-endpoint
cell averages (exact for fields that are constant per cell).  Fields
derived from a Zak grid carry their omega band structure, and cube means
then integrate the omega direction exactly as trigonometric polynomials;
essinf/esssup on sampled fields are node minima/maxima and are flagged as
grid-level proxies in reports.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import _kernels
from .core import GridError
from .zak import ZakGrid


@dataclass(eq=False)
class ScalarField2D:
    """Complex values on the node grid (x0 + i*hx, w0 + j*hw).

    ``extension`` controls reads outside the stored rectangle: ``"none"``
    raises, ``"periodic"`` tiles by the rectangle, ``"quasiperiodic"``
    applies F(x + m, w) = exp(2 pi i m w) F(x, w) and 1-periodicity in w
    (stored rectangle must be the unit square).  ``omega_modes`` marks rows
    as trigonometric polynomials sum_{k in [k0,k1)} c_k e^{-2 pi i k w}.
    """

    x0: float
    w0: float
    hx: float
    hw: float
    values: np.ndarray
    extension: str = "none"
    omega_modes: tuple[int, int] | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.ndim != 2:
            raise ValueError("field values must be a 2-D array")
        if self.extension not in ("none", "periodic", "quasiperiodic"):
            raise ValueError(f"unknown extension {self.extension!r}")
        if self.extension == "quasiperiodic":
            nx, nw = self.values.shape
            if (
                abs(self.x0) > 1e-12
                or abs(self.w0) > 1e-12
                or abs(nx * self.hx - 1.0) > 1e-9
                or abs(nw * self.hw - 1.0) > 1e-9
            ):
                raise ValueError("quasiperiodic extension requires the unit square")

    @property
    def nx(self) -> int:
        return self.values.shape[0]

    @property
    def nw(self) -> int:
        return self.values.shape[1]

    def window(self, i0: int, j0: int, ni: int, nj: int) -> np.ndarray:
        """Extended values for global index ranges [i0,i0+ni) x [j0,j0+nj)."""
        nx, nw = self.values.shape
        ii = np.arange(i0, i0 + ni)
        jj = np.arange(j0, j0 + nj)
        if self.extension == "none":
            if i0 < 0 or j0 < 0 or i0 + ni > nx or j0 + nj > nw:
                raise GridError("window outside field domain (extension='none')")
            return self.values[i0 : i0 + ni, j0 : j0 + nj]
        jm = np.mod(jj, nw)
        if self.extension == "periodic":
            return self.values[np.mod(ii, nx)][:, jm]
        wrap = ii // nx
        base = self.values[ii - wrap * nx][:, jm]
        return np.exp(2j * np.pi * np.outer(wrap, jm / nw)) * base


def field_from_zak(Z: ZakGrid) -> ScalarField2D:
    """View a Zak grid as a quasi-periodic field on the unit square."""
    return ScalarField2D(
        0.0, 0.0, 1.0 / Z.nx, 1.0 / Z.nw, Z.values, "quasiperiodic", Z.source_cells
    )


def field_from_function(fn, rect, nx: int, nw: int, extension: str = "none") -> ScalarField2D:
    x0, x1, w0, w1 = rect
    hx, hw = (x1 - x0) / nx, (w1 - w0) / nw
    X = x0 + hx * np.arange(nx)
    W = w0 + hw * np.arange(nw)
    return ScalarField2D(x0, w0, hx, hw, fn(X[:, None], W[None, :]), extension)


def random_trig_field(rng, nx: int, nw: int, degree: int = 3, scale: float = 1.0, offset: complex = 0.0) -> ScalarField2D:
    """Random trigonometric polynomial of the given degree on [0,1)^2."""
    c = np.zeros((nx, nw), dtype=np.complex128)
    for a in range(-degree, degree + 1):
        for b in range(-degree, degree + 1):
            amp = scale / (1 + a * a + b * b)
            c[a % nx, b % nw] = amp * (rng.standard_normal() + 1j * rng.standard_normal())
    c[0, 0] += offset
    vals = np.fft.ifft2(c) * (nx * nw)
    return ScalarField2D(0.0, 0.0, 1.0 / nx, 1.0 / nw, vals, "periodic")


@dataclass(frozen=True)
class Cube:
    """Closed axis-aligned square: center (cx, cw), side length delta > 0."""

    cx: float
    cw: float
    side: float

    def __post_init__(self):
        if self.side <= 0:
            raise ValueError("cube side must be positive")

    @property
    def area(self) -> float:
        return self.side * self.side


def remark_cube(k: int, delta: float) -> Cube:
    """The witness cube [k+(1-d)/2, k+(1+d)/2] x [-d/2, d/2]."""
    return Cube(k + 0.5, 0.0, delta)


def _snap(value: float, what: str, tol: float = 1e-6) -> int:
    r = round(value)
    if abs(value - r) > tol:
        raise GridError(f"{what} = {value} is not grid-aligned")
    return int(r)


def _cube_indices(field: ScalarField2D, cube: Cube):
    sx = _snap(cube.side / field.hx, "cube side / hx")
    sy = _snap(cube.side / field.hw, "cube side / hw")
    if sx < 1 or sy < 1:
        raise GridError("cube smaller than one grid cell")
    i0 = _snap((cube.cx - cube.side / 2 - field.x0) / field.hx, "cube x corner")
    j0 = _snap((cube.cw - cube.side / 2 - field.w0) / field.hw, "cube w corner")
    return i0, j0, sx, sy


def _zak_exact_omega_mean(field: ScalarField2D, i0: int, sx: int, b0: float, b1: float) -> complex:
    # Rows are trig polynomials in omega; integrate each mode exactly and
    # average the columns.  Valid for arbitrary real omega intervals.
    nx, nw = field.values.shape
    k0, k1 = field.omega_modes
    idx = np.arange(i0, i0 + sx)
    wrap = idx // nx
    rows = field.values[idx - wrap * nx]
    coef = np.fft.ifft(rows, axis=1)
    ks = np.arange(k0, k1)
    c = coef[:, np.mod(ks, nw)]
    # extension phase e^{2 pi i m w} shifts mode k to kappa = k - m
    kappa = ks[None, :] - wrap[:, None]
    mid, delta = 0.5 * (b0 + b1), b1 - b0
    factor = np.exp(-2j * np.pi * kappa * mid) * np.sinc(kappa * delta)
    return complex(np.mean(np.sum(c * factor, axis=1)))


def mean(F: ScalarField2D, cube: Cube) -> complex:
    """Cube average F_Q over a grid-aligned closed cube.

    Fields with omega band structure (Zak-derived) are integrated exactly
    in the omega direction; otherwise this is the plain cell average.
    """
    i0, j0, sx, sy = _cube_indices(F, cube)
    if F.omega_modes is not None and F.extension == "quasiperiodic":
        b0 = cube.cw - cube.side / 2
        return _zak_exact_omega_mean(F, i0, sx, b0, b0 + cube.side)
    return complex(np.mean(F.window(i0, j0, sx, sy)))


def mean_oscillation(F: ScalarField2D, cube: Cube) -> float:
    """M_Q(F): cube average of |F - F_Q|."""
    i0, j0, sx, sy = _cube_indices(F, cube)
    mu = mean(F, cube)
    return float(np.mean(np.abs(F.window(i0, j0, sx, sy) - mu)))


def _rect_window(field: ScalarField2D, rect):
    x0, x1, w0, w1 = rect
    i0 = _snap((x0 - field.x0) / field.hx, "window x low")
    i1 = _snap((x1 - field.x0) / field.hx, "window x high")
    j0 = _snap((w0 - field.w0) / field.hw, "window w low")
    j1 = _snap((w1 - field.w0) / field.hw, "window w high")
    if i1 <= i0 or j1 <= j0:
        raise ValueError("empty window")
    return i0, j0, i1 - i0, j1 - j0


def _prefix(values: np.ndarray) -> np.ndarray:
    c = np.zeros((values.shape[0] + 1, values.shape[1] + 1), dtype=values.dtype)
    np.cumsum(np.cumsum(values, axis=0), axis=1, out=c[1:, 1:])
    return c


def _box_sums(prefix: np.ndarray, sx: int, sy: int) -> np.ndarray:
    return (
        prefix[sx:, sy:]
        - prefix[:-sx, sy:]
        - prefix[sx:, :-sy]
        + prefix[:-sx, :-sy]
    )


def _admissible_sides(field: ScalarField2D, ni: int, nj: int, eps: float):
    """(side, sx, sy) triples with side^2 < eps, grid-exact in both axes."""
    out = []
    t = 1
    while True:
        side = t * field.hw
        if side * side >= eps or t > nj:
            break
        sx_f = side / field.hx
        sx = round(sx_f)
        if abs(sx_f - sx) < 1e-9 and 1 <= sx <= ni:
            out.append((side, sx, t))
        t += 1
    return out


class _OscScan:
    """Per-size oscillation maxima over all grid-aligned cubes in a window."""

    def __init__(self, field: ScalarField2D, rect, eps: float, stride: int = 1):
        self.i0, self.j0, ni, nj = _rect_window(field, rect)
        self.field = field
        self.stride = int(stride)
        self.window = field.window(self.i0, self.j0, ni, nj)
        self.sides = _admissible_sides(field, ni, nj, eps)
        if not self.sides:
            raise GridError(f"eps = {eps} admits no grid cube inside the window")
        self.prefix = _prefix(self.window)
        self._osc = {}

    def osc_array(self, sx: int, sy: int) -> np.ndarray:
        key = (sx, sy)
        if key not in self._osc:
            means = _box_sums(self.prefix, sx, sy) / (sx * sy)
            self._osc[key] = _kernels.osc_scan(self.window, means, sx, sy, self.stride)
        return self._osc[key]

    def supremum(self, eps: float):
        """(max oscillation, witness cube) over cubes with area < eps."""
        best, best_cube = 0.0, None
        for side, sx, sy in self.sides:
            if side * side >= eps:
                continue
            arr = self.osc_array(sx, sy)
            idx = np.unravel_index(np.argmax(arr), arr.shape)
            val = float(arr[idx])
            if val > best or best_cube is None:
                best = val
                ci = self.i0 + idx[0] * self.stride
                cj = self.j0 + idx[1] * self.stride
                best_cube = Cube(
                    self.field.x0 + (ci + sx / 2) * self.field.hx,
                    self.field.w0 + (cj + sy / 2) * self.field.hw,
                    side,
                )
        return best, best_cube


def osc_supremum(F: ScalarField2D, U, eps: float, stride: int = 1) -> float:
    """S_{eps,U}(F): max of M_Q over grid-aligned cubes Q in U, |Q| < eps.

    The cube family is the exhaustive strided enumeration at grid
    resolution, so the result is a deterministic lower bound for the true
    supremum (stride=1 is exhaustive).
    """
    return _OscScan(F, U, eps, stride).supremum(eps)[0]


@dataclass
class OscillationReport:
    """Decay profile of S_{eps,U} over a dyadic eps sweep."""

    eps_list: list
    s_values: list
    verdict: str  # "vmo-consistent" | "vmo-fail-witness"
    witness: Cube | None
    witness_value: float | None
    floor: float
    monotone: bool

    def as_dict(self) -> dict:
        d = {
            "schema": 1,
            "eps": list(map(float, self.eps_list)),
            "s_values": list(map(float, self.s_values)),
            "verdict": self.verdict,
            "floor": self.floor,
            "monotone": self.monotone,
        }
        if self.witness is not None:
            d["witness"] = {
                "cx": self.witness.cx,
                "cw": self.witness.cw,
                "side": self.witness.side,
                "oscillation": self.witness_value,
            }
        return d

    def to_csv(self, path_or_buf, config_hash: str | None = None) -> None:
        buf = io.StringIO()
        if config_hash:
            buf.write(f"# config {config_hash}\n")
        buf.write("epsilon,S\n")
        for e, s in zip(self.eps_list, self.s_values):
            buf.write(f"{float(e)!r},{float(s)!r}\n")
        data = buf.getvalue()
        if hasattr(path_or_buf, "write"):
            path_or_buf.write(data)
        else:
            with open(path_or_buf, "w") as fh:
                fh.write(data)


def vmo_decay_profile(
    F: ScalarField2D, U, eps_list, floor: float = 0.1, stride: int = 1
) -> OscillationReport:
    """Sweep S_{eps,U}(F) over decreasing eps and classify the tail.

    Verdict is ``vmo-fail-witness`` when the smallest-eps value stays at or
    above ``floor`` (the witness cube is attached), ``vmo-consistent`` when
    the tail falls below it.
    """
    eps_list = list(eps_list)
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("eps_list must be strictly decreasing")
    scan = _OscScan(F, U, max(eps_list), stride)
    s_values, witnesses = [], []
    for eps in eps_list:
        val, cube = scan.supremum(eps)
        s_values.append(val)
        witnesses.append(cube)
    monotone = all(b <= a * 1.05 + 1e-12 for a, b in zip(s_values, s_values[1:]))
    if s_values[-1] >= floor:
        return OscillationReport(
            eps_list, s_values, "vmo-fail-witness", witnesses[-1], s_values[-1], floor, monotone
        )
    return OscillationReport(eps_list, s_values, "vmo-consistent", None, None, floor, monotone)


def mean_function(F: ScalarField2D, r: float) -> ScalarField2D:
    """Sliding cube average F_[r] at every node.

    Periodic fields are averaged spectrally (each mode picks up the exact
    factor sinc(k1 r) sinc(k2 r), so the identity for pure exponentials is
    exact); quasi-periodic fields are averaged spatially with extension
    reads.  r must be a multiple of both grid spacings; for an odd number
    of cells the window is anchored half a cell left of center.
    """
    sx = _snap(r / F.hx, "r / hx")
    sy = _snap(r / F.hw, "r / hw")
    if F.extension == "periodic":
        nx, nw = F.values.shape
        fx = np.fft.fftfreq(nx, d=F.hx)
        fw = np.fft.fftfreq(nw, d=F.hw)
        mult = np.sinc(fx * r)[:, None] * np.sinc(fw * r)[None, :]
        vals = np.fft.ifft2(np.fft.fft2(F.values) * mult)
        return ScalarField2D(F.x0, F.w0, F.hx, F.hw, vals, "periodic")
    if F.extension == "quasiperiodic":
        lx, ly = sx // 2, sy // 2
        ext = F.window(-lx, -ly, F.nx + sx, F.nw + sy)
        sums = _box_sums(_prefix(ext), sx, sy)[: F.nx, : F.nw]
        return ScalarField2D(F.x0, F.w0, F.hx, F.hw, sums / (sx * sy), "none")
    raise GridError("mean_function needs a periodic or quasiperiodic field")


# ---------------------------------------------------------------------------
# Randomized inequality checkers
# ---------------------------------------------------------------------------


@dataclass
class InequalityResult:
    name: str
    max_ratio: float = 0.0
    cases: int = 0
    skipped: int = 0
    precondition_ok: bool = True
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "max_ratio": self.max_ratio,
            "cases": self.cases,
            "skipped": self.skipped,
            "precondition_ok": self.precondition_ok,
            "note": self.note,
        }


@dataclass
class InequalityReport:
    results: dict
    norms_are_grid_level: bool = True

    def passed(self, tol: float = 1e-3) -> bool:
        return all(
            (not r.precondition_ok) or r.max_ratio <= 1.0 + tol
            for r in self.results.values()
        )

    def as_dict(self) -> dict:
        return {
            "schema": 1,
            "norms_are_grid_level": self.norms_are_grid_level,
            "results": {k: v.as_dict() for k, v in self.results.items()},
        }


def prods_constant(sup_norms) -> float:
    """Rigorous constant C(||F_1||oo, ..., ||F_n||oo) for the product-mean
    inequality |(prod F_i)_Q - prod (F_i)_Q| <= C sum_i S_{eps,U}(F_i),
    obtained by telescoping the two-factor bound."""
    n = len(sup_norms)
    if n < 2:
        return 0.0
    acoef = np.zeros(n)
    ecoef = np.zeros(n)
    acoef[0] = 1.0
    prod_sup = max(sup_norms[0], 1e-300)
    for k in range(1, n):
        unit = np.zeros(n)
        unit[k] = 1.0
        top = max(sup_norms[k], prod_sup)
        ecoef = 0.5 * top * (unit + acoef) + sup_norms[k] * ecoef
        acoef = 1.5 * top * (unit + acoef)
        prod_sup *= sup_norms[k]
    return float(ecoef.max())


def _ratio(lhs: float, rhs: float) -> float:
    if lhs < 1e-12:
        return 0.0
    return lhs / max(rhs, 1e-300)


class _TrigPoly2:
    """Small trigonometric polynomial evaluable anywhere (for pullbacks)."""

    def __init__(self, rng, degree: int = 2, scale: float = 1.0, real: bool = False):
        ks = np.arange(-degree, degree + 1)
        A, B = np.meshgrid(ks, ks, indexing="ij")
        self.a = A.ravel().astype(float)
        self.b = B.ravel().astype(float)
        amp = scale / (1 + self.a**2 + self.b**2)
        n = self.a.size
        self.c = amp * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        self.real = real

    def _phases(self, x, w):
        shape = np.broadcast(np.asarray(x, float), np.asarray(w, float)).shape
        xs = np.broadcast_to(np.asarray(x, float), shape).ravel()
        ws = np.broadcast_to(np.asarray(w, float), shape).ravel()
        return np.exp(2j * np.pi * (np.outer(xs, self.a) + np.outer(ws, self.b))), shape

    def __call__(self, x, w):
        ph, shape = self._phases(x, w)
        out = (ph @ self.c).reshape(shape)
        return out.real if self.real else out

    def gradient(self, x, w):
        ph, shape = self._phases(x, w)
        gx = (ph @ (2j * np.pi * self.a * self.c)).reshape(shape)
        gw = (ph @ (2j * np.pi * self.b * self.c)).reshape(shape)
        if self.real:
            return gx.real, gw.real
        return gx, gw


def _sample_cube_stats(fn, cube: Cube, n: int = 32):
    """Midpoint-sampled mean, oscillation and rms of a callable on a cube."""
    h = cube.side / n
    xs = cube.cx - cube.side / 2 + h * (np.arange(n) + 0.5)
    ws = cube.cw - cube.side / 2 + h * (np.arange(n) + 0.5)
    vals = fn(xs[:, None], ws[None, :])
    mu = vals.mean()
    return mu, float(np.mean(np.abs(vals - mu))), float(np.sqrt(np.mean(np.abs(vals) ** 2)))


def affine_pullback_cases(rng, n_cases: int = 100) -> InequalityResult:
    """Randomized check of the affine change-of-variables bound (n = 2):
    M_Q(F o Phi) <= 2 n^{n/2} ||A||op^n / |det A| * M_{Qtilde}(F)."""
    res = InequalityResult("affine_pullback")
    for _ in range(n_cases):
        F = _TrigPoly2(rng, degree=2)
        while True:
            A = rng.integers(-3, 4, size=(2, 2))
            if np.linalg.det(A) != 0:
                break
        b = rng.uniform(-1, 1, size=2)
        op = float(np.linalg.svd(A.astype(float), compute_uv=False)[0])
        cube = Cube(rng.uniform(0, 1), rng.uniform(0, 1), rng.choice([0.125, 0.25, 0.5]))

        def pulled(x, w, A=A, b=b, F=F):
            return F(A[0, 0] * x + A[0, 1] * w + b[0], A[1, 0] * x + A[1, 1] * w + b[1])

        _, lhs, _ = _sample_cube_stats(pulled, cube)
        cx2 = A[0, 0] * cube.cx + A[0, 1] * cube.cw + b[0]
        cw2 = A[1, 0] * cube.cx + A[1, 1] * cube.cw + b[1]
        tilde = Cube(cx2, cw2, math.sqrt(2) * op * cube.side)
        _, m2, _ = _sample_cube_stats(F, tilde, n=48)
        rhs = 2 * 2 * op**2 / abs(float(np.linalg.det(A))) * m2
        res.max_ratio = max(res.max_ratio, _ratio(lhs, rhs))
        res.cases += 1
    return res


def c1_multiplier_cases(rng, n_cases: int = 100) -> InequalityResult:
    """Randomized check of the C^1-multiplier bound (n = 2):
    M_Q(phi F) <= sup_Q|phi| M_Q(F) + sup_Q ||grad phi||_1 ||F||_{L^2(Q)}."""
    res = InequalityResult("c1_multiplier")
    for _ in range(n_cases):
        F = _TrigPoly2(rng, degree=2)
        phi = _TrigPoly2(rng, degree=1, real=True)
        cube = Cube(rng.uniform(0, 1), rng.uniform(0, 1), rng.choice([0.125, 0.25, 0.5]))
        _, lhs, _ = _sample_cube_stats(lambda x, w: phi(x, w) * F(x, w), cube)
        _, mf, rms = _sample_cube_stats(F, cube)
        n = 32
        h = cube.side / n
        xs = cube.cx - cube.side / 2 + h * (np.arange(n) + 0.5)
        ws = cube.cw - cube.side / 2 + h * (np.arange(n) + 0.5)
        sup_phi = float(np.max(np.abs(phi(xs[:, None], ws[None, :]))))
        gx, gw = phi.gradient(xs[:, None], ws[None, :])
        sup_grad = float(np.max(np.abs(gx) + np.abs(gw)))
        l2 = rms * cube.side  # ||F||_{L2(Q)} = sqrt(|Q| * mean |F|^2)
        rhs = sup_phi * mf + sup_grad * l2
        res.max_ratio = max(res.max_ratio, _ratio(lhs, rhs))
        res.cases += 1
    return res


def check_inequalities(
    F: ScalarField2D,
    G: ScalarField2D,
    U,
    eps: float,
    n_cases: int = 1000,
    rng=None,
) -> InequalityReport:
    """Evaluate every quantitative oscillation inequality on random cubes.

    The two sampled fields drive the product/inverse/nesting bounds; the
    affine-pullback and C^1-multiplier bounds need off-grid evaluation and
    run on internally generated trigonometric polynomials seeded by the
    same generator.  Reported ratios are lhs/rhs, which must stay <= 1 up
    to grid tolerance.
    """
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    if F.values.shape != G.values.shape:
        raise ValueError("fields must share a grid")
    i0, j0, ni, nj = _rect_window(F, U)
    WF = F.window(i0, j0, ni, nj)
    WG = G.window(i0, j0, ni, nj)
    prod_field = ScalarField2D(F.x0, F.w0, F.hx, F.hw, F.values * G.values, F.extension)
    WP = WF * WG
    sup_f = float(np.max(np.abs(WF)))
    sup_g = float(np.max(np.abs(WG)))

    sides = _admissible_sides(F, ni, nj, eps)
    if not sides:
        raise GridError("eps admits no cube on this grid")

    def cube_stats(W, i, j, sx, sy):
        block = W[i : i + sx, j : j + sy]
        mu = block.mean()
        return mu, float(np.mean(np.abs(block - mu)))

    def rand_cube():
        side, sx, sy = sides[rng.integers(len(sides))]
        i = int(rng.integers(0, ni - sx + 1))
        j = int(rng.integers(0, nj - sy + 1))
        return i, j, sx, sy

    results = {}

    # |F_Q G_Q - (FG)_Q| <= 1/2 max(||F||,||G||) (M_Q(F) + M_Q(G))
    r = InequalityResult("product_mean")
    for _ in range(n_cases):
        i, j, sx, sy = rand_cube()
        mf, of = cube_stats(WF, i, j, sx, sy)
        mg, og = cube_stats(WG, i, j, sx, sy)
        mp, _ = cube_stats(WP, i, j, sx, sy)
        lhs = abs(mf * mg - mp)
        rhs = 0.5 * max(sup_f, sup_g) * (of + og)
        r.max_ratio = max(r.max_ratio, _ratio(lhs, rhs))
        r.cases += 1
    results[r.name] = r

    # S_{eps,U}(FG) <= 3/2 max(||F||,||G||) (S(F) + S(G)) on random subwindows
    r = InequalityResult("product_osc_sup")
    scans = {}

    def sub_supremum(key, W_unused, i, j, wi, wj, side_cap):
        best = 0.0
        for side, sx, sy in sides:
            if side * side >= side_cap or sx > wi or sy > wj:
                continue
            arr = scans[key][(sx, sy)]
            sub = arr[i : i + wi - sx + 1, j : j + wj - sy + 1]
            if sub.size:
                best = max(best, float(sub.max()))
        return best

    for key, W in (("F", WF), ("G", WG), ("P", WP)):
        pre = _prefix(W)
        scans[key] = {
            (sx, sy): _kernels.osc_scan(W, _box_sums(pre, sx, sy) / (sx * sy), sx, sy, 1)
            for _, sx, sy in sides
        }
    n_sub = n_cases
    for _ in range(n_sub):
        wi = int(rng.integers(16, min(48, ni) + 1))
        wj = int(rng.integers(16, min(48, nj) + 1))
        i = int(rng.integers(0, ni - wi + 1))
        j = int(rng.integers(0, nj - wj + 1))
        cap = eps * float(rng.uniform(0.3, 1.0))
        sF = sub_supremum("F", WF, i, j, wi, wj, cap)
        sG = sub_supremum("G", WG, i, j, wi, wj, cap)
        sP = sub_supremum("P", WP, i, j, wi, wj, cap)
        rhs = 1.5 * max(sup_f, sup_g) * (sF + sG)
        r.max_ratio = max(r.max_ratio, _ratio(sP, rhs))
        r.cases += 1
    results[r.name] = r

    # |F_Q| >= essinf|F|/2 and S(1/F) <= 4/essinf^2 S(F), with eps picked by
    # bisection until S_{eps,U}(F) <= essinf|F|/2.
    r_low = InequalityResult("mean_lower_bound")
    r_inv = InequalityResult("inverse_osc_sup")
    c_min = float(np.min(np.abs(WF)))
    if c_min <= 1e-6:
        r_low.precondition_ok = r_inv.precondition_ok = False
        r_low.note = r_inv.note = "essinf|F| ~ 0 at grid level"
    else:
        eps_star = eps
        found = None
        for _ in range(24):
            ok_sides = [(s, a, b) for s, a, b in sides if s * s < eps_star]
            if not ok_sides:
                break
            s_val = max(
                float(scans["F"][(a, b)].max()) for _, a, b in ok_sides
            )
            if s_val <= c_min / 2:
                found = (eps_star, ok_sides)
                break
            eps_star /= 4.0
        if found is None:
            r_low.precondition_ok = r_inv.precondition_ok = False
            r_low.note = r_inv.note = "no eps with S_{eps,U}(F) <= essinf|F|/2 on this grid"
        else:
            eps_star, ok_sides = found
            r_low.note = r_inv.note = f"eps_U = {eps_star}"
            WI = 1.0 / WF
            pre = _prefix(WI)
            inv_osc = {
                (sx, sy): _kernels.osc_scan(WI, _box_sums(pre, sx, sy) / (sx * sy), sx, sy, 1)
                for _, sx, sy in ok_sides
            }
            for _ in range(n_cases):
                side, sx, sy = ok_sides[rng.integers(len(ok_sides))]
                i = int(rng.integers(0, ni - sx + 1))
                j = int(rng.integers(0, nj - sy + 1))
                mu, _ = cube_stats(WF, i, j, sx, sy)
                r_low.max_ratio = max(r_low.max_ratio, _ratio(c_min / 2, abs(mu)))
                r_low.cases += 1

            def window_sup(osc_arrays, i, j, wi, wj):
                best = 0.0
                for _, sx, sy in ok_sides:
                    if sx > wi or sy > wj:
                        continue
                    sub = osc_arrays[(sx, sy)][i : i + wi - sx + 1, j : j + wj - sy + 1]
                    if sub.size:
                        best = max(best, float(sub.max()))
                return best

            lo_i, lo_j = min(16, ni), min(16, nj)
            for _ in range(n_cases):
                wi = int(rng.integers(lo_i, min(48, ni) + 1))
                wj = int(rng.integers(lo_j, min(48, nj) + 1))
                i = int(rng.integers(0, ni - wi + 1))
                j = int(rng.integers(0, nj - wj + 1))
                s_f = window_sup(scans["F"], i, j, wi, wj)
                s_i = window_sup(inv_osc, i, j, wi, wj)
                r_inv.max_ratio = max(r_inv.max_ratio, _ratio(s_i, 4.0 / c_min**2 * s_f))
                r_inv.cases += 1
    results[r_low.name] = r_low
    results[r_inv.name] = r_inv

    # Nested sets: M_{D1}(F) <= 2 |D2|/|D1| M_{D2}(F) for rectangles D1 c D2.
    r = InequalityResult("nested_mean_osc")

    def rect_osc(W, i, j, a, b):
        block = W[i : i + a, j : j + b]
        return float(np.mean(np.abs(block - block.mean())))

    for _ in range(n_cases):
        a2 = int(rng.integers(4, min(32, ni) + 1))
        b2 = int(rng.integers(4, min(32, nj) + 1))
        i2 = int(rng.integers(0, ni - a2 + 1))
        j2 = int(rng.integers(0, nj - b2 + 1))
        a1 = int(rng.integers(1, a2 + 1))
        b1 = int(rng.integers(1, b2 + 1))
        i1 = i2 + int(rng.integers(0, a2 - a1 + 1))
        j1 = j2 + int(rng.integers(0, b2 - b1 + 1))
        lhs = rect_osc(WF, i1, j1, a1, b1)
        rhs = 2.0 * (a2 * b2) / (a1 * b1) * rect_osc(WF, i2, j2, a2, b2)
        r.max_ratio = max(r.max_ratio, _ratio(lhs, rhs))
        r.cases += 1
    results[r.name] = r

    # Product of several factors vs the telescoped constant.
    r = InequalityResult("multi_product_mean")
    WH = 0.5 * (WF + WG)
    sup_h = float(np.max(np.abs(WH)))
    s_full = {
        "F": max(float(a.max()) for a in scans["F"].values()),
        "G": max(float(a.max()) for a in scans["G"].values()),
    }
    preh = _prefix(WH)
    s_full["H"] = max(
        float(_kernels.osc_scan(WH, _box_sums(preh, sx, sy) / (sx * sy), sx, sy, 1).max())
        for _, sx, sy in sides
    )
    c_const = prods_constant([sup_f, sup_g, sup_h])
    rhs_sum = c_const * (s_full["F"] + s_full["G"] + s_full["H"])
    W3 = WF * WG * WH
    for _ in range(n_cases):
        i, j, sx, sy = rand_cube()
        m3 = W3[i : i + sx, j : j + sy].mean()
        mf, _ = cube_stats(WF, i, j, sx, sy)
        mg, _ = cube_stats(WG, i, j, sx, sy)
        mh, _ = cube_stats(WH, i, j, sx, sy)
        lhs = abs(m3 - mf * mg * mh)
        r.max_ratio = max(r.max_ratio, _ratio(lhs, rhs_sum))
        r.cases += 1
    results[r.name] = r

    results["affine_pullback"] = affine_pullback_cases(rng, n_cases)
    results["c1_multiplier"] = c1_multiplier_cases(rng, n_cases)
    return InequalityReport(results)
