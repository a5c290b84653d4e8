"""Grid minimisation of the Sobolev quotient on the pierced rectangle.

The discrete problem lives on the uniform grid of spacing ``step`` over
``[-R, R] x [-h, h]``. Nodes on the outer boundary or in the closed unit
disk are pinned to zero (staircase obstacle) and the Dirichlet energy is
the 5-point form ``v^T A v``, ``A = 4 I - (neighbour sum)``. The L^4 norm
uses nodal weights ``step^2``, so the discrete quotient

    Q(v) = v^T A v / (step^2 * sum v^4)^{1/2}

has the same scaling as its continuous counterpart.

Each iteration solves ``A u = step^2 v^3`` and sets ``v <- |u| / ||u||_4``.
With exact solves ``Q`` never increases: Cauchy-Schwarz in the ``A`` inner
product and Holder's inequality give ``Q(u) <= Q(v)``, and taking ``|u|``
lowers the energy further because the off-diagonal entries of ``A`` are
non-positive. The even-constrained variant averages the field with its
mirror image ``x -> -x`` before normalising.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from dataclasses import field as dc_field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spl
from scipy.interpolate import RegularGridInterpolator

from .geometry import ChannelGeometry, DomainError

INITS = ("even_bump", "offset_bump", "random")


class SingularSolveError(RuntimeError):
    """The discrete Laplacian could not be factored or the solve failed."""


@dataclass
class GridField:
    """Nodal values on the uniform grid over the closed rectangle.

    ``mask`` is True at interior (free) nodes and False at nodes pinned to
    zero. Node ``i`` sits at ``x = (2 i - nx) * step / 2``, so the node set
    is exactly symmetric under ``x -> -x`` and ``y -> -y``.
    """

    geom: ChannelGeometry
    step: float
    values: np.ndarray
    mask: np.ndarray

    @property
    def x(self) -> np.ndarray:
        n = self.values.shape[0] - 1
        return (2.0 * np.arange(n + 1) - n) * (0.5 * self.step)

    @property
    def y(self) -> np.ndarray:
        n = self.values.shape[1] - 1
        return (2.0 * np.arange(n + 1) - n) * (0.5 * self.step)

    def reflected(self) -> "GridField":
        return GridField(self.geom, self.step, self.values[::-1].copy(), self.mask[::-1].copy())

    def l2(self) -> float:
        return math.sqrt(self.step ** 2 * float(np.sum(self.values ** 2)))

    def l4(self) -> float:
        return (self.step ** 2 * float(np.sum(self.values ** 4))) ** 0.25

    def asymmetry(self) -> float:
        """``||v - v(-x, y)||_2 / ||v||_2``."""
        v = self.values
        return float(np.sqrt(np.sum((v - v[::-1]) ** 2) / np.sum(v ** 2)))

    def side_masses(self) -> tuple[float, float]:
        """L^2 mass on ``x < 0`` and ``x > 0``."""
        x = self.x
        v2 = self.values ** 2
        return float(v2[x < 0].sum()), float(v2[x > 0].sum())

    def rows(self) -> np.ndarray:
        X, Y = np.meshgrid(self.x, self.y, indexing="ij")
        return np.column_stack([X.ravel(), Y.ravel(), self.values.ravel()])


@dataclass
class MinimizeResult:
    S_estimate: float
    asymmetry: float
    iterations: int
    converged: bool
    residual: float
    constrained_even: bool
    field: GridField = dc_field(repr=False)
    history: list = dc_field(default_factory=list, repr=False)
    init: str = "offset_bump"
    seed: int | None = None


def grid_shape(geom: ChannelGeometry, step: float) -> tuple[int, int]:
    """Number of intervals ``(nx, ny)``; ``step`` must divide ``2R`` and ``2h``."""
    if not step > 0:
        raise DomainError(f"grid step must be positive, got {step}")
    if step > 0.125:
        raise DomainError(f"grid step {step} does not resolve the obstacle (need step <= 1/8)")
    out = []
    for name, L in (("2R", 2.0 * geom.R), ("2h", 2.0 * geom.h)):
        n = round(L / step)
        if abs(n * step - L) > 1e-9 * L:
            raise DomainError(f"grid step {step} does not divide {name} = {L}")
        out.append(int(n))
    return out[0], out[1]


def free_mask(geom: ChannelGeometry, step: float, obstacle: bool = True) -> np.ndarray:
    nx, ny = grid_shape(geom, step)
    xi = 2 * np.arange(nx + 1) - nx  # integer coordinates in units of step/2
    yi = 2 * np.arange(ny + 1) - ny
    m = np.zeros((nx + 1, ny + 1), dtype=bool)
    m[1:-1, 1:-1] = True
    if obstacle:
        # integer test keeps the mask exactly symmetric
        r2 = xi[:, None] ** 2 + yi[None, :] ** 2
        m &= r2 * step * step > 4.0
    return m


def laplacian(mask: np.ndarray) -> sp.csc_matrix:
    """5-point matrix ``4 I - neighbours`` restricted to the free nodes."""
    idx = -np.ones(mask.shape, dtype=np.int64)
    n = int(mask.sum())
    idx[mask] = np.arange(n)
    rows, cols = [np.arange(n)], [np.arange(n)]
    vals = [np.full(n, 4.0)]
    for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        # mask is False on the outer frame, so the wrap-around of roll never links free nodes
        nb = np.roll(np.roll(idx, -dx, axis=0), -dy, axis=1)
        m = mask & (nb >= 0)
        rows.append(idx[m])
        cols.append(nb[m])
        vals.append(-np.ones(int(m.sum())))
    return sp.csc_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    )


def _solver(A, kind: str):
    if kind == "lu":
        try:
            lu = spl.splu(A, permc_spec="MMD_AT_PLUS_A")
        except RuntimeError as exc:
            raise SingularSolveError(str(exc)) from exc
        return lu.solve
    if kind == "cg":
        state = {"x0": None}

        def solve(b):
            x, info = spl.cg(A, b, x0=state["x0"], rtol=1e-13, atol=0.0, maxiter=20 * A.shape[0])
            if info != 0:
                raise SingularSolveError(f"conjugate gradient failed (info={info})")
            state["x0"] = x
            return x

        return solve
    raise DomainError(f"unknown solver {kind!r}")


def _initial(kind, X, Y, geom, seed):
    R, h = geom.R, geom.h
    c = 0.5 * (R + 1.0)  # midpoint between the obstacle and the right end
    if kind == "even_bump":
        # mirror pair of offset bumps; a single centred bump splits and then
        # drifts outward very slowly, costing thousands of iterations
        return (np.exp(-(((X - c) / h) ** 2)) + np.exp(-(((X + c) / h) ** 2))) * np.cos(0.5 * math.pi * Y / h)
    if kind == "offset_bump":
        return np.exp(-(((X - c) / h) ** 2)) * np.cos(0.5 * math.pi * Y / h)
    if kind == "random":
        return np.random.default_rng(seed).random(X.shape)
    raise DomainError(f"unknown init {kind!r}; choose from {INITS}")


def minimize(
    geom: ChannelGeometry,
    step: float,
    init: str = "offset_bump",
    seed: int | None = 0,
    even_constrained: bool = False,
    max_iter: int = 20000,
    tol: float = 1e-8,
    obstacle: bool = True,
    initial: np.ndarray | None = None,
    solver: str = "lu",
) -> MinimizeResult:
    """Minimise the discrete Sobolev quotient by the normalised inverse iteration.

    Parameters
    ----------
    geom : ChannelGeometry
    step : float
        Grid spacing; must divide ``2R`` and ``2h`` and be at most 1/8.
    init : {"even_bump", "offset_bump", "random"}
        Starting field, ignored when ``initial`` is given.
    seed : int, optional
        Seed for ``init="random"``.
    even_constrained : bool
        Restrict to fields even in ``x``.
    max_iter : int
    tol : float
        Stop once the quotient changes by less than ``tol``.
    obstacle : bool
        Pin the nodes inside the unit disk (switch off for the plain rectangle).
    initial : ndarray, optional
        Full nodal array used as the starting field.
    solver : {"lu", "cg"}
        Sparse LU factored once, or conjugate gradients.

    Returns
    -------
    MinimizeResult
        ``converged`` is False when ``max_iter`` was reached.
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    mask = free_mask(geom, step, obstacle)
    nx, ny = mask.shape
    x = (2.0 * np.arange(nx) - (nx - 1)) * (0.5 * step)
    y = (2.0 * np.arange(ny) - (ny - 1)) * (0.5 * step)
    X, Y = np.meshgrid(x, y, indexing="ij")
    if initial is not None:
        V0 = np.asarray(initial, dtype=float)
        if V0.shape != mask.shape:
            raise DomainError(f"initial field has shape {V0.shape}, grid is {mask.shape}")
    else:
        V0 = _initial(init, X, Y, geom, seed)
    A = laplacian(mask)
    solve = _solver(A, solver)
    w = step * step
    full = np.zeros(mask.shape)

    def project(v):
        if not even_constrained:
            return v
        full[mask] = v
        sym = 0.5 * (full + full[::-1])
        return sym[mask]

    def normalise(v):
        n4 = w * float(np.sum(v ** 4))
        if not n4 > 0:
            raise SingularSolveError("field vanished during the iteration")
        return v / n4 ** 0.25

    v = normalise(project(np.abs(V0[mask])))
    Q = float(v @ (A @ v))
    history = [Q]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        u = solve(w * v ** 3)
        if not np.all(np.isfinite(u)):
            raise SingularSolveError("linear solve returned non-finite values")
        v = normalise(project(np.abs(u)))
        Qn = float(v @ (A @ v))
        history.append(Qn)
        done = abs(Q - Qn) < tol
        Q = Qn
        if done:
            converged = True
            break

    # relative squared A^{-1}-norm of A v - Q step^2 v^3 at the returned field
    u = solve(w * v ** 3)
    energy = float(u @ (A @ u))
    residual = max(0.0, 1.0 - 1.0 / (Q * energy))

    values = np.zeros(mask.shape)
    values[mask] = v
    gf = GridField(geom, step, values, mask)
    return MinimizeResult(
        S_estimate=Q,
        asymmetry=0.0 if even_constrained and gf.asymmetry() == 0.0 else gf.asymmetry(),
        iterations=it,
        converged=converged,
        residual=residual,
        constrained_even=even_constrained,
        field=gf,
        history=history,
        init="initial" if initial is not None else init,
        seed=seed if init == "random" and initial is None else None,
    )


def prolong(gf: GridField) -> np.ndarray:
    """Bilinear interpolation of a field onto the grid with half the spacing."""
    fine = free_mask(gf.geom, 0.5 * gf.step)
    interp = RegularGridInterpolator((gf.x, gf.y), gf.values)
    nx, ny = fine.shape
    xf = (2.0 * np.arange(nx) - (nx - 1)) * (0.25 * gf.step)
    yf = (2.0 * np.arange(ny) - (ny - 1)) * (0.25 * gf.step)
    X, Y = np.meshgrid(np.clip(xf, gf.x[0], gf.x[-1]), np.clip(yf, gf.y[0], gf.y[-1]), indexing="ij")
    out = interp(np.stack([X, Y], axis=-1))
    return np.where(fine, out, 0.0)


def richardson_margin(coarse: MinimizeResult, max_iter: int = 20000, tol: float | None = None) -> tuple[float, MinimizeResult]:
    """Discretisation margin ``2 |S_step - S_{step/2}|`` for a first-order scheme.

    The fine run is warm-started from the prolonged coarse minimiser with the
    same constraint, so it follows the same branch of local minima.
    """
    gf = coarse.field
    fine = minimize(
        gf.geom,
        0.5 * gf.step,
        even_constrained=coarse.constrained_even,
        max_iter=max_iter,
        tol=tol if tol is not None else 1e-8,
        initial=prolong(gf),
    )
    return 2.0 * abs(coarse.S_estimate - fine.S_estimate), fine


@dataclass
class ScanRow:
    R: float
    S_even: float
    S_free: float
    gap: float
    asymmetry: float
    margin: float
    best_init: str
    free_runs: list = dc_field(default_factory=list, repr=False)  # (init, seed, S, asymmetry, converged)
    converged: bool = True

    CSV_HEADER = ("R", "h", "step", "S_even", "S_free", "gap", "asymmetry", "margin", "best_init", "converged")


@dataclass
class ScanResult:
    h: float
    step: float
    rows: list
    R0: float | None  # smallest listed R with gap > 3 * margin

    def table(self):
        return [
            (r.R, self.h, self.step, r.S_even, r.S_free, r.gap, r.asymmetry, r.margin, r.best_init, int(r.converged))
            for r in self.rows
        ]


def _scan_point(args):
    R, h, step, tol, seeds, max_iter, with_margin = args
    geom = ChannelGeometry(R, h)
    even = minimize(geom, step, init="even_bump", even_constrained=True, tol=tol, max_iter=max_iter)
    runs = [minimize(geom, step, init="offset_bump", tol=tol, max_iter=max_iter)]
    runs += [minimize(geom, step, init="random", seed=s, tol=tol, max_iter=max_iter) for s in seeds]
    # smallest quotient wins; ties go to the earliest run for determinism
    best = min(runs, key=lambda r: r.S_estimate)
    margin = float("nan")
    if with_margin:
        m_free, _ = richardson_margin(best, max_iter=max_iter, tol=tol)
        m_even, _ = richardson_margin(even, max_iter=max_iter, tol=tol)
        margin = max(m_free, m_even)
    label = best.init if best.seed is None else f"random:{best.seed}"
    return ScanRow(
        R=R,
        S_even=even.S_estimate,
        S_free=best.S_estimate,
        gap=even.S_estimate - best.S_estimate,
        asymmetry=best.asymmetry,
        margin=margin,
        best_init=label,
        free_runs=[(r.init, r.seed, r.S_estimate, r.asymmetry, r.converged) for r in runs],
        converged=even.converged and best.converged,
    )


def worker_count(default: int = 1) -> int:
    raw = os.environ.get("OFB_THREADS")
    if raw is None:
        return default
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"OFB_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise DomainError(f"OFB_THREADS must be a positive integer, got {raw!r}")
    return n


def symmetry_breaking_scan(
    h: float,
    R_list,
    step: float = 0.05,
    tol: float = 1e-8,
    seeds=(0, 1, 2),
    max_iter: int = 20000,
    margins: str = "all",
    workers: int | None = None,
) -> ScanResult:
    """Even-constrained versus free minimisation for each ``R``.

    ``margins`` is ``"all"`` (Richardson margin at every R), ``"last"``
    (largest R only) or ``"none"``.
    """
    R_list = [float(r) for r in R_list]
    if any(b <= a for a, b in zip(R_list, R_list[1:])):
        raise DomainError("R_list must be strictly increasing")
    if margins not in ("all", "last", "none"):
        raise DomainError(f"margins must be 'all', 'last' or 'none', got {margins!r}")
    for R in R_list:
        grid_shape(ChannelGeometry(R, h), step)
    tasks = [
        (R, h, step, tol, tuple(seeds), max_iter,
         margins == "all" or (margins == "last" and R == R_list[-1]))
        for R in R_list
    ]
    n = worker_count() if workers is None else workers
    if n > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(n, len(tasks))) as pool:
            rows = list(pool.map(_scan_point, tasks))
    else:
        rows = [_scan_point(t) for t in tasks]
    rows.sort(key=lambda r: r.R)
    R0 = next((r.R for r in rows if not math.isnan(r.margin) and r.gap > 3.0 * r.margin), None)
    return ScanResult(h=float(h), step=float(step), rows=rows, R0=R0)
