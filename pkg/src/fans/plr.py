"""L1-penalized logistic regression along a warm-started penalty path.

The solver is the classic iteratively-reweighted quadratic approximation
with cyclic coordinate soft-thresholding. Columns are standardized to
zero mean / unit variance internally (the penalty is scale-sensitive) and
coefficients are mapped back to the original scale on output. Candidate
coordinates at each penalty level are screened with the sequential strong
rule and every solution is certified against the full stationarity
conditions before it is accepted.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from . import rng
from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateLabelsError,
    InvalidDataError,
    ShapeError,
    StratificationError,
)

# Convergence is declared on the sup-norm coefficient change per outer
# (reweighting) iteration; probabilities are clamped inside the weight
# computation only. Highly collinear designs can leave the optimum on a
# numerically flat ridge where coefficients keep trading mass without the
# objective or the gradient moving; once the objective stagnates, a
# stationarity residual below KKT_EXIT_TOL is accepted as convergence
# (two orders of magnitude stricter than the 1e-4 the optimality checks
# assert).
COEF_TOL = 1e-7
KKT_EXIT_TOL = 1e-6
MAX_OUTER_ITER = 10_000
PROB_CLAMP = 1e-5

DEFAULT_PATH_LENGTH = 100
DEFAULT_PATH_RATIO = 1e-3


@dataclass
class PlrModel:
    """One fitted model: intercept + coefficients on the original scale."""

    intercept: float
    coefficients: np.ndarray
    lam: float
    column_means: Optional[np.ndarray] = None
    column_scales: Optional[np.ndarray] = None

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=np.float64)
        if not np.all(np.isfinite(self.coefficients)) or not math.isfinite(
            self.intercept
        ):
            raise InvalidDataError("model coefficients must be finite")
        if self.lam < 0:
            raise ConfigError("penalty must be non-negative")

    @property
    def q(self) -> int:
        return self.coefficients.size

    def active_set(self) -> np.ndarray:
        return np.flatnonzero(self.coefficients)


@dataclass
class PlrPath:
    """Solutions at strictly decreasing penalty levels."""

    lambdas: np.ndarray
    models: List[PlrModel]

    def __post_init__(self):
        self.lambdas = np.asarray(self.lambdas, dtype=np.float64)
        if np.any(np.diff(self.lambdas) >= 0):
            raise ConfigError("penalty grid must be strictly decreasing")
        if len(self.models) != self.lambdas.size:
            raise ShapeError("one model per penalty level required")


@dataclass
class CvResult:
    fold_errors: np.ndarray  # T x K misclassification rates
    mean_error: np.ndarray
    selected_lambda: float
    selected_index: int


def _sigmoid(t: np.ndarray) -> np.ndarray:
    out = np.empty_like(t)
    pos = t >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-t[pos]))
    e = np.exp(t[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def predict_prob(model: PlrModel, z):
    """sigma(b0 + beta.z); stable in both tails, never exactly 0 or 1
    except where float64 itself rounds there."""
    z = np.asarray(z, dtype=np.float64)
    if z.ndim == 1:
        if z.size != model.q:
            raise ShapeError(f"vector has {z.size} entries, model expects {model.q}")
        return float(_sigmoid(np.atleast_1d(model.intercept + z @ model.coefficients))[0])
    if z.ndim == 2:
        if z.shape[1] != model.q:
            raise ShapeError(
                f"matrix has {z.shape[1]} columns, model expects {model.q}"
            )
        return _sigmoid(model.intercept + z @ model.coefficients)
    raise ShapeError(f"expected 1-D or 2-D input, got ndim={z.ndim}")


def _check_labels(y) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 1:
        raise ShapeError("labels must be 1-D")
    if not np.all(np.isin(y, (0.0, 1.0))):
        raise InvalidDataError("labels must be 0/1")
    if y.min() == y.max():
        raise DegenerateLabelsError("both classes are required")
    return y


def _check_design(Z) -> np.ndarray:
    Z = np.asarray(Z, dtype=np.float64)
    if Z.ndim != 2:
        raise ShapeError("design matrix must be 2-D")
    if not np.all(np.isfinite(Z)):
        raise InvalidDataError("design matrix must be finite")
    return Z


def _standardize(Z: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    means = Z.mean(axis=0)
    scales = Z.std(axis=0)
    scales = np.where(scales > 0, scales, 1.0)  # constant columns stay inert
    return (Z - means) / scales, means, scales


def lambda_max(Z, y) -> float:
    """Smallest penalty at which every slope coefficient is zero."""
    Z = _check_design(Z)
    y = _check_labels(y)
    if Z.shape[0] != y.size:
        raise ShapeError("row count of Z must match labels")
    Zs, _, _ = _standardize(Z)
    n = y.size
    return float(np.max(np.abs(Zs.T @ (y - y.mean()))) / n)


def _lambda_grid(lmax: float, T: int, ratio: float) -> np.ndarray:
    if T < 2:
        raise ConfigError("path length must be >= 2")
    if not (0 < ratio < 1):
        raise ConfigError("path ratio must be in (0, 1)")
    # Guard the fully-degenerate case (all columns orthogonal to the
    # centered labels): a tiny positive top keeps the grid valid and every
    # fitted model stays intercept-only.
    top = max(lmax, 1e-12)
    grid = np.geomspace(top, top * ratio, T)
    grid[0] = top  # exact top keeps the first model at the all-zero solution
    return grid


def _cd_sweep_py(Zs, w, r, beta, cand, denom, positions, m, lam, n, wsum):
    """One cyclic pass over ``cand[positions[:m]]`` plus the intercept.

    ``r`` (the working residual u - b0 - Zs @ beta) and ``beta`` are
    updated in place; returns the largest weighted squared move
    (denom_j * step_j^2, the curvature-scaled progress measure) and the
    intercept adjustment. Sums run over observations in index order so
    results are identical no matter where the sweep executes.
    """
    progress = 0.0
    for pp in range(m):
        pos = positions[pp]
        j = cand[pos]
        dj = denom[pos]
        if dj <= 1e-12:
            continue
        num = 0.0
        for i in range(n):
            num += Zs[i, j] * (w[i] * r[i])
        num = num / n + dj * beta[j]
        if num > lam:
            nb = (num - lam) / dj
        elif num < -lam:
            nb = (num + lam) / dj
        else:
            nb = 0.0
        step = nb - beta[j]
        if step != 0.0:
            for i in range(n):
                r[i] -= Zs[i, j] * step
            beta[j] = nb
            move = dj * step * step
            if move > progress:
                progress = move
    acc = 0.0
    for i in range(n):
        acc += w[i] * r[i]
    d0 = acc / wsum
    if d0 != 0.0:
        for i in range(n):
            r[i] -= d0
        move = (wsum / n) * d0 * d0
        if move > progress:
            progress = move
    return progress, d0


try:  # the jitted kernel makes dense paths ~100x faster
    from numba import njit

    _sweep = njit(cache=True)(_cd_sweep_py)
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    _sweep = _cd_sweep_py
    HAVE_NUMBA = False


def _cd_kernel_impl(Zs, Z2, w, r, beta, b0, cand, lam, n, tol, max_sweeps):
    # inner stop: largest curvature-scaled squared move below tol^2, the
    # scale-aware analogue of a sup-change test (matches |step| < tol for
    # unit-curvature coordinates but does not grind on saturated ones)
    inner_tol = tol * tol
    wsum = w.sum()
    q_c = cand.size
    denom = np.empty(q_c)
    for jj in range(q_c):
        j = cand[jj]
        acc = 0.0
        for i in range(n):
            acc += w[i] * Z2[i, j]
        denom[jj] = acc / n
    all_pos = np.arange(q_c)
    buf = np.empty(q_c, dtype=np.int64)
    b0_total = 0.0
    sweeps = 0
    while sweeps < max_sweeps:
        # full candidate sweep
        progress, d0 = _sweep(Zs, w, r, beta, cand, denom, all_pos, q_c, lam, n, wsum)
        sweeps += 1
        b0_total += d0
        if progress < inner_tol:
            return b0 + b0_total, 0
        # iterate on the nonzero subset until it stabilizes
        settled = False
        while sweeps < max_sweeps:
            m = 0
            for jj in range(q_c):
                if beta[cand[jj]] != 0.0:
                    buf[m] = jj
                    m += 1
            progress, d0 = _sweep(Zs, w, r, beta, cand, denom, buf, m, lam, n, wsum)
            sweeps += 1
            b0_total += d0
            if progress < inner_tol:
                settled = True
                break
        if not settled:
            break
    return b0 + b0_total, 1


_cd_kernel = njit(cache=True)(_cd_kernel_impl) if HAVE_NUMBA else _cd_kernel_impl


def _solve_kernel_impl(Zs, Z2, y, sgn, lam, b0, beta, cand, tol, max_outer, obj_hist):
    """Reweighted quadratic loop at one penalty level, restricted to ``cand``.

    ``beta`` is updated in place; returns (b0, status, outer_count) with
    status 0 = converged, 2 = no descent step found, 3 = outer budget
    exhausted. ``obj_hist`` (length >= max_outer) receives the accepted
    penalized objective per iteration. The linear predictor is carried
    incrementally (the quadratic solve already tracks its own residual)
    and refreshed periodically to shed accumulated rounding.
    """
    n = y.size
    q = beta.size
    eta = np.empty(n)
    for i in range(n):
        acc = b0
        for j in range(q):
            if beta[j] != 0.0:
                acc += Zs[i, j] * beta[j]
        eta[i] = acc
    # penalized objective: mean stable softplus + lam * l1(beta)
    obj = 0.0
    for i in range(n):
        t = -sgn[i] * eta[i]
        obj += t if t > 35.0 else math.log1p(math.exp(t))
    obj /= n
    l1 = 0.0
    for j in range(q):
        l1 += abs(beta[j])
    obj += lam * l1

    w = np.empty(n)
    r = np.empty(n)
    u = np.empty(n)
    beta_new = np.empty(q)
    eta_try = np.empty(n)
    stagnant = 0
    for outer in range(max_outer):
        if outer % 128 == 127:  # periodic exact refresh of the predictor
            for i in range(n):
                acc = b0
                for j in range(q):
                    if beta[j] != 0.0:
                        acc += Zs[i, j] * beta[j]
                eta[i] = acc
        for i in range(n):
            e = eta[i]
            p = 1.0 / (1.0 + math.exp(-e)) if e >= 0.0 else math.exp(e) / (1.0 + math.exp(e))
            pc = p
            if pc < PROB_CLAMP:
                pc = PROB_CLAMP
            elif pc > 1.0 - PROB_CLAMP:
                pc = 1.0 - PROB_CLAMP
            w[i] = pc * (1.0 - pc)  # clamp only inside the weights
            r[i] = (y[i] - p) / w[i]
            u[i] = eta[i] + r[i]
        for j in range(q):
            beta_new[j] = beta[j]
        # A truncated inner solve is fine mid-path: every sweep descends
        # the quadratic, the objective guard keeps global descent, and the
        # convergence test below is on the realized outer step. On highly
        # collinear designs truncation can slosh mass between near-duplicate
        # columns forever, so long-running solves switch to exact inner
        # solves and let the outer test settle.
        inner_budget = 40 if outer < 512 else 10_000
        b0_new, _ = _cd_kernel(Zs, Z2, w, r, beta_new, b0, cand, lam, n, tol, inner_budget)

        def _try_objective(theta):
            if theta == 1.0:
                b0_t = b0_new
                for i in range(n):
                    eta_try[i] = u[i] - r[i]  # b0_new + Zs @ beta_new, via the residual
            else:
                b0_t = b0 + theta * (b0_new - b0)
                for i in range(n):
                    eta_try[i] = eta[i] + theta * ((u[i] - r[i]) - eta[i])
            val = 0.0
            for i in range(n):
                t = -sgn[i] * eta_try[i]
                val += t if t > 35.0 else math.log1p(math.exp(t))
            val /= n
            l1 = 0.0
            for j in range(q):
                bj = beta_new[j] if theta == 1.0 else beta[j] + theta * (beta_new[j] - beta[j])
                l1 += abs(bj)
            return val + lam * l1, b0_t

        # Safeguard: the quadratic model is local, so damp the step until
        # the true penalized objective is non-increasing.
        theta = 1.0
        while True:
            obj_try, b0_try = _try_objective(theta)
            if obj_try <= obj + 1e-12 * (1.0 + abs(obj)):
                break
            theta *= 0.5
            if theta < 1e-10:
                return b0, 2, outer
        if theta == 1.0:
            # Over-relax: clamped weights overestimate curvature near
            # saturation and make unit steps crawl, so expand the accepted
            # step while the objective improves beyond rounding noise
            # (noise-level gains must not block the theta == 1 exit).
            while theta < 1048576.0:
                obj_x, b0_x = _try_objective(2.0 * theta)
                if obj_x < obj_try - 1e-12 * (1.0 + abs(obj_try)):
                    theta *= 2.0
                    obj_try = obj_x
                else:
                    break
        # refresh the trial state for the accepted theta (expansion trials
        # leave eta_try at the last, possibly rejected, candidate)
        obj_try, b0_try = _try_objective(theta)
        delta = abs(b0_try - b0)
        if theta == 1.0:
            for j in range(q):
                step = abs(beta_new[j] - beta[j])
                if step > delta:
                    delta = step
                beta[j] = beta_new[j]
        else:
            for j in range(q):
                mixed = beta[j] + theta * (beta_new[j] - beta[j])
                step = abs(mixed - beta[j])
                if step > delta:
                    delta = step
                beta[j] = mixed
        for i in range(n):
            eta[i] = eta_try[i]
        b0 = b0_try
        improvement = obj - obj_try
        obj = obj_try
        obj_hist[outer] = obj
        # a damped step is progress but not evidence of stationarity
        if delta < tol and theta == 1.0:
            return b0, 0, outer + 1
        # Flat-ridge exit: when the objective has stopped moving beyond
        # rounding, coefficients may still trade mass between collinear
        # columns forever; accept the iterate once it is stationary.
        if improvement <= 1e-13 * (1.0 + abs(obj)):
            stagnant += 1
        else:
            stagnant = 0
        if stagnant >= 8:
            stagnant = 0
            grad_b0 = 0.0
            for i in range(n):
                e = eta[i]
                pi = 1.0 / (1.0 + math.exp(-e)) if e >= 0.0 else math.exp(e) / (1.0 + math.exp(e))
                r[i] = y[i] - pi  # reuse the buffer for the residual
                grad_b0 += r[i]
            kkt = abs(grad_b0 / n)
            for jj in range(cand.size):
                j = cand[jj]
                g = 0.0
                for i in range(n):
                    g += Zs[i, j] * r[i]
                g /= n
                if beta[j] > 0.0:
                    v = abs(g - lam)
                elif beta[j] < 0.0:
                    v = abs(g + lam)
                else:
                    v = abs(g) - lam
                    if v < 0.0:
                        v = 0.0
                if v > kkt:
                    kkt = v
            if kkt <= KKT_EXIT_TOL:
                return b0, 0, outer + 1
    return b0, 3, max_outer


_solve_kernel = njit(cache=True)(_solve_kernel_impl) if HAVE_NUMBA else _solve_kernel_impl


def _solve_single_lambda(Zs, Z2, y, sgn, lam, b0, beta, cand, tol, max_outer, trace=None):
    """One penalty level: jitted solve plus error surfacing and tracing."""
    obj_hist = np.empty(max_outer)
    beta = beta.copy()
    b0_out, status, n_outer = _solve_kernel(
        Zs, Z2, y, sgn, float(lam), float(b0), beta, cand, float(tol), max_outer, obj_hist
    )
    if status == 2:
        raise ConvergenceError("no descent step found at this penalty")
    if status == 3:
        raise ConvergenceError(
            f"no convergence after {max_outer} reweighting iterations (lambda={lam:g})"
        )
    if trace is not None:
        trace.extend((lam, v) for v in obj_hist[:n_outer])
    eta = b0_out + Zs @ beta
    return b0_out, beta, _sigmoid(eta)


def fit_path(
    Z,
    y,
    T: int = DEFAULT_PATH_LENGTH,
    ratio: float = DEFAULT_PATH_RATIO,
    *,
    lambdas: Optional[np.ndarray] = None,
    tol: float = COEF_TOL,
    max_outer: int = MAX_OUTER_ITER,
    objective_trace: Optional[list] = None,
) -> PlrPath:
    """Fit the lasso-logistic path over a geometric penalty grid.

    When ``lambdas`` is given it is used verbatim (cross-validation fits
    every fold on the grid of the full data set); otherwise the grid runs
    geometrically from lambda_max down to ratio * lambda_max in T steps.
    ``objective_trace`` (a list, when supplied) collects the accepted
    penalized objective after every reweighting iteration as (lam, value).
    """
    Z = _check_design(Z)
    y = _check_labels(y)
    if Z.shape[0] != y.size:
        raise ShapeError("row count of Z must match labels")
    Zs, means, scales = _standardize(Z)
    Zs = np.asfortranarray(Zs)
    Z2 = Zs * Zs
    n, q = Zs.shape
    if lambdas is None:
        grid = _lambda_grid(float(np.max(np.abs(Zs.T @ (y - y.mean()))) / n), T, ratio)
    else:
        grid = np.asarray(lambdas, dtype=np.float64)
        if grid.ndim != 1 or grid.size == 0 or np.any(grid <= 0):
            raise ConfigError("explicit penalty grid must be positive")
        if np.any(np.diff(grid) >= 0):
            raise ConfigError("explicit penalty grid must be strictly decreasing")

    sgn = 2.0 * y - 1.0
    ybar = y.mean()
    b0 = math.log(ybar / (1.0 - ybar))
    beta = np.zeros(q)
    grad = Zs.T @ (y - ybar) / n

    models: List[PlrModel] = []
    prev_lam = None
    for lam in grid:
        lam = float(lam)
        # Sequential strong rule, plus everything currently active.
        thresh = lam if prev_lam is None else 2.0 * lam - prev_lam
        cand_mask = (np.abs(grad) > thresh) | (beta != 0.0)
        while True:
            cand = np.flatnonzero(cand_mask)
            b0, beta, p_hat = _solve_single_lambda(
                Zs, Z2, y, sgn, lam, b0, beta, cand, tol, max_outer, objective_trace
            )
            grad = Zs.T @ (y - p_hat) / n
            violations = (np.abs(grad) > lam * (1.0 + 1e-12) + 1e-12) & ~cand_mask
            if not violations.any():
                break
            cand_mask |= violations
        coef = beta / scales
        intercept = b0 - float(coef @ means)
        models.append(
            PlrModel(
                intercept=intercept,
                coefficients=coef,
                lam=lam,
                column_means=means.copy(),
                column_scales=scales.copy(),
            )
        )
        prev_lam = lam
    return PlrPath(lambdas=grid, models=models)


def stratified_folds(y: np.ndarray, K: int, generator: np.random.Generator) -> np.ndarray:
    """Deterministic stratified fold labels in {0..K-1}.

    A single global permutation is drawn and members of each class are
    dealt round-robin in permuted order, so the assignment depends only on
    the class partition (relabeling the classes yields identical folds).
    """
    n = y.size
    if K < 2:
        raise ConfigError("need at least 2 folds")
    counts = [int((y == c).sum()) for c in (0.0, 1.0)]
    if min(counts) < K:
        raise StratificationError(
            f"smallest class has {min(counts)} members; {K}-fold stratification "
            "needs at least one member per fold"
        )
    perm = generator.permutation(n)
    folds = np.empty(n, dtype=np.int64)
    for c in (0.0, 1.0):
        members = perm[y[perm] == c]
        folds[members] = np.arange(members.size) % K
    return folds


def cross_validate(
    Z,
    y,
    T: int = DEFAULT_PATH_LENGTH,
    ratio: float = DEFAULT_PATH_RATIO,
    K: int = 5,
    seed: int = 0,
    criterion: str = "error",
) -> CvResult:
    """K-fold selection of the penalty level.

    The grid is computed once on the full data; each fold refits the path
    on its training part and scores the held-out part. ``criterion`` is
    misclassification at threshold 1/2 by default, with binomial deviance
    behind the flag; ties go to the smaller index (larger penalty).
    """
    Z = _check_design(Z)
    y = _check_labels(y)
    if criterion not in ("error", "deviance"):
        raise ConfigError(f"unknown cv criterion {criterion!r}")
    if Z.shape[0] != y.size:
        raise ShapeError("row count of Z must match labels")
    if y.size < K:
        raise StratificationError("fewer rows than folds")
    grid = _lambda_grid(lambda_max(Z, y), T, ratio)
    folds = stratified_folds(y, K, rng.stream(seed, "cv-folds"))
    Tn = grid.size
    fold_errors = np.empty((Tn, K))
    fold_scores = fold_errors if criterion == "error" else np.empty((Tn, K))
    for k in range(K):
        held = folds == k
        path = fit_path(Z[~held], y[~held], lambdas=grid)
        B = np.stack([m.coefficients for m in path.models], axis=1)  # q x T
        b0s = np.array([m.intercept for m in path.models])
        probs = _sigmoid(Z[held] @ B + b0s)  # m x T
        miss = (probs >= 0.5).astype(np.float64) != y[held, np.newaxis]
        fold_errors[:, k] = miss.mean(axis=0)
        if criterion == "deviance":
            pc = np.clip(probs, 1e-10, 1.0 - 1e-10)
            ll = y[held, np.newaxis] * np.log(pc) + (1.0 - y[held, np.newaxis]) * np.log(
                1.0 - pc
            )
            fold_scores[:, k] = -2.0 * ll.mean(axis=0)
    mean_error = fold_errors.mean(axis=1)
    mean_score = mean_error if criterion == "error" else fold_scores.mean(axis=1)
    selected = int(np.argmin(mean_score))  # argmin takes the smallest index on ties
    return CvResult(
        fold_errors=fold_errors,
        mean_error=mean_error,
        selected_lambda=float(grid[selected]),
        selected_index=selected,
    )


def fit_cv(
    Z,
    y,
    T: int = DEFAULT_PATH_LENGTH,
    ratio: float = DEFAULT_PATH_RATIO,
    K: int = 5,
    seed: int = 0,
    criterion: str = "error",
) -> Tuple[PlrModel, CvResult]:
    """Cross-validate the penalty, then refit on all rows at the winner."""
    cv = cross_validate(Z, y, T=T, ratio=ratio, K=K, seed=seed, criterion=criterion)
    grid = _lambda_grid(lambda_max(Z, y), T, ratio)
    path = fit_path(Z, y, lambdas=grid[: cv.selected_index + 1])
    return path.models[-1], cv


def kkt_violation(Z, y, model: PlrModel) -> float:
    """Worst stationarity violation of a fitted model on its training data.

    Zero (up to solver tolerance) certifies optimality: active coordinates
    must satisfy gradient = lam * sign(coef) and inactive coordinates
    |gradient| <= lam, all on the standardized scale the solver used.
    """
    Z = _check_design(Z)
    y = _check_labels(y)
    if model.column_means is None or model.column_scales is None:
        raise ConfigError("model carries no standardization info")
    Zs = (Z - model.column_means) / model.column_scales
    beta_std = model.coefficients * model.column_scales
    b0_std = model.intercept + float(model.coefficients @ model.column_means)
    p = _sigmoid(b0_std + Zs @ beta_std)
    g = Zs.T @ (y - p) / y.size
    active = beta_std != 0.0
    worst = abs(float((y - p).mean()))  # unpenalized intercept stationarity
    if active.any():
        worst = max(
            worst,
            float(np.max(np.abs(g[active] - model.lam * np.sign(beta_std[active])))),
        )
    if (~active).any():
        worst = max(worst, float(np.max(np.maximum(np.abs(g[~active]) - model.lam, 0.0))))
    return worst
