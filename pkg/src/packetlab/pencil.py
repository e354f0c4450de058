"""The squeezed-state condition as a matrix pencil.

Minimum-uncertainty (squeezed) states of a pair (A, B) with [A, B] = iC
solve (A - alpha)|psi> = i S (B - beta)|psi> with alpha = <A>, beta = <B>.
In a truncated basis that is the generalized eigenproblem

    (A - alpha) v = lambda (B - beta) v,

and the physical solutions are the eigenpairs whose eigenvalue is purely
imaginary, lambda = i S with S > 0: for such eigenvalues the Hermitian
quadratic forms force <A> = alpha and <B> = beta automatically.  The pencil
is solved two ways, both honest up to the stated residual bound:

* a dense QZ factorization, which returns the isolated eigenvalues of the
  truncated pencil; and
* an imaginary-axis sweep, which for a grid of S values extracts the smallest
  singular pair of (A - alpha) - iS(B - beta) and certifies (iS, v) as an
  eigenpair whenever that residual is at working precision.

The sweep matters because, whenever alpha sits in the point spectrum of A,
the truncated pencil inherits a whole segment of nearly exact imaginary
eigenvalues (the squeezing can be dialed continuously); QZ collapses that
segment to arbitrary rounding-determined points, while the sweep certifies
each grid value directly and deterministically.  Away from the spectrum of A
the smallest singular value stays orders of magnitude above the tolerance,
so the sweep certifies nothing; that asymmetry is the quantization of the
mean value demonstrated by :func:`quantization_scan`.

Eigenvalue classification is reported, never silently applied: every returned
pair carries its residual, its distance |Re lambda| from the imaginary axis,
and the tail mass of its eigenvector.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.optimize import linprog

from .errors import (
    IncompatibleFamilyError,
    OutOfRangeError,
    SingularPencilError,
    WindowMismatchError,
)
from .operators import OperatorId, OperatorMatrix, build
from .states import AngularState, ModeWindow

# Physicality defaults; all overridable per call and reported in the output.
S_WINDOW = (0.1, 8.0)
IMAG_AXIS_RTOL = 1e-8
TAIL_TOL = 1e-8
SWEEP_RTOL = 1e-12
SWEEP_POINTS = 80

_A_IDS = {OperatorId.ANGULAR_MOMENTUM, OperatorId.NUMBER}
_B_IDS = {OperatorId.SIN_PHI, OperatorId.COS_PHI, OperatorId.PHASE_SIN, OperatorId.PHASE_COS}


@dataclass(frozen=True)
class PencilProblem:
    """(A - alpha) v = lambda (B - beta) v with diagonal A and bounded B."""

    A: OperatorMatrix
    B: OperatorMatrix
    alpha: float
    beta: float = 0.0

    def __post_init__(self):
        if self.A.window != self.B.window:
            raise WindowMismatchError("A and B live on different windows")
        if OperatorId(self.A.id) not in _A_IDS:
            raise IncompatibleFamilyError(
                f"A must be a discrete-spectrum operator, got {self.A.id}"
            )
        if OperatorId(self.B.id) not in _B_IDS:
            raise IncompatibleFamilyError(
                f"B must be a bounded coordinate operator, got {self.B.id}"
            )
        if abs(self.beta) >= 1.0:
            raise ValueError(
                f"|beta| must be < 1 (the coordinate spectrum is [-1, 1]), got {self.beta}"
            )

    @property
    def window(self) -> ModeWindow:
        return self.A.window

    def shifted(self) -> tuple[np.ndarray, np.ndarray]:
        d = self.window.dimension
        eye = np.eye(d)
        return self.A.entries - self.alpha * eye, self.B.entries - self.beta * eye


def circle_problem(alpha: float, beta: float = 0.0, M: int = 64) -> PencilProblem:
    """A = angular momentum, B = sin(phi) on a symmetric window."""
    w = ModeWindow.symmetric(M)
    return PencilProblem(build(OperatorId.ANGULAR_MOMENTUM, w), build(OperatorId.SIN_PHI, w), alpha, beta)


def oscillator_problem(alpha: float, beta: float = 0.0, M: int = 64) -> PencilProblem:
    """A = number operator, B = one-sided phase sine on a bounded-below window."""
    w = ModeWindow.bounded_below(M)
    return PencilProblem(build(OperatorId.NUMBER, w), build(OperatorId.PHASE_SIN, w), alpha, beta)


@dataclass(frozen=True)
class PencilSolution:
    """Eigenpairs sorted by distance from the imaginary axis."""

    problem: PencilProblem
    eigenvalues: np.ndarray        # complex, sorted by |Re|
    vectors: np.ndarray            # unit columns matching eigenvalues
    residuals: np.ndarray          # ||(A-a)v - lambda (B-b)v||_2
    tail_masses: np.ndarray
    swept: np.ndarray              # True where the pair came from the axis sweep
    physical: np.ndarray           # bool flags per the reported tolerances
    s_window: tuple[float, float]
    imag_axis_rtol: float
    tail_tol: float

    @property
    def n(self) -> int:
        return int(self.eigenvalues.size)

    @property
    def axis_distances(self) -> np.ndarray:
        return np.abs(self.eigenvalues.real)

    def state(self, i: int) -> AngularState:
        v = self.vectors[:, i]
        return AngularState(self.problem.window, v / np.linalg.norm(v))

    def physical_indices(self) -> np.ndarray:
        return np.where(self.physical)[0]


def _tri_bands(T: np.ndarray) -> np.ndarray:
    d = T.shape[0]
    ab = np.zeros((3, d), dtype=complex)
    ab[0, 1:] = np.diagonal(T, 1)
    ab[1, :] = np.diagonal(T)
    ab[2, :-1] = np.diagonal(T, -1)
    return ab


def _is_tridiagonal(T: np.ndarray) -> bool:
    return bool(np.all(T == np.triu(np.tril(T, 1), -1)))


def smallest_singular_pair(T: np.ndarray, *, iters: int = 30, seed: int = 12345) -> tuple[float, np.ndarray]:
    """Smallest singular value of T and its right singular vector.

    Tridiagonal matrices (every pencil built here) go through banded inverse
    iteration on (T^H T)^{-1}, O(n) per step; anything else falls back to a
    dense SVD.  The returned pair always satisfies ||T v|| = sigma exactly,
    so sigma is a certified eigenpair residual.
    """
    d = T.shape[0]
    if not _is_tridiagonal(T):
        _, s, Vh = np.linalg.svd(T)
        v = Vh[-1].conj()
        return float(np.linalg.norm(T @ v)), v

    ab = _tri_bands(T)
    abH = _tri_bands(T.conj().T)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    v /= np.linalg.norm(v)
    sigma = math.inf
    for it in range(iters):
        try:
            z = sla.solve_banded((1, 1), abH, v)
            y = sla.solve_banded((1, 1), ab, z)
        except np.linalg.LinAlgError:
            # exactly singular LU: nudge the diagonal at roundoff level
            eps = 1e-300 + 1e-16 * np.max(np.abs(ab[1]))
            ab[1] += eps
            abH[1] += eps
            continue
        ny = np.linalg.norm(y)
        if not np.isfinite(ny) or ny == 0.0:
            break
        v = y / ny
        new = float(np.linalg.norm(T @ v))
        if it > 2 and abs(new - sigma) <= 1e-6 * max(new, 1e-300):
            return new, v
        sigma = new
    return float(np.linalg.norm(T @ v)), v


def eigenvector_at(problem: PencilProblem, s: float) -> tuple[AngularState, float]:
    """Eigenvector of the pencil at the fixed eigenvalue lambda = i s.

    Returns the unit vector minimizing ||(A - alpha)v - i s (B - beta)v|| and
    that residual; a residual at working precision certifies that i s is an
    eigenvalue and the vector is its eigenvector.
    """
    Aef, Bef = problem.shifted()
    sigma, v = smallest_singular_pair(Aef - 1j * s * Bef)
    return AngularState(problem.window, v / np.linalg.norm(v)), sigma


def _tail_masses(V: np.ndarray, window: ModeWindow, fraction: float = 0.1) -> np.ndarray:
    m = window.modes
    cut = (1.0 - fraction) * window.M
    sel = np.abs(m) > cut if window.is_symmetric else m > cut
    return np.sum(np.abs(V[sel, :]) ** 2, axis=0)


def solve_pencil(
    problem: PencilProblem,
    *,
    s_window: tuple[float, float] = S_WINDOW,
    imag_axis_rtol: float = IMAG_AXIS_RTOL,
    tail_tol: float = TAIL_TOL,
    axis_sweep: bool = True,
    sweep_points: int = SWEEP_POINTS,
    sweep_rtol: float = SWEEP_RTOL,
) -> PencilSolution:
    """All eigenpairs of the truncated pencil, QZ plus axis-sweep certificates.

    Every returned pair obeys the residual bound
    ||(A-alpha)v - lambda(B-beta)v|| <= 1e-9 (||A-alpha|| + |lambda| ||B-beta||);
    pairs are sorted by |Re lambda|.  A pair is flagged physical when
    |Re lambda| <= imag_axis_rtol * (1 + |lambda|), Im lambda lies inside
    ``s_window`` and the eigenvector tail mass is below ``tail_tol``.

    Raises
    ------
    SingularPencilError
        When the QZ iteration fails or produces no finite eigenvalue;
        perturbing beta resolves generic failures.
    """
    Aef, Bef = problem.shifted()
    try:
        w, V = sla.eig(Aef, Bef)
    except (sla.LinAlgError, ValueError) as exc:
        raise SingularPencilError(
            f"QZ failed for alpha={problem.alpha}, beta={problem.beta}: {exc}; "
            "try perturbing beta"
        ) from exc
    finite = np.isfinite(w)
    w = w[finite]
    V = V[:, finite]
    if w.size == 0:
        raise SingularPencilError(
            f"pencil has no finite eigenvalues at alpha={problem.alpha}, "
            f"beta={problem.beta}; try perturbing beta"
        )
    V = V / np.linalg.norm(V, axis=0)
    residuals = np.linalg.norm(Aef @ V - Bef @ V * w[None, :], axis=0)
    swept = np.zeros(w.size, dtype=bool)

    norm_a = float(np.max(np.abs(np.diagonal(Aef))))
    norm_b = float(np.linalg.norm(Bef, 2))

    if axis_sweep:
        s_grid = np.linspace(s_window[0], s_window[1], sweep_points)
        extra_w, extra_v, extra_r = [], [], []
        for s in s_grid:
            sigma, v = smallest_singular_pair(Aef - 1j * s * Bef)
            if sigma <= sweep_rtol * (norm_a + s * norm_b):
                extra_w.append(1j * s)
                extra_v.append(v)
                extra_r.append(sigma)
        if extra_w:
            w = np.concatenate([w, np.array(extra_w)])
            V = np.hstack([V, np.column_stack(extra_v)])
            residuals = np.concatenate([residuals, np.array(extra_r)])
            swept = np.concatenate([swept, np.ones(len(extra_w), dtype=bool)])

    tails = _tail_masses(V, problem.window)
    order = np.argsort(np.abs(w.real), kind="stable")
    w, V = w[order], V[:, order]
    residuals, tails, swept = residuals[order], tails[order], swept[order]

    physical = (
        (np.abs(w.real) <= imag_axis_rtol * (1.0 + np.abs(w)))
        & (w.imag >= s_window[0])
        & (w.imag <= s_window[1])
        & (tails < tail_tol)
    )
    return PencilSolution(
        problem=problem,
        eigenvalues=w,
        vectors=V,
        residuals=residuals,
        tail_masses=tails,
        swept=swept,
        physical=physical,
        s_window=s_window,
        imag_axis_rtol=imag_axis_rtol,
        tail_tol=tail_tol,
    )


# -- uncertainty floor at fixed expectation ---------------------------------


def uncertainty_floor(A: OperatorMatrix, alpha: float) -> tuple[float, AngularState]:
    """Minimal Delta A over unit states with <A> = alpha, A diagonal.

    The minimizer mixes the two spectrum neighbors a_k <= alpha <= a_{k+1}:
    the floor is sqrt((alpha - a_k)(a_{k+1} - alpha)), zero exactly on the
    spectrum.  Between consecutive integers of the angular momentum this is
    sqrt(frac (1 - frac)), with maximum 1/2 at half-integer alpha.
    """
    if not A.is_diagonal:
        raise IncompatibleFamilyError("uncertainty floor needs a diagonal operator")
    spec = np.real(np.diagonal(A.entries))
    if alpha < spec.min() - 1e-12 or alpha > spec.max() + 1e-12:
        raise OutOfRangeError(
            f"alpha={alpha} outside the truncated spectrum "
            f"[{spec.min()}, {spec.max()}]"
        )
    d = spec.size
    c = np.zeros(d, dtype=complex)
    nearest = int(np.argmin(np.abs(spec - alpha)))
    if abs(spec[nearest] - alpha) <= 1e-12:
        c[nearest] = 1.0
        return 0.0, AngularState(A.window, c)
    # alpha now lies strictly between two spectrum points
    hi = int(np.searchsorted(spec, alpha))
    lo = hi - 1
    gap = spec[hi] - spec[lo]
    p = (alpha - spec[lo]) / gap
    c[lo] = math.sqrt(1.0 - p)
    c[hi] = math.sqrt(p)
    floor = math.sqrt(max((alpha - spec[lo]) * (spec[hi] - alpha), 0.0))
    return floor, AngularState(A.window, c)


def uncertainty_floor_bruteforce(A: OperatorMatrix, alpha: float) -> float:
    """Independent check: direct minimization over the probability simplex.

    min sum_k p_k (a_k - alpha)^2 subject to sum p = 1, sum p a = alpha,
    p >= 0 is a linear program in p; the dual-simplex solution is a vertex
    and therefore exact to roundoff.
    """
    spec = np.real(np.diagonal(A.entries))
    cost = (spec - alpha) ** 2
    res = linprog(
        cost,
        A_eq=np.vstack([np.ones_like(spec), spec]),
        b_eq=np.array([1.0, alpha]),
        bounds=[(0.0, None)] * spec.size,
        method="highs-ds",
    )
    if not res.success:
        raise OutOfRangeError(f"constrained minimization infeasible at alpha={alpha}")
    return math.sqrt(max(res.fun, 0.0))


# -- quantization scan -------------------------------------------------------


@dataclass(frozen=True)
class QuantizationScan:
    """Per-alpha summary of the physical-eigenvalue search and the floor."""

    family: str
    alphas: np.ndarray
    min_axis_distance: np.ndarray   # inf where no candidate in the S window
    floor: np.ndarray
    flagged: np.ndarray             # bool: a physical squeezed state exists
    eigenvalues: list = field(repr=False, default_factory=list)
    errors: list = field(repr=False, default_factory=list)

    def flagged_alphas(self) -> np.ndarray:
        return self.alphas[self.flagged]


def _scan_problem(family: str, alpha: float, beta: float, M: int) -> PencilProblem:
    if family == "circle":
        return circle_problem(alpha, beta, M)
    if family == "oscillator":
        return oscillator_problem(alpha, beta, M)
    raise ValueError(f"unknown family {family!r}; use 'circle' or 'oscillator'")


def quantization_scan(
    family: str,
    alphas,
    beta: float = 0.0,
    M: int = 64,
    *,
    max_workers: int | None = None,
    **solve_kwargs,
) -> QuantizationScan:
    """Scan expectation values for the existence of physical squeezed states.

    Per alpha the pencil is solved, the minimal |Re lambda| over candidates
    (eigenvalues inside the S window with small eigenvector tails) recorded,
    and the two-level uncertainty floor at <A> = alpha attached.  Points where
    the solve fails are flagged in ``errors`` instead of aborting the scan.

    Scan points are independent; ``max_workers`` > 1 evaluates them in a
    thread pool with output assembled in grid order.
    """
    alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
    if np.any(np.abs(alphas) > M / 2):
        raise OutOfRangeError(f"scan grid must satisfy |alpha| <= M/2 = {M / 2}")
    if family == "oscillator" and np.any(alphas < 0):
        raise OutOfRangeError("the number operator has no negative expectations")

    s_window = solve_kwargs.get("s_window", S_WINDOW)
    tail_tol = solve_kwargs.get("tail_tol", TAIL_TOL)

    def one(alpha: float):
        problem = _scan_problem(family, alpha, beta, M)
        floor, _ = uncertainty_floor(problem.A, alpha)
        try:
            sol = solve_pencil(problem, **solve_kwargs)
        except SingularPencilError as exc:
            return math.inf, floor, False, np.array([], dtype=complex), str(exc)
        cand = (
            (sol.eigenvalues.imag >= s_window[0])
            & (sol.eigenvalues.imag <= s_window[1])
            & (sol.tail_masses < tail_tol)
        )
        dist = float(np.min(sol.axis_distances[cand])) if np.any(cand) else math.inf
        return dist, floor, bool(np.any(sol.physical)), sol.eigenvalues, None

    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(one, alphas))
    else:
        rows = [one(a) for a in alphas]

    return QuantizationScan(
        family=family,
        alphas=alphas,
        min_axis_distance=np.array([r[0] for r in rows]),
        floor=np.array([r[1] for r in rows]),
        flagged=np.array([r[2] for r in rows], dtype=bool),
        eigenvalues=[r[3] for r in rows],
        errors=[r[4] for r in rows],
    )


def scan_to_csv_rows(scan: QuantizationScan) -> list[str]:
    rows = ["alpha,minImagDistance,floor,flag"]
    for a, d, f, fl in zip(scan.alphas, scan.min_axis_distance, scan.floor, scan.flagged):
        rows.append(f"{a:.17g},{d:.17g},{f:.17g},{int(fl)}")
    return rows


def scan_to_dict(scan: QuantizationScan) -> dict:
    return {
        "family": scan.family,
        "points": [
            {
                "alpha": float(a),
                "minImagDistance": float(d),
                "floor": float(f),
                "flag": bool(fl),
                "eigenvalues": [[float(z.real), float(z.imag)] for z in np.asarray(ev)],
                "error": err,
            }
            for a, d, f, fl, ev, err in zip(
                scan.alphas,
                scan.min_axis_distance,
                scan.floor,
                scan.flagged,
                scan.eigenvalues,
                scan.errors,
            )
        ],
    }
