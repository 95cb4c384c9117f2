"""Value types shared by the solvers."""

from dataclasses import dataclass, field

import numpy as np

from ..numerics import ContractViolation


@dataclass(frozen=True)
class Box:
    """Axis-aligned box ``lower <= u <= upper``."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        """Validate bounds."""
        lower = np.atleast_1d(np.asarray(self.lower, dtype=np.float64))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=np.float64))
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if lower.shape != upper.shape or lower.ndim != 1:
            raise ContractViolation("box bounds must be vectors of equal length",
                                    {"lower": lower.shape, "upper": upper.shape})
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ContractViolation("box bounds must be finite")
        if np.any(lower > upper):
            raise ContractViolation("box lower bound exceeds upper bound",
                                    {"lower": lower.tolist(), "upper": upper.tolist()})

    @classmethod
    def uniform(cls, lower: float, upper: float, dim: int) -> "Box":
        """Box with the same interval on every coordinate."""
        return cls(np.full(dim, float(lower)), np.full(dim, float(upper)))

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.lower + self.upper)

    def project(self, points: np.ndarray) -> np.ndarray:
        """Componentwise clamp onto the box."""
        return np.clip(points, self.lower, self.upper)

    def contains(self, points: np.ndarray) -> bool:
        points = np.asarray(points, dtype=np.float64)
        return bool(np.all(points >= self.lower) and np.all(points <= self.upper))

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Uniform samples of shape ``(count, dim)``."""
        return rng.uniform(self.lower, self.upper, size=(count, self.dim))


@dataclass(frozen=True)
class SolverOpts:
    """Options for the projected Newton / gradient solvers.

    Attributes:
        grad_tol: Stop when the projected-gradient infinity norm is below this
        max_iters: Iteration limit per solve (outer iterations for DCA)
        use_newton: Use projected Newton directions (projected gradient otherwise)
        armijo_c: Sufficient-decrease constant
        armijo_shrink: Backtracking factor
        multistart_count: Number of starts for non-convex solves
        max_backtracks: Backtracking steps before a line search gives up
    """

    grad_tol: float = 1e-8
    max_iters: int = 500
    use_newton: bool = True
    armijo_c: float = 1e-4
    armijo_shrink: float = 0.5
    multistart_count: int = 8
    max_backtracks: int = 60

    def __post_init__(self) -> None:
        """Validate options."""
        if not self.grad_tol > 0:
            raise ValueError(f"grad_tol must be > 0, got {self.grad_tol}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if not 0 < self.armijo_c < 1:
            raise ValueError(f"armijo_c must be in (0, 1), got {self.armijo_c}")
        if not 0 < self.armijo_shrink < 1:
            raise ValueError(f"armijo_shrink must be in (0, 1), got {self.armijo_shrink}")
        if self.multistart_count < 1:
            raise ValueError(f"multistart_count must be >= 1, got {self.multistart_count}")
        if self.max_backtracks < 1:
            raise ValueError(f"max_backtracks must be >= 1, got {self.max_backtracks}")


@dataclass(frozen=True)
class SolveResult:
    """Outcome of one box-constrained minimization.

    Attributes:
        minimizer: Point inside the box
        value: Objective at ``minimizer``
        iterations: Iterations used (outer iterations for DCA)
        converged: Whether the stopping test was met
        wall_seconds: Wall-clock duration of the solve
        trace: Objective value per outer iteration (DCA only)
    """

    minimizer: np.ndarray
    value: float
    iterations: int
    converged: bool
    wall_seconds: float = 0.0
    trace: tuple[float, ...] = field(default=())


@dataclass(frozen=True)
class BatchSolveResult:
    """Outcome of independent minimizations over a common box."""

    minimizers: np.ndarray
    values: np.ndarray
    iterations: np.ndarray
    converged: np.ndarray

    def __len__(self) -> int:
        return self.minimizers.shape[0]

    def item(self, index: int, wall_seconds: float = 0.0) -> SolveResult:
        return SolveResult(
            minimizer=self.minimizers[index].copy(),
            value=float(self.values[index]),
            iterations=int(self.iterations[index]),
            converged=bool(self.converged[index]),
            wall_seconds=wall_seconds,
        )
