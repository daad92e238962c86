"""Truncated two-mode Fock-space states and structural operations.

Basis convention: the flattened index of the pair |n_a, n_b> is
``n_a * cutoff_b + n_b`` (row-major in the mode-a label).  All density
matrices are dense complex Hermitian arrays over that basis.  States are
immutable after construction; every operation here is a pure function.
"""

from dataclasses import dataclass
import math

import numpy as np

from . import config


@dataclass(frozen=True)
class ModeCutoffs:
    """Fock dimensions of the two modes (indices 0 .. cutoff-1)."""

    cutoff_a: int
    cutoff_b: int

    def __post_init__(self):
        if self.cutoff_a < 1 or self.cutoff_b < 1:
            raise ValueError("cutoffs must be >= 1")
        if self.dimension > config.MAX_TOTAL_DIMENSION:
            raise ValueError(
                f"total dimension {self.dimension} exceeds the cap "
                f"{config.MAX_TOTAL_DIMENSION}"
            )

    @property
    def dimension(self) -> int:
        return self.cutoff_a * self.cutoff_b

    def flat_index(self, n_a: int, n_b: int) -> int:
        return n_a * self.cutoff_b + n_b


@dataclass(frozen=True)
class NoonSpec:
    """N photons in one mode or the other, in equal superposition."""

    n_photons: int

    def __post_init__(self):
        if self.n_photons < 1:
            raise ValueError("n_photons must be >= 1")


@dataclass(frozen=True)
class ThermalSpec:
    """Bose-Einstein occupation written two ways.

    ``mean_photons`` is the mean occupation; ``beta_param`` the matching
    exponent of exp(-beta * n).  An amplified vacuum at intensity gain g2
    is thermal with mean g2 - 1 and beta = ln(g2 / (g2 - 1)).
    """

    mean_photons: float
    beta_param: float

    def __post_init__(self):
        if self.mean_photons < 0:
            raise ValueError("mean_photons must be >= 0")
        if not self.beta_param > 0:
            raise ValueError("beta_param must be > 0")
        implied = 1.0 / math.expm1(self.beta_param) if math.isfinite(self.beta_param) else 0.0
        if abs(implied - self.mean_photons) > 1e-12:
            raise ValueError(
                f"inconsistent thermal parameters: mean_photons={self.mean_photons}, "
                f"1/(e^beta - 1)={implied}"
            )

    @classmethod
    def from_gain(cls, g_squared: float) -> "ThermalSpec":
        if g_squared < 1.0:
            raise ValueError("g_squared must be >= 1")
        if g_squared == 1.0:
            return cls(mean_photons=0.0, beta_param=math.inf)
        return cls(mean_photons=g_squared - 1.0, beta_param=math.log(g_squared / (g_squared - 1.0)))


class TwoModeState:
    """Dense Hermitian density matrix of a truncated two-mode state.

    ``trace_deficit`` records 1 - Tr(rho) at construction: states built by
    truncating an infinite sum are never renormalized, the missing tail is
    carried explicitly so downstream tolerances can budget for it.
    """

    __slots__ = ("cutoffs", "matrix", "trace_deficit")

    def __init__(self, cutoffs: ModeCutoffs, matrix: np.ndarray, validate: bool = True,
                 atol: float | None = None):
        atol = config.ATOL_STRUCTURAL if atol is None else atol
        matrix = np.ascontiguousarray(matrix, dtype=np.complex128)
        d = cutoffs.dimension
        if matrix.shape != (d, d):
            raise ValueError(f"matrix shape {matrix.shape} does not match dimension {d}")
        trace = float(matrix.trace().real)
        if validate:
            herm_err = float(np.abs(matrix - matrix.conj().T).max())
            if herm_err > atol:
                raise ValueError(f"matrix is not Hermitian: max |M - M^dag| = {herm_err:.3e}")
            diag = np.diagonal(matrix)
            if float(np.abs(diag.imag).max(initial=0.0)) > atol:
                raise ValueError("diagonal has imaginary parts beyond tolerance")
            if float(diag.real.min(initial=0.0)) < -atol:
                raise ValueError("diagonal has negative entries beyond tolerance")
            if trace > 1.0 + 1e-9:
                raise ValueError(f"trace {trace} exceeds 1; not a truncated density matrix")
        matrix.setflags(write=False)
        object.__setattr__(self, "cutoffs", cutoffs)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "trace_deficit", max(0.0, 1.0 - trace))

    def __setattr__(self, name, value):
        raise AttributeError("TwoModeState is immutable")

    @property
    def dimension(self) -> int:
        return self.cutoffs.dimension

    @property
    def trace(self) -> float:
        return float(self.matrix.trace().real)

    def tensor(self) -> np.ndarray:
        """Read-only view of shape (da, db, da, db)."""
        c = self.cutoffs
        return self.matrix.reshape(c.cutoff_a, c.cutoff_b, c.cutoff_a, c.cutoff_b)

    def populations(self) -> np.ndarray:
        """Diagonal occupation probabilities as a real (da, db) array."""
        c = self.cutoffs
        return np.diagonal(self.matrix).real.reshape(c.cutoff_a, c.cutoff_b).copy()


def build_noon(spec: NoonSpec, cutoffs: ModeCutoffs) -> TwoModeState:
    """Pure-state density matrix of (|N,0> + |0,N>)/sqrt(2).

    The support is finite, so the trace is exactly 1 for any admissible
    cutoffs; exactly four entries are populated, each with value 1/2.
    """
    n = spec.n_photons
    if cutoffs.cutoff_a <= n or cutoffs.cutoff_b <= n:
        raise ValueError(
            f"cutoffs {cutoffs.cutoff_a}x{cutoffs.cutoff_b} cannot hold N={n}; "
            f"need both > {n}"
        )
    d = cutoffs.dimension
    m = np.zeros((d, d), dtype=np.complex128)
    i = cutoffs.flat_index(n, 0)
    j = cutoffs.flat_index(0, n)
    m[i, i] = m[i, j] = m[j, i] = m[j, j] = 0.5
    return TwoModeState(cutoffs, m)


def product_state(mat_a: np.ndarray, mat_b: np.ndarray) -> TwoModeState:
    """Tensor product rho_a (x) rho_b in the flattened basis."""
    mat_a = np.asarray(mat_a, dtype=np.complex128)
    mat_b = np.asarray(mat_b, dtype=np.complex128)
    cutoffs = ModeCutoffs(mat_a.shape[0], mat_b.shape[0])
    return TwoModeState(cutoffs, np.kron(mat_a, mat_b))


def partial_transpose_b(state: TwoModeState) -> TwoModeState:
    """Transpose the mode-b indices: out[(n,m),(n',m')] = in[(n,m'),(n',m)].

    Hermiticity and the trace are preserved; entanglement shows up as
    negative eigenvalues of the result.
    """
    t = state.tensor()
    pt = np.ascontiguousarray(t.transpose(0, 3, 2, 1))
    d = state.dimension
    return TwoModeState(state.cutoffs, pt.reshape(d, d), validate=False)


def trace_and_purity(state: TwoModeState) -> tuple[float, float]:
    """(Tr rho, Tr rho^2); the purity uses Hermiticity: Tr rho^2 = sum |rho_ij|^2."""
    m = state.matrix
    tr = float(m.trace().real)
    purity = float(np.vdot(m, m).real)
    return tr, purity


def trace_distance(state_1: TwoModeState, state_2: TwoModeState) -> float:
    """Half the trace norm of the difference (states must share cutoffs)."""
    if state_1.cutoffs != state_2.cutoffs:
        raise ValueError("states have different cutoffs")
    eigs = np.linalg.eigvalsh(state_1.matrix - state_2.matrix)
    return 0.5 * float(np.abs(eigs).sum())
