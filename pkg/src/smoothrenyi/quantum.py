"""Density matrices, Hermitian eigendecomposition, and quantum smoothing.

Quantum smooth Renyi entropy over the sub-normalized operator ball
{sigma : tr(sigma) >= 1 - eps, 0 <= sigma <= rho} reduces exactly to
classical smoothing of the eigenvalue vector, so every quantum operation
here funnels through the eigensolver and the classical kernels.

The eigensolver is a cyclic Jacobi iteration on Hermitian matrices:
unconditionally convergent, with a certified reconstruction residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import ProbVector, as_order
from .entropy import renyi_entropy as _classical_renyi
from .errors import NumericalError, ResourceError, ValidationError
from .smoothing import SmoothingResult, smooth_subball
from .sources import MarkovChain, block_distribution
from .units import from_nats

HERMITIAN_TOL = 1e-9
EIG_CLIP = 1e-10
RANK_THRESHOLD = 1e-10
_MAX_DIM = 256
_MAX_SWEEPS = 100
_OFF_DIAG_TOL = 1e-12
_EXPLICIT_BLOCK_LIMIT = 64


def _as_square_complex(matrix) -> np.ndarray:
    h = np.array(matrix, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] < 1:
        raise ValidationError("matrix must be square and non-empty")
    if not np.all(np.isfinite(h.real)) or not np.all(np.isfinite(h.imag)):
        raise ValidationError("matrix entries must be finite")
    return h


def _require_hermitian(h: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    dev = float(np.abs(h - h.conj().T).max())
    if dev > tol:
        raise ValidationError(f"matrix is not Hermitian (max deviation {dev:.3g})")


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues sorted from largest to smallest."""

    eigenvalues: np.ndarray

    def __post_init__(self):
        ev = np.array(self.eigenvalues, dtype=float)
        if ev.ndim != 1 or ev.size < 1:
            raise ValidationError("spectrum must be a non-empty 1-d array")
        if np.any(np.diff(ev) > 0):
            raise ValidationError("spectrum must be sorted descending")
        ev.setflags(write=False)
        object.__setattr__(self, "eigenvalues", ev)

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.size)

    def rank(self, threshold: float = RANK_THRESHOLD) -> int:
        return int(np.count_nonzero(self.eigenvalues > threshold))

    def as_prob_vector(self, threshold: float = RANK_THRESHOLD) -> ProbVector:
        """Eigenvalues as a classical distribution; sub-threshold values
        (numerical zeros) are dropped to 0 so rank and support agree."""
        atoms = np.where(self.eigenvalues > threshold, self.eigenvalues, 0.0)
        return ProbVector(atoms)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian positive semidefinite matrix with trace (at most) one."""

    matrix: np.ndarray
    sub_normalized: bool = False

    def __post_init__(self):
        h = _as_square_complex(self.matrix)
        _require_hermitian(h)
        trace = float(h.trace().real)
        if self.sub_normalized:
            if trace > 1.0 + HERMITIAN_TOL or trace < -HERMITIAN_TOL:
                raise ValidationError(f"sub-normalized trace {trace:.12g} outside [0, 1]")
        elif abs(trace - 1.0) > HERMITIAN_TOL:
            raise ValidationError(f"density matrix trace {trace:.12g} must be 1")
        if h.shape[0] > _MAX_DIM:
            raise ResourceError(f"density matrices limited to dimension {_MAX_DIM}")
        h.setflags(write=False)
        object.__setattr__(self, "matrix", h)

    @classmethod
    def from_parts(cls, re, im=None, sub_normalized: bool = False) -> "DensityMatrix":
        re = np.asarray(re, dtype=float)
        im = np.zeros_like(re) if im is None else np.asarray(im, dtype=float)
        if re.shape != im.shape:
            raise ValidationError("real and imaginary parts must have the same shape")
        return cls(re + 1j * im, sub_normalized)

    @classmethod
    def diagonal(cls, probs) -> "DensityMatrix":
        p = np.asarray(probs, dtype=float)
        return cls(np.diag(p.astype(complex)))

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def trace(self) -> float:
        return float(self.matrix.trace().real)

    def spectrum(self) -> Spectrum:
        """Eigenvalues, validated PSD and clipped at the numerical floor."""
        values = eigh_jacobi(self.matrix)
        if float(values.min()) < -EIG_CLIP:
            raise ValidationError(
                f"matrix is not positive semidefinite (eigenvalue {values.min():.3g})"
            )
        return Spectrum(np.maximum(values, 0.0))


def eigh_jacobi(matrix, *, vectors: bool = False, max_sweeps: int = _MAX_SWEEPS):
    """Hermitian eigendecomposition by cyclic Jacobi rotations.

    Sweeps run until the off-diagonal Frobenius mass falls below 1e-12
    (relative to the input norm) or ``max_sweeps`` is hit. Returns the
    eigenvalues sorted descending, plus the matching eigenvector columns
    when ``vectors`` is set.
    """
    if isinstance(matrix, DensityMatrix):
        matrix = matrix.matrix
    h = _as_square_complex(matrix)
    if h.shape[0] > _MAX_DIM:
        raise ResourceError(f"eigensolver limited to dimension {_MAX_DIM}")
    _require_hermitian(h)
    a = 0.5 * (h + h.conj().T)  # exact Hermitian part
    d = a.shape[0]
    v = np.eye(d, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    target = _OFF_DIAG_TOL * scale

    def _off_norm(mat):
        # sum only the off-diagonal squares; subtracting the diagonal from
        # the total norm would cancel catastrophically near convergence
        off = np.abs(mat) ** 2
        np.fill_diagonal(off, 0.0)
        return math.sqrt(float(off.sum()))

    # entries this small cannot lift the off-diagonal norm above the target,
    # and skipping them avoids overflow in the 1/|apq| reciprocal
    skip = target / max(d * d, 4)
    converged = False
    for _ in range(max_sweeps):
        if _off_norm(a) <= target:
            converged = True
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= skip:
                    continue
                w = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau)) if tau != 0 else 1.0
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                # unitary [[c, s], [-conj(w) s, conj(w) c]] zeroes a[p, q]
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - np.conj(w) * s * col_q
                a[:, q] = s * col_p + np.conj(w) * c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - w * s * row_q
                a[q, :] = s * row_p + w * c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                if vectors:
                    vp = v[:, p].copy()
                    vq = v[:, q].copy()
                    v[:, p] = c * vp - np.conj(w) * s * vq
                    v[:, q] = s * vp + np.conj(w) * c * vq
    if not converged and _off_norm(a) > target:
        raise NumericalError("Jacobi iteration failed to reach the off-diagonal target")
    values = np.diag(a).real.copy()
    order = np.argsort(-values, kind="stable")
    values = values[order]
    if vectors:
        return values, v[:, order]
    return values


def eigenvalues_hermitian(matrix, *, vectors: bool = False):
    """Spectrum of a Hermitian matrix (descending), optionally with vectors."""
    if vectors:
        values, v = eigh_jacobi(matrix, vectors=True)
        return Spectrum(values), v
    return Spectrum(eigh_jacobi(matrix))


# ---------------------------------------------------------------------------
# entropies


def quantum_renyi(rho: DensityMatrix, order) -> float:
    """Renyi entropy of a density matrix through its spectrum.

    Order 0 is log-rank (eigenvalues above the 1e-10 threshold), order 1
    the von Neumann entropy, order infinity -log of the top eigenvalue.
    """
    order = as_order(order)
    spectrum = rho.spectrum()
    if order.is_zero:
        rank = spectrum.rank()
        if rank == 0:
            raise ValidationError("density matrix has numerically empty spectrum")
        return from_nats(math.log(rank))
    return _classical_renyi(spectrum.as_prob_vector(), order)


def smooth_quantum_renyi(rho: DensityMatrix, order, eps: float) -> SmoothingResult:
    """Smooth Renyi entropy over {sigma : tr sigma >= 1 - eps, 0 <= sigma <= rho}.

    Equals classical sub-normalized-ball smoothing of the eigenvalue
    vector; the witness is the optimizing eigenvalue profile, realizable
    as sigma = sum_i mu_i |v_i><v_i| (see :func:`realize_witness`).
    """
    return smooth_subball(rho.spectrum().as_prob_vector(), order, eps)


def realize_witness(rho: DensityMatrix, witness: ProbVector) -> DensityMatrix:
    """Materialize a witness eigenvalue profile in rho's eigenbasis."""
    spectrum, v = eigenvalues_hermitian(rho, vectors=True)
    if len(witness) != spectrum.dim:
        raise ValidationError("witness length must match the matrix dimension")
    sigma = (v * witness.atoms) @ v.conj().T
    return DensityMatrix(sigma, sub_normalized=True)


# ---------------------------------------------------------------------------
# eigenvalue-order diagnostics


@dataclass(frozen=True, eq=False)
class WeylReport:
    """Per-index margins lambda_i(A+B) - lambda_i(A) for PSD B."""

    margins: np.ndarray
    min_margin: float
    ok: bool


def weyl_check(a, b, *, tol: float = 1e-9) -> WeylReport:
    """Check that adding a PSD matrix never decreases an ordered eigenvalue."""
    a = _as_square_complex(a)
    b = _as_square_complex(b)
    if a.shape != b.shape:
        raise ValidationError("matrices must share the same dimension")
    _require_hermitian(a)
    _require_hermitian(b)
    b_eigs = eigh_jacobi(b)
    if float(b_eigs.min()) < -tol:
        raise ValidationError(
            f"second matrix must be positive semidefinite (eigenvalue {b_eigs.min():.3g})"
        )
    margins = eigh_jacobi(a + b) - eigh_jacobi(a)
    margins.setflags(write=False)
    min_margin = float(margins.min())
    return WeylReport(margins=margins, min_margin=min_margin, ok=min_margin >= -tol)


# ---------------------------------------------------------------------------
# desk-scale ergodic quantum block sources


@dataclass(frozen=True, eq=False)
class QuantumBlockSource:
    """Stationary quantum source given by its length-n block densities.

    PRODUCT sources are n-fold tensor powers of a fixed state;
    CLASSICALLY_CORRELATED sources emit unitary-rotated basis states with
    probabilities from a classical chain, so the block spectrum equals
    the classical block distribution.
    """

    kind: str
    base: DensityMatrix | None = None
    chain: MarkovChain | None = None
    local_unitary: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("product", "cc"):
            raise ValidationError("quantum source kind must be 'product' or 'cc'")
        if self.kind == "product":
            if self.base is None:
                raise ValidationError("product source needs a base density matrix")
        else:
            if self.chain is None:
                raise ValidationError("classically correlated source needs a chain")
            d = self.chain.n_states
            u = np.eye(d, dtype=complex) if self.local_unitary is None else _as_square_complex(self.local_unitary)
            if u.shape[0] != d:
                raise ValidationError("local unitary dimension must match the state count")
            if float(np.abs(u.conj().T @ u - np.eye(d)).max()) > 1e-9:
                raise ValidationError("local rotation must be unitary")
            u.setflags(write=False)
            object.__setattr__(self, "local_unitary", u)

    @classmethod
    def product(cls, base: DensityMatrix) -> "QuantumBlockSource":
        return cls(kind="product", base=base)

    @classmethod
    def classically_correlated(cls, chain: MarkovChain, local_unitary=None) -> "QuantumBlockSource":
        return cls(kind="cc", chain=chain, local_unitary=local_unitary)

    @property
    def local_dim(self) -> int:
        return self.base.dim if self.kind == "product" else self.chain.n_states


def cc_block_density(source: QuantumBlockSource, n: int) -> DensityMatrix:
    """Explicit length-n block density (dimension capped at 64)."""
    if n < 1:
        raise ValidationError("block length must be >= 1")
    d = source.local_dim
    if d ** n > _EXPLICIT_BLOCK_LIMIT:
        raise ResourceError(
            f"explicit block density of dimension {d}^{n} exceeds {_EXPLICIT_BLOCK_LIMIT}"
        )
    if source.kind == "product":
        rho = source.base.matrix
        out = rho
        for _ in range(n - 1):
            out = np.kron(out, rho)
        return DensityMatrix(out)
    block = block_distribution(source.chain, n)
    rotation = source.local_unitary
    full = rotation
    for _ in range(n - 1):
        full = np.kron(full, rotation)
    rho_n = (full * block.atoms) @ full.conj().T
    return DensityMatrix(rho_n)


def underlying_chain(source: QuantumBlockSource) -> MarkovChain:
    """Classical chain whose block distributions give the source's spectra."""
    if source.kind == "cc":
        return source.chain
    spectrum = source.base.spectrum()
    atoms = spectrum.eigenvalues[spectrum.eigenvalues > RANK_THRESHOLD]
    return MarkovChain.iid(atoms / atoms.sum())
