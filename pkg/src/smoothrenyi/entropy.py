"""Renyi entropy of finite (possibly sub-normalized) distributions.

The family interpolates max-entropy (order 0), Shannon entropy (order 1)
and min-entropy (order infinity):

    H_a(P) = (1 / (1 - a)) * log sum_z P(z)^a        for a not in {0, 1, inf}

Huge block distributions are handled through :class:`WeightedSpectrum`,
an aggregated (log-probability, log-multiplicity) representation whose
entropies are evaluated entirely in the log domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import DomainError, NumericalError, ResourceError, ValidationError
from .units import from_nats

MASS_TOL = 1e-9
SPECTRUM_MERGE_TOL = 1e-12


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True, eq=False)
class ProbVector:
    """Finite vector of non-negative probabilities; total mass may be < 1.

    Atoms are stored as a read-only float array. Normalized means the mass
    is within ``MASS_TOL`` of one; masses above ``1 + MASS_TOL`` are
    rejected.
    """

    atoms: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        atoms = np.array(self.atoms, dtype=float)
        if atoms.ndim != 1:
            raise ValidationError("probability vector must be one-dimensional")
        if atoms.size and not np.all(np.isfinite(atoms)):
            raise ValidationError("probabilities must be finite")
        if np.any(atoms < 0):
            raise ValidationError("probabilities must be non-negative")
        if atoms.sum() > 1.0 + MASS_TOL:
            raise ValidationError(
                f"total mass {atoms.sum():.12g} exceeds 1 beyond tolerance"
            )
        atoms.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != atoms.size:
                raise ValidationError("labels length must match atom count")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def uniform(cls, m: int) -> "ProbVector":
        if m < 1:
            raise ValidationError("uniform distribution needs at least one atom")
        return cls(np.full(m, 1.0 / m))

    @property
    def mass(self) -> float:
        return float(self.atoms.sum())

    @property
    def is_normalized(self) -> bool:
        return abs(self.mass - 1.0) <= MASS_TOL

    @property
    def support_size(self) -> int:
        return int(np.count_nonzero(self.atoms > 0))

    def require_normalized(self, what: str = "distribution") -> None:
        if not self.is_normalized:
            raise ValidationError(f"{what} must be normalized (mass {self.mass:.12g})")

    def __len__(self) -> int:
        return int(self.atoms.size)


def as_prob_vector(value) -> ProbVector:
    if isinstance(value, ProbVector):
        return value
    return ProbVector(np.asarray(value, dtype=float))


@dataclass(frozen=True)
class EntropyOrder:
    """Order parameter: a non-negative real, with 0, 1 and inf distinguished."""

    alpha: float

    def __post_init__(self):
        alpha = float(self.alpha)
        if math.isnan(alpha) or alpha < 0:
            raise ValidationError(f"entropy order must be >= 0, got {alpha!r}")
        object.__setattr__(self, "alpha", alpha)

    @property
    def is_zero(self) -> bool:
        return self.alpha == 0.0

    @property
    def is_one(self) -> bool:
        return self.alpha == 1.0

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.alpha)

    @property
    def is_sup_side(self) -> bool:
        """True when smoothing takes a supremum (orders above one)."""
        return self.alpha > 1.0

    @classmethod
    def parse(cls, text: str) -> "EntropyOrder":
        word = str(text).strip().lower()
        if word in ("inf", "infinity", "oo"):
            return INFINITY
        try:
            return cls(float(word))
        except ValueError as exc:
            raise ValidationError(f"unrecognized entropy order {text!r}") from exc

    def __str__(self) -> str:
        if self.is_infinite:
            return "inf"
        if self.alpha == int(self.alpha):
            return str(int(self.alpha))
        return repr(self.alpha)


ZERO = EntropyOrder(0.0)
ONE = EntropyOrder(1.0)
INFINITY = EntropyOrder(math.inf)


def as_order(value) -> EntropyOrder:
    if isinstance(value, EntropyOrder):
        return value
    if isinstance(value, str):
        return EntropyOrder.parse(value)
    return EntropyOrder(float(value))


@dataclass(frozen=True, eq=False)
class WeightedSpectrum:
    """Aggregated block distribution: (log probability, log multiplicity) classes.

    Classes are sorted by log-probability, strictly decreasing; duplicates
    within ``SPECTRUM_MERGE_TOL`` are merged by log-sum-exp on the
    multiplicities. Both fields are natural-log valued.
    """

    log_probs: np.ndarray
    log_mults: np.ndarray
    block_length: int

    def __post_init__(self):
        lp = np.asarray(self.log_probs, dtype=float)
        lm = np.asarray(self.log_mults, dtype=float)
        if lp.shape != lm.shape or lp.ndim != 1:
            raise ValidationError("spectrum arrays must be matching 1-d arrays")
        if np.any(np.isposinf(lp)) or np.any(np.isnan(lp)) or np.any(np.isnan(lm)):
            raise ValidationError("spectrum entries must be finite or -inf")
        if lp.size > 1 and not np.all(np.diff(lp) < 0):
            raise ValidationError("spectrum log-probabilities must be strictly decreasing")
        if int(self.block_length) < 1:
            raise ValidationError("block length must be a positive integer")
        lp.setflags(write=False)
        lm.setflags(write=False)
        object.__setattr__(self, "log_probs", lp)
        object.__setattr__(self, "log_mults", lm)
        object.__setattr__(self, "block_length", int(self.block_length))

    @classmethod
    def from_classes(cls, log_probs, log_mults, block_length: int) -> "WeightedSpectrum":
        """Build from unsorted, possibly duplicated classes.

        Entries with zero probability or zero multiplicity are dropped.
        """
        lp = np.asarray(log_probs, dtype=float).ravel()
        lm = np.asarray(log_mults, dtype=float).ravel()
        if lp.shape != lm.shape:
            raise ValidationError("spectrum arrays must have matching shapes")
        keep = np.isfinite(lp) & (lm > -np.inf) & ~np.isnan(lm)
        lp, lm = lp[keep], lm[keep]
        if lp.size == 0:
            raise DomainError("spectrum has no classes with positive mass")
        order = np.argsort(-lp, kind="stable")
        lp, lm = lp[order], lm[order]
        # group classes whose log-probabilities coincide within tolerance
        starts = np.flatnonzero(np.r_[True, lp[:-1] - lp[1:] > SPECTRUM_MERGE_TOL])
        merged_lp = lp[starts]
        merged_lm = np.logaddexp.reduceat(lm, starts)
        return cls(merged_lp, merged_lm, block_length)

    @property
    def n_classes(self) -> int:
        return int(self.log_probs.size)

    def log_mass(self) -> float:
        """Natural log of the represented total probability mass."""
        return float(logsumexp(self.log_probs + self.log_mults))

    def mass(self) -> float:
        return math.exp(self.log_mass())

    def log_atom_count(self) -> float:
        """Natural log of the number of represented atoms."""
        return float(logsumexp(self.log_mults))

    def require_normalized(self, tol: float = 1e-6, what: str = "spectrum") -> None:
        mass = self.mass()
        if abs(mass - 1.0) > tol:
            raise ValidationError(f"{what} mass {mass:.12g} deviates from 1 beyond {tol:g}")

    def expand(self, limit: int = 1 << 22) -> ProbVector:
        """Materialize every atom; only feasible for small multiplicities."""
        counts_f = np.exp(self.log_mults)
        if not np.all(np.isfinite(counts_f)) or counts_f.sum() > limit:
            raise ResourceError("spectrum too large to expand explicitly")
        counts = np.rint(counts_f).astype(np.int64)
        if np.any(np.abs(counts - counts_f) > 1e-6 * np.maximum(counts_f, 1.0)):
            raise NumericalError("spectrum multiplicities are not near-integers")
        return ProbVector(np.repeat(np.exp(self.log_probs), counts))


# ---------------------------------------------------------------------------
# operations


def renyi_entropy(dist, order) -> float:
    """Renyi entropy of ``dist`` at ``order``, in configured log-base units.

    Sub-normalized inputs are evaluated as-is (no renormalization); zero
    atoms contribute nothing and are excluded from the support at order 0.
    """
    p = as_prob_vector(dist)
    order = as_order(order)
    positive = p.atoms[p.atoms > 0]
    if positive.size == 0:
        raise DomainError("entropy is undefined for an empty or all-zero distribution")
    if order.is_zero:
        return from_nats(math.log(positive.size))
    if order.is_one:
        return from_nats(float(-(positive * np.log(positive)).sum()))
    if order.is_infinite:
        return from_nats(-math.log(float(positive.max())))
    a = order.alpha
    return from_nats(float(logsumexp(a * np.log(positive))) / (1.0 - a))


def statistical_distance(p, q) -> float:
    """Half the L1 distance between two vectors on the same alphabet."""
    pv, qv = as_prob_vector(p), as_prob_vector(q)
    if len(pv) != len(qv):
        raise ValidationError(
            f"alphabet sizes differ ({len(pv)} vs {len(qv)})"
        )
    return 0.5 * float(np.abs(pv.atoms - qv.atoms).sum())


def renyi_entropy_spectrum(spectrum: WeightedSpectrum, order) -> float:
    """Renyi entropy of the distribution an aggregated spectrum represents.

    Matches :func:`renyi_entropy` on the expanded atoms, but works in the
    log domain so multiplicities like 2^4000 stay representable.
    """
    order = as_order(order)
    lp, lm = spectrum.log_probs, spectrum.log_mults
    if lp.size == 0:
        raise DomainError("empty spectrum")
    if order.is_zero:
        return from_nats(float(logsumexp(lm)))
    if order.is_one:
        class_mass = np.exp(lp + lm)
        return from_nats(float(-(class_mass * lp).sum()))
    if order.is_infinite:
        return from_nats(-float(lp[0]))
    a = order.alpha
    return from_nats(float(logsumexp(lm + a * lp)) / (1.0 - a))
