"""Stationary ergodic classical sources: finite-state Markov chains.

The model class is irreducible, aperiodic, stationarity-initialized
chains (i.i.d. sources are chains with identical rows). Block
distributions are enumerated explicitly up to 2^22 atoms; binary chains
additionally get an aggregated spectrum keyed by transition counts that
stays exact out to block length 4096 via log-domain multiplicities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import networkx as nx
import numpy as np
from scipy.special import gammaln, logsumexp

from .entropy import ProbVector, WeightedSpectrum, as_prob_vector
from .errors import NumericalError, ResourceError, UnsupportedError, ValidationError
from .units import from_nats, ln_base

_ROW_SUM_TOL = 1e-12
_STATIONARY_TOL = 1e-9
_ENUMERATION_LIMIT = 1 << 22
_SPECTRUM_BLOCK_LIMIT = 4096

# rng stream tags, so different operations never share a substream
_TAG_SAMPLE_PATH = 1
_TAG_TYPICAL_MC = 2
_MC_CHUNK = 4096


def _validate_transition(transition) -> np.ndarray:
    t = np.array(transition, dtype=float)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] < 1:
        raise ValidationError("transition matrix must be square and non-empty")
    if not np.all(np.isfinite(t)):
        raise ValidationError("transition matrix entries must be finite")
    if np.any(t < 0):
        raise ValidationError("transition probabilities must be non-negative")
    rows = t.sum(axis=1)
    if np.any(np.abs(rows - 1.0) > _ROW_SUM_TOL):
        raise ValidationError("transition matrix rows must sum to 1 within 1e-12")
    graph = nx.DiGraph((int(i), int(j)) for i, j in zip(*np.nonzero(t > 0)))
    graph.add_nodes_from(range(t.shape[0]))
    if not nx.is_strongly_connected(graph):
        raise ValidationError("transition graph must be strongly connected (irreducible)")
    if not nx.is_aperiodic(graph):
        raise ValidationError("transition graph must be aperiodic")
    return t


def stationary_distribution(transition) -> ProbVector:
    """Stationary row vector of an irreducible aperiodic chain.

    Power iteration from the uniform start, run to residual <= 1e-12.
    """
    t = _validate_transition(transition)
    m = t.shape[0]
    pi = np.full(m, 1.0 / m)
    for _ in range(1_000_000):
        nxt = pi @ t
        nxt /= nxt.sum()
        if np.abs(nxt - pi).max() <= 1e-13:
            pi = nxt
            break
        pi = nxt
    else:  # pragma: no cover - guarded by the aperiodicity check
        raise NumericalError("power iteration did not converge")
    if np.abs(pi @ t - pi).max() > 1e-12:
        raise NumericalError("stationary distribution residual above 1e-12")
    return ProbVector(pi)


@dataclass(frozen=True, eq=False)
class MarkovChain:
    """Finite-state stationary ergodic source model.

    The initial distribution must equal the stationary one (within 1e-9);
    omit it to have the stationary distribution computed.
    """

    transition: np.ndarray
    initial: ProbVector

    def __post_init__(self):
        t = _validate_transition(self.transition)
        t.setflags(write=False)
        object.__setattr__(self, "transition", t)
        init = as_prob_vector(self.initial)
        if len(init) != t.shape[0]:
            raise ValidationError("initial distribution length must match state count")
        init.require_normalized("initial distribution")
        pi = stationary_distribution(t)
        if np.abs(init.atoms - pi.atoms).max() > _STATIONARY_TOL:
            raise ValidationError("initial distribution must equal the stationary one")

    @classmethod
    def from_transition(cls, transition, initial=None) -> "MarkovChain":
        t = _validate_transition(transition)
        init = as_prob_vector(initial) if initial is not None else stationary_distribution(t)
        return cls(t, init)

    @classmethod
    def iid(cls, probs) -> "MarkovChain":
        """Memoryless source: every row equals the symbol distribution."""
        p = as_prob_vector(probs)
        p.require_normalized("symbol distribution")
        t = np.tile(p.atoms, (len(p), 1))
        return cls(t, p)

    @property
    def n_states(self) -> int:
        return int(self.transition.shape[0])

    @property
    def is_binary(self) -> bool:
        return self.n_states == 2

    @property
    def is_iid(self) -> bool:
        return bool(np.all(self.transition == self.transition[0]))


def entropy_rate(chain: MarkovChain) -> float:
    """Per-symbol Shannon entropy rate: -sum_i pi_i sum_j T_ij log T_ij."""
    t = chain.transition
    with np.errstate(divide="ignore", invalid="ignore"):
        contrib = np.where(t > 0, t * np.log(t), 0.0)
    return from_nats(float(-(chain.initial.atoms @ contrib.sum(axis=1))))


def block_distribution(chain: MarkovChain, n: int) -> ProbVector:
    """Exact distribution over length-n state sequences (lexicographic order)."""
    if n < 1:
        raise ValidationError("block length must be >= 1")
    m = chain.n_states
    if m ** n > _ENUMERATION_LIMIT:
        raise ResourceError(
            f"block distribution with {m}^{n} atoms exceeds the enumeration limit"
        )
    probs = chain.initial.atoms.copy()
    for _ in range(n - 1):
        last = np.tile(np.arange(m), probs.size // m) if probs.size > m else np.arange(m)
        probs = (probs[:, None] * chain.transition[last, :]).ravel()
    labels = None
    if m ** n <= 1024:
        digits = "0123456789abcdef"[:m]
        labels = tuple(
            "".join(digits[(idx // m ** (n - 1 - k)) % m] for k in range(n))
            for idx in range(m ** n)
        )
    return ProbVector(probs, labels)


def _log_binomial(n, k):
    n = np.asarray(n, dtype=float)
    k = np.asarray(k, dtype=float)
    out = gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)
    return np.where((k < 0) | (k > n) | (n < 0), -np.inf, out)


def count_binary_strings(first_symbol: int, n00: int, n01: int, n10: int, n11: int) -> int:
    """Exact number of binary strings with the given first symbol and
    pairwise transition counts (run-composition counting; big integers)."""
    a = first_symbol
    if a == 0:
        if n01 == n10:
            end, r0, r1 = 0, n01 + 1, n01
        elif n01 == n10 + 1:
            end, r0, r1 = 1, n01, n01
        else:
            return 0
    else:
        if n10 == n01:
            end, r1, r0 = 1, n10 + 1, n10
        elif n10 == n01 + 1:
            end, r1, r0 = 0, n10, n10
        else:
            return 0
    zeros = n00 + n01 + (1 if end == 0 else 0)
    ones = n11 + n10 + (1 if end == 1 else 0)
    if r0 == 0:
        f0 = 1 if zeros == 0 else 0
    else:
        f0 = math.comb(zeros - 1, r0 - 1) if zeros >= r0 else 0
    if r1 == 0:
        f1 = 1 if ones == 0 else 0
    else:
        f1 = math.comb(ones - 1, r1 - 1) if ones >= r1 else 0
    return f0 * f1


def _iid_spectrum(row: np.ndarray, n: int) -> WeightedSpectrum:
    # validity of the chain guarantees both symbol probabilities are positive
    p0, p1 = float(row[0]), float(row[1])
    k = np.arange(n + 1, dtype=float)
    log_prob = k * math.log(p1) + (n - k) * math.log(p0)
    log_mult = _log_binomial(n, k)
    return WeightedSpectrum.from_classes(log_prob, log_mult, n)


def block_spectrum(chain: MarkovChain, n: int) -> WeightedSpectrum:
    """Aggregated block distribution of a binary chain.

    Classes are keyed by (first symbol, transition counts); the class
    multiplicity is the run-composition count, held as a log-domain real
    so block lengths up to 4096 stay exact within float accuracy.
    """
    if not chain.is_binary:
        raise UnsupportedError("aggregated block spectra require a binary chain")
    if n < 1:
        raise ValidationError("block length must be >= 1")
    if n > _SPECTRUM_BLOCK_LIMIT:
        raise ResourceError(f"block spectrum limited to n <= {_SPECTRUM_BLOCK_LIMIT}")
    if chain.is_iid:
        spec = _iid_spectrum(chain.transition[0], n)
        spec.require_normalized(what="block spectrum")
        return spec

    t = chain.transition
    with np.errstate(divide="ignore"):
        log_t = np.where(t > 0, np.log(np.where(t > 0, t, 1.0)), -np.inf)
        log_pi = np.where(
            chain.initial.atoms > 0, np.log(np.maximum(chain.initial.atoms, 1e-300)), -np.inf
        )

    def _count_term(count, log_entry):
        # avoid 0 * (-inf) when a transition has zero probability and is unused
        if log_entry == -np.inf:
            return np.where(count > 0, -np.inf, 0.0)
        return count * log_entry

    lp_parts: list[np.ndarray] = []
    lm_parts: list[np.ndarray] = []
    for a in (0, 1):
        if log_pi[a] == -np.inf:
            continue
        # feasible (n01, n10) pairs with the end symbol and run counts they force
        for k in range(n):
            if a == 0:
                variants = (((k, k), 0, k + 1, k), ((k + 1, k), 1, k + 1, k + 1))
            else:
                variants = (((k, k), 1, k, k + 1), ((k, k + 1), 0, k + 1, k + 1))
            for (k01, k10), end, r0, r1 in variants:
                free = n - 1 - k01 - k10
                if free < 0:
                    continue
                n00 = np.arange(free + 1, dtype=float)
                n11 = free - n00
                zeros = n00 + k01 + (1.0 if end == 0 else 0.0)
                ones = n11 + k10 + (1.0 if end == 1 else 0.0)
                if r0 == 0:
                    f0 = np.where(zeros == 0, 0.0, -np.inf)
                else:
                    f0 = _log_binomial(zeros - 1.0, r0 - 1.0)
                if r1 == 0:
                    f1 = np.where(ones == 0, 0.0, -np.inf)
                else:
                    f1 = _log_binomial(ones - 1.0, r1 - 1.0)
                log_mult = f0 + f1
                keep = log_mult > -np.inf
                if not np.any(keep):
                    continue
                log_prob = (
                    log_pi[a]
                    + _count_term(n00, log_t[0, 0])
                    + _count_term(np.full(free + 1, float(k01)), log_t[0, 1])
                    + _count_term(np.full(free + 1, float(k10)), log_t[1, 0])
                    + _count_term(n11, log_t[1, 1])
                )
                keep &= log_prob > -np.inf
                if np.any(keep):
                    lp_parts.append(log_prob[keep])
                    lm_parts.append(log_mult[keep])
    spec = WeightedSpectrum.from_classes(
        np.concatenate(lp_parts), np.concatenate(lm_parts), n
    )
    spec.require_normalized(what="block spectrum")
    return spec


# ---------------------------------------------------------------------------
# typicality diagnostics


@dataclass(frozen=True)
class TypicalSetReport:
    """Mass and size of the set of blocks with per-symbol surprisal
    within epsilon of the entropy rate (band in configured log units)."""

    n: int
    epsilon: float
    mass: float
    cardinality: int | None
    log_cardinality: float
    log_card_bound: float
    mass_ok: bool
    card_ok: bool


def _typical_band_nats(h: float, n: int, eps: float) -> tuple[float, float]:
    lo = -n * (h + eps) * ln_base()
    hi = -n * (h - eps) * ln_base()
    slack = 1e-9 * max(1.0, abs(lo))
    return lo - slack, hi + slack


def typical_set_report(chain: MarkovChain, n: int, eps: float, method: str = "auto") -> TypicalSetReport:
    """Exact typical-set mass and cardinality at block length n.

    The cardinality bound |T| <= base^{n(h+eps)} holds unconditionally;
    the mass threshold 1 - eps is only reported, since it is guaranteed
    only for large n.
    """
    if eps <= 0:
        raise ValidationError("typicality tolerance must be positive")
    h = entropy_rate(chain)
    lo, hi = _typical_band_nats(h, n, eps)
    use_dist = method == "dist" or (
        method == "auto" and chain.n_states ** n <= _ENUMERATION_LIMIT
    )
    if use_dist:
        block = block_distribution(chain, n)
        with np.errstate(divide="ignore"):
            lp = np.where(block.atoms > 0, np.log(np.maximum(block.atoms, 1e-320)), -np.inf)
        typical = (lp >= lo) & (lp <= hi) & (block.atoms > 0)
        mass = float(block.atoms[typical].sum())
        cardinality = int(typical.sum())
        log_card = math.log(cardinality) / ln_base() if cardinality else -math.inf
    elif chain.is_binary:
        spec = block_spectrum(chain, n)
        typical = (spec.log_probs >= lo) & (spec.log_probs <= hi)
        if np.any(typical):
            mass = float(
                np.exp(logsumexp(spec.log_probs[typical] + spec.log_mults[typical]))
            )
            log_card = float(logsumexp(spec.log_mults[typical])) / ln_base()
        else:
            mass, log_card = 0.0, -math.inf
        cardinality = None
    else:
        raise ResourceError("typical-set report needs enumeration or a binary chain")
    log_bound = n * (h + eps)
    card_ok = log_card <= log_bound + 1e-9 * max(1.0, abs(log_bound))
    return TypicalSetReport(
        n=n,
        epsilon=eps,
        mass=mass,
        cardinality=cardinality,
        log_cardinality=log_card,
        log_card_bound=log_bound,
        mass_ok=mass >= 1.0 - eps - 1e-12,
        card_ok=card_ok,
    )


def typical_fraction_mc(chain: MarkovChain, n: int, eps: float, samples: int, seed: int) -> float:
    """Monte-Carlo estimate of the typical-set mass from sampled paths.

    Deterministic for a given seed; samples are drawn in fixed-size
    chunks with independent substreams, so the estimate is independent
    of any concurrent partitioning of the chunks.
    """
    if samples < 1:
        raise ValidationError("sample count must be >= 1")
    if eps <= 0:
        raise ValidationError("typicality tolerance must be positive")
    h = entropy_rate(chain)
    m = chain.n_states
    cum_rows = np.cumsum(chain.transition, axis=1)
    cum_init = np.cumsum(chain.initial.atoms)
    with np.errstate(divide="ignore"):
        log_t = np.where(chain.transition > 0, np.log(np.maximum(chain.transition, 1e-320)), -np.inf)
        log_pi = np.where(chain.initial.atoms > 0, np.log(np.maximum(chain.initial.atoms, 1e-320)), -np.inf)
    hits = 0
    done = 0
    chunk_index = 0
    while done < samples:
        count = min(_MC_CHUNK, samples - done)
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=seed, spawn_key=(_TAG_TYPICAL_MC, chunk_index))
        )
        state = np.searchsorted(cum_init, rng.random(count), side="right").clip(0, m - 1)
        logp = log_pi[state].copy()
        for _ in range(n - 1):
            u = rng.random(count)
            nxt = (u[:, None] >= cum_rows[state]).sum(axis=1).clip(0, m - 1)
            logp += log_t[state, nxt]
            state = nxt
        rate = -logp / (n * ln_base())
        hits += int(np.count_nonzero((rate >= h - eps - 1e-12) & (rate <= h + eps + 1e-12)))
        done += count
        chunk_index += 1
    return hits / samples


def sample_path(chain: MarkovChain, n: int, seed: int) -> np.ndarray:
    """One length-n state path; initial symbol from the stationary law."""
    if n < 1:
        raise ValidationError("path length must be >= 1")
    rng = np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(_TAG_SAMPLE_PATH, 0))
    )
    m = chain.n_states
    cum_rows = np.cumsum(chain.transition, axis=1)
    cum_init = np.cumsum(chain.initial.atoms)
    path = np.empty(n, dtype=np.int64)
    draws = rng.random(n)
    path[0] = np.searchsorted(cum_init, draws[0], side="right").clip(0, m - 1)
    for k in range(1, n):
        path[k] = np.searchsorted(cum_rows[path[k - 1]], draws[k], side="right").clip(0, m - 1)
    return path
