"""Smooth Renyi entropy under two notions of epsilon-closeness.

Sub-normalized ball:   {Q : 0 <= Q(z) <= P(z), sum Q >= 1 - eps}
Trace-distance ball:   {Q normalized : (1/2) sum |P(z) - Q(z)| <= eps}

Orders above one take the supremum of H_a over the ball, orders below one
the infimum; order one is excluded. Exact closed-form solvers cover the
sub-normalized ball at every order and the trace ball at orders 0 and
infinity; other trace-ball orders fall back to a multi-start projected
search and are flagged non-certified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import logsumexp

from .entropy import (
    EntropyOrder,
    INFINITY,
    MASS_TOL,
    ProbVector,
    WeightedSpectrum,
    ZERO,
    as_order,
    as_prob_vector,
    renyi_entropy,
    renyi_entropy_spectrum,
    statistical_distance,
)
from .errors import ResourceError, UnsupportedError, ValidationError
from .units import from_nats

_BOUNDARY_TOL = 1e-12
_ORACLE_ALPHABET_LIMIT = 12
_ORACLE_SEED = 20240917
# exact integer arithmetic on multiplicities is reliable below 2^53
_EXACT_COUNT_LIMIT = float(1 << 53)


class BallKind(Enum):
    SUB_NORMALIZED = "sub"
    TRACE_DISTANCE = "trace"

    @classmethod
    def parse(cls, text: str) -> "BallKind":
        word = str(text).strip().lower()
        for kind in cls:
            if word == kind.value or word == kind.name.lower():
                return kind
        raise ValidationError(f"unrecognized ball kind {text!r} (use 'sub' or 'trace')")


@dataclass(frozen=True)
class SmoothingSpec:
    """Smoothing parameter bundle: radius and ball kind."""

    epsilon: float
    ball: BallKind = BallKind.SUB_NORMALIZED

    def __post_init__(self):
        eps = float(self.epsilon)
        if not (0.0 <= eps < 1.0):
            raise ValidationError(f"epsilon must lie in [0, 1), got {eps!r}")
        object.__setattr__(self, "epsilon", eps)
        if not isinstance(self.ball, BallKind):
            object.__setattr__(self, "ball", BallKind.parse(self.ball))


@dataclass(frozen=True)
class SmoothingResult:
    """Optimal (or best-found) smoothed entropy with its witness.

    ``witness`` is the ball member achieving ``value`` (omitted for
    aggregated-spectrum computations). ``exact`` is False only for the
    non-certified trace-ball search at general orders.
    """

    value: float
    witness: ProbVector | None
    exact: bool


@dataclass(frozen=True)
class GapReport:
    """Difference between the two closeness notions at one (P, order, eps)."""

    order: EntropyOrder
    epsilon: float
    sub_value: float
    trace_value: float
    gap: float
    bound: float
    sandwich_ok: bool
    certified: bool


def _check_common(p: ProbVector, order: EntropyOrder, eps: float) -> float:
    eps = float(eps)
    if not (0.0 <= eps < 1.0):
        raise ValidationError(f"epsilon must lie in [0, 1), got {eps!r}")
    if order.is_one:
        raise UnsupportedError("smooth Renyi entropy is undefined at order one")
    p.require_normalized("smoothing input")
    return eps


# ---------------------------------------------------------------------------
# sub-normalized ball, exact


def _water_level(atoms: np.ndarray, target_mass: float) -> float:
    """Unique level t with sum_z min(P(z), t) == target_mass (0 < target <= 1).

    Solved exactly segment-by-segment on the sorted piecewise-linear mass
    function; no iterative root finding.
    """
    s = np.sort(atoms)
    m = s.size
    prefix = np.concatenate(([0.0], np.cumsum(s)))
    # mass at the breakpoints t = s[k]
    breakpoint_mass = prefix[1:] + (m - np.arange(1, m + 1)) * s
    j = int(np.searchsorted(breakpoint_mass, target_mass, side="left"))
    if j >= m:
        return float(s[-1])
    return float((target_mass - prefix[j]) / (m - j))


def _greedy_removal(atoms: np.ndarray, eps: float, whole_atoms_only: bool) -> np.ndarray:
    """Remove eps of mass from the smallest atoms (ascending (p, index) order).

    Whole-atom mode (order 0) removes complete atoms while the cumulative
    removed mass stays <= eps and always keeps at least one atom; partial
    mode removes exactly eps, splitting the boundary atom.
    """
    q = atoms.copy()
    order = np.lexsort((np.arange(q.size), q))
    budget = eps
    if whole_atoms_only:
        remaining = int(np.count_nonzero(q > 0))
        for i in order:
            if q[i] <= 0:
                continue
            if remaining <= 1:
                break
            if q[i] <= budget + _BOUNDARY_TOL:
                budget -= q[i]
                q[i] = 0.0
                remaining -= 1
            else:
                break
    else:
        for i in order:
            if q[i] <= 0 or budget <= 0:
                continue
            if q[i] <= budget:
                budget -= q[i]
                q[i] = 0.0
            else:
                q[i] -= budget
                budget = 0.0
                break
    return q


def smooth_subball(dist, order, eps: float) -> SmoothingResult:
    """Exact smooth Renyi entropy over the sub-normalized ball.

    Orders above one are realized by the water-filled witness
    Q(z) = min(P(z), t) with t matching mass 1 - eps; orders below one by
    greedy removal of the smallest atoms (whole atoms only at order 0).
    """
    p = as_prob_vector(dist)
    order = as_order(order)
    eps = _check_common(p, order, eps)
    if eps == 0.0:
        return SmoothingResult(renyi_entropy(p, order), p, True)
    if order.is_sup_side:
        level = _water_level(p.atoms, 1.0 - eps)
        witness = ProbVector(np.minimum(p.atoms, level))
    else:
        witness = ProbVector(_greedy_removal(p.atoms, eps, whole_atoms_only=order.is_zero))
    return SmoothingResult(renyi_entropy(witness, order), witness, True)


# ---------------------------------------------------------------------------
# trace-distance ball, exact orders


def _trace_min_level(atoms: np.ndarray, eps: float) -> float:
    """Smallest achievable maximum after moving at most eps of mass downhill.

    The level t must satisfy cut(t) = sum (P(z) - t)+ <= eps and the cut
    mass must fit below the level, which is exactly t >= 1/m.
    """
    d = np.sort(atoms)[::-1]
    m = d.size
    cum = np.cumsum(d)
    t_eps = float(d[0])
    if eps > 0.0:
        # cut at breakpoint t = d[k] (classes strictly above contribute)
        cut_at = cum - np.arange(1, m + 1) * d
        k = int(np.searchsorted(cut_at, eps, side="right")) - 1
        k = max(k, 0)
        t = (cum[k] - eps) / (k + 1)
        lower = d[k + 1] if k + 1 < m else 0.0
        t_eps = float(min(max(t, lower), d[0]))
    return max(t_eps, 1.0 / m)


def _pour_to_level(atoms: np.ndarray, level: float) -> np.ndarray:
    """Clip above ``level`` and pour the cut mass onto the smallest atoms."""
    q = np.minimum(atoms, level)
    deficit = float(atoms.sum() - q.sum())
    if deficit > 0:
        order = np.lexsort((np.arange(q.size), atoms))
        for i in order:
            room = level - q[i]
            if room <= 0:
                continue
            add = min(room, deficit)
            q[i] += add
            deficit -= add
            if deficit <= 1e-15:
                break
    return q


def smooth_traceball(dist, order, eps: float) -> SmoothingResult:
    """Smooth Renyi entropy over the normalized trace-distance ball.

    Orders 0 and infinity are exact; other orders delegate to the
    multi-start search and are flagged ``exact=False``.
    """
    p = as_prob_vector(dist)
    order = as_order(order)
    eps = _check_common(p, order, eps)
    if eps == 0.0:
        return SmoothingResult(renyi_entropy(p, order), p, True)
    if order.is_infinite:
        level = _trace_min_level(p.atoms, eps)
        witness = ProbVector(_pour_to_level(p.atoms, level))
        return SmoothingResult(renyi_entropy(witness, order), witness, True)
    if order.is_zero:
        # removed mass re-piled on the largest surviving atom; the value
        # coincides with the sub-normalized ball at order 0
        q = _greedy_removal(p.atoms, eps, whole_atoms_only=True)
        removed = float(p.atoms.sum() - q.sum())
        q[int(np.argmax(q))] += removed
        witness = ProbVector(q)
        return SmoothingResult(renyi_entropy(witness, order), witness, True)
    value, witness = _trace_search(p, order, eps)
    return SmoothingResult(value, witness, False)


# ---------------------------------------------------------------------------
# aggregated spectra

def _log_diff_exp(a: float, b: float) -> float:
    """log(exp(a) - exp(b)) for a >= b; returns -inf when equal."""
    if b == -math.inf:
        return a
    if b >= a:
        return -math.inf
    return a + math.log1p(-math.exp(b - a))


def _spectrum_water_level_log(spec: WeightedSpectrum, target_mass: float) -> float:
    """Natural-log water level for sum min(P, t) == target over a spectrum."""
    lp = spec.log_probs[::-1]  # ascending probability
    lm = spec.log_mults[::-1]
    class_mass = np.exp(lp + lm)
    below = np.concatenate(([0.0], np.cumsum(class_mass)))
    # log count of atoms in classes strictly above breakpoint k
    suffix_counts = np.concatenate(
        (np.logaddexp.accumulate((lm)[::-1])[::-1][1:], [-np.inf])
    )
    k_count = lp.size
    for k in range(k_count):
        mass_at_bp = below[k + 1] + (
            math.exp(lp[k] + suffix_counts[k]) if suffix_counts[k] > -math.inf else 0.0
        )
        if mass_at_bp >= target_mass - 1e-15:
            remainder = target_mass - below[k]
            count_log = np.logaddexp(lm[k], suffix_counts[k])
            return float(math.log(remainder) - count_log)
    return float(lp[-1])  # target equals full mass


def smooth_subball_spectrum(spec: WeightedSpectrum, order, eps: float) -> SmoothingResult:
    """Sub-normalized-ball smoothing on an aggregated spectrum (value only).

    Matches :func:`smooth_subball` on the expanded distribution; runs in
    O(classes log classes) with all mass arithmetic in the log domain.
    """
    order = as_order(order)
    eps = float(eps)
    if not (0.0 <= eps < 1.0):
        raise ValidationError(f"epsilon must lie in [0, 1), got {eps!r}")
    if order.is_one:
        raise UnsupportedError("smooth Renyi entropy is undefined at order one")
    spec.require_normalized()
    if eps == 0.0:
        return SmoothingResult(renyi_entropy_spectrum(spec, order), None, True)

    if order.is_sup_side:
        ln_t = _spectrum_water_level_log(spec, 1.0 - eps)
        if order.is_infinite:
            return SmoothingResult(from_nats(-ln_t), None, True)
        a = order.alpha
        terms = spec.log_mults + a * np.minimum(spec.log_probs, ln_t)
        return SmoothingResult(from_nats(float(logsumexp(terms)) / (1.0 - a)), None, True)

    # inf side: remove eps of mass from the lightest classes upward
    lp = spec.log_probs[::-1]
    lm = spec.log_mults[::-1]
    class_mass = np.exp(lp + lm)
    cum = np.cumsum(class_mass)
    # whole-atom removal (order 0) tolerates the same boundary slack as the
    # expanded greedy; partial removal matches eps exactly
    budget = eps + _BOUNDARY_TOL if order.is_zero else eps
    b = int(np.searchsorted(cum, budget, side="right"))
    if b >= lp.size:
        b = lp.size - 1  # keep at least the heaviest class partially
    removed_before = float(cum[b - 1]) if b > 0 else 0.0
    remainder = max(eps - removed_before, 0.0)
    lp_b = float(lp[b])
    lm_b = float(lm[b])
    log_remove = math.log(remainder) - lp_b if remainder > 0 else -math.inf
    # exact integer accounting of the boundary class fits in a float below
    # 2^53 atoms; above that a single partial atom is far below resolution
    log_exact_limit = math.log(_EXACT_COUNT_LIMIT)
    exact_mode = (
        remainder > 0 and lm_b <= log_exact_limit and log_remove <= log_exact_limit
    )

    if order.is_zero:
        if remainder <= 0:
            retained_b = lm_b
        elif exact_mode:
            p_b, count_b = math.exp(lp_b), math.exp(lm_b)
            whole = math.floor((remainder + _BOUNDARY_TOL) / p_b)
            whole = min(whole, int(round(count_b)) - (1 if b == lp.size - 1 else 0))
            retained_b = math.log(count_b - whole) if count_b > whole else -math.inf
        else:
            retained_b = _log_diff_exp(lm_b, log_remove)
        kept = [retained_b] if retained_b > -math.inf else []
        if b + 1 < lp.size:
            kept.append(float(logsumexp(lm[b + 1:])))
        if not kept:
            kept = [0.0]  # single surviving atom
        return SmoothingResult(from_nats(float(logsumexp(kept))), None, True)

    a = order.alpha
    terms: list[float] = []
    if b + 1 < lp.size:
        terms.append(float(logsumexp(lm[b + 1:] + a * lp[b + 1:])))
    if remainder <= 0:
        terms.append(lm_b + a * lp_b)
    elif exact_mode:
        p_b, count_b = math.exp(lp_b), math.exp(lm_b)
        whole = math.floor(remainder / p_b)
        partial = remainder - whole * p_b
        if partial <= _BOUNDARY_TOL * max(p_b, 1.0):
            partial = 0.0
        retained_count = count_b - whole - (1 if partial > 0 else 0)
        if retained_count > 0:
            terms.append(math.log(retained_count) + a * lp_b)
        if partial > 0:
            terms.append(a * math.log(p_b - partial))
    else:
        retained_log = _log_diff_exp(lm_b, log_remove)
        if retained_log > -math.inf:
            terms.append(retained_log + a * lp_b)
    value = from_nats(float(logsumexp(terms)) / (1.0 - a))
    return SmoothingResult(value, None, True)


def smooth_traceball_spectrum(spec: WeightedSpectrum, order, eps: float) -> SmoothingResult:
    """Trace-ball smoothing on a spectrum; exact orders 0 and infinity only."""
    order = as_order(order)
    eps = float(eps)
    if not (0.0 <= eps < 1.0):
        raise ValidationError(f"epsilon must lie in [0, 1), got {eps!r}")
    if order.is_one:
        raise UnsupportedError("smooth Renyi entropy is undefined at order one")
    if not (order.is_zero or order.is_infinite):
        raise UnsupportedError(
            "trace-ball spectrum smoothing is exact only at orders 0 and infinity"
        )
    spec.require_normalized()
    if order.is_zero:
        result = smooth_subball_spectrum(spec, order, eps)
        return SmoothingResult(result.value, None, True)
    if eps == 0.0:
        return SmoothingResult(renyi_entropy_spectrum(spec, order), None, True)

    lp, lm = spec.log_probs, spec.log_mults  # descending probability
    class_mass = np.exp(lp + lm)
    cum_mass = np.cumsum(class_mass)
    count_log = np.logaddexp.accumulate(lm)
    # cut(t) at breakpoints t = p_k: classes strictly above k clipped
    ln_t_eps = float(lp[0])
    k_cross = -1
    for k in range(lp.size):
        cut_here = (cum_mass[k - 1] - math.exp(lp[k] + count_log[k - 1])) if k > 0 else 0.0
        if cut_here <= eps + 1e-15:
            k_cross = k
        else:
            break
    k = k_cross
    mass_above = float(cum_mass[k])
    if mass_above > eps:
        ln_t_eps = float(math.log(mass_above - eps) - count_log[k])
        ln_t_eps = min(ln_t_eps, float(lp[0]))
    else:
        # level sits below the lightest class
        ln_t_eps = float(math.log(1.0 - eps) - count_log[-1])
    ln_t_balance = -spec.log_atom_count()
    ln_t = max(ln_t_eps, ln_t_balance)
    return SmoothingResult(from_nats(-ln_t), None, True)


# ---------------------------------------------------------------------------
# independent oracle


def _renyi_nats_raw(q: np.ndarray, order: EntropyOrder) -> float:
    positive = q[q > 0]
    if positive.size == 0:
        return math.inf if not order.is_sup_side else -math.inf
    if order.is_zero:
        return math.log(positive.size)
    if order.is_infinite:
        return -math.log(float(positive.max()))
    a = order.alpha
    return float(logsumexp(a * np.log(positive))) / (1.0 - a)


def _project_simplex(v: np.ndarray) -> np.ndarray:
    u = np.sort(v)[::-1]
    cssv = np.cumsum(u) - 1.0
    ind = np.arange(1, v.size + 1)
    cond = u - cssv / ind > 0
    rho = ind[cond][-1]
    theta = cssv[cond][-1] / rho
    return np.maximum(v - theta, 0.0)


def _project_l1_ball(v: np.ndarray, center: np.ndarray, radius: float) -> np.ndarray:
    d = v - center
    norm = np.abs(d).sum()
    if norm <= radius:
        return v.copy()
    mu = np.sort(np.abs(d))[::-1]
    cum = np.cumsum(mu)
    ind = np.arange(1, d.size + 1)
    cond = mu - (cum - radius) / ind > 0
    rho = ind[cond][-1]
    theta = (cum[cond][-1] - radius) / rho
    return center + np.sign(d) * np.maximum(np.abs(d) - theta, 0.0)


def _project_trace_ball(v: np.ndarray, p: np.ndarray, eps: float, sweeps: int = 50) -> np.ndarray:
    """Dykstra alternation between the simplex and the L1 ball around p."""
    x = v.copy()
    inc_s = np.zeros_like(x)
    inc_b = np.zeros_like(x)
    for _ in range(sweeps):
        y = _project_simplex(x + inc_s)
        inc_s = x + inc_s - y
        x_new = _project_l1_ball(y + inc_b, p, 2.0 * eps)
        inc_b = y + inc_b - x_new
        moved = float(np.abs(x_new - x).max())
        x = x_new
        if moved <= 1e-13:
            break
    x = np.maximum(x, 0.0)
    total = x.sum()
    if total > 0:
        x = x / total
    # final guard: shrink toward p so feasibility is unconditional
    tv = 0.5 * np.abs(x - p).sum()
    if tv > eps:
        x = p + (x - p) * (eps / tv)
    return x


def _flatten_candidate(p: np.ndarray, eps: float) -> np.ndarray:
    """Two-level water-fill: cut peaks to t_hi, fill valleys to t_lo."""
    m = p.size
    movable = float(np.maximum(p - 1.0 / m, 0.0).sum())
    c = min(eps, movable)
    if c <= 0:
        return p.copy()
    d = np.sort(p)[::-1]
    cum_hi = np.cumsum(d)
    t_hi = d[0]
    for k in range(m):
        t = (cum_hi[k] - c) / (k + 1)
        lower = d[k + 1] if k + 1 < m else 0.0
        if lower - 1e-15 <= t <= d[k] + 1e-15:
            t_hi = t
            break
    s = np.sort(p)
    cum_lo = np.cumsum(s)
    t_lo = s[-1]
    for k in range(m):
        t = (cum_lo[k] + c) / (k + 1)
        upper = s[k + 1] if k + 1 < m else math.inf
        if s[k] - 1e-15 <= t <= upper + 1e-15:
            t_lo = t
            break
    return np.clip(p, t_lo, t_hi)


def _concentrate_candidate(p: np.ndarray, eps: float) -> np.ndarray:
    """Move eps of mass from the lightest atoms onto the heaviest one."""
    q = _greedy_removal(p, eps, whole_atoms_only=False)
    q[int(np.argmax(p))] += eps
    return q


def _trace_search(
    p: ProbVector, order: EntropyOrder, eps: float, starts: int = 64, seed: int = _ORACLE_SEED
) -> tuple[float, ProbVector]:
    """Projected local search over the trace ball; returns the best found."""
    atoms = p.atoms
    m = atoms.size
    if m > _ORACLE_ALPHABET_LIMIT:
        raise ResourceError(
            f"trace-ball search supports alphabets up to {_ORACLE_ALPHABET_LIMIT} atoms"
        )
    sign = -1.0 if order.is_sup_side else 1.0  # minimize sign * H

    candidates = [
        atoms.copy(),
        _flatten_candidate(atoms, eps),
        _concentrate_candidate(atoms, eps),
        _pour_to_level(atoms, _trace_min_level(atoms, eps)),
    ]
    zero_exact = _greedy_removal(atoms, eps, whole_atoms_only=True)
    removed = float(atoms.sum() - zero_exact.sum())
    zero_exact[int(np.argmax(zero_exact))] += removed
    candidates.append(zero_exact)

    for i in range(starts):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(i,)))
        candidates.append(rng.dirichlet(np.ones(m)))

    projected = [_project_trace_ball(start, atoms, eps) for start in candidates]
    scored = sorted(
        ((sign * _renyi_nats_raw(q, order), i) for i, q in enumerate(projected)),
        key=lambda pair: pair[0],
    )
    best_val, best_idx = scored[0]
    best_q = projected[best_idx]
    if not order.is_zero:  # plateau objective gets candidates only, no descent
        for _, idx in scored[:6]:
            q = projected[idx]
            for step in range(30):
                if order.is_infinite:
                    grad = np.zeros(m)
                    grad[int(np.argmax(q))] = sign * -1.0  # d(-log max)/dq_max
                else:
                    a = order.alpha
                    safe = np.maximum(q, 1e-12)
                    # d/dq of sign * (1/(1-a)) log sum q^a
                    grad = sign * (a / (1.0 - a)) * safe ** (a - 1.0)
                    grad /= max(np.exp(logsumexp(a * np.log(safe))), 1e-300)
                norm = float(np.abs(grad).max())
                if norm <= 0:
                    break
                q = _project_trace_ball(
                    q - (0.25 * 0.9 ** step / norm) * grad, atoms, eps, sweeps=12
                )
                val = sign * _renyi_nats_raw(q, order)
                if val < best_val - 1e-15:
                    best_val, best_q = val, q
    witness = ProbVector(best_q)
    return renyi_entropy(witness, order), witness


def smooth_oracle(dist, order, eps: float, ball, *, starts: int = 64, seed: int = _ORACLE_SEED) -> float:
    """Independent verification oracle for small alphabets (<= 12 atoms).

    Sub-normalized ball: bisection over the water-level family (orders
    above one) or exhaustive extreme-point enumeration (orders below one).
    Trace ball: multi-start projected search, best value found.
    """
    p = as_prob_vector(dist)
    order = as_order(order)
    eps = _check_common(p, order, eps)
    if not isinstance(ball, BallKind):
        ball = BallKind.parse(ball)
    if len(p) > _ORACLE_ALPHABET_LIMIT:
        raise ResourceError(
            f"oracle supports alphabets up to {_ORACLE_ALPHABET_LIMIT} atoms, got {len(p)}"
        )
    if eps == 0.0:
        return renyi_entropy(p, order)
    if ball is BallKind.TRACE_DISTANCE:
        value, _ = _trace_search(p, order, eps, starts=starts, seed=seed)
        return value

    atoms = p.atoms
    if order.is_sup_side:
        target = 1.0 - eps
        lo, hi = 0.0, float(atoms.max())
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            mass = float(np.minimum(atoms, mid).sum())
            if mass < target:
                lo = mid
            else:
                hi = mid
            if abs(mass - target) <= 1e-12:
                break
        level = 0.5 * (lo + hi)
        # polish the level on its linear segment so the mass matches exactly
        above = atoms > level
        n_above = int(above.sum())
        if n_above:
            level = (target - float(atoms[~above].sum())) / n_above
        return renyi_entropy(ProbVector(np.minimum(atoms, level)), order)

    # orders below one: every optimizer is P with a zeroed subset and at
    # most one partially reduced atom
    m = atoms.size
    best = math.inf
    for mask in range(1 << m):
        idx = [i for i in range(m) if mask >> i & 1]
        removed = float(atoms[idx].sum()) if idx else 0.0
        if removed > eps + _BOUNDARY_TOL:
            continue
        q = atoms.copy()
        q[idx] = 0.0
        if np.any(q > 0):
            best = min(best, _renyi_nats_raw(q, order))
        remainder = eps - removed
        if remainder > _BOUNDARY_TOL:
            for c in range(m):
                if (mask >> c & 1) or atoms[c] <= remainder:
                    continue
                q2 = q.copy()
                q2[c] = atoms[c] - remainder
                best = min(best, _renyi_nats_raw(q2, order))
    return from_nats(best)


# ---------------------------------------------------------------------------
# gap between the two closeness notions


def closeness_gap(dist, order, eps: float) -> GapReport:
    """Trace-ball minus sub-ball smooth entropy, with the analytic envelope.

    The envelope is (a / (a - 1)) log(1 - eps); the gap lies in
    [0, bound] for orders below one and [bound, 0] above one, collapsing
    to exactly 0 at order 0.
    """
    p = as_prob_vector(dist)
    order = as_order(order)
    eps = _check_common(p, order, eps)
    sub = smooth_subball(p, order, eps)
    trace = smooth_traceball(p, order, eps)
    gap = trace.value - sub.value
    if order.is_zero:
        bound = 0.0
    elif order.is_infinite:
        bound = from_nats(math.log1p(-eps))
    else:
        a = order.alpha
        bound = from_nats((a / (a - 1.0)) * math.log1p(-eps))
    tol = 1e-9 if trace.exact else 1e-7
    if order.is_sup_side:
        sandwich_ok = (bound - tol <= gap <= tol)
    else:
        sandwich_ok = (-tol <= gap <= bound + tol)
    return GapReport(
        order=order,
        epsilon=eps,
        sub_value=sub.value,
        trace_value=trace.value,
        gap=gap,
        bound=bound,
        sandwich_ok=sandwich_ok,
        certified=sub.exact and trace.exact,
    )


# ---------------------------------------------------------------------------
# witness verification (used by tests and callers as an independent check)


def verify_witness(dist, result: SmoothingResult, order, eps: float, ball, *, atol: float = 1e-9) -> None:
    """Re-check ball membership and value consistency of a witness.

    Raises ValidationError on any violation; no-op when the witness was
    omitted (spectrum results).
    """
    if result.witness is None:
        return
    p = as_prob_vector(dist)
    order = as_order(order)
    if not isinstance(ball, BallKind):
        ball = BallKind.parse(ball)
    w = result.witness
    if len(w) != len(p):
        raise ValidationError("witness alphabet size differs from input")
    if ball is BallKind.SUB_NORMALIZED:
        if np.any(w.atoms > p.atoms + atol):
            raise ValidationError("witness exceeds the input pointwise")
        if w.mass < 1.0 - eps - atol:
            raise ValidationError(f"witness mass {w.mass:.12g} below 1 - eps")
    else:
        if abs(w.mass - 1.0) > MASS_TOL:
            raise ValidationError("trace-ball witness must be normalized")
        if statistical_distance(p, w) > eps + atol:
            raise ValidationError("witness outside the trace-distance ball")
    if abs(renyi_entropy(w, order) - result.value) > atol:
        raise ValidationError("witness entropy does not reproduce the reported value")
