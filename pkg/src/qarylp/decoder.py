"""Low-complexity LP decoding by coordinate ascent on a smoothed dual.

The decoder keeps one real (q-1)-vector message per Tanner-graph edge, plus a
frozen channel message -llr_i in a virtual slot of each variable.  Feasible
dual points assign each variable a potential phi_i bounded by the best score
of any constant local word at that variable, and each check a potential
theta_j bounded by the best score of any local codeword of that check; the
dual objective is the sum of all potentials.  Replacing each minimum with the
soft minimum min^kappa{z} = -(1/kappa) log sum_l exp(-kappa z_l) makes the
edge-local part of the objective a smooth concave function of that edge's
message, so each visit jumps straight to the closed-form stationary point,
which is the exact per-edge maximizer.  A sweep over the edges therefore
never decreases the dual objective.  kappa = math.inf applies the same
update with hard minima: still locally maximal, but without the monotone
guarantee.  Decisions score each variable's constant words by the channel
cost minus the sum of edge messages and pick the strictly cheapest word,
the zero word costing 0; ties at the minimum erase the symbol (or, strictly
below zero, surface MalformedDecision).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .codes import SpcCodebook, TannerCode, enumerate_spc

# messages are clipped here; a bucket with no local word would otherwise
# push its message to infinity
_MESSAGE_CLAMP = 1e18

# |score| at or below this counts as a zero crossing and erases the symbol
_DECISION_ZERO_TOL = 1e-12

ERASED = -1


class EmptyList(ValueError):
    """soft_min of an empty collection is undefined."""


class DimensionMismatch(ValueError):
    """LLR matrix shape does not match the code."""


class MalformedDecision(RuntimeError):
    """More than one symbol slot claims the decision for one variable."""


class Status(enum.Enum):
    CODEWORD_FOUND = "codeword_found"
    MAX_ITERATIONS = "max_iterations"


_EDGE_ORDERS = ("check_major", "variable_major")


@dataclass(frozen=True)
class DecoderConfig:
    """Knobs for decode(); kappa = math.inf selects hard minima."""

    max_iterations: int = 100
    kappa: float = 100.0
    edge_order: str = "check_major"
    stop_on_codeword: bool = True

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError(
                f"max_iterations must be >= 1, got {self.max_iterations}"
            )
        if not self.kappa > 0:
            raise ValueError(f"kappa must be > 0 or math.inf, got {self.kappa}")
        if self.edge_order not in _EDGE_ORDERS:
            raise ValueError(
                f"edge_order must be one of {_EDGE_ORDERS}, got {self.edge_order!r}"
            )


@dataclass
class DecodeOutcome:
    """Decision plus bookkeeping from a decode() run."""

    symbols: np.ndarray
    status: Status
    iterations_used: int
    dual_objective_trace: tuple
    malformed_decisions: int = 0


# ---- per-code static structure ----


class _CodeCache:
    """Edge indexing, local codebooks, and bucket indices for one code."""

    def __init__(self, code: TannerCode):
        self.code = code
        q = code.q
        self.edge_index = {edge: e for e, edge in enumerate(code.edges)}
        self.n_edges = len(code.edges)
        # edge ids grouped per check (in row order) and per variable
        self.check_edges = []
        pos = 0
        for row in code.rows:
            self.check_edges.append(np.arange(pos, pos + len(row)))
            pos += len(row)
        var_lists: list[list[int]] = [[] for _ in range(code.n)]
        for e, (i, _) in enumerate(code.edges):
            var_lists[i].append(e)
        self.var_edges = [np.array(lst, dtype=np.int64) for lst in var_lists]
        # position of each edge's variable inside its check's column list
        self.edge_slot = np.empty(self.n_edges, dtype=np.int64)
        for j, row in enumerate(code.rows):
            for t, (i, _) in enumerate(row):
                self.edge_slot[self.edge_index[(i, j)]] = t
        self.books: list[SpcCodebook] = [enumerate_spc(code, j) for j in range(code.m)]
        self.words = [book.words.astype(np.int64) for book in self.books]
        # buckets[j][t][beta]: indices of check-j words whose slot t holds beta
        self.buckets = [
            [
                [np.flatnonzero(words[:, t] == beta) for beta in range(q)]
                for t in range(words.shape[1])
            ]
            for j, words in enumerate(self.words)
        ]
        self.schedules = {
            "check_major": tuple(
                (self.edge_index[(i, j)], i, j) for j in range(code.m)
                for i, _ in code.rows[j]
            ),
            "variable_major": tuple(
                (self.edge_index[(i, j)], i, j) for i in range(code.n)
                for j in code.columns[i]
            ),
        }


@lru_cache(maxsize=16)
def _code_cache(code: TannerCode) -> _CodeCache:
    return _CodeCache(code)


# ---- soft minimum ----


def _softmin_arr(values: np.ndarray, kappa: float) -> float:
    """Soft minimum of a 1-d array; empty arrays give +inf."""
    if values.size == 0:
        return math.inf
    if math.isinf(kappa):
        return float(values.min())
    lo = float(values.min())
    if math.isinf(lo):
        return lo
    # shifted log-sum-exp; the lo term contributes 1, so the log is >= 0
    return lo - math.log(np.exp(-kappa * (values - lo)).sum()) / kappa


def soft_min(values, kappa: float) -> float:
    """min^kappa{z} = -(1/kappa) log sum_l exp(-kappa z_l); min at kappa=inf.

    Computed in shifted form, so it stays finite for kappa up to 1e3 and
    values of either sign.  Satisfies min - log(L)/kappa <= result <= min
    for a list of length L.
    """
    arr = np.asarray(values, dtype=np.float64).reshape(-1)
    if arr.size == 0:
        raise EmptyList("soft_min of an empty collection")
    if not kappa > 0:
        raise ValueError(f"kappa must be > 0 or math.inf, got {kappa}")
    return _softmin_arr(arr, kappa)


# ---- dual state ----


@dataclass
class DualState:
    """Mutable decoder state for one frame.

    messages[e] is the (q-1)-vector on edge e (check-major edge ids);
    chan[i] = -llr[i] is the fixed channel slot of variable i.  node_sum
    caches chan[i] plus the sum of messages on the variable's edges, and
    check_costs[j] caches the score of every local codeword of check j,
    where a word's score is the sum of messages[e][b - 1] over its nonzero
    slots b.  Both caches are maintained incrementally by set_message.
    """

    code: TannerCode
    kappa: float
    llr: np.ndarray
    chan: np.ndarray
    messages: np.ndarray
    node_sum: np.ndarray
    check_costs: list
    phi: np.ndarray
    theta: np.ndarray
    cache: _CodeCache = field(repr=False, default=None)


def init_state(code: TannerCode, llr, config: DecoderConfig) -> DualState:
    """Fresh state: zero edge messages, channel slots at -llr, tight potentials."""
    lam = np.asarray(llr, dtype=np.float64)
    if lam.shape != (code.n, code.q - 1):
        raise DimensionMismatch(
            f"llr shape {lam.shape} does not match ({code.n}, {code.q - 1})"
        )
    cache = _code_cache(code)
    state = DualState(
        code=code,
        kappa=config.kappa,
        llr=lam,
        chan=-lam,
        messages=np.zeros((cache.n_edges, code.q - 1)),
        node_sum=(-lam).copy(),
        check_costs=[np.zeros(len(book)) for book in cache.books],
        phi=np.zeros(code.n),
        theta=np.zeros(code.m),
        cache=cache,
    )
    for i in range(code.n):
        state.phi[i] = _variable_potential(state, i)
    for j in range(code.m):
        state.theta[j] = _softmin_arr(state.check_costs[j], state.kappa)
    return state


def _variable_potential(state: DualState, i: int) -> float:
    # constant-word scores at variable i: zero word scores 0, the word that
    # repeats symbol b scores -node_sum[i, b-1]
    scores = np.concatenate(([0.0], -state.node_sum[i]))
    return _softmin_arr(scores, state.kappa)


def set_message(state: DualState, i: int, j: int, values) -> None:
    """Assign the message on edge (i, j), keeping all caches consistent."""
    cache = state.cache
    e = cache.edge_index[(i, j)]
    new = np.asarray(values, dtype=np.float64)
    delta = new - state.messages[e]
    state.messages[e] = new
    state.node_sum[i] += delta
    t = cache.edge_slot[e]
    pad = np.concatenate(([0.0], delta))
    state.check_costs[j] += pad[cache.words[j][:, t]]
    update_phi_theta(state, i, j)


def _refresh_caches(state: DualState) -> None:
    # recompute node_sum and check_costs from messages, shedding float drift
    state.node_sum[:] = state.chan
    cache = state.cache
    for i in range(state.code.n):
        edges = cache.var_edges[i]
        if edges.size:
            state.node_sum[i] += state.messages[edges].sum(axis=0)
    for j in range(state.code.m):
        words = cache.words[j]
        costs = np.zeros(words.shape[0])
        for t, e in enumerate(cache.check_edges[j]):
            pad = np.concatenate(([0.0], state.messages[e]))
            costs += pad[words[:, t]]
        state.check_costs[j] = costs


# ---- instrumentation terms ----


def compute_v_terms(state: DualState, i: int, j: int, alpha: int):
    """Variable-side exclusion scores for edge (i, j) and symbol alpha.

    V_bar negates the soft minimum over constant local words whose slot for
    check j differs from alpha (full scores, channel slot included); V_eq
    negates the score of the constant-alpha word with the check-j slot left
    out.  Returns (V_bar, V_eq).
    """
    e = state.cache.edge_index[(i, j)]
    scores = np.concatenate(([0.0], -state.node_sum[i]))
    keep = np.arange(state.code.q) != alpha
    v_bar = -_softmin_arr(scores[keep], state.kappa)
    v_eq = state.node_sum[i, alpha - 1] - state.messages[e, alpha - 1]
    return v_bar, v_eq


def compute_c_terms(state: DualState, j: int, i: int, alpha: int):
    """Check-side exclusion scores for edge (i, j) and symbol alpha.

    C_bar negates the soft minimum over local codewords of check j whose
    slot for variable i differs from alpha; C_eq negates the soft minimum
    over words with that slot equal to alpha, scored with variable i's
    position excluded.  Returns (C_bar, C_eq).
    """
    cache = state.cache
    e = cache.edge_index[(i, j)]
    t = cache.edge_slot[e]
    costs = state.check_costs[j]
    slot_vals = cache.words[j][:, t]
    c_bar = -_softmin_arr(costs[slot_vals != alpha], state.kappa)
    inc = _softmin_arr(costs[cache.buckets[j][t][alpha]], state.kappa)
    # every word in the alpha bucket carries messages[e][alpha-1]; removing
    # the position shifts the whole bucket by that constant
    c_eq = state.messages[e, alpha - 1] - inc
    return c_bar, c_eq


def local_function(state: DualState, i: int, j: int) -> float:
    """Edge-local part of the dual objective: both potentials recomputed."""
    return _variable_potential(state, i) + _softmin_arr(
        state.check_costs[j], state.kappa
    )


def update_phi_theta(state: DualState, i: int, j: int) -> DualState:
    """Tighten phi_i and theta_j to their current soft-minimum bounds."""
    state.phi[i] = _variable_potential(state, i)
    state.theta[j] = _softmin_arr(state.check_costs[j], state.kappa)
    return state


def dual_objective(state: DualState) -> float:
    """sum_i phi_i + sum_j theta_j."""
    return float(state.phi.sum() + state.theta.sum())


# ---- edge updates ----


def _maximize_edge(state: DualState, i: int, j: int) -> None:
    # closed-form joint maximizer of the edge-local objective: with
    # bucket(b) = soft minimum of check-j word scores whose slot for
    # variable i equals b (current messages included), the stationary point
    # of phi_i + theta_j in this edge's message w is, per nonzero symbol a,
    #   w(a) <- w(a) - (node_sum(i, a) + bucket(a) - bucket(0)) / 2
    # The a-slots decouple once the shared normalizer bucket(0) is fixed,
    # and the current w(a) cancels from the right side exactly, so a
    # message is never used to update itself.
    cache = state.cache
    e = cache.edge_index[(i, j)]
    t = cache.edge_slot[e]
    costs = state.check_costs[j]
    buckets = cache.buckets[j][t]
    sm = np.empty(state.code.q)
    for beta in range(state.code.q):
        sm[beta] = _softmin_arr(costs[buckets[beta]], state.kappa)
    new = state.messages[e] - 0.5 * (state.node_sum[i] + sm[1:] - sm[0])
    np.clip(new, -_MESSAGE_CLAMP, _MESSAGE_CLAMP, out=new)
    set_message(state, i, j, new)


def update_edge_soft(state: DualState, i: int, j: int) -> DualState:
    """Maximize the edge-local dual objective over edge (i, j), finite kappa."""
    if math.isinf(state.kappa):
        raise ValueError("update_edge_soft requires finite kappa")
    _maximize_edge(state, i, j)
    return state


def update_edge_hard(state: DualState, i: int, j: int) -> DualState:
    """Hard-minimum edge update: the closed form with plain minima.

    For q = 2 this lands on the midpoint of the closed interval of
    maximizers; in general it remains locally maximal slot by slot.
    """
    if not math.isinf(state.kappa):
        raise ValueError("update_edge_hard requires kappa = math.inf")
    _maximize_edge(state, i, j)
    return state


# ---- decisions ----


def _decision_scores(state: DualState) -> np.ndarray:
    # x_hat[i, alpha] = llr[i, alpha] - sum of edge messages: the channel
    # slot joins the per-variable sum like any other slot of the repetition
    # code; recomputed from messages directly so decisions are immune to
    # cache drift
    scores = state.llr.copy()
    for i in range(state.code.n):
        edges = state.cache.var_edges[i]
        if edges.size:
            scores[i] -= state.messages[edges].sum(axis=0)
    return scores


def _decide_symbols(state: DualState) -> np.ndarray:
    # each variable decides the repetition word with the smallest score,
    # where the zero word scores 0 and the word repeating alpha scores
    # x_hat[i, alpha]; a tie for the smallest score means no unique word
    # claims the decision
    scores = _decision_scores(state)
    symbols = np.empty(state.code.n, dtype=np.int64)
    for i in range(state.code.n):
        full = np.concatenate(([0.0], scores[i]))
        order = np.argsort(full, kind="stable")
        best, runner = full[order[0]], full[order[1]]
        if runner - best <= _DECISION_ZERO_TOL:
            if best < -_DECISION_ZERO_TOL:
                tied = np.flatnonzero(full - best <= _DECISION_ZERO_TOL)
                raise MalformedDecision(
                    f"variable {i}: slots {tied.tolist()} all claim the "
                    f"decision (scores {scores[i].tolist()})"
                )
            symbols[i] = ERASED
            continue
        symbols[i] = int(order[0])
    return symbols


def decide(state: DualState) -> DecodeOutcome:
    """Read the current decision: cheapest repetition word per variable.

    A variable's slot scores are llr minus the sums of its edge messages,
    so the channel slot participates alongside the check slots, and the
    score of the constant word repeating alpha is exactly the term whose
    minimum over words defines phi_i.  The strictly cheapest word (the
    zero word costs 0) selects the symbol.  A tie within
    _DECISION_ZERO_TOL at a nonnegative minimum erases the symbol; a tie
    strictly below zero means several nonzero symbols claim the variable
    at once and raises MalformedDecision.
    """
    symbols = _decide_symbols(state)
    found = not np.any(symbols == ERASED) and state.code.is_codeword(symbols)
    return DecodeOutcome(
        symbols=symbols,
        status=Status.CODEWORD_FOUND if found else Status.MAX_ITERATIONS,
        iterations_used=0,
        dual_objective_trace=(dual_objective(state),),
    )


def decode(code: TannerCode, llr, config: DecoderConfig) -> DecodeOutcome:
    """Run coordinate-ascent sweeps until a codeword is found or the budget ends.

    Each iteration visits every edge in the configured order, applying the
    soft update (finite kappa) or the hard update (kappa = math.inf), then
    records the dual objective and reads a decision.  With stop_on_codeword,
    an erasure-free decision with zero syndrome returns CODEWORD_FOUND
    immediately.  Iterations whose decision is malformed are counted and
    skipped; a malformed final decision propagates MalformedDecision.
    """
    state = init_state(code, llr, config)
    schedule = state.cache.schedules[config.edge_order]
    update = update_edge_hard if math.isinf(config.kappa) else update_edge_soft
    trace = [dual_objective(state)]
    malformed = 0
    symbols = None
    for iteration in range(1, config.max_iterations + 1):
        _refresh_caches(state)
        for _, i, j in schedule:
            update(state, i, j)
        trace.append(dual_objective(state))
        try:
            symbols = _decide_symbols(state)
        except MalformedDecision:
            malformed += 1
            symbols = None
            continue
        if (
            config.stop_on_codeword
            and not np.any(symbols == ERASED)
            and code.is_codeword(symbols)
        ):
            return DecodeOutcome(
                symbols=symbols,
                status=Status.CODEWORD_FOUND,
                iterations_used=iteration,
                dual_objective_trace=tuple(trace),
                malformed_decisions=malformed,
            )
    if symbols is None:
        # the final sweep's decision was malformed: surface it
        _decide_symbols(state)
    return DecodeOutcome(
        symbols=symbols,
        status=Status.MAX_ITERATIONS,
        iterations_used=config.max_iterations,
        dual_objective_trace=tuple(trace),
        malformed_decisions=malformed,
    )
