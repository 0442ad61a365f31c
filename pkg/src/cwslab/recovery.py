"""Error recovery for CWS codes by +-1 measurements on the state vector.

Two algorithms are provided. ``generic_recover`` tests one degeneracy class
at a time by measuring the code projector conjugated by a class
representative. The structured algorithm groups errors by index set: all
errors supported on a set ``A`` of ``t`` qubits form a group, their graph
images span a group ``D_A``, and a single measurement of the auxiliary USt
code ``D_A(Q)`` tells whether the error lies on ``A``. Inside the located
group, dropping one generator at a time and measuring the smaller auxiliary
codes reads out the image bit by bit.

Correction applies the inverse of a Pauli error from the identified class.
Errors sharing an image act identically on the code up to a global phase, so
the original state is restored exactly; the bare ``Z^b`` operator would leave
a codeword-dependent sign behind.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from ._config import AMP_TOL
from .exceptions import InvalidCodeError, LengthMismatchError, UncorrectableError
from .graphs import (
    CwsCode,
    canonical_key,
    cl_images,
    cl_map,
    corrects,
    degeneracy_classes,
    distance,
    errors_of_weight,
    errors_on,
    errors_up_to,
    image_key,
    is_additive,
    linear_basis,
)
from .measurement import (
    CostEntry,
    Leaf,
    MeasurementExpr,
    conjugate_expr,
    cost,
    detection_expr,
    expression_cost,
)
from .pauli import PauliOperator, bits_from_mask
from .stabilizer import (
    ErrorGroup,
    StabilizerGroup,
    build_aux_ust,
    cws_as_ust,
    subgroup_without,
    syndrome,
    translation_commutant,
)
from .statevec import StateVector, Subspace, apply_pauli, code_subspace, measure

LOCATE = "locate_index_set"
IN_GROUP = "locate_in_group"
CLASS_TEST = "generic_class_test"


# ---------------------------------------------------------------------------
# counting


def count_B(n: int, t: int) -> int:
    """Number of Pauli errors of weight at most ``t`` on ``n`` qubits, identity included."""
    if not 0 <= t <= n:
        raise ValueError(f"need 0 <= t <= n, got t={t}, n={n}")
    return sum(comb(n, i) * 3**i for i in range(t + 1))


def count_N(n: int, t: int) -> int:
    """Worst-case measurement count of structured recovery."""
    if not 0 <= t <= n:
        raise ValueError(f"need 0 <= t <= n, got t={t}, n={n}")
    return comb(n, t) + 2 * t - 1


def reduction_factor(n: int, t: int) -> Fraction:
    return Fraction(count_B(n, t), count_N(n, t))


def claimed_reduction_bound(n: int, t: int) -> Fraction | None:
    """Lower bound on ``B/N`` quoted for structured recovery; ``None`` for t = 0."""
    if t == 0:
        return None
    if t == 1:
        return Fraction(3 * n + 1, n + 1)
    return Fraction(3**t)


# ---------------------------------------------------------------------------
# schedules


@dataclass(frozen=True)
class Phase:
    label: str
    expr: MeasurementExpr
    purpose: str
    cost: CostEntry
    index_set: tuple[int, ...] | None = None
    class_image: int | None = None
    representative: PauliOperator | None = None

    def as_dict(self, n: int) -> dict:
        d = {
            "label": self.label,
            "purpose": self.purpose,
            "expression": self.expr.label(),
            "cost": self.cost.as_dict(),
        }
        if self.index_set is not None:
            d["index_set"] = list(self.index_set)
        if self.class_image is not None:
            d["class"] = bits_from_mask(self.class_image, n)
        return d


@dataclass(frozen=True)
class IndexBlock:
    """Everything needed to test and decode one index set."""

    index_set: tuple[int, ...] | None
    generators: tuple[int, ...]  # images g_1..g_m of the located group
    locate: Phase | None
    group_phases: tuple[Phase, ...]
    representatives: dict  # image -> Pauli error of that class


@dataclass(frozen=True)
class RecoverySchedule:
    mode: str
    n: int
    t: int
    blocks: tuple[IndexBlock, ...]
    elide_last: bool
    extra_phases: tuple[Phase, ...] = ()
    hazard: bool = False
    hazard_note: str = ""
    invariant_shifts: frozenset = frozenset({0})
    bound_costs: tuple[CostEntry, ...] = ()

    @property
    def locate_phases(self) -> list[Phase]:
        blocks = self.blocks[:-1] if self.elide_last else self.blocks
        return [b.locate for b in blocks if b.locate is not None]

    @property
    def phases(self) -> list[Phase]:
        out = list(self.locate_phases)
        for b in self.blocks:
            out.extend(b.group_phases)
        return out + list(self.extra_phases)

    @property
    def worst_case(self) -> int:
        """Measurements on the longest path through the schedule."""
        locate = len(self.locate_phases)
        group = max((len(b.group_phases) for b in self.blocks), default=0)
        return locate + group + len(self.extra_phases)

    @property
    def bound(self) -> int:
        return count_N(self.n, self.t)

    def error_set(self) -> list[PauliOperator]:
        """Errors this schedule is built to correct, one per (block, class) without repeats."""
        if self.blocks and self.blocks[0].index_set is None:
            return errors_up_to(self.n, self.t)
        seen: dict[tuple, PauliOperator] = {}
        for b in self.blocks:
            for e in errors_on(self.n, b.index_set):
                seen.setdefault((e.z, e.x), e)
        return sorted(seen.values(), key=canonical_key)

    def as_dict(self) -> dict:
        B, N = count_B(self.n, self.t), count_N(self.n, self.t)
        return {
            "mode": self.mode,
            "t": self.t,
            "index_sets": [list(b.index_set) if b.index_set is not None else None for b in self.blocks],
            "last_index_set_inferred": self.elide_last,
            "phases": [p.as_dict(self.n) for p in self.phases],
            "locate_phase_count": len(self.locate_phases),
            "group_phase_counts": [len(b.group_phases) for b in self.blocks],
            "extra_phase_count": len(self.extra_phases),
            "worst_case": self.worst_case,
            "counts": {"B": B, "N": N, "reduction": [B, N]},
            "bound_costs": [c.as_dict() for c in self.bound_costs],
            "hazard": self.hazard,
            "hazard_note": self.hazard_note,
        }


def _translation_invariance(code: CwsCode) -> frozenset:
    """Shifts ``v`` with ``C + v = C``; they leave the code space invariant."""
    cw = set(code.codewords)
    c0 = code.codewords[0]
    return frozenset(v for v in (c0 ^ c for c in cw) if all(c ^ v in cw for c in cw))


def _group_phases(code: CwsCode, group: ErrorGroup, tag: str) -> tuple[Phase, ...]:
    phases = []
    for l in range(1, group.m + 1):
        expr = detection_expr(build_aux_ust(code, subgroup_without(group, l)))
        phases.append(Phase(f"{tag}/D^({l})", expr, IN_GROUP, expression_cost(expr)))
    return tuple(phases)


def _bound_costs(code: CwsCode) -> tuple[CostEntry, ...]:
    return (
        cost("ust_detection", K=code.K, n=code.n, k=0),
        cost("ust_recovery_measurement", K=code.K, n=code.n, k=0),
        cost("generic_cws", n=code.n, K=code.K),
    )


def index_block(code: CwsCode, index_set: Sequence[int]) -> IndexBlock:
    n = code.n
    A = tuple(sorted(index_set))
    errs = errors_on(n, A)
    # generator order per qubit: image of Z_q, then image of X_q
    seeds = []
    for q in A:
        seeds.append(cl_map(code.graph, PauliOperator.single(n, q, "Z")))
        seeds.append(cl_map(code.graph, PauliOperator.single(n, q, "X")))
    gens = linear_basis(seeds)
    group = ErrorGroup.from_images(n, gens)
    tag = "A=" + ",".join(str(q) for q in A) if A else "A={}"
    locate_expr = detection_expr(build_aux_ust(code, group))
    locate = Phase(f"{tag}/locate", locate_expr, LOCATE, expression_cost(locate_expr), A)
    part = degeneracy_classes(code, errs)
    reps = {b: part.representative(b) for b in part.classes}
    return IndexBlock(A, tuple(gens), locate, _group_phases(code, group, tag), reps)


def structured_schedule(
    code: CwsCode,
    t: int,
    index_sets: Sequence[Sequence[int]] | None = None,
    validate: bool = True,
) -> RecoverySchedule:
    """Locate phases over index sets of size ``t`` followed by in-group phases.

    ``index_sets`` restricts recovery to declared qubit sets (each of size at
    most ``t``); by default every size-``t`` set is used in lexicographic
    order. The last set is inferred by elimination.
    """
    n = code.n
    if not 0 <= t <= n:
        raise ValueError(f"need 0 <= t <= n, got t={t}")
    if index_sets is None:
        sets = [tuple(c) for c in combinations(range(1, n + 1), t)]
    else:
        sets = [tuple(sorted(int(q) for q in s)) for s in index_sets]
        for s in sets:
            if len(s) > t or len(set(s)) != len(s) or any(not 1 <= q <= n for q in s):
                raise ValueError(f"index set {list(s)} must hold at most t={t} distinct qubits in 1..{n}")
        if not sets:
            raise ValueError("no index sets given")
    if validate:
        errs = errors_up_to(n, t) if index_sets is None else _union_errors(n, sets)
        rep = corrects(code, errs)
        if not rep:
            e1, e2 = rep.witness
            raise InvalidCodeError(
                f"code does not correct all errors of weight <= {t} on the index sets "
                f"(pair {e1}, {e2} fails the {rep.reason} condition)"
            )
    blocks = tuple(index_block(code, s) for s in sets)
    return RecoverySchedule(
        "structured", n, t, blocks, elide_last=True,
        invariant_shifts=_translation_invariance(code), bound_costs=_bound_costs(code),
    )


def _union_errors(n: int, sets) -> list[PauliOperator]:
    seen: dict[tuple, PauliOperator] = {}
    for s in sets:
        for e in errors_on(n, s):
            seen.setdefault((e.z, e.x), e)
    return sorted(seen.values(), key=canonical_key)


def default_translation_images(code: CwsCode, t: int | None = None) -> list[int]:
    """``n - k`` images completing the codeword span, chosen from correctable classes first."""
    n = code.n
    k = code.K.bit_length() - 1
    if t is None:
        t = max(0, (distance(code) - 1) // 2)
    cw_span = linear_basis(code.codewords)
    candidates = [int(b) for b in sorted({int(b) for b in cl_images(code.graph, errors_up_to(n, t))}, key=image_key)]
    candidates += [1 << q for q in range(n)]
    chosen: list[int] = []
    for b in candidates:
        if len(chosen) == n - k:
            break
        if len(linear_basis(cw_span + chosen + [b])) == len(cw_span) + len(chosen) + 1:
            chosen.append(b)
    return chosen


def additive_schedule(
    code: CwsCode, group: ErrorGroup | None = None, t: int | None = None
) -> RecoverySchedule:
    """Single-Pauli schedule for an additive code: one generator per subgroup code."""
    if not is_additive(code):
        raise InvalidCodeError("additive schedule needs a code whose codewords form a group containing 0")
    n = code.n
    if t is None:
        t = max(0, (distance(code) - 1) // 2)
    if group is None:
        group = ErrorGroup.from_images(n, default_translation_images(code, t))
    images = []
    for g in group.generators:
        if g.x:
            raise InvalidCodeError(f"translation generator {g} is not Z-type")
        images.append(g.z)
    words = code.word_operators()
    phases = []
    for l in range(1, group.m + 1):
        base = build_aux_ust(code, subgroup_without(group, l)).base_stabilizer.generators
        comm = translation_commutant(base, words, n)
        if len(comm) != 1:
            raise InvalidCodeError(
                f"subgroup code {l} is not a single-generator stabilizer code ({len(comm)} generators)"
            )
        op = comm[0]
        phases.append(Phase(f"T/G~{l}", Leaf(op), IN_GROUP, cost("and_chain", ell=1, n=n)))
    reps = _class_reps(code, errors_up_to(n, t))
    block = IndexBlock(None, tuple(images), None, tuple(phases), reps)
    return RecoverySchedule(
        "additive", n, t, (block,), elide_last=True,
        invariant_shifts=_translation_invariance(code), bound_costs=_bound_costs(code),
    )


def _class_reps(code: CwsCode, errs: Sequence[PauliOperator]) -> dict:
    part = degeneracy_classes(code, errs)
    return {b: part.representative(b) for b in part.classes}


def additive_operators(schedule: RecoverySchedule) -> list[PauliOperator]:
    return [p.expr.op for p in schedule.blocks[0].group_phases]


def beyond_t_schedule(
    code: CwsCode,
    t: int,
    s_max: int,
    extra_classes: Sequence[PauliOperator] | None = None,
    index_sets: Sequence[Sequence[int]] | None = None,
) -> RecoverySchedule:
    """Structured schedule that measures every size-``t`` set, then tests extra classes.

    Extra classes are given as representative errors of weight in ``t+1..s_max``
    and are tested in weight order. By default they are found greedily: each
    new image whose representative stays jointly correctable with everything
    already covered is added.
    """
    if s_max <= t:
        raise ValueError(f"s_max={s_max} must exceed t={t}")
    base = structured_schedule(code, t, index_sets)
    n = code.n
    covered = base.error_set()
    if extra_classes is None:
        seen = {int(b) for b in cl_images(code.graph, covered)}
        chosen: list[PauliOperator] = []
        for w in range(t + 1, s_max + 1):
            for e in errors_of_weight(n, w):
                b = cl_map(code.graph, e)
                if b in seen:
                    continue
                if corrects(code, covered + chosen + [e]):
                    chosen.append(e)
                    seen.add(b)
        extra_classes = chosen
    extras = sorted(extra_classes, key=canonical_key)
    mq = detection_expr(cws_as_ust(code))
    phases = []
    for e in extras:
        if not t < e.weight <= s_max:
            raise ValueError(f"extra class representative {e} has weight outside {t + 1}..{s_max}")
        b = cl_map(code.graph, e)
        expr = conjugate_expr(mq, e)
        phases.append(Phase(f"beyond/{bits_from_mask(b, n)}", expr, CLASS_TEST, expression_cost(expr),
                            class_image=b, representative=e))
    additive = is_additive(code)
    note = (
        "additive code: corrupted spaces of distinct syndromes are orthogonal"
        if additive
        else "non-additive code: corrupted spaces can partially overlap when an error is not "
        "correctable, so a measurement may destroy the encoded superposition"
    )
    return RecoverySchedule(
        "beyond-t", n, t, base.blocks, elide_last=False, extra_phases=tuple(phases),
        hazard=not additive, hazard_note=note,
        invariant_shifts=base.invariant_shifts, bound_costs=base.bound_costs,
    )


# ---------------------------------------------------------------------------
# execution


@dataclass(frozen=True)
class TranscriptLine:
    phase: str
    expression: str
    outcome: int
    count: int

    def as_dict(self) -> dict:
        return {"phase": self.phase, "expression": self.expression, "outcome": self.outcome, "count": self.count}


@dataclass
class RecoveryOutcome:
    identified_class: int
    measurements_used: int
    corrected_state: StateVector
    success: bool
    transcript: list[TranscriptLine] = field(default_factory=list)
    correction: PauliOperator | None = None
    index_set: tuple[int, ...] | None = None
    outcome_bits: tuple[int, ...] = ()
    paranoid_extra: int = 0
    residual: float = 0.0

    def label(self, n: int) -> str:
        return bits_from_mask(self.identified_class, n)


class _Runner:
    def __init__(self, state: StateVector, rng: np.random.Generator):
        self.state = state
        self.rng = rng
        self.transcript: list[TranscriptLine] = []

    def measure(self, phase: Phase) -> int:
        res = measure(phase.expr, self.state, self.rng)
        self.state = res.state
        self.transcript.append(TranscriptLine(phase.label, phase.expr.label(), res.outcome, len(self.transcript) + 1))
        return res.outcome


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _finish(
    run: _Runner, image: int, rep: PauliOperator, space: Subspace, original: StateVector | None,
    **extra,
) -> RecoveryOutcome:
    corrected = apply_pauli(rep.dagger(), run.state)
    resid = space.residual(corrected)
    if resid > AMP_TOL:
        raise UncorrectableError(
            f"corrected state is outside the code space (residual {resid:.3g}); "
            "the injected error is not correctable by this schedule"
        )
    ok = True if original is None else corrected.equal_up_to_phase(original)
    measured = len(run.transcript) - extra.get("paranoid_extra", 0)
    return RecoveryOutcome(image, measured, corrected, ok, run.transcript, rep, residual=resid, **extra)


def _resolve(block: IndexBlock, shift: int, invariant: frozenset) -> int:
    if shift in block.representatives:
        return shift
    for b in block.representatives:
        if b ^ shift in invariant:
            return b
    raise UncorrectableError(f"located image {shift:b} matches no correctable class of the block")


def structured_recover(
    code: CwsCode,
    state: StateVector,
    t: int | None = None,
    seed=None,
    schedule: RecoverySchedule | None = None,
    paranoid: bool = False,
    original: StateVector | None = None,
    code_space: Subspace | None = None,
) -> RecoveryOutcome:
    """Run a structured, additive or beyond-t schedule on ``state``.

    ``original`` (the uncorrupted state) is only used to report success;
    the algorithm itself never looks at it.
    """
    if state.n != code.n:
        raise LengthMismatchError(f"{state.n}-qubit state for {code.n}-qubit code")
    if schedule is None:
        if t is None:
            raise ValueError("need t or a schedule")
        schedule = structured_schedule(code, t)
    space = code_space if code_space is not None else code_subspace(code)
    run = _Runner(state, _rng(seed))

    located: IndexBlock | None = None
    last = len(schedule.blocks) - 1
    paranoid_extra = 0
    for i, block in enumerate(schedule.blocks):
        if block.locate is None:
            located = block
            break
        if i == last and schedule.elide_last:
            if not paranoid:
                located = block
                break
            paranoid_extra = 1
        if run.measure(block.locate) == 1:
            located = block
            break
    if located is None and not schedule.extra_phases:
        raise UncorrectableError("no index set contains the error")

    if located is not None:
        bits = []
        shift = 0
        for g, phase in zip(located.generators, located.group_phases):
            flagged = run.measure(phase) == -1
            bits.append(int(flagged))
            if flagged:
                shift ^= g
        image = _resolve(located, shift, schedule.invariant_shifts)
        return _finish(
            run, image, located.representatives[image], space, original,
            index_set=located.index_set, outcome_bits=tuple(bits), paranoid_extra=paranoid_extra,
        )

    for phase in schedule.extra_phases:
        if run.measure(phase) == 1:
            return _finish(run, phase.class_image, phase.representative, space, original)
    raise UncorrectableError("no index set or extra class contains the error")


def generic_classes(code: CwsCode, t: int) -> list[tuple[int, PauliOperator]]:
    part = degeneracy_classes(code, errors_up_to(code.n, t))
    return [(b, part.representative(b)) for b in part.classes]


def generic_recover(
    code: CwsCode,
    state: StateVector,
    t: int,
    seed=None,
    original: StateVector | None = None,
    code_space: Subspace | None = None,
) -> RecoveryOutcome:
    """Test degeneracy classes one by one with ``E M_Q E^dagger``; stop at the first +1."""
    if state.n != code.n:
        raise LengthMismatchError(f"{state.n}-qubit state for {code.n}-qubit code")
    space = code_space if code_space is not None else code_subspace(code)
    mq = detection_expr(cws_as_ust(code))
    run = _Runner(state, _rng(seed))
    n = code.n
    for b, rep in generic_classes(code, t):
        phase = Phase(f"class/{bits_from_mask(b, n)}", conjugate_expr(mq, rep), CLASS_TEST,
                      CostEntry("generic_cws", {}, None))
        if run.measure(phase) == 1:
            return _finish(run, b, rep, space, original)
    raise UncorrectableError("no degeneracy class of weight <= t contains the state")


# ---------------------------------------------------------------------------
# syndrome decoding for additive codes


def syndrome_table(stab: StabilizerGroup, errors: Sequence[PauliOperator]) -> dict[tuple, PauliOperator]:
    """Syndrome -> lowest-weight error (canonical order breaks ties)."""
    table: dict[tuple, PauliOperator] = {}
    for e in sorted(errors, key=canonical_key):
        table.setdefault(syndrome(stab, e), e)
    return table


def syndrome_decode(code: CwsCode, stab: StabilizerGroup, e: PauliOperator, t: int) -> int:
    """Graph image of the coset leader picked by syndrome decoding."""
    table = syndrome_table(stab, errors_up_to(code.n, t))
    return cl_map(code.graph, table[syndrome(stab, e)])


# ---------------------------------------------------------------------------
# Monte-Carlo trials


@dataclass
class TrialResult:
    injected: PauliOperator
    expected_class: int
    outcome: RecoveryOutcome | None
    error: str | None = None

    @property
    def success(self) -> bool:
        return self.outcome is not None and self.outcome.success and self.outcome.identified_class == self.expected_class


def trial_seeds(seed: int | None, trials: int) -> list[np.random.SeedSequence]:
    """Per-trial seeds: ``SeedSequence(seed).spawn(trials)``, in trial order."""
    return np.random.SeedSequence(seed).spawn(trials)


def run_trials(
    code: CwsCode,
    schedule: RecoverySchedule | None,
    injections: Sequence[PauliOperator | None],
    seed: int | None = 0,
    jobs: int = 1,
    generic_t: int | None = None,
) -> list[TrialResult]:
    """One trial per injection; ``None`` draws an error uniformly from the schedule's set.

    Each trial draws a random code state and runs either the schedule or,
    when ``generic_t`` is given, the class-by-class algorithm.
    """
    space = code_subspace(code)
    pool = schedule.error_set() if schedule is not None else errors_up_to(code.n, generic_t or 0)
    seeds = trial_seeds(seed, len(injections))

    def one(k: int) -> TrialResult:
        rng = np.random.default_rng(seeds[k])
        e = injections[k]
        if e is None:
            e = pool[int(rng.integers(len(pool)))]
        psi = space.random_state(rng)
        corrupted = apply_pauli(e, psi)
        expected = cl_map(code.graph, e)
        try:
            if generic_t is not None:
                out = generic_recover(code, corrupted, generic_t, rng, psi, space)
            else:
                out = structured_recover(code, corrupted, schedule=schedule, seed=rng, original=psi, code_space=space)
        except UncorrectableError as exc:
            return TrialResult(e, expected, None, str(exc))
        return TrialResult(e, expected, out)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(one, range(len(injections))))
    return [one(k) for k in range(len(injections))]


def histogram(results: Sequence[TrialResult]) -> dict[int, int]:
    c = Counter(r.outcome.measurements_used for r in results if r.outcome is not None)
    return dict(sorted(c.items()))
