"""Constructors for the causal algorithms, block decomposition, and the verifier.

Families
--------
* ``reference``      the n-switch itself: one call per gate, query count n.
* ``sim-switch``     O(n^2) switch simulation by controlled swaps.
* ``superperm``      switch simulation over the length n^2-2n+4 gate rail
                     that contains every permutation as a subsequence
                     (n in {3, 4}).
* ``six-query``      the n=3 algorithm that drops below the rail bound by
                     paying one permutation as a commutation phase on a
                     second target.
* ``nlogn``          the factoradic-labeling algorithm with bit-register
                     control, O(n log n) queries; ``nlogn-reduced`` drops the
                     redundant wires/bits known for n in {4, 8}.
* ``sqrt``           the labeling-agnostic O(n sqrt n) algorithm built on the
                     block decomposition.

The verifier executes a circuit for every control basis state, checks that
the word on each wire is x-independent up to commutation (same multiset, and
tokens returned home), accumulates the phase exponent of the rewrite onto
the x=0 reference, and recovers y from the linear phase profile.  Exponents
are exact integers mod n!, with y symbolic until solve time.
"""

from __future__ import annotations

import json
import multiprocessing
from dataclasses import dataclass, field
from math import isqrt, log2
from typing import Iterable, Mapping, Sequence

from .circuit import (
    AUXILIARY,
    CONTROL_BIT,
    CONTROL_QUDIT,
    TARGET,
    Apply,
    BitControl,
    Circuit,
    ControlledApply,
    PosCondSwap,
    QuditControl,
    Rewire,
    SwitchSwap,
    Wire,
    aux_wire,
    execute,
    query_count,
)
from .commutation import CommutationTable, _phase_desc_int
from .errors import DomainError, StructuralError, UnsupportedError
from .numsys import ceil_log2
from .perms import FactoradicLabeling, Labeling, PermWord

__all__ = [
    "ReferenceSwitch",
    "reference_switch",
    "sim_switch_circuit",
    "superperm_sim_switch",
    "six_query_n3",
    "nlogn_circuit",
    "BlockDecomposition",
    "decompose_blocks",
    "block_phase_sum",
    "sqrt_circuit",
    "ceil_sqrt",
    "nlogn_query_count",
    "nlogn_query_bound",
    "sqrt_query_count",
    "sqrt_bound_holds",
    "expected_queries",
    "PhaseProfile",
    "phase_profile",
    "VerificationReport",
    "solve_profile",
    "verify_and_solve",
]


# ---------------------------------------------------------------------------
# reference switch


@dataclass(frozen=True)
class ReferenceSwitch:
    """The n-switch as a pure map x -> permutation word; one call per gate."""

    labeling: Labeling

    @property
    def n(self) -> int:
        return self.labeling.n

    @property
    def family(self) -> str:
        return "reference"

    @property
    def query_count(self) -> int:
        return self.n

    def word(self, x: int) -> PermWord:
        return self.labeling.word(x)


def reference_switch(n: int, labeling: Labeling | None = None) -> ReferenceSwitch:
    labeling = labeling if labeling is not None else FactoradicLabeling(n)
    if labeling.n != n:
        raise DomainError(f"labeling has n={labeling.n}, expected {n}")
    return ReferenceSwitch(labeling)


# ---------------------------------------------------------------------------
# O(n^2) switch simulation


def sim_switch_circuit(n: int, labeling: Labeling | None = None) -> Circuit:
    """Switch simulation: in step p, swap the target with a_{sigma_x(p)},
    apply every U_i on its auxiliary wire, swap back.  n^2 queries; each
    auxiliary ends with (U_i)^(n-1)."""
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    labeling = labeling if labeling is not None else FactoradicLabeling(n)
    wires = [Wire("x", CONTROL_QUDIT), Wire("psi_t", TARGET, "Psi_t")]
    wires += [Wire(aux_wire(i), AUXILIARY) for i in range(n)]
    gates: list = []
    for step in range(n):
        swap = SwitchSwap((("psi_t", step),))
        gates.append(swap)
        gates.extend(Apply(i, aux_wire(i)) for i in range(n))
        gates.append(swap)
    return Circuit(n, "sim-switch", tuple(wires), tuple(gates), QuditControl(labeling))


# ---------------------------------------------------------------------------
# rail circuits (superpermutation simulation and the six-query algorithm)

# Gate rail of the seven-query n=3 simulation, in application order, and the
# published routing: which rail steps act on the target for each word.
_RAIL3 = (1, 0, 1, 2, 1, 0, 1)
_ROUTES3 = {
    (2, 1, 0): (1, 2, 3),
    (2, 0, 1): (0, 1, 3),
    (1, 2, 0): (1, 3, 4),
    (0, 2, 1): (2, 3, 5),
    (1, 0, 2): (3, 5, 6),
    (0, 1, 2): (3, 4, 5),
}

# Twelve-element rail containing every permutation of four gates as a
# subsequence (0-based indices).
_RAIL4 = (0, 1, 2, 3, 0, 1, 2, 0, 3, 1, 0, 2)

# Gate rail of the six-query n=3 algorithm and the routing of every rail
# step to its destination system, per word.
_RAIL6Q = (0, 1, 2, 1, 0, 1)
_ROUTES6Q = {
    (2, 1, 0): ("psi_1", "psi_1", "psi_1", "a_1", "psi_2", "psi_2"),
    (2, 0, 1): ("psi_1", "psi_1", "psi_1", "psi_2", "psi_2", "a_1"),
    (1, 2, 0): ("psi_1", "a_1", "psi_1", "psi_1", "psi_2", "psi_2"),
    (0, 2, 1): ("psi_2", "psi_1", "psi_1", "a_1", "psi_1", "psi_2"),
    (1, 0, 2): ("psi_2", "psi_2", "psi_1", "a_1", "psi_1", "psi_1"),
    (0, 1, 2): ("psi_2", "psi_2", "psi_1", "psi_1", "psi_1", "a_1"),
}


def _greedy_subsequence(rail: Sequence[int], acting: Sequence[int]) -> tuple[int, ...]:
    """Leftmost positions embedding ``acting`` as a subsequence of ``rail``."""
    positions = []
    start = 0
    for g in acting:
        while start < len(rail) and rail[start] != g:
            start += 1
        if start == len(rail):
            raise StructuralError(
                f"sequence {tuple(acting)} is not a subsequence of rail {tuple(rail)}"
            )
        positions.append(start)
        start += 1
    return tuple(positions)


def _rail_rewires(
    rail: Sequence[int],
    dests: Mapping[tuple[int, ...], Sequence[str]],
    gate_rail: str,
    wire_ids: Sequence[str],
) -> list[Rewire]:
    """Rewire tables that bring, per word, the destination token onto the
    gate rail before each step and restore all tokens home at the end."""
    steps = len(rail)
    tables: list[dict[tuple[int, ...], tuple[tuple[str, str], ...]]] = [
        {} for _ in range(steps + 1)
    ]

    for word in sorted(dests):
        dest_seq = dests[word]
        token_at = {w: w for w in wire_ids}
        wire_of = {w: w for w in wire_ids}

        def _swap(a: str, b: str) -> None:
            ta, tb = token_at[a], token_at[b]
            token_at[a], token_at[b] = tb, ta
            wire_of[ta], wire_of[tb] = b, a

        for t in range(steps):
            cur = wire_of[dest_seq[t]]
            swaps: list[tuple[str, str]] = []
            if cur != gate_rail:
                swaps.append((gate_rail, cur))
                _swap(gate_rail, cur)
            tables[t][word] = tuple(swaps)
        restore: list[tuple[str, str]] = []
        for w in wire_ids:
            while token_at[w] != w:
                home = token_at[w]
                restore.append((w, home))
                _swap(w, home)
        tables[steps][word] = tuple(restore)

    return [Rewire(t, tables[t]) for t in range(steps + 1)]


def _rail_circuit(
    family: str,
    n: int,
    labeling: Labeling,
    rail: Sequence[int],
    dests: Mapping[tuple[int, ...], Sequence[str]],
    gate_rail: str,
    targets: Sequence[str],
    aux_gates: Iterable[int],
) -> Circuit:
    wires = [Wire("x", CONTROL_QUDIT)]
    wires += [Wire(t, TARGET) for t in targets]
    wires += [Wire(aux_wire(i), AUXILIARY) for i in sorted(aux_gates)]
    wire_ids = [w.id for w in wires[1:]]
    rewires = _rail_rewires(rail, dests, gate_rail, wire_ids)
    gates: list = []
    for t, g in enumerate(rail):
        gates.append(rewires[t])
        gates.append(Apply(g, gate_rail))
    gates.append(rewires[len(rail)])
    return Circuit(n, family, tuple(wires), tuple(gates), QuditControl(labeling))


def superperm_sim_switch(n: int, labeling: Labeling | None = None) -> Circuit:
    """Switch simulation over the shortest known gate rail (n in {3, 4}).

    Rail steps routed to the target spell the permutation; every leftover
    U_i lands on a_i, so the auxiliaries end in x-independent powers.
    """
    if n not in (3, 4):
        raise UnsupportedError(f"superpermutation rails are built in for n in {{3, 4}}, got {n}")
    labeling = labeling if labeling is not None else FactoradicLabeling(n)
    if labeling.n != n:
        raise DomainError(f"labeling has n={labeling.n}, expected {n}")
    rail = _RAIL3 if n == 3 else _RAIL4
    if n == 3:
        target_positions = dict(_ROUTES3)
    else:
        target_positions = {
            word: _greedy_subsequence(rail, tuple(reversed(word)))
            for word in (labeling.word(x).order for x in range(labeling.size))
        }
    dests: dict[tuple[int, ...], tuple[str, ...]] = {}
    for word, positions in target_positions.items():
        chosen = set(positions)
        dests[word] = tuple(
            "psi_t" if t in chosen else aux_wire(g) for t, g in enumerate(rail)
        )
    counts = {g: rail.count(g) for g in set(rail)}
    aux_gates = [g for g, c in counts.items() if c > 1]
    return _rail_circuit(
        "superperm", n, labeling, rail, dests, "psi_t", ("psi_t",), aux_gates
    )


def six_query_n3(labeling: Labeling | None = None) -> Circuit:
    """The six-query n=3 algorithm: two target systems and one auxiliary.

    One permutation cannot be spelled on the first target with only six rail
    steps; for that word the second target receives its two gates in swapped
    order, and the missing phase is exactly the pairwise exponent the
    verifier picks up when rewriting.
    """
    labeling = labeling if labeling is not None else FactoradicLabeling(3)
    if labeling.n != 3:
        raise DomainError(f"six-query circuit requires n=3, got n={labeling.n}")
    return _rail_circuit(
        "six-query", 3, labeling, _RAIL6Q, _ROUTES6Q, "psi_1", ("psi_1", "psi_2"), [1]
    )


# ---------------------------------------------------------------------------
# O(n log n) circuit for the factoradic labeling

_NLOGN_REDUCTIONS = {
    4: {"slots": {(1, 2)}, "targets": {"psi_4_4", "psi_4_1"}},
    8: {
        "slots": {(1, 3), (2, 3), (3, 3)},
        "targets": {"psi_8_1", "psi_8_2", "psi_8_3", "psi_8_8"},
    },
}


def _nlogn_target(k: int, i: int) -> str:
    width = 1 << i
    j = k % width or width
    return f"psi_{width}_{j}"


def nlogn_circuit(n: int, reduced: bool = False) -> Circuit:
    """Bit-register circuit for the factoradic labeling.

    Each U_k (k >= 1) appears once per bit level, controlled on 1 on the way
    in (descending k) and on 0 on the way out (ascending k), always on the
    target wire psi_{2^i, k mod 2^i}; U_0 acts once on every target.  Bit
    (k, i) set contributes exponent ceil(k/2^i) * k!.
    """
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    ihat = ceil_log2(n)
    slots = {(k, i) for k in range(1, n) for i in range(1, ihat + 1)}
    dropped_targets: set[str] = set()
    if reduced:
        if n not in _NLOGN_REDUCTIONS:
            raise UnsupportedError(
                f"reduced circuits are specified only for n in {{4, 8}}, got {n}"
            )
        reduction = _NLOGN_REDUCTIONS[n]
        slots -= reduction["slots"]
        dropped_targets = set(reduction["targets"])

    target_ids = [
        f"psi_{1 << i}_{j}"
        for i in range(1, ihat + 1)
        for j in range(1, (1 << i) + 1)
        if f"psi_{1 << i}_{j}" not in dropped_targets
    ]
    wires = [
        Wire(f"c_{k}_{i}", CONTROL_BIT)
        for k in range(n - 1, 0, -1)
        for i in range(1, ihat + 1)
        if (k, i) in slots
    ]
    wires += [Wire(t, TARGET) for t in target_ids]

    gates: list = []
    for k in range(n - 1, 0, -1):
        for i in range(1, ihat + 1):
            if (k, i) in slots:
                gates.append(ControlledApply(k, _nlogn_target(k, i), (k, i), 1))
    gates.extend(Apply(0, t) for t in target_ids)
    for k in range(1, n):
        for i in range(ihat, 0, -1):
            if (k, i) in slots:
                gates.append(ControlledApply(k, _nlogn_target(k, i), (k, i), 0))

    family = "nlogn-reduced" if reduced else "nlogn"
    control = BitControl(n, tuple(sorted(slots)))
    return Circuit(n, family, tuple(wires), tuple(gates), control)


# ---------------------------------------------------------------------------
# block decomposition and the O(n sqrt n) circuit


def ceil_sqrt(n: int) -> int:
    s = isqrt(n)
    return s if s * s == n else s + 1


@dataclass(frozen=True)
class BlockDecomposition:
    """Per-block companion permutations whose phases sum to the original's.

    ``pi[k]`` keeps the k-th length-nhat block in place with everything
    before sorted descending behind it and everything after sorted
    descending in front; ``pi_r[k]`` (k >= 1) is the compensating ascending
    word whose phase relative to the ascending order cancels the spurious
    sorted-block phases.
    """

    n: int
    nhat: int
    khat: int
    pi: tuple[PermWord, ...]
    pi_r: tuple[PermWord, ...]


def decompose_blocks(w: PermWord) -> BlockDecomposition:
    n = w.n
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    nhat = ceil_sqrt(n)
    khat = -(-n // nhat)
    acting = w.acting_sequence()

    def block(k: int) -> tuple[int, ...]:
        return acting[k * nhat : min((k + 1) * nhat, n)]

    def written(symbols: Sequence[int]) -> tuple[int, ...]:
        return tuple(reversed(symbols))

    def desc(symbols: Iterable[int]) -> tuple[int, ...]:
        return tuple(sorted(symbols, reverse=True))

    def asc(symbols: Iterable[int]) -> tuple[int, ...]:
        return tuple(sorted(symbols))

    pi: list[PermWord] = []
    for k in range(khat):
        before = acting[: k * nhat]
        after = acting[(k + 1) * nhat :]
        order = desc(after) + written(block(k)) + desc(before)
        pi.append(PermWord(n, order))
    pi_r: list[PermWord] = []
    for k in range(1, khat):
        before = acting[: k * nhat]
        after = acting[k * nhat :]
        pi_r.append(PermWord(n, asc(before) + asc(after)))
    return BlockDecomposition(n, nhat, khat, tuple(pi), tuple(pi_r))


def block_phase_sum(dec: BlockDecomposition, table: CommutationTable) -> int:
    """Sum of the companion words' phases: descending-relative for pi,
    ascending-relative for pi_r.  Equals the phase of the original word for
    any antisymmetric table."""
    from .commutation import normal_order

    m = table.modulus
    total = 0
    for word in dec.pi:
        total += _phase_desc_int(word.order, table)
    for word in dec.pi_r:
        total += int(normal_order(word.order, table, "ascending").phase)
    return total % m


def sqrt_circuit(n: int, labeling: Labeling | None = None) -> Circuit:
    """Labeling-agnostic O(n sqrt n) circuit in three parts.

    Part 1 builds the sorted prefix blocks on the psi targets (ascending
    sweep of conditional swaps) and the sorted suffix blocks on the phi
    targets (descending sweep); Part 2 plays each raw block onto its psi
    target with simultaneous switch swaps; Part 3 mirrors Part 1 to finish
    the companion words.  Every auxiliary ends with (U_i)^(nhat+2*khat-3).
    """
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    labeling = labeling if labeling is not None else FactoradicLabeling(n)
    if labeling.n != n:
        raise DomainError(f"labeling has n={labeling.n}, expected {n}")
    nhat = ceil_sqrt(n)
    khat = -(-n // nhat)

    psis = [f"psi_{k}" for k in range(khat)]
    phis = [f"phi_{k}" for k in range(1, khat)]
    wires = [Wire("x", CONTROL_QUDIT)]
    wires += [Wire(p, TARGET) for p in psis]
    wires += [Wire(p, TARGET) for p in phis]
    wires += [Wire(aux_wire(i), AUXILIARY) for i in range(n)]

    gates: list = []

    def sandwich(wire: str, i: int, lo: int, hi: int) -> None:
        swap = PosCondSwap(wire, aux_wire(i), i, lo, hi)
        gates.append(swap)
        gates.append(Apply(i, aux_wire(i)))
        gates.append(swap)

    # Part 1: descending prefix blocks on psi_k, ascending suffix blocks on phi_k.
    for k in range(1, khat):
        for i in range(n):
            sandwich(f"psi_{k}", i, 0, k * nhat)
    for k in range(1, khat):
        for i in range(n - 1, -1, -1):
            sandwich(f"phi_{k}", i, k * nhat, n)

    # Part 2: play block k onto psi_k, all blocks in parallel.
    for step in range(nhat):
        pairs = tuple(
            (f"psi_{k}", k * nhat + step)
            for k in range(khat)
            if k * nhat + step < n
        )
        swap = SwitchSwap(pairs)
        gates.append(swap)
        gates.extend(Apply(i, aux_wire(i)) for i in range(n))
        gates.append(swap)

    # Part 3: mirror of Part 1 completing the companion words.
    for k in range(khat - 1):
        for i in range(n):
            sandwich(f"psi_{k}", i, (k + 1) * nhat, n)
    for k in range(1, khat):
        for i in range(n - 1, -1, -1):
            sandwich(f"phi_{k}", i, 0, k * nhat)

    return Circuit(n, "sqrt", tuple(wires), tuple(gates), QuditControl(labeling))


# ---------------------------------------------------------------------------
# query-count formulas and bounds


def nlogn_query_count(n: int) -> int:
    ihat = ceil_log2(n)
    return 2 * (n - 1) * ihat + (1 << (ihat + 1)) - 2


def nlogn_query_bound(n: int) -> float:
    return 2 * (n - 1) * (log2(n) + 1) + 4 * n - 2


def sqrt_query_count(n: int) -> int:
    nhat = ceil_sqrt(n)
    khat = -(-n // nhat)
    return (nhat + 4 * khat - 4) * n


def sqrt_bound_holds(n: int) -> bool:
    """Exact integer check of Q < (5*sqrt(n)+1)*n."""
    nhat = ceil_sqrt(n)
    khat = -(-n // nhat)
    lhs = nhat + 4 * khat - 5
    return lhs < 0 or lhs * lhs < 25 * n


def expected_queries(family: str, n: int) -> int | None:
    if family == "reference":
        return n
    if family == "sim-switch":
        return n * n
    if family == "superperm":
        return n * n - 2 * n + 4
    if family == "six-query":
        return 6
    if family == "nlogn":
        return nlogn_query_count(n)
    if family == "nlogn-reduced":
        return {4: 14, 8: 46}.get(n)
    if family == "sqrt":
        return sqrt_query_count(n)
    return None


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class PhaseProfile:
    """x-sweep result: per-x phase exponents (coefficients of y) and the
    x-independence status of the residual words."""

    n: int
    modulus: int
    family: str
    labeling_name: str
    query_count: int
    expected_queries: int | None
    exponents: tuple[int, ...]
    residuals: dict[str, tuple[int, ...]]
    residuals_ok: bool
    failure: str | None
    slope: int | None  # s with exponents[x] == x*s for all x, if linear

    @property
    def counts_match(self) -> bool:
        return self.expected_queries is None or self.query_count == self.expected_queries


@dataclass(frozen=True)
class _WireRef:
    """Reference (x=0) data for one wire, precomputed for the sweep."""

    wire: str
    sorted_word: tuple[int, ...]
    phase: int | None  # None for words that need no phase (homogeneous/empty)


def _wire_phase(applied: tuple[int, ...], table: CommutationTable, wire: str) -> int | None:
    """Descending-order exponent of a wire word, or None if phase-free.

    Words with repeated symbols are phase-free only when homogeneous; mixed
    duplicates never occur for the circuit families in scope.
    """
    if len(set(applied)) <= 1:
        return None
    if len(set(applied)) != len(applied):
        raise StructuralError(
            f"wire {wire!r} carries mixed repeated gates {applied}; "
            "phase rewriting is undefined for such words"
        )
    return _phase_desc_int(tuple(reversed(applied)), table)


def _sweep_range(
    circuit: Circuit,
    table: CommutationTable,
    refs: tuple[_WireRef, ...],
    xs: range,
) -> tuple[list[int], str | None]:
    """Exponent deltas for xs; returns (exponents, first failure or None)."""
    m = table.modulus
    ref_phase_total = sum(r.phase or 0 for r in refs)
    exponents: list[int] = []
    for x in xs:
        out = execute(circuit, x)
        if not out.tokens_home:
            return exponents, f"x={x}: tokens did not return to their home wires"
        total = 0
        for r in refs:
            applied = out.applied[r.wire]
            if tuple(sorted(applied)) != r.sorted_word:
                return exponents, (
                    f"x={x}: wire {r.wire!r} carries {applied}, "
                    f"reference multiset is {r.sorted_word}"
                )
            p = _wire_phase(applied, table, r.wire)
            total += p or 0
        exponents.append((total - ref_phase_total) % m)
    return exponents, None


_POOL_STATE: dict = {}


def _pool_init(circuit: Circuit, table: CommutationTable, refs: tuple) -> None:
    _POOL_STATE["args"] = (circuit, table, refs)


def _pool_chunk(bounds: tuple[int, int]) -> tuple[list[int], str | None]:
    circuit, table, refs = _POOL_STATE["args"]
    return _sweep_range(circuit, table, refs, range(bounds[0], bounds[1]))


def phase_profile(
    target: Circuit | ReferenceSwitch,
    labeling: Labeling,
    processes: int | None = None,
) -> PhaseProfile:
    """Execute for every x and accumulate phase exponents against x=0.

    The sweep is embarrassingly parallel over x; ``processes`` > 1 forks
    worker processes where the platform allows and falls back to the serial
    path otherwise.  Results are deterministic regardless of schedule.
    """
    validation = labeling.validate()
    if not validation.consistent:
        raise DomainError(
            f"labeling {labeling.name!r} is inconsistent: {validation.witness}"
        )
    table = validation.table
    m = labeling.size

    if isinstance(target, ReferenceSwitch):
        if target.n != labeling.n:
            raise DomainError("reference switch and labeling disagree on n")
        p0 = _phase_desc_int(target.word(0).order, table)
        exponents = tuple(
            (_phase_desc_int(target.word(x).order, table) - p0) % m for x in range(m)
        )
        slope = _linear_slope(exponents, m)
        return PhaseProfile(
            n=target.n,
            modulus=m,
            family=target.family,
            labeling_name=labeling.name,
            query_count=target.query_count,
            expected_queries=expected_queries(target.family, target.n),
            exponents=exponents,
            residuals={"psi_t": target.word(0).order},
            residuals_ok=True,
            failure=None,
            slope=slope,
        )

    circuit = target
    if not isinstance(circuit.control, BitControl):
        if circuit.control.labeling.n != labeling.n:
            raise DomainError("circuit and labeling disagree on n")
    ref_out = execute(circuit, 0)
    if not ref_out.tokens_home:
        raise StructuralError("reference execution left tokens off their home wires")
    refs = tuple(
        _WireRef(
            wire=w,
            sorted_word=tuple(sorted(applied)),
            phase=_wire_phase(applied, table, w),
        )
        for w, applied in sorted(ref_out.applied.items())
    )

    exponents_list, failure = _parallel_sweep(circuit, table, refs, m, processes)
    residuals = {r.wire: tuple(reversed(ref_out.applied[r.wire])) for r in refs}
    exponents = tuple(exponents_list)
    slope = _linear_slope(exponents, m) if failure is None else None
    return PhaseProfile(
        n=circuit.n,
        modulus=m,
        family=circuit.family,
        labeling_name=labeling.name,
        query_count=query_count(circuit),
        expected_queries=expected_queries(circuit.family, circuit.n),
        exponents=exponents if failure is None else (),
        residuals=residuals,
        residuals_ok=failure is None,
        failure=failure,
        slope=slope,
    )


def _parallel_sweep(
    circuit: Circuit,
    table: CommutationTable,
    refs: tuple[_WireRef, ...],
    m: int,
    processes: int | None,
) -> tuple[list[int], str | None]:
    if not processes or processes <= 1 or m < 4 * processes:
        return _sweep_range(circuit, table, refs, range(m))
    try:
        ctx = multiprocessing.get_context("fork")
    except ValueError:
        return _sweep_range(circuit, table, refs, range(m))
    chunk = -(-m // (processes * 4))
    bounds = [(lo, min(lo + chunk, m)) for lo in range(0, m, chunk)]
    try:
        with ctx.Pool(
            processes, initializer=_pool_init, initargs=(circuit, table, refs)
        ) as pool:
            parts = pool.map(_pool_chunk, bounds)
    except OSError:
        return _sweep_range(circuit, table, refs, range(m))
    exponents: list[int] = []
    for exps, failure in parts:
        exponents.extend(exps)
        if failure is not None:
            return exponents, failure
    return exponents, None


def _linear_slope(exponents: Sequence[int], m: int) -> int | None:
    if not exponents or exponents[0] != 0:
        return None
    if m == 1:
        return 0
    s = exponents[1]
    if all(exponents[x] == (x * s) % m for x in range(m)):
        return s
    return None


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one verify-and-solve run for a concrete y."""

    n: int
    family: str
    labeling_name: str
    y: int
    query_count: int
    expected_queries: int | None
    residuals_x_independent: bool
    phase_linear: bool
    solved_y: int | None
    passed: bool
    exponents: tuple[int, ...] = field(repr=False)
    residuals: dict[str, tuple[int, ...]] = field(repr=False)
    failure: str | None = None

    def to_json(self) -> str:
        payload = {
            "n": self.n,
            "family": self.family,
            "labeling": self.labeling_name,
            "y": self.y,
            "query_count": self.query_count,
            "expected_queries": self.expected_queries,
            "residuals_x_independent": self.residuals_x_independent,
            "phase_linear": self.phase_linear,
            "solved_y": self.solved_y,
            "passed": self.passed,
            "exponents": list(self.exponents),
            "residuals": {w: list(word) for w, word in sorted(self.residuals.items())},
            "failure": self.failure,
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        d = json.loads(text)
        return cls(
            n=d["n"],
            family=d["family"],
            labeling_name=d["labeling"],
            y=d["y"],
            query_count=d["query_count"],
            expected_queries=d["expected_queries"],
            residuals_x_independent=d["residuals_x_independent"],
            phase_linear=d["phase_linear"],
            solved_y=d["solved_y"],
            passed=d["passed"],
            exponents=tuple(d["exponents"]),
            residuals={w: tuple(word) for w, word in d["residuals"].items()},
            failure=d["failure"],
        )


def solve_profile(profile: PhaseProfile, y: int) -> VerificationReport:
    """Analytic inverse-Fourier readout for one y over a computed profile.

    With exponents p(x), the control ends in sum_x omega^{p(x)*y} |x>; the
    readout is deterministic iff p(x)*y == x*sigma mod n! for a single
    sigma, and then measures sigma.
    """
    m = profile.modulus
    if not 0 <= y < m:
        raise DomainError(f"y={y} outside [0, {m - 1}]")
    linear = False
    sigma: int | None = None
    if profile.residuals_ok:
        if profile.slope is not None:
            sigma = (profile.slope * y) % m
            linear = True
        elif y == 0:
            sigma = 0
            linear = True
        elif profile.exponents:
            cand = (profile.exponents[1] * y) % m if m > 1 else 0
            linear = all(
                (p * y) % m == (x * cand) % m
                for x, p in enumerate(profile.exponents)
            )
            sigma = cand if linear else None
    solved = sigma if (linear and profile.residuals_ok) else None
    return VerificationReport(
        n=profile.n,
        family=profile.family,
        labeling_name=profile.labeling_name,
        y=y,
        query_count=profile.query_count,
        expected_queries=profile.expected_queries,
        residuals_x_independent=profile.residuals_ok,
        phase_linear=linear,
        solved_y=solved,
        passed=bool(profile.residuals_ok and linear and solved == y),
        exponents=profile.exponents,
        residuals=profile.residuals,
        failure=profile.failure,
    )


def verify_and_solve(
    target: Circuit | ReferenceSwitch,
    labeling: Labeling,
    y: int,
    processes: int | None = None,
) -> VerificationReport:
    """Full check for one y: sweep all x, then solve.

    For several y values over the same circuit, compute :func:`phase_profile`
    once and call :func:`solve_profile` per y.
    """
    return solve_profile(phase_profile(target, labeling, processes=processes), y)
