"""Pairwise commutation phase algebra over exponents mod n!.

Gates are abstract symbols U_0..U_{n-1}.  A word is a product written
left-to-right with the RIGHTMOST symbol acting first.  Exchanging an adjacent
written pair "j k" into "k j" multiplies the operator by the phase
omega^{e[j][k] * y}, where e is an antisymmetric integer table mod n! and y
stays symbolic throughout.  All bookkeeping is exact integer arithmetic; no
floating point enters the symbolic path.

Three independent routes compute the exponent of a word relative to the
descending order: an insertion-sort engine (:func:`normal_order`), a closed
pairwise-sum formula (:func:`perm_phase_exponent`), and a literal bubble-sort
oracle (:func:`brute_force_phase`).  They must always agree; tests enforce it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import factorial
from typing import Iterable, Sequence

from .errors import DomainError, InvariantError

__all__ = [
    "PhaseExp",
    "CommutationTable",
    "NormalOrderResult",
    "factoradic_table",
    "random_table",
    "normal_order",
    "perm_phase_exponent",
    "brute_force_phase",
]


@dataclass(frozen=True)
class PhaseExp:
    """Integer exponent p mod ``modulus`` denoting the phase omega^{p*y}."""

    value: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise InvariantError(f"modulus must be >= 1, got {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)

    def _check(self, other: "PhaseExp") -> None:
        if self.modulus != other.modulus:
            raise DomainError(
                f"modulus mismatch: {self.modulus} vs {other.modulus}"
            )

    def __add__(self, other: "PhaseExp") -> "PhaseExp":
        self._check(other)
        return PhaseExp(self.value + other.value, self.modulus)

    def __sub__(self, other: "PhaseExp") -> "PhaseExp":
        self._check(other)
        return PhaseExp(self.value - other.value, self.modulus)

    def __neg__(self) -> "PhaseExp":
        return PhaseExp(-self.value, self.modulus)

    def __int__(self) -> int:
        return self.value


@dataclass(frozen=True)
class CommutationTable:
    """Antisymmetric table e[j][k] mod n! with U_j U_k = omega^{e[j][k]*y} U_k U_j."""

    n: int
    entries: dict[tuple[int, int], int] = field(repr=False)

    def __post_init__(self) -> None:
        m = factorial(self.n)
        object.__setattr__(self, "_modulus", m)
        pairs = {(j, k) for j in range(self.n) for k in range(self.n) if j != k}
        if set(self.entries) != pairs:
            raise InvariantError("table must define e[j][k] for every j != k")
        for j in range(self.n):
            for k in range(j + 1, self.n):
                if (self.entries[(j, k)] + self.entries[(k, j)]) % m != 0:
                    raise InvariantError(
                        f"antisymmetry violated for pair ({j}, {k})"
                    )

    @property
    def modulus(self) -> int:
        return self._modulus  # type: ignore[attr-defined]

    def entry(self, j: int, k: int) -> int:
        return self.entries[(j, k)]

    @classmethod
    def from_upper(cls, n: int, upper: dict[tuple[int, int], int]) -> "CommutationTable":
        """Build from e[j][k] given for j < k; the antisymmetric half is filled in."""
        m = factorial(n)
        entries: dict[tuple[int, int], int] = {}
        for j in range(n):
            for k in range(j + 1, n):
                v = upper[(j, k)] % m
                entries[(j, k)] = v
                entries[(k, j)] = (-v) % m
        return cls(n, entries)


def factoradic_table(n: int) -> CommutationTable:
    """The table of the factoradic labeling: e[j][k] = k! for j < k."""
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    m = factorial(n)
    return CommutationTable.from_upper(
        n, {(j, k): factorial(k) % m for j in range(n) for k in range(j + 1, n)}
    )


def random_table(n: int, rng: random.Random) -> CommutationTable:
    """A random antisymmetric table, for property tests."""
    m = factorial(n)
    return CommutationTable.from_upper(
        n,
        {(j, k): rng.randrange(m) for j in range(n) for k in range(j + 1, n)},
    )


@dataclass(frozen=True)
class NormalOrderResult:
    phase: PhaseExp
    word: tuple[int, ...]


def _as_word(word: Sequence[int] | Iterable[int]) -> tuple[int, ...]:
    order = getattr(word, "order", None)
    if order is not None:
        return tuple(order)
    return tuple(word)


def normal_order(
    word: Sequence[int],
    table: CommutationTable,
    direction: str = "descending",
) -> NormalOrderResult:
    """Sort a written word into descending or ascending index order.

    Insertion sort over the written sequence; each adjacent exchange of a
    written pair "j k" into "k j" adds e[j][k] to the accumulated exponent.
    The result is independent of the transposition path because the phases
    compose per unordered pair.
    """
    seq = list(_as_word(word))
    if len(set(seq)) != len(seq):
        raise DomainError(f"duplicate gate index in word {tuple(seq)}")
    if direction not in ("descending", "ascending"):
        raise DomainError(f"unknown direction {direction!r}")
    want_desc = direction == "descending"
    m = table.modulus
    e = table.entries
    exponent = 0
    for right in range(1, len(seq)):
        pos = right
        while pos > 0 and (
            (seq[pos - 1] < seq[pos]) if want_desc else (seq[pos - 1] > seq[pos])
        ):
            exponent += e[(seq[pos - 1], seq[pos])]
            seq[pos - 1], seq[pos] = seq[pos], seq[pos - 1]
            pos -= 1
    return NormalOrderResult(PhaseExp(exponent % m, m), tuple(seq))


def perm_phase_exponent(word: Sequence[int], table: CommutationTable) -> PhaseExp:
    """Exponent of a full permutation word relative to the descending order.

    Closed form: sum of e[a][b] over written pairs with the smaller index to
    the left of the larger one.
    """
    seq = _as_word(word)
    if sorted(seq) != list(range(table.n)):
        raise DomainError(f"word {seq} is not a permutation of 0..{table.n - 1}")
    return PhaseExp(_phase_desc_int(seq, table), table.modulus)


def _phase_desc_int(seq: Sequence[int], table: CommutationTable) -> int:
    """Plain-int exponent of ``seq`` relative to descending order (hot path)."""
    e = table.entries
    total = 0
    for a in range(len(seq)):
        sa = seq[a]
        for b in range(a + 1, len(seq)):
            if sa < seq[b]:
                total += e[(sa, seq[b])]
    return total % table.modulus


def brute_force_phase(word: Sequence[int], table: CommutationTable) -> PhaseExp:
    """Independent oracle: bubble-sort to descending order, one phase per swap."""
    seq = list(_as_word(word))
    if len(set(seq)) != len(seq):
        raise DomainError(f"duplicate gate index in word {tuple(seq)}")
    m = table.modulus
    e = table.entries
    exponent = 0
    changed = True
    while changed:
        changed = False
        for i in range(len(seq) - 1):
            if seq[i] < seq[i + 1]:
                exponent = (exponent + e[(seq[i], seq[i + 1])]) % m
                seq[i], seq[i + 1] = seq[i + 1], seq[i]
                changed = True
    return PhaseExp(exponent, m)
