"""Dense numerical cross-validation backend for small n.

Builds concrete promise-satisfying unitaries (one clock/shift register per
unordered gate pair), runs the full Fourier-sandwich protocol numerically,
and reads y off the control marginal.

Because every circuit in scope is classically controlled on control basis
states, the joint state after the circuit is (1/sqrt(n!)) sum_x |x> |psi_x>
with |psi_x> a product over data wires.  :func:`run_dense` therefore
propagates one d-dimensional vector per wire for each x and assembles the
control marginal from the Gram matrix of the |psi_x> - exact linear algebra
at a cost of n! * wires * d amplitudes instead of d^wires.
:func:`run_dense_joint` is the literal full-statevector reference for tiny
dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from .circuit import Circuit, _resolve, gate_events
from .commutation import CommutationTable
from .errors import DimensionError, DomainError, InvariantError, UnsupportedError

__all__ = [
    "UNITARITY_TOL",
    "PROBABILITY_TOL",
    "DenseRunResult",
    "fourier",
    "build_promise_unitaries",
    "pairwise_deviation",
    "run_dense",
    "run_dense_joint",
]

UNITARITY_TOL = 1e-10
PROBABILITY_TOL = 1e-9

_PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
_PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)


def _check_unitary(u: np.ndarray, tol: float = UNITARITY_TOL) -> None:
    d = u.shape[0]
    if u.shape != (d, d):
        raise InvariantError(f"matrix shape {u.shape} is not square")
    if np.linalg.norm(u.conj().T @ u - np.eye(d)) > tol:
        raise InvariantError("matrix is not unitary within tolerance")


def fourier(m: int) -> np.ndarray:
    """F[x][y] = omega^{x*y} / sqrt(m) with omega = exp(2*pi*i/m)."""
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    grid = np.outer(np.arange(m), np.arange(m))
    return np.exp(2j * np.pi * grid / m) / np.sqrt(m)


def pairwise_deviation(
    units: list[np.ndarray], table: CommutationTable, y: int
) -> float:
    """max over pairs of || U_j U_k - omega^{e[j][k]*y} U_k U_j ||_max."""
    m = table.modulus
    omega = np.exp(2j * np.pi / m)
    worst = 0.0
    for j in range(table.n):
        for k in range(j + 1, table.n):
            lhs = units[j] @ units[k]
            rhs = omega ** ((table.entry(j, k) * y) % m) * (units[k] @ units[j])
            worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


def _register_ops(m: int, exponent: int, y: int) -> tuple[np.ndarray, np.ndarray]:
    """Shift and clock-power pair realizing U_j U_k = omega^{exponent*y} U_k U_j.

    The sign of the clock power depends on the X/Z convention, so both signs
    are tried and the one passing the numeric check is kept.
    """
    omega = np.exp(2j * np.pi / m)
    shift = np.roll(np.eye(m, dtype=complex), 1, axis=0)  # X|t> = |t+1 mod m>
    target = omega ** ((exponent * y) % m)
    for sign in (-1, 1):
        c = (sign * exponent * y) % m
        clock = np.diag(omega ** (np.arange(m) * c))
        if np.abs(shift @ clock - target * (clock @ shift)).max() < 1e-9:
            return shift, clock
    raise InvariantError("no clock sign satisfies the pair relation")


def build_promise_unitaries(
    n: int, y: int, table: CommutationTable
) -> list[np.ndarray]:
    """Concrete unitaries satisfying every pairwise relation of ``table`` at y.

    n=2 uses the Pauli pair (sigma_x, sigma_y anticommute; sigma_x with
    itself commutes).  For n=3 the construction is one n!-dimensional
    clock/shift register per unordered pair: the smaller index acts as the
    shift, the larger as a clock power, identity elsewhere; total dimension
    (n!)^3 = 216.  Larger n is out of scope for the dense backend.
    """
    if n != table.n:
        raise DomainError(f"table has n={table.n}, expected {n}")
    m = table.modulus
    if not 0 <= y < m:
        raise DomainError(f"y={y} outside [0, {m - 1}]")
    if n == 2:
        units = [_PAULI_X, _PAULI_Y if y == 1 else _PAULI_X]
        if pairwise_deviation(units, table, y) < 1e-9:
            return units
        # Unusual table; fall through to the register construction.
    if n > 3:
        raise UnsupportedError(
            f"dense construction has dimension (n!)^C(n,2); n={n} is unsupported"
        )

    pairs = [(j, k) for j in range(n) for k in range(j + 1, n)]
    registers = {
        pair: _register_ops(m, table.entry(*pair), y) for pair in pairs
    }
    eye = np.eye(m, dtype=complex)
    units = []
    for i in range(n):
        factors = []
        for pair in pairs:
            if i == pair[0]:
                factors.append(registers[pair][0])
            elif i == pair[1]:
                factors.append(registers[pair][1])
            else:
                factors.append(eye)
        u = factors[0]
        for f in factors[1:]:
            u = np.kron(u, f)
        units.append(u)
    deviation = pairwise_deviation(units, table, y)
    if deviation > 1e-9:
        raise InvariantError(f"construction violates the table by {deviation}")
    for u in units:
        _check_unitary(u)
    return units


@dataclass(frozen=True)
class DenseRunResult:
    measured_y: int
    peak_probability: float
    probabilities: np.ndarray


def _initial_vectors(
    circuit: Circuit, d: int, seed: int | None
) -> dict[str, np.ndarray]:
    wires = [w.id for w in circuit.data_wires()]
    if seed is None:
        vec = np.zeros(d, dtype=complex)
        vec[0] = 1.0
        return {w: vec.copy() for w in wires}
    rng = np.random.default_rng(seed)
    out = {}
    for w in wires:
        v = rng.normal(size=d) + 1j * rng.normal(size=d)
        out[w] = v / np.linalg.norm(v)
    return out


def _control_dimension(circuit: Circuit) -> int:
    return factorial(circuit.n)


def run_dense(
    circuit: Circuit,
    unitaries: list[np.ndarray],
    y_truth: int | None = None,
    seed: int | None = None,
) -> DenseRunResult:
    """Numerically run the Fourier sandwich and measure the control register.

    Per control basis state the data stays a product state, so each wire is
    propagated as one d-dimensional vector; the control marginal after the
    inverse Fourier transform is assembled from pairwise overlaps.
    """
    if len(unitaries) != circuit.n:
        raise DomainError(f"expected {circuit.n} unitaries, got {len(unitaries)}")
    d = unitaries[0].shape[0]
    for u in unitaries:
        if u.shape != (d, d):
            raise DomainError("unitaries must share one dimension")
        _check_unitary(u)
    m = _control_dimension(circuit)
    wires = [w.id for w in circuit.data_wires()]
    if m * len(wires) * d > 10**7 or m * m > 10**7:
        raise DimensionError(
            f"dense run needs {m * len(wires) * d} amplitudes and an "
            f"{m}x{m} control marginal; limit is 1e7"
        )

    init = _initial_vectors(circuit, d, seed)
    final: list[dict[str, np.ndarray]] = []
    for x in range(m):
        ctx = _resolve(circuit, x)
        vectors = {w: init[w].copy() for w in wires}
        token_at = {w: w for w in wires}
        for gate in circuit.gates:
            for event in gate_events(gate, ctx):
                if event[0] == "apply":
                    _, g, wire = event
                    tok = token_at[wire]
                    vectors[tok] = unitaries[g] @ vectors[tok]
                else:
                    _, a, b = event
                    token_at[a], token_at[b] = token_at[b], token_at[a]
        if any(tok != w for w, tok in token_at.items()):
            raise InvariantError("tokens did not return home; marginal undefined")
        final.append(vectors)

    gram = np.empty((m, m), dtype=complex)
    for x in range(m):
        for xp in range(m):
            g = 1.0 + 0j
            for w in wires:
                g *= np.vdot(final[xp][w], final[x][w])
            gram[x, xp] = g
    rho = gram / m
    f = fourier(m)
    rho_out = f.conj().T @ rho @ f
    probs = np.real(np.diag(rho_out))
    measured = int(np.argmax(probs))
    return DenseRunResult(measured, float(probs[measured]), probs)


def run_dense_joint(
    circuit: Circuit,
    unitaries: list[np.ndarray],
    seed: int | None = None,
) -> DenseRunResult:
    """Literal joint-statevector reference (cost m * d^wires amplitudes).

    Only feasible for tiny dimensions; used to cross-check the product-state
    engine.
    """
    d = unitaries[0].shape[0]
    m = _control_dimension(circuit)
    wires = [w.id for w in circuit.data_wires()]
    total = m * d ** len(wires)
    if total > 10**7:
        raise DimensionError(f"joint vector needs {total} amplitudes; limit is 1e7")

    init = _initial_vectors(circuit, d, seed)
    control = np.full(m, 1 / np.sqrt(m), dtype=complex)  # F|0>
    state = control
    for w in wires:
        state = np.kron(state, init[w])
    state = state.reshape((m,) + (d,) * len(wires))

    axis_of = {w: 1 + idx for idx, w in enumerate(wires)}
    for x in range(m):
        ctx = _resolve(circuit, x)
        slice_x = state[x].copy()
        for gate in circuit.gates:
            for event in gate_events(gate, ctx):
                if event[0] == "apply":
                    _, g, wire = event
                    ax = axis_of[wire] - 1
                    slice_x = np.moveaxis(
                        np.tensordot(unitaries[g], slice_x, axes=([1], [ax])), 0, ax
                    )
                else:
                    _, a, b = event
                    slice_x = np.swapaxes(slice_x, axis_of[a] - 1, axis_of[b] - 1)
        state[x] = slice_x

    f_inv = fourier(m).conj().T
    state = np.tensordot(f_inv, state, axes=([1], [0]))
    amp2 = np.abs(state.reshape(m, -1)) ** 2
    probs = amp2.sum(axis=1)
    measured = int(np.argmax(probs))
    return DenseRunResult(measured, float(probs[measured]), probs)
