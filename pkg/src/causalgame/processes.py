"""Process matrices for the two-party causal game.

Constructors for the correlated w_beta family, the one-way ordered
processes and their convex mixtures, a six-coefficient ansatz family for
numerical searches, validity checking against the allowed correlation
terms, and the witness operator that certifies causal nonseparability.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor import (
    DEFAULT_LAYOUT,
    HERMITICITY_ATOL,
    PAULI_LABELS,
    SubsystemLayout,
    hermitian_eigenvalues,
    hermiticity_residual,
    pauli_compose,
    pauli_decompose,
)

PSD_ATOL = 1e-9
TRACE_ATOL = 1e-9
SUPPORT_ATOL = 1e-10

# Pauli words compatible with a bipartite process: no word touches both
# output spaces, a word on A_O must also touch B_I (influence from A to B),
# and a word on B_O must also touch A_I (influence from B to A). Everything
# else would let an instrument signal to its own past.
ALLOWED_SUPPORTS = frozenset(
    {
        frozenset(),
        frozenset({"A_I"}),
        frozenset({"B_I"}),
        frozenset({"A_I", "B_I"}),
        frozenset({"A_O", "B_I"}),
        frozenset({"A_I", "A_O", "B_I"}),
        frozenset({"A_I", "B_O"}),
        frozenset({"A_I", "B_I", "B_O"}),
    }
)


@dataclass(frozen=True, eq=False)
class ProcessMatrix:
    """A validated-shape process matrix with its subsystem layout.

    The matrix itself is stored read-only; ``tag`` records which family and
    parameters produced it, for reports and serialized files.
    """

    matrix: np.ndarray
    layout: SubsystemLayout = DEFAULT_LAYOUT
    tag: str = ""

    def __post_init__(self) -> None:
        arr = np.array(self.matrix, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"process matrix must be square, got shape {arr.shape}")
        if arr.shape[0] != self.layout.dim:
            raise ValueError(
                f"matrix dimension {arr.shape[0]} does not match layout dimension {self.layout.dim}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    @property
    def dim(self) -> int:
        return self.layout.dim


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of the process-matrix checks, one failure string per violation."""

    is_valid: bool
    hermiticity_residual: float
    min_eigenvalue: float
    trace: float
    forbidden_terms: tuple[tuple[tuple[int, ...], float], ...] = ()
    failures: tuple[str, ...] = ()


def _matrix_of(w) -> np.ndarray:
    if isinstance(w, ProcessMatrix):
        return w.matrix
    return np.asarray(w, dtype=complex)


def term_label(word: tuple[int, ...]) -> str:
    """Human-readable name of a Pauli word, e.g. (0, 3, 3, 0) -> 'IZZI'."""
    return "".join(PAULI_LABELS[i] for i in word)


def validate(
    w,
    layout: SubsystemLayout = DEFAULT_LAYOUT,
    *,
    psd_atol: float = PSD_ATOL,
    trace_atol: float = TRACE_ATOL,
    support_atol: float = SUPPORT_ATOL,
) -> ValidityReport:
    """Check Hermiticity, positivity, normalization and term structure.

    A process matrix must be positive semidefinite, have trace equal to the
    product of output dimensions, and carry Pauli weight only on the words
    listed in ALLOWED_SUPPORTS. Each violated condition contributes one
    entry to ``failures``; a non-Hermitian input is reported rather than
    raised, with the remaining checks run on its Hermitian part.
    """
    arr = _matrix_of(w)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] != layout.dim:
        raise ValueError(
            f"matrix dimension {arr.shape[0]} does not match layout dimension {layout.dim}"
        )
    if set(layout.labels) != {"A_I", "A_O", "B_I", "B_O"} or not layout.all_qubits():
        raise ValueError("validation is defined for the two-party qubit layout only")

    failures: list[str] = []

    residual = hermiticity_residual(arr)
    if residual > HERMITICITY_ATOL:
        failures.append(
            f"not Hermitian: residual {residual:.3e} exceeds {HERMITICITY_ATOL:.1e}"
        )
    herm = (arr + arr.conj().T) / 2

    eigenvalues = hermitian_eigenvalues(herm)
    min_eigenvalue = float(eigenvalues[0])
    if min_eigenvalue < -psd_atol:
        failures.append(
            f"not positive semidefinite: minimum eigenvalue {min_eigenvalue:.6e}"
        )

    trace = float(np.trace(arr).real)
    expected = 1.0
    for label, dim in layout.subsystems:
        if label.endswith("_O"):
            expected *= dim
    if abs(trace - expected) > trace_atol:
        failures.append(f"trace {trace!r} differs from {expected!r}")

    coefficients = pauli_decompose(herm, layout)
    forbidden: list[tuple[tuple[int, ...], float]] = []
    for word in sorted(coefficients):
        value = coefficients[word]
        if abs(value) <= support_atol:
            continue
        support = frozenset(
            label for label, index in zip(layout.labels, word) if index != 0
        )
        if support not in ALLOWED_SUPPORTS:
            forbidden.append((word, value))
    if forbidden:
        named = ", ".join(f"{term_label(t)}={c:.6g}" for t, c in forbidden)
        failures.append(f"forbidden terms present: {named}")

    return ValidityReport(
        is_valid=not failures,
        hermiticity_residual=residual,
        min_eigenvalue=min_eigenvalue,
        trace=trace,
        forbidden_terms=tuple(forbidden),
        failures=tuple(failures),
    )


def w_beta_weights(beta: float) -> tuple[float, float]:
    """The two correlation weights (f1, f2) of w_beta; f1^2 + f2^2 = 1."""
    norm = np.sqrt(1.0 - 2.0 * beta + 2.0 * beta * beta)
    return float((1.0 - beta) / norm), float(beta / norm)


def w_beta(beta: float) -> ProcessMatrix:
    """The one-parameter family of causally nonseparable processes.

    For beta in [1/2, 1) this interpolates between the maximally
    inseparable process at beta = 1/2 and a pure one-way channel in the
    beta -> 1 limit. Always a valid process matrix.
    """
    if not 0.5 <= beta < 1.0:
        raise ValueError(f"beta must lie in [1/2, 1), got {beta}")
    f1, f2 = w_beta_weights(beta)
    matrix = pauli_compose(
        {
            (0, 0, 0, 0): 0.25,
            (0, 3, 3, 0): 0.25 * f1,  # Z on A_O with Z on B_I
            (3, 0, 1, 3): 0.25 * f2,  # Z on A_I with X on B_I and Z on B_O
        }
    )
    return ProcessMatrix(matrix, tag=f"w_beta@{float(beta)!r}")


def w_ocb() -> ProcessMatrix:
    """The symmetric causally nonseparable process; equals w_beta(1/2)."""
    s = 1.0 / np.sqrt(2.0)
    matrix = pauli_compose(
        {
            (0, 0, 0, 0): 0.25,
            (0, 3, 3, 0): 0.25 * s,
            (3, 0, 1, 3): 0.25 * s,
        }
    )
    return ProcessMatrix(matrix, tag="w_ocb")


def w_ansatz(
    a0: float, b0: float, c0: float, d0: float, e0: float, f0: float
) -> tuple[ProcessMatrix, ValidityReport]:
    """Six-coefficient family spanning the terms that can score in the game.

    Returns the candidate together with its validity report instead of
    raising, so a search can probe infeasible coefficient regions and be
    told which constraint failed. Term structure is allowed by
    construction; positivity is the live constraint.
    """
    matrix = pauli_compose(
        {
            (0, 0, 0, 0): 0.25,
            (0, 3, 3, 0): 0.25 * a0,
            (3, 0, 1, 3): 0.25 * b0,
            (3, 0, 2, 3): 0.25 * c0,
            (3, 0, 3, 3): 0.25 * d0,
            (3, 0, 0, 0): 0.25 * e0,
            (0, 0, 3, 0): 0.25 * f0,
        }
    )
    tag = f"ansatz({a0!r},{b0!r},{c0!r},{d0!r},{e0!r},{f0!r})"
    candidate = ProcessMatrix(matrix, tag=tag)
    return candidate, validate(candidate)


def ordered_identity_channel_process(direction: str) -> ProcessMatrix:
    """One-way process: maximally mixed input to the first party, identity
    channel from its output to the second party's input, second output free.

    ``direction`` is "a_to_b" or "b_to_a". The Choi operator of the
    identity channel contributes the XX, -YY, ZZ correlations between the
    connected output/input pair.
    """
    if direction == "a_to_b":
        coefficients = {
            (0, 0, 0, 0): 0.25,
            (0, 1, 1, 0): 0.25,
            (0, 2, 2, 0): -0.25,
            (0, 3, 3, 0): 0.25,
        }
        tag = "ordered_ab"
    elif direction == "b_to_a":
        coefficients = {
            (0, 0, 0, 0): 0.25,
            (1, 0, 0, 1): 0.25,
            (2, 0, 0, 2): -0.25,
            (3, 0, 0, 3): 0.25,
        }
        tag = "ordered_ba"
    else:
        raise ValueError(f"direction must be 'a_to_b' or 'b_to_a', got {direction!r}")
    return ProcessMatrix(pauli_compose(coefficients), tag=tag)


def causal_mixture(w_b_to_a, w_a_to_b, q: float) -> ProcessMatrix:
    """Convex mixture q * w_b_to_a + (1 - q) * w_a_to_b.

    The first argument is the component with influence at most from B to A,
    the second the one with influence at most from A to B. Validity of the
    inputs is the caller's obligation; the mixture of valid processes is
    valid by convexity.
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"mixture weight must lie in [0, 1], got {q}")
    first = _matrix_of(w_b_to_a)
    second = _matrix_of(w_a_to_b)
    if first.shape != second.shape:
        raise ValueError(f"component shapes differ: {first.shape} vs {second.shape}")
    layout = w_b_to_a.layout if isinstance(w_b_to_a, ProcessMatrix) else DEFAULT_LAYOUT
    return ProcessMatrix(q * first + (1.0 - q) * second, layout, tag=f"mix@{float(q)!r}")


def witness_s() -> np.ndarray:
    """Witness operator separating w_beta from all causally separable processes."""
    return pauli_compose(
        {
            (0, 0, 0, 0): 0.25,
            (0, 3, 3, 0): -0.25,
            (3, 0, 1, 3): -0.25,
        }
    )


def witness_value(s: np.ndarray, w) -> float:
    """Tr[S W]: nonnegative on every causally separable process, negative on w_beta."""
    s_arr = _matrix_of(s)
    w_arr = _matrix_of(w)
    if s_arr.shape != w_arr.shape:
        raise ValueError(f"shape mismatch: witness {s_arr.shape}, process {w_arr.shape}")
    return float(np.einsum("ij,ji->", s_arr, w_arr).real)
