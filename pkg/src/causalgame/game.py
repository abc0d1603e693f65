"""The biased communication game and its probability rule.

One round runs both tasks at once: Bob holds a round bit b_prime with
p(b_prime=0) = beta deciding whether his bit b must reach Alice (she wins
if x = b) or whether he must guess Alice's bit a (he wins if y = a). The
input bits a and b are drawn with p(0) = alpha. Probabilities come from
the bilinear pairing of a process matrix with the two parties' Choi
operators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instruments import CJOperator, Instrument, instrument_validate

BORN_IMAG_ATOL = 1e-10
NORMALIZATION_ATOL = 1e-9
ENTRY_ATOL = 1e-12


class NumericalIntegrityError(ArithmeticError):
    """A quantity that must be real came out with a large imaginary part."""


@dataclass(frozen=True)
class GameSpec:
    """Bias parameters: alpha weights the input bits, beta the round bit."""

    alpha: float = 0.5
    beta: float = 0.5

    def __post_init__(self) -> None:
        if not 0.5 <= self.alpha < 1.0:
            raise ValueError(f"alpha must lie in [1/2, 1), got {self.alpha}")
        if not 0.5 <= self.beta < 1.0:
            raise ValueError(f"beta must lie in [1/2, 1), got {self.beta}")


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Conditional outcome table p[x, y, a, b, b_prime].

    Entries are probabilities of the outcome pair (x, y) given the inputs;
    each setting (a, b, b_prime) must be normalized.
    """

    table: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.table, dtype=float)
        if arr.shape != (2, 2, 2, 2, 2):
            raise ValueError(f"table must have shape (2,2,2,2,2), got {arr.shape}")
        if arr.min() < -ENTRY_ATOL or arr.max() > 1.0 + ENTRY_ATOL:
            raise ValueError(
                f"entries outside [0, 1]: min {arr.min()!r}, max {arr.max()!r}"
            )
        sums = arr.sum(axis=(0, 1))
        worst = float(np.abs(sums - 1.0).max())
        if worst > NORMALIZATION_ATOL:
            raise ValueError(f"settings are not normalized: worst residual {worst:.3e}")
        arr.setflags(write=False)
        object.__setattr__(self, "table", arr)

    def to_csv(self) -> str:
        """Render as CSV with columns x,y,a,b,bprime,p."""
        lines = ["x,y,a,b,bprime,p"]
        for x, y, a, b, bp in np.ndindex(2, 2, 2, 2, 2):
            lines.append(f"{x},{y},{a},{b},{bp},{self.table[x, y, a, b, bp]:.9g}")
        return "\n".join(lines) + "\n"


def _operator_matrix(op) -> np.ndarray:
    arr = op.matrix if hasattr(op, "matrix") else op
    return np.asarray(arr, dtype=complex)


def born(w, m_a, m_b) -> float:
    """Probability of one outcome pair: Tr[W (M_A tensor M_B)].

    The trace must be real; an imaginary residue above 1e-10 raises
    NumericalIntegrityError instead of being discarded.
    """
    w_arr = _operator_matrix(w)
    a_arr = _operator_matrix(m_a)
    b_arr = _operator_matrix(m_b)
    local = np.kron(a_arr, b_arr)
    if w_arr.shape != local.shape:
        raise ValueError(
            f"operator dimensions {a_arr.shape[0]}x{b_arr.shape[0]} do not match process {w_arr.shape}"
        )
    value = complex(np.einsum("ij,ji->", w_arr, local))
    if abs(value.imag) > BORN_IMAG_ATOL:
        raise NumericalIntegrityError(
            f"Born value has imaginary residue {value.imag:.3e}"
        )
    return value.real


def _validate_family(elements: dict[int, np.ndarray], party: str, setting: tuple[int, ...]) -> None:
    instrument = Instrument(
        {
            outcome: CJOperator(matrix, party=party, outcome=outcome, setting=setting)
            for outcome, matrix in elements.items()
        }
    )
    report = instrument_validate(instrument)
    if not report.is_valid:
        raise ValueError(
            f"party {party} instrument at setting {setting} is invalid: "
            + "; ".join(report.failures)
        )


def joint_distribution(w, alice_family, bob_family) -> JointDistribution:
    """Evaluate the full conditional table for the given local families.

    ``alice_family(x, a)`` and ``bob_family(y, b, b_prime)`` return the
    Choi operators of the corresponding instrument elements. Every family
    is checked to be a valid instrument per setting before evaluation.
    """
    alice = {
        (x, a): _operator_matrix(alice_family(x, a))
        for x in (0, 1)
        for a in (0, 1)
    }
    bob = {
        (y, b, bp): _operator_matrix(bob_family(y, b, bp))
        for y in (0, 1)
        for b in (0, 1)
        for bp in (0, 1)
    }
    for a in (0, 1):
        _validate_family({x: alice[(x, a)] for x in (0, 1)}, "A", (a,))
    for b in (0, 1):
        for bp in (0, 1):
            _validate_family({y: bob[(y, b, bp)] for y in (0, 1)}, "B", (b, bp))

    table = np.empty((2, 2, 2, 2, 2))
    for x, y, a, b, bp in np.ndindex(2, 2, 2, 2, 2):
        table[x, y, a, b, bp] = born(w, alice[(x, a)], bob[(y, b, bp)])
    return JointDistribution(table)


def _input_weights(alpha: float) -> np.ndarray:
    return np.array([alpha, 1.0 - alpha])


def success_components(dist: JointDistribution, alpha: float) -> tuple[float, float]:
    """The two winning probabilities, averaged over alpha-biased inputs.

    Returns (p(x=b | b_prime=0), p(y=a | b_prime=1)).
    """
    weights = _input_weights(alpha)
    pair = np.outer(weights, weights)
    table = dist.table
    decode = 0.0
    guess = 0.0
    for a in (0, 1):
        for b in (0, 1):
            decode += pair[a, b] * table[b, :, a, b, 0].sum()
            guess += pair[a, b] * table[:, a, a, b, 1].sum()
    return float(decode), float(guess)


def success_probability(dist: JointDistribution, spec: GameSpec) -> float:
    """Overall winning probability beta * p(x=b|0) + (1-beta) * p(y=a|1)."""
    decode, guess = success_components(dist, spec.alpha)
    return spec.beta * decode + (1.0 - spec.beta) * guess


def causal_bound(spec: GameSpec) -> float:
    """Best winning probability compatible with a definite causal order."""
    return spec.beta + spec.alpha * (1.0 - spec.beta)


def analytic_max_dbit(beta: float) -> float:
    """Largest winning probability of the w_beta family at alpha = 1/2."""
    if not 0.5 <= beta < 1.0:
        raise ValueError(f"beta must lie in [1/2, 1), got {beta}")
    return 0.5 * (1.0 + np.sqrt(1.0 - 2.0 * beta + 2.0 * beta * beta))


@dataclass(frozen=True)
class SignalingProfile:
    """Largest variation of one party's outcome marginal with the other's inputs."""

    b_to_a: float
    a_to_b: float


def signaling_profile(dist: JointDistribution) -> SignalingProfile:
    """Measure two-way signaling in the outcome table.

    b_to_a is the largest change of Alice's marginal p(x|a) as Bob's
    inputs (b, b_prime) vary; a_to_b is the largest change of Bob's
    marginal p(y|b, b_prime) as a varies.
    """
    table = dist.table
    alice_marginal = table.sum(axis=1)  # [x, a, b, bp]
    b_to_a = float(np.ptp(alice_marginal.reshape(2, 2, 4), axis=2).max())
    bob_marginal = table.sum(axis=0)  # [y, a, b, bp]
    a_to_b = float(np.ptp(bob_marginal, axis=1).max())
    return SignalingProfile(b_to_a=b_to_a, a_to_b=a_to_b)
