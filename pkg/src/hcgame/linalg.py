"""Minimal dense complex linear algebra for operator and statevector checks.

Everything is double precision with explicit tolerances; matrices stay
small (operators for lemma checks), while multi-qubit work goes through
single-qubit applications on statevectors and never materialises a full
2^m x 2^m operator.
"""

from __future__ import annotations

import numpy as np

MAX_MATRIX_DIM = 1 << 12
MAX_TENSOR_ENTRIES = 1 << 24
MAX_STATE_AMPLITUDES = 1 << 24
MAX_MATRIX_POWER = 64

HERMITIAN_ATOL = 1e-12
OPERATOR_ATOL = 1e-9
REFLECTION_ATOL = 1e-9
IMAG_RESIDUE_ATOL = 1e-10
UNIT_NORM_ATOL = 1e-12


def as_operator(matrix) -> np.ndarray:
    arr = np.asarray(matrix, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] > MAX_MATRIX_DIM:
        raise ValueError(f"matrix dimension {arr.shape[0]} exceeds {MAX_MATRIX_DIM}")
    return arr


def is_hermitian(matrix, atol: float = HERMITIAN_ATOL) -> bool:
    arr = as_operator(matrix)
    return bool(np.max(np.abs(arr - arr.conj().T)) <= atol)


def tensor(a, b) -> np.ndarray:
    """Kronecker product with a size guard."""
    a = as_operator(a)
    b = as_operator(b)
    entries = (a.shape[0] * b.shape[0]) ** 2
    if entries > MAX_TENSOR_ENTRIES:
        raise ValueError(f"tensor product would hold {entries} entries, cap is {MAX_TENSOR_ENTRIES}")
    return np.kron(a, b)


def expectation(matrix, psi, imag_atol: float = IMAG_RESIDUE_ATOL) -> float:
    """<psi| M |psi> for Hermitian M, returned as a real number.

    Raises if M is not Hermitian or if the imaginary residue exceeds the
    tolerance; the residue is then discarded.
    """
    arr = as_operator(matrix)
    vec = np.asarray(psi, dtype=complex).reshape(-1)
    if arr.shape[0] != vec.shape[0]:
        raise ValueError(f"dimension mismatch: matrix {arr.shape[0]}, state {vec.shape[0]}")
    # accumulated float error from matrix products can reach well past 1e-12
    if not is_hermitian(arr, OPERATOR_ATOL):
        raise ValueError("expectation requires a Hermitian operator")
    value = np.vdot(vec, arr @ vec)
    if abs(value.imag) > imag_atol:
        raise ValueError(f"imaginary residue {value.imag:.3e} above tolerance {imag_atol}")
    return float(value.real)


def matpow(matrix, k: int) -> np.ndarray:
    """M^k by repeated squaring; M^0 is the identity."""
    if not 0 <= k <= MAX_MATRIX_POWER:
        raise ValueError(f"exponent must be in [0, {MAX_MATRIX_POWER}], got {k}")
    arr = as_operator(matrix)
    result = np.eye(arr.shape[0], dtype=complex)
    base = arr
    n = k
    while n:
        if n & 1:
            result = result @ base
        n >>= 1
        if n:
            base = base @ base
    return result


def is_reflection(matrix, atol: float = REFLECTION_ATOL) -> bool:
    """Hermitian with spectrum in {+1, -1}, i.e. M^2 = I within tolerance."""
    arr = as_operator(matrix)
    if not is_hermitian(arr, atol):
        return False
    eye = np.eye(arr.shape[0])
    return bool(np.max(np.abs(arr @ arr - eye)) <= atol)


def num_qubits(psi) -> int:
    vec = np.asarray(psi).reshape(-1)
    n = vec.shape[0]
    if n > MAX_STATE_AMPLITUDES:
        raise ValueError(f"state of {n} amplitudes exceeds cap {MAX_STATE_AMPLITUDES}")
    qubits = n.bit_length() - 1
    if n != 1 << qubits or n < 2:
        raise ValueError(f"state length {n} is not a power of two")
    return qubits


def check_unit(psi, atol: float = UNIT_NORM_ATOL) -> None:
    norm = float(np.linalg.norm(np.asarray(psi)))
    if abs(norm - 1.0) > atol:
        raise ValueError(f"state norm {norm} deviates from 1 beyond {atol}")


def apply_single_qubit(psi, gate, qubit: int) -> np.ndarray:
    """Apply a 2x2 operator to one qubit of a statevector (qubit 0 is the
    most significant bit of the amplitude index)."""
    vec = np.asarray(psi, dtype=complex).reshape(-1)
    n = num_qubits(vec)
    if not 0 <= qubit < n:
        raise ValueError(f"qubit {qubit} out of range for {n} qubits")
    g = np.asarray(gate, dtype=complex)
    if g.shape != (2, 2):
        raise ValueError(f"expected a 2x2 gate, got shape {g.shape}")
    state = vec.reshape((2,) * n)
    state = np.moveaxis(state, qubit, 0)
    flat = g @ state.reshape(2, -1)
    state = np.moveaxis(flat.reshape((2,) + (2,) * (n - 1)), 0, qubit)
    return state.reshape(-1)
