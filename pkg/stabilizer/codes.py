# stabilizer/codes.py
"""
Stabilizer codes with a minimum-weight lookup decoder.

Syndrome bit i is the symplectic product of the error with generator i;
the syndrome integer reads the bits most-significant first. Decoding
multiplies the error by the table correction and classifies the residual
by which logical operators it anticommutes with.
"""
import functools
import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from .models import VERDICT_CODES, PauliOp

logger = logging.getLogger(__name__)

# Parity checks of the [7, 4] Hamming code; column j is j written in binary.
HAMMING_ROWS = ('0001111', '0110011', '1010101')


def symplectic_products(rows, x, z):
    """(x·row_z + z·row_x) mod 2 for every row; ``x``, ``z`` have shape (..., n)."""
    n = rows.shape[1] // 2
    row_x, row_z = rows[:, :n].astype(np.int64), rows[:, n:].astype(np.int64)
    return (np.asarray(x, dtype=np.int64) @ row_z.T + np.asarray(z, dtype=np.int64) @ row_x.T) % 2


def pauli_bits(indices):
    """Per-qubit Pauli indices 0..3 (I, X, Y, Z) → (x, z) bit arrays."""
    indices = np.asarray(indices)
    return ((indices == 1) | (indices == 2)).astype(np.uint8), ((indices == 2) | (indices == 3)).astype(np.uint8)


def all_paulis(n):
    """Every n-qubit Pauli as index rows, shape (4^n, n)."""
    return np.array(list(itertools.product(range(4), repeat=n)), dtype=np.uint8)


@dataclass(frozen=True, eq=False)
class StabilizerCode:
    n: int
    k: int
    generators: tuple
    logical_x: PauliOp
    logical_z: PauliOp
    correction_x: np.ndarray = field(default=None, repr=False)
    correction_z: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if len(self.generators) != self.n - self.k:
            raise ValueError(f"expected {self.n - self.k} generators, got {len(self.generators)}")
        for a, b in itertools.combinations(self.generators, 2):
            if not a.commutes_with(b):
                raise ValueError(f"generators {a.label} and {b.label} anticommute")
        for logical in (self.logical_x, self.logical_z):
            if not all(logical.commutes_with(g) for g in self.generators):
                raise ValueError(f"logical {logical.label} does not commute with the stabilizer")
        if self.logical_x.commutes_with(self.logical_z):
            raise ValueError("logical X and Z must anticommute")
        if self.correction_x is None:
            cx, cz = build_lookup_table(self.check_matrix, self.n)
            object.__setattr__(self, 'correction_x', cx)
            object.__setattr__(self, 'correction_z', cz)

    @property
    def n_syndromes(self):
        return 2 ** len(self.generators)

    @functools.cached_property
    def check_matrix(self):
        return np.array([g.bits for g in self.generators], dtype=np.uint8)

    @functools.cached_property
    def logical_matrix(self):
        """Rows: logical Z then logical X; a residual anticommuting with row 0 carries an X part."""
        return np.array([self.logical_z.bits, self.logical_x.bits], dtype=np.uint8)

    def syndrome_ints(self, x, z):
        bits = symplectic_products(self.check_matrix, x, z)
        return bits @ (1 << np.arange(bits.shape[-1])[::-1])

    def syndrome(self, error):
        return int(self.syndrome_ints(error.x[None, :], error.z[None, :])[0])

    def decoder(self, syndrome):
        """Correction for a syndrome integer."""
        return PauliOp(self.correction_x[syndrome], self.correction_z[syndrome])


def build_lookup_table(check_matrix, n):
    """
    Minimum-weight correction per syndrome. Candidates are ordered by weight,
    then lexicographically on their (x | z) bits; the first per syndrome wins.
    """
    x, z = pauli_bits(all_paulis(n))
    weights = np.count_nonzero(x | z, axis=1)
    bits = np.concatenate([x, z], axis=1)
    order = np.lexsort(tuple(bits[:, col] for col in reversed(range(2 * n))) + (weights,))
    syndromes = symplectic_products(check_matrix, x[order], z[order]) @ (1 << np.arange(len(check_matrix))[::-1])
    seen, first = np.unique(syndromes, return_index=True)
    if len(seen) != 2 ** len(check_matrix):
        raise ValueError(f"decoder covers {len(seen)} of {2 ** len(check_matrix)} syndromes")
    table_x = np.zeros((len(seen), n), dtype=np.uint8)
    table_z = np.zeros((len(seen), n), dtype=np.uint8)
    table_x[seen] = x[order][first]
    table_z[seen] = z[order][first]
    logger.debug(f"lookup table: max correction weight {int(weights[order][first].max())}")
    return table_x, table_z


@functools.lru_cache(maxsize=1)
def steane_code():
    """The [[7,1,3]] CSS code built twice from the Hamming checks."""
    rows = [np.array([int(ch) for ch in row], dtype=np.uint8) for row in HAMMING_ROWS]
    zeros = np.zeros(7, dtype=np.uint8)
    generators = tuple(PauliOp(row, zeros) for row in rows) + tuple(PauliOp(zeros, row) for row in rows)
    return StabilizerCode(
        n=7, k=1, generators=generators,
        logical_x=PauliOp.from_label('XXXXXXX'),
        logical_z=PauliOp.from_label('ZZZZZZZ'),
    )


def decode_batch(code, x, z):
    """
    Verdict codes (index into VERDICT_CODES) for a batch of errors given as
    bit arrays of shape (samples, n).
    """
    x = np.asarray(x, dtype=np.uint8)
    z = np.asarray(z, dtype=np.uint8)
    syndromes = code.syndrome_ints(x, z)
    residual_x = x ^ code.correction_x[syndromes]
    residual_z = z ^ code.correction_z[syndromes]
    flips = symplectic_products(code.logical_matrix, residual_x, residual_z)
    # X part only → 1, Z part only → 2, both → 3
    return flips[..., 0] + 2 * flips[..., 1]


def decode_cycle(code, error):
    if error.n != code.n:
        raise ValueError(f"error acts on {error.n} qubits, code has {code.n}")
    return VERDICT_CODES[int(decode_batch(code, error.x[None, :], error.z[None, :])[0])]
