"""
Phase-space models: points, signed distributions, Bloch vectors and 2x2 states
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np


def _frozen(values, dtype=float, shape=None) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    if shape is not None and arr.shape != shape:
        raise ValueError(f"Expected shape {shape}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PhaseSpacePoint:
    """One of the eight joint outcome assignments in {+1, -1}^3."""
    index: int
    signs: Tuple[int, int, int]

    @classmethod
    def from_index(cls, index: int) -> 'PhaseSpacePoint':
        """Point n (1-based); bit i-1 of n-1 set means direction i reads -1."""
        if not 1 <= index <= 8:
            raise ValueError(f"Phase-space index must be in 1..8, got {index}")
        signs = tuple(-1 if (index - 1) >> bit & 1 else 1 for bit in range(3))
        return cls(index=index, signs=signs)

    @property
    def column(self) -> Tuple[int, int, int, int]:
        """Column of the representation matrix belonging to this point."""
        return self.signs + (1,)

    def __repr__(self):
        label = ''.join('+' if s > 0 else '-' for s in self.signs)
        return f'<PhaseSpacePoint {self.index}: {label}>'


@dataclass(frozen=True, eq=False)
class RepresentationMatrix:
    """The 4x8 matrix A with rows e_n(1), e_n(2), e_n(3) and all ones."""
    A: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'A', _frozen(self.A, dtype=np.int64, shape=(4, 8)))

    @property
    def gram(self) -> np.ndarray:
        """A A^T in integer arithmetic."""
        return self.A @ self.A.T

    def as_float(self) -> np.ndarray:
        return self.A.astype(float)


@dataclass(frozen=True, eq=False)
class SignedDistribution:
    """Eight real weights on phase space; any sign, normalization checked by the services."""
    q: np.ndarray

    def __post_init__(self):
        arr = _frozen(self.q, shape=(8,))
        if not np.all(np.isfinite(arr)):
            raise ValueError("Signed distribution entries must be finite")
        object.__setattr__(self, 'q', arr)

    @classmethod
    def uniform(cls) -> 'SignedDistribution':
        return cls(np.full(8, 0.125))

    @classmethod
    def point_mass(cls, index: int) -> 'SignedDistribution':
        q = np.zeros(8)
        q[index - 1] = 1.0
        return cls(q)

    @property
    def total(self) -> float:
        return float(np.sum(self.q))

    @property
    def is_nonnegative(self) -> bool:
        return bool(np.all(self.q >= 0.0))

    def norm(self, p: float) -> float:
        return float(np.sum(np.abs(self.q) ** p) ** (1.0 / p))

    def to_list(self):
        return [float(x) for x in self.q]

    def __repr__(self):
        return f'<SignedDistribution {np.array2string(self.q, precision=6)}>'


@dataclass(frozen=True, eq=False)
class BlochVector:
    """Expectation values (r1, r2, r3) of a potential quantum state."""
    r: np.ndarray

    def __post_init__(self):
        arr = _frozen(self.r, shape=(3,))
        if not np.all(np.isfinite(arr)):
            raise ValueError("Bloch vector entries must be finite")
        object.__setattr__(self, 'r', arr)

    @classmethod
    def of(cls, values: Sequence[float]) -> 'BlochVector':
        return values if isinstance(values, cls) else cls(values)

    @property
    def hat(self) -> np.ndarray:
        """Augmented vector (r1, r2, r3, 1)."""
        return np.append(self.r, 1.0)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.r))

    @property
    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self.r)))

    def scaled(self, rho: float) -> 'BlochVector':
        return BlochVector(rho * self.r)

    def to_list(self):
        return [float(x) for x in self.r]

    def __repr__(self):
        return f'<BlochVector ({self.r[0]:.6g}, {self.r[1]:.6g}, {self.r[2]:.6g})>'


@dataclass(frozen=True, eq=False)
class HermitianState:
    """A 2x2 complex matrix; Hermiticity and unit trace are checked by the services."""
    M: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'M', _frozen(self.M, dtype=complex, shape=(2, 2)))

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.M))

    def __repr__(self):
        return f'<HermitianState {np.array2string(self.M, precision=6)}>'
