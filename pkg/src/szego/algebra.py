"""Riemann matrices, theta characteristics and truncation policies."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ImaginaryPartNotPositiveDefinite, InvalidInput, NonFinite, NotSymmetric

MAX_GENUS = 6


@dataclass(frozen=True, eq=False)
class RiemannMatrix:
    """Symmetric complex matrix with positive-definite imaginary part.

    Build through :func:`validate_riemann_matrix`; the constructor does not
    re-check the invariants.
    """

    entries: np.ndarray

    @property
    def genus(self) -> int:
        return self.entries.shape[0]

    @property
    def imag(self) -> np.ndarray:
        return self.entries.imag

    @property
    def scalar(self) -> complex:
        """The modulus of a genus-1 matrix."""
        if self.genus != 1:
            raise InvalidInput(f"expected genus 1, got genus {self.genus}")
        return complex(self.entries[0, 0])

    def min_imag_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.imag)[0])

    def __eq__(self, other):
        if not isinstance(other, RiemannMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash(self.entries.tobytes())

    def __repr__(self):
        return f"RiemannMatrix({self.entries.tolist()!r})"


def validate_riemann_matrix(entries) -> RiemannMatrix:
    """Validate a candidate period matrix.

    Accepts a scalar (genus 1) or a square array-like. Symmetry is checked
    exactly on the stored values and positive-definiteness of the imaginary
    part by attempting a Cholesky factorization.
    """
    if isinstance(entries, RiemannMatrix):
        return entries
    arr = np.array(entries, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise InvalidInput(f"Riemann matrix must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFinite("Riemann matrix has non-finite entries")
    if not np.array_equal(arr, arr.T):
        raise NotSymmetric("Riemann matrix is not symmetric")
    try:
        np.linalg.cholesky(arr.imag)
    except np.linalg.LinAlgError:
        raise ImaginaryPartNotPositiveDefinite(
            "imaginary part of the Riemann matrix is not positive definite"
        ) from None
    arr.setflags(write=False)
    return RiemannMatrix(arr)


@dataclass(frozen=True)
class ThetaCharacteristic:
    """Half-integer characteristic ``(a, b)``, entries in {0, 1/2}."""

    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]

    def __post_init__(self):
        a = tuple(Fraction(v) for v in self.a)
        b = tuple(Fraction(v) for v in self.b)
        if len(a) != len(b) or not a:
            raise InvalidInput("characteristic vectors must be non-empty and of equal length")
        for v in a + b:
            if v not in (0, Fraction(1, 2)):
                raise InvalidInput(f"characteristic entries must be 0 or 1/2, got {v}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def zero(cls, genus: int) -> ThetaCharacteristic:
        return cls((0,) * genus, (0,) * genus)

    @property
    def genus(self) -> int:
        return len(self.a)

    @property
    def parity(self) -> str:
        return parity(self)

    @property
    def is_odd(self) -> bool:
        return parity(self) == "odd"

    def a_array(self) -> np.ndarray:
        return np.array([float(v) for v in self.a])

    def b_array(self) -> np.ndarray:
        return np.array([float(v) for v in self.b])


ODD_GENUS_ONE = ThetaCharacteristic((Fraction(1, 2),), (Fraction(1, 2),))


def parity(char: ThetaCharacteristic) -> str:
    """Return ``"even"`` or ``"odd"`` according to ``4 a.b mod 2``."""
    dot = sum(4 * x * y for x, y in zip(char.a, char.b))
    return "odd" if int(dot) % 2 else "even"


def enumerate_characteristics(g: int, max_genus: int = MAX_GENUS) -> list[ThetaCharacteristic]:
    """All ``4**g`` half-integer characteristics of genus ``g``."""
    if g < 1:
        raise InvalidInput("genus must be at least 1")
    if g > max_genus:
        raise InvalidInput(f"genus {g} exceeds enumeration cap {max_genus}")
    half = (Fraction(0), Fraction(1, 2))
    vectors = list(itertools.product(half, repeat=g))
    return [ThetaCharacteristic(a, b) for a in vectors for b in vectors]


@dataclass(frozen=True)
class TruncationPolicy:
    """Absolute error target for theta sums and a hard lattice-radius cap."""

    target_tolerance: float = 1e-16
    max_radius: int = 60
    divisor_epsilon: float = field(default=1e-8)

    def __post_init__(self):
        if not (self.target_tolerance > 0 and np.isfinite(self.target_tolerance)):
            raise InvalidInput("target_tolerance must be positive")
        if int(self.max_radius) != self.max_radius or self.max_radius < 1:
            raise InvalidInput("max_radius must be an integer >= 1")
        if not self.divisor_epsilon > 0:
            raise InvalidInput("divisor_epsilon must be positive")


DEFAULT_POLICY = TruncationPolicy()
