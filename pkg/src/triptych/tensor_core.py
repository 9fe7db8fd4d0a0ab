"""Four-leg coefficient tensors and their three matrix foldings.

A tensor ``t[i, s1, s2, s3]`` is stored as a complex array of shape
``(r, d1, d2, d3)``; flattening it row-major gives the composite order
``((i*d1 + s1)*d2 + s2)*d3 + s3`` used by every module and by the JSON format.

Folding along leg ``a`` produces the matrix that sends ``|i, s_a>`` to the two
remaining legs ``|s_b, s_c>`` (b < c)::

    P1 -> rows (s2, s3), cols (i, s1)
    P2 -> rows (s1, s3), cols (i, s2)
    P3 -> rows (s1, s2), cols (i, s3)
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

LEGS = ("P1", "P2", "P3")
DEFAULT_TOL = 1e-9

# axes of t moved to (row_b, row_c, i, s_a) order before reshaping
_FOLD_AXES = {
    "P1": (2, 3, 0, 1),
    "P2": (1, 3, 0, 2),
    "P3": (1, 2, 0, 3),
}


def leg_name(leg) -> str:
    """Normalize a leg given as ``"P2"``, ``"p2"`` or ``2``."""
    if isinstance(leg, (int, np.integer)) and 1 <= int(leg) <= 3:
        return f"P{int(leg)}"
    if isinstance(leg, str) and leg.upper() in LEGS:
        return leg.upper()
    raise DimensionError(f"unknown leg {leg!r}; expected one of {LEGS}")


@dataclass(frozen=True, eq=False)
class Tensor4:
    """Complex coefficients ``t[i, s1, s2, s3]`` of a code space."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 4 or min(c.shape) < 1:
            raise DimensionError(f"expected a non-empty 4-leg array, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise DimensionError("tensor entries must be finite")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_flat(cls, dims, values) -> Tensor4:
        dims = tuple(int(x) for x in dims)
        if len(dims) != 4 or min(dims) < 1:
            raise DimensionError(f"dims must be four positive integers, got {dims}")
        values = np.asarray(values, dtype=complex).ravel()
        if values.size != math.prod(dims):
            raise DimensionError(
                f"{values.size} coefficients do not fill dims {dims} ({math.prod(dims)} expected)"
            )
        return cls(values.reshape(dims))

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return tuple(int(x) for x in self.coeffs.shape)

    @property
    def is_uniform(self) -> bool:
        return len(set(self.dims)) == 1

    def flat(self) -> np.ndarray:
        return self.coeffs.ravel()

    def allclose(self, other: Tensor4, atol: float = 1e-12) -> bool:
        return self.dims == other.dims and np.allclose(self.coeffs, other.coeffs, rtol=0, atol=atol)

    def to_json(self) -> dict:
        flat = self.flat()
        return {
            "dims": list(self.dims),
            "re": [float(x) for x in flat.real],
            "im": [float(x) for x in flat.imag],
        }

    @classmethod
    def from_json(cls, payload) -> Tensor4:
        if isinstance(payload, str):
            payload = json.loads(payload)
        try:
            dims, re, im = payload["dims"], payload["re"], payload["im"]
        except (KeyError, TypeError) as exc:
            raise DimensionError(f"tensor JSON needs dims/re/im fields: {exc}") from None
        if len(re) != len(im):
            raise DimensionError("re and im arrays differ in length")
        return cls.from_flat(dims, np.asarray(re, float) + 1j * np.asarray(im, float))


def fold(t: Tensor4, leg) -> np.ndarray:
    """Matrix of ``t`` mapping ``(i, s_a)`` to the other two legs. Pure index permutation."""
    leg = leg_name(leg)
    axes = _FOLD_AXES[leg]
    shape = t.dims
    rows = shape[axes[0]] * shape[axes[1]]
    cols = shape[axes[2]] * shape[axes[3]]
    return np.ascontiguousarray(t.coeffs.transpose(axes)).reshape(rows, cols)


def unfold(m, leg, dims) -> Tensor4:
    """Inverse of :func:`fold` for a tensor of shape ``dims``."""
    leg = leg_name(leg)
    dims = tuple(int(x) for x in dims)
    axes = _FOLD_AXES[leg]
    m = np.asarray(m, dtype=complex)
    target = tuple(dims[a] for a in axes)
    if m.shape != (target[0] * target[1], target[2] * target[3]):
        raise DimensionError(f"matrix shape {m.shape} does not match leg {leg} of dims {dims}")
    inverse = np.argsort(axes)
    return Tensor4(m.reshape(target).transpose(inverse))


def operator_norm(m, hermitian: bool = False) -> float:
    """Largest singular value, from the top eigenvalue of ``m^dagger m``.

    With ``hermitian=True`` the caller guarantees ``m == m^dagger`` and the
    norm is read off the spectrum of ``m`` itself.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.size == 0:
        raise DimensionError(f"operator norm needs a non-empty matrix, got shape {m.shape}")
    if hermitian:
        evals = np.linalg.eigvalsh(m)
        return float(max(abs(evals[0]), abs(evals[-1])))
    # rescale so the Gram matrix neither underflows nor overflows
    scale = float(np.max(np.abs(m)))
    if scale == 0.0:
        return 0.0
    m = m / scale
    # work with the smaller Gram matrix
    gram = m.conj().T @ m if m.shape[1] <= m.shape[0] else m @ m.conj().T
    top = np.linalg.eigvalsh(gram)[-1]
    return scale * math.sqrt(max(float(top), 0.0))


@dataclass(frozen=True)
class UnitarityResidual:
    """How far a matrix is from unitary, in operator norm of ``M^dagger M - 1``.

    Non-square matrices get ``deviation = inf`` and ``square = False``; their
    operator ``norm`` is still recorded.
    """

    deviation: float
    is_unitary: bool
    tol: float
    norm: float
    square: bool = True

    def to_json(self) -> dict:
        return {
            "deviation": self.deviation if math.isfinite(self.deviation) else None,
            "is_unitary": self.is_unitary,
            "tol": self.tol,
            "norm": self.norm,
            "square": self.square,
        }


def unitarity(m, tol: float = DEFAULT_TOL) -> UnitarityResidual:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.size == 0:
        raise DimensionError(f"unitarity needs a non-empty square matrix, got shape {m.shape}")
    deviation = operator_norm(m.conj().T @ m - np.eye(m.shape[0]), hermitian=True)
    return UnitarityResidual(deviation, deviation <= tol, tol, operator_norm(m))


def multiunitarity_report(t: Tensor4, tol: float = DEFAULT_TOL) -> tuple[UnitarityResidual, ...]:
    """Unitarity residuals of the P1, P2 and P3 foldings, in that order."""
    out = []
    for leg in LEGS:
        m = fold(t, leg)
        if m.shape[0] == m.shape[1]:
            out.append(unitarity(m, tol))
        else:
            out.append(UnitarityResidual(math.inf, False, tol, operator_norm(m), square=False))
    return tuple(out)
