"""Density-matrix calculus on labelled parties.

States carry an ordered tuple of ``(label, dim)`` pairs. Everything built by
the toolkit uses the global order ``R, P1, P2, P3``; reduced states keep the
order of the parent state.

Entropies are returned as plain floats in the requested ``base``
(``"bits"`` or ``"nats"``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InconsistencyError, InvalidDensityError, ValidationError

GLOBAL_ORDER = ("R", "P1", "P2", "P3")
EIG_CLIP = 1e-12
NEG_TOL = 1e-9
HERM_TOL = 1e-10
TRACE_TOL = 1e-9
I3_FORMS_TOL = 1e-8


def _log(base: str):
    if base == "bits":
        return np.log2
    if base == "nats":
        return np.log
    raise ValidationError(f"base must be 'bits' or 'nats', got {base!r}")


def log_base(x: float, base: str = "bits") -> float:
    return float(_log(base)(x))


def _check_parties(parties) -> tuple[tuple[str, int], ...]:
    parties = tuple((str(name), int(dim)) for name, dim in parties)
    names = [p[0] for p in parties]
    if len(set(names)) != len(names):
        raise ValidationError(f"duplicate party labels in {names}")
    if any(dim < 1 for _, dim in parties):
        raise ValidationError(f"party dimensions must be positive: {parties}")
    return parties


@dataclass(frozen=True, eq=False)
class PureState:
    parties: tuple[tuple[str, int], ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        parties = _check_parties(self.parties)
        amps = np.asarray(self.amplitudes, dtype=complex).ravel()
        if amps.size != math.prod(d for _, d in parties):
            raise ValidationError(f"{amps.size} amplitudes do not match parties {parties}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1) > 1e-12:
            raise ValidationError(f"state norm is {norm!r}, expected 1")
        object.__setattr__(self, "parties", parties)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(p[0] for p in self.parties)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(p[1] for p in self.parties)

    def density(self) -> DensityMatrix:
        return DensityMatrix(self.parties, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian unit-trace matrix on labelled parties.

    Construction checks shape, Hermiticity and trace. Positivity needs an
    eigendecomposition and is checked by :meth:`validate` (and by every
    entropy evaluation).
    """

    parties: tuple[tuple[str, int], ...]
    matrix: np.ndarray

    def __post_init__(self):
        parties = _check_parties(self.parties)
        m = np.asarray(self.matrix, dtype=complex)
        n = math.prod(d for _, d in parties)
        if m.shape != (n, n):
            raise ValidationError(f"matrix shape {m.shape} does not match parties {parties}")
        if not np.all(np.isfinite(m)):
            raise InvalidDensityError("density matrix has non-finite entries")
        herm = np.max(np.abs(m - m.conj().T)) if n else 0.0
        if herm > HERM_TOL:
            raise InvalidDensityError(f"matrix is not Hermitian (deviation {herm:.3g})")
        tr = np.trace(m).real
        if abs(tr - 1) > TRACE_TOL:
            raise InvalidDensityError(f"trace is {tr!r}, expected 1")
        m = (m + m.conj().T) / 2
        object.__setattr__(self, "parties", parties)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_matrix(cls, matrix, parties=None) -> DensityMatrix:
        """Build and fully validate (including positivity)."""
        matrix = np.asarray(matrix, dtype=complex)
        if parties is None:
            parties = (("R", matrix.shape[0]),)
        rho = cls(parties, matrix)
        rho.validate()
        return rho

    @classmethod
    def maximally_mixed(cls, dim: int, label: str = "R") -> DensityMatrix:
        return cls(((label, dim),), np.eye(dim) / dim)

    @classmethod
    def pure(cls, vector, label: str = "R") -> DensityMatrix:
        v = np.asarray(vector, dtype=complex).ravel()
        v = v / np.linalg.norm(v)
        return cls(((label, v.size),), np.outer(v, v.conj()))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(p[0] for p in self.parties)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(p[1] for p in self.parties)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def spectrum(self) -> np.ndarray:
        return _clean_spectrum(np.linalg.eigvalsh(self.matrix))

    def validate(self) -> DensityMatrix:
        self.spectrum()
        return self

    def relabel(self, *labels) -> DensityMatrix:
        if len(labels) != len(self.parties):
            raise ValidationError("relabel needs one label per party")
        return DensityMatrix(tuple(zip(labels, self.dims)), self.matrix)


def _clean_spectrum(evals) -> np.ndarray:
    evals = np.asarray(evals, dtype=float)
    if evals.size and evals.min() < -NEG_TOL:
        raise InvalidDensityError(f"negative eigenvalue {evals.min():.3g}")
    return np.clip(evals, 0.0, None)


def _entropy_from_spectrum(evals, base: str) -> float:
    lam = evals[evals > EIG_CLIP]
    value = -float(np.sum(lam * _log(base)(lam)))
    return max(value, 0.0) if value > -NEG_TOL else value


def _keep_axes(parties, keep) -> list[int]:
    if isinstance(keep, str):
        keep = (keep,)
    keep = list(keep)
    labels = [p[0] for p in parties]
    if not keep:
        raise ValidationError("keep must name at least one party")
    unknown = [k for k in keep if k not in labels]
    if unknown:
        raise ValidationError(f"unknown party labels {unknown}; state has {labels}")
    if len(set(keep)) != len(keep):
        raise ValidationError(f"repeated labels in {keep}")
    return sorted(labels.index(k) for k in keep)


def partial_trace(state, keep) -> DensityMatrix:
    """Reduce ``state`` (pure or mixed) to the parties named in ``keep``.

    The result lists the kept parties in the parent state's order.
    """
    axes = _keep_axes(state.parties, keep)
    dims = [p[1] for p in state.parties]
    n = len(dims)
    rest = [a for a in range(n) if a not in axes]
    kept = tuple(state.parties[a] for a in axes)
    dk = math.prod(dims[a] for a in axes)
    if isinstance(state, PureState):
        psi = state.amplitudes.reshape(dims).transpose(axes + rest).reshape(dk, -1)
        return DensityMatrix(kept, psi @ psi.conj().T)
    rho = state.matrix.reshape(dims + dims)
    perm = axes + rest + [n + a for a in axes] + [n + a for a in rest]
    dr = math.prod(dims[a] for a in rest)
    rho = rho.transpose(perm).reshape(dk, dr, dk, dr)
    return DensityMatrix(kept, np.einsum("ajbj->ab", rho))


def subsystem_spectrum(state, keep) -> np.ndarray:
    """Eigenvalues of the reduced state on ``keep``.

    Pure states use the Schmidt coefficients of the smaller side of the cut.
    """
    if isinstance(state, PureState):
        axes = _keep_axes(state.parties, keep)
        dims = list(state.dims)
        rest = [a for a in range(len(dims)) if a not in axes]
        dk = math.prod(dims[a] for a in axes)
        psi = state.amplitudes.reshape(dims).transpose(axes + rest).reshape(dk, -1)
        s = np.linalg.svd(psi, compute_uv=False)
        return s**2
    return partial_trace(state, keep).spectrum()


def von_neumann_entropy(rho, base: str = "bits") -> float:
    if isinstance(rho, PureState):
        return 0.0
    return _entropy_from_spectrum(rho.spectrum(), base)


def entropy_of(state, parties, base: str = "bits") -> float:
    """Entropy of the reduction of ``state`` to ``parties``."""
    if isinstance(parties, str):
        parties = (parties,)
    if set(parties) == set(state.labels):
        if isinstance(state, PureState):
            return 0.0
        return von_neumann_entropy(state, base)
    return _entropy_from_spectrum(subsystem_spectrum(state, parties), base)


def _as_labels(x) -> tuple[str, ...]:
    return (x,) if isinstance(x, str) else tuple(x)


def mutual_information(state, a, b, base: str = "bits") -> float:
    """``S(A) + S(B) - S(AB)``; tiny negative round-off is clipped to zero."""
    a, b = _as_labels(a), _as_labels(b)
    if set(a) & set(b):
        raise ValidationError(f"party sets {a} and {b} overlap")
    value = entropy_of(state, a, base) + entropy_of(state, b, base) - entropy_of(state, a + b, base)
    return 0.0 if -NEG_TOL <= value < 0 else value


@dataclass(frozen=True)
class TripartiteInfo:
    """I3 from the seven-entropy formula, plus the reference-based form when available."""

    value: float
    base: str
    entropies: dict
    via_reference: float | None = None
    reference_entropy: float | None = None
    reference_mi: tuple[float, float, float] | None = None

    def __float__(self):
        return self.value


_PARTIES3 = ("P1", "P2", "P3")


def tripartite_information(state, base: str = "bits", parties: Sequence[str] = _PARTIES3) -> TripartiteInfo:
    """Tripartite information of ``P1 : P2 : P3``.

    For a pure state that also carries a reference ``R``, the alternative form
    ``-2 S(R) + sum_a I(R, P_a)`` is evaluated and must agree to 1e-8.
    """
    p1, p2, p3 = parties
    combos = [(p1,), (p2,), (p3,), (p1, p2), (p1, p3), (p2, p3), (p1, p2, p3)]
    ent = {"".join(c): entropy_of(state, c, base) for c in combos}
    s = list(ent.values())
    value = s[0] + s[1] + s[2] - s[3] - s[4] - s[5] + s[6]
    if isinstance(state, PureState) and "R" in state.labels and len(state.labels) == 4:
        s_r = entropy_of(state, "R", base)
        mis = tuple(mutual_information(state, "R", p, base) for p in parties)
        alt = -2 * s_r + sum(mis)
        if abs(alt - value) > I3_FORMS_TOL:
            raise InconsistencyError(f"I3 forms disagree: {value!r} vs {alt!r}")
        return TripartiteInfo(value, base, ent, alt, s_r, mis)
    return TripartiteInfo(value, base, ent)


def _support_split(sigma: np.ndarray):
    evals, vecs = np.linalg.eigh(sigma)
    evals = _clean_spectrum(evals)
    on = evals > EIG_CLIP
    return evals, vecs, on


def _matrix(x) -> np.ndarray:
    return x.matrix if isinstance(x, DensityMatrix) else np.asarray(x, dtype=complex)


def relative_entropy(rho, sigma, base: str = "bits") -> float:
    """``Tr rho (log rho - log sigma)``, or ``inf`` if supp(rho) is not inside supp(sigma)."""
    r, s = _matrix(rho), _matrix(sigma)
    if r.shape != s.shape:
        raise ValidationError(f"shape mismatch {r.shape} vs {s.shape}")
    s_evals, s_vecs, on = _support_split(s)
    off = s_vecs[:, ~on]
    if off.size and np.trace(off.conj().T @ r @ off).real >= NEG_TOL:
        return math.inf
    log = _log(base)
    r_evals = np.linalg.eigvalsh(r)
    r_evals = _clean_spectrum(r_evals)
    lam = r_evals[r_evals > EIG_CLIP]
    neg_entropy = float(np.sum(lam * log(lam)))
    v = s_vecs[:, on]
    log_sigma = (v * log(s_evals[on])) @ v.conj().T
    cross = float(np.trace(r @ log_sigma).real)
    return max(neg_entropy - cross, 0.0) if neg_entropy - cross > -NEG_TOL else neg_entropy - cross


def max_relative_entropy(rho, sigma, base: str = "bits") -> float:
    """``inf { lam : rho <= 2**lam sigma }`` via the pseudo-inverse square root of sigma."""
    r, s = _matrix(rho), _matrix(sigma)
    if r.shape != s.shape:
        raise ValidationError(f"shape mismatch {r.shape} vs {s.shape}")
    s_evals, s_vecs, on = _support_split(s)
    off = s_vecs[:, ~on]
    if off.size and np.trace(off.conj().T @ r @ off).real >= NEG_TOL:
        return math.inf
    v = s_vecs[:, on]
    inv_sqrt = (v / np.sqrt(s_evals[on])) @ v.conj().T
    top = np.linalg.eigvalsh(inv_sqrt @ r @ inv_sqrt)[-1]
    if top <= 0:
        return -math.inf
    return log_base(top, base)


def sqrt_psd(m: np.ndarray) -> np.ndarray:
    evals, vecs = np.linalg.eigh(m)
    evals = np.clip(evals, 0.0, None)
    return (vecs * np.sqrt(evals)) @ vecs.conj().T


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity ``(Tr sqrt(sqrt(rho) sigma sqrt(rho)))**2``, clipped to [0, 1]."""
    r, s = _matrix(rho), _matrix(sigma)
    root = sqrt_psd(r)
    inner = np.linalg.eigvalsh(root @ s @ root)
    f = float(np.sum(np.sqrt(np.clip(inner, 0.0, None)))) ** 2
    return min(max(f, 0.0), 1.0)
