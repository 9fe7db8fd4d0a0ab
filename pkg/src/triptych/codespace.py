"""Code spaces inside P1 (x) P2 (x) P3: constructors, encoding and erasure recovery.

A code space is fixed by a tensor ``t``; its basis vectors are

    |i~> = d1**-0.5 * sum_{s1,s2,s3} t[i, s1, s2, s3] |s1 s2 s3>

and the candidate recovery map for an erased party ``P_a`` is the folding
``fold(t, P_a)``, which takes ``|i>_R |s>_{P_a'}`` to the surviving pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConstructionError, RecoveryImpossible, ValidationError
from .infotheory import DensityMatrix, PureState, fidelity, partial_trace
from .tensor_core import DEFAULT_TOL, LEGS, Tensor4, fold, leg_name, unitarity

ORTHONORMAL_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class CodeSpace:
    tensor: Tensor4
    basis: np.ndarray  # shape (r, d1*d2*d3), rows are the |i~>

    @property
    def party_dims(self) -> tuple[int, int, int, int]:
        return self.tensor.dims

    @property
    def r(self) -> int:
        return self.tensor.dims[0]

    @property
    def d(self) -> int:
        """Common party dimension; only meaningful for uniform dims."""
        if not self.tensor.is_uniform:
            raise ValidationError(f"dims {self.tensor.dims} are not uniform")
        return self.tensor.dims[0]

    @property
    def parties(self) -> tuple[tuple[str, int], ...]:
        r, d1, d2, d3 = self.tensor.dims
        return (("R", r), ("P1", d1), ("P2", d2), ("P3", d3))

    def encode(self, secret) -> DensityMatrix:
        """``sum_ij rho_ij |i~><j~|`` on P1 P2 P3."""
        rho = _secret_matrix(secret, self.r)
        return DensityMatrix(self.parties[1:], self.basis.T @ rho @ self.basis.conj())


def from_tensor(t: Tensor4, tol: float = ORTHONORMAL_TOL) -> CodeSpace:
    r, d1, d2, d3 = t.dims
    basis = t.coeffs.reshape(r, d1 * d2 * d3) / math.sqrt(d1)
    gram = basis.conj() @ basis.T
    deviation = float(np.max(np.abs(gram - np.eye(r))))
    if deviation > tol:
        raise ConstructionError(
            f"code-space basis is not orthonormal (Gram deviation {deviation:.3g})",
            gram_deviation=deviation,
        )
    return CodeSpace(t, basis)


def _as_permutation(sigma, d: int) -> np.ndarray:
    p = np.asarray(sigma, dtype=int).ravel()
    if p.size != d or sorted(p.tolist()) != list(range(d)):
        raise ValidationError(f"{list(np.asarray(sigma).ravel())} is not a permutation of 0..{d - 1}")
    return p


def _power(p: np.ndarray, k: int) -> np.ndarray:
    out = np.arange(p.size)
    for _ in range(k):
        out = p[out]
    return out


def permutation_code(d: int, sigmas: Sequence) -> Tensor4:
    """Tensor of ``|i~> = d**-0.5 sum_s |sigma1^p(s), sigma2^p(s), sigma3^p(s)>``.

    Basis element ``i`` uses the power ``p = i`` for ``i >= 1`` and ``p = d``
    for ``i = 0``, so the exponents run over 1..d.
    """
    if d < 1:
        raise ValidationError("d must be positive")
    if len(sigmas) != 3:
        raise ValidationError("need exactly three permutations")
    perms = [_as_permutation(s, d) for s in sigmas]
    t = np.zeros((d, d, d, d), dtype=complex)
    for i in range(d):
        p = i if i else d
        images = [_power(sigma, p) for sigma in perms]
        for s in range(d):
            t[i, images[0][s], images[1][s], images[2][s]] += 1.0
    return Tensor4(t)


@dataclass(frozen=True)
class Ortho2Result:
    ok: bool
    violation: tuple[int, int, int, int] | None = None  # (a, b, i, s), parties 1-based

    def __bool__(self):
        return self.ok


def check_ortho2(d: int, sigmas: Sequence) -> Ortho2Result:
    """Check ``sigma_a^i(s) != sigma_b^i(s)`` for all a < b, 1 <= i <= d-1 and all s."""
    perms = [_as_permutation(s, d) for s in sigmas]
    for i in range(1, d):
        powers = [_power(p, i) for p in perms]
        for a in range(3):
            for b in range(a + 1, 3):
                clash = np.nonzero(powers[a] == powers[b])[0]
                if clash.size:
                    return Ortho2Result(False, (a + 1, b + 1, i, int(clash[0])))
    return Ortho2Result(True)


def shift_permutation(d: int, k: int) -> list[int]:
    return [(s + k) % d for s in range(d)]


def shift_is_perfect(d: int, k1: int, k2: int) -> bool:
    """Whether the shift code is a ((2,3)) scheme.

    The P1, P2 and P3 foldings are permutations exactly when ``k2 - k1``,
    ``k2`` and ``k1`` are units mod d. For even d, ``k1 - k2`` is even whenever
    both are odd, so no shift code is perfect.
    """
    return all(math.gcd(k, d) == 1 for k in (k1, k2, k1 - k2))


def shift_code(d: int, k1: int, k2: int) -> Tensor4:
    """``|i~> = d**-0.5 sum_s |s, s + k1 i, s + k2 i>`` (mod d).

    Requires k1, k2 coprime with d and distinct mod d, which makes the basis
    orthonormal; see :func:`shift_is_perfect` for when the code is perfect.
    """
    if d < 2:
        raise ValidationError("d must be at least 2")
    if math.gcd(k1, d) != 1:
        raise ValidationError(f"k1 not coprime with d (gcd({k1}, {d}) = {math.gcd(k1, d)})")
    if math.gcd(k2, d) != 1:
        raise ValidationError(f"k2 not coprime with d (gcd({k2}, {d}) = {math.gcd(k2, d)})")
    if (k1 - k2) % d == 0:
        raise ValidationError(f"k1 and k2 must differ mod d (k1={k1}, k2={k2}, d={d})")
    t = np.zeros((d, d, d, d), dtype=complex)
    s = np.arange(d)
    for i in range(d):
        t[i, s, (s + k1 * i) % d, (s + k2 * i) % d] = 1.0
    return Tensor4(t)


def vip_code(d: int) -> Tensor4:
    """``t[i, j, k, l] = d**-0.5 * <j| X^k Z^l |i> = d**-0.5 * w**(i l) [j == i + k]``."""
    if d < 2:
        raise ValidationError("d must be at least 2")
    omega = np.exp(2j * np.pi / d)
    t = np.zeros((d, d, d, d), dtype=complex)
    i = np.arange(d)[:, None]
    l = np.arange(d)[None, :]
    phases = omega ** ((i * l) % d) / math.sqrt(d)
    for ii in range(d):
        for k in range(d):
            t[ii, (ii + k) % d, k, :] = phases[ii]
    return Tensor4(t)


def tensor_from_kets(d: int, kets: Sequence[Sequence[str]]) -> Tensor4:
    """Tensor for ``|i~> = d**-0.5 sum`` of the digit strings in ``kets[i]``."""
    t = np.zeros((len(kets), d, d, d), dtype=complex)
    for i, terms in enumerate(kets):
        for term in terms:
            s1, s2, s3 = (int(ch) for ch in term)
            t[i, s1, s2, s3] += 1.0
    return Tensor4(t)


# the classic qutrit ((2,3)) scheme; the last ket of |2~> is 210
QUTRIT_KETS = (("000", "111", "222"), ("012", "120", "201"), ("021", "102", "210"))


def qutrit_code() -> Tensor4:
    return tensor_from_kets(3, QUTRIT_KETS)


def _secret_matrix(secret, r: int) -> np.ndarray:
    m = secret.matrix if isinstance(secret, DensityMatrix) else np.asarray(secret, dtype=complex)
    if m.shape != (r, r):
        raise ValidationError(f"secret must be {r}x{r}, got {m.shape}")
    return m


def _check_secret(secret, r: int) -> DensityMatrix:
    if isinstance(secret, DensityMatrix):
        rho = secret
        if rho.dim != r:
            raise ValidationError(f"secret must be {r}x{r}, got {rho.dim}")
        return rho.validate()
    try:
        return DensityMatrix.from_matrix(_secret_matrix(secret, r))
    except ValidationError:
        raise
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def purify(cs: CodeSpace, secret) -> PureState:
    """Purification ``sum_k sqrt(lam_k) |conj psi_k>_R |psi_k~>`` on R P1 P2 P3.

    The reference holds the complex conjugate of the secret, so the result is
    ``(sqrt(rho)^T (x) 1)`` applied to the unnormalized maximally entangled
    vector and does not depend on the eigenbasis chosen inside degenerate
    eigenspaces. The uniform secret gives ``r**-0.5 sum_i |i>|i~>``.
    """
    rho = _check_secret(secret, cs.r)
    evals, vecs = np.linalg.eigh(rho.matrix)
    evals = np.clip(evals, 0.0, None)
    root = (vecs * np.sqrt(evals)) @ vecs.conj().T  # sqrt(rho)
    # amplitude[a, x] = sum_j root[j, a] * basis[j, x]
    amps = root.T @ cs.basis
    amps = amps / np.linalg.norm(amps)
    return PureState(cs.parties, amps.ravel())


def uniform_purification(cs: CodeSpace) -> PureState:
    return PureState(cs.parties, cs.basis.ravel() / math.sqrt(cs.r))


def recovery_unitaries(t: Tensor4) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Candidate decoders ``U_a = fold(t, P_a)``; unitarity is not checked here."""
    return tuple(fold(t, leg) for leg in LEGS)


@dataclass(frozen=True)
class RecoveryResult:
    erased: str
    recovered_secret: DensityMatrix  # on the output register R
    ancilla_state: DensityMatrix  # on P_a' P_a
    fidelity: float
    residual: float  # unitarity deviation of the decoder

    @property
    def ancilla_marginal(self) -> DensityMatrix:
        """State left on the erased party, ``Tr_{P_a'} |chi_a><chi_a|``."""
        return partial_trace(self.ancilla_state, [self.erased])

    def to_json(self) -> dict:
        m = self.recovered_secret.matrix
        return {
            "status": "recovered",
            "erased": self.erased,
            "fidelity": self.fidelity,
            "unitarity_deviation": self.residual,
            "recovered_secret": {"re": m.real.tolist(), "im": m.imag.tolist()},
        }


def _survivors(erased: str) -> tuple[str, str]:
    return tuple(p for p in LEGS if p != erased)


def apply_decoder(cs: CodeSpace, encoded: DensityMatrix, erased, u: np.ndarray | None = None) -> DensityMatrix:
    """Apply ``U_a^dagger`` to the surviving pair of ``encoded``; no unitarity check.

    Returns the (possibly unnormalized, for a non-unitary decoder) operator on
    ``R, P_a', P_a`` as a raw array of shape (r*d_a*d_a, r*d_a*d_a).
    """
    erased = leg_name(erased)
    a = LEGS.index(erased)
    dims = list(cs.tensor.dims[1:])
    b, c = [k for k in range(3) if k != a]
    if u is None:
        u = fold(cs.tensor, erased)
    r, da = cs.r, dims[a]
    rho = encoded.matrix.reshape(dims + dims)
    # reorder to (b, c, a) on both sides
    rho = rho.transpose(b, c, a, 3 + b, 3 + c, 3 + a).reshape(dims[b] * dims[c], da, dims[b] * dims[c], da)
    ud = u.conj().T
    n_in = rho.shape[0]
    half = (ud @ rho.reshape(n_in, -1)).reshape(ud.shape[0], da, n_in, da)
    out = np.tensordot(half, ud.conj(), axes=([2], [1])).transpose(0, 1, 3, 2)
    return out.reshape(r * da * da, r * da * da)


def recover(cs: CodeSpace, secret, erased, tol: float = DEFAULT_TOL) -> RecoveryResult:
    """Encode ``secret``, erase one party and decode with ``U_a^dagger`` on the other two."""
    if not cs.tensor.is_uniform:
        raise ValidationError(f"recovery needs uniform dims, got {cs.tensor.dims}")
    erased = leg_name(erased)
    rho = _check_secret(secret, cs.r)
    u = fold(cs.tensor, erased)
    check = unitarity(u, tol)
    if not check.is_unitary:
        raise RecoveryImpossible(erased, check.deviation)
    d = cs.d
    out = apply_decoder(cs, cs.encode(rho), erased, u)
    out = DensityMatrix((("R", cs.r), (erased + "'", d), (erased, d)), out)
    recovered = partial_trace(out, ["R"])
    ancilla = partial_trace(out, [erased + "'", erased])
    return RecoveryResult(erased, recovered, ancilla, fidelity(recovered, rho), check.deviation)


def format_kets(cs: CodeSpace, max_terms: int = 64) -> list[str]:
    """Human-readable basis, e.g. ``|1~> = 0.57735 (|012> + |120> + |201>)``."""
    _, d1, d2, d3 = cs.tensor.dims
    lines = []
    for i, vec in enumerate(cs.basis):
        nz = np.nonzero(np.abs(vec) > 1e-12)[0]
        amps = vec[nz]
        labels = [f"{x // (d2 * d3)}{(x // d3) % d2}{x % d3}" for x in nz]
        if np.allclose(amps, amps[0], atol=1e-12):
            body = " + ".join(f"|{s}>" for s in labels[:max_terms])
            lines.append(f"|{i}~> = {amps[0].real:.5g} ({body})" if abs(amps[0].imag) < 1e-12
                         else f"|{i}~> = ({amps[0]:.5g}) ({body})")
        else:
            body = " + ".join(f"({a:.4g})|{s}>" for a, s in zip(amps[:max_terms], labels))
            lines.append(f"|{i}~> = {body}")
    return lines
