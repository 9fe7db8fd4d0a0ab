"""Independent reference computations used only by the tests.

Nothing here imports the package's numerical code: partial traces are done
with explicit basis loops, logarithms with scipy.linalg.logm, norms with power
iteration or scipy's SVD.
"""

import itertools
import math

import numpy as np
import scipy.linalg


def power_iteration_norm(m, iters=2000, seed=1):
    rng = np.random.default_rng(seed)
    m = np.asarray(m, dtype=complex)
    v = rng.standard_normal(m.shape[1]) + 1j * rng.standard_normal(m.shape[1])
    v /= np.linalg.norm(v)
    gram = m.conj().T @ m
    for _ in range(iters):
        w = gram @ v
        v = w / np.linalg.norm(w)
    return math.sqrt(abs(np.vdot(v, gram @ v)))


def svd_norm(m):
    return float(scipy.linalg.svdvals(np.asarray(m, dtype=complex))[0])


def loop_partial_trace(rho, dims, keep):
    """Reduce ``rho`` to the subsystems in ``keep`` by summing basis matrix elements."""
    keep = sorted(keep)
    n = len(dims)
    kd = [dims[k] for k in keep]
    traced = [k for k in range(n) if k not in keep]
    td = [dims[k] for k in traced]
    out = np.zeros((math.prod(kd), math.prod(kd)), dtype=complex)

    def index(kept_idx, traced_idx):
        full = [0] * n
        for k, v in zip(keep, kept_idx):
            full[k] = v
        for k, v in zip(traced, traced_idx):
            full[k] = v
        return int(np.ravel_multi_index(full, dims))

    kept_range = list(itertools.product(*[range(x) for x in kd]))
    traced_range = list(itertools.product(*[range(x) for x in td]))
    for a, ka in enumerate(kept_range):
        for b, kb in enumerate(kept_range):
            out[a, b] = sum(rho[index(ka, t), index(kb, t)] for t in traced_range)
    return out


def logm_entropy(rho, base=2.0):
    """``-Tr rho log rho`` via the matrix logarithm (full-rank inputs only)."""
    val = -np.trace(rho @ scipy.linalg.logm(rho)).real
    return val / math.log(base)


def eig_entropy(rho, base=2.0):
    lam = np.linalg.eigvalsh(rho)
    lam = lam[lam > 1e-14]
    return float(-np.sum(lam * np.log(lam)) / math.log(base))


def brute_i3(rho, dims, entropy=logm_entropy):
    """Seven-entropy I3 of a 3-party density with loop partial traces."""
    s = {}
    for keep in [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2)]:
        s[keep] = entropy(loop_partial_trace(rho, dims, keep))
    s[(0, 1, 2)] = entropy(rho)
    return (s[(0,)] + s[(1,)] + s[(2,)] - s[(0, 1)] - s[(0, 2)] - s[(1, 2)] + s[(0, 1, 2)])


def schmidt_reduced(psi, da, db):
    """Reduced states of a bipartite pure state from its SVD."""
    u, s, vh = np.linalg.svd(np.asarray(psi).reshape(da, db), full_matrices=False)
    rho_a = (u * s**2) @ u.conj().T
    v = vh.conj().T
    rho_b = (v.conj() * s**2) @ v.T
    return rho_a, rho_b


def qubit_log(m):
    """Natural log of a 2x2 positive definite Hermitian matrix, closed form."""
    tr = np.trace(m).real
    det = np.linalg.det(m).real
    disc = math.sqrt(max(tr * tr / 4 - det, 0.0))
    lp, lm = tr / 2 + disc, tr / 2 - disc
    if disc < 1e-15:
        return np.eye(2) * math.log(lp)
    pp = (m - lm * np.eye(2)) / (lp - lm)
    pm = (lp * np.eye(2) - m) / (lp - lm)
    return math.log(lp) * pp + math.log(lm) * pm


def qubit_relative_entropy_bits(rho, sigma):
    return float(np.trace(rho @ (qubit_log(rho) - qubit_log(sigma))).real / math.log(2))


def ginibre(rng, n, m=None):
    m = n if m is None else m
    return (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / math.sqrt(2)


def hs_density(rng, n):
    g = ginibre(rng, n)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def shift_kets(d, k1, k2):
    """Basis of the shift code written out ket by ket."""
    vecs = np.zeros((d, d**3), dtype=complex)
    for i in range(d):
        for s in range(d):
            idx = (s * d + (s + k1 * i) % d) * d + (s + k2 * i) % d
            vecs[i, idx] += 1 / math.sqrt(d)
    return vecs


def purified_i3_from_basis(basis, secret, dims, entropy=eig_entropy):
    """I3 of ``sum rho_ij |i~><j~|`` computed from the raw basis with loop traces."""
    rho = basis.T @ secret @ basis.conj()
    return brute_i3(rho, dims, entropy)
