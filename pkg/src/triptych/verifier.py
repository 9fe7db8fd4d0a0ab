"""Certify or refute the ((2,3)) threshold property of a code space.

Five routes are run side by side and must agree on uniform dims:

1. I3 of the uniform purification equals ``-2 S(R)``;
2. all three foldings of the tensor are unitary;
3. decoding with ``U_a^dagger`` returns ``rho (x) chi_a`` for every sampled
   secret and every erased party;
4. single-party marginals are maximally mixed and do not depend on the secret;
5. ``I3 = -2 S(rho)`` for every sampled secret.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .codespace import CodeSpace, apply_decoder, purify, recover, uniform_purification
from .errors import RecoveryImpossible
from .infotheory import (
    DensityMatrix,
    entropy_of,
    mutual_information,
    partial_trace,
    tripartite_information,
)
from .tensor_core import DEFAULT_TOL, LEGS, fold, multiunitarity_report, operator_norm

ENTROPY_TOL = 1e-8


def secret_rng(seed, stream: int = 0) -> np.random.Generator:
    """Counter-based generator for secret sampling, one substream per ``stream``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(stream)])))


def hs_random_density(r: int, rng: np.random.Generator) -> DensityMatrix:
    """Hilbert-Schmidt random density ``G G^dagger / Tr G G^dagger``."""
    g = (rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r))) / math.sqrt(2)
    m = g @ g.conj().T
    return DensityMatrix((("R", r),), m / np.trace(m).real)


def random_pure_density(r: int, rng: np.random.Generator) -> DensityMatrix:
    v = rng.standard_normal(r) + 1j * rng.standard_normal(r)
    return DensityMatrix.pure(v)


def basis_density(r: int, k: int) -> DensityMatrix:
    v = np.zeros(r)
    v[k] = 1.0
    return DensityMatrix.pure(v)


def secret_ensemble(r: int, n: int, rng: np.random.Generator) -> list[DensityMatrix]:
    """``n`` secrets: the uniform one, the pure ``|0>``, then Hilbert-Schmidt draws."""
    out = [DensityMatrix.maximally_mixed(r), basis_density(r, 0)]
    out += [hs_random_density(r, rng) for _ in range(max(n - 2, 0))]
    return out[:n] if n >= 1 else out[:1]


@dataclass
class SchemeReport:
    dims: tuple
    tol: float
    entropy_tol: float
    base: str
    n_secrets: int
    seed: int
    i3_value: float
    i3_residual: float
    i3_minimal: bool
    multiunitary: tuple
    recovery_feasible: dict
    recovery_residuals: dict
    recovery_fidelities: dict
    marginal_residuals: dict
    marginal_independence_residual: float
    marginals_ok: bool
    per_secret_i3_residual: float
    per_secret_i3_ok: bool
    routes: dict
    consistent: bool
    verdict: str
    failing_legs: list = field(default_factory=list)

    @property
    def multiunitary_ok(self) -> bool:
        return all(r.is_unitary for r in self.multiunitary)

    def to_json(self) -> dict:
        out = asdict(self)
        out["multiunitary"] = {leg: r.to_json() for leg, r in zip(LEGS, self.multiunitary)}
        out["dims"] = list(self.dims)
        return out


def _verdict(feasible: dict, perfect: bool) -> str:
    if perfect:
        return "perfect"
    n_ok = sum(feasible.values())
    return "imperfect" if 0 < n_ok < len(feasible) else "invalid"


def certify(
    cs: CodeSpace,
    n_secrets: int = 8,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    entropy_tol: float = ENTROPY_TOL,
    base: str = "bits",
) -> SchemeReport:
    """Run all five routes and combine them into a verdict.

    ``tol`` applies to linear-algebra residuals, ``entropy_tol`` to entropy
    identities. ``consistent`` is False when the routes disagree, which for
    uniform dims signals a numerical problem rather than a property of the code.
    """
    rng = secret_rng(seed)
    r = cs.r
    secrets = secret_ensemble(r, max(n_secrets, 3), rng)

    phi = uniform_purification(cs)
    i3 = tripartite_information(phi, base)
    s_r = entropy_of(phi, "R", base)
    i3_residual = abs(i3.value + 2 * s_r)
    i3_minimal = i3_residual <= entropy_tol

    mu = multiunitarity_report(cs.tensor, tol)
    uniform = cs.tensor.is_uniform

    feasible, rec_resid, rec_fid = {}, {}, {}
    marg_resid = {}
    marg_indep = 0.0
    per_secret = 0.0
    encoded = [cs.encode(rho) for rho in secrets]
    for leg, res in zip(LEGS, mu):
        feasible[leg] = bool(res.is_unitary)
        if not uniform:
            rec_resid[leg] = math.inf
            rec_fid[leg] = None
            continue
        d = cs.d
        chi = np.eye(d).ravel() / math.sqrt(d)
        target_anc = np.outer(chi, chi)
        worst = 0.0
        for rho, enc in zip(secrets, encoded):
            out = apply_decoder(cs, enc, leg)
            worst = max(worst, operator_norm(out - np.kron(rho.matrix, target_anc), hermitian=True))
        rec_resid[leg] = worst
        if res.is_unitary:
            rec_fid[leg] = min(recover(cs, rho, leg, tol).fidelity for rho in secrets)
        else:
            rec_fid[leg] = None

    for k, leg in enumerate(LEGS):
        margs = [partial_trace(enc, [leg]).matrix for enc in encoded]
        dk = cs.tensor.dims[k + 1]
        marg_resid[leg] = max(operator_norm(m - np.eye(dk) / dk, hermitian=True) for m in margs)
        marg_indep = max(
            [marg_indep] + [operator_norm(margs[x] - margs[y], hermitian=True) for x in range(len(margs)) for y in range(x)]
        )
    marginals_ok = max(marg_resid.values()) <= tol and marg_indep <= tol

    for rho in secrets:
        phi_k = purify(cs, rho)
        val = tripartite_information(phi_k, base).value
        per_secret = max(per_secret, abs(val + 2 * entropy_of(rho, "R", base)))
    per_secret_ok = per_secret <= entropy_tol

    recovery_ok = uniform and max(rec_resid.values()) <= tol
    routes = {
        "i3_minimal": i3_minimal,
        "multiunitary": all(r.is_unitary for r in mu),
        "recovery": recovery_ok,
        "marginals": marginals_ok,
        "per_secret_i3": per_secret_ok,
    }
    consistent = len(set(routes.values())) == 1
    perfect = all(routes.values())
    return SchemeReport(
        dims=cs.tensor.dims,
        tol=tol,
        entropy_tol=entropy_tol,
        base=base,
        n_secrets=len(secrets),
        seed=seed,
        i3_value=i3.value,
        i3_residual=i3_residual,
        i3_minimal=i3_minimal,
        multiunitary=mu,
        recovery_feasible=feasible,
        recovery_residuals=rec_resid,
        recovery_fidelities=rec_fid,
        marginal_residuals=marg_resid,
        marginal_independence_residual=marg_indep,
        marginals_ok=marginals_ok,
        per_secret_i3_residual=per_secret,
        per_secret_i3_ok=per_secret_ok,
        routes=routes,
        consistent=consistent,
        verdict=_verdict(feasible, perfect),
        failing_legs=[leg for leg in LEGS if not feasible[leg]],
    )


@dataclass
class BoundCheck:
    lower: float
    value: float
    upper: float
    slack_low: float
    slack_high: float
    mutual_info: tuple
    mi_bounds: tuple
    base: str

    @property
    def holds(self) -> bool:
        return (
            self.slack_low >= -ENTROPY_TOL
            and self.slack_high >= -ENTROPY_TOL
            and all(m <= b + ENTROPY_TOL for m, b in zip(self.mutual_info, self.mi_bounds))
        )

    def to_json(self) -> dict:
        out = asdict(self)
        out["holds"] = self.holds
        return out


def norm_bounds(cs: CodeSpace, base: str = "bits") -> tuple[float, float, float]:
    """``2 log ||fold(t, a)||`` for a = P1, P2, P3."""
    log = math.log2 if base == "bits" else math.log
    return tuple(2 * log(operator_norm(fold(cs.tensor, leg))) for leg in LEGS)


def bound_check(cs: CodeSpace, secret, base: str = "bits", _bounds=None) -> BoundCheck:
    """Place I3 of the purified ``secret`` between ``-2 S(R)`` and the folding-norm bound."""
    phi = purify(cs, secret)
    info = tripartite_information(phi, base)
    bounds = _bounds if _bounds is not None else norm_bounds(cs, base)
    lower = -2 * info.reference_entropy
    upper = lower + sum(bounds)
    return BoundCheck(
        lower=lower,
        value=info.value,
        upper=upper,
        slack_low=info.value - lower,
        slack_high=upper - info.value,
        mutual_info=info.reference_mi,
        mi_bounds=bounds,
        base=base,
    )


@dataclass
class VipAudit:
    pairs: dict
    singles: dict
    total_information: float
    singles_below_total: dict
    base: str

    def to_json(self) -> dict:
        return asdict(self)


def vip_audit(cs: CodeSpace, n_secrets: int = 8, seed: int = 0, tol: float = DEFAULT_TOL,
              base: str = "bits") -> VipAudit:
    """Coalition table: which pairs can decode, and how much each single party learns."""
    rng = secret_rng(seed, 1)
    secrets = secret_ensemble(cs.r, max(n_secrets, 3), rng)
    pairs = {}
    for leg in LEGS:
        coalition = "".join(p for p in LEGS if p != leg)
        try:
            worst = min(recover(cs, rho, leg, tol).fidelity for rho in secrets)
            pairs[coalition] = {"erased": leg, "feasible": True, "fidelity": worst,
                                "unitarity_deviation": float(multiunitarity_report(cs.tensor, tol)[LEGS.index(leg)].deviation)}
        except RecoveryImpossible as exc:
            pairs[coalition] = {"erased": leg, "feasible": False, "fidelity": None,
                                "unitarity_deviation": exc.residual}
    phi = uniform_purification(cs)
    singles = {leg: mutual_information(phi, "R", leg, base) for leg in LEGS}
    total = mutual_information(phi, "R", LEGS, base)
    below = {leg: singles[leg] < total - ENTROPY_TOL for leg in LEGS}
    return VipAudit(pairs, singles, total, below, base)


@dataclass
class ProbeResult:
    max_i3: float
    argmax_secret: DensityMatrix
    argmax_kind: str
    n_samples: int
    seed: int
    base: str

    def to_json(self) -> dict:
        m = self.argmax_secret.matrix
        return {
            "max_i3": self.max_i3,
            "argmax_kind": self.argmax_kind,
            "argmax_secret": {"re": m.real.tolist(), "im": m.imag.tolist()},
            "n_samples": self.n_samples,
            "seed": self.seed,
            "base": self.base,
        }


def monogamy_probe(cs: CodeSpace, n_secrets: int = 200, seed: int = 0, base: str = "bits") -> ProbeResult:
    """Largest I3 found over basis states, the uniform secret, random pure and HS secrets.

    Evidence only: a positive maximum would refute ``I3 <= 0`` on this code
    space, a non-positive one proves nothing.
    """
    rng = secret_rng(seed, 2)
    r = cs.r
    candidates = [("uniform", DensityMatrix.maximally_mixed(r))]
    candidates += [(f"basis:{k}", basis_density(r, k)) for k in range(r)]
    for k in range(n_secrets):
        if k % 2:
            candidates.append(("hs", hs_random_density(r, rng)))
        else:
            candidates.append(("pure", random_pure_density(r, rng)))
    best = None
    for kind, rho in candidates:
        val = tripartite_information(purify(cs, rho), base).value
        if best is None or val > best[0]:
            best = (val, kind, rho)
    return ProbeResult(best[0], best[2], best[1], len(candidates), seed, base)
