"""Command-line driver.

Exit codes: 0 success / perfect scheme, 1 negative verdict, 2 usage or
validation error. Reports go to stdout as JSON (or to ``--out``); human
summaries go to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import codespace as cspace
from . import random_lab, verifier
from .errors import RecoveryImpossible, TriptychError
from .infotheory import DensityMatrix
from .schemes import SchemeFormatError, load_scheme, save_scheme, scheme_dict

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2
SEED_ENV = "TRIPTYCH_SEED"


def _default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _clean(obj):
    # json has no inf/nan; emit null instead
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _emit(payload, out=None) -> None:
    text = json.dumps(_clean(payload), indent=2, default=_json_default)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _parse_sigmas(text: str):
    try:
        return [[int(x) for x in part.split(",")] for part in text.split(";")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad permutation list {text!r}") from None


def parse_d_range(text: str) -> list[int]:
    """``"2..6"`` -> [2, 3, 4, 5, 6]; ``"2,4"`` -> [2, 4]; ``"5"`` -> [5]."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension range {text!r}") from None


def _scheme_from_args(args):
    if args.scheme:
        return load_scheme(args.scheme)
    if not args.kind:
        raise SchemeFormatError("give either --scheme FILE or --kind")
    if args.kind == "shift":
        if args.d is None or args.k1 is None or args.k2 is None:
            raise SchemeFormatError("--kind shift needs --d, --k1 and --k2")
        scheme_doc = {"kind": "shift", "d": args.d, "k1": args.k1, "k2": args.k2}
    elif args.kind == "permutation":
        if args.d is None or args.sigmas is None:
            raise SchemeFormatError("--kind permutation needs --d and --sigmas")
        scheme_doc = {"kind": "permutation", "d": args.d, "sigmas": args.sigmas}
    elif args.kind == "vip":
        if args.d is None:
            raise SchemeFormatError("--kind vip needs --d")
        scheme_doc = {"kind": "vip", "d": args.d}
    else:
        scheme_doc = {"kind": "qutrit"}
    return load_scheme(scheme_doc)


def _parse_secret(text: str, r: int, seed: int) -> DensityMatrix:
    if text == "uniform":
        return DensityMatrix.maximally_mixed(r)
    if text == "random":
        return verifier.hs_random_density(r, verifier.secret_rng(seed, 3))
    if text.startswith("basis:"):
        k = int(text.split(":", 1)[1])
        if not 0 <= k < r:
            raise SchemeFormatError(f"basis index {k} out of range 0..{r - 1}")
        return verifier.basis_density(r, k)
    path = Path(text)
    payload = json.loads(path.read_text() if path.exists() else text)
    m = np.asarray(payload["re"], float) + 1j * np.asarray(payload.get("im", np.zeros_like(payload["re"])), float)
    return DensityMatrix.from_matrix(m)


def cmd_build(args) -> int:
    scheme_doc, tensor = _scheme_from_args(args)
    cs = cspace.from_tensor(tensor)
    params = {k: v for k, v in scheme_doc.items() if k not in ("kind", "tensor")}
    doc = scheme_dict(scheme_doc["kind"], tensor, **params)
    if args.out:
        save_scheme(doc, args.out)
    else:
        _emit(doc)
    if max(tensor.dims) <= 5:
        for line in cspace.format_kets(cs):
            _log(line)
    return EXIT_OK


def cmd_certify(args) -> int:
    _, tensor = _scheme_from_args(args)
    cs = cspace.from_tensor(tensor)
    report = verifier.certify(cs, args.secrets, args.seed, args.tol, base=args.base or "bits")
    _emit(report.to_json(), args.out)
    _log(f"verdict: {report.verdict}  routes: {report.routes}")
    if report.failing_legs:
        _log(f"non-unitary foldings: {', '.join(report.failing_legs)}")
    return EXIT_OK if report.verdict == "perfect" else EXIT_NEGATIVE


def cmd_recover(args) -> int:
    _, tensor = _scheme_from_args(args)
    cs = cspace.from_tensor(tensor)
    secret = _parse_secret(args.secret, cs.r, args.seed)
    try:
        result = cspace.recover(cs, secret, args.erased, args.tol)
    except RecoveryImpossible as exc:
        _emit({"status": "recovery-impossible", "erased": exc.erased,
               "unitarity_deviation": exc.residual, "message": str(exc)}, args.out)
        _log(str(exc))
        return EXIT_NEGATIVE
    _emit(result.to_json(), args.out)
    _log(f"erased {result.erased}: fidelity {result.fidelity:.15f}")
    return EXIT_OK


def cmd_audit(args) -> int:
    _, tensor = _scheme_from_args(args)
    cs = cspace.from_tensor(tensor)
    base = args.base or "bits"
    audit = verifier.vip_audit(cs, args.secrets, args.seed, args.tol, base)
    payload = {"audit": audit.to_json()}
    if args.probe:
        payload["monogamy_probe"] = verifier.monogamy_probe(cs, args.probe, args.seed, base).to_json()
    _emit(payload, args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    records, summary = random_lab.i3_sweep(
        args.d, args.trials, args.secrets, args.seed, args.mu, args.delta, args.workers, args.timing
    )
    doc = summary.to_json()
    doc["seed"] = args.seed
    doc["secrets_per_trial"] = args.secrets
    doc["base"] = "nats"
    if args.out:
        random_lab.write_csv(records, args.out)
        _emit(doc, Path(args.out).with_suffix(".summary.json"))
        _emit(doc)
    else:
        random_lab.write_csv(records, "/dev/stdout")
        _log(json.dumps(_clean(doc), indent=2))
    return EXIT_OK


def cmd_compare(args) -> int:
    stats = random_lab.gaussian_unitary_comparison(args.n, args.trials, args.seminorm, args.seed)
    _emit(stats.to_json(), args.out)
    return EXIT_OK if stats.inside else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="triptych", description="((2,3)) secret-sharing toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help=f"default: ${SEED_ENV} or 0")
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--out", type=str, default=None)

    scheme = argparse.ArgumentParser(add_help=False)
    scheme.add_argument("--scheme", type=str, default=None, help="scheme JSON file")
    scheme.add_argument("--kind", choices=["shift", "permutation", "vip", "qutrit"], default=None)
    scheme.add_argument("--d", type=int, default=None)
    scheme.add_argument("--k1", type=int, default=None)
    scheme.add_argument("--k2", type=int, default=None)
    scheme.add_argument("--sigmas", type=_parse_sigmas, default=None,
                        help="three permutations, e.g. '0,1,2;1,2,0;2,0,1'")

    p = sub.add_parser("build", parents=[common, scheme], help="write a scheme file")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("certify", parents=[common, scheme], help="certify the ((2,3)) property")
    p.add_argument("--secrets", type=int, default=8)
    p.add_argument("--base", choices=["bits", "nats"], default=None)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("recover", parents=[common, scheme], help="simulate erasure recovery")
    p.add_argument("--secret", default="random", help="uniform | random | basis:K | JSON file")
    p.add_argument("--erased", choices=["P1", "P2", "P3"], required=True)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("audit", parents=[common, scheme], help="coalition table and monogamy probe")
    p.add_argument("--secrets", type=int, default=8)
    p.add_argument("--probe", type=int, default=0, help="random secrets for the I3 <= 0 probe")
    p.add_argument("--base", choices=["bits", "nats"], default=None)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("sweep", parents=[common], help="Haar scrambler Monte-Carlo sweep (nats)")
    p.add_argument("--d", type=parse_d_range, required=True, help="e.g. 2..6")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--secrets", type=int, default=20)
    p.add_argument("--mu", type=float, default=random_lab.DEFAULT_MU)
    p.add_argument("--delta", type=float, default=random_lab.DEFAULT_DELTA)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="record wall time (breaks byte-identical reruns)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", parents=[common], help="Gaussian vs Haar norm ratio")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=300)
    p.add_argument("--seminorm", choices=["operator", "triple-max"], default="operator")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        args.seed = _default_seed()
    try:
        return args.func(args)
    except (TriptychError, ValueError, KeyError, OSError) as exc:
        _log(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
