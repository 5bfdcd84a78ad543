"""Command-line front end.

One binary, nine subcommands: solve / protocol / simulate for the core
pipeline, capacity / qc-convert / entanglement / counterexample for the
applications, verify for the audit suite, and dims for the dimension table.
All randomness flows from --seed, JSON artifacts are canonical (identical
argv and input give identical bytes), and exit codes partition outcomes:
0 success, 1 verification failure, 2 malformed input, 3 unconverged solve.
"""

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import jsonio
from .applications import (entanglement_entropy, environment_assisted_protocol,
                           environment_assisting_protocol,
                           four_dim_counterexample, qc_convert,
                           random_isometry, span_min_entanglement,
                           StinespringIsometry)
from .jsonio import MalformedInput
from .protocol import build_protocol, simulate, subspace_from_vectors
from .reference import unique_basis_vectors
from .solver import SolverOptions, solve_dd, solve_dd_real
from .spaces import dimension_counts
from .verification import CHECK_NAMES, run_check


@dataclass
class RunConfig:
    subcommand: str
    inputPath: str = None
    outputPath: str = None
    seed: int = 0
    tol: float = 1e-8
    starts: int = 50
    shots: int = None
    realMode: bool = False
    threads: int = 1


def _threads(args):
    if getattr(args, "threads", None):
        return max(1, int(args.threads))
    env = os.environ.get("DDLOCC_THREADS", "")
    return max(1, int(env)) if env.isdigit() else 1


def _config(args):
    return RunConfig(
        subcommand=args.command,
        inputPath=getattr(args, "input", None),
        outputPath=getattr(args, "output", None),
        seed=getattr(args, "seed", 0),
        tol=getattr(args, "tol", 1e-8),
        starts=getattr(args, "starts", 50),
        shots=getattr(args, "shots", None),
        realMode=getattr(args, "real", False),
        threads=_threads(args),
    )


def _options(cfg):
    return SolverOptions(maxStarts=cfg.starts, tolResidual=cfg.tol,
                         seed=cfg.seed, realMode=cfg.realMode)


def _read_json(cfg):
    if cfg.inputPath is None:
        raise MalformedInput("this subcommand needs --input")
    try:
        text = Path(cfg.inputPath).read_text()
    except OSError as e:
        raise MalformedInput(f"cannot read {cfg.inputPath}: {e}") from None
    return jsonio.loads(text)


def _write(cfg, text):
    if cfg.outputPath:
        Path(cfg.outputPath).write_text(text)


def _say(key, value):
    print(f"{key}: {value}")


# ---------------------------------------------------------------------------
# subcommands

def _cmd_solve(cfg):
    op = jsonio.operator_from_json(_read_json(cfg))
    solver = solve_dd_real if cfg.realMode else solve_dd
    cert = solver(op, _options(cfg), threads=cfg.threads)
    _write(cfg, jsonio.dumps(jsonio.certificate_to_json(cert)))
    _say("residual", f"{cert.residual:.3e}")
    _say("converged", cert.converged)
    _say("startsUsed", cert.startsUsed)
    return 0 if cert.converged else 3


def _cmd_protocol(cfg):
    doc = _read_json(cfg)
    if isinstance(doc, dict) and "vectors" in doc:
        vecs = [jsonio.decode_vector(v, "input vector") for v in doc["vectors"]]
        try:
            S = subspace_from_vectors(vecs)
        except ValueError as e:
            raise MalformedInput(str(e)) from None
    else:
        S = jsonio.subspace_from_json(doc)
    p = build_protocol(S, _options(cfg))
    _write(cfg, jsonio.dumps(jsonio.protocol_to_json(p)))
    _say("residual", f"{p.residual:.3e}")
    _say("converged", p.converged)
    for c in range(3):
        _say(f"exactSuccess[{c}]", f"{simulate(p, c):.12f}")
    return 0 if p.converged else 3


def _cmd_simulate(cfg, codeword=None):
    p = jsonio.protocol_from_json(_read_json(cfg))
    codes = [codeword] if codeword is not None else [0, 1, 2]
    succ = [simulate(p, c, shots=cfg.shots, seed=cfg.seed) for c in codes]
    for c, s in zip(codes, succ):
        _say(f"success[{c}]", f"{s:.6f}" if cfg.shots else f"{s:.12f}")
    _write(cfg, jsonio.dumps({"codewords": codes, "successes": succ,
                              "shots": cfg.shots, "seed": cfg.seed}))
    return 0


def _cmd_verify(cfg, checks, samples, n_starts):
    names = list(CHECK_NAMES) if not checks else checks
    lines, ok = [], True
    for name in names:
        r = run_check(name, seed=cfg.seed, samples=samples, n_starts=n_starts)
        ok &= r.passed
        lines.append(jsonio.dumps_line(jsonio.report_to_json(r)))
        _say(name, "PASS" if r.passed else "FAIL")
    _write(cfg, "".join(lines))
    _say("allPassed", ok)
    return 0 if ok else 1


def _cmd_capacity(cfg, mode):
    if cfg.inputPath:
        iso = jsonio.isometry_from_json(_read_json(cfg))
    else:
        rng = np.random.default_rng(cfg.seed)
        if mode == "assisted":
            iso = StinespringIsometry(3, 3, 4, random_isometry(3, 12, rng))
        else:
            iso = StinespringIsometry(3, 5, 3, random_isometry(3, 15, rng))
        _say("input", f"random isometry dIn=3 dEnv={iso.dEnv} dSys={iso.dSys} (seed {cfg.seed})")
    build = (environment_assisted_protocol if mode == "assisted"
             else environment_assisting_protocol)
    try:
        rep = build(iso, opts=_options(cfg)) if mode == "assisting" else build(iso, None, _options(cfg))
    except ValueError as e:
        raise MalformedInput(str(e)) from None
    _write(cfg, jsonio.dumps(jsonio.capacity_to_json(rep)))
    _say("mode", rep.mode)
    _say("bitsPerUse", f"{rep.bitsPerUse:.6f}")
    _say("successes", " ".join(f"{s:.9f}" for s in rep.successes))
    _say("residual", f"{rep.protocol.residual:.3e}")
    return 0 if rep.protocol.converged else 3


def _cmd_qc_convert(cfg):
    op = jsonio.operator_from_json(_read_json(cfg))
    try:
        res = qc_convert(op, _options(cfg), tol=cfg.tol)
    except ValueError as e:
        raise MalformedInput(str(e)) from None
    _write(cfg, jsonio.dumps(jsonio.qc_result_to_json(res)))
    _say("residual", f"{res.residual:.3e}")
    _say("classicalA", res.classicalA)
    _say("generalizedClassicalB", res.generalizedClassicalB)
    _say("fullyClassical", res.fullyClassical)
    return 0 if res.certificate.converged else 3


def _cmd_entanglement(cfg, samples):
    if cfg.inputPath:
        doc = _read_json(cfg)
    else:
        doc = {"basis": jsonio.encode_matrix(np.array(unique_basis_vectors()))}
        _say("input", "built-in distinguishable basis")
    if "vector" in doc:
        psi = jsonio.decode_vector(doc["vector"], "state vector")
        try:
            ent = entanglement_entropy(psi)
        except ValueError as e:
            raise MalformedInput(str(e)) from None
        _say("entropy", f"{ent:.9f}")
        _write(cfg, jsonio.dumps({"entropy": ent}))
        return 0
    if "basis" not in doc:
        raise MalformedInput("expected a document with 'vector' or 'basis'")
    basis = jsonio.decode_matrix(doc["basis"], "basis")
    entropies = [entanglement_entropy(b) for b in basis]
    val, coeff = span_min_entanglement(basis, budget=samples, seed=cfg.seed)
    for i, e in enumerate(entropies):
        _say(f"entropy[{i}]", f"{e:.9f}")
    _say("spanMin", f"{val:.9f}")
    _write(cfg, jsonio.dumps({"basisEntropies": entropies, "spanMin": val,
                              "coefficients": jsonio.encode_vector(coeff),
                              "samples": samples, "seed": cfg.seed}))
    return 0


def _cmd_counterexample(cfg):
    rep = four_dim_counterexample(seed=cfg.seed, starts=cfg.starts)
    _write(cfg, jsonio.dumps(jsonio.fourdim_to_json(rep)))
    _say("dimDomain", rep.dimDomain)
    _say("dimTarget", rep.dimTarget)
    _say("epsilon", f"{rep.epsilon:.6f}")
    _say("orthonormal", rep.orthonormal)
    _say("residualFloor", f"{rep.residualFloor:.6e}")
    _say("certifying", rep.certifying)
    return 0


def _cmd_dims(cfg):
    d = dimension_counts()
    _say("m00/d00/domain (3x3)", f"{d['m00']}/{d['d00']}/{d['domain_3x3']}")
    _say("m2/d2 (real)", f"{d['m2']}/{d['d2']}")
    _say("domain/target (3x4)", f"{d['domain_3x4']}/{d['target_3x4']}")
    _write(cfg, jsonio.dumps(d))
    return 0


# ---------------------------------------------------------------------------
# parser

def _add_common(sp, seed=0, starts=50):
    sp.add_argument("--input", help="input JSON path")
    sp.add_argument("--output", help="output JSON path")
    sp.add_argument("--seed", type=int, default=seed)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--starts", type=int, default=starts)
    sp.add_argument("--threads", type=int, default=None,
                    help="worker cap (default: DDLOCC_THREADS or 1)")


def _parser():
    ap = argparse.ArgumentParser(prog="ddlocc",
                                 description="dd-matrix solver and discrimination protocols")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="find local unitaries giving the dd form")
    _add_common(sp)
    sp.add_argument("--real", action="store_true", help="search SO(3) x SO(3) instead")

    sp = sub.add_parser("protocol", help="build a discrimination protocol for a subspace")
    _add_common(sp)

    sp = sub.add_parser("simulate", help="run a protocol on its codewords")
    _add_common(sp)
    sp.add_argument("--shots", type=int, default=None,
                    help="sample count (default: exact probabilities)")
    sp.add_argument("--codeword", type=int, choices=(0, 1, 2), default=None)

    sp = sub.add_parser("verify", help="run the numeric audit suite")
    _add_common(sp)
    sp.add_argument("--all", action="store_true", help="run every check")
    sp.add_argument("--check", action="append", choices=CHECK_NAMES,
                    help="run one named check (repeatable)")
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--orbit-starts", type=int, default=100)

    sp = sub.add_parser("capacity", help="channel capacity protocols")
    _add_common(sp)
    sp.add_argument("--mode", choices=("assisted", "assisting"), required=True)

    sp = sub.add_parser("qc-convert", help="convert a two-qutrit state to classical form")
    _add_common(sp)

    sp = sub.add_parser("entanglement", help="entropy of a vector or minimum over a span")
    _add_common(sp)
    sp.add_argument("--samples", type=int, default=10_000)

    sp = sub.add_parser("counterexample", help="the 3x4 family with no dd form")
    _add_common(sp, seed=42, starts=100)

    sp = sub.add_parser("dims", help="dimension table of the constrained spaces")
    _add_common(sp)
    return ap


def main(argv=None):
    args = _parser().parse_args(argv)
    cfg = _config(args)
    try:
        if cfg.subcommand == "solve":
            return _cmd_solve(cfg)
        if cfg.subcommand == "protocol":
            return _cmd_protocol(cfg)
        if cfg.subcommand == "simulate":
            return _cmd_simulate(cfg, args.codeword)
        if cfg.subcommand == "verify":
            return _cmd_verify(cfg, args.check, args.samples, args.orbit_starts)
        if cfg.subcommand == "capacity":
            return _cmd_capacity(cfg, args.mode)
        if cfg.subcommand == "qc-convert":
            return _cmd_qc_convert(cfg)
        if cfg.subcommand == "entanglement":
            return _cmd_entanglement(cfg, args.samples)
        if cfg.subcommand == "counterexample":
            return _cmd_counterexample(cfg)
        if cfg.subcommand == "dims":
            return _cmd_dims(cfg)
    except MalformedInput as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    raise AssertionError(f"unhandled subcommand {cfg.subcommand}")


if __name__ == "__main__":
    sys.exit(main())
