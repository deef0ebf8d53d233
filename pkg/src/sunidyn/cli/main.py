"""``sunidyn <command> --config <path> [--out <path>] [--seed <u64>]``.

Exit codes: 0 success, 2 usage or schema errors (including malformed JSON),
3 budget exhaustion (the report still carries the partial results).
"""

import argparse
import csv
import json
import sys
import time

from pydantic import TypeAdapter, ValidationError

from .. import __version__
from ..constructors.certificate import ApproxCertificate, ApproxRequest, build_certificate
from ..dirichlet import UnimodularSet, default_schedule, find_return_sequence
from ..errors import BudgetExhausted, UsageError
from ..oracle import (
    BallSpec,
    best_simultaneous_index,
    brute_force_certificate_check,
    joint_errors,
    transitivity_probe,
)
from ..shifts import (
    ShiftFamily,
    condition_iii_sweep,
    decide_d_unweighted,
    decide_s_unweighted,
    normalize_unweighted,
)
from . import codec
from . import schema as S

COMMANDS = ("decide", "construct", "dirichlet", "orbit", "probe")
EXIT_OK, EXIT_USAGE, EXIT_BUDGET = 0, 2, 3

_CONFIG = TypeAdapter(S.ExperimentConfig)


class _Exhausted(Exception):
    def __init__(self, message, result):
        super().__init__(message)
        self.result = result


def _family(cfg):
    return [codec.operator_in(m) for m in cfg.operators]


def certificate_out(cert, verified):
    return {
        "n": int(cert.n),
        "x": codec.element_out(cert.x),
        "per_op_error": [float(e) for e in cert.per_op_error],
        "anchor_error": float(cert.anchor_error),
        "verified": bool(verified),
    }


def _decide(cfg):
    fam = _family(cfg)
    out = {}
    try:
        rs, lams = normalize_unweighted(fam)
    except UsageError:
        rs = None
    if rs is not None:
        order = sorted(range(len(rs)), key=lambda i: rs[i])
        rs_s, lams_s = [rs[i] for i in order], [lams[i] for i in order]
        s = decide_s_unweighted(rs_s, lams_s)
        d = decide_d_unweighted(rs_s, lams_s)
        out.update(s=s.value, s_reason=s.reason, d=d.value, d_reason=d.reason)
    else:
        sweep = condition_iii_sweep(ShiftFamily(tuple(fam)), cfg.k_max, cfg.m_max, cfg.Ms)
        out["condition_iii"] = [
            {"M": M, "k": k, "m": m} for (M, k), m in sorted(sweep.items())
        ]
        out["condition_iii_all_hit"] = all(m is not None for m in sweep.values())
    return out


def _construct(cfg):
    metric = codec.metric_in(cfg)
    fam = _family(cfg)
    target = codec.element_in(cfg.target, cfg.degree_cap)
    anchor = None if cfg.anchor is None else codec.element_in(cfg.anchor, cfg.degree_cap)
    req = ApproxRequest(
        tuple(fam), target, cfg.eps, cfg.budget, anchor, metric, cfg.degree, cfg.max_attempts
    )
    try:
        cert = build_certificate(req)
    except BudgetExhausted as exc:
        partial = None if exc.partial is None else certificate_out(exc.partial, False)
        raise _Exhausted(str(exc), {"certificate": None, "partial": partial}) from None
    return {"certificate": certificate_out(cert, True)}


def _dirichlet(cfg):
    if (cfg.angles is None) == (cfg.scalars is None):
        raise UsageError("give exactly one of 'angles' or 'scalars'")
    if cfg.angles is not None:
        uset = UnimodularSet(tuple(cfg.angles))
    else:
        uset = UnimodularSet.from_scalars([codec.complex_in(s) for s in cfg.scalars])
    sched = default_schedule() if cfg.eps_schedule is None else tuple(cfg.eps_schedule)
    try:
        seq = find_return_sequence(uset, sched, cfg.n_max)
    except BudgetExhausted as exc:
        p = exc.partial
        raise _Exhausted(
            str(exc), {"indices": list(p.indices), "residuals": list(p.residuals), "complete": False}
        ) from None
    return {"indices": list(seq.indices), "residuals": list(seq.residuals), "complete": True}


def _orbit(cfg):
    metric = codec.metric_in(cfg)
    fam = _family(cfg)
    x = codec.element_in(cfg.x, cfg.degree_cap)
    target = codec.element_in(cfg.target, cfg.degree_cap)
    n_best, score = best_simultaneous_index(fam, x, target, cfg.N, metric)
    if cfg.csv:
        with open(cfg.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "operator_index", "distance_to_target"])
            for n in range(1, cfg.N + 1):
                for j, e in enumerate(joint_errors(fam, x, target, n, metric)):
                    w.writerow([n, j, repr(float(e))])
    return {"best_n": n_best, "score": float(score), "N": cfg.N}


def _probe(cfg):
    metric = codec.metric_in(cfg)
    fam = _family(cfg)
    U = BallSpec(codec.element_in(cfg.U.center, cfg.degree_cap), cfg.U.radius, metric)
    V = BallSpec(codec.element_in(cfg.V.center, cfg.degree_cap), cfg.V.radius, metric)
    w = transitivity_probe(fam, U, V, cfg.N, cfg.trials, cfg.seed, metric)
    if w is None:
        return {"witness": None, "searched": {"N": cfg.N, "trials": cfg.trials, "seed": cfg.seed}}
    return {"witness": {"u": codec.element_out(w.u), "n": w.n, "trial": w.trial}}


_RUNNERS = {
    "decide": _decide,
    "construct": _construct,
    "dirichlet": _dirichlet,
    "orbit": _orbit,
    "probe": _probe,
}


def parse_config(data, seed=None):
    """Validate one config object (dict) and apply a seed override."""
    cfg = _CONFIG.validate_python(data)
    if seed is not None:
        cfg = cfg.model_copy(update={"seed": int(seed)})
    return cfg


def run(cfg):
    """Execute one validated config; returns ``(status, results, seconds)``."""
    t0 = time.perf_counter()
    try:
        results = _RUNNERS[cfg.command](cfg)
        status = EXIT_OK
    except _Exhausted as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        results, status = exc.result, EXIT_BUDGET
    return status, results, time.perf_counter() - t0


def echo(cfg):
    return cfg.model_dump(mode="json", by_alias=True)


def build_report(configs, seed=None):
    """Run one config or a batch; returns ``(exit_code, report)``."""
    batch = isinstance(configs, list)
    items = configs if batch else [configs]
    parsed = [parse_config(c, seed) for c in items]
    results, timings, worst = [], [], EXIT_OK
    for cfg in parsed:
        status, res, secs = run(cfg)
        results.append(res)
        timings.append(secs)
        worst = max(worst, status)
    report = {
        "artifact": {"name": "sunidyn", "version": __version__},
        "config": [echo(c) for c in parsed] if batch else echo(parsed[0]),
        "results": results if batch else results[0],
        "timings": {"seconds": timings if batch else timings[0]},
    }
    return worst, report


def results_json(report):
    """Canonical serialization of the results section."""
    return json.dumps(report["results"], sort_keys=True, separators=(",", ":"))


def dumps(report):
    return json.dumps(report, sort_keys=True, indent=2)


def recheck_report(report):
    """Re-validate every certificate in a construct report; list of CheckResults."""
    cfgs = report["config"] if isinstance(report["config"], list) else [report["config"]]
    res = report["results"] if isinstance(report["results"], list) else [report["results"]]
    checks = []
    for c, r in zip(cfgs, res):
        if c.get("command") != "construct" or not r.get("certificate"):
            continue
        cfg = parse_config(c)
        anchor = None if cfg.anchor is None else codec.element_in(cfg.anchor, cfg.degree_cap)
        fam = _family(cfg)
        x = codec.element_from_json(r["certificate"]["x"], cfg.degree_cap)
        cert = ApproxCertificate(x, int(r["certificate"]["n"]), (), 0.0)
        target = codec.element_in(cfg.target, cfg.degree_cap)
        checks.append(
            brute_force_certificate_check(cert, fam, target, cfg.eps, codec.metric_in(cfg), anchor)
        )
    return checks


def make_parser():
    p = argparse.ArgumentParser(prog="sunidyn", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, help="JSON config file (object or list)")
    p.add_argument("--out", help="write the report here instead of standard output")
    p.add_argument("--seed", type=int, help="override the config seed")
    return p


def main(argv=None):
    args = make_parser().parse_args(argv)
    if args.seed is not None and not 0 <= args.seed < 2**64:
        print("error: seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_USAGE
    try:
        with open(args.config) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    items = data if isinstance(data, list) else [data]
    for item in items:
        if isinstance(item, dict) and item.get("command", args.command) != args.command:
            print(
                f"error: config command {item.get('command')!r} does not match {args.command!r}",
                file=sys.stderr,
            )
            return EXIT_USAGE
        if isinstance(item, dict):
            item.setdefault("command", args.command)
    try:
        code, report = build_report(data, args.seed)
    except ValidationError as exc:
        print(f"error: invalid config:\n{exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = dumps(report)
    out = args.out or (items[0].get("out") if isinstance(items[0], dict) else None)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
