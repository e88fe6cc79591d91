"""Config-driven command line: build instances, run experiments, emit reports.

Subcommands
-----------
run       execute an experiment config, write the trace CSV (and optional
          full-precision JSON), print a one-line summary
probe     execute a probe config, write the probe report JSON
validate  dry-run: build everything, re-check construction invariants,
          print the checked-inequality ledger, run nothing long

Exit codes: 0 completed, 2 a schedule exhausted its budget before its
predicates fired, 1 any other error (IO, schema, infeasible parameters).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import constructions as cons
from . import variational as var
from .engine import (Blocks, Constant, RunConfig, ScheduleExhausted,
                     run_perturbed, trace_to_csv, trace_to_json)
from .geometry import as_point
from .sets import set_from_dict

EXPERIMENT_KINDS = ("classical", "perturbed", "example44", "example51",
                    "ell2", "stable-scenario", "probe")


class ConfigError(ValueError):
    """Schema violation; the message names the offending field."""


def _require(cond, field, msg):
    if not cond:
        raise ConfigError(f"config field {field!r}: {msg}")


def _check_keys(d: dict, allowed: set, context: str):
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown field(s) {sorted(unknown)} in {context}")


_PARAM_KEYS = {
    "classical": {"A", "B", "start", "stop_residual", "target"},
    "perturbed": {"blocks", "start", "stop_residual", "target"},
    "example44": {"n_blocks", "max_block_len", "start"},
    "example51": {"n_blocks", "max_block_len", "start"},
    "ell2": {"d", "H", "ratio", "slack", "start", "max_block_n",
             "engine_step_budget", "aw_windows"},
    "stable-scenario": {"scenario", "delta_law", "delta_scale", "start",
                        "scenario_params", "target_tol"},
    "probe": {"probe", "U", "V", "set", "f", "alphas", "n_samples",
              "A", "C", "N", "family", "count", "M", "omega"},
}


def load_config(path) -> dict:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}")
    try:
        cfg = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    _check_keys(cfg, {"kind", "seed", "max_iter", "record_stride", "output", "params"},
                "config root")
    _require("kind" in cfg, "kind", "is required")
    _require(cfg["kind"] in EXPERIMENT_KINDS, "kind",
             f"must be one of {EXPERIMENT_KINDS}")
    cfg.setdefault("seed", 0)
    _require(isinstance(cfg["seed"], int), "seed", "must be an integer")
    cfg["_explicit_stride"] = "record_stride" in cfg
    cfg.setdefault("record_stride", 1)
    _require(isinstance(cfg["record_stride"], int) and cfg["record_stride"] >= 1,
             "record_stride", "must be a positive integer")
    if "max_iter" in cfg:
        _require(isinstance(cfg["max_iter"], int) and cfg["max_iter"] >= 1,
                 "max_iter", "must be a positive integer")
    out = cfg.setdefault("output", {})
    _require(isinstance(out, dict), "output", "must be an object")
    _check_keys(out, {"trace_csv", "trace_json", "report_json", "construction_json"},
                "output")
    params = cfg.setdefault("params", {})
    _require(isinstance(params, dict), "params", "must be an object")
    _check_keys(params, _PARAM_KEYS[cfg["kind"]], f"params ({cfg['kind']})")
    cfg["_sha256"] = hashlib.sha256(raw).hexdigest()
    return cfg


def _parse_set(obj, field):
    _require(isinstance(obj, dict), field, "must be a set-descriptor object")
    try:
        return set_from_dict(obj)
    except Exception as exc:
        raise ConfigError(f"config field {field!r}: bad set descriptor ({exc})")


def _build_schedule_and_runcfg(cfg):
    """Schedule + RunConfig for the run-style kinds (not example44/51/ell2)."""
    kind = cfg["kind"]
    p = cfg["params"]
    stride = cfg["record_stride"]
    if kind == "classical":
        for key in ("A", "B", "start"):
            _require(key in p, f"params.{key}", "is required")
        A = _parse_set(p["A"], "params.A")
        B = _parse_set(p["B"], "params.B")
        schedule = Constant(A, B)
        run_cfg = RunConfig(start=as_point(p["start"]),
                            max_iter=cfg.get("max_iter", 1000),
                            stop_residual=p.get("stop_residual"),
                            record_stride=stride,
                            target=None if p.get("target") is None else as_point(p["target"]))
        return schedule, run_cfg
    if kind == "perturbed":
        _require("blocks" in p and isinstance(p["blocks"], list) and p["blocks"],
                 "params.blocks", "must be a nonempty list")
        blocks = []
        for i, blk in enumerate(p["blocks"]):
            _require(isinstance(blk, dict), f"params.blocks[{i}]", "must be an object")
            _check_keys(blk, {"A", "B", "len"}, f"params.blocks[{i}]")
            _require(isinstance(blk.get("len"), int) and blk["len"] >= 1,
                     f"params.blocks[{i}].len", "must be a positive integer")
            blocks.append((_parse_set(blk["A"], f"params.blocks[{i}].A"),
                           _parse_set(blk["B"], f"params.blocks[{i}].B"),
                           blk["len"]))
        _require("start" in p, "params.start", "is required")
        schedule = Blocks(tuple(blocks))
        run_cfg = RunConfig(start=as_point(p["start"]),
                            max_iter=cfg.get("max_iter", schedule.total_length),
                            stop_residual=p.get("stop_residual"),
                            record_stride=stride,
                            target=None if p.get("target") is None else as_point(p["target"]))
        return schedule, run_cfg
    if kind == "stable-scenario":
        _require("scenario" in p, "params.scenario", "is required")
        scen = cons.stable_scenario(p["scenario"],
                                    delta_law=p.get("delta_law", "inv_n"),
                                    delta_scale=p.get("delta_scale", 1.0),
                                    **p.get("scenario_params", {}))
        start = scen.default_start if p.get("start") is None else as_point(p["start"])
        run_cfg = RunConfig(start=start, max_iter=cfg.get("max_iter", 10_000),
                            record_stride=stride, target=scen.target)
        return scen.make_schedule(), run_cfg
    raise ConfigError(f"config field 'kind': {kind!r} is not a schedule-style kind")


def _summary(trace, quiet):
    last = trace.final
    done = len(trace.completed_blocks())
    line = (f"status={trace.status} schedule_complete={trace.schedule_complete} "
            f"steps={last.n} blocks_completed={done} norm_a={last.norm_a:.6g} "
            f"res_a={last.res_a:.3g}"
            + (f" dist_target={last.dist_target:.6g}" if last.dist_target is not None else ""))
    if not quiet:
        print(line)
    return line


def _exit_code(trace) -> int:
    if trace.status == "schedule_exhausted" and not trace.schedule_complete:
        return 2
    return 0


def cmd_run(cfg, out_dir: Path, quiet: bool) -> int:
    kind = cfg["kind"]
    p = cfg["params"]
    meta = {"config_sha256": cfg["_sha256"], "seed": cfg["seed"], "kind": kind}
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / cfg["output"].get("trace_csv", "trace.csv")
    json_name = cfg["output"].get("trace_json")

    if kind == "probe":
        raise ConfigError("probe configs run under the 'probe' subcommand")

    if kind in ("classical", "perturbed", "stable-scenario"):
        schedule, run_cfg = _build_schedule_and_runcfg(cfg)
        trace = run_perturbed(schedule, run_cfg)
    elif kind == "example44":
        _require(isinstance(p.get("n_blocks"), int) and p["n_blocks"] >= 2,
                 "params.n_blocks", "must be an integer >= 2")
        trace = cons.run_example_unstable(p["n_blocks"],
                                          max_block_len=p.get("max_block_len", 10_000),
                                          start=p.get("start", (0.0, 0.0)),
                                          record_stride=cfg["record_stride"])
    elif kind == "example51":
        _require(isinstance(p.get("n_blocks"), int) and p["n_blocks"] >= 1,
                 "params.n_blocks", "must be an integer >= 1")
        trace = cons.run_example_unbounded_lines(
            p["n_blocks"], max_block_len=p.get("max_block_len", 10_000),
            start=p.get("start", (0.0, 0.0)), record_stride=cfg["record_stride"])
    elif kind == "ell2":
        for key in ("d", "H"):
            _require(isinstance(p.get(key), int) and p[key] >= 1,
                     f"params.{key}", "must be a positive integer")
        c = cons.build_ell2_construction(
            p["d"], p["H"], ratio=p.get("ratio", 0.5), slack=p.get("slack", 0.5),
            start=p.get("start"), max_block_n=p.get("max_block_n", 10 ** 8))
        (out_dir / cfg["output"].get("construction_json", "construction.json")).write_text(
            json.dumps(c.as_dict(), indent=1))
        total = sum(blk.N for blk in c.blocks)
        budget = p.get("engine_step_budget", 5_000_000)
        certificate = cons.ell2_aw_certificate(c, p.get("aw_windows", [1, 2, 4]))
        if total > budget:
            if not quiet:
                print(f"engine run skipped: total steps {total} exceed budget {budget}; "
                      "construction and certificate written from closed forms")
            ends = [float(np.sum(blk.end_alphas ** 2)) for blk in c.blocks]
            trace = None
        else:
            stride = cfg["record_stride"] if cfg["_explicit_stride"] \
                else max(1, total // 1000)
            trace = cons.ell2_run(c, record_stride=stride)
            boundaries = set(c.block_boundaries())
            ends = [r.norm_a ** 2 for r in trace.records if r.n in boundaries]
        if not quiet:
            for blk, sq in zip(c.blocks, ends):
                print(f"block {blk.h}: N={blk.N} end ||a||^2 = {sq:.9g} "
                      f"(> {2.0 ** blk.h}: {sq > 2.0 ** blk.h})")
        report = {"block_end_norm_sq": ends,
                  "aw_certificate": [{"h": h, "N": N, "bound": b}
                                     for h, N, b in certificate],
                  "engine_run": trace is not None}
        (out_dir / cfg["output"].get("report_json", "report.json")).write_text(
            json.dumps(report, indent=1))
        if trace is None:
            return 0
    else:
        raise ConfigError(f"unhandled kind {kind!r}")

    trace_to_csv(trace, csv_path, meta=meta)
    if json_name:
        trace_to_json(trace, out_dir / json_name, meta=meta)
    _summary(trace, quiet)
    return _exit_code(trace)


def _probe_report(cfg) -> dict:
    p = cfg["params"]
    seed = cfg["seed"]
    probe = p.get("probe")
    _require(probe in ("omega", "exposure", "aw", "separation"),
             "params.probe", "must be omega | exposure | aw | separation")
    if probe == "omega":
        for key in ("U", "V"):
            _require(key in p, f"params.{key}", "is required")
        rep = var.omega_angle(np.array(p["U"], dtype=float),
                              np.array(p["V"], dtype=float))
        return {"probe": "omega", "seed": seed, "result": rep.as_dict()}
    if probe == "exposure":
        for key in ("set", "f", "alphas"):
            _require(key in p, f"params.{key}", "is required")
        S = _parse_set(p["set"], "params.set")
        rep = var.strongly_exposes_probe(S, as_point(p["f"]),
                                         [float(a) for a in p["alphas"]],
                                         n_samples=p.get("n_samples", 400),
                                         rng_seed=seed)
        return {"probe": "exposure", "seed": seed,
                "n_samples": p.get("n_samples", 400), "result": rep.as_dict()}
    if probe == "separation":
        for key in ("M", "omega"):
            _require(key in p, f"params.{key}", "is required")
        eps, eta = var.separation_constants(float(p["M"]), float(p["omega"]))
        return {"probe": "separation", "seed": seed,
                "result": {"eps": eps, "eta": eta}}
    # aw probe: explicit pair or a named family
    N = p.get("N", 2)
    n_samples = p.get("n_samples", 1500)
    if "family" in p:
        fam = p["family"]
        count = p.get("count", 6)
        _require(isinstance(count, int) and count >= 1, "params.count",
                 "must be a positive integer")
        rows = []
        if fam == "unstable_bodies":
            A, _, _, _ = cons.example_unstable_bodies(1)
            for h in range(1, count + 1):
                _, _, C, _ = cons.example_unstable_bodies(h)
                est = var.aw_distance(C, A, N, n_samples=n_samples, rng_seed=seed + h)
                rows.append({"index": h, **est.as_dict()})
        elif fam == "tilted_lines":
            axis = cons.OrthoSubspace(np.array([[1.0, 0.0]]))
            for k in range(1, count + 1):
                est = var.aw_distance(cons.tilted_line(k), axis, N,
                                      n_samples=n_samples, rng_seed=seed + k)
                rows.append({"index": k, **est.as_dict()})
        else:
            raise ConfigError("params.family must be unstable_bodies | tilted_lines")
        return {"probe": "aw", "seed": seed, "family": fam, "N": N,
                "n_samples": n_samples, "result": rows}
    for key in ("A", "C"):
        _require(key in p, f"params.{key}", "is required")
    A = _parse_set(p["A"], "params.A")
    C = _parse_set(p["C"], "params.C")
    est = var.aw_distance(A, C, N, n_samples=n_samples, rng_seed=seed)
    return {"probe": "aw", "seed": seed, "result": est.as_dict()}


def cmd_probe(cfg, out_dir: Path, quiet: bool) -> int:
    _require(cfg["kind"] == "probe", "kind", "must be 'probe' for the probe subcommand")
    report = _probe_report(cfg)
    report["config_sha256"] = cfg["_sha256"]
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / cfg["output"].get("report_json", "report.json")
    path.write_text(json.dumps(report, indent=1))
    if not quiet:
        print(f"probe={report['probe']} written to {path}")
    return 0


def cmd_validate(cfg, out_dir: Path, quiet: bool) -> int:
    """Build the configured instances and re-check their invariants."""
    kind = cfg["kind"]
    p = cfg["params"]
    checked = []

    def note(name, ok, detail=""):
        checked.append((name, ok, detail))

    if kind in ("classical", "perturbed", "stable-scenario"):
        schedule, run_cfg = _build_schedule_and_runcfg(cfg)
        note("schedule and run config construct", True,
             type(schedule).__name__)
        if kind == "stable-scenario":
            scen = cons.stable_scenario(p["scenario"],
                                        delta_law=p.get("delta_law", "inv_n"),
                                        delta_scale=p.get("delta_scale", 1.0),
                                        **p.get("scenario_params", {}))
            for n in (1, 10):
                est = var.aw_distance(scen.a_family(n), scen.A, N=2,
                                      n_samples=200, rng_seed=cfg["seed"])
                note(f"perturbation {n}: h_2(A_n, A) <= 3*delta_n",
                     est.h_N <= 3.0 * scen.delta(n) + 1e-9,
                     f"h_2 = {est.h_N:.3g}, delta = {scen.delta(n):.3g}")
    elif kind == "example44":
        n_blocks = p.get("n_blocks", 6)
        for h in range(1, n_blocks + 1):
            A, B, C, D = cons.example_unstable_bodies(h)
            anchor = np.array([1.0, 0.0]) if h % 2 == 1 else np.array([-1.0, 0.0])
            note(f"pair {h}: bodies touch at {anchor.tolist()}",
                 C.contains(anchor, 1e-12) and D.contains(anchor, 1e-12),
                 f"C has {len(C.vertices)} vertices, D has {len(D.vertices)}")
    elif kind == "example51":
        n_blocks = p.get("n_blocks", 6)
        for k in range(1, n_blocks + 1):
            L = cons.tilted_line(k)
            ok = (L.distance(np.array([0.0, 1.0 / k])) < 1e-12
                  and L.distance(np.array([float(k), 0.0])) < 1e-12)
            note(f"line {k}: passes through (0, 1/{k}) and ({k}, 0)", ok)
    elif kind == "ell2":
        c = cons.build_ell2_construction(
            p["d"], p["H"], ratio=p.get("ratio", 0.5), slack=p.get("slack", 0.5),
            start=p.get("start"), max_block_n=p.get("max_block_n", 10 ** 8))
        for name, ok, detail in c.verify_conditions():
            note(name, ok, detail)
        note("block lengths", True, str([blk.N for blk in c.blocks]))
    elif kind == "probe":
        _probe_params_dry(cfg)
        note("probe parameters construct", True, p.get("probe", "?"))
    else:
        raise ConfigError(f"unhandled kind {kind!r}")

    failures = [name for name, ok, _ in checked if not ok]
    if not quiet:
        for name, ok, detail in checked:
            mark = "ok" if ok else "FAIL"
            print(f"[{mark}] {name}" + (f" ({detail})" if detail else ""))
    if failures:
        print(f"validation failed: {failures[0]}", file=sys.stderr)
        return 1
    if not quiet:
        print(f"validated {len(checked)} checks")
    return 0


def _probe_params_dry(cfg):
    """Construct probe inputs without running the (possibly long) probe."""
    p = cfg["params"]
    probe = p.get("probe")
    _require(probe in ("omega", "exposure", "aw", "separation"),
             "params.probe", "must be omega | exposure | aw | separation")
    if probe == "omega":
        var.omega_angle(np.array(p["U"], dtype=float), np.array(p["V"], dtype=float))
    elif probe == "exposure":
        _parse_set(p["set"], "params.set")
        as_point(p["f"])
    elif probe == "separation":
        var.separation_constants(float(p["M"]), float(p["omega"]))
    else:
        if "family" not in p:
            _parse_set(p["A"], "params.A")
            _parse_set(p["C"], "params.C")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="altproj",
        description="Alternating-projection experiments, perturbation schedules, "
                    "and set-convergence probes.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("run", "run an experiment config"),
                        ("probe", "run a probe config"),
                        ("validate", "dry-run: build and re-check invariants")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", required=True, help="path to JSON config")
        sp.add_argument("--out", default=".", help="output directory")
        sp.add_argument("--seed", type=int, default=None, help="override config seed")
        sp.add_argument("--max-iter", type=int, default=None, help="override max_iter")
        sp.add_argument("--quiet", action="store_true")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg["seed"] = args.seed
        if args.max_iter is not None:
            cfg["max_iter"] = args.max_iter
        out_dir = Path(args.out)
        if args.command == "run":
            return cmd_run(cfg, out_dir, args.quiet)
        if args.command == "probe":
            return cmd_probe(cfg, out_dir, args.quiet)
        return cmd_validate(cfg, out_dir, args.quiet)
    except ScheduleExhausted as exc:
        print(f"schedule exhausted: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
