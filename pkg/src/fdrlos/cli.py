"""Command-line front end: capacity points, SNR sweeps, (m, k) grids,
approximation-error surfaces and the built-in ORA reference table.

Examples
--------
::

    fdrlos point --k 20 --m 2 --snr-db 10 --methods closed_form,quadrature
    fdrlos sweep --k 20,200 --m 2 --snr-range 0:40:5 --methods quadrature,high_snr
    fdrlos grid --snr-db 10 --m-range 0.5:6:0.5 --k-logspace=-2:3:11
    fdrlos errors --regime high_ratio --k 200 --m 2 --terms 1 --snr-range 0:40:10
    fdrlos table1 --mc

Exit status: 0 success, 1 usage error, 2 numeric failure, 3 validation
mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .capacity import (
    NumericsConfig,
    opra_closed,
    opra_cutoff,
    opra_high_snr,
    opra_quadrature,
    ora_approx_high_ratio,
    ora_approx_low_ratio,
    ora_closed,
    ora_high_snr,
    ora_quadrature,
    relative_error,
)
from .channel import ChannelParams, QuadratureGrid
from .errors import DomainError, FdrlosError
from .mcsim import McConfig, mc_opra, mc_ora

__all__ = ["main", "build_parser", "db_to_linear", "TABLE1"]

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_MISMATCH = 0, 1, 2, 3

METHOD_ALIASES = {
    "quadrature": "quadrature",
    "quad": "quadrature",
    "numerical": "quadrature",
    "closed_form": "closed_form",
    "closed": "closed_form",
    "approx_low_ratio": "approx_low_ratio",
    "approx_low": "approx_low_ratio",
    "approx_high_ratio": "approx_high_ratio",
    "approx_high": "approx_high_ratio",
    "high_snr": "high_snr",
    "monte_carlo": "monte_carlo",
    "mc": "monte_carlo",
}
ORA_METHODS = ("quadrature", "closed_form", "approx_low_ratio", "approx_high_ratio", "high_snr", "monte_carlo")
OPRA_METHODS = ("quadrature", "closed_form", "high_snr", "monte_carlo")

CAPACITY_COLUMNS = [
    "k",
    "m",
    "snr_db",
    "policy",
    "method",
    "terms",
    "capacity_bps_hz",
    "err_est",
    "std_err",
    "gamma0",
    "status",
    "note",
]
ERROR_COLUMNS = [
    "k",
    "m",
    "snr_db",
    "regime",
    "terms",
    "exact_bps_hz",
    "approx_bps_hz",
    "delta",
    "status",
    "note",
]
TABLE1_COLUMNS = [
    "k",
    "m",
    "snr_db",
    "column",
    "computed_bps_hz",
    "published_bps_hz",
    "abs_diff",
    "tolerance",
    "checked",
    "passed",
]

#: Published reference values, ORA, m = 2 (bit/s/Hz).
TABLE1 = {
    "snr_db": (0, 10, 20, 30, 40),
    "th": {20: (0.91, 3.13, 6.22, 9.56, 12.84), 200: (0.92, 3.16, 6.27, 9.62, 12.89)},
    "num": {20: (0.91, 3.13, 6.22, 9.56, 12.84), 200: (0.92, 3.16, 6.27, 9.62, 12.89)},
    "ap_hi": {20: (0.94, 3.32, 6.70, 10.32, 13.97), 200: (0.92, 3.18, 6.32, 9.65, 13.01)},
}

DEFAULTS = {
    "k": "20",
    "m": "2",
    "snr_db": None,
    "snr_range": None,
    "methods": "quadrature,closed_form",
    "policy": "ora",
    "terms": 0,
    "seed": 0,
    "samples": 10**6,
    "streams": 1,
    "output": None,
    "format": "csv",
    "jobs": 1,
    "timing": False,
    "mc": False,
    "regime": "low_ratio",
    "m_range": None,
    "k_logspace": None,
    "laguerre_order": 96,
    "series_tol": 1e-7,
    "n_max": 16384,
    "plot_script": None,
    "strict": False,
}


class UsageError(Exception):
    """Invalid command-line input (exit status 1)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def db_to_linear(db):
    """Convert an SNR in dB to linear scale (the only conversion point)."""
    return 10.0 ** (float(db) / 10.0)


# ---------------------------------------------------------------------------
# argument handling


def build_parser():
    """Argument parser for all subcommands."""
    parser = _Parser(prog="fdrlos", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command")
    common = _Parser(add_help=False)
    S = argparse.SUPPRESS
    common.add_argument("--k", default=S, help="K-factor(s), comma separated (linear)")
    common.add_argument("--m", default=S, help="shadowing parameter(s), comma separated")
    common.add_argument("--snr-db", dest="snr_db", default=S, help="average SNR value(s) in dB")
    common.add_argument("--snr-range", dest="snr_range", default=S, help="start:stop:step in dB (inclusive)")
    common.add_argument("--methods", default=S, help="comma-separated method tags or aliases")
    common.add_argument("--policy", choices=("ora", "opra", "both"), default=S)
    common.add_argument("--terms", type=int, default=S, help="terms of the high-ratio approximation (0 = simplified)")
    common.add_argument("--seed", type=int, default=S)
    common.add_argument("--samples", type=int, default=S, help="Monte-Carlo sample count")
    common.add_argument("--streams", type=int, default=S, help="Monte-Carlo worker streams")
    common.add_argument("--output", default=S, help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=S)
    common.add_argument("--config", default=None, help="key=value configuration file")
    common.add_argument("--mc", action="store_true", default=S, help="add Monte-Carlo checks")
    common.add_argument("--jobs", type=int, default=S, help="worker processes for multi-cell runs")
    common.add_argument("--timing", action="store_true", default=S, help="add a runtime_ms column")
    common.add_argument("--laguerre-order", dest="laguerre_order", type=int, default=S)
    common.add_argument("--series-tol", dest="series_tol", type=float, default=S)
    common.add_argument("--n-max", dest="n_max", type=int, default=S)
    common.add_argument("--plot-script", dest="plot_script", default=S, help="also write a plotting script here")
    for name, hlp in (
        ("point", "capacity at one (k, m, SNR)"),
        ("sweep", "capacity versus average SNR"),
        ("grid", "capacity over an (m, k) grid at fixed SNR"),
        ("errors", "relative error of the k/m approximations"),
        ("table1", "ORA reference-table regression"),
        ("validate", "built-in cross-method validation"),
    ):
        sp = sub.add_parser(name, parents=[common], help=hlp)
        if name == "grid":
            sp.add_argument("--m-range", dest="m_range", default=S, help="start:stop:step")
            sp.add_argument("--k-logspace", dest="k_logspace", default=S, help="start_decade:stop_decade:count")
        if name == "errors":
            sp.add_argument("--regime", choices=("low_ratio", "high_ratio"), default=S)
        if name == "table1":
            sp.add_argument("--strict", action="store_true", default=S,
                            help="let approximation-column mismatches set the exit status")
    return parser


def read_config(path):
    """Parse a ``key = value`` file (``#`` comments, dashes or underscores in keys)."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path!r}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def _coerce(key, value):
    default = DEFAULTS[key]
    if isinstance(value, str) and default is not None and not isinstance(default, str):
        if isinstance(default, bool):
            return value.strip().lower() in ("1", "true", "yes", "on")
        try:
            return type(default)(float(value)) if isinstance(default, int) else type(default)(value)
        except ValueError as exc:
            raise UsageError(f"invalid value {value!r} for {key}") from exc
    return value


def resolve_options(ns):
    """Merge built-in defaults < config file < command-line flags."""
    opts = dict(DEFAULTS)
    if ns.config:
        opts.update(read_config(ns.config))
    for key, value in vars(ns).items():
        if key in DEFAULTS:
            opts[key] = value
    opts = {k: _coerce(k, v) for k, v in opts.items()}
    opts["command"] = ns.command
    return opts


def _floats(text, name):
    try:
        vals = [float(v) for v in str(text).split(",") if v.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"--{name}: expected comma-separated numbers, got {text!r}") from exc
    if not vals:
        raise UsageError(f"--{name}: empty list")
    return vals


def _range(text, name):
    try:
        start, stop, step = (float(v) for v in str(text).split(":"))
    except ValueError as exc:
        raise UsageError(f"--{name}: expected start:stop:step") from exc
    if not step > 0:
        raise UsageError(f"--{name}: step must be positive")
    if stop < start:
        raise UsageError(f"--{name}: stop must not be below start")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 10) for i in range(n)]


def snr_values(opts):
    """List of SNR values in dB from ``--snr-db`` or ``--snr-range``."""
    if opts.get("snr_range"):
        return _range(opts["snr_range"], "snr-range")
    if opts.get("snr_db") is not None:
        return _floats(opts["snr_db"], "snr-db")
    raise UsageError("an SNR is required (--snr-db or --snr-range)")


def parse_methods(text, policy):
    """Canonical method tags, validated against the policy."""
    names = [t.strip() for t in str(text).split(",") if t.strip()]
    if not names:
        raise UsageError("at least one method must be selected")
    out = []
    for n in names:
        if n not in METHOD_ALIASES:
            raise UsageError(f"unknown method {n!r}; choose from {sorted(set(METHOD_ALIASES))}")
        tag = METHOD_ALIASES[n]
        if tag not in out:
            out.append(tag)
    if policy in ("opra", "both"):
        bad = [t for t in out if t not in OPRA_METHODS]
        if policy == "opra" and bad:
            raise UsageError(f"methods {bad} are not available for OPRA")
    return out


def _params(k, m, snr_db):
    try:
        return ChannelParams(k, m, db_to_linear(snr_db))
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def _numerics(opts):
    try:
        grid = QuadratureGrid(laguerre_order=int(opts["laguerre_order"]))
        return NumericsConfig(grid=grid, series_tol=float(opts["series_tol"]), n_max=int(opts["n_max"]))
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def _mc_config(opts):
    try:
        return McConfig(samples=int(opts["samples"]), seed=int(opts["seed"]), streams=int(opts["streams"]))
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------------------
# computation


def _record(k, m, snr_db, policy, method, **fields):
    rec = dict.fromkeys(CAPACITY_COLUMNS)
    rec.update(k=k, m=m, snr_db=snr_db, policy=policy, method=method, status="ok", note="")
    rec.update(fields)
    return rec


def evaluate_cell(task):
    """All requested methods at one ``(k, m, snr_db)`` point.

    ``task`` is a dict with keys ``k, m, snr_db, policies, methods, terms,
    numerics, mc, strict_errors``. Numeric failures are recorded per method
    (``status="error"``) unless ``strict_errors`` is set, in which case
    they propagate.
    """
    k, m, snr_db = task["k"], task["m"], task["snr_db"]
    p = ChannelParams(k, m, db_to_linear(snr_db))
    num = task["numerics"]
    out = []
    cutoff = None
    for policy in task["policies"]:
        for method in task["methods"]:
            if policy == "opra" and method not in OPRA_METHODS:
                continue
            t0 = time.perf_counter()
            try:
                fields = _compute(p, policy, method, task, num, cutoff)
                if policy == "opra" and cutoff is None:
                    cutoff = fields.pop("_cutoff")
                fields.pop("_cutoff", None)
            except FdrlosError as exc:
                if task.get("strict_errors"):
                    raise type(exc)(f"{policy}/{method}: {exc}") from exc
                fields = {"status": "error", "note": f"{type(exc).__name__}: {exc}"}
            fields["runtime_ms"] = round(1e3 * (time.perf_counter() - t0), 3)
            out.append(_record(k, m, snr_db, policy, method, **fields))
    return out


def _compute(p, policy, method, task, num, cutoff):
    if policy == "ora":
        if method == "quadrature":
            est = ora_quadrature(p, num.grid)
        elif method == "closed_form":
            est = ora_closed(p, num)
        elif method == "approx_low_ratio":
            est = ora_approx_low_ratio(p)
        elif method == "approx_high_ratio":
            est = ora_approx_high_ratio(p, task["terms"])
            return {"capacity_bps_hz": est.value, "err_est": est.err_est, "terms": task["terms"]}
        elif method == "high_snr":
            est = ora_high_snr(p, num.series_tol, n_max=num.n_max)
        elif method == "monte_carlo":
            r = mc_ora(p, task["mc"])
            return {"capacity_bps_hz": r.mean, "std_err": r.std_err, "err_est": r.std_err}
        else:  # pragma: no cover - filtered by parse_methods
            raise UsageError(method)
        return {"capacity_bps_hz": est.value, "err_est": est.err_est}
    cut = cutoff or opra_cutoff(p, num.grid)
    extra = {"_cutoff": cut, "gamma0": cut.gamma0}
    if method == "quadrature":
        est = opra_quadrature(p, cut, num.grid)
    elif method == "closed_form":
        est = opra_closed(p, cut, num.n_max, num.series_tol, cfg=num.contour)
        extra["terms"] = est.diagnostics["terms"]
    elif method == "high_snr":
        est = opra_high_snr(p, cut, num.series_tol, n_max=num.n_max)
    elif method == "monte_carlo":
        r = mc_opra(p, cut.gamma0, task["mc"])
        return dict(extra, capacity_bps_hz=r.mean, std_err=r.std_err, err_est=r.std_err)
    else:  # pragma: no cover
        raise UsageError(method)
    return dict(extra, capacity_bps_hz=est.value, err_est=est.err_est)


def run_tasks(tasks, jobs=1):
    """Evaluate cells, serially or in a process pool; order-independent."""
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(evaluate_cell, tasks))
    else:
        results = [evaluate_cell(t) for t in tasks]
    return [r for cell in results for r in cell]


def sort_records(records, keys=("k", "m", "snr_db", "policy", "method")):
    """Deterministic order by ``(k, m, snr_db, policy, method)``."""
    return sorted(records, key=lambda r: tuple(r.get(key) if r.get(key) is not None else "" for key in keys))


# ---------------------------------------------------------------------------
# output


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            return ""
        return format(float(value), ".12g")
    return str(value)


def _json_value(value):
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return float(format(v, ".12g")) if math.isfinite(v) else None
    if isinstance(value, np.integer):
        return int(value)
    return value


def render(records, columns, fmt):
    """Serialise records as CSV or JSON text with a fixed column order."""
    if fmt == "json":
        rows = [{c: _json_value(r.get(c)) for c in columns} for r in records]
        return json.dumps(rows, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in records:
        w.writerow([_fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def emit(text, opts):
    if opts.get("output"):
        with open(opts["output"], "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


PLOT_TEMPLATE = """# Plotting commands for {data} (plain text; run with Python + matplotlib).
import csv
import collections
import matplotlib.pyplot as plt

rows = list(csv.DictReader(open({data!r}, encoding="utf-8")))
{body}
plt.show()
"""

_PLOT_BODIES = {
    "sweep": """series = collections.defaultdict(list)
for r in rows:
    if r["capacity_bps_hz"]:
        series[(r["policy"], r["method"], r["k"], r["m"])].append((float(r["snr_db"]), float(r["capacity_bps_hz"])))
for (pol, meth, k, m), pts in sorted(series.items()):
    xs, ys = zip(*sorted(pts))
    plt.plot(xs, ys, label=f"{pol} {meth} k={k} m={m}")
plt.xlabel("average SNR (dB)")
plt.ylabel("capacity (bit/s/Hz)")
plt.legend()""",
    "grid": """pts = [(float(r["m"]), float(r["k"]), float(r["capacity_bps_hz"])) for r in rows if r["capacity_bps_hz"]]
ms = sorted({p[0] for p in pts}); ks = sorted({p[1] for p in pts})
z = [[next((c for (mm, kk, c) in pts if mm == m and kk == k), float("nan")) for k in ks] for m in ms]
cs = plt.contour(ks, ms, z, 12)
plt.clabel(cs)
plt.xscale("log")
plt.xlabel("k")
plt.ylabel("m")""",
    "errors": """series = collections.defaultdict(list)
for r in rows:
    if r["delta"]:
        series[(r["regime"], r["k"], r["m"], r["terms"])].append((float(r["snr_db"]), 100 * float(r["delta"])))
for key, pts in sorted(series.items()):
    xs, ys = zip(*sorted(pts))
    plt.plot(xs, ys, label="%s k=%s m=%s terms=%s" % key)
plt.xlabel("average SNR (dB)")
plt.ylabel("relative error (%)")
plt.legend()""",
}


def write_plot_script(opts, command):
    path = opts.get("plot_script")
    if not path:
        return
    if not opts.get("output") or opts.get("format") != "csv":
        raise UsageError("--plot-script needs --output with --format csv")
    body = _PLOT_BODIES.get(command, _PLOT_BODIES["sweep"])
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(PLOT_TEMPLATE.format(data=opts["output"], body=body))


def _columns(base, opts):
    return base + (["runtime_ms"] if opts.get("timing") else [])


# ---------------------------------------------------------------------------
# commands


def _policies(opts):
    pol = opts["policy"]
    return ("ora", "opra") if pol == "both" else (pol,)


def _tasks(ks, ms, snrs, opts, methods):
    num = _numerics(opts)
    mc = _mc_config(opts)
    tasks = []
    for k in ks:
        for m in ms:
            for s in snrs:
                _params(k, m, s)
                tasks.append(
                    {
                        "k": k,
                        "m": m,
                        "snr_db": s,
                        "policies": _policies(opts),
                        "methods": methods,
                        "terms": int(opts["terms"]),
                        "numerics": num,
                        "mc": mc,
                    }
                )
    return tasks


def run_point(opts):
    """One record per requested method at a single ``(k, m, snr_db)``."""
    ks, ms, snrs = _floats(opts["k"], "k"), _floats(opts["m"], "m"), snr_values(opts)
    if len(ks) != 1 or len(ms) != 1 or len(snrs) != 1:
        raise UsageError("point takes a single --k, --m and --snr-db")
    methods = parse_methods(opts["methods"], opts["policy"])
    tasks = _tasks(ks, ms, snrs, opts, methods)
    for t in tasks:
        t["strict_errors"] = True
    return sort_records(run_tasks(tasks))


def run_sweep(opts):
    """Records over an SNR range for each listed ``(k, m)``."""
    ks, ms, snrs = _floats(opts["k"], "k"), _floats(opts["m"], "m"), snr_values(opts)
    methods = parse_methods(opts["methods"], opts["policy"])
    return sort_records(run_tasks(_tasks(ks, ms, snrs, opts, methods), int(opts["jobs"])))


def run_grid(opts):
    """Records over an ``(m, k)`` grid at one SNR; failed cells are kept with
    an empty capacity and a diagnostic note."""
    snrs = snr_values(opts)
    if len(snrs) != 1:
        raise UsageError("grid takes a single --snr-db")
    ms = _range(opts["m_range"], "m-range") if opts.get("m_range") else _floats(opts["m"], "m")
    if opts.get("k_logspace"):
        try:
            a, b, n = str(opts["k_logspace"]).split(":")
            ks = [float(v) for v in np.logspace(float(a), float(b), int(n))]
        except ValueError as exc:
            raise UsageError("--k-logspace: expected start:stop:count (decades)") from exc
    else:
        ks = _floats(opts["k"], "k")
    methods = parse_methods(opts["methods"] if opts["methods"] != DEFAULTS["methods"] else "closed_form",
                            opts["policy"])
    return sort_records(run_tasks(_tasks(ks, ms, snrs, opts, methods), int(opts["jobs"])))


def run_errors(opts):
    """Relative error of the low- or high-ratio approximation versus quadrature."""
    ks, ms, snrs = _floats(opts["k"], "k"), _floats(opts["m"], "m"), snr_values(opts)
    regime = opts["regime"]
    num = _numerics(opts)
    terms = int(opts["terms"])
    out = []
    for k in ks:
        for m in ms:
            for s in snrs:
                p = _params(k, m, s)
                rec = dict.fromkeys(ERROR_COLUMNS)
                rec.update(k=k, m=m, snr_db=s, regime=regime, status="ok", note="")
                t0 = time.perf_counter()
                try:
                    exact = ora_quadrature(p, num.grid)
                    if regime == "low_ratio":
                        approx = ora_approx_low_ratio(p)
                        rec["terms"] = 2
                    else:
                        approx = ora_approx_high_ratio(p, terms)
                        rec["terms"] = terms
                    rec.update(
                        exact_bps_hz=exact.value,
                        approx_bps_hz=approx.value,
                        delta=relative_error(exact, approx),
                    )
                except FdrlosError as exc:
                    rec.update(status="error", note=f"{type(exc).__name__}: {exc}")
                rec["runtime_ms"] = round(1e3 * (time.perf_counter() - t0), 3)
                out.append(rec)
    return sort_records(out, ("k", "m", "snr_db"))


def run_table1(opts):
    """Compare closed form, quadrature and the high-ratio approximation with
    the published ORA table (m = 2, k in {20, 200}, SNR 0..40 dB).

    The approximation column uses ``--terms`` (default 0, the simplified
    form) and only affects the exit status with ``--strict``; its cells are
    always reported with ``passed`` computed honestly.

    Returns
    -------
    records : list of dict
    ok : bool
        True iff every checked cell is within 0.01 bit/s/Hz (and, with
        ``--mc``, every Monte-Carlo value within three standard errors).
    """
    num = _numerics(opts)
    mc = _mc_config(opts)
    strict = bool(opts.get("strict"))
    terms = int(opts["terms"])
    out = []
    for k in (20, 200):
        for j, s in enumerate(TABLE1["snr_db"]):
            p = ChannelParams(k, 2, db_to_linear(s))
            exact = ora_closed(p, num)
            quad = ora_quadrature(p, num.grid)
            approx = ora_approx_high_ratio(p, terms)
            cells = [
                ("closed_form", exact.value, TABLE1["th"][k][j], 0.01, True),
                ("quadrature", quad.value, TABLE1["num"][k][j], 0.01, True),
                ("approx_high_ratio", approx.value, TABLE1["ap_hi"][k][j], 0.01, strict),
            ]
            if opts.get("mc"):
                r = mc_ora(p, mc)
                cells.append(("monte_carlo", r.mean, quad.value, 3 * r.std_err, True))
            for col, val, ref, tol, checked in cells:
                diff = abs(val - ref)
                out.append(
                    {
                        "k": k,
                        "m": 2,
                        "snr_db": s,
                        "column": col,
                        "computed_bps_hz": val,
                        "published_bps_hz": ref,
                        "abs_diff": diff,
                        "tolerance": tol,
                        "checked": checked,
                        # published values are rounded to two decimals
                        "passed": diff <= tol + 5e-12,
                    }
                )
    ok = all(r["passed"] for r in out if r["checked"])
    return out, ok


def run_validate(opts):
    """Quick self-check: ORA and OPRA closed forms against quadrature and a
    Monte-Carlo estimate at a few points; returns (records, ok)."""
    num = _numerics(opts)
    mc = _mc_config(opts)
    out = []
    for k, m, s in ((20.0, 2.0, 10.0), (0.5, 1.0, 20.0), (20.0, 1.5, 10.0)):
        p = ChannelParams(k, m, db_to_linear(s))
        qo = ora_quadrature(p, num.grid)
        co = ora_closed(p, num)
        cut = opra_cutoff(p, num.grid)
        qp = opra_quadrature(p, cut, num.grid)
        cp = opra_closed(p, cut, num.n_max, num.series_tol)
        checks = [
            ("ora_closed_vs_quadrature", co.value, qo.value, max(1e-3, co.err_est + qo.err_est)),
            ("opra_closed_vs_quadrature", cp.value, qp.value, max(1e-3, cp.err_est + qp.err_est)),
        ]
        if opts.get("mc"):
            ro = mc_ora(p, mc)
            rp = mc_opra(p, cut.gamma0, mc)
            checks += [
                ("ora_mc_vs_quadrature", ro.mean, qo.value, 3 * ro.std_err),
                ("opra_mc_vs_quadrature", rp.mean, qp.value, 3 * rp.std_err),
            ]
        for name, val, ref, tol in checks:
            out.append(
                {
                    "k": k,
                    "m": m,
                    "snr_db": s,
                    "column": name,
                    "computed_bps_hz": val,
                    "published_bps_hz": ref,
                    "abs_diff": abs(val - ref),
                    "tolerance": tol,
                    "checked": True,
                    "passed": abs(val - ref) <= tol,
                }
            )
    return out, all(r["passed"] for r in out)


def main(argv=None):
    """Entry point; returns the process exit status."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.command is None:
            raise UsageError("a command is required: point, sweep, grid, errors, table1 or validate")
        opts = resolve_options(ns)
        if int(opts["jobs"]) < 1:
            raise UsageError("--jobs must be at least 1")
        cmd = opts["command"]
        status = EXIT_OK
        if cmd in ("point", "sweep", "grid"):
            records = {"point": run_point, "sweep": run_sweep, "grid": run_grid}[cmd](opts)
            columns = _columns(CAPACITY_COLUMNS, opts)
            if cmd == "point" and any(r["status"] != "ok" for r in records):
                status = EXIT_NUMERIC
        elif cmd == "errors":
            records = run_errors(opts)
            columns = _columns(ERROR_COLUMNS, opts)
        else:
            records, ok = (run_table1 if cmd == "table1" else run_validate)(opts)
            columns = TABLE1_COLUMNS
            status = EXIT_OK if ok else EXIT_MISMATCH
        emit(render(records, columns, opts["format"]), opts)
        write_plot_script(opts, cmd)
        return status
    except UsageError as exc:
        sys.stderr.write(f"fdrlos: usage error: {exc}\n")
        return EXIT_USAGE
    except FdrlosError as exc:
        sys.stderr.write(f"fdrlos: numeric failure: {type(exc).__name__}: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
