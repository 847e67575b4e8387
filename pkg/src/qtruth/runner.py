"""Scenario configs, dispatch and bit-stable output writers."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import epr, logic, quantize
from . import stern_gerlach as sg
from .errors import ConfigError, QTruthError
from .hilbert import identity, is_projector, random_state

KINDS = (
    "sg-overlap", "sg-three-angle", "sg-cascade", "sg-collapse",
    "epr-sweep", "epr-chsh", "quantize-kernels", "logic-tautology", "logic-connectives",
)
SEED_ENV = "QTRUTH_SEED"
CHECK_TOL = 1e-10


class UnknownKindError(ConfigError):
    pass


class OutputError(QTruthError):
    pass


@dataclass
class ScenarioConfig:
    kind: str
    params: dict
    seed: int = 0
    output_path: str | None = None
    output_format: str = "csv"

    @classmethod
    def from_dict(cls, d: Any) -> "ScenarioConfig":
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        if "kind" not in d:
            raise ConfigError("config is missing 'kind'")
        kind = d["kind"]
        if kind not in KINDS:
            raise UnknownKindError(f"unknown scenario kind {kind!r}; expected one of {', '.join(KINDS)}")
        params = d.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError("'params' must be an object")
        seed = d.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2**64:
            raise ConfigError("'seed' must be an unsigned 64-bit integer")
        out = d.get("output", {})
        if not isinstance(out, dict):
            raise ConfigError("'output' must be an object with 'path' and 'format'")
        fmt = out.get("format", "csv")
        if fmt not in ("csv", "json"):
            raise ConfigError(f"output format must be csv or json, got {fmt!r}")
        return cls(kind, params, seed, out.get("path"), fmt)

    @classmethod
    def load(cls, path: str | os.PathLike) -> "ScenarioConfig":
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e.strerror}") from e
        try:
            d = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"malformed JSON in {path}: {e}") from e
        cfg = cls.from_dict(d)
        env = os.environ.get(SEED_ENV)
        if env is not None:
            try:
                cfg.seed = int(env)
            except ValueError:
                raise ConfigError(f"{SEED_ENV}={env!r} is not an integer") from None
        return cfg


@dataclass
class RunReport:
    kind: str
    params: dict
    seed: int
    columns: list
    rows: list
    checks: dict
    extra: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def summary(self, include_timing: bool = False) -> dict:
        d = {"kind": self.kind, "params": self.params, "seed": self.seed,
             "row_count": len(self.rows), "checks": self.checks, "passed": self.passed}
        if include_timing:
            d["wall_time"] = self.wall_time
        return d


# --- formatting ----------------------------------------------------------------

def fmt_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def to_csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt_value(v) for v in r])
    return buf.getvalue()


def _json_safe(v):
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_safe(x) for x in v]
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return f if math.isfinite(f) else None
    return v


def to_json(report: RunReport) -> str:
    body = {"kind": report.kind, "columns": report.columns,
            "rows": [dict(zip(report.columns, r)) for r in report.rows], **report.extra}
    return json.dumps(_json_safe(body), indent=2, sort_keys=False) + "\n"


def render(report: RunReport, fmt: str) -> str:
    return to_csv(report.columns, report.rows) if fmt == "csv" else to_json(report)


def write_output(text: str, path: str | None) -> None:
    if path is None:
        return
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as e:
        raise OutputError(f"cannot write output {path}: {e.strerror}") from e


# --- parameter helpers -------------------------------------------------------

def grid(spec, name: str) -> list[float]:
    """A list of numbers, a scalar, or {start, stop, step|num} with stop inclusive."""
    if isinstance(spec, (int, float)) and not isinstance(spec, bool):
        return [float(spec)]
    if isinstance(spec, list) and spec and all(isinstance(x, (int, float)) for x in spec):
        return [float(x) for x in spec]
    if isinstance(spec, dict) and "start" in spec and "stop" in spec:
        start, stop = float(spec["start"]), float(spec["stop"])
        if "num" in spec:
            num = int(spec["num"])
            if num < 1:
                raise ConfigError(f"{name}.num must be >= 1")
            return [float(x) for x in np.linspace(start, stop, num)]
        step = float(spec.get("step", 0))
        if step <= 0 or stop < start:
            raise ConfigError(f"{name} needs step > 0 and stop >= start")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(count)]
    raise ConfigError(f"cannot read grid for {name!r}: {spec!r}")


def _theta(v: float, name: str) -> float:
    if not 0.0 <= v <= 180.0:
        raise ConfigError(f"{name}={v} deg outside [0, 180]")
    return v


def _phi(v: float, name: str) -> float:
    if not 0.0 <= v < 720.0:
        raise ConfigError(f"{name}={v} deg outside [0, 720)")
    return v


def _axis(spec, name: str) -> sg.SpinAxis:
    if not (isinstance(spec, list) and len(spec) in (1, 2)):
        raise ConfigError(f"{name} must be [theta_deg] or [theta_deg, phi_deg]")
    th = _theta(float(spec[0]), f"{name}.theta")
    ph = _phi(float(spec[1]) if len(spec) == 2 else 0.0, f"{name}.phi")
    return sg.SpinAxis.from_degrees(th, ph)


def _int(params, key, default, lo, name=None):
    v = params.get(key, default)
    if not isinstance(v, int) or isinstance(v, bool) or v < lo:
        raise ConfigError(f"{name or key} must be an integer >= {lo}, got {v!r}")
    return v


def _close(a, b) -> bool:
    return abs(a - b) <= CHECK_TOL


# --- scenario handlers ---------------------------------------------------------

SG_COLUMNS = ["theta1", "theta2", "phi1", "phi2", "total", "diagonal", "interference", "three_angle_interference"]


def _sg_rows(th1s, th2s, ph1s, ph2s):
    rows, checks = [], {"decomposition": True, "total_vs_axis_angle": True,
                        "closed_form_interference": True, "three_angle_matches_interference": True}
    for t1 in th1s:
        for t2 in th2s:
            for p1 in ph1s:
                for p2 in ph2s:
                    a1, a2 = sg.SpinAxis.from_degrees(t1, p1), sg.SpinAxis.from_degrees(t2, p2)
                    ov = sg.overlap_probability(a1, a2)
                    coplanar = p1 == p2
                    three = sg.three_angle_interference(a1.theta, a2.theta) if coplanar else float("nan")
                    rows.append([t1, t2, p1, p2, ov.total, ov.diagonal, ov.interference, three])
                    checks["decomposition"] &= _close(ov.diagonal + ov.interference, ov.total)
                    checks["total_vs_axis_angle"] &= _close(ov.total, math.cos(sg.axis_angle(a1, a2) / 2) ** 2)
                    checks["closed_form_interference"] &= _close(
                        ov.interference, sg.interference_closed_form(a1.theta, a2.theta, a1.phi, a2.phi))
                    if coplanar:
                        checks["three_angle_matches_interference"] &= _close(three, ov.interference)
    return rows, checks


def run_sg_overlap(cfg: ScenarioConfig):
    p = cfg.params
    th1 = [_theta(v, "theta1") for v in grid(p.get("theta1", {"start": 0, "stop": 180, "step": 15}), "theta1")]
    th2 = [_theta(v, "theta2") for v in grid(p.get("theta2", {"start": 0, "stop": 180, "step": 15}), "theta2")]
    ph1 = [_phi(v, "phi1") for v in grid(p.get("phi1", 0), "phi1")]
    ph2 = [_phi(v, "phi2") for v in grid(p.get("phi2", 0), "phi2")]
    rows, checks = _sg_rows(th1, th2, ph1, ph2)
    return SG_COLUMNS, rows, checks, {}


def run_sg_three_angle(cfg: ScenarioConfig):
    p = cfg.params
    n = _int(p, "grid", 13, 2)
    phi = _phi(float(p.get("phi", 0.0)), "phi")
    th = [float(x) for x in np.linspace(0.0, 180.0, n)]
    rows, checks = _sg_rows(th, th, [phi], [phi])
    return SG_COLUMNS, rows, checks, {}


def run_sg_cascade(cfg: ScenarioConfig):
    p = cfg.params
    th1 = [_theta(v, "theta1") for v in grid(p.get("theta1", {"start": 0, "stop": 180, "step": 30}), "theta1")]
    th2 = [_theta(v, "theta2") for v in grid(p.get("theta2", {"start": 0, "stop": 180, "step": 30}), "theta2")]
    ps1 = [_phi(v, "psi1") for v in grid(p.get("psi1", 0), "psi1")]
    ps2 = [_phi(v, "psi2") for v in grid(p.get("psi2", 0), "psi2")]
    cols = ["theta1", "theta2", "psi1", "psi2", "intensity", "diagonal", "interference", "closed_form_interference"]
    rows, checks = [], {"intensity_equals_overlap": True, "interference_equals_closed_form": True}
    for t1 in th1:
        for t2 in th2:
            for s1 in ps1:
                for s2 in ps2:
                    init, mag2 = sg.SpinAxis.from_degrees(t1, s1), sg.SpinAxis.from_degrees(t2, s2)
                    res = sg.cascade_overlap(sg.SgCascade((sg.Z_AXIS, mag2), init))
                    closed = sg.interference_closed_form(init.theta, mag2.theta, init.phi, mag2.phi)
                    rows.append([t1, t2, s1, s2, res.total, res.diagonal, res.interference, closed])
                    checks["intensity_equals_overlap"] &= _close(res.total, sg.overlap_probability(init, mag2).total)
                    checks["interference_equals_closed_form"] &= _close(res.interference, closed)
    return cols, rows, checks, {}


def run_sg_collapse(cfg: ScenarioConfig):
    p = cfg.params
    n = _int(p, "n_states", 8, 1)
    trials = _int(p, "trials", 10, 1)
    rng = np.random.default_rng(cfg.seed)
    fixed = None
    if "initial" in p:
        fixed = sg.spin_state(_axis(p["initial"], "initial"))
    cols = ["trial", "p_up", "p_down", "truth_up", "truth_down", "rephased_up", "rephased_down"]
    rows, checks = [], {"truths_match_weights": True, "truths_sum_to_one": True,
                        "rephasing_invariant": True, "statements_orthogonal": True}
    for i in range(trials):
        d = sg.DetectorModel.random(n, rng)
        c_up, c_down = fixed if fixed is not None else random_state(2, rng)
        up, down = sg.collapse_truths(c_up, c_down, d)
        ru, rd = sg.collapse_truths(c_up, c_down, d.rephased(rng.uniform(0, 2 * math.pi, n)))
        pu, pd = abs(c_up) ** 2, abs(c_down) ** 2
        rows.append([i, pu, pd, up, down, ru, rd])
        checks["truths_match_weights"] &= _close(up, pu) and _close(down, pd)
        checks["truths_sum_to_one"] &= _close(up + down, 1.0)
        checks["rephasing_invariant"] &= _close(ru, up) and _close(rd, down)
        su, sd = sg.coarse_spin_statements(d)
        checks["statements_orthogonal"] &= bool(np.linalg.norm(su @ sd) <= CHECK_TOL)
    return cols, rows, checks, {}


def run_epr_sweep(cfg: ScenarioConfig):
    p = cfg.params
    za = _axis(p.get("za", [0, 0]), "za")
    phi_b = _phi(float(p.get("phi_b", 0.0)), "phi_b")
    thetas = [_theta(v, "theta") for v in grid(p.get("theta", {"start": 0, "stop": 180, "step": 15}), "theta")]
    cols = ["theta_deg", "equivalence_truth", "conjunction_truth", "correlation"]
    rows, checks = [], {"equivalence_cos2": True, "conjunction_half_cos2": True,
                        "correlation_minus_cos": True, "equivalence_twice_conjunction": True}
    for th in thetas:
        zb = sg.SpinAxis.from_degrees(th, phi_b)
        ang = sg.axis_angle(za, zb)
        eq, cj, e = epr.equivalence_truth(za, zb), epr.conjunction_truth(za, zb), epr.correlation(za, zb)
        rows.append([th, eq, cj, e])
        c2 = math.cos(ang / 2) ** 2
        checks["equivalence_cos2"] &= _close(eq, c2)
        checks["conjunction_half_cos2"] &= _close(cj, 0.5 * c2)
        checks["correlation_minus_cos"] &= _close(e, -math.cos(ang))
        checks["equivalence_twice_conjunction"] &= _close(eq, 2 * cj)
    return cols, rows, checks, {}


def _axis_json(a: sg.SpinAxis) -> dict:
    return {"theta_deg": math.degrees(a.theta), "phi_deg": math.degrees(a.phi),
            "bloch": [float(x) for x in a.bloch_vector()]}


def run_epr_chsh(cfg: ScenarioConfig):
    p = cfg.params
    samples = _int(p, "samples", 10_000, 1)
    coplanar = p.get("coplanar", True)
    if not isinstance(coplanar, bool):
        raise ConfigError("coplanar must be true or false")
    res = epr.chsh_search(samples, seed=cfg.seed, coplanar=coplanar)
    canon = epr.chsh(*(sg.SpinAxis.from_degrees(d) for d in (0, 90, 45, 135)))
    extra = {"max_chsh": res.value, "argmax_axes": dict(zip(("a", "a_prime", "b", "b_prime"),
                                                               (_axis_json(a) for a in res.axes))),
             "canonical_chsh": canon, "tsirelson_bound": epr.TSIRELSON, "evaluations": res.evaluations}
    cols = ["label", "chsh"]
    rows = [["search_max", res.value], ["canonical", canon]]
    checks = {"below_tsirelson": res.value <= epr.TSIRELSON + 1e-9,
              "canonical_is_tsirelson": _close(canon, epr.TSIRELSON)}
    if "axes" in p:
        axes = p["axes"]
        if not (isinstance(axes, list) and len(axes) == 4):
            raise ConfigError("axes must list four [theta_deg, phi_deg] pairs")
        v = epr.chsh(*(_axis(a, f"axes[{i}]") for i, a in enumerate(axes)))
        rows.append(["given_axes", v])
        extra["given_axes_chsh"] = v
        checks["given_below_tsirelson"] = v <= epr.TSIRELSON + 1e-9
    return cols, rows, checks, extra


def run_quantize_kernels(cfg: ScenarioConfig):
    p = cfg.params
    if "n" not in p:
        raise ConfigError("quantize-kernels needs 'n'")
    n = p["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise ConfigError(f"lattice too small: n={n!r}, need an integer >= 2")
    if n > 256:
        raise ConfigError(f"lattice of {n} sites exceeds the dense limit of 256")
    lat = quantize.Lattice(n)
    ks = p.get("k", list(range(n)))
    if isinstance(ks, int):
        ks = [ks]
    if not all(isinstance(k, int) and 0 <= k < n for k in ks):
        raise ConfigError(f"k values must lie in [0, {n})")
    checks = {"projector": True, "unit_trace": True, "translation_invariant": True}
    total = np.zeros((n, n), dtype=complex)
    for k in ks:
        op = quantize.momentum_truth_kernel(lat, k).op
        total += op
        checks["projector"] &= is_projector(op)
        checks["unit_trace"] &= _close(np.trace(op).real, 1.0)
        checks["translation_invariant"] &= quantize.is_translation_invariant(op, lat)
    if sorted(ks) == list(range(n)):
        checks["complete"] = bool(np.linalg.norm(total - identity(n)) <= CHECK_TOL * n)
    return quantize.kernels_csv_header(n), quantize.kernels_csv_rows(lat, ks), checks, {}


def run_logic_tautology(cfg: ScenarioConfig):
    p = cfg.params
    items = p.get("statements")
    if not isinstance(items, list) or not items:
        raise ConfigError("logic-tautology needs a non-empty 'statements' list")
    dim = _int(p, "dim", 4, 1)
    trials = _int(p, "trials", 20, 0)
    rng = np.random.default_rng(cfg.seed)
    cols = ["name", "tautology", "max_residual"]
    rows, checks = [], {}
    for i, item in enumerate(items):
        tree = item.get("tree", item) if isinstance(item, dict) else item
        name = item.get("name", f"s{i}") if isinstance(item, dict) and "tree" in item else f"s{i}"
        try:
            names = logic.statement_names(tree)
            fam = logic.random_commuting_family(dim, len(names), rng)
            s = logic.statement_from_json(tree, dict(zip(names, fam)))
            res = logic.tautology_residuals(s, trials, rng)
        except (KeyError, TypeError) as e:
            raise ConfigError(f"statement {name!r} is malformed: {e}") from e
        except QTruthError as e:
            raise ConfigError(f"statement {name!r}: {e}") from e
        taut = max(res) <= CHECK_TOL * max(dim, 2 ** len(names))
        rows.append([name, taut, max(res)])
        if isinstance(item, dict) and "expect" in item:
            checks[f"{name}_as_expected"] = taut == bool(item["expect"])
    return cols, rows, checks, {}


def run_logic_connectives(cfg: ScenarioConfig):
    r = _int(cfg.params, "range", 2, 0)
    sols = logic.enumerate_connectives(r)
    named = {k: list(c) for k, c in logic.NAMED_CONNECTIVES.items()}
    extra = {"count": len(sols), "solutions": [list(c) for c in sols], "named": named,
             "named_present": {k: logic.ConnectiveCoefficients(*c) in sols for k, c in named.items()}}
    checks = {"all_verify": all(logic.verify_coefficients(c) for c in sols)}
    if r >= 2:
        checks["named_present"] = all(extra["named_present"].values())
        checks["sixteen_solutions"] = len(sols) == 16
    return ["a", "b", "c", "d"], [list(c) for c in sols], checks, extra


HANDLERS: dict[str, Callable] = {
    "sg-overlap": run_sg_overlap,
    "sg-three-angle": run_sg_three_angle,
    "sg-cascade": run_sg_cascade,
    "sg-collapse": run_sg_collapse,
    "epr-sweep": run_epr_sweep,
    "epr-chsh": run_epr_chsh,
    "quantize-kernels": run_quantize_kernels,
    "logic-tautology": run_logic_tautology,
    "logic-connectives": run_logic_connectives,
}


def run(cfg: ScenarioConfig) -> tuple[RunReport, str]:
    """Evaluate a scenario; returns the report and the rendered artifact (also written if a path is set)."""
    t0 = time.perf_counter()
    try:
        cols, rows, checks, extra = HANDLERS[cfg.kind](cfg)
    except (ValueError, TypeError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"invalid parameters for {cfg.kind}: {e}") from e
    report = RunReport(cfg.kind, cfg.params, cfg.seed, cols, rows,
                       {k: bool(v) for k, v in checks.items()}, extra)
    text = render(report, cfg.output_format)
    write_output(text, cfg.output_path)
    report.wall_time = time.perf_counter() - t0
    return report, text
