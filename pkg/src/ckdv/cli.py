"""Run configuration, experiment dispatch and on-disk artifacts.

A run is described by a TOML file with a handful of top-level keys and one
table per concern (``[system]``, ``[grid]``, ``[initial_data]``,
``[stepper]``) plus an optional table named after each experiment holding
its parameters.  ``run`` writes everything into
``<output_dir>/<experiment>-<hash>/``:

* ``config.json``  the fully resolved configuration
* ``record.jsonl`` header, data rows and a status line
* ``curves/*.tsv``  two-column plot data
* ``summary.txt``  human-readable verdicts
"""

from __future__ import annotations

import argparse
import datetime as _dt
import hashlib
import json
import logging
import math
import sys
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .coeffs import (
    InvalidParameterError,
    SystemCoefficients,
    classify,
    invariant_weight,
    make_hirota_satsuma,
    make_majda_biello,
)
from .dynamics import (
    BlowUpError,
    Scheme,
    StepperConfig,
    check_quadratic_invariant,
    default_dt,
    evolve,
    invariant_observer,
    lifespan,
)
from .experiments import (
    acl_defect_scan,
    commutator_inequality_scan,
    commutator_scaling_fit,
    picard_contraction_study,
    predicted_lower_bound_curve,
    radius_decay_experiment,
)
from .gevrey import GevreyParams, norm_observer, pair_norm, radius_observer
from .profiles import PROFILES, initial_profile, profile_defaults, profile_keys
from .records import write_jsonl, write_tsv
from .spectral import GridSpec, SpectralState, dealias_state

logger = logging.getLogger(__name__)

EXPERIMENTS = ("simulate", "classify", "radius", "acl-scan", "commutator-scan", "picard", "inequality-scan")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_BLOWUP = 3
EXIT_REFUSED = 4

_LOG_SIGMAS = [float(s) for s in np.logspace(-3, -1, 9)]

# experiment-specific parameters and their defaults (None: derived at run time)
EXPERIMENT_DEFAULTS: dict[str, dict[str, Any]] = {
    "simulate": {"t_final": 1.0, "stride": 100, "sigmas": [0.0, 0.1], "track_radius": False},
    "classify": {},
    "radius": {
        "t_final": 50.0, "n_samples": 16, "t_first": None, "epsilon_tolerance": 0.2,
        "noise_floor": 1e-13, "rho": 0.7, "C_b": None, "acl_sigmas": _LOG_SIGMAS,
        "sigma0": None,
    },
    "acl-scan": {"sigmas": [0.0] + _LOG_SIGMAS, "rho": 0.7, "delta": None},
    "commutator-scan": {"sigmas": _LOG_SIGMAS},
    "picard": {"deltas": None, "n_iters": 8, "quadrature_nodes": 12},
    "inequality-scan": {
        "xi_min": -50.0, "xi_max": 50.0, "xi_step": 0.5,
        "sigmas": [float(s) for s in np.logspace(-2, 0, 10)],
        "rhos": [0.0, 0.25, 0.5, 0.75, 1.0], "tol": 1e-12,
    },
}

_TOP_KEYS = {"experiment", "output_dir", "seed", "enforce_admissibility", "threads",
             "system", "grid", "initial_data", "stepper"} | set(EXPERIMENTS)
_SYSTEM_EXPLICIT = ("a1", "a2", "c11", "c12", "c21", "c22")
_PRESET_KEYS = {"majda-biello": ("a2",), "hirota-satsuma": ("a1", "c12")}
_STEPPER_KEYS = {"dt", "scheme", "dealias", "contour_points", "c0", "a"}


class ConfigError(ValueError):
    """Malformed or invalid run configuration."""


@dataclass(frozen=True)
class RunConfig:
    system: SystemCoefficients
    system_spec: dict
    grid: GridSpec
    profile: str
    profile_params: dict
    stepper: StepperConfig
    c0: float = 0.1
    a: float = 4.0
    experiment: str = "simulate"
    params: dict = field(default_factory=dict)
    output_dir: Path = Path("runs")
    seed: int = 0
    enforce_admissibility: bool = False
    threads: int = 1

    def resolved(self) -> dict:
        """JSON-ready echo of every setting, defaults included."""
        return {
            "experiment": self.experiment,
            "seed": self.seed,
            "enforce_admissibility": self.enforce_admissibility,
            "system": {"spec": self.system_spec, "coefficients": self.system.as_dict()},
            "grid": {"n_points": self.grid.n_points, "length": self.grid.length},
            "initial_data": {"profile": self.profile, **self.profile_params},
            "stepper": {
                "dt": self.stepper.dt, "scheme": self.stepper.scheme.value,
                "dealias": self.stepper.dealias, "contour_points": self.stepper.contour_points,
                "c0": self.c0, "a": self.a,
            },
            self.experiment: dict(self.params),
        }

    def digest(self) -> str:
        text = json.dumps(self.resolved(), sort_keys=True)
        return hashlib.sha256(text.encode()).hexdigest()[:12]

    def run_dir(self) -> Path:
        return Path(self.output_dir) / f"{self.experiment}-{self.digest()}"

    def initial_state(self) -> SpectralState:
        return initial_profile(self.profile, self.profile_params, self.grid)


# -- loading --------------------------------------------------------------------

def _table(raw: Mapping, name: str) -> dict:
    val = raw.get(name, {})
    if not isinstance(val, dict):
        raise ConfigError(f"key '{name}': expected a table")
    return dict(val)


def _reject_unknown(section: str, given, allowed) -> None:
    unknown = sorted(set(given) - set(allowed))
    if unknown:
        where = f"{section}." if section else ""
        raise ConfigError(f"unknown key '{where}{unknown[0]}'" + (
            f" (and {len(unknown) - 1} more)" if len(unknown) > 1 else ""))


def _qual(section: str, key: str) -> str:
    return f"{section}.{key}" if section else key


def _real(section: str, key: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"key '{_qual(section, key)}': expected a number, got {value!r}")
    return float(value)


def _int(section: str, key: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"key '{_qual(section, key)}': expected an integer, got {value!r}")
    return value


def _bool(section: str, key: str, value) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(f"key '{_qual(section, key)}': expected true or false, got {value!r}")
    return value


def _system(tbl: dict) -> tuple[SystemCoefficients, dict]:
    if "preset" in tbl:
        preset = tbl["preset"]
        if preset not in _PRESET_KEYS:
            raise ConfigError(f"key 'system.preset': unknown preset {preset!r}; "
                              f"choose from {', '.join(_PRESET_KEYS)}")
        _reject_unknown("system", tbl, ("preset",) + _PRESET_KEYS[preset])
        missing = [k for k in _PRESET_KEYS[preset] if k not in tbl]
        if missing:
            raise ConfigError(f"key 'system.{missing[0]}' is required by preset {preset!r}")
        vals = {k: _real("system", k, tbl[k]) for k in _PRESET_KEYS[preset]}
        build = make_majda_biello if preset == "majda-biello" else make_hirota_satsuma
        try:
            return build(**vals), {"preset": preset, **vals}
        except InvalidParameterError as err:
            raise ConfigError(f"system: {err}") from err
    _reject_unknown("system", tbl, _SYSTEM_EXPLICIT)
    missing = [k for k in _SYSTEM_EXPLICIT if k not in tbl]
    if missing:
        raise ConfigError(
            f"key 'system.{missing[0]}' missing: give a preset or all of {', '.join(_SYSTEM_EXPLICIT)}")
    vals = {k: _real("system", k, tbl[k]) for k in _SYSTEM_EXPLICIT}
    try:
        return SystemCoefficients(**vals), dict(vals)
    except InvalidParameterError as err:
        raise ConfigError(f"system: {err}") from err


def _experiment_params(name: str, tbl: dict) -> dict:
    defaults = EXPERIMENT_DEFAULTS[name]
    _reject_unknown(name, tbl, defaults)
    out = dict(defaults)
    out.update(tbl)
    return out


def parse_config(raw: Mapping[str, Any], base_dir: Path | str = ".",
                 experiment: str | None = None) -> RunConfig:
    """Validate a parsed TOML mapping and fill in every default."""
    base_dir = Path(base_dir)
    _reject_unknown("", raw, _TOP_KEYS)
    exp = experiment or raw.get("experiment", "simulate")
    if exp not in EXPERIMENTS:
        raise ConfigError(f"key 'experiment': unknown experiment {exp!r}; choose from {', '.join(EXPERIMENTS)}")

    sys_tbl = _table(raw, "system") or {"preset": "majda-biello", "a2": 1.0}
    coeffs, spec = _system(sys_tbl)

    grid_tbl = _table(raw, "grid")
    _reject_unknown("grid", grid_tbl, ("n_points", "length"))
    try:
        grid = GridSpec(
            _int("grid", "n_points", grid_tbl.get("n_points", 1024)),
            _real("grid", "length", grid_tbl.get("length", 64 * math.pi)),
        )
    except ValueError as err:
        raise ConfigError(f"grid: {err}") from err

    seed = _int("", "seed", raw.get("seed", 0))
    init = _table(raw, "initial_data")
    profile = init.pop("profile", "sech2")
    if profile not in PROFILES:
        raise ConfigError(f"key 'initial_data.profile': unknown profile {profile!r}; "
                          f"choose from {', '.join(PROFILES)}")
    _reject_unknown("initial_data", init, profile_keys(profile))
    for k, v in init.items():
        if k.startswith("path_"):
            p = Path(v) if Path(v).is_absolute() else base_dir / v
            if not p.is_file():
                raise ConfigError(f"key 'initial_data.{k}': file {str(p)!r} does not exist")
            init[k] = str(p.resolve())
        elif k == "seed":
            init[k] = _int("initial_data", k, v)
        else:
            init[k] = _real("initial_data", k, v)
    if profile == "random-analytic":
        init.setdefault("seed", seed)
    for k, v in profile_defaults(profile).items():
        if not (k == "sigma0" and "r" in init):
            init.setdefault(k, v)

    st = _table(raw, "stepper")
    _reject_unknown("stepper", st, _STEPPER_KEYS)
    c0 = _real("stepper", "c0", st.get("c0", 0.1))
    a = _real("stepper", "a", st.get("a", 4.0))
    try:
        scheme = Scheme(st.get("scheme", "ETDRK4"))
    except ValueError:
        raise ConfigError(f"key 'stepper.scheme': expected one of {[s.value for s in Scheme]}") from None
    dt = _real("stepper", "dt", st["dt"]) if "dt" in st else None
    dealias = _bool("stepper", "dealias", st.get("dealias", True))
    contour = _int("stepper", "contour_points", st.get("contour_points", 32))

    params = _experiment_params(exp, _table(raw, exp))
    for other in EXPERIMENTS:
        if other != exp and other in raw:
            _reject_unknown(other, _table(raw, other), EXPERIMENT_DEFAULTS[other])

    cfg = RunConfig(
        system=coeffs, system_spec=spec, grid=grid, profile=profile, profile_params=init,
        stepper=StepperConfig(dt, scheme, dealias, contour), c0=c0, a=a,
        experiment=exp, params=params,
        output_dir=Path(raw.get("output_dir", "runs")),
        seed=seed,
        enforce_admissibility=_bool("", "enforce_admissibility", raw.get("enforce_admissibility", False)),
        threads=_int("", "threads", raw.get("threads", 1)),
    )
    if dt is None:
        try:
            state = cfg.initial_state()
        except (ValueError, OSError) as err:
            raise ConfigError(f"initial_data: {err}") from err
        if dealias:
            state = dealias_state(state)
        cfg = replace(cfg, stepper=replace(cfg.stepper, dt=default_dt(state, c0, a)))
    return cfg


def load_config(path, experiment: str | None = None, **overrides) -> RunConfig:
    """Read and validate a TOML run configuration.

    ``overrides`` replace top-level keys (e.g. seed, output_dir, threads)
    before validation.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise ConfigError(f"cannot read {path}: {err}") from err
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as err:
        msg = str(err)
        if "line" not in msg:
            pos = getattr(err, "pos", len(text))
            msg += f" (line {text.count(chr(10), 0, pos) + 1})"
        raise ConfigError(f"{path}: parse error: {msg}") from err
    raw.update({k: v for k, v in overrides.items() if v is not None})
    return parse_config(raw, path.parent, experiment)


# -- running ----------------------------------------------------------------------

@dataclass
class RunOutcome:
    exit_code: int
    run_dir: Path
    status: str
    summary: str


class _Artifacts:
    """Single writer for one run directory."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.dir = cfg.run_dir()
        (self.dir / "curves").mkdir(parents=True, exist_ok=True)
        self.rows: list[dict] = []
        self.lines: list[str] = []
        self.started = _dt.datetime.now(_dt.timezone.utc).isoformat()
        self.t0 = time.perf_counter()
        with open(self.dir / "config.json", "w", encoding="utf-8") as fh:
            json.dump(cfg.resolved(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    def curve(self, name: str, x, y, header: tuple[str, str]) -> None:
        write_tsv(self.dir / "curves" / f"{name}.tsv", x, y, header)

    def say(self, line: str) -> None:
        self.lines.append(line)

    def finish(self, status: str, result: dict | None = None) -> str:
        wall = time.perf_counter() - self.t0
        header = {"kind": "header", "experiment": self.cfg.experiment, "config": self.cfg.resolved(),
                  "config_hash": self.cfg.digest()}
        tail = {"kind": "status", "status": status, "result": result or {},
                "timestamp": {"started": self.started, "wall_time": round(wall, 3)}}
        write_jsonl(self.dir / "record.jsonl", [header, *self.rows, tail])
        text = "\n".join([f"experiment: {self.cfg.experiment}", f"status: {status}", *self.lines]) + "\n"
        (self.dir / "summary.txt").write_text(text, encoding="utf-8")
        return text


def _admissibility_lines(coeffs: SystemCoefficients) -> list[str]:
    rc = classify(coeffs)
    return [
        f"coefficients: {coeffs.as_dict()}",
        f"regime: {rc.regime.value} (a2/a1 = {rc.ratio:g})",
        f"admissible: {'yes' if rc.admissible else 'no'}"
        + ("" if rc.admissible or not rc.required_constraints
           else f" (requires {', '.join(rc.required_constraints)})"),
        f"available estimates: {', '.join(sorted(rc.available_estimates)) or 'none'}",
    ]


def _run_classify(cfg: RunConfig, art: _Artifacts) -> dict:
    rc = classify(cfg.system)
    art.rows.append({"kind": "classification", **{k: v for k, v in vars(rc).items()}})
    return {"regime": rc.regime.value, "admissible": rc.admissible}


def _run_simulate(cfg: RunConfig, art: _Artifacts, state: SpectralState) -> dict:
    p = cfg.params
    eta = invariant_weight(cfg.system)
    observers = [norm_observer(p["sigmas"])]
    if eta is not None:
        observers.append(invariant_observer(eta))
    if p["track_radius"]:
        observers.append(radius_observer())
    try:
        rec = evolve(state, cfg.system, cfg.stepper, float(p["t_final"]), observers, stride=int(p["stride"]))
    except BlowUpError as err:
        if err.record is not None:
            art.rows.extend({"kind": "row", **r} for r in err.record.rows)
        raise
    art.rows.extend({"kind": "row", **r} for r in rec.rows)
    t = rec.times
    for sig in p["sigmas"]:
        key = f"gevrey[{float(sig):g}]"
        art.curve(f"gevrey_{float(sig):g}", t, rec.column(key), ("t", key))
    result: dict = {"dt": rec.config["dt"], "n_steps": rec.config["n_steps"]}
    if eta is not None:
        art.curve("invariant", t, rec.column("invariant_q"), ("t", "Q"))
        drift = check_quadratic_invariant(rec, eta)
        result["invariant_drift"] = drift.max_drift
        art.say(f"quadratic invariant (eta = {eta:g}) drift: {drift.max_drift:.3e}"
                + (" relative" if drift.relative else " absolute"))
    if p["track_radius"]:
        art.curve("radius", t, rec.column("radius"), ("t", "sigma_hat"))
    for sig in p["sigmas"]:
        col = rec.column(f"gevrey[{float(sig):g}]")
        art.say(f"gevrey[{float(sig):g}]: {col[0]:.6e} -> {col[-1]:.6e}")
    return result


def _run_acl(cfg: RunConfig, art: _Artifacts, state: SpectralState) -> dict:
    p = cfg.params
    res = acl_defect_scan(state, cfg.system, p["sigmas"], float(p["rho"]), cfg.stepper,
                          delta=p["delta"], c0=cfg.c0, a=cfg.a)
    for sig, d, pd in zip(res.sigmas, res.defects, res.pair_defects):
        art.rows.append({"kind": "defect", "sigma": sig, "defect": d, "pair_defect": pd})
    art.curve("defect", res.sigmas, res.defects, ("sigma", "D"))
    art.say(f"delta: {res.delta:.6e}, eta: {res.eta:g}")
    art.say(f"fitted exponent: {res.exponent if res.exponent is None else f'{res.exponent:.4f}'}"
            + ("" if res.exponent_stderr is None else f" +- {res.exponent_stderr:.4f}"))
    art.say(f"C_b: {res.C_b:.4e}; clipped points: {res.n_clipped}; negative-defect flag: {res.flagged}")
    return {"exponent": res.exponent, "exponent_stderr": res.exponent_stderr, "C_b": res.C_b,
            "delta": res.delta, "n_clipped": res.n_clipped, "flagged": res.flagged}


def _run_commutator(cfg: RunConfig, art: _Artifacts, state: SpectralState) -> dict:
    sig = cfg.params["sigmas"]
    fits = commutator_scaling_fit(state, cfg.system, sig, cfg.stepper.dealias)
    out = {}
    for term, fit in fits.items():
        for s, n in zip(sig, fit.norms):
            art.rows.append({"kind": "commutator", "term": term, "sigma": s, "norm": n})
        if not fit.skipped:
            art.curve(term, sig, fit.norms, ("sigma", f"|{term}|"))
        art.say(f"{term}: " + ("vanishes, skipped" if fit.skipped
                               else f"exponent {fit.exponent:.4f} +- {fit.stderr:.4f}"))
        out[term] = fit.exponent
    return out


def _run_picard(cfg: RunConfig, art: _Artifacts, state: SpectralState) -> dict:
    p = cfg.params
    if cfg.stepper.dealias:
        state = dealias_state(state)
    delta = lifespan(state.u_hat.l2_norm(), state.v_hat.l2_norm(), cfg.c0, cfg.a)
    deltas = p["deltas"] or [delta * f for f in (0.25, 0.5, 1.0, 2.0, 4.0)]
    study = picard_contraction_study(state, cfg.system, deltas, int(p["n_iters"]),
                                     int(p["quadrature_nodes"]), workers=cfg.threads)
    for c in study.cells:
        art.rows.append({"kind": "picard", "delta": c.delta, "differences": c.differences,
                         "ratios": c.ratios, "max_ratio": c.max_ratio, "failed": c.failed})
        art.say(f"delta {c.delta:.4e}: max ratio {c.max_ratio:.4f}" + (" (diverged)" if c.failed else ""))
    art.curve("max_ratio", [c.delta for c in study.cells], [c.max_ratio for c in study.cells],
              ("delta", "max_ratio"))
    art.say(f"lifespan delta: {delta:.4e}; delta*: {study.delta_star}")
    return {"lifespan": delta, "delta_star": study.delta_star, "monotone": study.monotone}


def _run_radius(cfg: RunConfig, art: _Artifacts, state: SpectralState) -> dict:
    p = cfg.params
    res = radius_decay_experiment(state, cfg.system, cfg.stepper, float(p["t_final"]),
                                  int(p["n_samples"]), p["t_first"], float(p["epsilon_tolerance"]),
                                  float(p["noise_floor"]))
    t, r = res.times, res.radii
    # data with measured radius r0 lies in G^sigma for every sigma < r0
    sigma0 = float(p["sigma0"]) if p["sigma0"] is not None else 0.9 * float(r[0])
    st = dealias_state(state) if cfg.stepper.dealias else state
    norm0 = pair_norm(st, GevreyParams(sigma0))
    C_b = p["C_b"]
    if C_b is None:
        acl = acl_defect_scan(state, cfg.system, p["acl_sigmas"], float(p["rho"]), cfg.stepper,
                              c0=cfg.c0, a=cfg.a)
        C_b = acl.C_b
    delta = lifespan(norm0, norm0, cfg.c0, cfg.a)
    pred = predicted_lower_bound_curve(norm0, sigma0, float(p["rho"]), cfg.c0, cfg.a,
                                       max(float(C_b), 1e-300), t, delta=delta)
    below = bool(np.all(pred <= r))
    for (tt, est), pr in zip(res.per_time_radii, pred):
        art.rows.append({"kind": "radius", "t": tt, "sigma_hat": est.sigma_hat, "window": est.window,
                         "stderr": est.slope_stderr, "floor_hit": est.floor_hit, "predicted": pr})
    art.curve("radius", t, r, ("t", "sigma_hat"))
    art.curve("predicted", t, pred, ("t", "sigma_lower"))
    art.say(f"fitted decay: sigma ~ {res.c_hat:.4g} t^{res.exponent_hat:.4f} (+- {res.exponent_stderr:.4f})"
            f" over t in [{res.window[0]:.3g}, {res.window[1]:.3g}]")
    art.say(f"consistency with the t^(-4/3) lower bound (slack {res.epsilon_tolerance}): "
            f"{'consistent' if res.consistent else 'INCONSISTENT'}")
    art.say(f"predicted lower bound below measured radii: {below} (C_b = {float(C_b):.3e})")
    return {"exponent": res.exponent_hat, "consistent": res.consistent, "bound_below": below,
            "C_b": float(C_b), "sigma0": sigma0}


def _run_inequality(cfg: RunConfig, art: _Artifacts) -> dict:
    p = cfg.params
    xi = np.arange(float(p["xi_min"]), float(p["xi_max"]) + 0.5 * float(p["xi_step"]), float(p["xi_step"]))
    rep = commutator_inequality_scan(xi, p["sigmas"], p["rhos"], float(p["tol"]))
    art.rows.append({"kind": "inequality", **vars(rep)})
    art.say(f"max ratio {rep.max_ratio:.15f} over {rep.n_tuples} tuples at (xi1, xi2, sigma, rho) = {rep.worst}")
    art.say(f"bound holds: {rep.passed}")
    return {"max_ratio": rep.max_ratio, "passed": rep.passed}


def run(cfg: RunConfig) -> RunOutcome:
    """Execute one experiment and write its artifacts."""
    art = _Artifacts(cfg)
    for line in _admissibility_lines(cfg.system):
        art.say(line)
    exp = cfg.experiment
    if exp == "classify":
        result = _run_classify(cfg, art)
        return RunOutcome(EXIT_OK, art.dir, "complete", art.finish("complete", result))
    if cfg.enforce_admissibility and exp != "inequality-scan" and not classify(cfg.system).admissible:
        art.say("refused: enforce_admissibility is set and the system is not admissible")
        return RunOutcome(EXIT_REFUSED, art.dir, "refused", art.finish("refused"))
    try:
        if exp == "inequality-scan":
            result = _run_inequality(cfg, art)
        else:
            state = cfg.initial_state()
            handler = {"simulate": _run_simulate, "acl-scan": _run_acl, "commutator-scan": _run_commutator,
                       "picard": _run_picard, "radius": _run_radius}[exp]
            result = handler(cfg, art, state)
    except BlowUpError as err:
        art.say(f"blow-up: {err}")
        return RunOutcome(EXIT_BLOWUP, art.dir, "blowup", art.finish("blowup", {"time": err.time}))
    except Exception as err:  # keep partial artifacts, report, nonzero exit
        logger.exception("experiment %s failed", exp)
        art.say(f"error: {type(err).__name__}: {err}")
        return RunOutcome(EXIT_ERROR, art.dir, "error", art.finish("error"))
    return RunOutcome(EXIT_OK, art.dir, "complete", art.finish("complete", result))


# -- command line ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ckdv", description="Coupled KdV analyticity-radius experiments.")
    sub = ap.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", type=Path, help="TOML run configuration (default: MB(1), sech2 data)")
        sp.add_argument("--output", type=Path, help="override output_dir")
        sp.add_argument("--seed", type=int, help="override seed")
        sp.add_argument("--threads", type=int, help="worker threads for independent cells")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    overrides = {"seed": args.seed, "threads": args.threads,
                 "output_dir": str(args.output) if args.output else None}
    try:
        if args.config is None:
            raw = {k: v for k, v in overrides.items() if v is not None}
            cfg = parse_config(raw, ".", args.experiment)
        else:
            cfg = load_config(args.config, args.experiment, **overrides)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    outcome = run(cfg)
    sys.stdout.write(outcome.summary)
    print(f"artifacts: {outcome.run_dir}")
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
