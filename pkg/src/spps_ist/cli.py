"""Command-line front end.

Commands::

    spps-ist direct   --potential chirped-sech --A 1 --gamma 0.1 --out sd.json
    spps-ist evolve   --input sd.json --times 1,2 --out outdir
    spps-ist invert   --input sd.json --out q.csv
    spps-ist solve    --potential soliton --alpha 0.5 --beta 1.5707963 --times 0,1,2
    spps-ist validate 2

Settings may also come from a JSON config file (``--config``) whose keys are
the long flag names; flags given on the command line win.  Failures print a
JSON error record on stderr and exit with status 1.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .direct import DEFAULT_K, ScatteringData, log_spaced_rho, run_direct
from .errors import ConfigurationError, NFTError
from .evolution import evolve_to
from .formats import load_scattering_data, save_scattering_data, save_solution
from .grid_quad import DEFAULT_NODES_PER_UNIT
from .inverse import (DEFAULT_X_STEP, InverseConfig, default_x_grid, recovery_grid,
                      run_inverse)
from .potentials import DEFAULT_TAIL_THRESHOLD, PotentialKind, PotentialSpec
from .spps import DEFAULT_N_DIRECT, DEFAULT_N_INVERSE
from .validation import validate

log = logging.getLogger("spps_ist")

COMMANDS = ("direct", "evolve", "invert", "solve", "validate")
POTENTIAL_PARAMS = ("A", "gamma", "alpha", "beta", "delta", "theta", "sigma", "mu")
# catalogue defaults are the benchmark parameters
_CATALOGUE = {
    "chirped-sech": PotentialSpec.chirped_sech,
    "soliton": PotentialSpec.soliton,
    "chirped-gaussian": PotentialSpec.chirped_gaussian,
    "rational-tail": PotentialSpec.rational_tail,
}
_DEFAULTS = {
    "potential": None, "file": None, "N_direct": DEFAULT_N_DIRECT,
    "N_inverse": DEFAULT_N_INVERSE, "K": DEFAULT_K, "domain": None,
    "nodes_per_unit": DEFAULT_NODES_PER_UNIT, "tail_threshold": DEFAULT_TAIL_THRESHOLD,
    "times": None, "x_range": None, "x_step": DEFAULT_X_STEP, "input": None,
    "out": None, "log_level": "WARNING", "example": None,
    **{p: None for p in POTENTIAL_PARAMS},
}


@dataclass
class RunConfig:
    command: str
    potential: PotentialSpec | None = None
    N_direct: int = DEFAULT_N_DIRECT
    N_inverse: int = DEFAULT_N_INVERSE
    K: int = DEFAULT_K
    domain: tuple | None = None
    nodes_per_unit: float = DEFAULT_NODES_PER_UNIT
    tail_threshold: float = DEFAULT_TAIL_THRESHOLD
    times: list = field(default_factory=list)
    x_range: tuple | None = None
    x_step: float = DEFAULT_X_STEP
    input: str | None = None
    out: str | None = None
    log_level: str = "WARNING"
    example: int | None = None

    def check(self):
        if self.command not in COMMANDS:
            raise ConfigurationError(f"unknown command {self.command!r}")
        for name in ("N_direct", "N_inverse", "K"):
            if int(getattr(self, name)) < 1:
                raise ConfigurationError(f"{name} must be positive")
        if not self.nodes_per_unit > 0 or not self.x_step > 0:
            raise ConfigurationError("nodes-per-unit and x-step must be positive")
        if self.command in ("direct", "solve") and self.potential is None:
            raise ConfigurationError(f"{self.command} needs --potential")
        if self.command in ("evolve", "invert") and not self.input:
            raise ConfigurationError(f"{self.command} needs --input")
        if self.command in ("solve", "evolve") and not self.times:
            raise ConfigurationError(f"{self.command} needs a nonempty --times list")
        if self.command == "validate" and self.example not in (1, 2, 3, 4):
            raise ConfigurationError("validate needs an example id 1, 2, 3 or 4")
        return self

    def inverse_config(self, sd: ScatteringData):
        if self.x_range is not None:
            lo, hi = self.x_range
            grid = default_x_grid(lo, hi, self.x_step)
        else:
            grid = recovery_grid(sd, self.x_step)
        cfg = InverseConfig(N=int(self.N_inverse), x_grid=grid)
        cfg.check(sd)  # 2N <= K + M, known only after the direct step
        return cfg


def _interval(text):
    try:
        lo, hi = (float(v) for v in str(text).split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"empty interval {text!r}")
    return lo, hi


def _times(text):
    if isinstance(text, (list, tuple)):
        return [float(t) for t in text]
    try:
        return [float(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected t1,t2,..., got {text!r}") from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file of settings; flags override it")
    common.add_argument("--log-level", dest="log_level", default=None,
                        choices=("DEBUG", "INFO", "WARNING", "ERROR"))
    common.add_argument("--out", default=None, help="output file or directory")

    pot = argparse.ArgumentParser(add_help=False)
    g = pot.add_argument_group("potential")
    g.add_argument("--potential", choices=[k.value for k in PotentialKind], default=None)
    for p in POTENTIAL_PARAMS:
        g.add_argument(f"--{p}", type=float, default=None)
    g.add_argument("--file", default=None, help="CSV of x, Re q, Im q samples")
    g.add_argument("--N-direct", dest="N_direct", type=int, default=None)
    g.add_argument("--K", type=int, default=None, help="number of real rho samples")
    g.add_argument("--domain", type=_interval, default=None, help="x-domain override lo:hi")
    g.add_argument("--nodes-per-unit", dest="nodes_per_unit", type=float, default=None)
    g.add_argument("--tail-threshold", dest="tail_threshold", type=float, default=None)

    inv = argparse.ArgumentParser(add_help=False)
    g = inv.add_argument_group("inversion")
    g.add_argument("--N-inverse", dest="N_inverse", type=int, default=None)
    g.add_argument("--x-range", dest="x_range", type=_interval, default=None,
                   help="recovery interval lo:hi (default: domain clipped to [-12,12])")
    g.add_argument("--x-step", dest="x_step", type=float, default=None)

    tim = argparse.ArgumentParser(add_help=False)
    tim.add_argument("--times", type=_times, default=None, help="t1,t2,...")

    src = argparse.ArgumentParser(add_help=False)
    src.add_argument("--input", default=None, help="scattering-data JSON file")

    parser = argparse.ArgumentParser(prog="spps-ist", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("direct", parents=[common, pot], help="direct transform at t=0")
    sub.add_parser("evolve", parents=[common, src, tim], help="evolve scattering data")
    sub.add_parser("invert", parents=[common, src, inv], help="recover q from scattering data")
    sub.add_parser("solve", parents=[common, pot, inv, tim], help="direct, evolve, invert")
    v = sub.add_parser("validate", parents=[common], help="reproduce a benchmark example")
    v.add_argument("example", type=int, nargs="?", default=None)
    v.add_argument("--nodes-per-unit", dest="nodes_per_unit", type=float, default=None)
    return parser


def _load_config(path):
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config {path}:{exc.lineno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ConfigurationError(f"config {path} must hold a JSON object")
    out = {}
    for key, value in raw.items():
        k = key.lstrip("-").replace("-", "_")
        if k not in _DEFAULTS:
            raise ConfigurationError(f"config {path}: unknown key {key!r}")
        out[k] = value
    for k in ("domain", "x_range"):
        if isinstance(out.get(k), str):
            out[k] = _interval(out[k])
    if "times" in out:
        out["times"] = _times(out["times"])
    return out


def _potential(settings):
    kind = settings.get("potential")
    if kind is None:
        return None
    if kind == "zero":
        return PotentialSpec.zero()
    if kind == "file":
        if not settings.get("file"):
            raise ConfigurationError("--potential file needs --file")
        return PotentialSpec.from_file(settings["file"])
    if kind not in _CATALOGUE:
        raise ConfigurationError(f"unknown potential {kind!r}")
    given = {p: settings[p] for p in POTENTIAL_PARAMS if settings.get(p) is not None}
    try:
        return _CATALOGUE[kind](**given)
    except TypeError as exc:
        raise ConfigurationError(f"{kind}: {exc}") from None


def resolve_config(args) -> RunConfig:
    """Merge built-in defaults, the config file and command-line flags."""
    flags = {k: v for k, v in vars(args).items() if k not in ("config", "command")}
    settings = dict(_DEFAULTS)
    if getattr(args, "config", None):
        settings.update(_load_config(args.config))
    settings.update({k: v for k, v in flags.items() if v is not None})
    cfg = RunConfig(
        command=args.command,
        potential=_potential(settings),
        N_direct=int(settings["N_direct"]), N_inverse=int(settings["N_inverse"]),
        K=int(settings["K"]),
        domain=tuple(settings["domain"]) if settings["domain"] else None,
        nodes_per_unit=float(settings["nodes_per_unit"]),
        tail_threshold=float(settings["tail_threshold"]),
        times=list(settings["times"] or []),
        x_range=tuple(settings["x_range"]) if settings["x_range"] else None,
        x_step=float(settings["x_step"]), input=settings["input"], out=settings["out"],
        log_level=str(settings["log_level"]).upper(),
        example=None if settings["example"] is None else int(settings["example"]),
    )
    return cfg.check()


def _tag(t):
    return f"t{t:g}"


def _direct(cfg: RunConfig):
    rho = log_spaced_rho(cfg.K)
    res = run_direct(cfg.potential, N=cfg.N_direct, rho=rho, domain=cfg.domain,
                     nodes_per_unit=cfg.nodes_per_unit, tail_threshold=cfg.tail_threshold)
    return res.data


def _report_sd(sd, stream):
    print(f"eigenvalues: {sd.M}", file=stream)
    for rho, c in zip(sd.eigenvalues, sd.norming_constants):
        print(f"  rho = {rho.real:.15g} {rho.imag:+.15g}i   c = {c.real:.15g} {c.imag:+.15g}i",
              file=stream)
    print(f"unitarity defect: {sd.unitarity_defect():.3e}", file=stream)


def _invert(sd, cfg, path):
    res = run_inverse(sd, cfg.inverse_config(sd))
    save_solution(path, res.x, res.q_recovered)
    return {
        "t": res.t, "solution": str(path), "points": int(len(res.x)),
        "residual_max": float(np.max(res.ls_residuals)),
        "residual_median": float(np.median(res.ls_residuals)),
        "wronskian_epsilon": float(res.wronskian_epsilon),
    }


def cmd_direct(cfg: RunConfig, stream=sys.stdout):
    sd = _direct(cfg)
    out = Path(cfg.out or "scattering_t0.json")
    save_scattering_data(out, sd)
    _report_sd(sd, stream)
    print(f"wrote {out}", file=stream)
    return 0


def cmd_evolve(cfg: RunConfig, stream=sys.stdout):
    sd = load_scattering_data(cfg.input)
    outdir = Path(cfg.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    for t in cfg.times:
        path = outdir / f"scattering_{_tag(t)}.json"
        save_scattering_data(path, evolve_to(sd, t))
        print(f"wrote {path}", file=stream)
    return 0


def cmd_invert(cfg: RunConfig, stream=sys.stdout):
    sd = load_scattering_data(cfg.input)
    for issue in sd.validation:
        log.warning("%s: %s", cfg.input, issue)
    out = Path(cfg.out or Path(cfg.input).with_suffix(".csv").name)
    info = _invert(sd, cfg, out)
    print(f"t = {info['t']:g}: residual max {info['residual_max']:.3e}, "
          f"epsilon {info['wronskian_epsilon']:.3e}", file=stream)
    print(f"wrote {out}", file=stream)
    return 0


def cmd_solve(cfg: RunConfig, stream=sys.stdout):
    outdir = Path(cfg.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    sd0 = _direct(cfg)
    log.info("direct step: %.1f s", time.perf_counter() - t0)
    _report_sd(sd0, stream)
    summary = {
        "eigenvalues": [[z.real, z.imag] for z in sd0.eigenvalues],
        "norming_constants": [[c.real, c.imag] for c in sd0.norming_constants],
        "unitarity_defect": sd0.unitarity_defect(),
        "runs": [],
    }
    for t in cfg.times:
        sd = evolve_to(sd0, t)
        sd_path = outdir / f"scattering_{_tag(t)}.json"
        save_scattering_data(sd_path, sd)
        info = _invert(sd, cfg, outdir / f"solution_{_tag(t)}.csv")
        info["scattering_data"] = str(sd_path)
        summary["runs"].append(info)
        print(f"t = {t:g}: residual max {info['residual_max']:.3e} "
              f"(median {info['residual_median']:.3e}), "
              f"epsilon {info['wronskian_epsilon']:.3e} -> {info['solution']}", file=stream)
    (outdir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    return 0


def cmd_validate(cfg: RunConfig, stream=sys.stdout):
    kw = {}
    if cfg.nodes_per_unit != DEFAULT_NODES_PER_UNIT:
        kw["nodes_per_unit"] = cfg.nodes_per_unit
    results = validate(cfg.example, **kw)
    for r in results:
        print(r.line(), file=stream)
    if cfg.out:
        Path(cfg.out).write_text(json.dumps([r.as_dict() for r in results], indent=2) + "\n")
    passed = sum(r.passed for r in results)
    print(f"example {cfg.example}: {passed}/{len(results)} checks passed", file=stream)
    return 0


HANDLERS = {"direct": cmd_direct, "evolve": cmd_evolve, "invert": cmd_invert,
            "solve": cmd_solve, "validate": cmd_validate}


def error_record(exc, stage):
    rec = {"error": type(exc).__name__, "stage": stage, "message": str(exc)}
    for attr in ("line", "field", "condition", "residual", "last_stable_order"):
        val = getattr(exc, attr, None)
        if val is not None:
            rec[attr] = val if not isinstance(val, float) or math.isfinite(val) else repr(val)
    xs = getattr(exc, "x_values", None)
    if xs is not None:
        rec["x_values"] = [float(x) for x in np.ravel(xs)[:20]]
    return rec


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    stage = "config"
    try:
        cfg = resolve_config(args)
        logging.basicConfig(level=cfg.log_level, stream=stderr,
                            format="%(levelname)s %(name)s: %(message)s")
        stage = cfg.command
        return HANDLERS[cfg.command](cfg, stdout)
    except (NFTError, OSError, ValueError) as exc:
        print(json.dumps(error_record(exc, stage)), file=stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
