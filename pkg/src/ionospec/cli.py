"""Command-line front end: figure presets and plot-ready dataset export.

Every mode computes with the library closed forms and writes CSV (or JSON)
to a file or stdout.  Output is deterministic: the only non-data line is a
leading `# ionospec <version>` comment in CSV files, numbers carry 17
significant digits (binary64 round-trip exact), and warnings go to stderr,
never into the data stream.  Config files are flat `key = value` text with
`#` comments; command-line flags override file values, unknown keys are
hard errors.

Exit status: 0 success, 1 typed computation/IO error, 2 usage or config
error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .core import NormalizedParams, build_effective, from_normalized
from .errors import ConfigError, IonospecError
from .fano import fano_from_normalized, fano_spectrum
from .oracle import compare, discretize
from .spectra import figure_preset, spectrum_grid, time_resolved_intensity
from .zeros import SWEEP_PRESET_NAMES, find_dynamical_zeros, sweep_preset, sweep_zero_traces

__all__ = ["main", "entry"]

_REQUIRED = object()

# flag name -> (type, default, help); _REQUIRED must come from CLI or config
_PARAMS = [
    ("qa", float, 0.0, "neighbor channel asymmetry q_a"),
    ("gamma-a", float, 0.0, "transfer-induced width gamma_a"),
    ("qb", float, 0.0, "reference channel asymmetry q_b"),
    ("gamma-b", float, 0.0, "reference channel width gamma_b"),
    ("omega", float, _REQUIRED, "signed pump strength Omega"),
    ("ea", float, 1.0, "neighbor excitation energy E_a"),
    ("eb", float, 1.0, "reference level energy E_b"),
    ("el", float, 1.0, "pump photon energy E_L"),
]
_GRID = [
    ("e-min", float, None, "lower edge of the energy grid"),
    ("e-max", float, None, "upper edge of the energy grid"),
    ("n-points", int, 2001, "number of energy grid points"),
]
_OUT = [
    ("out", str, None, "output file (default: stdout)"),
    ("format", str, "csv", "output format: csv or json"),
]

_MODE_FLAGS = {
    "spectrum": _PARAMS + _GRID + _OUT,
    "decompose": _PARAMS + _GRID + _OUT,
    "time-resolved": _PARAMS + _GRID + [
        ("e", float, None, "single energy (default: whole grid)"),
        ("t-min", float, 0.0, "first sample time"),
        ("t-max", float, _REQUIRED, "last sample time"),
        ("n-times", int, 201, "number of time samples"),
    ] + _OUT,
    "zeros": _PARAMS + [
        ("j", str, "both", "spectrum index: 0, 1 or both"),
        ("e-min", float, None, "lower edge of the zero search range"),
        ("e-max", float, None, "upper edge of the zero search range"),
        ("n-scan", int, 4001, "scan points for sign changes"),
    ] + _OUT,
    "sweep": [f for f in _PARAMS if f[0] != "omega"] + [
        ("omega-min", float, 0.02, "first pump strength"),
        ("omega-max", float, 2.0, "last pump strength"),
        ("omega-step", float, 0.02, "pump strength step"),
        ("j", str, "0", "spectrum index: 0, 1 or both"),
        ("e-min", float, None, "lower edge of the zero search range"),
        ("e-max", float, None, "upper edge of the zero search range"),
        ("out", str, _REQUIRED, "output CSV file"),
        ("events-out", str, None, "events JSON file (default: <out>.events.json)"),
    ],
    "fano": [
        ("qb", float, 0.0, "reference channel asymmetry q_b"),
        ("gamma-b", float, _REQUIRED, "reference channel width gamma_b"),
        ("omega", float, _REQUIRED, "signed pump strength Omega"),
        ("eb", float, 1.0, "reference level energy E_b"),
        ("el", float, 1.0, "pump photon energy E_L"),
    ] + _GRID + _OUT,
    "oracle-check": _PARAMS + [
        ("t", float, 8.0, "comparison time for amplitudes"),
        ("window", float, 40.0, "half width of the discretized continuum"),
        ("n-levels", int, 2001, "number of discrete continuum levels"),
        ("out", str, None, "output file (default: stdout)"),
        ("format", str, "json", "output format: json only for this mode"),
    ],
    "preset": [
        ("name", str, _REQUIRED, "preset name (positional)"),
        ("omega", float, None, "override the preset pump strength"),
        ("n-points", int, None, "override the preset grid size"),
        ("out", str, None, "output file (default: stdout)"),
        ("events-out", str, None, "events JSON file for sweep presets"),
        ("format", str, "csv", "output format: csv or json"),
    ],
}

MODES = tuple(_MODE_FLAGS)


def _attr(name: str) -> str:
    return name.replace("-", "_")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ionospec",
        description="Photoelectron spectra of a driven ionization channel "
        "coupled to a neighbor two-level atom.",
    )
    parser.add_argument("--version", action="version", version=f"ionospec {__version__}")
    sub = parser.add_subparsers(dest="mode", required=True, metavar="mode")
    for mode, flags in _MODE_FLAGS.items():
        sp = sub.add_parser(mode, help=f"{mode} computation")
        sp.add_argument("--config", type=str, default=None, help="flat key = value config file")
        for name, typ, _default, doc in flags:
            if mode == "preset" and name == "name":
                sp.add_argument("name", nargs="?", default=None, help=doc)
            else:
                # defaults applied after config merge so flags can override
                sp.add_argument(f"--{name}", type=typ, default=None, help=doc, dest=_attr(name))
    return parser


def _parse_config_text(text: str, path: str) -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not eq or not key or not val:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        values[key] = val
    return values


def _merge_config(args: argparse.Namespace) -> dict:
    """Resolve flags, config file and defaults into one validated dict."""
    mode = args.mode
    flags = _MODE_FLAGS[mode]
    known = {name: typ for name, typ, _d, _h in flags}

    file_values = {}
    if args.config is not None:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config!r}: {exc}")
        for key, val in _parse_config_text(text, args.config).items():
            if key == "mode":
                if val != mode:
                    raise ConfigError(
                        f"{args.config}: conflicting modes: file says {val!r}, "
                        f"command line says {mode!r}"
                    )
                continue
            if key not in known:
                raise ConfigError(f"{args.config}: unknown key {key!r} for mode {mode!r}")
            try:
                file_values[key] = known[key](val)
            except ValueError:
                raise ConfigError(
                    f"{args.config}: key {key!r}: cannot parse {val!r} as {known[key].__name__}"
                )

    cfg = {"mode": mode}
    for name, typ, default, _help in flags:
        given = getattr(args, _attr(name))
        if given is None and name in file_values:
            given = file_values[name]
        if given is None:
            if default is _REQUIRED:
                if mode == "preset" and name == "name":
                    raise ConfigError("preset mode requires a preset name")
                raise ConfigError(f"mode {mode!r} requires --{name}")
            given = default
        if isinstance(given, float) and not math.isfinite(given):
            raise ConfigError(f"--{name} must be finite, got {given!r}")
        cfg[name] = given

    if "format" in cfg and cfg["format"] not in ("csv", "json"):
        raise ConfigError(f"--format must be csv or json, got {cfg['format']!r}")
    if "j" in cfg and cfg["j"] not in ("0", "1", "both"):
        raise ConfigError(f"--j must be 0, 1 or both, got {cfg['j']!r}")
    if mode == "oracle-check" and cfg["format"] != "json":
        raise ConfigError("oracle-check emits a JSON report; use --format json")
    if ("e-min" in cfg) and ((cfg["e-min"] is None) != (cfg.get("e-max") is None)):
        raise ConfigError("--e-min and --e-max must be given together")
    return cfg


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _emit(path, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv(header: list, rows) -> str:
    lines = [f"# ionospec {__version__}", ",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _params_from(cfg: dict) -> NormalizedParams:
    return NormalizedParams(
        q_a=cfg.get("qa", 0.0),
        gamma_a=cfg.get("gamma-a", 0.0),
        q_b=cfg.get("qb", 0.0),
        gamma_b=cfg.get("gamma-b", 0.0),
        Omega=cfg["omega"],
        E_a=cfg.get("ea", 1.0),
        E_b=cfg.get("eb", 1.0),
        E_L=cfg.get("el", 1.0),
    )


def _warn_window(dec) -> None:
    if dec.window_warning:
        print(
            f"ionospec: warning: grid window holds only "
            f"{100.0 * dec.window_mass:.2f}% of the spectrum; widen --e-min/--e-max",
            file=sys.stderr,
        )


def _grid_decomposition(cfg: dict):
    dec = spectrum_grid(
        _params_from(cfg),
        e_min=cfg["e-min"],
        e_max=cfg["e-max"],
        n_points=cfg["n-points"],
    )
    _warn_window(dec)
    return dec


def _run_spectrum(cfg: dict) -> int:
    dec = _grid_decomposition(cfg)
    if cfg["format"] == "csv":
        rows = zip(dec.grid, dec.I_lt, dec.I_st0, dec.I_st1, dec.I_osc, dec.phi0, dec.phi1)
        _emit(cfg["out"], _csv(["E", "I_lt", "I_st0", "I_st1", "I_osc", "phi0", "phi1"], rows))
    else:
        _emit(cfg["out"], _json_text({
            "E": dec.grid.tolist(),
            "I_lt": dec.I_lt.tolist(),
            "I_st0": dec.I_st0.tolist(),
            "I_st1": dec.I_st1.tolist(),
            "I_osc": dec.I_osc.tolist(),
            "phi0": dec.phi0.tolist(),
            "phi1": dec.phi1.tolist(),
            "xi1": dec.xi1,
            "xi2": dec.xi2,
            "delta_xi": dec.delta_xi,
            "window_mass": dec.window_mass,
        }))
    return 0


def _run_decompose(cfg: dict) -> int:
    dec = _grid_decomposition(cfg)
    a1, a2 = dec.lta.d_xi1, dec.lta.d_xi2
    header = [
        "E",
        "re_d_xi1_0", "im_d_xi1_0", "re_d_xi2_0", "im_d_xi2_0",
        "re_d_xi1_1", "im_d_xi1_1", "re_d_xi2_1", "im_d_xi2_1",
        "xi1", "xi2",
    ]
    if cfg["format"] == "csv":
        rows = (
            (e, a1[i, 0].real, a1[i, 0].imag, a2[i, 0].real, a2[i, 0].imag,
             a1[i, 1].real, a1[i, 1].imag, a2[i, 1].real, a2[i, 1].imag,
             dec.xi1, dec.xi2)
            for i, e in enumerate(dec.grid)
        )
        _emit(cfg["out"], _csv(header, rows))
    else:
        _emit(cfg["out"], _json_text({
            "E": dec.grid.tolist(),
            "re_d_xi1_0": a1[:, 0].real.tolist(),
            "im_d_xi1_0": a1[:, 0].imag.tolist(),
            "re_d_xi2_0": a2[:, 0].real.tolist(),
            "im_d_xi2_0": a2[:, 0].imag.tolist(),
            "re_d_xi1_1": a1[:, 1].real.tolist(),
            "im_d_xi1_1": a1[:, 1].imag.tolist(),
            "re_d_xi2_1": a2[:, 1].real.tolist(),
            "im_d_xi2_1": a2[:, 1].imag.tolist(),
            "xi1": dec.xi1,
            "xi2": dec.xi2,
        }))
    return 0


def _run_time_resolved(cfg: dict) -> int:
    if not cfg["t-max"] > cfg["t-min"]:
        raise ConfigError("--t-max must exceed --t-min")
    if cfg["n-times"] < 2:
        raise ConfigError("--n-times must be >= 2")
    dec = _grid_decomposition(cfg)
    times = np.linspace(cfg["t-min"], cfg["t-max"], cfg["n-times"])
    if cfg["e"] is not None:
        indices = [int(np.argmin(np.abs(dec.grid - cfg["e"])))]
    else:
        indices = range(len(dec.grid))
    rows = []
    for t in times:
        for i in indices:
            i0, i1 = time_resolved_intensity(dec, i, float(t))
            rows.append((t, dec.grid[i], i0, i1))
    if cfg["format"] == "csv":
        _emit(cfg["out"], _csv(["t", "E", "I0", "I1"], rows))
    else:
        _emit(cfg["out"], _json_text({
            "t": [r[0] for r in rows],
            "E": [float(r[1]) for r in rows],
            "I0": [float(r[2]) for r in rows],
            "I1": [float(r[3]) for r in rows],
        }))
    return 0


def _selected_js(cfg: dict):
    return (0, 1) if cfg["j"] == "both" else (int(cfg["j"]),)


def _run_zeros(cfg: dict) -> int:
    params = _params_from(cfg)
    e_range = None
    if cfg["e-min"] is not None:
        e_range = (cfg["e-min"], cfg["e-max"])
    rows = []
    for j in _selected_js(cfg):
        zs = find_dynamical_zeros(params, j=j, e_range=e_range, n_scan=cfg["n-scan"])
        for z in zs:
            rows.append((j, float(z), (float(z) - params.E_a) / params.gamma_a))
    if cfg["format"] == "csv":
        _emit(cfg["out"], _csv(["spectrum_index", "E_D", "E_D_rel"], rows))
    else:
        _emit(cfg["out"], _json_text({
            "zeros": [
                {"spectrum_index": j, "E_D": z, "E_D_rel": rel} for j, z, rel in rows
            ]
        }))
    return 0


def _sweep_output(cfg: dict, traces) -> int:
    """Write sweep CSV plus the companion events JSON file."""
    rows = []
    events = []
    branch_id = 0
    for trace in traces:
        for b in trace.branches:
            for om, ed in zip(b.omega, b.E_D):
                rows.append((om, branch_id, float(ed), trace.spectrum_index))
            branch_id += 1
        for ev in trace.events:
            events.append({
                "omega": float(ev.omega),
                "E_D": float(ev.E_D),
                "kind": ev.kind,
                "spectrum_index": trace.spectrum_index,
            })
    _emit(cfg["out"], _csv(["omega", "branch_id", "E_D", "spectrum_index"], rows))
    events_path = cfg["events-out"]
    if events_path is None:
        events_path = cfg["out"] + ".events.json"
    _emit(events_path, _json_text({"events": events}))
    return 0


def _run_sweep(cfg: dict) -> int:
    if cfg["omega-step"] <= 0:
        raise ConfigError("--omega-step must be > 0")
    params = NormalizedParams(
        q_a=cfg["qa"], gamma_a=cfg["gamma-a"], q_b=cfg["qb"], gamma_b=cfg["gamma-b"],
        Omega=0.0, E_a=cfg["ea"], E_b=cfg["eb"], E_L=cfg["el"],
    )
    omegas = np.arange(cfg["omega-min"], cfg["omega-max"] + 1e-12, cfg["omega-step"])
    e_range = None
    if cfg["e-min"] is not None:
        e_range = (cfg["e-min"], cfg["e-max"])
    traces = [
        sweep_zero_traces(params, omegas, j=j, e_range=e_range) for j in _selected_js(cfg)
    ]
    return _sweep_output(cfg, traces)


def _run_fano(cfg: dict) -> int:
    params = NormalizedParams(
        q_b=cfg["qb"], gamma_b=cfg["gamma-b"], Omega=cfg["omega"],
        E_b=cfg["eb"], E_L=cfg["el"],
    )
    fp = fano_from_normalized(params)
    e = None
    if cfg["e-min"] is not None:
        e = np.linspace(cfg["e-min"], cfg["e-max"], cfg["n-points"])
    sp = fano_spectrum(fp, e=e, n_points=cfg["n-points"])
    if cfg["format"] == "csv":
        _emit(cfg["out"], _csv(["E", "I_lt"], zip(sp.energies, sp.intensity)))
    else:
        _emit(cfg["out"], _json_text({
            "E": sp.energies.tolist(),
            "I_lt": sp.intensity.tolist(),
        }))
    return 0


def _run_oracle_check(cfg: dict) -> int:
    phys = from_normalized(_params_from(cfg))
    dsys = discretize(phys, window=cfg["window"], n_levels=cfg["n-levels"])
    esys = build_effective(phys)
    report = compare(dsys, esys, t=cfg["t"])
    _emit(cfg["out"], _json_text(report.as_dict()))
    return 0


def _run_preset(cfg: dict) -> int:
    name = cfg["name"]
    if name in SWEEP_PRESET_NAMES:
        if cfg["out"] is None:
            raise ConfigError(f"sweep preset {name!r} requires --out")
        spec = sweep_preset(name)
        traces = [sweep_zero_traces(spec.params, spec.omegas, j=j) for j in spec.js]
        return _sweep_output(cfg, traces)

    spec = figure_preset(name, omega=cfg["omega"])
    n_points = cfg["n-points"] if cfg["n-points"] is not None else spec.n_points
    sub = {
        "out": cfg["out"],
        "format": cfg["format"],
        "e-min": spec.e_min,
        "e-max": spec.e_max,
        "n-points": n_points,
    }
    if spec.model == "fano":
        sub.update({
            "qb": spec.params.q_b, "gamma-b": spec.params.gamma_b,
            "omega": spec.params.Omega, "eb": spec.params.E_b, "el": spec.params.E_L,
        })
        return _run_fano(sub)
    sub.update({
        "qa": spec.params.q_a, "gamma-a": spec.params.gamma_a,
        "qb": spec.params.q_b, "gamma-b": spec.params.gamma_b,
        "omega": spec.params.Omega, "ea": spec.params.E_a,
        "eb": spec.params.E_b, "el": spec.params.E_L,
    })
    return _run_spectrum(sub)


_RUNNERS = {
    "spectrum": _run_spectrum,
    "decompose": _run_decompose,
    "time-resolved": _run_time_resolved,
    "zeros": _run_zeros,
    "sweep": _run_sweep,
    "fano": _run_fano,
    "oracle-check": _run_oracle_check,
    "preset": _run_preset,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge_config(args)
    except ConfigError as exc:
        print(f"ionospec: config error: {exc}", file=sys.stderr)
        return 2
    try:
        return _RUNNERS[cfg["mode"]](cfg)
    except ConfigError as exc:
        print(f"ionospec: config error: {exc}", file=sys.stderr)
        return 2
    except IonospecError as exc:
        print(f"ionospec: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"ionospec: i/o error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
