"""Command line front end.

Subcommands
-----------
moments   exact alphabet moments as JSON
grid      closed-form and/or Monte Carlo expected grids, with comparison
slice     zero-Doppler or zero-delay cut, closed form vs Monte Carlo
eisl      normalized integrated-sidelobe sweep over frame lengths
exact     closed form against full symbol enumeration (small N)
compare   discrepancy report between two grid CSV files

Waveform specs are ``family[:key=value,...]``: ``sc``, ``ofdm``,
``otfs:c=4``, ``afdm:c1=0.001953125,c2=0`` (or ``afdm:p=1,c2=0`` for
c1 = p/(2N)), ``haar:seed=7``, ``custom:path=matrix.txt``.  Alphabet
specs are ``psk:M``, ``qam:M``, the shorthands ``qpsk``/``bpsk``, or
``file:points.txt``.

Any flag can instead come from an INI config file (``--config``);
explicit flags win over the file.  Exit codes: 0 success, 1 invalid
input or failed strict/moment gate, 2 a numerical acceptance gate
failed (artifacts are still written for inspection).
"""

import argparse
import configparser
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .basis import (UnitaryBasis, basis_afdm, basis_haar, basis_ofdm, basis_otfs,
                    basis_sc, load_custom_basis)
from .constellation import (Constellation, load_constellation, make_psk, make_qam,
                            moments, DEFAULT_MOMENT_TOL)
from .gridio import (read_expectation_csv, write_complex_grid_csv,
                     write_expectation_csv, write_json)
from .montecarlo import McConfig, compare_grids, estimate_avg_grid, estimate_eisl, exact_avg_grid
from .theory import (TheoryInputs, avg_grid_fast, avg_grid_general, avg_mainlobe,
                     avg_zero_delay, avg_zero_doppler, eisl)

SEED_SCHEME = ("symbols for trial t come from a Philox4x64-10 generator keyed with "
               "the (t+1)-th SplitMix64 output of the base seed")

HEATMAP_FLOOR_DB = -80.0


def _parse_params(paramstr: str, spec: str) -> dict:
    params = {}
    if not paramstr:
        return params
    for item in paramstr.split(","):
        key, sep, val = item.partition("=")
        if not sep or not key or not val:
            raise ValueError("bad parameter %r in spec %r (expected key=value)" % (item, spec))
        params[key.strip()] = val.strip()
    return params


def parse_waveform(spec: str, n: int) -> UnitaryBasis:
    """Build the basis a waveform spec string describes, at frame length n."""
    name, _, paramstr = spec.partition(":")
    name = name.strip().lower()
    params = _parse_params(paramstr, spec)
    try:
        if name == "sc":
            return basis_sc(n)
        if name == "ofdm":
            return basis_ofdm(n)
        if name == "otfs":
            if "c" not in params:
                raise ValueError("otfs needs its Doppler size, e.g. otfs:c=4")
            c = int(params["c"])
            if c < 1 or n % c != 0:
                raise ValueError("otfs split c=%d does not divide N=%d" % (c, n))
            return basis_otfs(c, n // c)
        if name == "afdm":
            if "c2" not in params:
                raise ValueError("afdm needs both chirp rates, e.g. afdm:c1=0.001953125,c2=0")
            if "p" in params:
                c1 = int(params["p"]) / (2.0 * n)
            elif "c1" in params:
                c1 = float(params["c1"])
            else:
                raise ValueError("afdm needs c1 (or integer p with c1 = p/(2N))")
            return basis_afdm(n, c1, float(params["c2"]))
        if name == "haar":
            if "seed" not in params:
                raise ValueError("haar needs an explicit seed, e.g. haar:seed=7")
            return basis_haar(n, int(params["seed"]))
        if name == "custom":
            if "path" not in params:
                raise ValueError("custom needs a matrix file, e.g. custom:path=u.txt")
            basis = load_custom_basis(params["path"])
            if basis.n != n:
                raise ValueError("matrix in %s is %d-point, requested N=%d"
                                 % (params["path"], basis.n, n))
            return basis
    except (TypeError, ValueError) as exc:
        raise ValueError("bad waveform spec %r: %s" % (spec, exc)) from None
    raise ValueError("unknown waveform family %r (families: sc, ofdm, otfs, afdm, haar, custom)"
                     % name)


def parse_constellation(spec: str, normalize: bool = False) -> Constellation:
    """Build the alphabet a constellation spec string describes."""
    name, _, arg = spec.partition(":")
    name = name.strip().lower()
    if name == "qpsk":
        return make_psk(4)
    if name == "bpsk":
        return make_psk(2)
    if name == "psk":
        return make_psk(int(arg))
    if name == "qam":
        return make_qam(int(arg))
    if name == "file":
        if not arg:
            raise ValueError("file constellation needs a path, e.g. file:points.txt")
        return load_constellation(arg, normalize=normalize)
    raise ValueError("unknown constellation %r (use psk:M, qam:M, qpsk, bpsk, file:PATH)" % spec)


def _as_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    if str(value).strip().lower() in ("1", "true", "yes", "on"):
        return True
    if str(value).strip().lower() in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected a boolean, got %r" % (value,))


_CONFIG_KEYS = {
    "experiment": ("n", "trials", "seed", "mode", "axis"),
    "waveform": ("spec",),
    "constellation": ("spec", "normalize"),
    "output": ("dir", "plots", "dense"),
}

_CONFIG_TO_ARG = {
    ("waveform", "spec"): "waveform",
    ("constellation", "spec"): "constellation",
    ("constellation", "normalize"): "normalize",
    ("output", "dir"): "out",
    ("output", "plots"): "plots",
    ("output", "dense"): "dense",
}


def load_config(path: str) -> dict:
    """Read an INI config file into a flat {arg_name: string} dict."""
    cp = configparser.ConfigParser()
    with open(path, "r", encoding="utf-8") as fh:
        cp.read_file(fh)
    out = {}
    for section in cp.sections():
        if section not in _CONFIG_KEYS:
            raise ValueError("%s: unknown config section [%s]" % (path, section))
        for key, value in cp.items(section):
            if key not in _CONFIG_KEYS[section]:
                raise ValueError("%s: unknown key %r in [%s]" % (path, key, section))
            out[_CONFIG_TO_ARG.get((section, key), key)] = value
    return out


_DEFAULTS = {
    "mode": "both",
    "trials": "0",
    "seed": "1",
    "plots": False,
    "dense": False,
    "normalize": False,
    "axis": "zero-doppler",
}


def _resolve(args: argparse.Namespace, required: tuple = ()) -> argparse.Namespace:
    """Fill unset flags from the config file, then from hard defaults."""
    cfg = load_config(args.config) if getattr(args, "config", None) else {}
    for key, value in cfg.items():
        if getattr(args, key, None) in (None, False) and hasattr(args, key):
            if key in ("plots", "dense", "normalize"):
                value = _as_bool(value)
            setattr(args, key, value)
    for key, value in _DEFAULTS.items():
        if getattr(args, key, None) is None and hasattr(args, key):
            setattr(args, key, value)
    for key in required:
        if getattr(args, key, None) is None:
            raise ValueError("missing required option --%s (flag or config file)" % key)
    return args


def _int_list(text) -> list[int]:
    if isinstance(text, (list, tuple)):
        parts = []
        for t in text:
            parts.extend(str(t).split(","))
    else:
        parts = str(text).split(",")
    values = [int(p) for p in parts if p.strip()]
    if not values:
        raise ValueError("empty size list")
    return values


def _waveform_list(value) -> list[str]:
    if isinstance(value, (list, tuple)):
        return list(value)
    return str(value).split()


def _write_manifest(outdir: str, command: str, config: dict, outputs: list,
                    started: float, extra: dict | None = None) -> None:
    manifest = {
        "tool": "dpaf",
        "version": __version__,
        "command": command,
        "config": config,
        "seed_scheme": SEED_SCHEME,
        "outputs": sorted(outputs),
        "wall_time_s": round(time.monotonic() - started, 3),
    }
    if extra:
        manifest.update(extra)
    write_json(os.path.join(outdir, "manifest.json"), manifest)


def _write_heatmap(values: np.ndarray, path: str, title: str) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    main = float(values[0, 0])
    with np.errstate(divide="ignore"):
        db = 10.0 * np.log10(np.maximum(values, 0.0) / main)
    db = np.maximum(db, HEATMAP_FLOOR_DB)
    fig, ax = plt.subplots(figsize=(6.0, 5.0))
    im = ax.imshow(db, origin="lower", aspect="auto", cmap="viridis",
                   vmin=HEATMAP_FLOOR_DB, vmax=0.0)
    ax.set_xlabel("Doppler bin q")
    ax.set_ylabel("delay k")
    ax.set_title(title)
    fig.colorbar(im, ax=ax, label="dB rel. mainlobe")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _write_eisl_plot(rows: list, path: str) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    by_wave = {}
    for row in rows:
        by_wave.setdefault(row["waveform"], []).append(row)
    for wave, wrows in by_wave.items():
        wrows = sorted(wrows, key=lambda r: r["n"])
        ns = [r["n"] for r in wrows]
        ax.plot(ns, [r["normalized_eisl_theory"] for r in wrows], "-", label="%s closed form" % wave)
        if wrows[0].get("normalized_eisl_mc") is not None:
            ax.plot(ns, [r["normalized_eisl_mc"] for r in wrows], "o", mfc="none",
                    label="%s Monte Carlo" % wave)
    ns_all = sorted({r["n"] for r in rows})
    ax.plot(ns_all, ns_all, "k--", linewidth=0.8, label="N (sidelobes + mainlobe)")
    ax.set_xlabel("frame length N")
    ax.set_ylabel("integrated sidelobes / mainlobe")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _moment_dict(constellation: Constellation, tol: float) -> dict:
    rep = moments(constellation, tol=tol)
    return {
        "name": constellation.name,
        "order": constellation.order,
        "mean_re": rep.mean.real,
        "mean_im": rep.mean.imag,
        "power": rep.power,
        "pseudo_variance_re": rep.pseudo_variance.real,
        "pseudo_variance_im": rep.pseudo_variance.imag,
        "kurtosis": rep.kurtosis,
        "assumption_ok": rep.assumption_ok,
        "tol": rep.tol,
    }


def run_moments(args: argparse.Namespace) -> int:
    _resolve(args, required=("constellation",))
    const = parse_constellation(args.constellation, _as_bool(args.normalize))
    report = _moment_dict(const, args.tol)
    print(json.dumps(report, indent=2, sort_keys=True))
    if args.out:
        started = time.monotonic()
        os.makedirs(args.out, exist_ok=True)
        write_json(os.path.join(args.out, "moments.json"), report)
        _write_manifest(args.out, "moments",
                        {"constellation": args.constellation, "tol": args.tol,
                         "normalize": _as_bool(args.normalize), "strict": bool(args.strict)},
                        ["moments.json"], started)
    if args.strict and not report["assumption_ok"]:
        print("error: alphabet fails the moment conditions at tol %.3g" % args.tol,
              file=sys.stderr)
        return 1
    return 0


def run_grid(args: argparse.Namespace) -> int:
    started = time.monotonic()
    _resolve(args, required=("waveform", "constellation", "n", "out"))
    n = int(args.n)
    trials = int(args.trials)
    seed = int(args.seed)
    mode = str(args.mode)
    if mode not in ("both", "theory", "mc"):
        raise ValueError("mode must be both, theory or mc, got %r" % mode)
    if mode in ("both", "mc") and trials < 1:
        raise ValueError("Monte Carlo mode needs --trials >= 1")
    if mode == "both" and trials < 2:
        raise ValueError("the z-score comparison needs --trials >= 2")
    basis = parse_waveform(args.waveform, n)
    const = parse_constellation(args.constellation, _as_bool(args.normalize))

    theory_grid = None
    mc_grid = None
    comparison = None
    rc = 0
    if mode in ("both", "theory"):
        t = TheoryInputs.from_constellation(basis, const, force=args.force)
        theory_grid = avg_grid_fast(t)
    if mode in ("both", "mc"):
        mc_grid = estimate_avg_grid(McConfig(basis, const, trials, seed))
    if mode == "both":
        comparison = compare_grids(mc_grid, theory_grid,
                                   floor=float(args.floor) if args.floor else None)

    os.makedirs(args.out, exist_ok=True)
    outputs = []
    dense = _as_bool(args.dense)
    if theory_grid is not None:
        write_expectation_csv(os.path.join(args.out, "theory_grid.csv"), theory_grid, dense=dense)
        outputs.append("theory_grid.csv")
    if mc_grid is not None:
        write_expectation_csv(os.path.join(args.out, "mc_grid.csv"), mc_grid, dense=dense)
        outputs.append("mc_grid.csv")
    extra = {}
    if comparison is not None:
        gate = float(args.z_gate)
        zmax = comparison.max_z
        passed = bool(np.isfinite(zmax) and zmax <= gate)
        report = {
            "max_abs_error": comparison.max_abs_error,
            "max_rel_error": comparison.max_rel_error,
            "rms_error": comparison.rms_error,
            "floor": comparison.floor,
            "max_z": zmax,
            "cells_z_above_3": int(np.sum(comparison.zscores > 3.0)),
            "trials": trials,
            "z_gate": gate,
            "gate_passed": passed,
        }
        write_json(os.path.join(args.out, "comparison.json"), report)
        outputs.append("comparison.json")
        extra["gate_passed"] = passed
        if not passed:
            print("error: Monte Carlo vs closed form max |z| = %.3f exceeds gate %.3f"
                  % (zmax, gate), file=sys.stderr)
            rc = 2
    if _as_bool(args.plots):
        if theory_grid is not None:
            _write_heatmap(theory_grid.values, os.path.join(args.out, "heatmap_theory.png"),
                           "closed form, %s / %s, N=%d" % (args.waveform, args.constellation, n))
            outputs.append("heatmap_theory.png")
        if mc_grid is not None:
            _write_heatmap(mc_grid.values, os.path.join(args.out, "heatmap_mc.png"),
                           "Monte Carlo (%d trials), %s / %s, N=%d"
                           % (trials, args.waveform, args.constellation, n))
            outputs.append("heatmap_mc.png")
        extra["plots"] = {"scale": "10*log10(value / mainlobe)", "floor_db": HEATMAP_FLOOR_DB}
    config = {"waveform": args.waveform, "constellation": args.constellation, "n": n,
              "trials": trials, "seed": seed, "mode": mode, "dense": dense,
              "normalize": _as_bool(args.normalize), "force": bool(args.force),
              "z_gate": float(args.z_gate), "plots": _as_bool(args.plots)}
    _write_manifest(args.out, "grid", config, outputs, started, extra)
    return rc


def run_slice(args: argparse.Namespace) -> int:
    started = time.monotonic()
    _resolve(args, required=("waveform", "constellation", "n", "out"))
    n = int(args.n)
    trials = int(args.trials)
    seed = int(args.seed)
    axis = str(args.axis)
    if axis not in ("zero-doppler", "zero-delay"):
        raise ValueError("axis must be zero-doppler or zero-delay, got %r" % axis)
    basis = parse_waveform(args.waveform, n)
    const = parse_constellation(args.constellation, _as_bool(args.normalize))
    t = TheoryInputs.from_constellation(basis, const, force=args.force)

    theory_vals = np.empty(n)
    theory_vals[0] = avg_mainlobe(n, t.mu4)
    for i in range(1, n):
        theory_vals[i] = avg_zero_doppler(t, i) if axis == "zero-doppler" else avg_zero_delay(t, i)
    mc_mean = mc_err = None
    if trials > 0:
        grid = estimate_avg_grid(McConfig(basis, const, trials, seed))
        if axis == "zero-doppler":
            mc_mean = grid.values[:, 0]
            mc_err = grid.stderr[:, 0] if grid.stderr is not None else np.zeros(n)
        else:
            mc_mean = grid.values[0, :]
            mc_err = grid.stderr[0, :] if grid.stderr is not None else np.zeros(n)

    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "slice.csv")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# %s slice; index 0 is the mainlobe cell\n" % axis)
        if mc_mean is None:
            fh.write("idx,theory\n")
            for i in range(n):
                fh.write("%d,%.17g\n" % (i, theory_vals[i]))
        else:
            fh.write("idx,theory,mc_mean,mc_stderr\n")
            for i in range(n):
                fh.write("%d,%.17g,%.17g,%.17g\n" % (i, theory_vals[i], mc_mean[i], mc_err[i]))
    config = {"waveform": args.waveform, "constellation": args.constellation, "n": n,
              "trials": trials, "seed": seed, "axis": axis,
              "normalize": _as_bool(args.normalize), "force": bool(args.force)}
    _write_manifest(args.out, "slice", config, ["slice.csv"], started)
    return 0


def run_eisl(args: argparse.Namespace) -> int:
    started = time.monotonic()
    _resolve(args, required=("waveform", "constellation", "n", "out"))
    ns = _int_list(args.n)
    waveforms = _waveform_list(args.waveform)
    trials = int(args.trials)
    seed = int(args.seed)
    const = parse_constellation(args.constellation, _as_bool(args.normalize))

    # validate every (waveform, N) pair before computing anything
    bases = {}
    for spec in waveforms:
        for n in ns:
            bases[(spec, n)] = parse_waveform(spec, n)

    rows = []
    for spec in waveforms:
        for n in ns:
            t = TheoryInputs.from_constellation(bases[(spec, n)], const, force=args.force)
            rep = eisl(t)
            row = {"waveform": spec, "constellation": args.constellation, "n": n,
                   "normalized_eisl_theory": rep.normalized,
                   "normalized_eisl_mc": None, "stderr": None}
            if trials > 0:
                est = estimate_eisl(McConfig(bases[(spec, n)], const, trials, seed))
                row["normalized_eisl_mc"] = est.normalized
                row["stderr"] = est.stderr
            rows.append(row)

    os.makedirs(args.out, exist_ok=True)
    outputs = ["eisl_sweep.csv"]
    path = os.path.join(args.out, "eisl_sweep.csv")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# normalized integrated sidelobe level, sidelobe energy / mainlobe\n")
        fh.write("waveform,constellation,n,normalized_eisl_theory,normalized_eisl_mc,stderr\n")
        for row in rows:
            if row["normalized_eisl_mc"] is None:
                fh.write("%s,%s,%d,%.17g,,\n"
                         % (row["waveform"], row["constellation"], row["n"],
                            row["normalized_eisl_theory"]))
            else:
                fh.write("%s,%s,%d,%.17g,%.17g,%.17g\n"
                         % (row["waveform"], row["constellation"], row["n"],
                            row["normalized_eisl_theory"], row["normalized_eisl_mc"],
                            row["stderr"]))
    if _as_bool(args.plots):
        _write_eisl_plot(rows, os.path.join(args.out, "eisl.png"))
        outputs.append("eisl.png")
    config = {"waveform": waveforms, "constellation": args.constellation, "n": ns,
              "trials": trials, "seed": seed, "normalize": _as_bool(args.normalize),
              "force": bool(args.force), "plots": _as_bool(args.plots)}
    _write_manifest(args.out, "eisl", config, outputs, started)
    return 0


def run_exact(args: argparse.Namespace) -> int:
    started = time.monotonic()
    _resolve(args, required=("waveform", "constellation", "n", "out"))
    n = int(args.n)
    basis = parse_waveform(args.waveform, n)
    const = parse_constellation(args.constellation, _as_bool(args.normalize))
    exact = exact_avg_grid(basis, const)
    t = TheoryInputs.from_constellation(basis, const, force=args.force)
    theory = avg_grid_general(t)

    diff = np.abs(exact.values - theory.values)
    max_abs = float(diff.max())
    mainlobe_rel = float(diff[0, 0] / theory.values[0, 0])
    gate_abs = float(args.gate_abs)
    gate_main = float(args.gate_mainlobe_rel)
    passed = max_abs <= gate_abs and mainlobe_rel <= gate_main

    os.makedirs(args.out, exist_ok=True)
    dense = _as_bool(args.dense)
    write_expectation_csv(os.path.join(args.out, "exact_grid.csv"), exact, dense=dense)
    write_expectation_csv(os.path.join(args.out, "theory_grid.csv"), theory, dense=dense)
    report = {
        "max_abs_error": max_abs,
        "mainlobe_rel_error": mainlobe_rel,
        "gate_abs": gate_abs,
        "gate_mainlobe_rel": gate_main,
        "gate_passed": bool(passed),
        "vectors": int(const.order ** n),
    }
    write_json(os.path.join(args.out, "equality.json"), report)
    config = {"waveform": args.waveform, "constellation": args.constellation, "n": n,
              "normalize": _as_bool(args.normalize), "force": bool(args.force),
              "gate_abs": gate_abs, "gate_mainlobe_rel": gate_main, "dense": dense}
    _write_manifest(args.out, "exact",
                    config, ["exact_grid.csv", "theory_grid.csv", "equality.json"],
                    started, {"gate_passed": bool(passed)})
    if not passed:
        print("error: enumeration vs closed form max abs %.3e (gate %.3e), "
              "mainlobe rel %.3e (gate %.3e)" % (max_abs, gate_abs, mainlobe_rel, gate_main),
              file=sys.stderr)
        return 2
    return 0


def run_compare(args: argparse.Namespace) -> int:
    started = time.monotonic()
    a = read_expectation_csv(args.grid_a)
    b = read_expectation_csv(args.grid_b)
    comparison = compare_grids(a, b, floor=float(args.floor) if args.floor else None)
    report = {
        "grid_a": args.grid_a,
        "grid_b": args.grid_b,
        "n": a.n,
        "max_abs_error": comparison.max_abs_error,
        "max_rel_error": comparison.max_rel_error,
        "rms_error": comparison.rms_error,
        "floor": comparison.floor,
    }
    rc = 0
    if comparison.zscores is not None:
        report["max_z"] = comparison.max_z
    if args.gate_abs is not None:
        report["gate_abs"] = float(args.gate_abs)
        if comparison.max_abs_error > float(args.gate_abs):
            rc = 2
    if args.gate_z is not None:
        if comparison.zscores is None:
            raise ValueError("--gate-z needs a first grid with stderr (Monte Carlo output)")
        report["gate_z"] = float(args.gate_z)
        if not comparison.max_z <= float(args.gate_z):
            rc = 2
    report["gate_passed"] = rc == 0
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        write_json(os.path.join(args.out, "comparison.json"), report)
        _write_manifest(args.out, "compare",
                        {"grid_a": args.grid_a, "grid_b": args.grid_b,
                         "floor": comparison.floor}, ["comparison.json"], started)
    print(json.dumps(report, indent=2, sort_keys=True))
    if rc:
        print("error: grid comparison gate failed", file=sys.stderr)
    return rc


def _add_common(p: argparse.ArgumentParser, slice_axis: bool = False,
                multi_waveform: bool = False) -> None:
    if multi_waveform:
        p.add_argument("--waveform", nargs="+",
                       help="one or more waveform specs, e.g. sc ofdm otfs:c=4")
    else:
        p.add_argument("--waveform", help="waveform spec, e.g. ofdm or otfs:c=4")
    p.add_argument("--constellation", help="alphabet spec, e.g. qam:16")
    p.add_argument("--n", help="frame length (comma list for eisl)")
    p.add_argument("--trials", help="Monte Carlo trials")
    p.add_argument("--seed", help="base seed for symbol draws")
    p.add_argument("--out", help="output directory")
    p.add_argument("--config", help="INI file supplying any of the above")
    p.add_argument("--plots", action="store_const", const=True, help="write PNG figures")
    p.add_argument("--dense", action="store_const", const=True, help="dense CSV layout")
    p.add_argument("--normalize", action="store_const", const=True,
                   help="rescale an imported alphabet to unit power")
    p.add_argument("--force", action="store_true",
                   help="evaluate closed forms for non-qualifying alphabets anyway")
    if slice_axis:
        p.add_argument("--axis", choices=("zero-doppler", "zero-delay"),
                       help="which cut of the grid (default zero-doppler)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dpaf",
        description="Delay-Doppler sidelobe statistics of randomly modulated waveforms.")
    parser.add_argument("--version", action="version", version="dpaf " + __version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", help="exact alphabet moments as JSON")
    p.add_argument("--constellation")
    p.add_argument("--config")
    p.add_argument("--out")
    p.add_argument("--tol", type=float, default=DEFAULT_MOMENT_TOL)
    p.add_argument("--strict", action="store_true",
                   help="exit 1 when the alphabet fails the moment conditions")
    p.add_argument("--normalize", action="store_const", const=True)
    p.set_defaults(func=run_moments)

    p = sub.add_parser("grid", help="expected squared grid, closed form vs Monte Carlo")
    _add_common(p)
    p.add_argument("--mode", choices=("both", "theory", "mc"))
    p.add_argument("--floor", help="relative-error floor (default 1e-6 * N^2)")
    p.add_argument("--z-gate", dest="z_gate", default="4.0",
                   help="fail (exit 2) when any cell exceeds this z-score")
    p.set_defaults(func=run_grid)

    p = sub.add_parser("slice", help="zero-Doppler or zero-delay cut")
    _add_common(p, slice_axis=True)
    p.set_defaults(func=run_slice)

    p = sub.add_parser("eisl", help="normalized integrated-sidelobe sweep over N")
    _add_common(p, multi_waveform=True)
    p.set_defaults(func=run_eisl)

    p = sub.add_parser("exact", help="closed form vs full symbol enumeration")
    _add_common(p)
    p.add_argument("--gate-abs", dest="gate_abs", default="1e-10")
    p.add_argument("--gate-mainlobe-rel", dest="gate_mainlobe_rel", default="1e-12")
    p.set_defaults(func=run_exact)

    p = sub.add_parser("compare", help="discrepancy report between two grid CSVs")
    p.add_argument("--grid-a", dest="grid_a", required=True)
    p.add_argument("--grid-b", dest="grid_b", required=True)
    p.add_argument("--out")
    p.add_argument("--floor")
    p.add_argument("--gate-abs", dest="gate_abs")
    p.add_argument("--gate-z", dest="gate_z")
    p.set_defaults(func=run_compare)

    return parser


def main(argv: list | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
