"""kolmo-lab command-line front door.

Commands: frame-tails, toeplitz, hankel, besov, l2, umbrella, selftest.
Options come from an INI-style config file ([common] plus one section per
command) overridden by flags; unknown config keys are rejected by name.
Reports are JSON (validating against report.schema.json) with CSV side
files for plot data.

Exit codes: 0 success, 2 configuration or parse errors, 3 numeric errors,
4 inconclusive verdict under --strict.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys

import numpy as np

from . import __version__
from .besov import BesovSpec, family_besov_profile
from .errors import (
    DomainError,
    InconclusiveError,
    KolmoError,
    NumericError,
    ParameterError,
    ResolutionError,
    WindowError,
)
from .euclid import (
    bandlimited_kernel,
    fourier_tail,
    l2_tail,
    pw_tail,
    stft_field,
    stft_grid,
    stft_tail,
    unit_gaussian,
)
from .frames import (
    Exhaustion,
    FrameSpec,
    family_tail_profile,
    umbrella_capacity,
)
from .operators import compactness_report
from .reporting import (
    build_report,
    format_big_int,
    int_digit_count,
    write_csv,
    write_json_report,
)
from .selftest import run_selftest
from .spaces import FunctionRep, SpaceSpec
from .symbols import parse_symbol

_CONFIG_KEYS = {
    "common": {
        "out": str,
        "seed": int,
        "threads": int,
        "no_timestamp": bool,
        "strict": bool,
    },
    "frame-tails": {"frame": str, "family": str, "depth": int, "p": float},
    "toeplitz": {
        "symbol": str,
        "deg": int,
        "radii": str,
        "loc_radii": int,
        "loc_angles": int,
    },
    "hankel": {"fourier": str, "deg": int, "vmo_radii": str},
    "besov": {"preset": str, "family": str, "depth": int},
    "l2": {"preset": str, "kmax": int, "tmax": float, "count": int, "radii": str},
    "umbrella": {"umbrella": str, "delta": float, "eps_net": float, "depth": int},
    "selftest": {},
}


def _parse_bool(text):
    if str(text).lower() in ("1", "true", "yes", "on"):
        return True
    if str(text).lower() in ("0", "false", "no", "off"):
        return False
    raise ParameterError(f"expected a boolean, got {text!r}")


def _load_config(path, command):
    """Flat key-value config with [common] and per-command sections."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ParameterError(f"config file {path!r} not found")
    values = {}
    for section in parser.sections():
        if section not in _CONFIG_KEYS:
            raise ParameterError(f"unknown config section [{section}]")
        if section not in ("common", command):
            continue
        allowed = dict(_CONFIG_KEYS["common"])
        if section != "common":
            allowed.update(_CONFIG_KEYS[section])
        for key, raw in parser.items(section):
            if key not in allowed:
                raise ParameterError(
                    f"unknown config key {key!r} in section [{section}]"
                )
            caster = allowed[key]
            values[key] = _parse_bool(raw) if caster is bool else caster(raw)
    return values


def _merged(args, command):
    """Config-file values overridden by explicitly passed flags."""
    merged = {
        "out": "kolmo_report",
        "seed": 0,
        "threads": int(os.environ.get("KOLMO_THREADS", "1")),
        "no_timestamp": False,
        "strict": False,
    }
    if args.config:
        merged.update(_load_config(args.config, command))
    for key in vars(args):
        if key in ("config", "command"):
            continue
        value = getattr(args, key)
        if value is not None:
            merged[key] = value
    return merged


def _parse_family(spec_text):
    """Family presets: 'monomials:a..b' (basis elements) or 'zero'."""
    text = (spec_text or "").strip()
    if text == "zero":
        return [FunctionRep(coeffs=np.zeros(1, dtype=complex))], text
    if text.startswith("monomials:"):
        body = text[len("monomials:"):]
        try:
            lo, hi = body.split("..")
            lo, hi = int(lo), int(hi)
        except ValueError as exc:
            raise ParameterError(f"bad family range {body!r}") from exc
        if hi < lo or lo < 0:
            raise ParameterError(f"empty family range {body!r}")
        family = []
        for j in range(lo, hi + 1):
            c = np.zeros(j + 1, dtype=complex)
            c[j] = 1.0
            family.append(FunctionRep(coeffs=c))
        return family, text
    raise ParameterError(f"unknown family preset {spec_text!r} (field: family)")


def _parse_float_list(text, field):
    try:
        values = [float(v) for v in str(text).split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ParameterError(f"bad number list in field {field!r}") from exc
    if not values:
        raise ParameterError(f"field {field!r} must list at least one number")
    return values


def _emit(cfg, command, results, verdict=None, notes=(), csv_files=()):
    report = build_report(
        command,
        {k: cfg[k] for k in sorted(cfg) if k != "out"},
        results,
        seed=cfg["seed"],
        threads=cfg["threads"],
        verdict=verdict,
        notes=notes,
        no_timestamp=cfg["no_timestamp"],
    )
    json_path = f"{cfg['out']}.json"
    write_json_report(json_path, report)
    written = [json_path]
    for suffix, header, rows in csv_files:
        path = f"{cfg['out']}_{suffix}.csv"
        write_csv(path, header, rows)
        written.append(path)
    for path in written:
        print(f"wrote {path}")
    if verdict is not None:
        print(f"verdict: {verdict}")
    return verdict


def cmd_frame_tails(cfg):
    kind = cfg.get("frame", "bergman")
    if kind not in ("bergman", "fock"):
        raise ParameterError(f"unsupported frame {kind!r} (field: frame)")
    depth = int(cfg.get("depth", 20))
    if depth < 1:
        raise ParameterError("depth must be at least 1 (field: depth)")
    family, family_tag = _parse_family(cfg.get("family", "monomials:0..10"))
    p = float(cfg.get("p", 2.0))
    frame = FrameSpec(SpaceSpec.bergman() if kind == "bergman" else SpaceSpec.fock())
    exh = (
        Exhaustion.ball_default(depth)
        if kind == "bergman"
        else Exhaustion.plane_default(depth)
    )
    profile = family_tail_profile(frame, family, exh, p=p)
    rows = [
        (n + 1, profile.radii[n], profile.values[n]) for n in range(profile.depth)
    ]
    results = {
        "family": family_tag,
        "family_size": profile.family_size,
        "levels": [
            {"level": n, "radius": r, "sup_tail": q} for (n, r, q) in rows
        ],
        "grid_id": profile.grid_id,
        "p": p,
    }
    return _emit(
        cfg, "frame-tails", results,
        csv_files=[("tails", ("level", "radius", "sup_tail"), rows)],
    )


def cmd_toeplitz(cfg):
    if "symbol" not in cfg:
        raise ParameterError("a symbol expression is required (field: symbol)")
    symbol = parse_symbol(cfg["symbol"])
    deg = int(cfg.get("deg", 64))
    radii = _parse_float_list(cfg.get("radii", "0.5,0.9,0.99"), "radii")
    sample = (int(cfg.get("loc_radii", 16)), int(cfg.get("loc_angles", 8)))
    report = compactness_report(
        "toeplitz", symbol, deg=deg, radii=radii, localization_sample=sample
    )
    csvs = [
        (
            "profile",
            ("r", "max_abs", "min_abs"),
            [tuple(row) for row in report.berezin_profile],
        ),
        (
            "sigma",
            ("k", "sigma_k"),
            list(enumerate(report.singular_value_tail)),
        ),
    ]
    return _emit(cfg, "toeplitz", report.to_dict(), verdict=report.verdict,
                 notes=report.notes, csv_files=csvs)


def cmd_hankel(cfg):
    if "fourier" not in cfg:
        raise ParameterError("symbol Fourier coefficients are required (field: fourier)")
    coeffs = np.array(_parse_float_list(cfg["fourier"], "fourier"), dtype=complex)
    deg = int(cfg.get("deg", 16))
    vmo_radii = _parse_float_list(cfg.get("vmo_radii", "0.4,0.2,0.1"), "vmo_radii")
    report = compactness_report("hankel", coeffs, deg=deg, vmo_radii=vmo_radii)
    csvs = [
        ("sigma", ("k", "sigma_k"), list(enumerate(report.singular_value_tail))),
        ("vmo", ("r", "modulus"), [tuple(row) for row in report.vmo_schedule]),
    ]
    return _emit(cfg, "hankel", report.to_dict(), verdict=report.verdict,
                 notes=report.notes, csv_files=csvs)


def cmd_besov(cfg):
    preset_text = cfg.get("preset", "bergman:0")
    name, _, arg = preset_text.partition(":")
    if name == "bergman":
        spec = BesovSpec.bergman_radial(float(arg or 0.0))
    elif name == "hardy":
        spec = BesovSpec.hardy(int(arg or 1))
    elif name == "dirichlet":
        parts = arg.split(",") if arg else ["2", "1"]
        spec = BesovSpec.dirichlet(float(parts[0]), int(parts[1]))
    else:
        raise ParameterError(f"unknown preset {preset_text!r} (field: preset)")
    family, family_tag = _parse_family(cfg.get("family", "monomials:0..10"))
    depth = int(cfg.get("depth", 8))
    if depth < 1:
        raise ParameterError("depth must be at least 1 (field: depth)")
    deltas = [2.0 ** -n for n in range(1, depth + 1)]
    profile = family_besov_profile(spec, family, deltas, space=SpaceSpec.hardy())
    rows = [
        (n + 1, profile.radii[n], profile.values[n]) for n in range(profile.depth)
    ]
    results = {
        "preset": preset_text,
        "family": family_tag,
        "family_size": profile.family_size,
        "levels": [
            {"level": n, "delta": d, "sup_tail": q} for (n, d, q) in rows
        ],
        "grid_id": profile.grid_id,
        "p": spec.p,
        "note": "family coefficients are monomial (boundary-basis) vectors",
    }
    return _emit(
        cfg, "besov", results,
        csv_files=[("profile", ("level", "delta", "sup_tail"), rows)],
    )


def _l2_family(cfg):
    preset = cfg.get("preset", "modulated-gaussians")
    if preset == "modulated-gaussians":
        kmax = int(cfg.get("kmax", 20))
        return [unit_gaussian(modulation=float(k)) for k in range(kmax + 1)], preset
    if preset == "translated-gaussians":
        tmax = float(cfg.get("tmax", 1.0))
        count = int(cfg.get("count", 11))
        shifts = np.linspace(0.0, tmax, count)
        return [unit_gaussian(shift=float(t)) for t in shifts], preset
    if preset == "pw-kernel":
        return [bandlimited_kernel()], preset
    raise ParameterError(f"unknown preset {preset!r} (field: preset)")


def cmd_l2(cfg):
    family, preset = _l2_family(cfg)
    radii = _parse_float_list(cfg.get("radii", "1,5,10"), "radii")
    rows = []
    for R in radii:
        sup_sp = max(l2_tail(f, R) for f in family)
        sup_fo = max(fourier_tail(f, R) for f in family)
        rows.append((R, sup_sp, sup_fo))
    results = {
        "preset": preset,
        "family_size": len(family),
        "tails": [
            {"R": R, "sup_spatial": s, "sup_fourier": fo} for (R, s, fo) in rows
        ],
    }
    if preset == "pw-kernel":
        results["pw_tail"] = {
            "band": 0.5,
            "R": radii[-1],
            "value": pw_tail(family[0], 0.5, radii[-1]),
        }
    window = unit_gaussian()
    b_max = 8.0 + (float(cfg.get("kmax", 20)) if preset == "modulated-gaussians" else 0.0)
    b_grid = np.arange(-b_max, b_max + 0.01, 0.25)
    worst_moyal, sup_tail5 = 0.0, 0.0
    for member in (family[0], family[-1]):
        field = stft_field(member, window, stft_grid(member, 8.0), b_grid)
        worst_moyal = max(worst_moyal, abs(field.total_mass() - member.norm_squared()))
        sup_tail5 = max(sup_tail5, stft_tail(field, 5.0))
    results["stft"] = {
        "max_moyal_defect": worst_moyal,
        "sup_tail_R5": sup_tail5,
    }
    return _emit(
        cfg, "l2", results,
        csv_files=[("tails", ("R", "sup_spatial", "sup_fourier"), rows)],
    )


def _umbrella_field(text):
    name, _, arg = (text or "coeff-decay:1.5").partition(":")
    if name == "zero":
        return (lambda z: np.zeros(np.shape(z))), text
    if name == "coeff-decay":
        power = float(arg or 1.5)
        return (lambda z: (1.0 - np.abs(z) ** 2) ** power), text
    if name == "e0":
        # coefficient field of the first basis element
        return (lambda z: (1.0 - np.abs(z) ** 2)), text
    raise ParameterError(f"unknown umbrella {text!r} (field: umbrella)")


def cmd_umbrella(cfg):
    umbrella, tag = _umbrella_field(cfg.get("umbrella"))
    delta = float(cfg.get("delta", 0.1))
    eps_net = float(cfg.get("eps_net", 0.04))
    depth = int(cfg.get("depth", 16))
    frame = FrameSpec(SpaceSpec.bergman())
    exh = Exhaustion.ball_default(depth)
    bound = umbrella_capacity(frame, umbrella, delta, eps_net=eps_net, exhaustion=exh)
    results = {
        "umbrella": tag,
        "delta": delta,
        "eps_net": eps_net,
        "depth": depth,
        "capacity_bound": bound if bound < 2**53 else format_big_int(bound),
        "capacity_digits": int_digit_count(bound),
    }
    return _emit(cfg, "umbrella", results)


def cmd_selftest(cfg):
    lines = []

    def writer(text):
        lines.append(text)
        print(text)

    ok, results = run_selftest(writer)
    report_results = {
        "checks": results,
        "n_passed": sum(1 for r in results if r["passed"]),
        "n_total": len(results),
    }
    _emit(cfg, "selftest", report_results,
          verdict="pass" if ok else "fail")
    if not ok:
        raise NumericError("selftest failures (see report)")
    return "pass"


_COMMANDS = {
    "frame-tails": cmd_frame_tails,
    "toeplitz": cmd_toeplitz,
    "hankel": cmd_hankel,
    "besov": cmd_besov,
    "l2": cmd_l2,
    "umbrella": cmd_umbrella,
    "selftest": cmd_selftest,
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="kolmo-lab",
        description="tail-mass compactness diagnostics for framed function spaces",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", default=None, help="INI config file")
        p.add_argument("--out", default=None, help="output path prefix")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threads", type=int, default=None,
                       help="worker cap (default KOLMO_THREADS or 1)")
        p.add_argument("--no-timestamp", dest="no_timestamp",
                       action="store_const", const=True, default=None)
        p.add_argument("--strict", action="store_const", const=True, default=None,
                       help="exit 4 on inconclusive verdicts")

    p = sub.add_parser("frame-tails", help="tail-mass profile of a family")
    common(p)
    p.add_argument("--frame", default=None, choices=("bergman", "fock"))
    p.add_argument("--family", default=None)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--p", type=float, default=None)

    p = sub.add_parser("toeplitz", help="Toeplitz compactness diagnostics")
    common(p)
    p.add_argument("--symbol", default=None)
    p.add_argument("--deg", type=int, default=None)
    p.add_argument("--radii", default=None)
    p.add_argument("--loc-radii", dest="loc_radii", type=int, default=None)
    p.add_argument("--loc-angles", dest="loc_angles", type=int, default=None)

    p = sub.add_parser("hankel", help="little Hankel compactness diagnostics")
    common(p)
    p.add_argument("--fourier", default=None)
    p.add_argument("--deg", type=int, default=None)
    p.add_argument("--vmo-radii", dest="vmo_radii", default=None)

    p = sub.add_parser("besov", help="derivative-weighted boundary tails")
    common(p)
    p.add_argument("--preset", default=None)
    p.add_argument("--family", default=None)
    p.add_argument("--depth", type=int, default=None)

    p = sub.add_parser("l2", help="line-signal tail diagnostics")
    common(p)
    p.add_argument("--preset", default=None)
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--tmax", type=float, default=None)
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--radii", default=None)

    p = sub.add_parser("umbrella", help="capacity bound for dominated families")
    common(p)
    p.add_argument("--umbrella", default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--eps-net", dest="eps_net", type=float, default=None)
    p.add_argument("--depth", type=int, default=None)

    p = sub.add_parser("selftest", help="run the built-in oracle suite")
    common(p)
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merged(args, args.command)
        verdict = _COMMANDS[args.command](cfg)
    except (ParameterError, DomainError, WindowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, ResolutionError, InconclusiveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except KolmoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    if cfg["strict"] and verdict == "inconclusive":
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
