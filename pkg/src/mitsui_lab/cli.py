"""Command line front end: ``mitsui-lab <subcommand> --config file.yaml``.

Exit codes: 0 success, 2 configuration error, 3 threshold failure under --check.
"""
from __future__ import annotations

import argparse
import json
import random
import sys

import numpy as np
import yaml

from .config import ConfigError, resolve_field
from .harness import (ExperimentConfig, Report, build_region, check_report, emit_report,
                      load_config, parse_alpha, parse_ideal, parse_modulus, run_experiment)

EXPERIMENTS = ("pit", "mitsui", "siegel-walfisz-q", "proof-path", "properties")
TOOLS = ("field-info", "sieve-primes", "enumerate-prime-elements", "characters", "sectors",
         "fourier-approx", "bounded-basis")


def _read_mapping(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    return data


def _field_info(cfg: dict) -> Report:
    f = resolve_field(cfg.get("field", "Q"))
    rep = Report("field-info", ["key", "value"])
    rows = {
        "name": f.name, "degree": f.degree, "r1": f.r1, "r2": f.r2,
        "discriminant": f.discriminant, "regulator": f.regulator,
        "torsion_order": f.torsion_order, "class_number": f.class_number,
        "fundamental_units": json.dumps([list(u.coords) for u in f.fundamental_units]),
        "torsion_generator": json.dumps(list(f.torsion_generator.coords)),
    }
    for k, v in rows.items():
        rep.add_row(key=k, value=v)
    return rep


def _sieve_primes(cfg: dict) -> Report:
    from .sieve import sieve_prime_ideals
    f = resolve_field(cfg.get("field", "Q"))
    N = float(cfg.get("N", 100))
    rep = Report("sieve-primes", ["norm", "over", "residue_degree", "ramification", "hnf", "generator"])
    for P in sieve_prime_ideals(f, N, generators=bool(cfg.get("generators", True))):
        rep.add_row(norm=P.norm, over=P.over, residue_degree=P.residue_degree,
                    ramification=P.ramification, hnf=json.dumps([list(r) for r in P.ideal.basis]),
                    generator=None if P.generator is None else json.dumps(list(P.generator.coords)))
    return rep


def _enumerate(cfg: dict) -> Report:
    from .sieve import prime_elements_array
    f = resolve_field(cfg.get("field", "Q"))
    q = parse_modulus(f, cfg.get("modulus", 1))
    a = parse_ideal(f, cfg.get("ideal", 0))
    alpha = parse_alpha(f, q, a, cfg.get("alpha"))
    N = float(cfg.get("N", 100))
    region = build_region(f, cfg.get("region", {"kind": "domain"}), N)
    b = prime_elements_array(f, a, region, alpha, modulus=q)
    cols = ["norm"] + [f"c{j}" for j in range(f.degree)] + ["residue_class", "log_weight"]
    rep = Report("enumerate-prime-elements", cols)
    for coords, nn, res, w in zip(b.coords, b.norms, b.residues, b.weights):
        row = {"norm": int(nn), "residue_class": int(res), "log_weight": float(w)}
        row.update({f"c{j}": int(c) for j, c in enumerate(coords)})
        rep.add_row(**row)
    return rep


def _characters(cfg: dict) -> Report:
    from .ray import angular_characters_up_to, enumerate_finite_characters
    f = resolve_field(cfg.get("field", "Q"))
    q = parse_modulus(f, cfg.get("modulus", 1))
    rep = Report("characters", ["index", "type", "label", "order", "is_real", "phases", "a", "m"])
    for i, c in enumerate(enumerate_finite_characters(f, q)):
        rep.add_row(index=i, type="finite", label=json.dumps(list(c.label)), order=c.order,
                    is_real=c.is_real, phases=json.dumps([str(p) for p in c.phases]), a="", m="")
    Y = cfg.get("angular_Y")
    if Y is not None:
        for i, c in enumerate(angular_characters_up_to(f, q, int(Y))):
            rep.add_row(index=i, type="angular", label=json.dumps(list(c.h_frequency)), order=None,
                        is_real=None, phases=json.dumps([str(p) for p in c.phases]),
                        a=json.dumps([float(v) for v in c.a]), m=json.dumps(list(c.angular_frequencies)))
    return rep


def _sectors(cfg: dict) -> Report:
    from .geometry import cover_count_constant, cover_with_annulus_sectors, sectors_disjoint
    f = resolve_field(cfg.get("field", "Q"))
    X, Y = cfg.get("X", 100), int(cfg.get("Y", 2))
    cover = cover_with_annulus_sectors(f, X, Y)
    rep = Report("sectors", ["index", "signs", "radial", "angular", "volume"])
    for i, s in enumerate(cover):
        rep.add_row(index=i, signs=json.dumps(list(s.signs)),
                    radial=json.dumps([[str(a), str(b)] for a, b in s.radial]),
                    angular=json.dumps([[str(a), str(b)] for a, b in s.angular]), volume=s.volume())
    rep.metadata = {"count": len(cover), "C_n": cover_count_constant(f),
                    "count_over_Y_n": len(cover) / Y ** f.degree}
    if cfg.get("check_disjoint", True):
        rep.metadata["disjoint"] = sectors_disjoint(cover)
    return rep


def _fourier(cfg: dict) -> Report:
    from .fourier import TorusBox, fourier_approximate_indicator
    box = TorusBox(tuple(cfg.get("center", [0.0])), tuple(cfg.get("half_widths", [0.05])))
    A = fourier_approximate_indicator(box, tuple(cfg.get("components", [])), int(cfg.get("Y", 100)),
                                      float(cfg.get("M", 20)), cfg.get("component"))
    d = box.dimension
    cols = ["character"] + [f"k{i}" for i in range(d)] + ["real", "imag"]
    rep = Report("fourier-approx", cols)
    coeffs = A.coefficients()
    for idx in zip(*np.nonzero(np.abs(coeffs) > 0)):
        v = coeffs[idx]
        row = {"character": int(idx[0]), "real": float(v.real), "imag": float(v.imag)}
        row.update({f"k{i}": int(idx[1 + i]) - A.Y for i in range(d)})
        rep.add_row(**row)
    rep.metadata = {"c0": A.c0, "max_abs_coefficient": A.max_abs_coefficient(),
                    "residual_off_margin": A.residual_bound, "residual_all": A.residual_sup_all,
                    "margin_volume": A.margin_volume, "Y": A.Y, "M": A.M}
    return rep


def _bounded_basis(cfg: dict) -> Report:
    from .domain import IntegerLattice, bounded_basis
    rep = Report("bounded-basis", ["index", "det", "input", "output", "max_entry", "same_lattice"])
    mats = []
    if "matrix" in cfg:
        mats.append(cfg["matrix"])
    if "random" in cfg:
        r = cfg["random"]
        rng = random.Random(int(r.get("seed", 0)))
        dim, count, max_det = int(r.get("dim", 4)), int(r.get("count", 10)), int(r.get("max_det", 10 ** 4))
        while len(mats) < count:
            M = [[rng.randint(-30, 30) for _ in range(dim)] for _ in range(dim)]
            det = round(np.linalg.det(np.array(M, dtype=float)))
            if 0 < abs(det) <= max_det:
                mats.append(M)
    for i, M in enumerate(mats):
        try:
            L = IntegerLattice(tuple(tuple(r) for r in M))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        B = bounded_basis(L)
        rep.add_row(index=i, det=L.index, input=json.dumps(M),
                    output=json.dumps([list(r) for r in B.basis]),
                    max_entry=max(abs(v) for r in B.basis for v in r), same_lattice=B.same_lattice(L))
    return rep


TOOL_RUNNERS = {
    "field-info": _field_info,
    "sieve-primes": _sieve_primes,
    "enumerate-prime-elements": _enumerate,
    "characters": _characters,
    "sectors": _sectors,
    "fourier-approx": _fourier,
    "bounded-basis": _bounded_basis,
}


def _tool_check(cmd, rep, check) -> list[str]:
    fails = []
    if cmd == "bounded-basis":
        for row in rep.rows:
            if row[4] > row[1] or not row[5]:
                fails.append(f"bounded basis check failed on matrix {row[0]}")
    if cmd == "sectors" and rep.metadata.get("disjoint") is False:
        fails.append("sectors overlap")
    if cmd == "fourier-approx":
        if rep.metadata["max_abs_coefficient"] > 1:
            fails.append("coefficient exceeds 1")
        lim = check.get("max_residual")
        if lim is not None and rep.metadata["residual_off_margin"] > lim:
            fails.append("residual above threshold")
    return fails


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mitsui-lab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in TOOLS + EXPERIMENTS:
        s = sub.add_parser(name)
        s.add_argument("--config", required=name not in ("properties",))
        s.add_argument("--out")
        s.add_argument("--format", choices=("csv", "json"))
        s.add_argument("--check", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cmd = args.command
    try:
        if cmd in EXPERIMENTS:
            if args.config:
                cfg = load_config(args.config)
            else:
                cfg = ExperimentConfig.from_mapping({"kind": cmd})
            if cfg.kind != cmd:
                raise ConfigError(f"config kind {cfg.kind!r} does not match subcommand {cmd!r}")
            rep = run_experiment(cfg)
            check = cfg.check or {}
            output = cfg.output or {}
        else:
            data = _read_mapping(args.config)
            check = data.pop("check", {}) or {}
            output = data.pop("output", {}) or {}
            rep = TOOL_RUNNERS[cmd](data)
        fmt = args.format or output.get("format", "csv")
        path = args.out or output.get("path")
        text = emit_report(rep, fmt, path)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if not path:
        sys.stdout.write(text)
    if args.check:
        fails = check_report(rep, check) if cmd in EXPERIMENTS else _tool_check(cmd, rep, check)
        for msg in fails:
            print(f"check failed: {msg}", file=sys.stderr)
        if fails:
            return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
