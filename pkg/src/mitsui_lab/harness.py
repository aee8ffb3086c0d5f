"""Configuration-driven experiments and report emission.

An experiment config is a YAML mapping::

    kind: pit | mitsui | siegel-walfisz-q | proof-path | properties
    field: Q(i)                 # reference name, YAML path, or inline spec
    ideal: 0                    # class representative index, or generator list
    modulus: 3                  # integer, or list of generator coordinate vectors
    alpha: [1, 0]               # representative of the congruence class (optional)
    character: trivial          # or an index into the finite character table
    region: {kind: ball, radius: 1.0, center: [0, 0]}   # lengths in units of N^(1/n)
    schedule: [10000, 100000, 1000000]
    siegel: {character: 1, beta: 0.9}                  # synthetic exceptional zero
    budget_c: 1.0
    params: {...}               # kind-specific settings
    check: {max_abs_rel_error: 0.02}
    output: {path: out.csv, format: csv}
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
import warnings
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np
import yaml

from . import __version__
from .config import ConfigError, resolve_field
from .dedekind import totient
from .field import (FractionalIdeal, NumberField, ideal_from_generators, unit_ideal)
from .geometry import (QMC_SEED, AnnulusSector, Ball, Box, DomainSegment, Empty,
                       HalfspacePolytope, Region, ThinConeSegment, region_volume,
                       secondary_integral)
from .ray import (CongruenceClass, congruence_class, enumerate_finite_characters,
                  residue_ring)
from .sieve import prime_elements_array, prime_ideal_log_norms, pit_sum

KINDS = ("pit", "mitsui", "siegel-walfisz-q", "proof-path", "properties")
REPORT_COLUMNS = ("N", "empirical_sum", "predicted_main", "predicted_secondary",
                  "abs_error", "rel_error", "wall_time_ms")


# ---------------------------------------------------------------------------
# configuration


@dataclass
class ExperimentConfig:
    kind: str
    field: object = "Q"
    ideal: object = 0
    modulus: object = 1
    alpha: object = None
    character: object = "trivial"
    region: dict = dc_field(default_factory=lambda: {"kind": "domain"})
    schedule: list = dc_field(default_factory=lambda: [1000])
    siegel: dict | None = None
    budget_c: float = 1.0
    params: dict = dc_field(default_factory=dict)
    check: dict = dc_field(default_factory=dict)
    output: dict = dc_field(default_factory=dict)

    @classmethod
    def from_mapping(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("experiment config must be a mapping")
        known = set(cls.__dataclass_fields__)
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        if data.get("kind") not in KINDS:
            raise ConfigError(f"kind must be one of {KINDS}")
        cfg = cls(**data)
        try:
            cfg.schedule = [float(v) for v in (cfg.schedule or [])]
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad schedule: {exc}") from exc
        if any(b <= a for a, b in zip(cfg.schedule, cfg.schedule[1:])):
            raise ConfigError("N schedule must be strictly increasing")
        if cfg.siegel is not None:
            if not isinstance(cfg.siegel, dict) or "beta" not in cfg.siegel:
                raise ConfigError("siegel needs a beta")
            if not 0 < float(cfg.siegel["beta"]) < 1:
                raise ConfigError("siegel beta must lie in (0, 1)")
        return cfg


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML: {exc}") from exc
    return ExperimentConfig.from_mapping(data)


def parse_modulus(field: NumberField, spec) -> FractionalIdeal:
    if spec is None:
        return unit_ideal(field)
    try:
        if isinstance(spec, int):
            if spec == 0:
                raise ConfigError("modulus must be nonzero")
            return ideal_from_generators(field, [field.rational(abs(spec))])
        return ideal_from_generators(field, [field.element(g) for g in spec])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad modulus {spec!r}: {exc}") from exc


def parse_ideal(field: NumberField, spec) -> FractionalIdeal:
    if spec is None:
        return unit_ideal(field)
    if isinstance(spec, int):
        if not 0 <= spec < field.class_number:
            raise ConfigError(f"class index {spec} out of range")
        return field.class_representatives[spec]
    try:
        a = ideal_from_generators(field, [field.element(g) for g in spec])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad ideal {spec!r}: {exc}") from exc
    if a.denominator != 1:
        raise ConfigError("the ambient ideal must be integral")
    return a


def parse_alpha(field, q, a, spec) -> CongruenceClass | None:
    if spec is None:
        return None
    coords = [int(spec)] + [0] * (field.degree - 1) if isinstance(spec, int) else list(spec)
    try:
        return congruence_class(field, q, a, coords)
    except ValueError as exc:
        raise ConfigError(f"bad congruence class {spec!r}: {exc}") from exc


def resolve_character(field, q, spec):
    chars = enumerate_finite_characters(field, q)
    if spec is None or spec == "trivial":
        return chars[0]
    if isinstance(spec, int):
        if not 0 <= spec < len(chars):
            raise ConfigError(f"character index {spec} out of range (0..{len(chars) - 1})")
        return chars[spec]
    for c in chars:
        if str(list(c.label)) == str(spec) or str(c.label) == str(spec):
            return c
    raise ConfigError(f"unresolvable character {spec!r}")


def _frac(v) -> Fraction:
    return Fraction(str(v)) if isinstance(v, float) else Fraction(v)


def build_region(field: NumberField, desc: dict, N: float) -> Region:
    """Region from a descriptor; lengths scale with X = N^(1/n), norms with N."""
    if not isinstance(desc, dict) or "kind" not in desc:
        raise ConfigError("region descriptor needs a kind")
    n = field.degree
    X = N ** (1.0 / n)
    kind = desc["kind"]
    try:
        if kind == "empty":
            return Empty(n)
        if kind == "domain":
            return DomainSegment(field, float(desc.get("norm_lo", 0.0)) * N, float(desc.get("norm_hi", 1.0)) * N)
        if kind == "box":
            return Box(field, np.asarray(desc.get("bound", 1.0), dtype=float) * X)
        if kind == "ball":
            center = np.asarray(desc.get("center", [0.0] * n), dtype=float) * X
            return Ball(center, float(desc.get("radius", 1.0)) * X)
        if kind == "polytope":
            return HalfspacePolytope(desc["A"], np.asarray(desc["b"], dtype=float) * X)
        if kind == "annulus_sector":
            Xf = _frac(round(X, 9))
            radial = tuple((_frac(lo) * Xf, _frac(hi) * Xf) for lo, hi in desc["radial"])
            angular = tuple((_frac(a), _frac(b)) for a, b in desc.get("angular", []))
            signs = tuple(int(s) for s in desc.get("signs", [1] * field.r1))
            if len(radial) != field.r1 + field.r2 or len(angular) != field.r2 or len(signs) != field.r1:
                raise ConfigError("annulus sector parameters do not match the signature")
            return AnnulusSector(field, radial, angular, signs)
        if kind == "thin_cone":
            lo, hi = desc.get("norm", [0.0, 1.0])
            return ThinConeSegment(field, desc.get("t_lo", 0.0), desc.get("t_side", 1.0),
                                   desc.get("ang_lo", 0.0), desc.get("ang_side", 1.0),
                                   desc.get("signs", [1] * field.r1), float(lo) * N, float(hi) * N)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad region descriptor {desc!r}: {exc}") from exc
    raise ConfigError(f"unknown region kind {kind!r}")


# ---------------------------------------------------------------------------
# reports


def _round12(v):
    if v is None:
        return None
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if not math.isfinite(v):
            return None
        return float(f"{v:.12g}")
    return v


@dataclass
class Report:
    kind: str
    columns: list
    rows: list = dc_field(default_factory=list)
    metadata: dict = dc_field(default_factory=dict)

    def add_row(self, **values):
        missing = set(self.columns) - set(values)
        if missing:
            raise ValueError(f"row misses columns {sorted(missing)}")
        self.rows.append([_round12(values[c]) for c in self.columns])

    def column(self, name) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def to_dict(self) -> dict:
        return {"kind": self.kind, "columns": list(self.columns), "rows": self.rows,
                "metadata": self.metadata}


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit_report(report: Report, fmt: str = "csv", path: str | None = None) -> str:
    """Serialise a report (floats already rounded to 12 significant digits)."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(report.columns)
        for row in report.rows:
            w.writerow([_fmt(v) for v in row])
        text = buf.getvalue()
    elif fmt == "json":
        text = json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"
    else:
        raise ConfigError(f"unknown format {fmt!r}")
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def parse_report(text: str) -> Report:
    d = json.loads(text)
    return Report(d["kind"], d["columns"], d["rows"], d["metadata"])


# ---------------------------------------------------------------------------
# shared pieces


def mitsui_coefficient(field: NumberField, q: FractionalIdeal, a: FractionalIdeal) -> float:
    """w / (2^r1 pi^r2 h R phi(q) N(a))."""
    return field.torsion_order / (2 ** field.r1 * math.pi ** field.r2 * field.class_number
                                  * field.regulator * totient(field, q) * float(a.norm))


def _budget_warning(q: FractionalIdeal, N: float, c: float) -> str | None:
    limit = math.exp(math.sqrt(math.log(N)) / c) if N > 1 else 1.0
    if float(q.norm) >= limit:
        msg = f"N(q) = {q.norm} exceeds the budget exp(sqrt(log N)/{c}) = {limit:.4g} at N = {N:g}"
        warnings.warn(msg)
        return msg
    return None


def _metadata(cfg: ExperimentConfig, field, q, a, alpha) -> dict:
    return {
        "field": field.name,
        "modulus_hnf": [list(r) for r in q.basis],
        "ambient_hnf": [list(r) for r in a.basis],
        "alpha": None if alpha is None else list(alpha.representative.coords),
        "region": cfg.region,
        "character": cfg.character if not isinstance(cfg.character, tuple) else list(cfg.character),
        "trivialization": "first unit class of a/qa in canonical order (1 for a = O_K)",
        "weight_convention": "log N(pi a^-1), bound on N(pi a^-1)",
        "qmc_seed": QMC_SEED,
        "siegel": None if cfg.siegel is None else dict(cfg.siegel, synthetic=True),
        "version": __version__,
        "numpy": np.__version__,
    }


def _finish_row(rep: Report, N, emp, main, sec, t0):
    pred = main + sec
    err = emp - pred
    rel = err / pred if pred != 0 else None
    rep.add_row(N=N, empirical_sum=emp, predicted_main=main, predicted_secondary=sec,
                abs_error=abs(err), rel_error=rel, wall_time_ms=(time.perf_counter() - t0) * 1e3)


def _n_value(N):
    return int(N) if float(N).is_integer() else float(N)


# ---------------------------------------------------------------------------
# experiments


def run_pit(cfg: ExperimentConfig) -> Report:
    field = resolve_field(cfg.field)
    q = parse_modulus(field, cfg.modulus)
    psi = resolve_character(field, q, cfg.character)
    if not psi.is_trivial and field.class_number != 1:
        raise ConfigError("nontrivial characters need class number one")
    rep = Report("pit", list(REPORT_COLUMNS))
    rep.metadata = _metadata(cfg, field, q, unit_ideal(field), None)
    rep.metadata["character_label"] = list(psi.label)
    beta = None
    if cfg.siegel is not None:
        if not psi.is_real or psi.is_trivial:
            raise ConfigError("the synthetic exceptional character must be real and nontrivial")
        beta = float(cfg.siegel["beta"])
    warn = [w for w in (_budget_warning(q, N, cfg.budget_c) for N in cfg.schedule) if w]
    rep.metadata["warnings"] = warn
    imag = []
    if not cfg.schedule:
        return rep
    Nmax = max(cfg.schedule)
    t0 = time.perf_counter()
    if psi.is_trivial:
        norms, w = prime_ideal_log_norms(field, Nmax, q)
        vals = None
    else:
        from .ray import evaluate_character_batch
        b = prime_elements_array(field, unit_ideal(field), DomainSegment(field, 0, Nmax),
                                 modulus=q, coprime=True)
        norms, w = b.norms, b.weights
        vals = evaluate_character_batch(psi, b.points, b.residues) * w
    for N in cfg.schedule:
        sel = norms < N
        if vals is None:
            emp, im = math.fsum(w[sel].tolist()), 0.0
        else:
            emp, im = math.fsum(vals[sel].real.tolist()), math.fsum(vals[sel].imag.tolist())
        imag.append(_round12(im))
        main = N if psi.is_trivial else 0.0
        sec = -N ** beta / beta if beta is not None else 0.0
        _finish_row(rep, _n_value(N), emp, main, sec, t0)
        t0 = time.perf_counter()
    rep.metadata["empirical_imag"] = imag
    return rep


def _mitsui_rows(cfg, field, q, a, alpha, region_for, rep):
    coef = mitsui_coefficient(field, q, a)
    rep.metadata["coefficient"] = _round12(coef)
    psi_s, beta = None, None
    if cfg.siegel is not None:
        psi_s = resolve_character(field, q, cfg.siegel.get("character", 1))
        if not psi_s.is_real or psi_s.is_trivial:
            raise ConfigError("the synthetic exceptional character must be real and nontrivial")
        beta = float(cfg.siegel["beta"])
    alpha_eval = alpha if alpha is not None else congruence_class(
        field, q, a, residue_ring(field, a, q).trivialization.coords)
    for N in cfg.schedule:
        t0 = time.perf_counter()
        C = region_for(N)
        cc = alpha if (alpha is not None and q != unit_ideal(field)) else None
        b = prime_elements_array(field, a, C, cc)
        emp = math.fsum(b.weights.tolist())
        vol = region_volume(C).value
        main = coef * vol
        sec = 0.0
        if beta is not None:
            sec = coef * (secondary_integral(field, C, a, psi_s, alpha_eval, beta) - vol)
        _finish_row(rep, _n_value(N), emp, main, sec, t0)


def run_mitsui(cfg: ExperimentConfig) -> Report:
    field = resolve_field(cfg.field)
    q = parse_modulus(field, cfg.modulus)
    a = parse_ideal(field, cfg.ideal)
    alpha = parse_alpha(field, q, a, cfg.alpha)
    if alpha is None and q != unit_ideal(field):
        raise ConfigError("a nontrivial modulus needs a congruence class alpha")
    rep = Report("mitsui", list(REPORT_COLUMNS))
    rep.metadata = _metadata(cfg, field, q, a, alpha)
    rep.metadata["warnings"] = [w for w in (_budget_warning(q, N, cfg.budget_c) for N in cfg.schedule) if w]
    _mitsui_rows(cfg, field, q, a, alpha, lambda N: build_region(field, cfg.region, N), rep)
    return rep


def run_siegel_walfisz_q(cfg: ExperimentConfig) -> Report:
    """Primes p < N with p = a mod q, weighted by log p, against N / phi(q)."""
    field = resolve_field(cfg.field)
    if field.degree != 1:
        raise ConfigError("siegel-walfisz-q runs over Q only")
    q = parse_modulus(field, cfg.modulus)
    qn = int(q.norm)
    a_int = 1 if cfg.alpha is None else (cfg.alpha if isinstance(cfg.alpha, int) else int(cfg.alpha[0]))
    if math.gcd(a_int, qn) != 1:
        raise ConfigError(f"residue {a_int} is not invertible mod {qn}")
    O = unit_ideal(field)
    alpha = congruence_class(field, q, O, [a_int % qn if qn > 1 else 1])
    rep = Report("siegel-walfisz-q", list(REPORT_COLUMNS))
    rep.metadata = _metadata(cfg, field, q, O, alpha)
    rep.metadata["region"] = {"kind": "domain"}
    _mitsui_rows(cfg, field, q, O, alpha if qn > 1 else None,
                 lambda N: DomainSegment(field, 0, N), rep)
    return rep


PROOF_COLUMNS = ("cell", "t_lo", "ang_lo", "inner_lo", "inner_hi", "outer_lo", "outer_hi",
                 "s_inner", "s_mid", "s_outer", "pred_inner", "pred_outer", "chain_ok")


def thin_cone_cells(field: NumberField, B: AnnulusSector, Y2: int):
    """Cube cells (t index, angle index) meeting B, with inner and outer norm
    intervals for the thin-cone segments bracketing B inside each cube."""
    if field.degree != 2:
        raise ConfigError("the proof-path pipeline supports quadratic fields only")
    from .domain import norm_direction, unit_log_matrix
    u = norm_direction(field)
    wts = np.array([1.0] * field.r1 + [2.0] * field.r2)
    loA = np.array([math.log(float(lo)) for lo, _ in B.radial]) * wts
    hiA = np.array([math.log(float(hi)) for _, hi in B.radial]) * wts
    U = unit_log_matrix(field)
    side = 1.0 / Y2
    cells = []
    if field.unit_rank:
        from .domain import fundamental_domain
        D = fundamental_domain(field)
        corners = np.array([[s * float(B.radial[0][i]), s2 * float(B.radial[1][j])]
                            for i in (0, 1) for j in (0, 1)
                            for s, s2 in [B.signs]])
        t = D.unit_coordinates(corners)[:, 0]
        for k in range(math.floor(t.min() * Y2), math.floor(t.max() * Y2) + 1):
            cells.append((k * side, 0.0, side, 1.0, True))
    else:
        t0, t1 = (float(v) for v in B.angular[0])
        for k in range(math.floor(t0 * Y2), math.ceil(t1 * Y2)):
            lo, hi = k * side, (k + 1) * side
            inside = lo >= t0 - 1e-12 and hi <= t1 + 1e-12
            cells.append((0.0, lo, 1.0, side, inside))
    out = []
    for t_lo, a_lo, t_side, a_side, ang_inside in cells:
        if field.unit_rank:
            ts = np.array([[t_lo], [t_lo + t_side]])
            h = ts @ U                                  # (2, places)
        else:
            h = np.zeros((1, field.r1 + field.r2))
        lower = (loA[None, :] - h) / u[None, :]
        upper = (hiA[None, :] - h) / u[None, :]
        in_lo, in_hi = lower.max(), upper.min()
        out_lo, out_hi = lower.min(axis=0).max(), upper.max(axis=0).min()
        inner = (math.exp(in_lo) * (1 + 1e-9), math.exp(in_hi) * (1 - 1e-9)) \
            if (in_hi > in_lo and ang_inside) else None
        outer = (math.exp(out_lo) * (1 - 1e-9), math.exp(out_hi) * (1 + 1e-9)) if out_hi > out_lo else None
        out.append(dict(t_lo=t_lo, t_side=t_side, ang_lo=a_lo, ang_side=a_side,
                        inner=inner, outer=outer))
    return out


def proof_path_sector(field: NumberField, X: float, width: float) -> AnnulusSector:
    """Default body: radial shell [X - width, X) at every place in the first
    component (a quarter turn at a complex place)."""
    lo, hi = _frac(round(X - width, 9)), _frac(round(X, 9))
    rad = tuple((lo, hi) for _ in range(field.r1 + field.r2))
    ang = tuple((Fraction(0), Fraction(1, 4)) for _ in range(field.r2))
    return AnnulusSector(field, rad, ang, tuple([1] * field.r1))


def run_proof_path(cfg: ExperimentConfig) -> Report:
    field = resolve_field(cfg.field)
    if field.degree != 2:
        raise ConfigError("proof-path needs a quadratic field")
    q = parse_modulus(field, cfg.modulus)
    a = unit_ideal(field)
    p = cfg.params or {}
    X = float(p.get("X", 1000))
    Y2 = int(p.get("Y2", 64))
    width = float(p.get("width", X / 10))
    if cfg.region and cfg.region.get("kind") == "annulus_sector":
        B = build_region(field, cfg.region, X ** field.degree)
    else:
        B = proof_path_sector(field, X, width)
    coef = mitsui_coefficient(field, unit_ideal(field), a)
    rep = Report("proof-path", list(PROOF_COLUMNS))
    rep.metadata = _metadata(cfg, field, q, a, None)
    rep.metadata["sector"] = B.describe()
    rep.metadata.update(X=X, Y2=Y2)
    full = prime_elements_array(field, a, B)
    direct = math.fsum(full.weights.tolist())
    from .geometry import point_turns
    from .domain import fundamental_domain
    if field.unit_rank:
        tcoord = fundamental_domain(field).unit_coordinates(full.points)[:, 0] if len(full) else np.zeros(0)
    else:
        tcoord = point_turns(full.points, field)[:, 0] if len(full) else np.zeros(0)
    cells = thin_cone_cells(field, B, Y2)
    mids, agg, all_ok = [], [], True
    for i, c in enumerate(cells):
        lo_key = c["t_lo"] if field.unit_rank else c["ang_lo"]
        side = c["t_side"] if field.unit_rank else c["ang_side"]
        sel = (tcoord >= lo_key - 1e-12) & (tcoord < lo_key + side - 1e-12)
        s_mid = math.fsum(full.weights[sel].tolist())
        mids.append(full.weights[sel])
        sums, preds = {}, {}
        for key in ("inner", "outer"):
            iv = c[key]
            if iv is None:
                sums[key], preds[key] = 0.0, 0.0
                continue
            seg = ThinConeSegment(field, c["t_lo"], c["t_side"], c["ang_lo"], c["ang_side"],
                                  B.signs, iv[0], iv[1])
            sums[key] = math.fsum(prime_elements_array(field, a, seg).weights.tolist())
            preds[key] = coef * seg.volume()
        ok = sums["inner"] <= s_mid <= sums["outer"]
        all_ok &= ok
        agg.append((preds["inner"] + preds["outer"]) / 2)
        rep.add_row(cell=i, t_lo=c["t_lo"], ang_lo=c["ang_lo"],
                    inner_lo=c["inner"][0] if c["inner"] else None,
                    inner_hi=c["inner"][1] if c["inner"] else None,
                    outer_lo=c["outer"][0] if c["outer"] else None,
                    outer_hi=c["outer"][1] if c["outer"] else None,
                    s_inner=sums["inner"], s_mid=s_mid, s_outer=sums["outer"],
                    pred_inner=preds["inner"], pred_outer=preds["outer"], chain_ok=ok)
    mid_total = math.fsum(np.concatenate(mids).tolist()) if mids else 0.0
    s_in = math.fsum(rep.column("s_inner"))
    s_out = math.fsum(rep.column("s_outer"))
    bracket_mid = (s_in + s_out) / 2
    aggregate = math.fsum(agg)
    expected = coef * B.volume()
    rep.metadata.update(
        chain_ok=bool(all_ok),
        direct_sum=_round12(direct),
        cell_sum=_round12(mid_total),
        cells_partition_exact=bool(mid_total == direct and sum(len(m) for m in mids) == len(full)),
        inner_total=_round12(s_in),
        outer_total=_round12(s_out),
        bracket_rel_error=_round12((bracket_mid - direct) / direct) if direct else None,
        aggregate_prediction=_round12(aggregate),
        direct_prediction=_round12(expected),
        aggregate_rel_error=_round12((aggregate - expected) / expected) if expected else None,
        empirical_rel_error=_round12((direct - expected) / expected) if expected else None,
    )
    if q != unit_ideal(field):
        rep.metadata["class_split"] = class_split(field, q, B)
    return rep


def class_split(field: NumberField, q: FractionalIdeal, region: Region,
                a: FractionalIdeal | None = None) -> dict:
    """Weighted sums per unit class of a/qa over one enumeration, and the
    unconstrained coprime total."""
    a = a or unit_ideal(field)
    b = prime_elements_array(field, a, region, modulus=q, coprime=True)
    ring = residue_ring(field, a, q)
    sums, counts = [], []
    for k in range(ring.phi):
        sel = b.residues == k
        sums.append(math.fsum(b.weights[sel].tolist()))
        counts.append(int(sel.sum()))
    total = math.fsum(b.weights.tolist())
    return {
        "classes": [list(map(int, u)) for u in ring.units],
        "sums": sums,
        "counts": counts,
        "total": total,
        "total_count": int(len(b)),
        "exact": bool(sum(counts) == len(b)
                      and math.fsum(np.concatenate([b.weights[b.residues == k] for k in range(ring.phi)]).tolist())
                      == total) if ring.phi else True,
    }


PROPERTY_COLUMNS = ("property", "value", "threshold", "passed")


def run_properties(cfg: ExperimentConfig) -> Report:
    """Quick property suite; each row is (name, measured value, threshold, passed)."""
    from . import properties
    rep = Report("properties", list(PROPERTY_COLUMNS))
    selected = (cfg.params or {}).get("only")
    for name, fn in properties.SUITE:
        if selected and name not in selected:
            continue
        value, threshold, passed = fn()
        rep.add_row(property=name, value=value, threshold=threshold, passed=bool(passed))
    rep.metadata = {"version": __version__, "qmc_seed": QMC_SEED}
    return rep


RUNNERS = {
    "pit": run_pit,
    "mitsui": run_mitsui,
    "siegel-walfisz-q": run_siegel_walfisz_q,
    "proof-path": run_proof_path,
    "properties": run_properties,
}


def run_experiment(cfg: ExperimentConfig) -> Report:
    return RUNNERS[cfg.kind](cfg)


def check_report(report: Report, check: dict) -> list[str]:
    """Threshold failures as messages (empty when all pass)."""
    fails = []
    if report.kind == "properties":
        for row in report.rows:
            if not row[3]:
                fails.append(f"property {row[0]} failed: {row[1]} vs {row[2]}")
        return fails
    if report.kind == "proof-path":
        if not report.metadata.get("chain_ok"):
            fails.append("a bracketing chain failed")
        lim = check.get("max_aggregate_rel_error")
        for key in ("aggregate_rel_error", "bracket_rel_error"):
            err = report.metadata.get(key)
            if lim is not None and (err is None or abs(err) > lim):
                fails.append(f"{key} {err} exceeds {lim}")
        return fails
    lim = check.get("max_abs_rel_error")
    if lim is not None and report.rows:
        rel = report.rows[-1][report.columns.index("rel_error")]
        if rel is None or abs(rel) > lim:
            fails.append(f"final |rel_error| {rel} exceeds {lim}")
    lim = check.get("max_abs_sum_fraction")
    if lim is not None:
        for row in report.rows:
            N = row[0]
            emp = row[1]
            im = report.metadata.get("empirical_imag", [0.0] * len(report.rows))[report.rows.index(row)] or 0.0
            if math.hypot(emp, im) > lim * N:
                fails.append(f"|sum| at N={N} exceeds {lim} N")
    return fails
