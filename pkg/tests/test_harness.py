import math
from importlib import resources

import pytest
from sympy import primerange

from mitsui_lab.config import ConfigError
from mitsui_lab.harness import (PROOF_COLUMNS, REPORT_COLUMNS, ExperimentConfig, Report,
                                build_region, check_report, emit_report, load_config,
                                mitsui_coefficient, parse_report, run_experiment)


def _cfg(**kw):
    return ExperimentConfig.from_mapping(kw)


def _shipped(name):
    return str(resources.files("mitsui_lab.configs").joinpath(name))


def _theta(N):
    return math.fsum(math.log(p) for p in primerange(2, N))


def test_pit_small_schedule():
    rep = run_experiment(_cfg(kind="pit", field="Q", schedule=[2, 100]))
    assert rep.columns == list(REPORT_COLUMNS)
    n2, n100 = rep.rows
    assert n2[0] == 2 and n2[1] == 0.0
    assert n100[1] == pytest.approx(_theta(100), rel=1e-11)
    assert n100[2] == 100 and n100[3] == 0
    assert n100[5] == pytest.approx((_theta(100) - 100) / 100, rel=1e-10)
    assert n100[5] == pytest.approx(-0.16271609601, abs=1e-10)


def test_pit_gaussian_at_two_is_empty():
    rep = run_experiment(_cfg(kind="pit", field="Q(i)", schedule=[2]))
    assert rep.rows[0][1] == 0.0


def test_report_rows_are_deterministic():
    cfg = _cfg(kind="mitsui", field="Q(i)", region={"kind": "ball", "radius": 1.0}, schedule=[1000, 5000])
    a, b = run_experiment(cfg), run_experiment(cfg)
    t = REPORT_COLUMNS.index("wall_time_ms")
    strip = lambda r: [row[:t] for row in r.rows]
    assert strip(a) == strip(b)
    assert a.metadata == b.metadata


def test_empty_report_is_header_only():
    rep = Report("pit", list(REPORT_COLUMNS))
    assert emit_report(rep, "csv") == ",".join(REPORT_COLUMNS) + "\n"


def test_json_round_trip(tmp_path):
    rep = run_experiment(_cfg(kind="pit", field="Q(sqrt2)", schedule=[50, 500]))
    path = tmp_path / "r.json"
    text = emit_report(rep, "json", str(path))
    assert path.read_text() == text
    assert parse_report(text) == rep


def test_csv_has_one_line_per_row():
    rep = run_experiment(_cfg(kind="pit", field="Q", schedule=[10, 100, 1000]))
    lines = emit_report(rep, "csv").splitlines()
    assert len(lines) == 4 and lines[0].split(",") == list(REPORT_COLUMNS)


def test_non_finite_values_become_null():
    rep = Report("x", ["a"])
    rep.add_row(a=float("nan"))
    rep.add_row(a=1 / 3)
    assert rep.rows == [[None], [0.333333333333]]
    with pytest.raises(ValueError):
        rep.add_row(b=1)


def test_mitsui_disk_prediction():
    rep = run_experiment(_cfg(kind="mitsui", field="Q(i)", region={"kind": "ball", "radius": 1.0},
                              schedule=[10 ** 4]))
    N, emp, main = rep.rows[0][:3]
    assert main == pytest.approx(4 * N, rel=1e-11)
    assert rep.metadata["coefficient"] == pytest.approx(4 / math.pi)
    assert abs(emp / main - 1) < 0.05


def test_mitsui_sqrt2_box_prediction(Qs2):
    from mitsui_lab.field import unit_ideal
    rep = run_experiment(_cfg(kind="mitsui", field="Q(sqrt2)", region={"kind": "box", "bound": 1.0},
                              schedule=[10 ** 4]))
    X = 100.0
    pred = 2 / (4 * math.log(1 + math.sqrt(2))) * 4 * X * X
    assert rep.rows[0][2] == pytest.approx(pred, rel=1e-11)
    assert mitsui_coefficient(Qs2, unit_ideal(Qs2), unit_ideal(Qs2)) == pytest.approx(pred / (4 * X * X))


def test_mitsui_empty_region():
    rep = run_experiment(_cfg(kind="mitsui", field="Q(i)", region={"kind": "empty"}, schedule=[100]))
    row = rep.rows[0]
    assert row[1] == 0.0 and row[2] == 0.0 and row[5] is None


def test_mitsui_congruence_class_and_ambient():
    rep = run_experiment(_cfg(kind="mitsui", field="Q(i)", modulus=3, alpha=[1, 0],
                              region={"kind": "domain"}, schedule=[10 ** 5]))
    assert rep.metadata["coefficient"] == pytest.approx(4 / (math.pi * 8))
    assert abs(rep.rows[0][5]) < 0.05
    rep = run_experiment(_cfg(kind="mitsui", field="Q(i)", ideal=[[1, 1]], region={"kind": "ball"},
                              schedule=[10 ** 4]))
    assert rep.metadata["coefficient"] == pytest.approx(4 / (math.pi * 2))


def test_synthetic_siegel_term():
    cfg = load_config(_shipped("mitsui_siegel_synthetic.yaml"))
    rep = run_experiment(cfg)
    beta = 0.8
    for row in rep.rows:
        N, sec = row[0], row[3]
        # coefficient times the domain-segment volume per unit norm is 1/8
        assert abs(sec) == pytest.approx(N ** beta / (8 * beta), rel=1e-10)
    assert rep.metadata["siegel"]["synthetic"] is True


def test_pit_siegel_secondary():
    rep = run_experiment(_cfg(kind="pit", field="Q(i)", modulus=3, character=1, schedule=[1000],
                              siegel={"beta": 0.9}))
    assert rep.rows[0][3] == pytest.approx(-(1000 ** 0.9) / 0.9)
    assert rep.rows[0][2] == 0


def test_siegel_walfisz_q():
    rep = run_experiment(_cfg(kind="siegel-walfisz-q", field="Q", modulus=4, alpha=1,
                              schedule=[10 ** 6]))
    N, emp, main = rep.rows[0][:3]
    oracle = math.fsum(math.log(p) for p in primerange(2, N) if p % 4 == 1)
    assert emp == pytest.approx(oracle, rel=1e-11)
    assert main == pytest.approx(N / 2)
    assert 0.99 <= emp / main <= 1.01


def test_siegel_walfisz_trivial_modulus_is_theta():
    rep = run_experiment(_cfg(kind="siegel-walfisz-q", field="Q", modulus=1, schedule=[1000]))
    pit = run_experiment(_cfg(kind="pit", field="Q", schedule=[1000]))
    assert rep.rows[0][1] == pit.rows[0][1] == pytest.approx(_theta(1000), rel=1e-11)


@pytest.mark.parametrize("bad", [
    {"kind": "siegel-walfisz-q", "field": "Q", "modulus": 4, "alpha": 2},
    {"kind": "siegel-walfisz-q", "field": "Q(i)", "modulus": 4},
    {"kind": "mitsui", "field": "Q(i)", "modulus": 3},
    {"kind": "mitsui", "field": "Q(i)", "modulus": 3, "alpha": [3, 0]},
    {"kind": "mitsui", "field": "Q(i)", "region": {"kind": "torus"}},
    {"kind": "pit", "field": "Q(i)", "modulus": 3, "character": 7},
    {"kind": "pit", "field": "Q(i)", "modulus": 3, "character": 0, "siegel": {"beta": 0.9}},
    {"kind": "mitsui", "field": "Q(sqrt7)"},
    {"kind": "proof-path", "field": "Q"},
])
def test_config_errors_at_run(bad):
    with pytest.raises(ConfigError):
        run_experiment(_cfg(**bad))


@pytest.mark.parametrize("bad", [
    {"kind": "nonsense"},
    {"kind": "pit", "colour": "red"},
    {"kind": "pit", "schedule": [100, 10]},
    {"kind": "pit", "siegel": {"beta": 1.5}},
    {"kind": "pit", "siegel": {}},
])
def test_config_errors_at_load(bad):
    with pytest.raises(ConfigError):
        _cfg(**bad)


def test_budget_is_a_warning():
    with pytest.warns(UserWarning):
        rep = run_experiment(_cfg(kind="pit", field="Q", modulus=97, schedule=[100]))
    assert rep.metadata["warnings"]


def test_region_descriptors_scale(Qs2):
    B = build_region(Qs2, {"kind": "box", "bound": [1.0, 0.5]}, 10 ** 4)
    assert list(B.bounds) == [100.0, 50.0]
    S = build_region(Qs2, {"kind": "annulus_sector", "radial": [[0.5, 1], [0.25, 0.5]],
                           "signs": [1, -1]}, 10 ** 4)
    assert S.volume() == pytest.approx(50 * 25)
    with pytest.raises(ConfigError):
        build_region(Qs2, {"kind": "annulus_sector", "radial": [[0.5, 1]]}, 100)


def test_proof_path_zero_thickness():
    rep = run_experiment(_cfg(kind="proof-path", field="Q(sqrt2)", params={"X": 200, "Y2": 8},
                              region={"kind": "annulus_sector", "radial": [[0.9, 0.9], [0.9, 1.0]]}))
    assert rep.columns == list(PROOF_COLUMNS)
    md = rep.metadata
    assert md["direct_sum"] == 0 and md["chain_ok"]
    assert all(r[PROOF_COLUMNS.index("s_mid")] == 0 for r in rep.rows)


def test_proof_path_coarse_chain_holds():
    rep = run_experiment(_cfg(kind="proof-path", field="Q(sqrt2)", params={"X": 200, "Y2": 8}))
    assert rep.metadata["chain_ok"] and rep.metadata["cells_partition_exact"]
    assert check_report(rep, {}) == []


def test_proof_path_gaussian_class_split():
    rep = run_experiment(load_config(_shipped("proof_path_gaussian_mod3.yaml")))
    split = rep.metadata["class_split"]
    assert len(split["sums"]) == 8 and split["exact"]
    assert sum(split["counts"]) == split["total_count"]
    assert math.fsum(split["sums"]) == pytest.approx(split["total"], rel=1e-14)
    assert rep.metadata["chain_ok"]


def test_properties_report():
    rep = run_experiment(_cfg(kind="properties", params={"only": ["torus_volume_ratio",
                                                                  "sector_disjointness"]}))
    assert [r[0] for r in rep.rows] == ["sector_disjointness", "torus_volume_ratio"]
    assert all(r[3] for r in rep.rows)
    assert check_report(rep, {}) == []


def test_check_report_flags_failures():
    rep = run_experiment(_cfg(kind="pit", field="Q", schedule=[100]))
    assert check_report(rep, {"max_abs_rel_error": 0.01})
    assert not check_report(rep, {"max_abs_rel_error": 0.2})


@pytest.mark.slow
def test_convergence_direction():
    """The last |rel_error| of the schedule is the smallest in at least two of
    three reference configs."""
    wins = 0
    for name in ("pit_q.yaml", "mitsui_disk.yaml", "mitsui_sqrt2_box.yaml"):
        rel = [abs(r) for r in run_experiment(load_config(_shipped(name))).column("rel_error")]
        wins += int(rel[-1] == min(rel))
    assert wins >= 2
