import pytest

from wetrain.config import ConfigError, build_params, load_config, parse_range


def write(tmp_path, text):
    path = tmp_path / "exp.ini"
    path.write_text(text)
    return str(path)


def test_defaults():
    cfg = load_config()
    p = build_params(cfg.system)
    assert (p.M, p.N, p.T, p.K) == (5, 10, 50, 0.0)
    assert p.sigma_r2 == pytest.approx(1e-12)
    assert cfg.trials == 10000 and cfg.scenario == "rayleigh"


def test_file_and_overrides(tmp_path):
    path = write(tmp_path, "[system]\nM = 3\nT = 80 ; comment\n[run]\nseed = 4\n")
    cfg = load_config(path, ["T=90", "run.trials=50"])
    assert cfg.system["M"] == 3 and cfg.system["T"] == 90
    assert cfg.seed == 4 and cfg.trials == 50


def test_k_db_replaces_linear(tmp_path):
    cfg = load_config(None, ["K_db=10", "scenario.name=miso_rician", "N=1"])
    assert build_params(cfg.system).K == pytest.approx(10.0)
    path = write(tmp_path, "[system]\nK_db = 3\nN = 1\n[scenario]\nname = miso_rician\n")
    cfg = load_config(path, ["K=4"])
    assert build_params(cfg.system).K == 4.0


def test_sweep_points():
    cfg = load_config(None, ["sweep.variable=T", "sweep.values=25, 50,100"])
    assert [v for v, _, _ in cfg.points()] == [25, 50, 100]
    assert [s["T"] for _, s, _ in cfg.points()] == [25, 50, 100]


@pytest.mark.parametrize("overrides", [
    ["sweep.variable=M,T", "sweep.values=1"],
    ["sweep.variable=M T", "sweep.values=1"],
    ["sweep.variable=colour", "sweep.values=1"],
    ["sweep.variable=M"],
    ["scenario.name=miso_rician"],          # N = 10
    ["scenario.name=warp"],
    ["M=2.5"],
    ["T=abc"],
    ["nosuch=1"],
    ["seed"],
    ["run.trials=0"],
    ["run.lambda_method=guess"],
    ["K=1"],                                # rayleigh with K > 0
])
def test_rejects(overrides):
    with pytest.raises(ConfigError):
        load_config(None, overrides)


def test_bad_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(write(tmp_path, "[bogus]\nx=1\n"))
    with pytest.raises(ConfigError):
        load_config(write(tmp_path, "[system]\nQ=1\n"))
    with pytest.raises(ConfigError):
        load_config(write(tmp_path, "no header\n"))


def test_parse_range():
    assert parse_range("1:5") == [1, 2, 3, 4, 5]
    assert parse_range("2:10:4") == [2, 6, 10]
    assert parse_range("3, 1,7") == [3, 1, 7]
