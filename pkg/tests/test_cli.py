import json
from fractions import Fraction

import pytest
from click.testing import CliRunner

from ofhaar.cli import RunConfig, load_fmatrix, main, parse_f_spec, run
from ofhaar.deformation import CanonicalSpec
from ofhaar.weingarten import clear_memory_cache

CANONICAL = '{"type":"canonical","c":1,"k":1,"rho":["1/2"],"n":2}'
IDENTITY2 = '{"type":"canonical","c":1,"k":0,"rho":[],"n":2}'
RAW_MINUS = '{"type":"raw","entries":[["0","1"],["-1","0"]]}'


@pytest.fixture(autouse=True)
def fresh_cache():
    clear_memory_cache()
    yield
    clear_memory_cache()


@pytest.fixture
def runner():
    return CliRunner()


# -- spec parsing ----------------------------------------------------------------


def test_parse_f_spec_canonical():
    spec = parse_f_spec(CANONICAL)
    assert isinstance(spec, CanonicalSpec)
    assert spec.rho == (Fraction(1, 2),)


def test_parse_f_spec_raw_and_validation():
    grid = parse_f_spec(RAW_MINUS)
    assert grid == [["0", "1"], ["-1", "0"]]
    assert load_fmatrix(RAW_MINUS).c == -1


def test_parse_f_spec_errors():
    with pytest.raises(ValueError, match="parse error at position"):
        parse_f_spec("{not json")
    with pytest.raises(ValueError, match="type"):
        parse_f_spec('{"c": 1}')
    with pytest.raises(ValueError, match="n = 2k"):
        load_fmatrix('{"type":"canonical","c":-1,"k":1,"rho":["1/2"],"n":3}')


def test_load_fmatrix_from_file(tmp_path):
    path = tmp_path / "f.json"
    path.write_text(CANONICAL)
    assert load_fmatrix(str(path)).nf.to_fraction() == Fraction(17, 4)
    with pytest.raises(ValueError, match="not found"):
        load_fmatrix("nonexistent.json")


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(subcommand="moment", output_format="xml")
    with pytest.raises(ValueError):
        RunConfig(subcommand="moment", mode="quantum")
    assert run(RunConfig(subcommand="nonsense")) == 2


# -- subcommands -------------------------------------------------------------------


def test_moment_command(runner):
    result = runner.invoke(
        main,
        ["moment", "--f", IDENTITY2, "--i", "1,1,1,1", "--j", "1,1,1,1", "--eps", "1,1,1,1"],
    )
    assert result.exit_code == 0
    assert result.output.strip() == "1/3"


def test_star_moment_command(runner):
    result = runner.invoke(
        main,
        ["star-moment", "--f", CANONICAL, "--i", "1,1", "--j", "1,1", "--eps", "*,1"],
    )
    assert result.exit_code == 0
    assert result.output.strip() == "1/17"


def test_moment_domain_error_exits_one(runner):
    result = runner.invoke(
        main, ["moment", "--f", IDENTITY2, "--i", "1,3", "--j", "1,1"]
    )
    assert result.exit_code == 1


def test_usage_error_exits_two(runner):
    result = runner.invoke(main, ["moment", "--f", IDENTITY2])
    assert result.exit_code == 2


def test_gram_compare_bruteforce(runner):
    result = runner.invoke(
        main, ["gram", "--f", RAW_MINUS, "--l", "4", "--compare-bruteforce"]
    )
    assert result.exit_code == 0
    assert result.output.rstrip().endswith("MATCH")
    doc = json.loads(result.output[: result.output.rfind("MATCH")])
    assert doc["gram_closed"] == [["4", "-2"], ["-2", "4"]]
    assert doc["gram_closed"] == doc["gram_bruteforce"]


def test_weingarten_command_with_cache(runner, tmp_path):
    args = [
        "weingarten", "--f", IDENTITY2, "--l", "4", "--cache-dir", str(tmp_path),
    ]
    cold = runner.invoke(main, args)
    assert cold.exit_code == 0
    assert list(tmp_path.glob("wg_l4_*.json"))
    clear_memory_cache()
    warm = runner.invoke(main, args)
    assert warm.output == cold.output
    doc = json.loads(cold.output)
    assert doc["wg"] == [["1/3", "-1/6"], ["-1/6", "1/3"]]


def test_variances_command(runner):
    result = runner.invoke(main, ["variances", "--f", CANONICAL, "--format", "csv"])
    assert result.exit_code == 0
    lines = result.output.strip().split("\n")
    assert lines[0] == "i,j,left,right"
    assert "1,1,1/17,16/17" in lines


def test_classify_command(runner):
    result = runner.invoke(main, ["classify", "--f", CANONICAL])
    assert result.output.strip() == "III_1/16"
    result = runner.invoke(main, ["classify", "--f", IDENTITY2])
    assert result.output.strip() == "II_1"


def test_free_moment_command(runner):
    family = '[{"label":"s","kind":"semicircular","left_var":"1"}]'
    result = runner.invoke(
        main, ["free-moment", "--family", family, "--r", "s,s,s,s"]
    )
    assert result.output.strip() == "2"


def test_fock_check_command(runner):
    family = (
        '[{"label":"c","kind":"generalized-circular","left_var":"1/4","right_var":"1"}]'
    )
    result = runner.invoke(
        main,
        ["fock-check", "--family", family, "--r", "c,c", "--eps", "*,1", "--cutoff", "2"],
    )
    assert result.exit_code == 0
    assert result.output.strip() == "free=1/4 fock=1/4 MATCH"


def test_converge_command_deterministic(runner):
    args = [
        "converge", "--family", "gamma", "--k", "1", "--rho", "1/2",
        "--gammas", "1/2,1/4", "--l", "4", "--format", "csv",
    ]
    first = runner.invoke(main, args)
    second = runner.invoke(main, args)
    assert first.exit_code == 0
    assert first.output == second.output
    header = first.output.split("\n", 1)[0]
    assert header == "family,param,n_f,word,error,scaled"


def test_converge_cold_vs_warm_cache(runner, tmp_path):
    args = [
        "converge", "--family", "gamma", "--k", "1", "--rho", "1/2",
        "--gammas", "1/2,1/4", "--l", "4", "--format", "csv",
        "--cache-dir", str(tmp_path),
    ]
    cold = runner.invoke(main, args)
    clear_memory_cache()
    warm = runner.invoke(main, args)
    assert cold.output == warm.output


def test_invariance_command(runner):
    result = runner.invoke(
        main, ["invariance", "--f", CANONICAL, "--l", "2", "--eps", "*,1", "--i", "1,1"]
    )
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["difference"] == "0"
    assert doc["lhs"] == "1/4"


def test_invariance_suite(runner):
    result = runner.invoke(main, ["invariance", "--f", IDENTITY2, "--suite"])
    assert result.exit_code == 0
    docs = json.loads(result.output)
    assert len(docs) > 4
    assert all(doc["difference"] == "0" for doc in docs)


def test_invariance_requires_args_without_suite(runner):
    result = runner.invoke(main, ["invariance", "--f", IDENTITY2])
    assert result.exit_code == 2


def test_weak_checks_command(runner):
    result = runner.invoke(main, ["weak-checks", "--f", CANONICAL, "--i", "1", "--j", "2"])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["unitarity"] == "0"
    assert doc["q_relation"] == "0"


def test_cache_dir_env_var(runner, tmp_path, monkeypatch):
    monkeypatch.setenv("OFHAAR_CACHE_DIR", str(tmp_path))
    result = runner.invoke(main, ["weingarten", "--f", IDENTITY2, "--l", "4"])
    assert result.exit_code == 0
    assert list(tmp_path.glob("wg_l4_*.json"))


def test_converge_float_mode(runner):
    args = [
        "converge", "--family", "large-rank", "--ks", "1", "--lam", "2",
        "--l", "2", "--format", "csv", "--mode", "float", "--prec", "192",
    ]
    result = runner.invoke(main, args)
    assert result.exit_code == 0
    lines = result.output.strip().split("\n")
    assert lines[1].startswith("large-rank,1,float192:")
    # exact mode must reject the non-square lambda instead
    exact = runner.invoke(main, args[:-4] + ["--mode", "exact"])
    assert exact.exit_code == 1


def test_output_file_written_atomically(runner, tmp_path):
    out = tmp_path / "sub" / "table.csv"
    args = [
        "converge", "--family", "gamma", "--gammas", "1/2", "--l", "2",
        "--format", "csv", "--out", str(out),
    ]
    result = runner.invoke(main, args)
    assert result.exit_code == 0
    assert out.exists()
    assert out.read_text().startswith("family,param")
    assert not list(out.parent.glob("*.tmp"))
