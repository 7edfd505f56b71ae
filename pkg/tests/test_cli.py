import pytest
import yaml
from typer.testing import CliRunner

from dgbv_lab import __version__
from dgbv_lab.cli import app
from dgbv_lab.modelfile import load_solution, model_document
from dgbv_lab.models import load_bundled


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def test_version(runner):
    result = runner.invoke(app, ["version"])
    assert result.exit_code == 0
    assert __version__ in result.output


def test_check_torus(runner):
    result = runner.invoke(app, ["check", "torus-4"])
    assert result.exit_code == 0, result.output
    assert "exit code 0" in result.output


def test_check_machine_format(runner, isolated):
    out = isolated / "report.yml"
    result = runner.invoke(app, ["check", "torus-4", "--format", "machine", "--output", str(out)])
    assert result.exit_code == 0
    report = yaml.safe_load(out.read_text(encoding="utf-8"))["report"]
    assert report["command"] == "check"
    assert report["exit_code"] == 0
    assert [section["name"] for section in report["sections"]][:4] == ["axioms", "integral", "conditions", "inclusions"]


def test_check_kodaira_thurston_fails(runner):
    result = runner.invoke(app, ["check", "kodaira-thurston"])
    assert result.exit_code == 1
    assert "dim " in result.output
    assert "condition (A)" in result.output


def test_malformed_model_file(runner, isolated):
    path = isolated / "bad.yml"
    path.write_text("name: bad\nbasis:\n  - {name: x, degree: 1}\nintegral:\n  - [x, \"1/0\"]\n", encoding="utf-8")
    result = runner.invoke(app, ["check", str(path)])
    assert result.exit_code == 3
    assert "line 5" in result.output


def test_unknown_model(runner):
    result = runner.invoke(app, ["check", "klein-bottle"])
    assert result.exit_code == 3
    assert "torus-4" in result.output


def test_solve_torus_writes_first_order_only(runner, isolated):
    out = isolated / "gamma.yml"
    result = runner.invoke(app, ["solve", "torus-4", "--order", "3", "--output", str(out)])
    assert result.exit_code == 0, result.output
    solution = load_solution(out)
    assert sorted(solution.terms) == [1]
    assert len(solution.classes) == 16
    assert "round-trip" in result.output


def test_solve_composite_needs_force(runner):
    result = runner.invoke(app, ["solve", "bv-composite"])
    assert result.exit_code == 1
    assert "--force" in result.output


def test_solve_composite_is_obstructed(runner):
    result = runner.invoke(app, ["solve", "bv-composite", "--force", "--order", "3"])
    assert result.exit_code == 2
    assert "obstructed at order 2" in result.output


def test_solve_rejects_unknown_mode(runner):
    result = runner.invoke(app, ["solve", "torus-4", "--mode", "symbolic"])
    assert result.exit_code == 3


def test_frobenius_torus(runner):
    result = runner.invoke(app, ["frobenius", "torus-4", "--order", "2"])
    assert result.exit_code == 0, result.output
    assert "frobenius" in result.output


def test_compare_complex_curve(runner):
    result = runner.invoke(app, ["compare", "complex-torus-1", "--order", "3"])
    assert result.exit_code == 0, result.output
    assert "IDENTICAL" in result.output


def test_compare_needs_bigraded_model(runner):
    result = runner.invoke(app, ["compare", "torus-4"])
    assert result.exit_code == 1
    assert "not bigraded" in result.output


def test_compare_perturbed_metric(runner, isolated):
    document = model_document(load_bundled("complex-torus-1"))
    document["name"] = "perturbed-curve"
    document["inner_product"] = [
        [i, j, "8" if i == j == 3 else value] for i, j, value in document["inner_product"]
    ]
    path = isolated / "perturbed.yml"
    path.write_text(yaml.safe_dump(document, sort_keys=False), encoding="utf-8")
    result = runner.invoke(app, ["compare", str(path), "--order", "2"])
    assert result.exit_code == 1
    assert "❌ lefschetz-sl2" in result.output


def test_lefschetz(runner):
    result = runner.invoke(app, ["lefschetz", "torus-4"])
    assert result.exit_code == 0, result.output
    failed = runner.invoke(app, ["lefschetz", "kodaira-thurston"])
    assert failed.exit_code == 1
    assert "k = 1" in failed.output


def test_lefschetz_with_explicit_class(runner):
    result = runner.invoke(app, ["lefschetz", "torus-4", "--omega", "e1^e3, e2^e4"])
    assert result.exit_code == 0
    bad = runner.invoke(app, ["lefschetz", "torus-4", "--omega", "e1^e9"])
    assert bad.exit_code == 3


def test_lefschetz_in_odd_top_degree_is_not_applicable(runner):
    result = runner.invoke(app, ["lefschetz", "heisenberg", "--omega", "e1^e2"])
    assert result.exit_code == 0, result.output
    assert "not applicable" in result.output


def test_models_list_and_dump(runner, isolated):
    listing = runner.invoke(app, ["models", "list"])
    assert listing.exit_code == 0
    assert "bv-composite" in listing.output
    out = isolated / "torus.yml"
    dumped = runner.invoke(app, ["models", "dump", "torus-4", "--output", str(out)])
    assert dumped.exit_code == 0
    assert runner.invoke(app, ["check", str(out)]).exit_code == 0
    grammar = runner.invoke(app, ["models", "grammar"])
    assert "products" in grammar.output


def test_init_writes_starter_model(runner, isolated):
    first = runner.invoke(app, ["init"])
    assert first.exit_code == 0
    assert (isolated / "model.yml").exists()
    assert runner.invoke(app, ["init"]).exit_code == 1
    assert runner.invoke(app, ["check", "model.yml"]).exit_code in (0, 1)


def test_settings_drive_defaults(runner, isolated):
    assert runner.invoke(app, ["config", "init"]).exit_code == 0
    assert runner.invoke(app, ["config", "validate"]).exit_code == 0
    (isolated / "dgbv_lab.yml").write_text("output_format: machine\norder: 2\n", encoding="utf-8")
    result = runner.invoke(app, ["check", "torus-4"])
    assert yaml.safe_load(result.output)["report"]["exit_code"] == 0


def test_invalid_settings_exit_three(runner, isolated):
    (isolated / "dgbv_lab.yml").write_text("log_level: LOUD\n", encoding="utf-8")
    result = runner.invoke(app, ["version"])
    assert result.exit_code == 3
