import pytest

from dgbv_lab.config import ConfigError, EngineSettings, find_settings, load_settings, save_settings


def test_defaults(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    settings = load_settings()
    assert settings == EngineSettings()
    assert settings.order == 4 and settings.mode == "analytic"
    assert settings.source_path is None


def test_load_explicit_file(tmp_path):
    path = tmp_path / "dgbv_lab.yml"
    path.write_text("order: 2\nmode: normalized\nlog_level: debug\n", encoding="utf-8")
    settings = load_settings(path)
    assert settings.order == 2
    assert settings.mode == "normalized"
    assert settings.log_level == "DEBUG"
    assert settings.source_path == path


@pytest.mark.parametrize(
    "content",
    ["log_level: LOUD\n", "order: 0\n", "order: 9\n", "mode: symbolic\n", "- a\n- b\n", "order: [\n"],
)
def test_invalid_settings(tmp_path, content):
    path = tmp_path / "dgbv_lab.yml"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(ConfigError):
        load_settings(path)


def test_missing_explicit_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_settings(tmp_path / "nope.yml")


def test_save_and_reload(tmp_path):
    path = tmp_path / "nested" / "dgbv_lab.yml"
    save_settings(path, EngineSettings(order=3, lefschetz_omega="e1^e2, e3^e4"))
    assert "source_path" not in path.read_text(encoding="utf-8")
    reloaded = load_settings(path)
    assert reloaded.order == 3
    assert reloaded.lefschetz_omega == "e1^e2, e3^e4"


def test_find_settings_walks_up(tmp_path, monkeypatch):
    (tmp_path / "dgbv_lab.yml").write_text("order: 5\n", encoding="utf-8")
    nested = tmp_path / "a" / "b"
    nested.mkdir(parents=True)
    assert find_settings(nested) == tmp_path / "dgbv_lab.yml"
    monkeypatch.chdir(nested)
    assert load_settings().order == 5
