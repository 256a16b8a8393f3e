from pathlib import Path

import pytest

from qlwe.core.exceptions import ConfigError
from qlwe.harness.presets import BUILTIN_PRESETS, builtin_preset, config_hash, load_config, parse_config
from qlwe.schemas.preset import PresetMode

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def test_tiny_preset_derives_r():
    preset = load_config("tiny")
    assert preset.desk_runnable
    assert preset.params.r == 2
    assert preset.params.B_P == pytest.approx(64 / 72 ** 0.5)


def test_every_desk_preset_validates():
    for name, raw in BUILTIN_PRESETS.items():
        preset = builtin_preset(name)
        assert preset.desk_runnable == (raw.get("mode", "desk") == "desk")


def test_strict_preset_is_not_runnable():
    preset = load_config("strict")
    assert preset.mode == PresetMode.STRICT_SYMBOLIC
    assert not preset.desk_runnable
    assert preset.symbolic["epsilon"] == "1/n"
    with pytest.raises(ConfigError, match="not desk-runnable"):
        preset.require_params()


def test_toml_files_load():
    tiny = load_config(CONFIGS / "tiny.toml")
    assert tiny.name == "tiny-file"
    assert tiny.params == builtin_preset("tiny").params
    baseline = load_config(CONFIGS / "baseline.toml")
    assert baseline.trials.workers == 4
    assert baseline.trials.repetitions == 2
    assert not load_config(CONFIGS / "strict.toml").desk_runnable


def test_missing_field_is_named(tmp_path):
    path = tmp_path / "broken.toml"
    path.write_text('[preset]\nname = "broken"\n\n[params]\nn = 2\nm = 6\nB_V = 1\nepsilon = 0.5\n', encoding="utf-8")
    with pytest.raises(ConfigError) as info:
        load_config(path)
    assert any(err.startswith("params.q") for err in info.value.errors)


def test_underpowered_modulus_is_rejected():
    with pytest.raises(ConfigError, match="r = "):
        parse_config({"preset": {"name": "weak"}, "params": {"n": 2, "m": 6, "q": 8, "B_V": 1, "epsilon": 0.5}})


def test_desk_preset_needs_params():
    with pytest.raises(ConfigError):
        parse_config({"preset": {"name": "empty"}})


def test_unreadable_inputs(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "absent.toml")
    bad = tmp_path / "bad.toml"
    bad.write_text("[preset\nname = ", encoding="utf-8")
    with pytest.raises(ConfigError, match="cannot parse"):
        load_config(bad)


def test_config_hash_tracks_content():
    assert config_hash(builtin_preset("tiny")) == config_hash(builtin_preset("tiny"))
    assert config_hash(builtin_preset("tiny")) != config_hash(builtin_preset("baseline"))
    assert len(config_hash(builtin_preset("tiny"))) == 64
