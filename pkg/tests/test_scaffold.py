import json

import pytest

from rggspectra.config import parse_config
from rggspectra.errors import ConfigError
from rggspectra.scaffold import PRESETS, create_config, slugify


def test_slugify():
    assert slugify("  My Sweep #2 ") == "my-sweep-2"
    assert slugify("!!!") == "config"


@pytest.mark.parametrize("preset", sorted(PRESETS))
def test_presets_are_valid_configs(tmp_path, preset):
    path = create_config(tmp_path, preset)
    assert path.name == f"{preset}.json"
    cfg = parse_config(path.read_text())
    assert cfg.regime == PRESETS[preset]["regime"]


def test_names_do_not_collide(tmp_path):
    first = create_config(tmp_path, "fig2b", "Large Run")
    second = create_config(tmp_path, "fig2b", "Large Run")
    assert first.name == "large-run.json"
    assert second.name == "large-run-2.json"
    assert json.loads(second.read_text()) == PRESETS["fig2b"]


def test_unknown_preset(tmp_path):
    with pytest.raises(ConfigError, match="fig2a"):
        create_config(tmp_path, "fig3")
