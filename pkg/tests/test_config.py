import math
import textwrap

import pytest

from lcsurf.config import (ProbeSpec, RunConfig, constant_value, default_config, load_config,
                           load_config_file)
from lcsurf.errors import ConfigError

CUSTOM = textwrap.dedent("""\
    [surface]
    name = "sphere-like"
    X.x1 = "sin(u)"
    X.x2 = "cos(u)*sin(v)"
    X.x3 = "cos(u)*cos(v)"
    v.x1 = "1"
    v.x2 = "sin(v)"
    v.x3 = "cos(v)"
    w.x1 = "1"
    w.x2 = "-sin(v)"
    w.x3 = "-cos(v)"

    [domain]
    u = [0, "2*pi"]
    v = [0, "2*pi"]

    [grid]
    nu = 16
    nv = 8
""")


def test_builtin_shorthand():
    cfg = load_config('surface = "paper-example"\n[grid]\nnu = 64\nnv = 64\n')
    assert cfg.surface.name == "paper-example"
    assert cfg.grid == (64, 64)
    assert cfg.ranges == ((0.0, 2 * math.pi), (0.0, 2 * math.pi))
    assert cfg.branch == "plus" and cfg.tol is None
    assert cfg.probe == ProbeSpec()


def test_builtin_table_form():
    cfg = load_config('[surface]\nbuiltin = "twisted-revolution"\n')
    assert cfg.surface.name == "twisted-revolution"


def test_custom_surface():
    cfg = load_config(CUSTOM)
    assert cfg.surface.name == "sphere-like"
    assert cfg.grid == (16, 8)
    assert cfg.surface.sources()["X.x2"] == "cos(u) * sin(v)"
    assert cfg.ranges[0][1] == pytest.approx(2 * math.pi)


def test_same_surface_same_digest():
    a = load_config(CUSTOM)
    b = load_config(CUSTOM.replace('name = "sphere-like"', 'name = "sphere-like"   # comment'))
    assert a.digest() == b.digest()
    assert a.digest() != a.with_overrides(grid=(8, 8)).digest()
    assert len(a.digest()) == 64


def test_missing_component_names_key():
    text = CUSTOM.replace('w.x3 = "-cos(v)"\n', "")
    with pytest.raises(ConfigError) as info:
        load_config(text)
    assert info.value.key == "surface.w.x3"
    assert "w.x3" in str(info.value)


def test_grid_too_small():
    with pytest.raises(ConfigError) as info:
        load_config(CUSTOM.replace("nu = 16", "nu = 1"))
    assert info.value.key == "grid.nu"
    assert info.value.line == CUSTOM.splitlines().index("nu = 16") + 1


@pytest.mark.parametrize("text, key", [
    ('surface = "nope"\n', "surface.builtin"),
    ('surface = "paper-example"\n[grid]\nnu = 2.5\n', "grid.nu"),
    ('surface = "paper-example"\n[grid]\nnx = 4\n', "grid.nx"),
    ('surface = "paper-example"\n[extra]\na = 1\n', "extra"),
    ('surface = "paper-example"\n[focal]\nbranch = "up"\n', "focal.branch"),
    ('surface = "paper-example"\n[tolerance]\nbase = -1\n', "tolerance.base"),
    ('surface = "paper-example"\n[output]\nplot = "a.png"\n', "output.plot"),
    ('surface = "paper-example"\n[domain]\nu = [0, 9]\nv = [0, 1]\n', "domain.u"),
    ('surface = "paper-example"\n[domain]\nu = [1, 0]\nv = [0, 1]\n', "domain.u"),
    ('surface = "paper-example"\n[domain]\nu = [0, 1]\n', "domain.v"),
    ('surface = "paper-example"\n[probe]\nu = "x"\n', "probe.u"),
])
def test_config_errors(text, key):
    with pytest.raises(ConfigError) as info:
        load_config(text)
    assert info.value.key == key


def test_bad_expression_in_component():
    with pytest.raises(ConfigError) as info:
        load_config(CUSTOM.replace('"sin(u)"', '"sin(u"'))
    assert info.value.key == "surface.X.x1"
    assert info.value.line == 3


def test_invalid_toml_has_line():
    with pytest.raises(ConfigError) as info:
        load_config('surface = "paper-example"\n[grid\n')
    assert info.value.line == 2


def test_custom_surface_needs_domain():
    with pytest.raises(ConfigError) as info:
        load_config(CUSTOM.split("[domain]")[0])
    assert info.value.key == "domain"


def test_invalid_frame_rejected():
    with pytest.raises(ConfigError) as info:
        load_config(CUSTOM.replace('w.x2 = "-sin(v)"', 'w.x2 = "sin(v)"').replace(
            'w.x3 = "-cos(v)"', 'w.x3 = "cos(v)"'))
    assert info.value.key == "surface"


def test_domain_override_inside_builtin():
    cfg = load_config('surface = "paper-example"\n[domain]\nu = ["pi/2", "pi"]\nv = [0, 1]\n')
    assert cfg.ranges == ((math.pi / 2, math.pi), (0.0, 1.0))
    assert cfg.surface.domain[0] == (0.0, 2 * math.pi)


def test_other_sections():
    cfg = load_config(textwrap.dedent("""\
        surface = "paper-example"
        [tolerance]
        base = 1e-8
        [output]
        report = "r.json"
        [focal]
        branch = "minus"
        [probe]
        u = "t"
        v = "1"
        target = "3*pi/4"
        samples = 10
        side = 1
    """))
    assert cfg.tol == 1e-8
    assert cfg.outputs == {"report": "r.json"}
    assert cfg.branch == "minus"
    assert cfg.probe == ProbeSpec("t", "1", 3 * math.pi / 4, 10, 1)


def test_overrides():
    cfg = default_config().with_overrides(grid=(5, 7), tol=1e-6, branch="minus")
    assert (cfg.grid, cfg.tol, cfg.branch) == ((5, 7), 1e-6, "minus")
    with pytest.raises(ConfigError):
        default_config().with_overrides(grid=(1, 4))


def test_constant_value():
    assert constant_value("5*pi/4") == pytest.approx(5 * math.pi / 4)
    assert constant_value("1e-3") == 1e-3
    with pytest.raises(Exception):
        constant_value("u + 1")


def test_load_from_file(tmp_path):
    p = tmp_path / "run.toml"
    p.write_text(CUSTOM)
    assert isinstance(load_config_file(p), RunConfig)
