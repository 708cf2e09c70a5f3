import numpy as np
import pytest

from kaehlerlab.geometry.ambient import make_ambient
from kaehlerlab.geometry.fixtures import BUILTINS, resolve_params
from kaehlerlab.geometry.submanifold import make_immersion


def test_builtin_names():
    assert list(BUILTINS) == ["SPH3", "SLANT", "LAGR2", "CLINE", "CRW", "CRPROD"]
    assert BUILTINS["CRW"].n == 3
    assert BUILTINS["LAGR2"].schema() == "no parameters"
    assert "radius" in BUILTINS["SPH3"].schema()


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_every_builtin_builds_in_flat_space(flat2, name):
    immersion = make_immersion(flat2, name)
    assert immersion.n == BUILTINS[name].n
    assert immersion.image(immersion.center).shape == (4,)


def test_names_are_case_insensitive(flat2):
    assert make_immersion(flat2, "sph3").name == "SPH3"


def test_params_are_resolved_with_defaults():
    assert resolve_params(BUILTINS["SLANT"], {}) == {"theta": 0.7}
    assert resolve_params(BUILTINS["SPH3"], {"r": 2}) == {"r": 2.0}
    with pytest.raises(ValueError, match="Unknown parameter"):
        resolve_params(BUILTINS["SPH3"], {"radius": 2.0})
    with pytest.raises(ValueError, match="positive"):
        resolve_params(BUILTINS["SPH3"], {"r": 0.0})


def test_label_shows_parameters(flat2):
    assert make_immersion(flat2, "SLANT", params={"theta": 0.3}).label == "SLANT(theta=0.3)"
    assert make_immersion(flat2, "CRW").label == "CRW"


def test_flat_only_fixtures_are_rejected_elsewhere(fs2):
    with pytest.raises(ValueError, match="only defined in a flat ambient"):
        make_immersion(fs2, "SPH3")


def test_unknown_builtin(flat2):
    with pytest.raises(ValueError, match="Unknown builtin immersion"):
        make_immersion(flat2, "TORUS")


def test_builtin_and_components_are_exclusive(flat2):
    with pytest.raises(ValueError, match="not both"):
        make_immersion(flat2, "CLINE", components=["u", "v", "0", "0"])


@pytest.mark.parametrize("kind", ["fubini_study", "complex_hyperbolic"])
def test_complex_line_pads_into_higher_dimension(kind):
    ambient = make_ambient(kind, 3)
    line = make_immersion(ambient, "CLINE")
    assert line.image([0.1, 0.2]) == pytest.approx(np.array([0.1, 0.2, 0.0, 0.0, 0.0, 0.0]))


def test_custom_box_replaces_sampling_box(flat2):
    crw = make_immersion(flat2, "CRW", box=[[1.0, 2.0], [0.0, 1.0], [0.3, 0.9]])
    assert crw.sampling_box == ((1.0, 2.0), (0.0, 1.0), (0.3, 0.9))
    assert not crw.contains([0.5, 0.5, 0.5])
