import pytest

from dynlab import __version__
from dynlab.demos import DEMOS
from dynlab.manifest import build_manifest, digest


@pytest.mark.parametrize("name", sorted(DEMOS))
def test_demo_passes(name):
    rep = DEMOS[name]()
    assert rep.ok, rep.text()
    assert rep.text().count("[ok]") == len(rep.checks)


def test_demo_text_is_stable():
    assert DEMOS["figure1"]().text() == DEMOS["figure1"]().text()


def test_manifest(tmp_path):
    f = tmp_path / "x.txt"
    f.write_text("abc")
    man = build_manifest("cmd", inputs={"x": f}, seed=3, params={"b": 1, "a": 2})
    assert man["inputs"]["x"] == digest("abc") == "sha256:" + (
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
    )
    assert list(man["params"]) == ["a", "b"]
    assert man["version"] == __version__ and "time" not in str(man)
