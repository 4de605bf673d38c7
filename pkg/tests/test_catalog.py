import pytest

from coxsurf.catalog import (
    SURFACE_NAMES,
    CatalogError,
    UnknownSurfaceError,
    canonical_name,
    data_dir,
    format_surface,
    load_surface,
    parse_surface,
    validate_surface,
)
from coxsurf.picard import F, intersect

CURVE_COUNTS = {"X_22": 10, "X_211": 10, "X_411": 11, "X_9111": 12, "X_33": 12, "X_321": 12,
                "X_8211": 14, "X_44": 13, "X_431": 13, "X_222": 15, "X_141": 14, "X_6321": 17,
                "X_11": 14, "X_5511": 15, "X_4422": 20, "X_3333": 21}


def test_sixteen_surfaces(surfaces):
    assert list(surfaces) == list(SURFACE_NAMES)
    assert len(surfaces) == 16


@pytest.mark.parametrize("name", SURFACE_NAMES)
def test_descriptor_is_valid(surfaces, name):
    rep = validate_surface(surfaces[name])
    assert rep.ok, rep.failures


@pytest.mark.parametrize("name", SURFACE_NAMES)
def test_negative_curves(surfaces, name):
    s = surfaces[name]
    assert len(s.curves) == CURVE_COUNTS[name]
    for c in s.curves:
        sq, deg = intersect(c.cls, c.cls), intersect(F, c.cls)
        assert (sq, deg) == ((-1, 1) if c.is_section else (-2, 0))


def test_euler_numbers_sum_to_twelve(surfaces):
    for s in surfaces.values():
        assert s.euler_sum == 12


def test_round_trip(surfaces):
    s = surfaces["X_411"]
    assert parse_surface(format_surface(s)) == s


def test_names():
    assert canonical_name("411") == "X_411"
    assert canonical_name("X_11(a)") == "X_11"
    with pytest.raises(UnknownSurfaceError):
        canonical_name("NOPE")


def test_corrupted_descriptor_fails_validation(tmp_path):
    root = tmp_path / "data"
    (root / "surfaces").mkdir(parents=True)
    text = (data_dir() / "surfaces" / "X_22.txt").read_text()
    lines = [l for l in text.splitlines() if not l.startswith("P0 Th0.1")]
    assert len(lines) < len(text.splitlines())
    (root / "surfaces" / "X_22.txt").write_text("\n".join(lines) + "\n")
    with pytest.raises(CatalogError):
        load_surface("X_22", str(root))
    assert not validate_surface(load_surface("X_22", str(root), validate=False)).ok


def test_environment_override(tmp_path, monkeypatch):
    monkeypatch.setenv("COXSURF_DATA", str(tmp_path))
    assert data_dir() == tmp_path
    assert data_dir("/elsewhere").as_posix() == "/elsewhere"


def test_mw_group_law(surfaces):
    s = surfaces["X_411"]
    assert s.mw_order == 2
    assert s.mw_add("P1", "P1") == "P0"
    assert s.mw_add("P0", "P1") == "P1"
