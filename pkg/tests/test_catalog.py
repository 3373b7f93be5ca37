import numpy as np
import pytest

from kenmotsu import by_name, catalog
from kenmotsu.catalog import NamedExample


def test_catalog_names_and_order():
    names = [ex.name for ex in catalog()]
    assert names == ["euclidean3", "h3", "h5", "ne5"]


def test_by_name_rejects_unknown():
    with pytest.raises(KeyError) as err:
        by_name("nope")
    assert "euclidean3" in str(err.value)


def test_expected_flags():
    flags = {
        ex.name: (ex.expected_kenmotsu, ex.expected_einstein, ex.expected_weyl_flat)
        for ex in catalog()
    }
    assert flags == {
        "euclidean3": (False, True, True),
        "h3": (True, True, True),
        "h5": (True, True, True),
        "ne5": (True, False, False),
    }


def test_dimensions_and_contact_rank():
    dims = {ex.name: (ex.manifold.dim, ex.n) for ex in catalog()}
    assert dims == {
        "euclidean3": (3, 1),
        "h3": (3, 1),
        "h5": (5, 2),
        "ne5": (5, 2),
    }


def test_sampling_is_deterministic():
    ex = by_name("h5")
    a = ex.sample_points(10, seed=3)
    b = ex.sample_points(10, seed=3)
    assert np.array_equal(np.asarray(a), np.asarray(b))
    c = ex.sample_points(10, seed=4)
    assert not np.array_equal(np.asarray(a), np.asarray(c))


def test_sampling_streams_differ_between_examples():
    # same seed on same-dimension examples must not reuse one stream
    a = np.asarray(by_name("h5").sample_points(5, seed=0))
    b = np.asarray(by_name("ne5").sample_points(5, seed=0))
    assert not np.array_equal(a, b)


def test_samples_keep_stencil_margin():
    step = 1e-3
    for ex in catalog():
        lo = np.array([b[0] for b in ex.sample_box])
        hi = np.array([b[1] for b in ex.sample_box])
        for p in ex.sample_points(50, seed=9, step=step):
            assert ex.manifold.contains(p)
            assert np.all(p >= lo + 9 * step)
            assert np.all(p <= hi - 9 * step)


def test_sample_box_must_sit_inside_domain():
    base = by_name("h3")
    with pytest.raises(ValueError):
        NamedExample(
            name="bad",
            manifold=base.manifold,
            structure=base.structure,
            expected_kenmotsu=True,
            expected_einstein=True,
            expected_weyl_flat=True,
            sample_box=((-5.0, 5.0),) * 3,
        )


def test_ne5_uses_relaxed_fd_scale():
    assert by_name("ne5").fd_tolerance_scale == 10.0
    assert by_name("h3").fd_tolerance_scale == 1.0


def test_notes_are_informative():
    for ex in catalog():
        assert ex.notes
