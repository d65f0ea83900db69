import numpy as np
import pytest

from projprod import decompositions as dec
from projprod.data_io import SyntheticSpec, gen_spectral_cube
from projprod.metrics import relative_error
from projprod.sweep import gnuplot_script, sweep_tsvdq, thread_count
from projprod.transforms import make_transform

KINDS = ["identity", "random", "dct", "data"]


@pytest.fixture(scope="module")
def cube():
    return gen_spectral_cube(SyntheticSpec("spectral-cube", (10, 9, 12), seed=5, signatures=3))


def test_rows_match_explicit_reconstruction(cube):
    rows = sweep_tsvdq(cube, KINDS, [1, 3, 9], [1, 4, 12], seed=2)
    assert len(rows) == 4 * 3 * 3
    for r in rows:
        T = make_transform(r.transform, 12, r.p, A=cube, seed=2)
        direct = relative_error(cube, dec.tsvdq_reconstruct(dec.tsvdq(cube, T, r.k)))
        assert r.relative_error == pytest.approx(direct, rel=1e-9, abs=1e-12)


def test_monotone_and_full_row(cube):
    ks, ps = list(range(1, 10)), list(range(1, 13))
    rows = sweep_tsvdq(cube, KINDS, ks, ps)
    table = {(r.transform, r.p, r.k): r.relative_error for r in rows}
    for kind in KINDS:
        for p in ps:
            errs = [table[kind, p, k] for k in ks]
            assert all(b <= a + 1e-12 for a, b in zip(errs, errs[1:]))
    for k in ks:
        errs = [table["data", p, k] for p in ps]
        assert all(b <= a + 1e-12 for a, b in zip(errs, errs[1:]))
    for kind in KINDS:
        assert table[kind, 12, 9] <= 1e-9


def test_thread_count_does_not_change_rows(cube, monkeypatch):
    one = sweep_tsvdq(cube, KINDS, [1, 2], [2, 5], threads=1)
    monkeypatch.setenv("PROJPROD_THREADS", "4")
    assert thread_count() == 4
    many = sweep_tsvdq(cube, KINDS, [1, 2], [2, 5])
    assert [r.csv_row() for r in one] == [r.csv_row() for r in many]
    monkeypatch.setenv("PROJPROD_THREADS", "oops")
    assert thread_count() == 1


def test_grid_validation(cube):
    with pytest.raises(ValueError):
        sweep_tsvdq(cube, KINDS, [], [1])
    with pytest.raises(ValueError):
        sweep_tsvdq(cube, KINDS, [10], [1])
    with pytest.raises(ValueError):
        sweep_tsvdq(cube, KINDS, [1], [13])
    with pytest.raises(ValueError):
        sweep_tsvdq(np.zeros((2, 2, 2)), KINDS, [1], [1])


def test_gnuplot_script_references_csv():
    text = gnuplot_script("out.csv", ["data", "dct"], [1, 5])
    assert "'out.csv'" in text and "set title 'dct'" in text and '"1 5"' in text
