import numpy as np
import pytest

from ofb.bounds import lower_bound, upper_bound_X0, upper_bound_X1
from ofb.geometry import ChannelGeometry, DomainError
from ofb.minimizer import (
    GridField,
    free_mask,
    grid_shape,
    laplacian,
    minimize,
    prolong,
    richardson_margin,
    symmetry_breaking_scan,
    worker_count,
)

G4 = ChannelGeometry(4, 2)


def test_grid_validation():
    assert grid_shape(G4, 0.05) == (160, 80)
    with pytest.raises(DomainError):
        grid_shape(G4, 0.2)  # does not resolve the obstacle
    with pytest.raises(DomainError):
        grid_shape(G4, 0.07)  # does not divide 2R
    with pytest.raises(DomainError):
        minimize(G4, 0.05, tol=0)
    with pytest.raises(DomainError):
        minimize(G4, 0.05, init="spiral")


def test_mask_symmetry_and_laplacian():
    m = free_mask(G4, 0.05)
    assert np.array_equal(m, m[::-1]) and np.array_equal(m, m[:, ::-1])
    assert not m[0].any() and not m[:, 0].any()
    A = laplacian(m)
    assert (A != A.T).nnz == 0
    assert np.all(A.diagonal() == 4)
    # discrete Dirichlet energy is the sum of squared differences over edges
    rng = np.random.default_rng(1)
    v = np.zeros(m.shape)
    v[m] = rng.random(int(m.sum()))
    edges = np.sum(np.diff(v, axis=0) ** 2) + np.sum(np.diff(v, axis=1) ** 2)
    assert v[m] @ (A @ v[m]) == pytest.approx(edges, rel=1e-12)


def test_monotone_and_residual():
    r = minimize(ChannelGeometry(6, 2), 0.05, init="random", seed=3, tol=1e-9)
    assert r.converged and r.S_estimate > 0
    assert np.max(np.diff(r.history)) <= 1e-12
    assert r.residual <= 1e-8
    assert 0 <= r.asymmetry <= 2


def test_even_constraint_exact():
    r = minimize(ChannelGeometry(6, 2), 0.05, init="random", seed=0, even_constrained=True)
    assert r.asymmetry == 0.0
    v = r.field.values
    assert np.array_equal(v, v[::-1])


def test_cg_matches_lu():
    a = minimize(G4, 0.0625, init="offset_bump", tol=1e-10)
    b = minimize(G4, 0.0625, init="offset_bump", tol=1e-10, solver="cg")
    assert a.S_estimate == pytest.approx(b.S_estimate, abs=1e-9)


def test_reflection_equivariance():
    g = ChannelGeometry(5, 2)
    rng = np.random.default_rng(5)
    start = rng.random(free_mask(g, 0.05).shape)
    r1 = minimize(g, 0.05, initial=start, tol=1e-10)
    r2 = minimize(g, 0.05, initial=start[::-1].copy(), tol=1e-10)
    assert abs(r1.S_estimate - r2.S_estimate) <= 1e-10
    assert np.max(np.abs(r1.field.values[::-1] - r2.field.values)) <= 1e-10


def test_sandwich_with_margin():
    for R in (4.0, 8.0):
        g = ChannelGeometry(R, 2)
        r = minimize(g, 0.05, init="offset_bump")
        margin, _ = richardson_margin(r)
        up = min(u for u in (upper_bound_X0(2), upper_bound_X1(g)) if u is not None)
        assert lower_bound(g) - margin <= r.S_estimate <= up + margin


def test_rectangle_without_obstacle_respects_lower_bound():
    from ofb.bounds import rectangle_lower_bound

    g = ChannelGeometry(4, 2)
    r = minimize(g, 0.1, init="even_bump", obstacle=False)
    fine = minimize(g, 0.05, init="even_bump", obstacle=False)
    margin = 2 * abs(r.S_estimate - fine.S_estimate)
    assert r.S_estimate >= rectangle_lower_bound(4, 2) - margin


def test_small_R_free_minimiser_is_one_sided():
    # the obstacle does not block concentration at h = 2: both sides stay
    # weakly coupled pockets and the free minimiser picks one of them
    g = ChannelGeometry(2.5, 2)
    e = minimize(g, 0.05, init="even_bump", even_constrained=True)
    f = minimize(g, 0.05, init="offset_bump")
    assert e.S_estimate - f.S_estimate > 1.0
    left, right = f.field.side_masses()
    assert right > 10 * left


def test_prolong_shape_and_mask():
    r = minimize(G4, 0.1, init="offset_bump", tol=1e-6)
    fine = prolong(r.field)
    m = free_mask(G4, 0.05)
    assert fine.shape == m.shape
    assert np.all(fine[~m] == 0)


def test_scan_small():
    s = symmetry_breaking_scan(2, [3, 5], step=0.1, tol=1e-7, seeds=(0,), margins="last")
    assert [r.R for r in s.rows] == [3.0, 5.0]
    assert np.isnan(s.rows[0].margin) and s.rows[1].margin >= 0
    assert s.rows[1].S_free <= s.rows[0].S_free
    assert s.R0 == 5.0
    assert len(s.table()[0]) == 10
    with pytest.raises(DomainError):
        symmetry_breaking_scan(2, [5, 3], step=0.1)


def test_scan_parallel_matches_serial():
    kw = dict(step=0.1, tol=1e-7, seeds=(0,), margins="none")
    a = symmetry_breaking_scan(2, [3, 4], workers=1, **kw)
    b = symmetry_breaking_scan(2, [3, 4], workers=2, **kw)
    assert repr(a.table()) == repr(b.table())


def test_worker_count_env(monkeypatch):
    monkeypatch.delenv("OFB_THREADS", raising=False)
    assert worker_count() == 1
    monkeypatch.setenv("OFB_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("OFB_THREADS", "zero")
    with pytest.raises(DomainError):
        worker_count()


def test_gridfield_rows():
    r = minimize(G4, 0.1, init="offset_bump", tol=1e-6)
    rows = r.field.rows()
    assert rows.shape == (r.field.values.size, 3)
    assert isinstance(r.field, GridField)
    assert r.field.l4() == pytest.approx(1.0)
