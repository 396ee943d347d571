"""Log-domain scalars, PD tests, real and complex log-determinants, CSV IO."""

import cmath
import math

import numpy as np
import pytest

from gwishart.symmat import (
    LogScalar,
    NotPositiveDefiniteError,
    PerturbationEdge,
    complex_logdet,
    is_positive_definite,
    load_matrix_csv,
    load_table_csv,
    logdet,
    principal_submatrix,
    save_matrix_csv,
    scatter_matrix,
)


def random_pd(rng, n, jitter=0.5):
    b = rng.standard_normal((n, n))
    return b @ b.T + jitter * n * np.eye(n)


def test_logscalar_roundtrip():
    # round-trip error grows with |log x|: one ulp in the stored log gives
    # relative error |log x| * eps after exponentiating
    for x in (1.0, 2.5, 1e-300, 1e300, -3.0, -1e-12):
        ls = LogScalar.from_real(x)
        assert ls.is_real
        assert ls.real_value == pytest.approx(x, rel=1e-13)
    with pytest.raises(ValueError):
        LogScalar.from_real(0.0)
    z = complex(-1.2, 0.7)
    ls = LogScalar.from_complex(z)
    assert ls.complex_value == pytest.approx(z, rel=1e-14)
    assert not ls.is_real
    with pytest.raises(ValueError):
        ls.real_value


def test_logscalar_arithmetic():
    rng = np.random.default_rng(7)
    for _ in range(200):
        za, zb = (complex(*rng.normal(size=2)) for _ in range(2))
        if abs(za) < 1e-6 or abs(zb) < 1e-6:
            continue
        a, b = LogScalar.from_complex(za), LogScalar.from_complex(zb)
        assert (a * b).complex_value == pytest.approx(za * zb, rel=1e-12)
        assert (a / b).complex_value == pytest.approx(za / zb, rel=1e-12)
        assert a.conjugate().complex_value == pytest.approx(za.conjugate(), rel=1e-12)
        assert -math.pi < (a * b).phase <= math.pi


def test_logscalar_power_and_canonical():
    ls = LogScalar.from_real(4.0).power(0.5)
    assert ls.real_value == pytest.approx(2.0)
    # a phase outside the principal interval survives until canonicalised
    wide = LogScalar(0.0, 3.5 * math.pi)
    assert wide.canonical().phase == pytest.approx(-0.5 * math.pi)
    assert cmath.exp(complex(0, 3.5 * math.pi)) == pytest.approx(
        wide.canonical().complex_value, abs=1e-12
    )


def test_is_positive_definite():
    rng = np.random.default_rng(11)
    for n in range(1, 7):
        for _ in range(20):
            a = random_pd(rng, n)
            assert is_positive_definite(a)
            # flip the smallest eigenvalue negative
            w, v = np.linalg.eigh(a)
            w[0] = -abs(w[0])
            assert not is_positive_definite(v @ np.diag(w) @ v.T)
    assert not is_positive_definite(np.zeros((2, 2)))
    assert not is_positive_definite(-np.eye(3))
    with pytest.raises(ValueError):
        is_positive_definite(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_logdet_against_slogdet():
    rng = np.random.default_rng(13)
    for n in range(1, 8):
        for _ in range(20):
            a = random_pd(rng, n)
            sign, ref = np.linalg.slogdet(a)
            assert sign == 1.0
            assert logdet(a) == pytest.approx(ref, rel=1e-10, abs=1e-10)
    assert logdet(np.eye(4)) == 0.0
    with pytest.raises(NotPositiveDefiniteError):
        logdet(np.diag([1.0, -1.0]))


def test_complex_logdet_value():
    rng = np.random.default_rng(17)
    for n in range(2, 6):
        for _ in range(20):
            d = random_pd(rng, n)
            mu, nu = sorted(rng.choice(np.arange(1, n + 1), size=2, replace=False))
            t = float(rng.normal())
            a = d.astype(complex)
            a[mu - 1, nu - 1] += 1j * t
            a[nu - 1, mu - 1] += 1j * t
            got = complex_logdet(d, PerturbationEdge((int(mu), int(nu)), t))
            ref = np.linalg.det(a)
            assert got.log_magnitude == pytest.approx(math.log(abs(ref)), rel=1e-10)
            # value agrees once the unwrapped phase is reduced
            assert got.canonical().complex_value == pytest.approx(ref, rel=1e-9)


def test_complex_logdet_2x2_closed_form():
    # det([[a, b + it], [b + it, c]]) = ac - b^2 + t^2 - 2ibt
    a, b, c, t = 3.0, 0.7, 2.0, 1.3
    d = np.array([[a, b], [b, c]])
    got = complex_logdet(d, PerturbationEdge((1, 2), t)).complex_value
    assert got == pytest.approx(complex(a * c - b * b + t * t, -2 * b * t), rel=1e-14)


def test_complex_logdet_branch_continuity():
    # the phase must vary continuously in t, not jump by 2 pi
    rng = np.random.default_rng(19)
    d = random_pd(rng, 5)
    ts = np.linspace(-40.0, 40.0, 801)
    phases = [complex_logdet(d, PerturbationEdge((2, 4), float(t))).phase for t in ts]
    diffs = np.abs(np.diff(phases))
    assert float(diffs.max()) < 0.5
    assert complex_logdet(d, PerturbationEdge((2, 4), 0.0)).phase == 0.0
    # conjugate symmetry of the branch
    plus = complex_logdet(d, PerturbationEdge((2, 4), 7.5))
    minus = complex_logdet(d, PerturbationEdge((2, 4), -7.5))
    assert minus.phase == pytest.approx(-plus.phase, rel=1e-12)
    assert minus.log_magnitude == pytest.approx(plus.log_magnitude, rel=1e-12)


def test_complex_logdet_identity_pattern():
    # for d = I the determinant is 1 + t^2 exactly, phase 0
    got = complex_logdet(np.eye(4), PerturbationEdge((1, 3), 2.0))
    assert got.log_magnitude == pytest.approx(math.log(5.0), rel=1e-14)
    assert got.phase == pytest.approx(0.0, abs=1e-14)


def test_perturbation_edge_normalisation():
    p = PerturbationEdge((3, 1), 0.5)
    assert p.edge == (1, 3)
    with pytest.raises(ValueError):
        PerturbationEdge((2, 2), 0.5)
    with pytest.raises(ValueError):
        complex_logdet(np.eye(3), PerturbationEdge((1, 4), 1.0))
    with pytest.raises(NotPositiveDefiniteError):
        complex_logdet(np.diag([1.0, -1.0]), PerturbationEdge((1, 2), 1.0))


def test_principal_submatrix():
    a = np.arange(16.0).reshape(4, 4)
    sub = principal_submatrix(a, [3, 1])
    assert sub.tolist() == [[0.0, 2.0], [8.0, 10.0]]
    assert principal_submatrix(a, []).shape == (0, 0)
    with pytest.raises(ValueError):
        principal_submatrix(a, [0, 2])
    with pytest.raises(ValueError):
        principal_submatrix(a, [5])


def test_scatter_matrix():
    rng = np.random.default_rng(23)
    x = rng.normal(size=(50, 4))
    u = scatter_matrix(x, centered=False)
    assert np.allclose(u, x.T @ x)
    uc = scatter_matrix(x, centered=True)
    xc = x - x.mean(axis=0)
    assert np.allclose(uc, xc.T @ xc)
    # centering only ever shrinks the quadratic form along the mean direction
    assert np.all(np.linalg.eigvalsh(u - uc) > -1e-9)
    with pytest.raises(ValueError):
        scatter_matrix(np.empty((0, 3)), centered=True)


def test_matrix_csv_roundtrip(tmp_path):
    rng = np.random.default_rng(29)
    a = random_pd(rng, 5)
    path = tmp_path / "m.csv"
    save_matrix_csv(path, a)
    back = load_matrix_csv(path)
    assert np.array_equal(a, back)

    # mild asymmetry is averaged away, gross asymmetry rejected
    mild = tmp_path / "mild.csv"
    mild.write_text("# comment\n1.0,0.5000000001\n0.5,1.0\n")
    b = load_matrix_csv(mild)
    assert b[0, 1] == b[1, 0] == pytest.approx(0.50000000005)
    bad = tmp_path / "bad.csv"
    bad.write_text("1.0,0.6\n0.5,1.0\n")
    with pytest.raises(ValueError):
        load_matrix_csv(bad)
    ragged = tmp_path / "ragged.csv"
    ragged.write_text("1.0,0.5\n")
    with pytest.raises(ValueError):
        load_matrix_csv(ragged)
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(ValueError):
        load_matrix_csv(empty)


def test_table_csv(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("A,B\n1.0,2.0\n3.0,4.0\n")
    data = load_table_csv(path, expected_columns=["A", "B"])
    assert data.tolist() == [[1.0, 2.0], [3.0, 4.0]]
    with pytest.raises(ValueError):
        load_table_csv(path, expected_columns=["A", "C"])
