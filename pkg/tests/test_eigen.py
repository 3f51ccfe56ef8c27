import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from esqpt_decoherence.eigen import (eig_tridiag, fix_gauge, full_spectrum, ground_state,
                                     tql_implicit)
from esqpt_decoherence.errors import ConvergenceError, InvalidParameterError
from esqpt_decoherence.model import PARITIES, ModelParams, ParityBlock, hamiltonian_block
from esqpt_decoherence.oracles import dense_boson_oracle

METHODS = ["mrrr", "ql"]


def make_block(diag, offdiag, parity="even"):
    diag = np.asarray(diag, float)
    return ParityBlock(parity, np.arange(len(diag)) * 2, diag, np.asarray(offdiag, float))


def check_decomposition(block, dec):
    h = block.to_dense()
    vals, vecs = dec.eigenvalues, dec.eigenvectors
    assert np.all(np.diff(vals) >= 0)
    assert len(vals) == block.dim
    scale = 1.0 + np.abs(vals).max()
    resid = np.linalg.norm(h @ vecs - vecs * vals, axis=0)
    assert resid.max() <= 1e-10 * scale
    assert np.abs(vecs.T @ vecs - np.eye(block.dim)).max() <= 1e-10


@pytest.mark.parametrize("method", METHODS)
class TestEigTridiag:
    def test_two_by_two(self, method):
        dec = eig_tridiag(make_block([-1, -1], [-1]), method)
        assert dec.eigenvalues == pytest.approx([-2, 0], abs=1e-12)
        s = 1 / np.sqrt(2)
        assert np.abs(dec.eigenvectors[:, 0]) == pytest.approx([s, s], abs=1e-12)
        assert np.abs(dec.eigenvectors[:, 1]) == pytest.approx([s, s], abs=1e-12)
        assert dec.eigenvectors[0, 1] * dec.eigenvectors[1, 1] < 0

    def test_diagonal(self, method):
        d = [3.0, -1.0, 2.0, 0.5]
        dec = eig_tridiag(make_block(d, [0, 0, 0]), method)
        assert dec.eigenvalues.tolist() == sorted(d)
        perm = np.argsort(d)
        assert np.array_equal(dec.eigenvectors, np.eye(4)[:, perm])

    def test_dim_one(self, method):
        dec = eig_tridiag(make_block([4.2], []), method)
        assert dec.eigenvalues.tolist() == [4.2]
        assert dec.eigenvectors.tolist() == [[1.0]]

    @pytest.mark.parametrize("n", [7, 30, 120])
    @pytest.mark.parametrize("alpha, lam", [(0.0, 2.0), (0.4, 1.0), (0.9, 0.0), (1.0, 0.3)])
    def test_invariants_on_model_blocks(self, method, n, alpha, lam):
        for parity in PARITIES:
            block = hamiltonian_block(ModelParams(alpha, lam, n), True, parity)
            check_decomposition(block, eig_tridiag(block, method))

    def test_gauge(self, method):
        block = hamiltonian_block(ModelParams(0.3, 0.5, 40), True, "odd")
        vecs = eig_tridiag(block, method).eigenvectors
        for col in vecs.T:
            first = col[np.abs(col) > 1e-12][0]
            assert first > 0

    def test_deterministic(self, method):
        block = hamiltonian_block(ModelParams(0.2, 1.3, 80), True, "even")
        a, b = eig_tridiag(block, method), eig_tridiag(block, method)
        assert np.array_equal(a.eigenvalues, b.eigenvalues)
        assert np.array_equal(a.eigenvectors, b.eigenvectors)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=2, max_size=25), st.data())
def test_random_tridiagonal_engines_agree(diag, data):
    off = data.draw(st.lists(st.floats(-5, 5), min_size=len(diag) - 1, max_size=len(diag) - 1))
    block = make_block(diag, off)
    ql, mr = eig_tridiag(block, "ql"), eig_tridiag(block, "mrrr")
    check_decomposition(block, ql)
    check_decomposition(block, mr)
    assert np.abs(ql.eigenvalues - mr.eigenvalues).max() <= 1e-10 * (1 + np.abs(mr.eigenvalues).max())


def test_ql_and_mrrr_vectors_agree_nondegenerate():
    block = hamiltonian_block(ModelParams(0.9, 0.4, 200), True, "even")
    a, b = eig_tridiag(block, "ql"), eig_tridiag(block, "mrrr")
    assert np.abs(a.eigenvalues - b.eigenvalues).max() < 1e-10 * (1 + np.abs(a.eigenvalues).max())
    assert np.abs(a.eigenvectors - b.eigenvectors).max() < 1e-8


def test_convergence_budget_names_index():
    with pytest.raises(ConvergenceError) as err:
        tql_implicit([1.0, 2.0, 3.0], [1.0, 1.0], max_sweeps=0)
    assert err.value.index == 0


def test_unknown_method():
    with pytest.raises(InvalidParameterError):
        eig_tridiag(make_block([1, 2], [1]), "jacobi")


def test_fix_gauge_skips_negligible_leading_entries():
    v = np.array([[1e-15, 0.0], [-0.6, 0.0], [0.8, -1.0]])
    g = fix_gauge(v)
    assert g[1, 0] == 0.6 and g[2, 1] == 1.0


class TestGroundState:
    def test_alpha_one(self):
        g = ground_state(ModelParams(1.0, 0.0, 50))
        assert g.energy == pytest.approx(0, abs=1e-12)
        assert g.parity == "even"
        assert g.vector[0] == pytest.approx(1) and np.abs(g.vector[1:]).max() < 1e-12

    def test_tie_break_even(self):
        g = ground_state(ModelParams(0.0, 0.0, 2))
        assert g.energy == pytest.approx(-2, abs=1e-12)
        assert g.parity == "even"

    def test_large_n_matches_meanfield(self):
        g = ground_state(ModelParams(0.0, 0.0, 1000))
        assert abs(g.energy / 1000 - (-1.0)) <= 5e-3

    def test_coupling_ignored(self):
        a = ground_state(ModelParams(0.3, 0.0, 60))
        b = ground_state(ModelParams(0.3, 2.5, 60))
        assert a.energy == b.energy

    @pytest.mark.parametrize("alpha", [0.0, 0.4, 0.8, 0.95])
    @pytest.mark.parametrize("n", [5, 40, 301])
    def test_norm_and_minimum(self, alpha, n):
        p = ModelParams(alpha, 0.0, n)
        g = ground_state(p)
        assert np.linalg.norm(g.vector) == pytest.approx(1, abs=1e-12)
        spec = full_spectrum(p)
        lowest = min(spec[par].eigenvalues[0] for par in PARITIES)
        assert g.energy == pytest.approx(lowest, abs=1e-10 * (1 + abs(lowest)))
        # variational bound: every basis state's Rayleigh quotient lies above E0
        diags = np.concatenate([hamiltonian_block(p, False, par).diag for par in PARITIES])
        assert g.energy <= diags.min() + 1e-12

    def test_ql_engine(self):
        p = ModelParams(0.4, 0.0, 30)
        assert ground_state(p, "ql").energy == pytest.approx(ground_state(p).energy, abs=1e-10)


class TestFullSpectrum:
    def test_alpha_one(self):
        spec = full_spectrum(ModelParams(1.0, 0.0, 4))
        assert spec["even"].eigenvalues == pytest.approx([0, 2, 4], abs=1e-12)
        assert spec["odd"].eigenvalues == pytest.approx([1, 3], abs=1e-12)

    def test_alpha_zero(self):
        spec = full_spectrum(ModelParams(0.0, 0.0, 2))
        assert spec["even"].eigenvalues == pytest.approx([-2, 0], abs=1e-12)
        assert spec["odd"].eigenvalues == pytest.approx([-2], abs=1e-12)

    @pytest.mark.parametrize("n", range(1, 11))
    @pytest.mark.parametrize("alpha", [0.0, 0.3, 0.6, 0.8, 1.0])
    def test_completeness_against_dense(self, n, alpha):
        p = ModelParams(alpha, 1.0, n)
        for coupled in (False, True):
            spec = full_spectrum(p, coupled)
            vals = np.sort(np.concatenate([spec[par].eigenvalues for par in PARITIES]))
            assert len(vals) == n + 1
            assert np.abs(vals - dense_boson_oracle(p, coupled).eigenvalues).max() <= 1e-10

    def test_level_clustering_at_zero(self):
        # broken phase, N = 50: closest pair of even levels sits near E = 0
        ev = full_spectrum(ModelParams(0.5, 0.0, 50))["even"].eigenvalues
        k = np.argmin(np.diff(ev))
        span = ev[-1] - ev[0]
        assert abs(0.5 * (ev[k] + ev[k + 1])) <= 0.1 * span
