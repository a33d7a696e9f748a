import random

import numpy as np
import pytest

from dirackit.dirac import run_algorithm
from dirackit.errors import UnsupportedError
from dirackit.gauge import closure_table
from dirackit.model import parse_model
from dirackit.quantize import (
    anomaly_residual,
    build_rep,
    commutator_check,
    hbar_sweep,
    operator_norm,
    physical_states,
    quantize_poly,
    smaller_sites,
)
from dirackit.symbolic import VarTable, complete_or_empty

from strategies import random_poly

T1 = VarTable(1)
q, p = T1.q(1), T1.p(1)


# --- representation -------------------------------------------------------

def test_small_momentum_spectrum():
    rep = build_rep(1, 3, 0.5)
    assert np.allclose(np.linalg.eigvalsh(rep.p1d), [-0.5, 0.0, 0.5], atol=1e-12)


def test_momentum_trace_vanishes():
    assert abs(np.trace(build_rep(1, 5, 1.0).p1d)) < 1e-12


@pytest.mark.parametrize("d, N", [(1, 5), (1, 31), (2, 5), (2, 15)])
def test_elementary_operators_hermitian(d, N):
    rep = build_rep(d, N, 1.0)
    for a in range(1, d + 1):
        for op in (rep.Q(a), rep.P(a)):
            assert op.entries.shape == (N ** d, N ** d)
            assert op.is_hermitian()


@pytest.mark.parametrize("N", [4, 1, 0, -3])
def test_bad_site_counts(N):
    with pytest.raises(ValueError, match="odd"):
        build_rep(1, N, 1.0)


def test_non_positive_hbar():
    with pytest.raises(ValueError):
        build_rep(1, 5, 0.0)


def test_centered_lattice():
    rep = build_rep(1, 7, 1.0)
    assert rep.positions[3] == 0.0
    assert np.allclose(rep.positions, -rep.positions[::-1])


# --- quantization map -----------------------------------------------------

def test_unit_maps_to_identity():
    rep = build_rep(1, 5, 1.0)
    assert np.array_equal(quantize_poly(T1.const(1), rep).entries, np.eye(5))


def test_position_maps_to_q():
    rep = build_rep(1, 5, 1.0)
    assert np.array_equal(quantize_poly(q, rep).entries, rep.q1d)


def test_mixed_monomial_symmetrized():
    rep = build_rep(1, 7, 0.3)
    Q, P = rep.q1d, rep.p1d
    assert np.allclose(quantize_poly(q * p, rep).entries, (Q @ P + P @ Q) / 2)
    assert np.allclose(quantize_poly(q * q * p, rep).entries, (Q @ Q @ P + Q @ P @ Q + P @ Q @ Q) / 3)
    assert quantize_poly(q * p, rep).is_hermitian()


def test_two_dimensional_factors():
    t = VarTable(2)
    rep = build_rep(2, 5, 1.0)
    op = quantize_poly(t.q(1) * t.p(2), rep).entries
    assert np.allclose(op, rep.Q(1).entries @ rep.P(2).entries)


def test_random_real_polynomials_hermitian():
    rng = random.Random(4)
    t = VarTable(2)
    rep = build_rep(2, 5, 0.7)
    checked = 0
    while checked < 15:
        f = random_poly(rng, t)
        if f.degree_in("p") > 2:
            continue
        assert quantize_poly(f, rep).is_hermitian()
        checked += 1


def test_momentum_degree_cap():
    with pytest.raises(UnsupportedError):
        quantize_poly(p ** 3, build_rep(1, 5, 1.0))


def test_velocities_rejected():
    with pytest.raises(UnsupportedError):
        quantize_poly(T1.v(1), build_rep(1, 5, 1.0))


# --- correspondence -------------------------------------------------------

def test_commuting_positions():
    t = VarTable(2)
    assert commutator_check(t.q(1), t.q(2), build_rep(2, 5, 1.0)) == 0.0


def test_constant_pairs_vanish():
    rep = build_rep(1, 31, 1.0)
    for g in (q, p, q * p):
        assert commutator_check(T1.const(3), g, rep) == 0.0


def test_commuting_momenta():
    t = VarTable(2)
    assert commutator_check(t.p(1), t.p(2), build_rep(2, 7, 1.0)) < 1e-10


def test_canonical_pair_bounded_by_trace():
    # tr [Q, P] = 0 forces ||[Q, P] - i hbar I|| >= hbar on any finite space
    for N in (5, 15, 31):
        assert commutator_check(q, p, build_rep(1, N, 1.0)) >= 1.0 - 1e-12


def test_sweep_reports_residuals_and_slope():
    res, slope = hbar_sweep(q * q, p * p, 15)
    assert len(res) == 3 and all(r > 0 for r in res)
    assert np.isfinite(slope)


def test_operator_norm_matches_numpy():
    rng = np.random.default_rng(0)
    M = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    assert np.isclose(operator_norm(M), np.linalg.norm(M, 2))
    H = M + M.conj().T
    assert np.isclose(operator_norm(H), np.linalg.norm(H, 2))
    assert operator_norm(np.zeros((3, 3))) == 0.0


# --- physical states ------------------------------------------------------

@pytest.mark.parametrize("N", [5, 15, 31])
def test_momentum_kernel_is_constant_mode(N):
    rep = build_rep(1, N, 1.0)
    ps = physical_states([quantize_poly(p, rep)])
    assert ps.dimension == 1
    v = ps.basis[:, 0]
    assert np.allclose(np.abs(v), 1 / np.sqrt(N))


def test_position_kernel_is_origin():
    rep = build_rep(1, 9, 1.0)
    ps = physical_states([quantize_poly(q, rep)])
    assert ps.dimension == 1
    assert np.isclose(abs(ps.basis[4, 0]), 1.0)


def test_no_constraints_full_space():
    rep = build_rep(2, 5, 1.0)
    assert physical_states([], rep=rep).dimension == 25


def test_empty_kernel_is_a_finding():
    rep = build_rep(1, 5, 1.0)
    assert physical_states([quantize_poly(T1.const(1), rep)]).dimension == 0


def test_kernel_is_orthonormal_and_monotone():
    t = VarTable(2)
    rep = build_rep(2, 7, 1.0)
    ops = [quantize_poly(e, rep) for e in (t.p(1), t.p(2), t.q(1))]
    dims = [physical_states(ops[:k], rep=rep).dimension for k in range(4)]
    assert dims == sorted(dims, reverse=True)
    ps = physical_states(ops[:2])
    assert np.allclose(ps.basis.conj().T @ ps.basis, np.eye(ps.dimension))


# --- anomalies ------------------------------------------------------------

def test_abelian_pair_not_anomalous():
    a = run_algorithm(parse_model("dim 2; L = 1/2*(v1 - q2)^2"))
    table = anomaly_residual(a, build_rep(2, 15, 1.0))
    assert len(table) == 1
    assert table[0].norm <= 1e-10 and table[0].anomalous is False


def test_single_generator_empty_table():
    a = run_algorithm(parse_model("dim 3; L = v1*q2 - 1/2*q1^2"))
    assert anomaly_residual(a, build_rep(3, 3, 1.0)) == []


def test_lattice_defect_is_flagged():
    # {q p, p} = p closes classically, but [Q, P] != i hbar on the lattice
    gens = [q * p, p]
    table = closure_table(gens, complete_or_empty(T1, gens))
    (entry,) = anomaly_residual(None, build_rep(1, 15, 1.0), table)
    assert entry.anomalous is True


def test_unquantizable_structure_function_reported():
    gens = [p ** 3, p]
    table = closure_table(gens, complete_or_empty(T1, gens))
    (entry,) = anomaly_residual(None, build_rep(1, 5, 1.0), table)
    assert entry.anomalous is None and entry.note.startswith("unsupported")


def test_smaller_sites_odd():
    assert smaller_sites(31) == 15 and smaller_sites(5) == 3 and smaller_sites(3) == 3
