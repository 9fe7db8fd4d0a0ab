import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import unitary_group

from oracles import (
    brute_i3,
    eig_entropy,
    hs_density,
    logm_entropy,
    loop_partial_trace,
    qubit_relative_entropy_bits,
    schmidt_reduced,
)
from triptych.errors import InconsistencyError, InvalidDensityError, ValidationError
from triptych.infotheory import (
    DensityMatrix,
    PureState,
    entropy_of,
    fidelity,
    max_relative_entropy,
    mutual_information,
    partial_trace,
    relative_entropy,
    tripartite_information,
    von_neumann_entropy,
)

THREE = (("P1", 2), ("P2", 2), ("P3", 2))


def random_pure(rng, n):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def test_density_validation():
    with pytest.raises(ValidationError):
        DensityMatrix((("A", 2),), np.eye(3) / 3)
    with pytest.raises(InvalidDensityError):
        DensityMatrix((("A", 2),), np.eye(2))
    with pytest.raises(InvalidDensityError):
        DensityMatrix((("A", 2),), np.array([[0.5, 1j], [0, 0.5]]))
    with pytest.raises(InvalidDensityError):
        DensityMatrix.from_matrix(np.diag([1.5, -0.5]))
    with pytest.raises(ValidationError):
        DensityMatrix((("A", 1), ("A", 1)), np.eye(1))


def test_tiny_negative_eigenvalue_is_tolerated():
    rho = DensityMatrix.from_matrix(np.diag([1 + 1e-10, -1e-10]))
    assert von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-9)


def test_entropy_fixed_values():
    assert von_neumann_entropy(DensityMatrix.maximally_mixed(4)) == pytest.approx(2.0, abs=1e-14)
    assert von_neumann_entropy(DensityMatrix.maximally_mixed(3), "nats") == pytest.approx(math.log(3), abs=1e-14)
    assert von_neumann_entropy(DensityMatrix.pure([1, 1j])) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValidationError):
        von_neumann_entropy(DensityMatrix.maximally_mixed(2), "dits")


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_entropy_matches_logm(rng, n):
    rho = hs_density(rng, n)
    assert von_neumann_entropy(DensityMatrix.from_matrix(rho)) == pytest.approx(logm_entropy(rho), abs=1e-10)


@given(st.integers(0, 2**31), st.integers(2, 6))
def test_entropy_unitary_invariance(seed, n):
    rng = np.random.default_rng(seed)
    rho = hs_density(rng, n)
    u = unitary_group.rvs(n, random_state=seed % (2**31))
    s1 = von_neumann_entropy(DensityMatrix.from_matrix(rho))
    s2 = von_neumann_entropy(DensityMatrix.from_matrix(u @ rho @ u.conj().T))
    assert s1 == pytest.approx(s2, abs=1e-10)
    assert 0 <= s1 <= math.log2(n) + 1e-12


@pytest.mark.parametrize("keep", [["P1"], ["P3"], ["P1", "P3"], ["P2", "P3"], ["P1", "P2", "P3"]])
def test_partial_trace_matches_loops(rng, keep):
    dims = (2, 3, 2)
    rho = hs_density(rng, 12)
    state = DensityMatrix((("P1", 2), ("P2", 3), ("P3", 2)), rho)
    idx = [["P1", "P2", "P3"].index(k) for k in keep]
    np.testing.assert_allclose(partial_trace(state, keep).matrix, loop_partial_trace(rho, dims, idx), atol=1e-13)


def test_partial_trace_keeps_parent_order(rng):
    state = DensityMatrix(THREE, hs_density(rng, 8))
    assert partial_trace(state, ["P3", "P1"]).labels == ("P1", "P3")
    with pytest.raises(ValidationError):
        partial_trace(state, ["P4"])
    with pytest.raises(ValidationError):
        partial_trace(state, [])


def test_pure_partial_trace_agrees_with_mixed(rng):
    psi = random_pure(rng, 12)
    parties = (("A", 3), ("B", 4))
    pure = PureState(parties, psi)
    for keep in ["A", "B"]:
        np.testing.assert_allclose(
            partial_trace(pure, [keep]).matrix, partial_trace(pure.density(), [keep]).matrix, atol=1e-13
        )


@pytest.mark.parametrize("da,db", [(2, 2), (2, 5), (4, 3)])
def test_schmidt_oracle(rng, da, db):
    psi = random_pure(rng, da * db)
    state = PureState((("A", da), ("B", db)), psi)
    ra, rb = schmidt_reduced(psi, da, db)
    np.testing.assert_allclose(partial_trace(state, ["A"]).matrix, ra, atol=1e-12)
    np.testing.assert_allclose(partial_trace(state, ["B"]).matrix, rb, atol=1e-12)
    sa, sb = entropy_of(state, "A"), entropy_of(state, "B")
    assert sa == pytest.approx(sb, abs=1e-10)
    assert sa == pytest.approx(eig_entropy(ra), abs=1e-10)


def test_pure_state_norm_check():
    with pytest.raises(ValidationError):
        PureState((("A", 2),), [1.0, 1.0])


def test_mutual_information_bell_pair():
    bell = PureState((("A", 2), ("B", 2)), np.array([1, 0, 0, 1]) / math.sqrt(2))
    assert mutual_information(bell, "A", "B") == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(ValidationError):
        mutual_information(bell, "A", ["A", "B"])


def test_i3_pure_ghz_classical_ghz_and_product():
    ghz = np.zeros(8)
    ghz[0] = ghz[7] = 1 / math.sqrt(2)
    assert tripartite_information(PureState(THREE, ghz)).value == pytest.approx(0.0, abs=1e-12)
    classical = DensityMatrix(THREE, np.diag(ghz**2))
    assert tripartite_information(classical).value == pytest.approx(1.0, abs=1e-12)
    prod = np.zeros(8)
    prod[0] = 1
    assert tripartite_information(PureState(THREE, prod)).value == pytest.approx(0.0, abs=1e-12)


def test_i3_matches_brute_force(rng):
    for _ in range(5):
        rho = hs_density(rng, 8)
        got = tripartite_information(DensityMatrix(THREE, rho)).value
        assert got == pytest.approx(brute_i3(rho, (2, 2, 2)), abs=1e-9)


@given(st.integers(0, 2**31), st.permutations([0, 1, 2]))
def test_i3_symmetric_under_party_relabelling(seed, perm):
    rng = np.random.default_rng(seed)
    rho = DensityMatrix(THREE, hs_density(rng, 8))
    names = ("P1", "P2", "P3")
    a = tripartite_information(rho).value
    b = tripartite_information(rho, parties=tuple(names[p] for p in perm)).value
    assert a == pytest.approx(b, abs=1e-10)


@given(st.integers(0, 2**31))
def test_i3_two_forms_agree_on_pure_four_party_states(seed):
    rng = np.random.default_rng(seed)
    parties = (("R", 2), ("P1", 2), ("P2", 2), ("P3", 2))
    info = tripartite_information(PureState(parties, random_pure(rng, 16)))
    assert info.via_reference == pytest.approx(info.value, abs=1e-8)
    assert info.reference_mi is not None and len(info.reference_mi) == 3


def test_i3_nats_scale():
    classical = DensityMatrix(THREE, np.diag([0.5, 0, 0, 0, 0, 0, 0, 0.5]))
    assert tripartite_information(classical, "nats").value == pytest.approx(math.log(2), abs=1e-12)


def test_inconsistency_error_is_exported():
    assert issubclass(InconsistencyError, Exception)


def test_relative_entropy_qubit_closed_form(rng):
    for _ in range(10):
        r, s = hs_density(rng, 2), hs_density(rng, 2)
        assert relative_entropy(r, s) == pytest.approx(qubit_relative_entropy_bits(r, s), abs=1e-10)


def test_relative_entropy_support_violation():
    assert relative_entropy(np.eye(2) / 2, np.diag([1.0, 0.0])) == math.inf
    assert max_relative_entropy(np.eye(2) / 2, np.diag([1.0, 0.0])) == math.inf
    assert relative_entropy(np.diag([1.0, 0.0]), np.eye(2) / 2) == pytest.approx(1.0, abs=1e-12)


@given(st.integers(0, 2**31), st.integers(2, 5))
def test_relative_entropy_below_max_relative_entropy(seed, n):
    rng = np.random.default_rng(seed)
    r, s = hs_density(rng, n), hs_density(rng, n)
    d = relative_entropy(r, s)
    dmax = max_relative_entropy(r, s)
    assert -1e-12 <= d <= dmax + 1e-9
    assert relative_entropy(r, r) == pytest.approx(0.0, abs=1e-9)


def test_fidelity():
    assert fidelity(np.eye(2) / 2, np.eye(2) / 2) == pytest.approx(1.0, abs=1e-12)
    assert fidelity(np.diag([1.0, 0]), np.diag([0, 1.0])) == pytest.approx(0.0, abs=1e-12)
    assert fidelity(np.diag([1.0, 0]), np.eye(2) / 2) == pytest.approx(0.5, abs=1e-12)
