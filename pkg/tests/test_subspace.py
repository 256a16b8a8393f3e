import pytest

from qlwe.quantum_sim.lwe_map import prepare_Phi
from qlwe.quantum_sim.robust import create_robust_state, overlap_shifted
from qlwe.quantum_sim.state import SparseState
from qlwe.quantum_sim.subspace import SubspaceOracle, distance_to_Hk
from qlwe.zq_lattice.zq import ZqVector


def test_lattice_points_belong_to_lambda(closeness_instance, closeness_params):
    oracle = SubspaceOracle.build(closeness_instance, closeness_params)
    k = closeness_instance
    for x in range(k.q):
        y = k.A.mul_vec(ZqVector(k.q, (x,))).coords
        assert oracle.preimages[y] == (x,)


def test_basis_states_have_zero_distance(closeness_instance, closeness_params):
    oracle = SubspaceOracle.build(closeness_instance, closeness_params)
    for y in list(oracle.preimages)[:20]:
        assert distance_to_Hk(oracle.basis_state(y), closeness_instance, closeness_params, oracle) == pytest.approx(0.0, abs=1e-12)


def test_orthogonal_state_has_unit_distance(closeness_instance, closeness_params):
    k = closeness_instance
    oracle = SubspaceOracle.build(k, closeness_params)
    y = next(iter(oracle.preimages))
    x_other = ((oracle.preimages[y][0] + 1) % k.q,)
    state = SparseState.basis_state(k.q, (1, k.n, k.m), (0,) + x_other + y)
    assert distance_to_Hk(state, k, closeness_params, oracle) == pytest.approx(1.0)


def test_phi_is_close_to_hk(closeness_instance, closeness_params):
    k, p = closeness_instance, closeness_params
    phi, _ = prepare_Phi(k, p, override=True)
    distance = distance_to_Hk(phi, k, p)
    assert distance <= p.epsilon + 1e-9
    shift_overlap = overlap_shifted(create_robust_state(p.m, p.q, p.r), k.e_witness)
    assert distance == pytest.approx((1 - shift_overlap) / 2, abs=1e-9)
