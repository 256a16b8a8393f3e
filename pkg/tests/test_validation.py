import pytest

from qlwe.core.exceptions import DimensionError
from qlwe.schemas.params import ParamMode, ProtocolParams
from qlwe.schemas.validation import ConditionStatus
from qlwe.zq_lattice.trapdoor import matrix_distance_bruteforce
from qlwe.zq_lattice.validation import LweInstance, generate_keypair, make_instance, validate_instance
from qlwe.zq_lattice.zq import ZqMatrix, ZqVector


def test_tiny_params_derive_r():
    params = ProtocolParams(n=2, m=6, q=64, B_V=1, C=1, epsilon=0.5)
    assert params.r == 2
    assert params.B_P == pytest.approx(64 / 72 ** 0.5)


def test_params_reject_r_below_one():
    with pytest.raises(ValueError):
        ProtocolParams(n=4, m=16, q=16, B_V=1, C=1, epsilon=0.5)


def test_strict_params_check_ordering():
    with pytest.raises(ValueError):
        ProtocolParams(n=4, m=16, q=1 << 20, B_L=1, B_V=8, epsilon=0.25, mode=ParamMode.STRICT)
    params = ProtocolParams(n=4, m=16, q=1 << 20, B_L=4, B_V=8, epsilon=0.25, mode=ParamMode.STRICT)
    assert params.mode == ParamMode.STRICT


def test_lambda_alias():
    params = ProtocolParams.model_validate({"lambda": 128, "n": 2, "m": 6, "q": 64, "B_V": 1, "epsilon": 0.5})
    assert params.lambda_ == 128


def test_witness_consistency_is_enforced():
    A = ZqMatrix.from_rows([[1], [2]], 8)
    s = ZqVector(8, (3,))
    e = ZqVector(8, (0, 1))
    k = LweInstance(A=A, u=A.mul_vec(s) + e, s_witness=s, e_witness=e)
    assert k.m == 2 and k.n == 1 and k.q == 8
    with pytest.raises(DimensionError):
        LweInstance(A=A, u=A.mul_vec(s), s_witness=s, e_witness=e)


def test_zero_error_passes_condition_ii(tiny_params, rng):
    keypair = generate_keypair(tiny_params, rng)
    s = ZqVector.uniform(2, 64, rng)
    k = LweInstance(A=keypair.A, u=keypair.A.mul_vec(s), s_witness=s, e_witness=ZqVector.zeros(6, 64))
    report = validate_instance(k, tiny_params)
    assert report.condition_ii.status == ConditionStatus.PASSED
    assert report.condition_i.status == ConditionStatus.PASSED


def test_condition_ii_unchecked_without_witness(tiny_params, rng):
    keypair = generate_keypair(tiny_params, rng)
    k = LweInstance(A=keypair.A, u=ZqVector.uniform(6, 64, rng))
    assert validate_instance(k, tiny_params).condition_ii.status == ConditionStatus.UNCHECKED


def test_condition_i_flagged_when_q_is_small(rng):
    params = ProtocolParams(n=2, m=6, q=64, B_V=8, C=1, epsilon=0.5)
    k = make_instance(generate_keypair(params, rng), params, rng)
    report = validate_instance(k, params)
    assert report.condition_i.status == ConditionStatus.FAILED
    assert "condition_i" in report.failures
    assert not report.in_K


def test_tiny_distance_is_exhaustive(tiny_params, rng):
    k = make_instance(generate_keypair(tiny_params, rng), tiny_params, rng)
    report = validate_instance(k, tiny_params)
    value = matrix_distance_bruteforce(k.A)
    assert report.distance.value == pytest.approx(value)
    passed = value >= tiny_params.acceptance_bound
    assert report.distance.status == (ConditionStatus.PASSED if passed else ConditionStatus.FAILED)


def test_distance_unchecked_above_enumeration_limit(honest_params, rng):
    k = make_instance(generate_keypair(honest_params, rng), honest_params, rng)
    report = validate_instance(k, honest_params)
    assert report.distance.status == ConditionStatus.UNCHECKED
    assert report.closeness_modulus.status == ConditionStatus.PASSED
    assert report.in_K


def test_gadget_keypair_when_rows_allow(baseline_params, tiny_params, rng):
    assert generate_keypair(baseline_params, rng).trapdoor is not None
    assert generate_keypair(tiny_params, rng).trapdoor is None
