"""LWE instances and K_{B_V} membership checks."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from qlwe.core.config import settings
from qlwe.core.exceptions import DimensionError, SizeGuardError
from qlwe.schemas.params import ParamMode, ProtocolParams
from qlwe.schemas.validation import ConditionResult, ConditionStatus, ValidationReport
from qlwe.zq_lattice.gaussian import sample_error_vector
from qlwe.zq_lattice.trapdoor import TrapdoorKeypair, gentrap, matrix_distance_bruteforce, min_gadget_rows
from qlwe.zq_lattice.zq import ZqMatrix, ZqVector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LweInstance:
    """The 5-tuple k = (m, n, q, A, u) plus optional witnesses."""
    A: ZqMatrix
    u: ZqVector
    s_witness: Optional[ZqVector] = None
    e_witness: Optional[ZqVector] = None
    validated_distance: Optional[float] = None

    def __post_init__(self):
        if len(self.u) != self.m or self.u.q != self.q:
            raise DimensionError(f"u must have length {self.m} mod {self.q}")
        if self.s_witness is not None and len(self.s_witness) != self.n:
            raise DimensionError(f"s must have length {self.n}")
        if self.e_witness is not None and len(self.e_witness) != self.m:
            raise DimensionError(f"e must have length {self.m}")
        if self.s_witness is not None and self.e_witness is not None:
            if self.A.mul_vec(self.s_witness) + self.e_witness != self.u:
                raise DimensionError("witnesses do not satisfy u = A·s + e")

    @property
    def m(self) -> int:
        return self.A.rows

    @property
    def n(self) -> int:
        return self.A.cols

    @property
    def q(self) -> int:
        return self.A.q

    def with_distance(self, distance: float) -> "LweInstance":
        return replace(self, validated_distance=distance)


def make_instance(keypair: TrapdoorKeypair, params: ProtocolParams, rng: np.random.Generator) -> LweInstance:
    """Draw s uniform and e ~ D_{q,B_V}^m and publish u = A·s + e."""
    s = ZqVector.uniform(params.n, params.q, rng)
    e = sample_error_vector(params.gaussian(), params.m, rng)
    return LweInstance(A=keypair.A, u=keypair.A.mul_vec(s) + e, s_witness=s, e_witness=e)


def generate_keypair(params: ProtocolParams, rng: np.random.Generator) -> TrapdoorKeypair:
    """Gadget keypair when m allows it, otherwise a uniform A inverted by brute force."""
    if params.m >= min_gadget_rows(params.n, params.q):
        return gentrap(params.n, params.m, params.q, rng)
    if params.q ** params.n > settings.ENUMERATION_LIMIT:
        raise SizeGuardError("generate_keypair", params.q ** params.n, settings.ENUMERATION_LIMIT)
    return TrapdoorKeypair(A=ZqMatrix.uniform(params.m, params.n, params.q, rng))


def _compare(value: float, threshold: float, ok: bool, detail: str = "") -> ConditionResult:
    return ConditionResult(
        status=ConditionStatus.PASSED if ok else ConditionStatus.FAILED,
        value=value, threshold=threshold, detail=detail,
    )


def validate_instance(
        k: LweInstance, params: ProtocolParams, *, check_distance: bool = True
) -> ValidationReport:
    """
    Check the K_{B_V} conditions for an instance.

    Args:
        k: The instance
        params: Protocol parameters supplying B_V, C and ε
        check_distance: Skip the brute-force distance even when enumerable

    Returns:
        ValidationReport: Per-condition status; nothing here raises
    """
    q = params.q
    cond_i = _compare(float(q), params.condition_i_threshold, q >= params.condition_i_threshold)

    if k.e_witness is None:
        cond_ii = ConditionResult(status=ConditionStatus.UNCHECKED, threshold=params.B_V, detail="no error witness")
    else:
        e_max = float(k.e_witness.max_norm())
        cond_ii = _compare(e_max, params.B_V, e_max <= params.B_V)

    bound = params.acceptance_bound
    if k.validated_distance is not None:
        distance = _compare(k.validated_distance, bound, k.validated_distance >= bound, "cached")
    elif not check_distance or q ** k.n > settings.ENUMERATION_LIMIT:
        distance = ConditionResult(status=ConditionStatus.UNCHECKED, threshold=bound, detail="not enumerable")
    else:
        value = matrix_distance_bruteforce(k.A)
        distance = _compare(value, bound, value >= bound, "brute force")

    closeness_modulus = _compare(float(q), params.closeness_threshold, q >= params.closeness_threshold)

    if params.mode == ParamMode.STRICT:
        ok = 2 * math.sqrt(params.n) <= params.B_L < params.B_V <= q
        strict = _compare(params.B_L, params.B_V, ok, "2√n <= B_L < B_V <= q")
    else:
        strict = ConditionResult(status=ConditionStatus.UNCHECKED, detail="desk mode")

    report = ValidationReport(
        condition_i=cond_i, condition_ii=cond_ii, distance=distance,
        closeness_modulus=closeness_modulus, strict=strict, r=params.r, B_P=params.B_P,
    )
    if report.failures:
        logger.debug("instance outside K_{B_V}: %s", ", ".join(report.failures))
    return report
