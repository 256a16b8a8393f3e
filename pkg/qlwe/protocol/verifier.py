"""Verifier side of the test: keys, challenge and the acceptance checks."""
from __future__ import annotations

import logging
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import TypeAdapter, ValidationError

from qlwe.core.exceptions import AmbiguousPreimage, InversionFailed, ParameterError, ProtocolPhaseError
from qlwe.protocol.gsets import equation_bit, in_G_sbx
from qlwe.schemas.params import ProtocolParams
from qlwe.schemas.transcript import (
    EquationResponse,
    PreimageResponse,
    PublicKey,
    ReasonCode,
    Response,
    Verdict,
)
from qlwe.zq_lattice.trapdoor import TrapdoorKeypair, invert, invert_bruteforce, residual_norm
from qlwe.zq_lattice.validation import LweInstance, generate_keypair, make_instance
from qlwe.zq_lattice.zq import ZqVector, bit_width, matrix_payload

logger = logging.getLogger(__name__)

response_adapter = TypeAdapter(Response)


class VerifierPhase(str, Enum):
    INIT = "init"
    COMMITTED = "committed"
    CHALLENGED = "challenged"
    DECIDED = "decided"


class Verifier:
    """
    One round of the verifier, driven strictly forward through its phases.

    Keys and the LWE sample are drawn from ``rng`` on construction, and the
    challenge bit comes from the same stream, so a verifier rebuilt from the
    same stream makes the same decisions.
    """

    def __init__(self, params: ProtocolParams, rng: np.random.Generator):
        if params.n % 2:
            raise ParameterError(f"the protocol needs even n, got n={params.n}")
        self.params = params
        self._rng = rng
        self.keypair: TrapdoorKeypair = generate_keypair(params, rng)
        self.instance: LweInstance = make_instance(self.keypair, params, rng)
        self.phase = VerifierPhase.INIT
        self.y: Optional[ZqVector] = None
        self.r: Optional[int] = None
        self.verdict: Optional[Verdict] = None

    @property
    def secret(self) -> ZqVector:
        return self.instance.s_witness

    def public_key(self) -> LweInstance:
        """(A, u) without witnesses."""
        return LweInstance(A=self.instance.A, u=self.instance.u)

    def public_key_message(self) -> PublicKey:
        return PublicKey(A=matrix_payload(self.instance.A), u=list(self.instance.u.coords))

    def _advance(self, expected: VerifierPhase, to: VerifierPhase) -> None:
        if self.phase != expected:
            raise ProtocolPhaseError(f"verifier is {self.phase.value}, expected {expected.value}")
        self.phase = to

    def commit(self, y) -> None:
        self._advance(VerifierPhase.INIT, VerifierPhase.COMMITTED)
        coords = tuple(int(c) for c in (y.coords if isinstance(y, ZqVector) else y))
        if len(coords) != self.params.m:
            logger.debug("commitment of length %d, expected %d", len(coords), self.params.m)
            self.y = None
        else:
            self.y = ZqVector.reduce(coords, self.params.q)

    def challenge(self, r: Optional[int] = None) -> int:
        """Draw the challenge bit; a forced ``r`` still consumes the draw."""
        self._advance(VerifierPhase.COMMITTED, VerifierPhase.CHALLENGED)
        drawn = int(self._rng.integers(0, 2))
        self.r = drawn if r is None else int(r)
        if self.r not in (0, 1):
            raise ParameterError(f"challenge must be a bit, got {r}")
        return self.r

    def _invert(self, y: ZqVector) -> Optional[ZqVector]:
        if self.keypair.trapdoor is not None:
            try:
                return invert(self.instance.A, self.keypair.trapdoor, y)
            except InversionFailed as exc:
                logger.debug("inversion failed: %s", exc)
                return None
        try:
            return invert_bruteforce(self.instance.A, y, self.params.inversion_bound)
        except AmbiguousPreimage as exc:
            logger.debug("inversion ambiguous: %s", exc)
            return None

    def _check(self, response) -> ReasonCode:
        params = self.params
        q, n, width = params.q, params.n, bit_width(params.q)
        if isinstance(response, dict):
            try:
                response = response_adapter.validate_python(response)
            except ValidationError:
                return ReasonCode.MALFORMED_RESPONSE
        if self.y is None:
            return ReasonCode.MALFORMED_RESPONSE
        bound = params.acceptance_bound
        A, u, y = self.instance.A, self.instance.u, self.y

        if self.r == 0:
            if not isinstance(response, PreimageResponse) or len(response.x) != n:
                return ReasonCode.MALFORMED_RESPONSE
            x = ZqVector.reduce(response.x, q)
            image = A.mul_vec(x) + u.scale(response.b)
            if (image - y).norm() > bound:
                return ReasonCode.PREIMAGE_TOO_FAR
            return ReasonCode.ACCEPTED

        if not isinstance(response, EquationResponse) or len(response.d) != n * width:
            return ReasonCode.MALFORMED_RESPONSE
        if any(bit not in (0, 1) for bit in response.d):
            return ReasonCode.MALFORMED_RESPONSE
        x0 = self._invert(y)
        if x0 is None:
            return ReasonCode.INVERSION_FAILED
        if residual_norm(A, x0, y) > bound:
            return ReasonCode.RESIDUAL_TOO_FAR
        s = self.secret
        if response.c != equation_bit(response.d, x0, x0 - s):
            return ReasonCode.EQUATION_MISMATCH
        if not in_G_sbx(response.d, s, 0, x0):
            return ReasonCode.D_NOT_IN_G
        return ReasonCode.ACCEPTED

    def decide(self, response) -> Verdict:
        self._advance(VerifierPhase.CHALLENGED, VerifierPhase.DECIDED)
        reason = self._check(response)
        self.verdict = Verdict(accepted=reason == ReasonCode.ACCEPTED, reason=reason)
        logger.debug("r=%d verdict %s", self.r, reason.value)
        return self.verdict
