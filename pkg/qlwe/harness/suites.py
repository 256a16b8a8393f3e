"""Acceptance batteries run against a preset."""
from __future__ import annotations

import itertools
import logging
import math
import time
from pathlib import Path
from typing import Optional, Union

import numpy as np

from qlwe.core.config import settings
from qlwe.core.exceptions import ConfigError
from qlwe.core.seeding import derive_rng
from qlwe.depth_compiler.executor import fidelity, run_layered, validate_circuit
from qlwe.depth_compiler.fanout import compile_fanout, reference_fanout
from qlwe.depth_compiler.linear_map import compile_linear_map_modeled, encode_register
from qlwe.depth_compiler.report import depth_report
from qlwe.harness.presets import config_hash
from qlwe.harness.transcripts import TranscriptWriter, replay_transcripts
from qlwe.protocol.extractor import estimate_extraction
from qlwe.protocol.gsets import classify_tuple, g_density_bound, in_G_sbx
from qlwe.protocol.provers import PROVERS
from qlwe.protocol.rates import estimate_pass_rate
from qlwe.quantum_sim.lwe_map import (
    apply_lwe_map,
    lwe_map_matrix,
    phi_support_size,
    prepare_Phi,
    prepare_Phi_shift_corrected,
    shifted_supports_disjoint,
)
from qlwe.quantum_sim.robust import (
    create_robust_state,
    interval_overlap,
    overlap_shifted,
    robust_parameters,
    closeness_precondition,
)
from qlwe.quantum_sim.state import SparseState
from qlwe.quantum_sim.subspace import distance_to_Hk
from qlwe.schemas.params import ProtocolParams
from qlwe.schemas.preset import PresetConfig
from qlwe.schemas.report import CheckResult, RunReport, SuiteKind
from qlwe.schemas.transcript import HardcoreTuple, TupleClass
from qlwe.zq_lattice.gaussian import sample_error_vector
from qlwe.zq_lattice.trapdoor import invert, invert_bruteforce
from qlwe.zq_lattice.validation import LweInstance, generate_keypair, make_instance, validate_instance
from qlwe.zq_lattice.zq import ZqMatrix, ZqVector

logger = logging.getLogger(__name__)

EXHAUSTIVE_SHIFT_LIMIT = 10 ** 5
SAMPLED_SHIFTS = 2000
INVERSION_TRIALS = 100
G_SAMPLES = 10 ** 5
VALIDATION_SEEDS = 200
FANOUT_SIZES = range(1, 9)
FANOUT_STATES = 100
FANOUT_DEPTH_SIZES = (8, 16, 32, 64)
BASELINE_RATE_WINDOW = (0.73, 0.77)


def _check(name: str, passed: bool, value=None, threshold=None, detail: str = "") -> CheckResult:
    return CheckResult(
        name=name, passed=bool(passed),
        value=None if value is None else float(value),
        threshold=None if threshold is None else float(threshold),
        detail=detail,
    )


# invariants


def check_robustness(params: ProtocolParams, seed: int) -> list[CheckResult]:
    r, m, q = params.r, params.m, params.q
    radius = int(math.floor(params.B_V))
    if (1 << r) + params.B_V > q:
        return []
    floor = robust_parameters(params).overlap_floor
    if (2 * radius + 1) ** m <= EXHAUSTIVE_SHIFT_LIMIT:
        shifts = list(itertools.product(range(-radius, radius + 1), repeat=m))
    else:
        rng = derive_rng(seed, "robustness")
        shifts = [tuple(int(v) for v in rng.integers(-radius, radius + 1, size=m)) for _ in range(SAMPLED_SHIFTS)]
    closed = [interval_overlap(r, e) for e in shifts]
    checks = [_check("robust_overlap_floor", min(closed) >= floor - 1e-12, min(closed), floor, f"{len(shifts)} shifts")]
    if (1 << (r * m)) <= settings.SPARSE_SUPPORT_LIMIT and len(shifts) * (1 << (r * m)) <= settings.ENUMERATION_LIMIT:
        state = create_robust_state(m, q, r)
        worst = max(abs(overlap_shifted(state, ZqVector.reduce(e, q)) - c) for e, c in zip(shifts, closed))
        checks.append(_check("robust_closed_form", worst <= 1e-12, worst, 1e-12))
    return checks


def check_inversion(params: ProtocolParams, seed: int) -> list[CheckResult]:
    """INVERT recovers x from A·x + e whenever e is inside the decoding radius."""
    rng = derive_rng(seed, "inversion")
    keypair = generate_keypair(params, rng)
    if keypair.trapdoor is None:
        return []
    radius = keypair.trapdoor.decoding_radius(params.q)
    enumerable = params.q ** params.n <= settings.ENUMERATION_LIMIT
    tried = disagreements = 0
    for _ in range(INVERSION_TRIALS):
        x = ZqVector.uniform(params.n, params.q, rng)
        e = sample_error_vector(params.gaussian(), params.m, rng)
        if e.norm() >= radius:
            continue
        tried += 1
        v = keypair.A.mul_vec(x) + e
        recovered = invert(keypair.A, keypair.trapdoor, v)
        if recovered != x:
            disagreements += 1
        elif enumerable and invert_bruteforce(keypair.A, v, radius) != x:
            disagreements += 1
    return [_check(
        "trapdoor_inversion", tried > 0 and disagreements == 0, disagreements, 0,
        f"{tried} instances inside radius {radius:.2f}" + (", brute-force cross-check" if enumerable else ""),
    )]


def check_gsets(params: ProtocolParams, seed: int) -> list[CheckResult]:
    n, q, bits = params.n, params.q, params.bits
    if n % 2:
        return []
    rng = derive_rng(seed, "gsets")
    bound = g_density_bound(n)
    length = n * bits
    if length <= 16:
        ds = np.array(list(itertools.product((0, 1), repeat=length)))
        worst = 1.0
        for _ in range(8):
            s, x = ZqVector.uniform(n, q, rng), ZqVector.uniform(n, q, rng)
            b = int(rng.integers(0, 2))
            worst = min(worst, sum(in_G_sbx(d, s, b, x) for d in ds) / len(ds))
        checks = [_check("g_density", worst >= bound, worst, bound, "exhaustive over d")]
    else:
        good = 0
        for _ in range(G_SAMPLES):
            s, x = ZqVector.uniform(n, q, rng), ZqVector.uniform(n, q, rng)
            good += in_G_sbx(rng.integers(0, 2, size=length), s, int(rng.integers(0, 2)), x)
        checks = [_check("g_density", good / G_SAMPLES >= bound - 0.01, good / G_SAMPLES, bound - 0.01, f"{G_SAMPLES} samples")]

    broken = 0
    for _ in range(200):
        s = ZqVector.uniform(n, q, rng)
        t = HardcoreTuple(
            b=int(rng.integers(0, 2)), x=list(ZqVector.uniform(n, q, rng).coords),
            d=[int(v) for v in rng.integers(0, 2, size=length)], c=int(rng.integers(0, 2)),
        )
        pair = {classify_tuple(t, s), classify_tuple(t.model_copy(update={"c": 1 - t.c}), s)}
        if pair not in ({TupleClass.NEITHER}, {TupleClass.IN_H, TupleClass.IN_HBAR}):
            broken += 1
    checks.append(_check("classify_partition", broken == 0, broken, 0, "200 random tuples"))
    return checks


def _validated_instance(params: ProtocolParams, seed: int) -> Optional[LweInstance]:
    for index in range(VALIDATION_SEEDS):
        rng = derive_rng(seed, "closeness", index)
        k = make_instance(generate_keypair(params, rng), params, rng)
        report = validate_instance(k, params)
        if report.in_K and report.fully_checked:
            return k.with_distance(report.distance.value)
    return None


def check_closeness(params: ProtocolParams, seed: int) -> list[CheckResult]:
    """Exact ε-closeness and shift-corrected overlap where H_k can be enumerated."""
    checks = []
    precondition = closeness_precondition(params)
    if precondition.holds:
        floor = (1 + robust_parameters(params).overlap_floor) / 2
        checks.append(_check("shift_corrected_overlap_floor", floor >= 1 - params.epsilon / 4, floor, 1 - params.epsilon / 4))
    enumerable = (
        phi_support_size(params) <= settings.SPARSE_SUPPORT_LIMIT
        and params.q ** params.m <= settings.ENUMERATION_LIMIT
        and params.q ** params.n <= settings.ENUMERATION_LIMIT
    )
    if not enumerable:
        return checks
    k = _validated_instance(params, seed)
    if k is None:
        checks.append(_check("closeness", False, detail=f"no validated instance in {VALIDATION_SEEDS} seeds"))
        return checks
    phi, _ = prepare_Phi(k, params, override=True)
    phi_exact, _ = prepare_Phi_shift_corrected(k, params, override=True)
    distance = distance_to_Hk(phi, k, params)
    ov = overlap_shifted(create_robust_state(params.m, params.q, params.r), k.e_witness)
    checks.extend([
        _check("supports_disjoint", shifted_supports_disjoint(k, params.r)),
        _check("closeness", distance <= params.epsilon + 1e-9, distance, params.epsilon,
               "" if precondition.holds else "closeness precondition relaxed"),
        _check("shift_corrected_overlap", abs(phi.inner(phi_exact) - (1 + ov) / 2) <= 1e-9,
               phi.inner(phi_exact), (1 + ov) / 2),
    ])
    return checks


# depth


def check_fanout(seed: int) -> list[CheckResult]:
    rng = derive_rng(seed, "fanout")
    worst, runs = 1.0, 0
    for m in FANOUT_SIZES:
        circuit = compile_fanout(m)
        for _ in range(FANOUT_STATES):
            psi = rng.normal(size=1 << m) + 1j * rng.normal(size=1 << m)
            psi /= np.linalg.norm(psi)
            expected = reference_fanout(m, psi)
            for branch in range(1 << circuit.r1):
                out, _ = run_layered(circuit, psi, rng, forced_outcomes=[branch])
                worst = min(worst, fidelity(out, expected))
                runs += 1
    checks = [_check("fanout_equivalence", worst >= 1 - 1e-9, worst, 1 - 1e-9, f"{runs} runs, m=1..{FANOUT_SIZES[-1]}")]
    for m in FANOUT_DEPTH_SIZES:
        report = depth_report(compile_fanout(m))
        ceiling = math.ceil(math.log2(m)) + 1
        checks.append(_check(
            f"fanout_depth_m{m}",
            report.num_layers <= 2 and report.max_quantum_depth <= 4 and report.r1 == m - 1
            and report.max_classical_depth <= ceiling,
            report.max_classical_depth, ceiling,
            f"{report.num_layers} layers, quantum depth {report.max_quantum_depth}, r1={report.r1}",
        ))
    return checks


def check_linear_map(params: Optional[ProtocolParams], seed: int) -> list[CheckResult]:
    rng = derive_rng(seed, "linear-map")
    A = ZqMatrix.uniform(2, 1, 4, rng)
    s = ZqVector.uniform(1, 4, rng)
    small = LweInstance(A=A, u=A.mul_vec(s))
    circuit = compile_linear_map_modeled(lwe_map_matrix(small))
    mismatches = 0
    for b, x, z1, z2 in itertools.product((0, 1), range(4), range(4), range(4)):
        psi = np.zeros(1 << circuit.r2, dtype=complex)
        psi[encode_register(b, (x,), (z1, z2), 4)] = 1
        out, _ = run_layered(circuit, psi, rng)
        (image,) = list(apply_lwe_map(SparseState.basis_state(4, (1, 1, 2), (b, x, z1, z2)), small))
        if abs(out[encode_register(image[0], image[1:2], image[2:], 4)]) < 1 - 1e-9:
            mismatches += 1
    checks = [_check("linear_map_equivalence", mismatches == 0, mismatches, 0, "n=1, m=2, q=4 basis states")]
    if params is not None:
        k = make_instance(generate_keypair(params, rng), params, rng)
        modeled = compile_linear_map_modeled(lwe_map_matrix(k))
        validate_circuit(modeled)
        report = depth_report(modeled)
        checks.append(_check(
            "linear_map_declared_depth", report.max_quantum_depth == settings.LINEAR_MAP_DECLARED_DEPTH,
            report.max_quantum_depth, settings.LINEAR_MAP_DECLARED_DEPTH, f"{report.total_qubits} qubits",
        ))
    return checks


# protocol


def protocol_checks(prover: str, params: ProtocolParams, stats) -> list[CheckResult]:
    r0 = stats.per_challenge["0"]
    if prover == "quantum":
        checks = [_check("r0_rate", r0.rate == 1.0, r0.rate, 1.0)]
        if closeness_precondition(params).holds:
            floor = 1 - 3 * math.sqrt(params.epsilon) - 0.02
            checks.append(_check("honest_rate", stats.rate >= floor, stats.rate, floor))
        return checks
    if prover == "pass_r0":
        low, high = BASELINE_RATE_WINDOW
        return [
            _check("r0_rate", r0.rate == 1.0, r0.rate, 1.0),
            _check("baseline_rate", low <= stats.rate <= high, stats.rate, 0.75, f"expected [{low}, {high}]"),
        ]
    if prover == "random":
        return [_check("random_rate", stats.rate <= 0.6, stats.rate, 0.6)]
    return [_check("oracle_rate", stats.rate == 1.0, stats.rate, 1.0)]


def run_suite(
        kind: Union[SuiteKind, str],
        preset: PresetConfig,
        seed: Optional[int] = None,
        *,
        prover: str = "quantum",
        trials: Optional[int] = None,
        workers: Optional[int] = None,
        repetitions: Optional[int] = None,
        out_dir: Optional[Union[str, Path]] = None,
) -> RunReport:
    """
    Run one battery and collect its checks into a report.

    Args:
        kind: invariants, protocol, depth or extract
        preset: Resolved preset; simulating kinds need a desk-runnable one
        seed: Master seed, defaults to the configured seed
        prover: Prover for the protocol and extract kinds
        trials: Overrides the preset's trial count
        workers: Overrides the preset's worker count
        repetitions: Overrides the preset's repetition group size
        out_dir: When given, report.json (and transcripts.jsonl for protocol runs) land here

    Returns:
        RunReport: Checks, statistics, config hash and code version
    """
    kind = SuiteKind(kind)
    seed = settings.SEED if seed is None else seed
    if prover not in PROVERS:
        raise ConfigError(f"unknown prover '{prover}'", [f"choose one of {', '.join(PROVERS)}"])
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    report = RunReport(kind=kind, preset=preset.name, seed=seed, config_hash=config_hash(preset), version=settings.VERSION)
    logger.info("running %s suite on preset '%s' with seed %d", kind.value, preset.name, seed)

    if kind == SuiteKind.DEPTH:
        report.checks = check_fanout(seed) + check_linear_map(preset.params if preset.desk_runnable else None, seed)
        report.depth = [depth_report(compile_fanout(m)) for m in FANOUT_DEPTH_SIZES]
    else:
        params = preset.require_params()
        if kind == SuiteKind.INVARIANTS:
            report.checks = (
                check_robustness(params, seed) + check_inversion(params, seed)
                + check_gsets(params, seed) + check_closeness(params, seed)
            )
        elif kind == SuiteKind.PROTOCOL:
            count = trials or preset.trials.count
            sink = TranscriptWriter(out / "transcripts.jsonl", params, seed, prover, count) if out else None
            try:
                stats = estimate_pass_rate(
                    prover, params, count, seed,
                    workers=workers or preset.trials.workers,
                    repetitions=repetitions or preset.trials.repetitions,
                    sink=sink,
                )
            finally:
                if sink is not None:
                    sink.close()
            report.prover, report.trials, report.stats = prover, count, stats
            report.checks = protocol_checks(prover, params, stats)
            if sink is not None:
                replay = replay_transcripts(sink.path)
                report.checks.append(_check("replay", replay.ok, len(replay.mismatches), 0, f"{replay.trials} trials"))
        else:
            count = trials or min(preset.trials.count, 1000)
            extraction = estimate_extraction(prover, params, count, seed)
            report.prover, report.trials, report.extraction = prover, count, extraction
            if prover == "quantum":
                report.checks = [_check("extraction_in_H", extraction.in_h_rate >= 0.95, extraction.in_h_rate, 0.95)]
            else:
                report.checks = [_check("extraction_in_H", True, extraction.in_h_rate, detail="informational")]

    report.elapsed = time.perf_counter() - start
    if out is not None:
        (out / "report.json").write_text(report.model_dump_json(indent=2), encoding="utf-8")
    logger.info("%s suite %s (%d checks)", kind.value, "passed" if report.passed else "FAILED", len(report.checks))
    return report
