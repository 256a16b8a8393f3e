from pathlib import Path
from typing import Optional

import click

from qlwe.cli.deps import echo_json, handle_errors, load_preset, resolve_seed
from qlwe.core.seeding import derive_rng
from qlwe.protocol.rates import VERIFIER_TAG
from qlwe.schemas.lattice import KeygenReport
from qlwe.zq_lattice.trapdoor import keypair_payload
from qlwe.zq_lattice.validation import generate_keypair, make_instance


def keygen_report(params, seed: int, trial: int) -> KeygenReport:
    """The key material the verifier of ``trial`` draws under ``seed``."""
    rng = derive_rng(seed, VERIFIER_TAG, trial)
    keypair = generate_keypair(params, rng)
    instance = make_instance(keypair, params, rng)
    trapdoor = keypair.trapdoor
    return KeygenReport(
        seed=seed,
        trial=trial,
        keypair=keypair_payload(keypair),
        u=list(instance.u.coords),
        s=list(instance.s_witness.coords),
        gadget=trapdoor is not None,
        decoding_radius=trapdoor.decoding_radius(params.q) if trapdoor else None,
        implied_constant=trapdoor.implied_constant(params.n, params.q) if trapdoor else None,
    )


@click.command(help="Generate the verifier's trapdoor keypair and LWE sample.")
@click.option("--params", "params_spec", required=True, help="Preset name or TOML file")
@click.option("--seed", type=int, default=None, help="Master seed (default QLWE_SEED)")
@click.option("--trial", type=int, default=0, show_default=True, help="Trial whose verifier key to derive")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
@handle_errors
def keygen(params_spec: str, seed: Optional[int], trial: int, out: Optional[Path]) -> None:
    params = load_preset(params_spec).require_params()
    report = keygen_report(params, resolve_seed(seed), trial)
    if out is not None:
        out.write_text(report.model_dump_json(indent=2), encoding="utf-8")
        click.echo(f"wrote {out}")
    else:
        echo_json(report)
