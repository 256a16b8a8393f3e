from pathlib import Path
from typing import Optional

import click
from pydantic import ValidationError

from qlwe.cli.deps import echo_json, handle_errors
from qlwe.core.exceptions import ConfigError
from qlwe.depth_compiler.executor import validate_circuit
from qlwe.depth_compiler.fanout import compile_fanout
from qlwe.depth_compiler.report import depth_report
from qlwe.schemas.circuit import LayeredCircuit


def read_circuit(path: Path) -> LayeredCircuit:
    try:
        circuit = LayeredCircuit.model_validate_json(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read circuit {path}", [str(exc)]) from exc
    except ValidationError as exc:
        raise ConfigError(f"invalid circuit {path}", [
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in exc.errors()
        ]) from exc
    validate_circuit(circuit)
    return circuit


@click.group(help="Layered-circuit compilation and depth accounting.")
def depthc() -> None:
    pass


@depthc.command(help="Validate a circuit file and print its depth report.")
@click.argument("circuit_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@handle_errors
def report(circuit_file: Path) -> None:
    echo_json(depth_report(read_circuit(circuit_file)))


@depthc.command("compile-fanout", help="Compile the constant-depth fanout gate on m qubits.")
@click.argument("m", type=click.IntRange(min=1))
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
@handle_errors
def compile_fanout_command(m: int, out: Optional[Path]) -> None:
    circuit = compile_fanout(m)
    if out is not None:
        out.write_text(circuit.model_dump_json(indent=2), encoding="utf-8")
        click.echo(f"wrote {out}")
    else:
        echo_json(circuit)
