import dataclasses
import json
import sys
from functools import wraps
from typing import Any, Callable, Dict, Optional

import click
from rich.console import Console
from rich.table import Table

from configuration.configuration import Configuration, logger
from models.errors import FaceRingError, MalformedInput
from models.models import Certificate, LefschetzReport, Record, Status, SuiteSummary
from services.toolkit_service import ToolkitService, complex_from_record
from utils.utils import dump_json

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


def exit_code(result: Any) -> int:
    """0 for decided outcomes, 2 for INCONCLUSIVE, 1 for failed suites."""
    if isinstance(result, Certificate):
        return EXIT_INCONCLUSIVE if result.status == Status.INCONCLUSIVE else EXIT_OK
    if isinstance(result, LefschetzReport):
        return EXIT_OK if result.verdict == "holds" else EXIT_INCONCLUSIVE
    if isinstance(result, SuiteSummary):
        if result.failed:
            return EXIT_ERROR
        return EXIT_INCONCLUSIVE if result.inconclusive else EXIT_OK
    # a finished probe is an outcome even without a counterexample
    return EXIT_OK


def _plain(result: Any) -> Any:
    return result.to_dict() if isinstance(result, Record) else result


def render(result: Any, fmt: str, out: Optional[str]):
    data = _plain(result)
    if fmt == "table" and isinstance(data, dict) and out is None:
        table = Table(show_header=True, header_style="bold")
        table.add_column("field")
        table.add_column("value")
        for key, value in data.items():
            table.add_row(str(key), value if isinstance(value, str) else json.dumps(value))
        Console().print(table)
        return
    text = dump_json(data)
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
        logger.info(f"💾 Report saved: {out}")
    else:
        click.echo(text)


def run_options(command: Callable) -> Callable:
    """Shared RunConfig flags; builds the service and maps errors to exit codes."""

    @click.option("--seed", type=int, default=None, help="Seed for every randomized step.")
    @click.option("--char", "characteristic", type=int, default=None, help="Field characteristic (prime or 0).")
    @click.option("--field-bits", type=int, default=None, help="Witness field size in bits.")
    @click.option("--trials", type=int, default=None, help="Random trials for probes and witness searches.")
    @click.option("--budget", type=int, default=None, help="Step budget for move reduction.")
    @click.option("--format", "fmt", type=click.Choice(["json", "table"]), default=None)
    @click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the report to FILE.")
    @wraps(command)
    def wrapper(seed, characteristic, field_bits, trials, budget, fmt, out, **kwargs):
        overrides: Dict[str, Any] = {
            "seed": seed, "characteristic": characteristic, "field_bits": field_bits,
            "trials": trials, "budget": budget, "output_format": fmt,
        }
        config = dataclasses.replace(Configuration(), **{k: v for k, v in overrides.items() if v is not None})
        try:
            service = ToolkitService(config)
            result = command(service, **kwargs)
        except FaceRingError as e:
            click.echo(f"{type(e).__name__}: {e}", err=True)
            sys.exit(EXIT_ERROR)
        except ValueError as e:
            click.echo(f"Error: {e}", err=True)
            sys.exit(EXIT_ERROR)
        render(result, config.output_format, out)
        code = exit_code(result)
        if code:
            sys.exit(code)

    return wrapper


def read_complex(stream):
    try:
        data = json.load(stream)
    except json.JSONDecodeError as e:
        raise MalformedInput(f"Expected complex JSON on input: {e}") from e
    if not isinstance(data, dict):
        raise MalformedInput("Expected a JSON object with \"m\" and \"facets\"")
    return complex_from_record(data.get("complex", data) if "facets" not in data else data)


def read_json(path: Optional[str]) -> Optional[dict]:
    if not path:
        return None
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def parse_faces(values) -> list:
    return [[int(x) for x in value.split(",") if x] for value in values]


def parse_exps(text: str) -> Dict[int, int]:
    """'1:2,3:1' -> {1: 2, 3: 1}; a bare vertex means exponent 1."""
    exps: Dict[int, int] = {}
    for part in text.split(","):
        vertex, _, power = part.partition(":")
        exps[int(vertex)] = exps.get(int(vertex), 0) + int(power or 1)
    return exps


input_option = click.option("--input", "stream", type=click.File("r"), default="-",
                            help="Complex JSON (default: standard input).")


@click.group()
def cli():
    """Exact face-ring toolkit: complexes, moves, canonical functions and certificates."""


@cli.command("gen")
@click.argument("kind")
@click.argument("params", nargs=-1, type=int)
@run_options
def gen(service: ToolkitService, kind, params):
    """Generate a complex: boundary-simplex D, cross-polytope N, cyclic D M, stacked D K, cycle N, rp2."""
    return service.generate(kind, params)


@cli.command("inspect")
@input_option
@run_options
def inspect(service: ToolkitService, stream):
    return service.inspect(read_complex(stream))


@cli.command("homology")
@input_option
@run_options
def homology(service: ToolkitService, stream):
    return service.homology(read_complex(stream))


@cli.group("moves")
def moves():
    """Bistellar moves."""


@moves.command("list")
@input_option
@run_options
def moves_list(service: ToolkitService, stream):
    return {"moves": service.list_moves(read_complex(stream))}


@moves.command("walk")
@click.option("--steps", type=int, default=5)
@input_option
@run_options
def moves_walk(service: ToolkitService, steps, stream):
    return service.walk(read_complex(stream), steps)


@moves.command("reduce")
@input_option
@run_options
def moves_reduce(service: ToolkitService, stream):
    return service.reduce(read_complex(stream))


@cli.command("psi")
@click.option("--exps", required=True, help="Exponents as 'vertex:power,...'.")
@click.option("--lsop", "lsop_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--mode", type=click.Choice(["sphere", "ball"]), default="sphere")
@input_option
@run_options
def psi(service: ToolkitService, exps, lsop_path, mode, stream):
    return service.psi(read_complex(stream), parse_exps(exps), lsop=read_json(lsop_path), mode=mode)


@cli.command("basis")
@click.option("--degree", type=int, required=True)
@click.option("--must-include", multiple=True, help="Face to pin, e.g. 1,2 (repeatable).")
@input_option
@run_options
def basis(service: ToolkitService, degree, must_include, stream):
    return service.basis(read_complex(stream), degree, parse_faces(must_include))


@cli.command("pairing")
@click.option("--degree", type=int, required=True)
@click.option("--must-include", multiple=True, help="Face to pin, e.g. 1,2 (repeatable).")
@input_option
@run_options
def pairing(service: ToolkitService, degree, must_include, stream):
    return service.pairing(read_complex(stream), degree, parse_faces(must_include))


@cli.group("aniso")
def aniso():
    """Generic anisotropy."""


@aniso.command("cert")
@input_option
@run_options
def aniso_cert(service: ToolkitService, stream):
    certificate = service.certificate(read_complex(stream))
    logger.info(f"🔍 seed={certificate.seed} error_bound_log2={certificate.error_bound_log2}")
    return certificate


@aniso.command("verify")
@click.option("--certificate", "certificate_path", type=click.Path(exists=True, dir_okay=False), required=True)
@input_option
@run_options
def aniso_verify(service: ToolkitService, certificate_path, stream):
    ok = service.verify(read_complex(stream), read_json(certificate_path))
    if not ok:
        click.echo("Certificate did not re-verify", err=True)
        sys.exit(EXIT_ERROR)
    return {"verified": True}


@aniso.command("probe")
@click.option("--lsop", "lsop_path", type=click.Path(exists=True, dir_okay=False), default=None)
@input_option
@run_options
def aniso_probe(service: ToolkitService, lsop_path, stream):
    report = service.probe(read_complex(stream), lsop=read_json(lsop_path))
    logger.info(f"🔍 seed={report.seed} trials={report.trials}")
    return report


@cli.command("lefschetz")
@click.option("--points", type=int, default=1, help="Full-rank specializations required.")
@input_option
@run_options
def lefschetz(service: ToolkitService, points, stream):
    report = service.lefschetz(read_complex(stream), points=points)
    logger.info(f"🔍 seed={report.seed} points={report.points}")
    return report


@cli.command("reproduce")
@click.option("--suite", type=click.Choice(["identities", "diffop", "degree", "all"]), default="identities")
@run_options
def reproduce(service: ToolkitService, suite):
    return service.reproduce(suite)


@cli.group("corpus")
def corpus():
    """Acceptance corpus."""


@corpus.command("run")
@click.option("--stacked", type=int, default=10, help="Number of random stacked spheres.")
@run_options
def corpus_run(service: ToolkitService, stacked):
    return service.corpus_run(stacked_count=stacked)
