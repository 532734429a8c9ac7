"""Command line interface: run, translate, verify, export, fmt, example.

Exit codes: 0 ok, 1 property violated, 2 input error, 3 budget exceeded.
Errors are printed on stderr as ``error: <message>``.
"""

from __future__ import annotations

import contextlib
import json
import logging
import time
from enum import Enum
from pathlib import Path
from typing import Iterator, Optional, Union

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from . import petri, psystem
from .config import configure_logging
from .dsl import dump_model, load_file
from .exception import (
    CapacityExceeded,
    ModelValidationError,
    ParseError,
    StateBudgetExceeded,
    TimedNetsError,
)
from .exploration import Policy, PolicyKind, Trace, TraceGraph
from .export import to_dot
from .fixtures import EXAMPLES, get_example
from .petri import PNState, TimedPetriNet
from .psystem import PConfiguration, TimedPSystem
from .schemas import ExplorationLimits, RunReport, StepRecord
from .serializers import model_hash, model_to_document, state_to_document
from .translate import DetimedNet, DetimedPSystem, TranslatedNet, translate
from .verify import (
    PetriGeneratorParams,
    PSystemGeneratorParams,
    check_prop1,
    check_prop2,
    check_prop3,
    check_untimed_inclusion,
    random_petri,
    random_psystem,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3

Model = Union[TimedPSystem, TimedPetriNet]

app = typer.Typer(
    add_completion=False,
    no_args_is_help=True,
    help="Timed membrane systems and timed Petri nets with localities.",
)
console = Console()


class OutputFormat(str, Enum):
    """Report format on stdout."""

    text = "text"
    json = "json"


class ModelFormat(str, Enum):
    """Model file format."""

    dsl = "dsl"
    json = "json"


class TargetKind(str, Enum):
    """Translation targets."""

    ps = "ps"
    pn = "pn"
    tpn = "tpn"


class SourceKind(str, Enum):
    """Translation sources."""

    tps = "tps"
    tpn = "tpn"


class Prop(str, Enum):
    """Checkable properties."""

    detime_psystem = "1"
    detime_petri = "2"
    correspondence = "3"
    inclusion = "inclusion"


def _fail(code: int, message: str) -> typer.Exit:
    typer.echo(f"error: {message}", err=True)
    return typer.Exit(code)


@contextlib.contextmanager
def _errors() -> Iterator[None]:
    """Map toolkit exceptions to exit codes."""
    try:
        yield
    except (ParseError, ModelValidationError, ValidationError) as exc:
        raise _fail(EXIT_INPUT, str(exc)) from None
    except (StateBudgetExceeded, CapacityExceeded) as exc:
        logger.warning("Inconclusive: %s", exc)
        raise _fail(EXIT_BUDGET, str(exc)) from None
    except (TimedNetsError, ValueError, OSError) as exc:
        raise _fail(EXIT_INPUT, str(exc)) from None


def _policy(text: str, seed: Optional[int]) -> Policy:
    if text.strip().lower() == PolicyKind.SEEDED.value:
        if seed is None:
            raise ValueError("The seed policy needs --seed")
        return Policy.seeded(seed)
    policy = Policy.parse(text)
    if seed is not None and policy.kind is not PolicyKind.SEEDED:
        logger.warning("--seed is ignored by policy %s", policy)
    return policy


def _describe(model: Model, state: Union[PConfiguration, PNState]) -> str:
    if isinstance(state, PConfiguration):
        return state.describe_full()
    assert isinstance(model, TimedPetriNet)
    text = f"({state.describe(model.places)})"
    if state.has_pending:
        text += f" pending {state.describe_pending()}"
    return text


def _describe_choice(model: Model, choice) -> str:
    return choice.describe_for(model)


def _state_document(state: Union[PConfiguration, PNState]) -> dict:
    return state_to_document(state).model_dump(mode="json")


def _run_report(
    model: Model,
    policy: Policy,
    steps: int,
    result: Union[TraceGraph, Trace],
) -> RunReport:
    kind = "psystem" if isinstance(model, TimedPSystem) else "petri"
    if isinstance(result, Trace):
        return RunReport(
            model_hash=model_hash(model),
            kind=kind,
            policy=str(policy),
            steps=steps,
            initial=_describe(model, result.states[0]),
            trace=[
                StepRecord(
                    choice=_describe_choice(model, choice),
                    state=_describe(model, state),
                )
                for choice, state in zip(result.choices, result.states[1:])
            ],
            halted=result.halted,
            final=_state_document(result.final),
        )
    layers = [
        sorted(_describe(model, state) for state in result.states_at(depth))
        for depth in range(result.max_depth + 1)
    ]
    return RunReport(
        model_hash=model_hash(model),
        kind=kind,
        policy=str(policy),
        steps=steps,
        initial=layers[0][0],
        layers=layers,
    )


def _print_report(report: RunReport) -> None:
    if report.layers:
        for depth, states in enumerate(report.layers):
            noun = "state" if len(states) == 1 else "states"
            typer.echo(f"depth {depth}: {len(states)} {noun}")
            for state in states:
                typer.echo(f"  {state}")
        return
    typer.echo(report.initial)
    for record in report.trace:
        typer.echo(f"  {record.choice}")
        typer.echo(record.state)
    if report.halted:
        typer.echo("halted")


@app.callback()
def _main(
    log_level: Optional[str] = typer.Option(
        None,
        "--log-level",
        help="DEBUG, INFO, WARNING, ERROR or CRITICAL (default from "
        "TMN_LOG_LEVEL, else WARNING).",
    ),
) -> None:
    """Configure logging before any command runs."""
    configure_logging(log_level)


@app.command()
def run(
    file: Path = typer.Argument(..., exists=True, dir_okay=False),
    steps: int = typer.Option(3, "--steps", "-n", help="Number of ticks."),
    policy: str = typer.Option(
        "first", "--policy", help="exhaustive, first or seed=S."
    ),
    seed: Optional[int] = typer.Option(None, "--seed"),
    budget: int = typer.Option(50_000, "--budget"),
    fmt: OutputFormat = typer.Option(OutputFormat.text, "--format"),
    timing: bool = typer.Option(False, "--timing", help="Report elapsed ms."),
) -> None:
    """Simulate a model and print its trace or reachable states."""
    with _errors():
        limits = ExplorationLimits(depth=steps, budget=budget)
        chosen = _policy(policy, seed)
        model = load_file(file)
        started = time.perf_counter()
        if isinstance(model, TimedPSystem):
            result = psystem.run(model, limits.depth, chosen, limits.budget)
        else:
            result = petri.run(model, limits.depth, chosen, limits.budget)
        report = _run_report(model, chosen, limits.depth, result)
        if timing:
            elapsed = (time.perf_counter() - started) * 1000
            report.elapsed_ms = round(elapsed, 3)
    if fmt is OutputFormat.json:
        typer.echo(report.model_dump_json(indent=2, exclude_none=True))
    else:
        _print_report(report)


def _translation_map(
    result: Union[DetimedPSystem, DetimedNet, TranslatedNet]
) -> str:
    return result.to_document().model_dump_json(indent=2)


def _translated_model(result) -> Model:
    if isinstance(result, DetimedPSystem):
        return result.system
    return result.net


@app.command("translate")
def translate_command(
    file: Path = typer.Argument(..., exists=True, dir_okay=False),
    to: TargetKind = typer.Option(..., "--to"),
    source: Optional[SourceKind] = typer.Option(None, "--from"),
    output: Optional[Path] = typer.Option(None, "--output", "-o"),
    map_path: Optional[Path] = typer.Option(
        None, "--map", help="Correspondence JSON (default: OUTPUT.map.json)."
    ),
    fmt: ModelFormat = typer.Option(ModelFormat.dsl, "--format"),
) -> None:
    """Translate a model and write its correspondence map."""
    with _errors():
        model = load_file(file)
        actual = "tps" if isinstance(model, TimedPSystem) else "tpn"
        if source is not None and source.value != actual:
            raise ValueError(f"{file} holds a {actual} model, not {source.value}")
        result = translate(model, to.value)
        text = dump_model(_translated_model(result), fmt.value)
        mapping = _translation_map(result)
        if output is None:
            typer.echo(text, nl=False)
        else:
            output.write_text(text, encoding="utf-8")
            logger.info("Wrote %s", output)
            map_path = map_path or output.with_name(output.name + ".map.json")
        if map_path is not None:
            map_path.write_text(mapping + "\n", encoding="utf-8")
            logger.info("Wrote %s", map_path)


def _random_model(prop: Prop, seed: int) -> Model:
    if prop is Prop.detime_petri:
        return random_petri(seed, PetriGeneratorParams())
    return random_psystem(seed, PSystemGeneratorParams())


@app.command()
def verify(
    file: Optional[Path] = typer.Argument(
        None,
        exists=True,
        dir_okay=False,
        help="Model to check; omit to check a random model built from --seed.",
    ),
    prop: Prop = typer.Option(..., "--prop"),
    depth: int = typer.Option(5, "--depth"),
    seed: Optional[int] = typer.Option(None, "--seed"),
    budget: int = typer.Option(50_000, "--budget"),
    fmt: OutputFormat = typer.Option(OutputFormat.json, "--format"),
) -> None:
    """Check a property up to a depth; exit 1 with a counterexample if violated."""
    with _errors():
        limits = ExplorationLimits(depth=depth, budget=budget)
        if file is None:
            if seed is None:
                raise ValueError("Give a model file or --seed")
            model = _random_model(prop, seed)
        else:
            if seed is not None:
                logger.warning("--seed is ignored when a model file is given")
            model = load_file(file)
        if prop is Prop.detime_petri:
            if not isinstance(model, TimedPetriNet):
                raise ValueError("Property 2 needs a Petri net")
            verdict = check_prop2(model, limits.depth, limits.budget)
        elif prop is Prop.inclusion:
            verdict = check_untimed_inclusion(model, limits.depth, limits.budget)
        else:
            if not isinstance(model, TimedPSystem):
                raise ValueError(f"Property {prop.value} needs a membrane system")
            check = check_prop1 if prop is Prop.detime_psystem else check_prop3
            verdict = check(model, limits.depth, limits.budget)
    if fmt is OutputFormat.json:
        typer.echo(verdict.model_dump_json(indent=2))
    else:
        table = Table(title=f"check {verdict.check}")
        table.add_column("ok")
        table.add_column("depth")
        table.add_column("explored")
        table.add_row(str(verdict.ok), str(verdict.depth), str(verdict.explored))
        console.print(table)
        if verdict.counterexample is not None:
            console.print_json(verdict.counterexample.model_dump_json())
    if not verdict.ok:
        raise typer.Exit(EXIT_VIOLATED)


@app.command()
def export(
    file: Path = typer.Argument(..., exists=True, dir_okay=False),
    dot: Optional[Path] = typer.Option(None, "--dot"),
    json_path: Optional[Path] = typer.Option(None, "--json"),
) -> None:
    """Write DOT and/or JSON renderings; DOT goes to stdout by default."""
    with _errors():
        model = load_file(file)
        if dot is None and json_path is None:
            typer.echo(to_dot(model), nl=False)
            return
        if dot is not None:
            dot.write_text(to_dot(model), encoding="utf-8")
            logger.info("Wrote %s", dot)
        if json_path is not None:
            document = model_to_document(model).model_dump(mode="json")
            json_path.write_text(
                json.dumps(document, indent=2) + "\n", encoding="utf-8"
            )
            logger.info("Wrote %s", json_path)


@app.command()
def fmt(
    file: Path = typer.Argument(..., exists=True, dir_okay=False),
    output_format: ModelFormat = typer.Option(ModelFormat.dsl, "--format"),
) -> None:
    """Print a model in canonical form."""
    with _errors():
        model = load_file(file)
    typer.echo(dump_model(model, output_format.value), nl=False)


@app.command()
def example(name: Optional[str] = typer.Argument(None)) -> None:
    """Print a bundled example model, or list them."""
    if name is None:
        table = Table(title="examples")
        table.add_column("name")
        table.add_column("description")
        for entry in EXAMPLES.values():
            table.add_row(entry.name, entry.description)
        console.print(table)
        return
    with _errors():
        entry = get_example(name)
    typer.echo(entry.text, nl=False)


def main() -> None:  # pragma: no cover - thin CLI wrapper
    """Run the command line application."""
    app()


if __name__ == "__main__":  # pragma: no cover
    main()
