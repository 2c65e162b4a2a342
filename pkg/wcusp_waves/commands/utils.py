"""Shared utility functions for building wcusp CLI commands."""
import json
import os
from functools import wraps
from typing import Any, Callable, Iterable, Tuple

import click

from .. import __version__
from ..config.logging import get_logger
from ..config.settings import OUTPUT_DIR
from ..core.unfolding import rest_frame
from ..models import (
    Command,
    ExperimentManifest,
    ExperimentManifestSchema,
    UnfoldingParams,
)

logger = get_logger(__name__)

MANIFEST_FILE = "manifest.json"


def params_options(command: Callable) -> Callable:
    """
    Add the four unfolding coordinates as required float options, plus
    `--frame`, and pass the command a single lemma-frame `params` argument
    along with the rest shift `u_shift` (0 in the lemma frame).
    """

    @click.option("--lambda", "lam", type=float, required=True, help="λ coordinate.")
    @click.option("--alpha", type=float, required=True, help="α coordinate.")
    @click.option("--beta", type=float, required=True, help="β coordinate.")
    @click.option("--gamma", type=float, required=True, help="γ coordinate.")
    @click.option(
        "--frame",
        type=click.Choice(["lemma", "pde"]),
        default="lemma",
        show_default=True,
        help="Interpret the coordinates as lemma-frame or PDE parameters.",
    )
    @wraps(command)
    def wrapped(lam, alpha, beta, gamma, frame, **kwargs):
        params = UnfoldingParams(lam=lam, alpha=alpha, beta=beta, gamma=gamma)
        params, u_shift = to_lemma_frame(params, frame)
        return command(params=params, u_shift=u_shift, **kwargs)

    return wrapped


def output_dir_option(command: Callable) -> Callable:
    return click.option(
        "--output-dir",
        type=click.Path(file_okay=False),
        default=OUTPUT_DIR,
        show_default=True,
        help="Directory the command writes its artifacts into.",
    )(command)


def to_lemma_frame(params: UnfoldingParams, frame: str) -> Tuple[UnfoldingParams, float]:
    if frame == "pde":
        shifted, u_rest = rest_frame(params)
        logger.info(f"moved PDE parameters into the rest frame (u_rest={u_rest!r})")
        return shifted, u_rest
    return params, 0.0


def command_dir(output_dir: str, name: str) -> str:
    directory = os.path.join(output_dir, name)
    os.makedirs(directory, exist_ok=True)
    return directory


def write_json(data: Any, path: str) -> str:
    # json writes floats with repr, which round-trips exactly
    with open(path, "w") as f:
        json.dump(data, f, indent=2, sort_keys=True)
    return path


def echo_json(data: Any):
    click.echo(json.dumps(data, indent=2, sort_keys=True))


def write_manifest(
    name: str,
    command: Command,
    directory: str,
    artifacts: Iterable[str],
    config_paths: Iterable[str] = (),
) -> str:
    """Record what a command produced next to its artifacts."""
    manifest = ExperimentManifest(
        name=name,
        command=command,
        output_dir=directory,
        config_paths=tuple(config_paths),
        artifacts=tuple(os.path.relpath(a, directory) for a in artifacts),
        version=__version__,
    )
    path = write_json(
        ExperimentManifestSchema().dump(manifest), os.path.join(directory, MANIFEST_FILE)
    )
    logger.info(f"{command.value}: wrote {len(manifest.artifacts)} artifacts to {directory}")
    return path

