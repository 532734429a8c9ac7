"""Load models from DSL text or JSON documents and write them back."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Annotated, Literal, Union

from pydantic import Field, TypeAdapter, ValidationError

from ..exception import ModelValidationError
from ..petri import TimedPetriNet
from ..psystem import TimedPSystem
from ..schemas import PetriNetDocument, PSystemDocument
from ..serializers import model_from_document, model_to_document
from .lexer import decode
from .parser import parse_model
from .printer import print_model

logger = logging.getLogger(__name__)

Model = Union[TimedPSystem, TimedPetriNet]
Format = Literal["dsl", "json"]

_DOCUMENTS: TypeAdapter = TypeAdapter(
    Annotated[
        Union[PSystemDocument, PetriNetDocument], Field(discriminator="kind")
    ]
)


def is_json(text: str) -> bool:
    """Return True when ``text`` looks like a JSON document."""
    return text.lstrip().startswith("{")


def load_model(source: Union[str, bytes]) -> Model:
    """Parse a model from DSL text or a JSON document."""
    text = decode(source)
    if not is_json(text):
        return parse_model(text)
    try:
        document = _DOCUMENTS.validate_json(text)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(part) for part in first["loc"]) or "document"
        raise ModelValidationError(
            f"Invalid model document at {where}: {first['msg']}"
        ) from None
    return model_from_document(document)


def load_file(path: Union[str, Path]) -> Model:
    """Read and parse a model file."""
    model = load_model(Path(path).read_bytes())
    logger.info("Loaded %s from %s", type(model).__name__, path)
    return model


def dump_model(model: Model, fmt: Format = "dsl") -> str:
    """Render a model as DSL text or as an indented JSON document."""
    if fmt == "json":
        return model_to_document(model).model_dump_json(indent=2) + "\n"
    return print_model(model)
