"""Bundled example programs, one ``.ir`` file per example."""
from __future__ import annotations

from importlib import resources

from ..ir import Program
from ..syntax import parse_program


def names() -> list[str]:
    return sorted(
        p.name[:-3] for p in resources.files(__name__).iterdir() if p.name.endswith(".ir")
    )


def source(name: str) -> str:
    return resources.files(__name__).joinpath(f"{name}.ir").read_text()


def load(name: str) -> Program:
    return parse_program(source(name))
