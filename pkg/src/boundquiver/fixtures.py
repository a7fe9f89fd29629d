"""Bundled example algebras ``FX1`` to ``FX5``."""
from __future__ import annotations

from functools import lru_cache
from importlib import resources
from typing import Tuple

from .algebra import BoundQuiverAlgebra
from .description import AlgebraDescription, parse

NAMES = ("FX1", "FX2", "FX3", "FX4", "FX5")


def fixture_text(name: str) -> str:
    if name.upper() not in NAMES:
        raise KeyError(f"unknown fixture {name!r}")
    return resources.files("boundquiver.data").joinpath(f"{name.lower()}.alg").read_text()


def fixture_description(name: str) -> AlgebraDescription:
    return parse(fixture_text(name))


@lru_cache(maxsize=None)
def fixture(name: str) -> BoundQuiverAlgebra:
    """The algebra of fixture ``name`` over the rationals (cached)."""
    return fixture_description(name).build()


def fixture_over(name: str, p: int) -> BoundQuiverAlgebra:
    """Fixture ``name`` with its field replaced by ``F_p`` (``p=0`` for the rationals)."""
    desc = fixture_description(name)
    desc.field_p = p or None
    return desc.build()


def fixture_pair(name: str) -> Tuple[AlgebraDescription, BoundQuiverAlgebra]:
    desc = fixture_description(name)
    return desc, desc.build()
