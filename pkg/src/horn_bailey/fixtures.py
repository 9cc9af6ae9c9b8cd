"""Loader for the shipped reference expressions.

Files live in the package's ``fixtures`` directory (overridable with the
``HORN_FIXTURES`` environment variable), one expression per ``<name>.expr``.
"""
from __future__ import annotations

import os
from functools import lru_cache
from pathlib import Path
from typing import Dict, Optional, Union

from .exact import MultiPoly, RationalFunction
from .parser import parse_expression, parse_ratfunc

FIXTURE_NAMES = tuple(
    f"{fam}_{part}" for fam in ("h4", "h1", "h5") for part in ("c3", "c4", "c5", "r2", "r3")
) + ("h5_relation",)

ENV_VAR = "HORN_FIXTURES"


def fixture_dir(override: Optional[Union[str, Path]] = None) -> Path:
    if override is not None:
        return Path(override)
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "fixtures"


def fixture_text(name: str, directory: Optional[Union[str, Path]] = None) -> str:
    path = fixture_dir(directory) / f"{name}.expr"
    if not path.is_file():
        raise FileNotFoundError(f"fixture {name!r} not found at {path}")
    return path.read_text()


@lru_cache(maxsize=None)
def _load(path: str) -> RationalFunction:
    return parse_ratfunc(Path(path).read_text())


def load_fixture(name: str, directory: Optional[Union[str, Path]] = None) -> RationalFunction:
    path = fixture_dir(directory) / f"{name}.expr"
    if not path.is_file():
        raise FileNotFoundError(f"fixture {name!r} not found at {path}")
    return _load(str(path))


def load_fixture_expression(name: str, directory=None) -> Union[MultiPoly, RationalFunction]:
    return parse_expression(fixture_text(name, directory))


def load_all(directory=None) -> Dict[str, RationalFunction]:
    return {name: load_fixture(name, directory) for name in FIXTURE_NAMES}
