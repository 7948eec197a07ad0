"""Relative presentations, relative area and Dehn functions, and van Kampen
diagram surgery for HNN-extensions and amalgamated products."""
from importlib.resources import files

from .words import Letter, normalize, parse_word, render
from .presentations import (
    RelativePresentation,
    amalgam,
    free_product,
    hnn_extension,
    load,
    save,
)
from .area import relative_area, word_problem, dehn_sample, well_definedness_probe
from .growth import GrowthTable, superadditive_closure, preceq_fit, theorem_bound_check

__version__ = "0.1.0"


def fixture_path(name: str):
    """Path of a shipped fixture file (e.g. ``"zxz.rpres"``)."""
    return files(__package__) / "data" / name


def load_fixture(name: str) -> RelativePresentation:
    if "." not in name:
        name += ".rpres"
    return load(fixture_path(name))
