"""Ready-made bundles for every worked example, with golden fixtures."""

from .base import Fixture, PresetBundle, PresetError
from .catalog import PRESET_IDS, load_preset, make_group_lattice

__all__ = ["Fixture", "PresetBundle", "PresetError", "PRESET_IDS",
           "load_preset", "make_group_lattice"]
