"""Contextual point-line geometries from finite-index subgroups of two-generator groups."""

from .cosets import CosetTable, table_from_perms, todd_coxeter, transversal
from .driver import ScanOptions, analyze, scan
from .geometry import Geometry
from .lowindex import low_index_classes
from .permgrp import PermGroup
from .words import Presentation, parse_presentation, parse_word

__all__ = ["CosetTable", "Geometry", "PermGroup", "Presentation", "ScanOptions", "analyze",
           "low_index_classes", "parse_presentation", "parse_word", "scan", "table_from_perms",
           "todd_coxeter", "transversal"]
__version__ = "0.1.0"
