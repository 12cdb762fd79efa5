"""Catalog, theorem-replay suite, serialization, cache and command line."""

from .catalog import CatalogEntry, builtin_catalog, row_module
from .checks import CHECKS, Skip, register, singular_simple_check
from .suite import report_json, report_text, run_suite, search_continuous_transfer
from .textio import FormatError, Structures, load, parse, write_module, write_ring
