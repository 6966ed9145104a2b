"""Executable Neciporuk lower bounds.

Subpackages by role:

* :mod:`necip.boolfn`    -- truth tables, restrictions, subfunction counts;
* :mod:`necip.families`  -- Element Distinctness and Indirect Storage Access;
* :mod:`necip.programs`  -- branching programs and their acceptance modes;
* :mod:`necip.formulas`  -- binary formulas over all sixteen 2-ary gates;
* :mod:`necip.builders`  -- explicit size-bounded constructions;
* :mod:`necip.neciporuk` -- bounding functions, bound reports, partition search;
* :mod:`necip.oracle`    -- brute-force semantic counts and minimum sizes;
* :mod:`necip.cli`       -- the ``necip`` command-line tool.
"""

__version__ = "0.1.0"

from .boolfn import (  # noqa: F401
    PartialAssignment,
    Partition,
    TruthTable,
    count_subfunctions,
    hamming_ball_volume,
)
from .errors import BudgetExceeded, StructureError  # noqa: F401
from .families import FunctionSpec, parse_function_spec  # noqa: F401
