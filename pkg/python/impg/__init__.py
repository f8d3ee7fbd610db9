"""impg: compiler, checker and forest VM for IMP(G) programs.

Programs over a distributive signature are parsed, type-checked against
flat normal forms of their objects, compiled to code for a forest machine
and executed there. A structured-value evaluator and a single-call normal
form transformer serve as independent references for testing.
"""

from .callnf import CallForm, normalize, normalize_def
from .compiler import CompiledProgram, compile_arrow, compile_program, elaborate
from .config import DEFAULT_BUDGET, Settings
from .errors import (
    AmbiguityError, BudgetExhausted, CompileError, ConfigError, DispatchError, ExecutionError, IllTypedData,
    ImpError, ImpSyntaxError, InitReached, TypeMismatch, UnresolvedName, UninhabitedType,
)
from .forest import Leaf, Node, check_data, format_forest, mk_node
from .objects import flatten, to_obj
from .refeval import eval_ref, rep, unrep
from .syntax import format_arrow, format_obj, parse_data, parse_program, print_program
from .typecheck import tc_data, tc_program
from .vm import execute, run_arrow

__version__ = "0.1.0"

__all__ = [
    "AmbiguityError",
    "BudgetExhausted",
    "CallForm",
    "CompileError",
    "CompiledProgram",
    "ConfigError",
    "DEFAULT_BUDGET",
    "DispatchError",
    "ExecutionError",
    "IllTypedData",
    "ImpError",
    "ImpSyntaxError",
    "InitReached",
    "Leaf",
    "Node",
    "Settings",
    "TypeMismatch",
    "UninhabitedType",
    "UnresolvedName",
    "check_data",
    "compile_arrow",
    "compile_program",
    "elaborate",
    "eval_ref",
    "execute",
    "flatten",
    "format_arrow",
    "format_forest",
    "format_obj",
    "mk_node",
    "normalize",
    "normalize_def",
    "parse_data",
    "parse_program",
    "print_program",
    "rep",
    "run_arrow",
    "tc_data",
    "tc_program",
    "to_obj",
    "unrep",
]
