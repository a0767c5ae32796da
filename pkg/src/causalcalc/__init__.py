"""Typed string-diagram calculus of causal processes with exact subprobability semantics."""

from .errors import (BadCode, BadMatrix, BadParam, BadWeight, CalculusError,
                     InvalidEvent, NeedProbes, NotAFunction, NotFinite,
                     TermSyntaxError, TypeMismatch, WrongSignature)
from .fixpoint import (FixpointResult, build_self_confirming,
                       verify_self_confirming)
from .modeling import (ParamModel, SteeringMap, prediction, specialize, steer,
                       synthesize_model)
from .semantics import (DEFAULT_FUEL, Kernel, SubDist, data_services,
                        dump_kernel, evaluate, indistinguishable,
                        is_comonoid_homomorphism, is_function,
                        is_function_rows, kernel_apply, kernel_par,
                        kernel_seq)
from .syntax import parse, serialize
from .terms import (Apply, Const, Copy, Del, Id, Lit, Mix, Par, Seq, Spec,
                    Swap, Term, normalize_term, typecheck)
from .types import OMEGA, OMEGA_T, UNIT, Enum, TypeExpr, enum, normalize_type, tensor

__version__ = "0.1.0"
