"""Complete 1/sqrt(2)-EFX allocations for additive (2, inf)-bounded instances."""

from .engine import RunConfig, RunReport, RuleEvent, basic_feasible_allocation, replay, run
from .envy_graph import build_graph, decompose_cycles, in_g_alpha
from .errors import (BudgetExceededError, DomainError, EngineBugError, GenerationError,
                     InvalidInstanceError, MalformedInputError, NonTerminationError,
                     StructureError, TheoremViolationError)
from .generate import GenConfig, generate
from .model import (AllocationState, Instance, Verdict, Witness, bundle_value, relevant_to,
                    relevant_to_pair, state_partition_check)
from .oracle import best_alpha_squared, exists_efx_extension
from .two_agent import TwoAgentProblem, complete_two_agent
from .verify import Alpha, Beta, check_properties, efx_factor_squared, is_alpha_efx, strongly_envies

__version__ = "0.1.0"
