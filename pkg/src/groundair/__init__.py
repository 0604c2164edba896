"""Energy-aware routing for a UGV that ferries and recharges a surveying UAV."""
from .model import DEFAULT_LEVELS, EnergyState, MissionInstance, VehicleParams, allocation_energy, validate_instance
from .simulator import Failure, Plan, simulate, simulate_naive
from .tsp import CapacityError, Tour, solve_auto, solve_exact, solve_heuristic
from .mcts import MctsConfig, SearchResult, search
from .baselines import brute_force, naive, tsp_dfs

__version__ = "0.1.0"
