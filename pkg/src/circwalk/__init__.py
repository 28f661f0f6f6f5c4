"""Circulant quantum walks on graphs with tails and their optical blow-up walks."""

from .blowup import BlowupGraph, OpticalCircuit, blow_up, compile_circuit, emit_netlist, load_netlist, verify_two_regular
from .coins import (
    Coin2,
    CirculantCoin,
    CoinSpec,
    circulant,
    coin_assignment,
    coin_with_real_d,
    hadamard,
    random_coin,
    validate_coin,
)
from .graph import Labeling, SymmetricDigraph, build_graph, complete_graph, default_labeling, validate_labeling
from .presets import load_preset
from .stationary import (
    ImplementabilityVerdict,
    InternalSystem,
    StationaryResult,
    assemble_circulant,
    assemble_internal,
    assemble_optical,
    check_implementation,
    check_symmetry_breaking,
    kernel_basis,
    kn_kernel_dim,
    solve_stationary,
)
from .walk import (
    CirculantWalk,
    ConvergenceReport,
    IslandWalk,
    OpticalWalk,
    SimConfig,
    WalkState,
    relative_probability,
    run_until_converged,
    step_circulant,
    step_optical,
)

__version__ = "0.1.0"
