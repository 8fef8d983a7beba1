"""
Paquete de módulos para PilaLPR
"""

from .errores import (
    ErrorPilaLPR,
    ErrorValidacion,
    ErrorDistribucion,
    ErrorTraza,
    ErrorParametros,
    ErrorCapacidad,
    ErrorEspacioEstados,
    ErrorConvergencia
)

from .moddist import (
    StackDistribution,
    LruStack,
    Trace,
    build_distribution,
    lru_update,
    make_rng,
    sample_depth,
    sample_depths,
    generate_trace,
    trace_from_depths,
    depths_from_trace,
    read_distribution,
    write_distribution,
    read_stack,
    read_trace,
    write_trace
)

from .modsegmentos import (
    KLParams,
    Segmentation,
    segmentation,
    profit_rates,
    kl_for_capacity,
    brute_force_kl,
    ev_costs,
    sep_hull_oracle
)

from .modpoliticas import (
    SimResult,
    PoliticaLRU,
    PoliticaMRU,
    PoliticaFIFO,
    PoliticaKL,
    PoliticaLPR,
    PoliticaOPT,
    parse_policy,
    simulate,
    simulate_belady,
    kl_miss_rate,
    lpr_evict_choice
)

from .modpilarapida import (
    LprSimulator,
    OraculoIngenuo,
    MissCurve,
    new_simulator,
    step,
    naive_oracle_step,
    miss_curve
)

from .modcontrol import (
    FiniteMdp,
    HorizonTable,
    BellmanC2Solution,
    build_mdp,
    dp_optimal,
    dp_state_only,
    policy_cost,
    relative_value_iteration,
    bellman_c2,
    build_c2_chain,
    counterexample_check,
    dp_dependent
)

from .modasignacion import (
    CharacteristicGenerator,
    SepList,
    Rmop,
    Allocation,
    lrusm_cg,
    scalarized_solve,
    sep_sweep,
    simulate_item,
    greedy_allocate,
    partition_buffer
)

from .modcotas import (
    QuasiUniform,
    l_opt_term,
    l_opt,
    lpr_miss_rate,
    quasi_uniform_transform,
    chi_upper_bound,
    empirical_chi,
    bound_report
)

from .modreportes import ReportesManager
from .modexperimentos import ExperimentosManager

__all__ = [
    'ErrorPilaLPR', 'ErrorValidacion', 'ErrorDistribucion', 'ErrorTraza',
    'ErrorParametros', 'ErrorCapacidad', 'ErrorEspacioEstados', 'ErrorConvergencia',
    'StackDistribution', 'LruStack', 'Trace', 'build_distribution', 'lru_update',
    'make_rng', 'sample_depth', 'sample_depths', 'generate_trace', 'trace_from_depths',
    'depths_from_trace', 'read_distribution', 'write_distribution', 'read_stack',
    'read_trace', 'write_trace',
    'KLParams', 'Segmentation', 'segmentation', 'profit_rates', 'kl_for_capacity',
    'brute_force_kl', 'ev_costs', 'sep_hull_oracle',
    'SimResult', 'PoliticaLRU', 'PoliticaMRU', 'PoliticaFIFO', 'PoliticaKL',
    'PoliticaLPR', 'PoliticaOPT', 'parse_policy', 'simulate', 'simulate_belady',
    'kl_miss_rate', 'lpr_evict_choice',
    'LprSimulator', 'OraculoIngenuo', 'MissCurve', 'new_simulator', 'step',
    'naive_oracle_step', 'miss_curve',
    'FiniteMdp', 'HorizonTable', 'BellmanC2Solution', 'build_mdp', 'dp_optimal',
    'dp_state_only', 'policy_cost', 'relative_value_iteration', 'bellman_c2',
    'build_c2_chain', 'counterexample_check', 'dp_dependent',
    'CharacteristicGenerator', 'SepList', 'Rmop', 'Allocation', 'lrusm_cg',
    'scalarized_solve', 'sep_sweep', 'simulate_item', 'greedy_allocate', 'partition_buffer',
    'QuasiUniform', 'l_opt_term', 'l_opt', 'lpr_miss_rate', 'quasi_uniform_transform',
    'chi_upper_bound', 'empirical_chi', 'bound_report',
    'ReportesManager', 'ExperimentosManager'
]

__version__ = '1.0.0'
__author__ = 'PilaLPR Development Team'
