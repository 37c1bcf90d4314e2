"""Solver package: interface reconstruction, Euler splitting, cases and time integration."""
from .reconstruction import Wind, reconstruct_interface, reconstruct_grid
from .euler import steger_warming_split, characteristic_project, characteristic_unproject
from .cases import CaseTag, CaseConfig, exact_solution
from .integrators import Integrator
from .solver import FieldState, advance, run_case, error_norms, reference_solution, sample_reference

__all__ = [
    'Wind', 'reconstruct_interface', 'reconstruct_grid',
    'steger_warming_split', 'characteristic_project', 'characteristic_unproject',
    'CaseTag', 'CaseConfig', 'exact_solution', 'Integrator',
    'FieldState', 'advance', 'run_case', 'error_norms', 'reference_solution', 'sample_reference',
]
