"""Model builders and closed-form oracles."""

from .hubbard import (
    BOUND_CONSTANT,
    appendix_bound_check,
    hubbard_chain,
    hubbard_gdcm_analytic,
    hubbard_lambda_analytic,
    hubbard_sector,
)
from .lattice import GraphModel, KagomeLattice, read_edge_list, write_edge_list
from .nlevel import kagome_localized_state, kagome_model, nlevel_gdcm_formula, nlevel_model
from .spin import (
    frustration_free_dimer,
    ising_dimer,
    ising_dimer_density_oracle,
    ising_dimer_energy_oracle,
    ising_dimer_gdcm_oracle,
)

__all__ = [
    "BOUND_CONSTANT",
    "GraphModel",
    "KagomeLattice",
    "appendix_bound_check",
    "frustration_free_dimer",
    "hubbard_chain",
    "hubbard_gdcm_analytic",
    "hubbard_lambda_analytic",
    "hubbard_sector",
    "ising_dimer",
    "ising_dimer_density_oracle",
    "ising_dimer_energy_oracle",
    "ising_dimer_gdcm_oracle",
    "kagome_localized_state",
    "kagome_model",
    "nlevel_gdcm_formula",
    "nlevel_model",
    "read_edge_list",
    "write_edge_list",
]
