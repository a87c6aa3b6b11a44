"""Odd partitions of an interval, their decreasing enumeration, and the
Neumann-Poincaré spectra of prolate spheroids that realise them."""
from .analysis import (DecayFit, GammaProbe, TauBracket, decay_fit, fit_sequence,
                       gamma_limit_probe, liminf_probe, tau_bracket)
from .errors import *  # noqa: F401,F403
from .families import (equi_family, equi_row, family_from_json, farey_family, farey_row,
                       parse_family_spec, random_odd_family, spheroid_family, spheroid_row)
from .np_spectrum import (SpheroidShape, WeylReport, np_eigenvalue, nystrom_oracle,
                          solve_xi0, spectral_row, spectrum_table, weyl_coefficient,
                          willmore_energy)
from .partition import (DecreasingStream, PartitionFamily, PartitionRow, c_sequence,
                        enumerate_family, row_holder_margin, validate_row)
from .specfun import LegendrePair, legendre_table, zeta

__version__ = "0.1.0"
