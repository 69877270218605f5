"""Multimode HOM device (MHD) networks.

Build generators and tunable networks ``D_m(theta)``, compute exact
two-photon statistics for scattershot inputs, model the source, and
decompose the networks into beam splitters.
"""
from .decomposition import CircuitPlan, TwoLevelStep, decompose, recompose
from .generator import Generator, build, validate
from .matrix_core import BACKEND, permanent
from .network import InputPair, MHDNetwork, build_network, theta_dip
from .scattershot import SourceParams, run_experiment
from .two_photon_stats import (
    OutputOutcome,
    closed_form_pAB,
    coincidence_probability,
    grouping,
    map_phi_to_theta,
    map_theta_to_phi,
)

__version__ = "0.1.0"
