"""Exact characteristic and matching polynomials of trees, certified energies,
and subdivision-family energy comparisons."""

from .charpoly import char_poly_pair, matching_counts, phi, phi_tilde
from .energy import DominanceResult, EnergyValue, classify_dominance, energy, energy_diff_coulson
from .enumeration import enumerate_trees
from .errors import TreeEnergyError
from .extremal import VerificationReport, verify_all, verify_theorem
from .graph import Forest, build, parse_forest, parse_spec, subdivide
from .poly import ExactPoly
from .quasiorder import Relation, compare, compare_forests, family_compare_double, family_compare_single
from .ranking import rank_by_energy

__all__ = [
    "DominanceResult",
    "EnergyValue",
    "ExactPoly",
    "Forest",
    "Relation",
    "TreeEnergyError",
    "VerificationReport",
    "build",
    "char_poly_pair",
    "classify_dominance",
    "compare",
    "compare_forests",
    "energy",
    "energy_diff_coulson",
    "enumerate_trees",
    "family_compare_double",
    "family_compare_single",
    "matching_counts",
    "parse_forest",
    "parse_spec",
    "phi",
    "phi_tilde",
    "rank_by_energy",
    "subdivide",
    "verify_all",
    "verify_theorem",
]
