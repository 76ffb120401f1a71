"""Constraint-based causal discovery under latent confounders and
selection bias: an anytime iterative PAG learner, an FCI baseline,
perfect-oracle and Fisher-z CI tests, benchmark generation and metrics."""

from .citest import CiError, CiTester, Dataset, FisherZCiTester, OracleCiTester
from .fci import FciTrace, fci, pc_skeleton, possible_d_sep
from .graphs import GraphError, Mark, MixedGraph, NodePartition, SepsetMap
from .icd import (CandidateSet, IcdConfig, PdsTree, build_pds_tree,
                  compute_nmax, enumerate_icd_sep, icd, icd_iteration)
from .metrics import (SkeletonConfusion, ground_truth_pag,
                      orientation_accuracy, skeleton_confusion)
from .orientation import (OrientationError, RuleSetMode, apply_rules,
                          orient_v_structures, reset_to_circles)
from .separation import (SeparationError, ancestors_of, d_separated,
                         dag_to_mag, m_separated, validate_mag)
from .simgen import GenConfig, Sem, make_sem, random_dag, sample_sem

__version__ = "0.1.0"
