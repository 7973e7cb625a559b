"""Tensor products of finite groups acting on each other.

Core objects: FiniteGroup (explicit Cayley tables), ActionSystem (a pair of
groups with mutual and self actions), and the box, Brown-Loday and
Inassaridze tensor products computed by coset enumeration.
"""

from __future__ import annotations

from .actions import (ActionSystem, CompatReport, Witness,
                      check_compatibility, check_full_compatibility,
                      check_half_compatibility, conjugation_action,
                      equal_actions_system, make_action_system, mirror_system,
                      trivial_action, verify_fact)
from .derived_structures import (CompSubgroupsReport, CrossedModuleData,
                                 HomologyResult, Prop23Report, Prop24Report,
                                 SurjectionReport, Thm211Report,
                                 check_comp_surjection, check_order_identities,
                                 check_thm211, comp_subgroups,
                                 crossed_module_phi, derivative, deviational,
                                 g_center, homology, verify_prop23,
                                 verify_prop24)
from .fp_engine import (CosetGroup, CosetTable, EnumLimits, InconclusiveError,
                        Presentation, cayley_presentation, coset_group,
                        subgroup_of_coset_group, todd_coxeter)
from .group_core import (CapabilityError, FiniteGroup, GroupHom, Subgroup,
                         ValidationError, automorphism_group, direct_product,
                         enumerate_homs, find_isomorphism, fingerprint,
                         hom_from_generator_images, is_isomorphic, quotient,
                         semidirect_product, subgroup_generated)
from .small_groups import (cyclic, dihedral, elementary_abelian, identify,
                           klein_four, quaternion, symmetric, trivial_group)
from .sweep import (PairCatalog, PairClassification, classify_pair,
                    fully_compatible_catalog, iter_systems)
from .tensor_builders import (TensorResult, TensorSpec, Thm42Report,
                              box_tensor_presentation, compute_tensor,
                              eta_presentation, inassaridze_presentation,
                              verify_thm42)

__version__ = "0.1.0"
