"""blocklat: invariant partition lattices of finite permutation groups,
orthogonal/poset block structures, and generalised wreath products."""

from .partition import BinaryRelation, Partition, commutes, compose_relations, \
    is_refinement, is_uniform, join, meet
from .perm import CapExceeded, PermGroup, Permutation, action_from_json, \
    compose, coset_action, direct_product_product_action, \
    group_from_generators, group_from_json, group_to_json, induced_action, \
    kernel_on_parts, same_group, wreath_imprimitive
from .lattice import AbstractLattice, PartitionLattice
from .poset import Poset
from .blockstruct import OBS, AssociationScheme, ObsViolation, association_scheme, \
    cross, is_pbs, latin_square_obs, nest, pbs_from_poset, schemes_equal, \
    trivial_obs, validate_obs, verify_scheme
from .groupprops import InvariantLattice, PropertyReport, analyze, \
    invariant_partitions, is_ob, is_pb, is_preprimitive, is_primitive, \
    is_quasihamiltonian, is_quasiprimitive, is_stratifiable, \
    minimal_block_partition, orbitals, partition_orthogonal, regular_normal_ob, \
    subgroups_commute_via_partitions, two_closure
from .gwp import EmbeddingReport, GwpElement, GwpSpec, gstar, gwp_act, \
    gwp_element_from_json, gwp_element_to_json, gwp_generators, \
    gwp_intersection, gwp_inverse, gwp_membership, gwp_multiply, \
    gwp_properties, gwp_realize, interval_group, pb_obstruction, \
    semidirect_decomposition, verify_embedding

__version__ = "0.1.0"
