"""Finite-group arithmetic used by the decomposition."""

from .core import (FiniteGroup, CyclicGroup, PermGroup, ProductGroup, TableGroup, alternating,
                   closure, cyclic, dihedral, elementary_abelian, make_group, product, quaternion,
                   sl2, symmetric)
from .homs import (Endomorphism, Homomorphism, automorphism_order, check_homomorphism,
                   conjugation, constant_e, enumerate_endomorphisms, from_generator_images,
                   identity_map, image, isomorphism, kernel, pointwise_product, power_map,
                   product_endomorphism, quotient)
from .subgroups import (QuotientGroup, Subgroup, SubgroupGroup, center, commutator_subgroup,
                        conjugacy_classes, is_normal, normal_closure, subgroup_generated)
from .verbal import (GroupWord, SimpleFactorization, characteristic_simple_decomposition,
                     find_nontrivial_proper_verbal, is_fully_invariant, power_subgroup,
                     verbal_subgroup)
