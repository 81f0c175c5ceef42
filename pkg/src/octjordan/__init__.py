"""Octonionic and twisted-octonionic eigenvalue problems on J3(O).

Exact randomized verification of the degeneracy-locus identities, the
symmetry-group actions and the automorphism dimension bound, plus numeric
corank sampling and a constructive reduction of generic points to the
identity under the twisted symmetry group.
"""

__version__ = "0.1.0"
