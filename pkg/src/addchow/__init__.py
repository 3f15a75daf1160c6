"""Exact operator calculus on additive higher Chow cycles.

Modules:

* ``field``: rational functions over QQ, projective values, Mobius maps
* ``perm``: permutations, shuffles and the multiple-shuffle identities
* ``cycles``: point and Mobius-curve cycles, faces, delta and products
* ``forms``: Kahler differentials and the regulator
* ``mixedcx``: mixed complexes, cyclic homology, the Connes sequence
* ``verify``: the check suites driven by the command line
"""

__version__ = "0.1.0"
