"""The support machinery works for any bounded standard-form system,
not only for no-signalling polytopes.

Here P = {x >= 0 : x0 + x1 + x2 = 1, x2 + x3 = 1/2}.

Run:  python3 demos/04_general_system.py
"""
from fractions import Fraction as F

from nspoly.documents import lattice_to_dot
from nspoly.lattice import (
    check_lattice_properties,
    compare_with_oracle,
    enumerate_vertices,
    face_lattice_oracle,
    support_lattice,
)
from nspoly.model import support_bits
from nspoly.polytope import UnboundedPolytopeError, support_closure, user_system

system = user_system([[1, 1, 1, 0], [0, 0, 1, 1]], [1, F(1, 2)])
print("dimension:", system.dimension)
for v in enumerate_vertices(system):
    print("vertex", support_bits(v.support, 4), [str(x) for x in v.point])

# Asking for x1 = 0 and x3 = 0 forces x2 = 1/2 and x0 = 1/2.
cl = support_closure(system, 0b0101)
print("closure of 1010:", support_bits(cl.support, 4), [str(x) for x in cl.witness])

lattice = support_lattice(system)
print("lattice nodes:", len(lattice), "| matches the face oracle:",
      compare_with_oracle(lattice, face_lattice_oracle(system)).ok,
      "| lattice checks:", check_lattice_properties(lattice).ok)
print(lattice_to_dot(lattice))

try:
    user_system([[1, -1]], [0])
except UnboundedPolytopeError as exc:
    print("rejected:", exc)
