"""Walk through the no-signalling polytope of the two-party, two-setting scenario.

Run:  python3 demos/01_bell_polytope.py
"""
from collections import Counter

from nspoly import corpus
from nspoly.contextuality import classify_vertices, is_local
from nspoly.lattice import check_lattice_properties, enumerate_vertices, support_lattice
from nspoly.model import check_no_signalling, support_bits
from nspoly.polytope import assemble_constraints, carrier_face

scenario = corpus.bell_scenario()
system = assemble_constraints(scenario)
print(f"{scenario.n_cells} cells, {len(system.A)} equations of rank {system.rank}, dimension {system.dimension}")

# The quantum table from the corpus satisfies every marginal equation...
qm = corpus.bell_qm_model()
print("signalling violations in the quantum table:", check_no_signalling(qm))

# ...yet no mixture of deterministic assignments reproduces it.
print("local decomposition of the quantum table:", is_local(qm))
face = carrier_face(system, qm.entries)
print(f"its carrier face has support {support_bits(face.support, 16)} and dimension {face.dimension}")

vertices = enumerate_vertices(system)
tags = Counter(c.tag for _, c in classify_vertices(scenario, vertices))
print(f"{len(vertices)} vertices: {tags['LD']} deterministic, {tags['MSC']} strongly contextual")
for v, c in classify_vertices(scenario, vertices):
    if c.tag == "MSC":
        print("  a PR-type vertex:", " ".join(str(x) for x in v.point))
        break

lattice = support_lattice(system, vertices)
report = check_lattice_properties(lattice)
print(f"support lattice: {len(lattice)} nodes, maximal chains of length {report.chain_length}")
for name, holds in report.items():
    print(f"  {name}: {'yes' if holds else 'NO'}")
