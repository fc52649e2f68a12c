"""The 18-vector Kochen-Specker configuration as a possibilistic model.

Each of the nine contexts holds four variables and allows exactly the
sections in which one variable reads 1.  Every variable sits in two contexts,
so any global assignment would have to place an odd number (nine) of ones
in a count that is necessarily even.  The backtracking search confirms it.

Run:  python3 demos/03_kochen_specker.py
"""
import time

from nspoly import corpus
from nspoly.contextuality import consistent_global_assignment, is_strongly_contextual
from nspoly.scenario import Assignment

model = corpus.ks18_model()
sc = model.scenario
print(f"{len(sc.variables)} variables, {len(sc.contexts)} contexts, {sc.n_cells} cells")
for ctx in sc.contexts:
    print("".join(ctx), [a.label() for a in model.possible_sections(ctx)])

start = time.perf_counter()
verdict, witness = is_strongly_contextual(model)
print(f"strongly contextual: {verdict} (search took {time.perf_counter() - start:.3f} s)")

# Fixing a single section does not help either.
first = sc.contexts[0]
print("extension of", first, "= 1000:", consistent_global_assignment(model, Assignment(first, tuple("1000"))))
