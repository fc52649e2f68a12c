"""A possibilistic model that satisfies every boolean marginal condition but
is the support of no probability model, and its Bell-type doubling.

Run:  python3 demos/02_model_s_and_bellization.py
"""
from nspoly import corpus
from nspoly.bellize import bellize_model
from nspoly.contextuality import (
    is_minimal_boolean_ns,
    is_strongly_contextual,
    realizability_certificate,
)
from nspoly.model import check_no_signalling

s = corpus.model_s()
for ctx in s.scenario.contexts:
    print(" ".join(ctx), "->", [a.label() for a in s.possible_sections(ctx)])

print("boolean no-signalling:", not check_no_signalling(s))
print("strongly contextual:", is_strongly_contextual(s)[0])
print("minimal among boolean no-signalling models:", is_minimal_boolean_ns(s))

cert = realizability_certificate(s)
print("realizable:", cert.realizable)
# With normalization dropped the consistency equations still force zero mass
# on every possible section, so not even a scaled-down distribution exists.
print("largest value of any coordinate on the homogeneous cone:", max(cert.cone_maxima))

sb = bellize_model(s)
print(f"\ndoubled model: {len(sb.scenario.variables)} variables, {len(sb.scenario.contexts)} contexts")
for ctx in [("A|1", "A|2"), ("A|1", "B|2"), ("B|1", "A|2"), ("C|1", "D|2")]:
    print(" ".join(ctx), "->", [a.label() for a in sb.possible_sections(ctx)])
print("equal to the corpus listing:", sb == corpus.model_s_bell())
print("strongly contextual:", is_strongly_contextual(sb)[0])
print("realizable:", realizability_certificate(sb).realizable)
