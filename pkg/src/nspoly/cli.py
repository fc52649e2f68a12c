"""Command-line entry point: ``nspoly <command> ...``.

Inputs are document files or corpus names.  Exit codes: 0 when the property
holds (or the command succeeded), 1 when it fails, 2 for usage or parse errors.
"""
from __future__ import annotations

import argparse
import logging
import os
import random
import sys
from fractions import Fraction

from . import corpus
from .bellize import bellize_model
from .contextuality import (
    MAX_GLOBAL_ASSIGNMENTS,
    GuardError,
    classify_vertices,
    is_local,
    is_logically_contextual,
    is_strongly_contextual,
    realizability_certificate,
)
from .documents import (
    DocumentError,
    dumps,
    format_rational,
    lattice_to_doc,
    lattice_to_dot,
    load_document,
    loads,
    model_to_doc,
    report,
    section_key,
)
from .lattice import OracleTooLarge, basic_solutions_oracle, enumerate_vertices, support_lattice
from .model import (
    EmpiricalModel,
    ModelError,
    check_no_signalling,
    check_normalization,
    possibilistic_collapse,
    support_bits,
)
from .polytope import ConstraintSystem, PolytopeError, assemble_constraints, carrier_face
from .scenario import Scenario, ScenarioError

log = logging.getLogger("nspoly")


class UsageError(Exception):
    pass


def _load(ref: str):
    if os.path.isfile(ref):
        with open(ref, encoding="utf-8") as fh:
            return load_document(loads(fh.read()))
    try:
        entry = corpus.get(ref)
    except KeyError as exc:
        raise UsageError(f"{ref}: neither a file nor a corpus entry ({exc.args[0]})") from None
    return entry.model if entry.model is not None else entry.scenario


def _model(ref: str) -> EmpiricalModel:
    obj = _load(ref)
    if not isinstance(obj, EmpiricalModel):
        raise UsageError(f"{ref}: expected a model document")
    return obj


def _system(ref: str) -> ConstraintSystem:
    obj = _load(ref)
    if isinstance(obj, EmpiricalModel):
        obj = obj.scenario
    if isinstance(obj, Scenario):
        return assemble_constraints(obj)
    return obj


def _scenario_of(ref: str) -> Scenario | None:
    obj = _load(ref)
    if isinstance(obj, EmpiricalModel):
        return obj.scenario
    return obj if isinstance(obj, Scenario) else None


def _assignment(a) -> dict:
    return dict(zip(a.domain, a.values))


def _vec(xs) -> list[str]:
    return [format_rational(v) for v in xs]


def cmd_validate(args):
    model = _model(args.input)
    norm = [{"context": list(v.context), "sum": str(v.total) if model.is_boolean else format_rational(v.total)}
            for v in check_normalization(model)]
    ns = []
    for v in check_no_signalling(model):
        fmt = (lambda x: str(int(x))) if model.is_boolean else format_rational
        ns.append({"context": list(v.context), "other": list(v.other), "shared": _assignment(v.shared),
                   "left": fmt(v.left), "right": fmt(v.right)})
    ok = not norm and not ns
    return report("validate", ok, normalization_violations=norm, signalling_violations=ns), 0 if ok else 1


def cmd_collapse(args):
    return model_to_doc(possibilistic_collapse(_model(args.input))), 0


def cmd_vertices(args):
    system = _system(args.input)
    vertices = basic_solutions_oracle(system) if args.oracle else enumerate_vertices(system)
    out = []
    classes = None
    if args.classify:
        scenario = _scenario_of(args.input)
        if scenario is None:
            raise UsageError("--classify needs a scenario or model input")
        classes = [c for _, c in classify_vertices(scenario, vertices)]
    for k, v in enumerate(vertices):
        item = {"support": support_bits(v.support, system.n), "point": _vec(v.point)}
        if classes:
            item["class"] = classes[k].tag
            if classes[k].witness is not None:
                item["witness"] = _assignment(classes[k].witness)
        out.append(item)
    summary = {"count": len(out)}
    if classes:
        summary["LD"] = sum(c.tag == "LD" for c in classes)
        summary["MSC"] = sum(c.tag == "MSC" for c in classes)
    return report("vertices", None, vertices=out, **summary), 0


def cmd_lattice(args):
    system = _system(args.input)
    lattice = support_lattice(system)
    if args.dot:
        return lattice_to_dot(lattice), 0
    return lattice_to_doc(lattice), 0


def cmd_carrier(args):
    model = _model(args.input)
    system = assemble_constraints(model.scenario)
    face = carrier_face(system, model.entries)
    return report("carrier", None, support=support_bits(face.support, system.n),
                  dimension=face.dimension, witness=_vec(face.witness)), 0


def cmd_dim(args):
    obj = _load(args.input)
    if isinstance(obj, EmpiricalModel) and not obj.is_boolean:
        system = assemble_constraints(obj.scenario)
        return report("dim", None, target="carrier face", dimension=carrier_face(system, obj.entries).dimension), 0
    system = _system(args.input)
    return report("dim", None, target="polytope", dimension=system.dimension, cells=system.n, rank=system.rank), 0


def cmd_realizable(args):
    model = _model(args.input)
    if not model.is_boolean:
        model = possibilistic_collapse(model)
    cert = realizability_certificate(model)
    fields = {"verdict": "realizable" if cert.realizable else "NOT realizable",
              "closure_maxima": _vec(cert.closure.maxima), "cone_maxima": _vec(cert.cone_maxima)}
    if cert.witness is not None:
        fields["witness"] = model_to_doc(cert.witness)
    return report("realizable", cert.realizable, **fields), 0 if cert.realizable else 1


def cmd_sc(args):
    model = _model(args.input)
    sc, g = is_strongly_contextual(model)
    lc, where = is_logically_contextual(model)
    fields = {"strongly_contextual": sc, "logically_contextual": lc}
    if g is not None:
        fields["global_witness"] = _assignment(g)
    if where is not None:
        fields["unextendable_section"] = {"context": list(where[0]), "section": section_key(model.scenario, where[1])}
    return report("sc", sc, **fields), 0 if sc else 1


def cmd_local(args):
    model = _model(args.input)
    dec = is_local(model, limit=args.max_assignments)
    if dec is None:
        return report("local", False), 1
    parts = [{"assignment": _assignment(g), "weight": format_rational(w)} for g, w in zip(dec.assignments, dec.weights)]
    return report("local", True, decomposition=parts), 0


def cmd_bellize(args):
    model = _model(args.input)
    if not model.is_boolean:
        model = possibilistic_collapse(model)
    return model_to_doc(bellize_model(model)), 0


def cmd_corpus(args):
    if not args.name:
        return report("corpus", None, entries=[{"name": n, "note": corpus.get(n).note} for n in corpus.names()]), 0
    try:
        entry = corpus.get(args.name)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    if entry.model is not None:
        return model_to_doc(entry.model), 0
    from .documents import scenario_to_doc

    return scenario_to_doc(entry.scenario), 0


def cmd_proptest(args):
    """Randomized spot checks of the support-join law and collapse homomorphism."""
    from .model import RATIONAL, convex_combination, support_of

    rng = random.Random(args.seed)
    scenario = corpus.get(args.scenario).scenario
    system = assemble_constraints(scenario)
    vertices = enumerate_vertices(system)
    failures = 0
    for _ in range(args.trials):
        x, y = rng.choice(vertices), rng.choice(vertices)
        lam = Fraction(rng.randint(1, 9), 10)
        mx = EmpiricalModel(scenario, RATIONAL, x.point)
        my = EmpiricalModel(scenario, RATIONAL, y.point)
        mix = convex_combination([mx, my], [lam, 1 - lam])
        if support_of(mix.entries) != x.support | y.support or check_no_signalling(possibilistic_collapse(mix)):
            failures += 1
    return report("proptest", failures == 0, seed=args.seed, trials=args.trials, failures=failures), 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nspoly", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug (includes simplex tableaus)")
    parser.add_argument("-o", "--out", help="write the output document here instead of stdout")
    parser.add_argument("--max-assignments", type=int, default=MAX_GLOBAL_ASSIGNMENTS,
                        help="guard on |O|^|X| for deterministic-model enumeration")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, *, target="input"):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        if target:
            p.add_argument(target, help="document file or corpus name")
        return p

    add("validate", cmd_validate, "check normalization and no-signalling")
    add("collapse", cmd_collapse, "possibilistic collapse of a model")
    p = add("vertices", cmd_vertices, "enumerate vertices")
    p.add_argument("--classify", action="store_true", help="tag vertices LD or MSC")
    p.add_argument("--oracle", action="store_true", help="use exhaustive basis search")
    p = add("lattice", cmd_lattice, "support lattice (= face lattice)")
    p.add_argument("--dot", action="store_true", help="emit a DOT graph")
    add("carrier", cmd_carrier, "carrier face of a model")
    add("dim", cmd_dim, "dimension of a polytope or of a model's carrier face")
    add("realizable", cmd_realizable, "is a possibilistic model the support of a probabilistic one?")
    add("sc", cmd_sc, "strong and logical contextuality")
    add("local", cmd_local, "local hidden-variable decomposition")
    add("bellize", cmd_bellize, "Bell-type doubling of a pairwise model")
    p = add("corpus", cmd_corpus, "list or dump corpus entries", target=None)
    p.add_argument("name", nargs="?")
    p = add("proptest", cmd_proptest, "randomized property spot checks", target=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--scenario", default="bell")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=[logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)],
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        out, code = args.func(args)
    except (DocumentError, UsageError, ScenarioError, ModelError, PolytopeError, GuardError, OracleTooLarge) as exc:
        print(f"nspoly {args.command}: {exc}", file=sys.stderr)
        return 2
    text = out if isinstance(out, str) else dumps(out)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
