"""Command-line front end.

Exit codes: 0 on success, 1 when a law or property check fails, 2 for
input errors (parse failures, invalid structures, bad shapes).  All
output is deterministic and sorted; timing goes to stderr only.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import equivalence, exreg, formats, harness
from .poset import AntisymmetryViolation, NotMonotone
from .relation import (
    DomainMismatch,
    NotAMap,
    NotExactFork,
    NotWeakening,
    ShapeMismatch,
)
from .exreg import (
    AdjunctionFailed,
    BimoduleLawFailed,
    ConeNotIncluded,
    ExRegMorphism,
    ExRegObject,
    NotCongruence,
    NotCongruenceOver,
    NotQMorphism,
)
from .formats import ParseError

INPUT_ERRORS = (
    ParseError,
    AntisymmetryViolation,
    NotMonotone,
    NotCongruence,
    NotCongruenceOver,
    DomainMismatch,
    ShapeMismatch,
    NotWeakening,
    FileNotFoundError,
    ValueError,
)
LAW_ERRORS = (
    BimoduleLawFailed,
    AdjunctionFailed,
    NotQMorphism,
    ConeNotIncluded,
    NotAMap,
    NotExactFork,
)


def _default_bound():
    try:
        return int(os.environ.get("EXREG_BOUND", "4"))
    except ValueError:
        return 4


class Emitter:
    """Writes named artifacts to a directory, or to stdout as sections."""

    def __init__(self, out_dir, stdout):
        self.out_dir = out_dir
        self.stdout = stdout
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)

    def emit(self, name, text):
        if self.out_dir:
            with open(os.path.join(self.out_dir, name), "w") as fh:
                fh.write(text)
        else:
            self.stdout.write(f"# file: {name}\n")
            self.stdout.write(text)

    def ref(self, name):
        return name


def _emit_object(em, obj, stem):
    em.emit(f"{stem}.poset", formats.serialize_poset(obj.X))
    em.emit(f"{stem}.exreg", formats.serialize_exreg_object(obj, em.ref(f"{stem}.poset")))


def _emit_morphism(em, R, stem, src_ref, tgt_ref):
    em.emit(f"{stem}.exreg", formats.serialize_exreg_morphism(R, src_ref, tgt_ref))


def _emit_tabulation(em, tab, src_ref, tgt_ref):
    _emit_object(em, tab.apex, "apex")
    _emit_morphism(em, tab.leg0, "leg0", em.ref("apex.exreg"), src_ref)
    _emit_morphism(em, tab.leg1, "leg1", em.ref("apex.exreg"), tgt_ref)


def _load_object(path):
    value = formats.load_exreg(path)
    if not isinstance(value, ExRegObject):
        raise ParseError(path, 1, "expected an object file")
    return value


def _load_morphism(path):
    value = formats.load_exreg(path)
    if not isinstance(value, ExRegMorphism):
        raise ParseError(path, 1, "expected a morphism file")
    return value


def cmd_poset(args, out):
    P = formats.load_poset(args.file)
    out.write(formats.serialize_poset(P))
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(formats.dot_poset(P))
    return 0


def cmd_rel(args, out):
    R = formats.load_rel(args.file)
    out.write(formats.serialize_rel(R, *_rel_refs(args.file)))
    out.write(f"# weakening-closed: {'yes' if R.is_weakening else 'no'}\n")
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(formats.dot_relation(R))
    return 0


def _rel_refs(path):
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                parts = line.split()
                return parts[1], parts[2]
    raise ParseError(path, 1, "empty relation file")


def cmd_exreg_check(args, out):
    value = formats.parse_exreg(open(args.file).read(), args.file)
    kind = "object" if isinstance(value, ExRegObject) else "morphism"
    out.write(f"# valid {kind}\n")
    return 0


def cmd_tabulate(args, out):
    phi = formats.load_rel(args.phi)
    src = _load_object(args.src)
    tgt = _load_object(args.tgt)
    tab = exreg.tabulate(phi, src, tgt)
    em = Emitter(args.out_dir, out)
    _emit_object(em, src, "src")
    _emit_object(em, tgt, "tgt")
    _emit_tabulation(em, tab, em.ref("src.exreg"), em.ref("tgt.exreg"))
    return 0


def cmd_factorize(args, out):
    R = _load_morphism(args.morphism)
    Q, M = exreg.factorize(R)
    em = Emitter(args.out_dir, out)
    _emit_object(em, Q.tgt, "image")
    src_ref = "src.exreg"
    tgt_ref = "tgt.exreg"
    _emit_object(em, R.src, "src")
    _emit_object(em, R.tgt, "tgt")
    _emit_morphism(em, Q, "so-part", src_ref, em.ref("image.exreg"))
    _emit_morphism(em, M, "ff-part", em.ref("image.exreg"), tgt_ref)
    return 0


def cmd_limit(args, out):
    em = Emitter(args.out_dir, out)
    if args.kind == "terminal":
        _emit_object(em, exreg.limit("terminal"), "terminal")
        return 0
    if args.kind == "product":
        A = _load_object(args.args[0])
        B = _load_object(args.args[1])
        tab = exreg.limit("product", A, B)
        _emit_object(em, A, "src0")
        _emit_object(em, B, "src1")
        _emit_tabulation(em, tab, em.ref("src0.exreg"), em.ref("src1.exreg"))
        return 0
    R = _load_morphism(args.args[0])
    S = _load_morphism(args.args[1])
    tab = exreg.limit(args.kind, R, S)
    _emit_object(em, R.src, "src0")
    _emit_object(em, S.src, "src1")
    _emit_tabulation(em, tab, em.ref("src0.exreg"), em.ref("src1.exreg"))
    return 0


def cmd_split(args, out):
    obj = _load_object(args.object)
    R = formats.load_rel(args.congruence)
    q, m = exreg.split_congruence(obj, R.pairs)
    em = Emitter(args.out_dir, out)
    _emit_object(em, obj, "base")
    _emit_object(em, q.tgt, "through")
    _emit_morphism(em, q, "quotient", em.ref("base.exreg"), em.ref("through.exreg"))
    em.emit(
        "section.rel",
        formats.serialize_rel(m.rel, em.ref("through.poset"), em.ref("base.poset")),
    )
    return 0


def cmd_present(args, out):
    obj = _load_object(args.object)
    pres = exreg.canonical_presentation(obj)
    em = Emitter(args.out_dir, out)
    _emit_object(em, obj, "base")
    _emit_object(em, pres.kernel, "kernel")
    _emit_object(em, exreg.gamma_object(obj.X), "carrier")
    _emit_morphism(em, pres.e0, "e0", em.ref("kernel.exreg"), em.ref("carrier.exreg"))
    _emit_morphism(em, pres.e1, "e1", em.ref("kernel.exreg"), em.ref("carrier.exreg"))
    _emit_morphism(
        em, pres.quotient, "quotient", em.ref("carrier.exreg"), em.ref("base.exreg")
    )
    return 0


def cmd_equiv(args, out):
    bound = args.bound if args.bound is not None else _default_bound()
    reports = []
    if args.what == "set-pos":
        F = equivalence.discrete_inclusion_functor()
        reports.append(equivalence.check_fully_order_faithful(F, bound))
        reports.append(equivalence.check_covering(F, min(bound, 4)))
        reports.append(equivalence.verify_characterization(F, min(bound, 4)))
    elif args.what == "ord":
        reports.append(equivalence.commutation_check(min(bound, 4)))
    elif args.what == "discrete":
        reports.append(equivalence.discrete_check(min(bound, 4)))
    for report in reports:
        out.write(report.render() + "\n")
    return 0 if all(r.passed for r in reports) else 1


def cmd_harness(args, out, err):
    if args.suite == "all":
        names = sorted(harness.SUITES)
    else:
        if args.suite not in harness.SUITES:
            raise harness.UnknownSuite(args.suite)
        names = [args.suite]
    cap = args.bound if args.bound is not None else _default_bound() + 1
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(
                pool.map(harness.run_suite, names, [args.trials] * len(names),
                         [args.seed] * len(names), [cap] * len(names))
            )
    else:
        reports = [harness.run_suite(n, args.trials, args.seed, cap) for n in names]
    failures = 0
    for report in reports:
        out.write(report.render() + "\n")
        err.write(f"# {report.name}: {report.wall_time:.3f}s\n")
        failures += len(report.failures)
    out.write(f"total: {len(reports)} suite(s), {failures} failure(s)\n")
    return 0 if failures == 0 else 1


def cmd_dot(args, out):
    if args.file.endswith(".rel"):
        text = formats.dot_relation(formats.load_rel(args.file))
    else:
        text = formats.dot_poset(formats.load_poset(args.file))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="posrel",
        description="relational calculus and exact-completion engine over finite posets",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("poset", help="validate and print a poset file")
    ps = p.add_subparsers(dest="action", required=True)
    pc = ps.add_parser("check")
    pc.add_argument("file")
    pc.add_argument("--dot")

    r = sub.add_parser("rel", help="validate and print a relation file")
    rs = r.add_subparsers(dest="action", required=True)
    rc = rs.add_parser("check")
    rc.add_argument("file")
    rc.add_argument("--dot")

    e = sub.add_parser("exreg", help="work with objects-with-congruence")
    es = e.add_subparsers(dest="action", required=True)
    ec = es.add_parser("check")
    ec.add_argument("file")
    for name, conf in (
        ("tabulate", ["phi", "src", "tgt"]),
        ("factorize", ["morphism"]),
        ("split", ["object", "congruence"]),
        ("present", ["object"]),
    ):
        alias = es.add_parser(name)
        for arg in conf:
            alias.add_argument(arg)
        alias.add_argument("--out-dir")
    el = es.add_parser("limit")
    el.add_argument("kind", choices=["terminal", "product", "inserter", "comma", "pullback"])
    el.add_argument("args", nargs="*")
    el.add_argument("--out-dir")

    for name, conf in (
        ("tabulate", ["phi", "src", "tgt"]),
        ("factorize", ["morphism"]),
        ("split", ["object", "congruence"]),
        ("present", ["object"]),
    ):
        top = sub.add_parser(name)
        for arg in conf:
            top.add_argument(arg)
        top.add_argument("--out-dir")

    lim = sub.add_parser("limit")
    lim.add_argument("kind", choices=["terminal", "product", "inserter", "comma", "pullback"])
    lim.add_argument("args", nargs="*")
    lim.add_argument("--out-dir")

    q = sub.add_parser("equiv")
    q.add_argument("what", choices=["set-pos", "ord", "discrete"])
    q.add_argument("--bound", type=int, default=None)

    h = sub.add_parser("harness")
    hs = h.add_subparsers(dest="action", required=True)
    hr = hs.add_parser("run")
    hr.add_argument("suite")
    hr.add_argument("--trials", type=int, default=100)
    hr.add_argument("--seed", type=int, default=0)
    hr.add_argument("--bound", type=int, default=None)
    hr.add_argument("--jobs", type=int, default=1)

    d = sub.add_parser("dot")
    d.add_argument("file")
    d.add_argument("-o", "--out")
    return parser


def dispatch(args, out, err):
    verb = args.verb
    if verb == "poset":
        return cmd_poset(args, out)
    if verb == "rel":
        return cmd_rel(args, out)
    if verb == "exreg":
        action = args.action
        if action == "check":
            return cmd_exreg_check(args, out)
        verb = action
    if verb == "tabulate":
        return cmd_tabulate(args, out)
    if verb == "factorize":
        return cmd_factorize(args, out)
    if verb == "limit":
        return cmd_limit(args, out)
    if verb == "split":
        return cmd_split(args, out)
    if verb == "present":
        return cmd_present(args, out)
    if verb == "equiv":
        return cmd_equiv(args, out)
    if verb == "harness":
        return cmd_harness(args, out, err)
    if verb == "dot":
        return cmd_dot(args, out)
    raise AssertionError(f"unhandled verb {verb}")  # pragma: no cover


def main(argv=None, stdout=None, stderr=None):
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return dispatch(args, out, err)
    except LAW_ERRORS as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    except harness.UnknownSuite as exc:
        err.write(f"error: unknown suite {exc}\n")
        return 2
    except INPUT_ERRORS as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
