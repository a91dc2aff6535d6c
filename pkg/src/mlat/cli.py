"""Command-line driver.

Exit codes: 0 success, 1 negative result or failed suite, 2 usage or input
error, 3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .coset import DEFAULT_BUDGET, BudgetExceeded
from .core import FiniteMla, MlaError, read_algebra, to_dict, validate_axioms
from .corpus import CorpusError, default_corpus_dir, load_corpus, read_extension
from .isoclinism import (
    find_extension_isoclinism,
    find_isoclinism,
    is_stem,
    pullback_extension,
    pullback_kernel_pairs,
    stem_reduce,
    verify_witness_properties,
)
from .morph import MlaMap, fingerprint, is_homomorphism
from .structure import (
    IDEAL_BOUND,
    SubSet,
    commutator_derived,
    enumerate_ideals,
    group_center,
    joint_center,
    lie_center,
    m_derived,
    quotient,
    star_derived,
)
from .suites import SUITES, check_suite
from .tensor import PreconditionError, tensor_square

OK, NEGATIVE, USAGE, BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _algebra(path: str) -> FiniteMla:
    G = read_algebra(path)
    if not G.name:
        G = FiniteMla(G.mul, G.star, name=Path(path).stem, names=G.names)
    return G


def _valid_algebra(path: str) -> FiniteMla:
    G = _algebra(path)
    report = validate_axioms(G)
    if not report.valid:
        raise UsageError(f"{path}: axioms fail: {report.axioms_failed()}")
    return G


def _ids(text: str) -> list[int]:
    text = text.strip()
    if text.startswith("["):
        vals = json.loads(text)
    else:
        vals = [int(t) for t in text.replace(",", " ").split()]
    if not all(isinstance(v, int) for v in vals):
        raise UsageError(f"expected a list of element ids, got {text!r}")
    return vals


def _members(S: SubSet) -> list[int]:
    return list(S.members)


# --------------------------------------------------------------------------
# commands; each returns (exit code, text lines, structured report)


def cmd_validate(args):
    G = _algebra(args.file)
    report = validate_axioms(G, workers=args.workers)
    if report.valid:
        return OK, ["valid"], {"name": G.name, **report.as_dict()}
    lines = ["invalid"] + [f"axiom {v.axiom}: witness {list(v.witness)}" for v in report.violations]
    return NEGATIVE, lines, {"name": G.name, **report.as_dict()}


def cmd_invariants(args):
    G = _valid_algebra(args.file)
    sets = {
        "group_center": group_center(G),
        "lie_center": lie_center(G),
        "joint_center": joint_center(G),
        "star_derived": star_derived(G),
        "commutator_derived": commutator_derived(G),
        "m_derived": m_derived(G),
    }
    fp = fingerprint(G)
    out = {
        "name": G.name,
        "order": G.order,
        "abelian": G.is_abelian,
        "trivial_star": G.has_trivial_star,
        **{k: _members(v) for k, v in sets.items()},
        "fingerprint": {"elements": [list(t) for t in fp[1]], "global": list(fp[2])},
    }
    if G.order <= IDEAL_BOUND:
        out["ideals"] = [_members(I) for I in enumerate_ideals(G)]
    lines = [f"{G.name}: order {G.order}"] + [f"{k}: {_members(v)}" for k, v in sets.items()]
    if "ideals" in out:
        lines.append(f"ideals: {len(out['ideals'])}")
    return OK, lines, out


def cmd_quotient(args):
    G = _valid_algebra(args.file)
    I = SubSet.of(G, _ids(args.ideal) or [0])
    if not I.is_ideal:
        raise UsageError(f"{_members(I)} is not an ideal of {G.name}")
    Q, proj = quotient(G, I, name=f"{G.name}/{_members(I)}")
    out = {**to_dict(Q), "projection": proj.image.tolist()}
    return OK, [f"{Q.name}: order {Q.order}", f"projection: {proj.image.tolist()}"], out


def cmd_tensor(args):
    G = _valid_algebra(args.file)
    T = tensor_square(G, method=args.method, budget=args.budget)
    out = {**T.as_dict()}
    lines = [f"{T.algebra.name}: order {T.algebra.order} via {T.method}"]
    return OK, lines, out


def _witness_lines(w) -> list[str]:
    return [f"lambda: {w.lam.image.tolist()}", f"mu: {w.mu_on_parent().tolist()}"]


def cmd_isoclinic(args):
    G1, G2 = _valid_algebra(args.a), _valid_algebra(args.b)
    w = find_isoclinism(G1, G2, workers=args.workers)
    if w is None:
        return NEGATIVE, [f"{G1.name} and {G2.name} are not isoclinic"], {"isoclinic": False, "witness": None}
    r = verify_witness_properties(w)
    out = {"isoclinic": True, **w.as_dict(), "checks": r.details["checks"]}
    return OK, [f"{G1.name} ~ {G2.name}"] + _witness_lines(w), out


def cmd_ext_isoclinic(args):
    E1, _ = read_extension(args.a)
    E2, _ = read_extension(args.b)
    w = find_extension_isoclinism(E1, E2, workers=args.workers)
    if w is None:
        return NEGATIVE, ["extensions are not isoclinic"], {"isoclinic": False, "witness": None}
    r = verify_witness_properties(w)
    out = {"isoclinic": True, **w.as_dict(), "checks": r.details["checks"], "findings": r.details["findings"]}
    code = OK if r.passed else NEGATIVE
    return code, ["extensions are isoclinic"] + _witness_lines(w) + [f"checks: {r.status}"], out


def cmd_stem_reduce(args):
    E, _ = read_extension(args.ext)
    red = stem_reduce(E)
    EJ = red.extension
    stem = is_stem(EJ)
    out = {
        "J": _members(red.ideal),
        "extension": {**to_dict(EJ.total), "kernel": _members(EJ.kernel), "projection": EJ.proj.image.tolist()},
        "is_stem": stem,
        "witness": None if red.witness is None else red.witness.as_dict(),
    }
    ok = stem and red.witness is not None
    lines = [f"J = {_members(red.ideal)}", f"reduced order {EJ.total.order}, kernel {_members(EJ.kernel)}, stem: {stem}"]
    return (OK if ok else NEGATIVE), lines, out


def cmd_pullback(args):
    E1, _ = read_extension(args.a)
    E2, _ = read_extension(args.b)
    img = _ids(args.nu)
    if len(img) != E1.quotient.order or any(not 0 <= v < E2.quotient.order for v in img):
        raise UsageError("--nu must list one image in the second quotient per element of the first")
    nu = MlaMap(E1.quotient, E2.quotient, img)
    if not is_homomorphism(nu)[0]:
        raise UsageError("--nu is not a homomorphism")
    PB = pullback_extension(E1, E2, nu)
    want = {(h1, h2) for h1 in E1.kernel.members for h2 in E2.kernel.members}
    kernel_ok = pullback_kernel_pairs(E1, E2, nu, PB) == want
    out = {
        **to_dict(PB.total),
        "kernel": _members(PB.kernel),
        "projection": PB.proj.image.tolist(),
        "kernel_is_product": kernel_ok,
    }
    lines = [f"pullback order {PB.total.order}, kernel {_members(PB.kernel)}", f"kernel is H1 x H2: {kernel_ok}"]
    return (OK if kernel_ok else NEGATIVE), lines, out


def cmd_check(args):
    corpus = load_corpus(args.corpus or default_corpus_dir())
    report = check_suite(args.suite, corpus, budget=args.budget, workers=args.workers)
    out = report.as_dict()
    counts = ", ".join(f"{k} {v}" for k, v in report.counts().items())
    lines = [f"{args.suite}: {out['status']} ({counts}) in {report.seconds:.2f}s"]
    lines += [f"warning: {w}" for w in report.warnings]
    lines += [f"  {c.case}: {c.status}" for c in report.cases if c.status in ("fail", "budget-exceeded")]
    return (OK if report.passed else NEGATIVE), lines, out


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mlat", description="Finite multiplicative Lie algebra workbench")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the structured JSON report here")
    common.add_argument("--workers", type=int, default=1, help="threads for parallel searches")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common])
    s.add_argument("file")
    s.set_defaults(fn=cmd_validate)
    s = sub.add_parser("invariants", parents=[common])
    s.add_argument("file")
    s.set_defaults(fn=cmd_invariants)
    s = sub.add_parser("quotient", parents=[common])
    s.add_argument("file")
    s.add_argument("--ideal", required=True, help="element ids, e.g. 0,2")
    s.set_defaults(fn=cmd_quotient)
    s = sub.add_parser("tensor", parents=[common])
    s.add_argument("file")
    s.add_argument("--method", choices=("auto", "snf", "enumeration"), default="auto")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.set_defaults(fn=cmd_tensor)
    s = sub.add_parser("isoclinic", parents=[common])
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(fn=cmd_isoclinic)
    s = sub.add_parser("ext-isoclinic", parents=[common])
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(fn=cmd_ext_isoclinic)
    s = sub.add_parser("stem-reduce", parents=[common])
    s.add_argument("ext")
    s.set_defaults(fn=cmd_stem_reduce)
    s = sub.add_parser("pullback", parents=[common])
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--nu", required=True, help="image of each element of the first quotient")
    s.set_defaults(fn=cmd_pullback)
    s = sub.add_parser("check", parents=[common])
    s.add_argument("suite", choices=sorted(SUITES))
    s.add_argument("--corpus", help="corpus directory (default: $MLAT_CORPUS or the shipped corpus)")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.set_defaults(fn=cmd_check)
    return p


def render(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        code, lines, report = args.fn(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        code, lines, report = BUDGET, [], {"error": "budget-exceeded", "message": str(exc)}
    except (UsageError, PreconditionError, MlaError, CorpusError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code, lines, report = USAGE, [], {"error": type(exc).__name__, "message": str(exc)}
    for line in lines:
        print(line)
    if args.out:
        Path(args.out).write_text(render(report), encoding="utf-8")
    return code


if __name__ == "__main__":
    sys.exit(main())
