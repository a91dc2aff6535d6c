"""Named verification suites run over a corpus."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Callable

from .coset import DEFAULT_BUDGET, BudgetExceeded
from .core import FiniteMla, OrderBoundError
from .corpus import Corpus
from .isoclinism import (
    CentralExtension,
    algebra_extension,
    find_extension_isoclinism,
    induced_morphism,
    is_isoclinic_morphism,
    is_stem,
    make_extension,
    restrict_to_subalgebra,
    stem_criterion,
    stem_reduce,
    verify_witness_properties,
)
from .morph import are_isomorphic, iter_homomorphisms
from .structure import check_quotient_center_lemma, enumerate_ideals, joint_center
from .tensor import (
    ENUMERATION_BOUND,
    SNF_BOUND,
    check_capability_condition,
    check_center_containments,
    check_tensor_isoclinism,
    check_tensor_quotient_iso,
)

STATUSES = ("pass", "fail", "not-applicable", "budget-exceeded")


@dataclass
class CaseResult:
    case: str
    status: str
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"case": self.case, "status": self.status, "details": self.details}


@dataclass
class SuiteReport:
    suite: str
    cases: list[CaseResult]
    warnings: list[str] = field(default_factory=list)
    seconds: float = 0.0  # kept out of as_dict so reports compare byte for byte

    @property
    def passed(self) -> bool:
        return not any(c.status == "fail" for c in self.cases)

    def counts(self) -> dict[str, int]:
        return {s: sum(c.status == s for c in self.cases) for s in STATUSES}

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "status": "pass" if self.passed else "fail",
            "counts": self.counts(),
            "warnings": list(self.warnings),
            "cases": [c.as_dict() for c in self.cases],
        }


Case = tuple[str, Callable[[], CaseResult]]


def _by_order(C: Corpus, max_order: int) -> list[tuple[str, FiniteMla]]:
    items = [(n, G) for n, G in C.algebras.items() if G.order <= max_order]
    return sorted(items, key=lambda it: (it[1].order, it[0]))


def _tensor_computable(G: FiniteMla) -> bool:
    if G.is_abelian and G.has_trivial_star:
        return G.order <= SNF_BOUND
    return G.order <= ENUMERATION_BOUND


def _budgeted(case: str, fn: Callable[[], CaseResult]) -> CaseResult:
    try:
        return fn()
    except BudgetExceeded as exc:
        return CaseResult(case, "budget-exceeded", {"error": str(exc)})
    except OrderBoundError as exc:
        return CaseResult(case, "not-applicable", {"error": str(exc)})


def _members(S) -> list[int]:
    return list(S.members)


# --------------------------------------------------------------------------
# tensor-side suites


def _quotient_centres(C: Corpus, budget: int) -> list[Case]:
    cases = []
    for name, G in _by_order(C, 8):
        for I in enumerate_ideals(G):
            label = f"{name} I={_members(I)}"

            def run(G=G, I=I, label=label):
                clauses = check_quotient_center_lemma(G, I)
                st = [c.status for c in clauses]
                status = "fail" if "fail" in st else ("pass" if "pass" in st else "not-applicable")
                return CaseResult(label, status, {"clauses": [c.as_dict() for c in clauses]})

            cases.append((label, run))
    return cases


def _tensor_quotients(C: Corpus, budget: int) -> list[Case]:
    cases = []
    for name, G in _by_order(C, 6):
        for I in enumerate_ideals(G):
            label = f"{name} I={_members(I)}"

            def run(G=G, I=I, label=label):
                r = check_tensor_quotient_iso(G, I, budget=budget)
                return CaseResult(label, r.status, r.details)

            cases.append((label, lambda run=run, label=label: _budgeted(label, run)))
    return cases


def _per_tensor_algebra(check) -> Callable[[Corpus, int], list[Case]]:
    def build(C: Corpus, budget: int) -> list[Case]:
        cases = []
        for name, G in _by_order(C, SNF_BOUND):
            if not _tensor_computable(G):
                continue

            def run(G=G, name=name):
                r = check(G, budget=budget)
                return CaseResult(name, r.status, r.details)

            cases.append((name, lambda run=run, name=name: _budgeted(name, run)))
        return cases

    return build


def _tensor_isoclinism(C: Corpus, budget: int) -> list[Case]:
    small = [(n, G) for n, G in _by_order(C, 8) if _tensor_computable(G)]
    cases = []
    for (n1, G1), (n2, G2) in combinations_with_replacement(small, 2):
        label = f"{n1} ~ {n2}"

        def run(G1=G1, G2=G2, label=label):
            r = check_tensor_isoclinism(G1, G2, budget=budget)
            return CaseResult(label, r.status, r.details)

        cases.append((label, lambda run=run, label=label: _budgeted(label, run)))
    return cases


# --------------------------------------------------------------------------
# extension suites


def _small_extensions(C: Corpus, max_order: int = 8) -> list[tuple[str, CentralExtension]]:
    """Corpus extension files, every algebra over its joint centre, and the
    smallest algebras over the trivial ideal (targets where a kernel can meet ^M).
    """
    out = [(e.name, e.extension) for e in C.extensions.values() if e.extension.total.order <= max_order]
    out += [(f"{n}/Z", algebra_extension(G)) for n, G in _by_order(C, max_order)]
    out += [(f"{n}/1", make_extension(G, [0])) for n, G in _by_order(C, 4)]
    return sorted(out, key=lambda it: (it[1].total.order, it[0]))


def _all_central_extensions(C: Corpus, max_order: int = 16) -> list[tuple[str, CentralExtension]]:
    """Every algebra over every ideal inside its joint centre, plus the corpus files."""
    out = []
    for n, G in _by_order(C, max_order):
        Z = joint_center(G)
        for H in enumerate_ideals(G):
            if H.issubset(Z):
                out.append((f"{n} H={_members(H)}", make_extension(G, H)))
    out += [(e.name, e.extension) for e in C.extensions.values() if e.extension.total.order <= max_order]
    return out


def _kernel_algebra(E: CentralExtension):
    return restrict_to_subalgebra(E.total, E.kernel)[0]


def _extension_isoclinism(C: Corpus, budget: int) -> list[Case]:
    exts = _small_extensions(C)
    cases = []
    for (n1, E1), (n2, E2) in combinations_with_replacement(exts, 2):
        label = f"{n1} ~ {n2}"

        def run(E1=E1, E2=E2, label=label):
            w = find_extension_isoclinism(E1, E2)
            back = find_extension_isoclinism(E2, E1)
            if (w is None) != (back is None):
                return CaseResult(label, "fail", {"finding": "isoclinism search is not symmetric"})
            if w is None:
                return CaseResult(label, "not-applicable", {"witness": None})
            r = verify_witness_properties(w)
            details = {"witness": w.as_dict(), **r.details}
            status = r.status
            if is_stem(E1) and is_stem(E2):
                iso = are_isomorphic(_kernel_algebra(E1), _kernel_algebra(E2)) is not None
                details["stem_kernels_isomorphic"] = iso
                if not iso:
                    status = "fail"
            return CaseResult(label, status, details)

        cases.append((label, run))
    return cases


def _isoclinic_morphisms(C: Corpus, budget: int) -> list[Case]:
    exts = _small_extensions(C)
    cases = []
    for (n1, E1) in exts:
        for (n2, E2) in exts:
            label = f"{n1} -> {n2}"

            def run(E1=E1, E2=E2, label=label):
                verdicts = []
                for mu in iter_homomorphisms(E1.total, E2.total):
                    m = induced_morphism(E1, E2, mu)
                    if m is None:
                        continue
                    v = is_isoclinic_morphism(E1, E2, *m)
                    verdicts.append({"mu": mu.image.tolist(), **v.as_dict()})
                if not verdicts:
                    return CaseResult(label, "not-applicable", {"morphisms": 0})
                bad = [v for v in verdicts if not v["agree"] or v["image_covers"] is False]
                details = {
                    "morphisms": len(verdicts),
                    "isoclinic": sum(v["direct"] for v in verdicts),
                    "reasons": {r: sum(v["reason"] == r for v in verdicts) for r in sorted({v["reason"] for v in verdicts})},
                    "disagreements": bad,
                }
                return CaseResult(label, "fail" if bad else "pass", details)

            cases.append((label, run))
    return cases


def _stem_criterion(C: Corpus, budget: int) -> list[Case]:
    cases = []
    for label, E in _all_central_extensions(C):

        def run(E=E, label=label):
            crit, witness = stem_criterion(E)
            stem = is_stem(E)
            details = {"is_stem": stem, "criterion": crit, "witness": None if witness is None else _members(witness)}
            return CaseResult(label, "pass" if crit == stem else "fail", details)

        cases.append((label, run))
    return cases


def _stem_reduce(C: Corpus, budget: int) -> list[Case]:
    cases = []
    for label, E in _all_central_extensions(C):

        def run(E=E, label=label):
            red = stem_reduce(E)
            EJ = red.extension
            stem = is_stem(EJ)
            found = find_extension_isoclinism(E, EJ)
            verified = red.witness is not None and verify_witness_properties(red.witness).passed
            details = {
                "J": _members(red.ideal),
                "reduced_kernel": _members(EJ.kernel),
                "reduced_order": EJ.total.order,
                "is_stem": stem,
                "witness_verified": verified,
                "search_found": found is not None,
            }
            ok = stem and verified and found is not None
            return CaseResult(label, "pass" if ok else "fail", details)

        cases.append((label, run))
    return cases


def _covers(C: Corpus, budget: int) -> list[Case]:
    tagged = sorted((e.name, e) for e in C.extensions.values() if e.cover_of)
    cases = []
    for i, (n1, e1) in enumerate(tagged):
        for n2, e2 in tagged[i + 1:]:
            if e1.cover_of != e2.cover_of:
                continue
            label = f"{n1} ~ {n2} (covers of {e1.cover_of})"

            def run(E1=e1.extension, E2=e2.extension, label=label):
                stems = [is_stem(E1), is_stem(E2)]
                w = find_extension_isoclinism(E1, E2)
                details = {"stem": stems, "witness": None if w is None else w.as_dict()}
                ok = all(stems) and w is not None
                if w is not None:
                    ok &= verify_witness_properties(w).passed
                    iso = are_isomorphic(_kernel_algebra(E1), _kernel_algebra(E2)) is not None
                    details["kernels_isomorphic"] = iso
                    ok &= iso
                return CaseResult(label, "pass" if ok else "fail", details)

            cases.append((label, run))
    return cases


SUITES: dict[str, Callable[[Corpus, int], list[Case]]] = {
    "lemma3.1": _quotient_centres,
    "lemma3.2": _tensor_quotients,
    "lemma3.3": _per_tensor_algebra(check_center_containments),
    "prop3.6": _per_tensor_algebra(check_capability_condition),
    "prop3.8": _tensor_isoclinism,
    "lemma4.2": _extension_isoclinism,
    "thm4.5": _isoclinic_morphisms,
    "stem-criterion": _stem_criterion,
    "stem-reduce": _stem_reduce,
    "covers": _covers,
}


def check_suite(name: str, corpus: Corpus, budget: int = DEFAULT_BUDGET, workers: int = 1) -> SuiteReport:
    """Run one suite; case order is fixed by the corpus, not by scheduling."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    start = time.perf_counter()
    cases = SUITES[name](corpus, budget)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda c: c[1](), cases))
    else:
        results = [fn() for _, fn in cases]
    warnings = []
    if not results:
        warnings.append("vacuous: no applicable cases")
    return SuiteReport(name, results, warnings, time.perf_counter() - start)
