"""Bounded Lie closure, derived and lower central series, and the verdict
machinery (solvability, nilpotency of the derived ideal, finite
dimensionality, rank, triangularity, exclusion diagnostics).

A graded form is treated as a sparse vector over the coordinates
{Euler} + lattice, ordered by (a+b, a) with Euler last; spans are kept in
reduced echelon form with minimal pivots, which makes every basis unique
and every report deterministic.  Brackets whose support exceeds the weight
budget are dropped but counted, and any verdict computed after a truncation
is downgraded rather than asserted.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence, Union

from .errors import BudgetZero, InternalConsistencyError
from .finiteness import OrbitBudget, certify_locally_finite, jordan_decompose
from .errors import NotLocallyFinite
from .linalg import SparseEchelon
from .scalars import Scalar
from .spectral import OpportunePair, SearchResult, opportune_search
from .vecfield import (
    Derivation,
    GradedForm,
    NotConstantDivergence,
    bracket_graded,
    from_graded,
    to_graded,
)

EULER_KEY = "euler"


def _coord_order(key):
    if key == EULER_KEY:
        return (1, 0, 0)
    a, b = key
    return (0, a + b, a)


def graded_to_vector(g: GradedForm) -> dict:
    vec: dict = {point: c for point, c in g.graded.items()}
    if g.euler:
        vec[EULER_KEY] = g.euler
    return vec


def vector_to_graded(vec: dict) -> GradedForm:
    euler = vec.get(EULER_KEY, Scalar())
    graded = {k: c for k, c in vec.items() if k != EULER_KEY}
    return GradedForm(euler, graded)


@dataclass(frozen=True)
class ClosureBudget:
    max_dim: int = 96
    max_total_weight: int = 40
    max_rounds: int = 32


@dataclass(frozen=True)
class LieSpan:
    """Echelonized span of graded forms: unique reduced basis, minimal
    pivots, pivot coefficient 1, rows ordered by pivot."""

    basis: tuple[GradedForm, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def echelon(self) -> SparseEchelon:
        ech = SparseEchelon(_coord_order)
        for g in self.basis:
            ech.insert(graded_to_vector(g))
        return ech

    def contains(self, g: GradedForm) -> bool:
        return self.echelon().contains(graded_to_vector(g))

    def contains_span(self, other: "LieSpan") -> bool:
        ech = self.echelon()
        return all(ech.contains(graded_to_vector(g)) for g in other.basis)


def _span_from_echelon(ech: SparseEchelon) -> LieSpan:
    return LieSpan(tuple(vector_to_graded(v) for v in ech.basis()))


def span_of(forms: Iterable[GradedForm]) -> LieSpan:
    ech = SparseEchelon(_coord_order)
    for g in forms:
        ech.insert(graded_to_vector(g))
    return _span_from_echelon(ech)


@dataclass
class ClosureReport:
    span: LieSpan
    stabilized: bool
    growth_trace: tuple[tuple[int, int], ...]
    truncations: int
    derived_dims: Optional[tuple[int, ...]] = None
    lcs_dims: Optional[tuple[int, ...]] = None
    verdicts: Optional[dict] = None
    rank_result: Optional["RankResult"] = None
    exclusion: Optional["ExclusionResult"] = None


def _exceeds_weight(g: GradedForm, budget: ClosureBudget) -> bool:
    return any(a + b > budget.max_total_weight for a, b in g.graded)


def lie_closure(gens: Union[Sequence[GradedForm], LieSpan],
                budget: ClosureBudget = ClosureBudget()) -> ClosureReport:
    """Round-based bracket saturation of the generators.

    Each round brackets every element found in the previous round against
    the whole current basis (in fixed order); new directions are inserted
    into the echelon.  Stops when a round adds nothing (stabilized) or when
    a budget limit is hit.
    """
    if isinstance(gens, LieSpan):
        gens = list(gens.basis)
    if not gens:
        raise ValueError("lie_closure needs at least one generator")
    if budget.max_dim <= 0 or budget.max_total_weight <= 0 or budget.max_rounds <= 0:
        raise BudgetZero(f"budget must be positive: {budget}")

    ech = SparseEchelon(_coord_order)
    truncations = 0
    over_budget = False
    new_elements: list[GradedForm] = []
    for g in gens:
        if g.is_zero():
            continue
        if _exceeds_weight(g, budget):
            truncations += 1
            continue
        if ech.insert(graded_to_vector(g)):
            new_elements.append(g)
            if ech.dim > budget.max_dim:
                over_budget = True
                break
    trace: list[tuple[int, int]] = [(0, ech.dim)]
    stabilized = False

    for round_no in range(1, budget.max_rounds + 1):
        if over_budget:
            break
        if not new_elements:
            stabilized = True
            break
        basis_snapshot = [vector_to_graded(v) for v in ech.basis()]
        added: list[GradedForm] = []
        for lhs in new_elements:
            for rhs in basis_snapshot:
                cand = bracket_graded(lhs, rhs)
                if cand.is_zero():
                    continue
                if _exceeds_weight(cand, budget):
                    truncations += 1
                    continue
                if ech.insert(graded_to_vector(cand)):
                    added.append(cand)
                    if ech.dim > budget.max_dim:
                        over_budget = True
                        break
            if over_budget:
                break
        trace.append((round_no, ech.dim))
        new_elements = added
        if not added and not over_budget:
            stabilized = True
            break
    else:
        stabilized = not new_elements

    if over_budget:
        stabilized = False
    return ClosureReport(
        span=_span_from_echelon(ech),
        stabilized=stabilized,
        growth_trace=tuple(trace),
        truncations=truncations,
    )


@dataclass(frozen=True)
class DerivedSeries:
    """h^(0) >= h^(1) >= ...; truncated marks any budget interference and
    repeating marks a nonzero fixpoint (the series stopped shrinking)."""

    spans: tuple[LieSpan, ...]
    truncated: bool
    repeating: bool

    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.spans)

    def reaches_zero(self) -> bool:
        return bool(self.spans) and self.spans[-1].is_zero()

    def derived_length(self) -> Optional[int]:
        """Least n with h^(n) = 0, when the computed series reaches zero."""
        for idx, s in enumerate(self.spans):
            if s.is_zero():
                return idx
        return None


def _pairwise_brackets(span: LieSpan) -> list[GradedForm]:
    out = []
    basis = span.basis
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            cand = bracket_graded(basis[i], basis[j])
            if not cand.is_zero():
                out.append(cand)
    return out


def derived_series(span_or_gens: Union[LieSpan, Sequence[GradedForm]],
                   depth: int = 8,
                   budget: ClosureBudget = ClosureBudget()) -> DerivedSeries:
    """Derived series computed by closing pairwise brackets at each stage."""
    truncated = False
    if isinstance(span_or_gens, LieSpan):
        current = span_or_gens
    else:
        report = lie_closure(list(span_or_gens), budget)
        truncated |= (not report.stabilized) or report.truncations > 0
        current = report.span
    spans = [current]
    repeating = False
    for _ in range(depth):
        if current.is_zero():
            break
        all_brackets = _pairwise_brackets(current)
        candidates = [c for c in all_brackets if not _exceeds_weight(c, budget)]
        if len(candidates) != len(all_brackets):
            truncated = True
        if not candidates:
            nxt = LieSpan(())
        else:
            report = lie_closure(candidates, budget)
            truncated |= (not report.stabilized) or report.truncations > 0
            nxt = report.span
        spans.append(nxt)
        if nxt == current:
            repeating = True
            break
        current = nxt
    return DerivedSeries(tuple(spans), truncated, repeating)


@dataclass(frozen=True)
class LowerCentralSeries:
    spans: tuple[LieSpan, ...]
    truncated: bool
    stable_nonzero: bool

    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.spans)

    def nilpotent_step(self) -> Optional[int]:
        """k with C^k != 0 and C^(k+1) = 0 (C^1 is the input span)."""
        if not self.spans or not self.spans[-1].is_zero():
            return None
        if self.spans[0].is_zero():
            return 0
        return len(self.spans) - 1


def lower_central_series(span: LieSpan, ambient: LieSpan,
                         depth: int = 24,
                         budget: ClosureBudget = ClosureBudget()) -> LowerCentralSeries:
    """C^1 = span, C^(k+1) = span of [ambient basis, C^k basis], within
    budget; hitting a budget cap marks the series truncated and stops it."""
    if not ambient.contains_span(span):
        raise ValueError("span must sit inside the ambient span")
    truncated = False
    spans = [span]
    current = span
    for _ in range(depth):
        if current.is_zero():
            break
        ech = SparseEchelon(_coord_order)
        over_budget = False
        for a in ambient.basis:
            for c in current.basis:
                cand = bracket_graded(a, c)
                if cand.is_zero():
                    continue
                if _exceeds_weight(cand, budget):
                    truncated = True
                    continue
                if ech.insert(graded_to_vector(cand)) and ech.dim > budget.max_dim:
                    over_budget = True
                    break
            if over_budget:
                break
        nxt = _span_from_echelon(ech)
        spans.append(nxt)
        if over_budget:
            truncated = True
            break
        if nxt == current:
            return LowerCentralSeries(tuple(spans), truncated, stable_nonzero=True)
        current = nxt
    stable_nonzero = not spans[-1].is_zero()
    return LowerCentralSeries(tuple(spans), truncated, stable_nonzero)


@dataclass(frozen=True)
class FiniteDimVerdict:
    kind: str  # "FiniteDim" | "LikelyInfinite" | "Unknown"
    dim: Optional[int] = None
    trace: Optional[tuple[tuple[int, int], ...]] = None
    conditional: bool = False


def finite_dim_verdict(gens: Sequence[GradedForm],
                       budget: ClosureBudget = ClosureBudget(),
                       orbit_budget: OrbitBudget = OrbitBudget()) -> FiniteDimVerdict:
    """Finite dimensionality via closure, with the nilpotent-derived-ideal
    cross-check asserted on success."""
    conditional = False
    for g in gens:
        cert = certify_locally_finite(from_graded(g), orbit_budget)
        if cert.kind != "LocallyFinite":
            conditional = True
            break
    report = lie_closure(list(gens), budget)
    if report.stabilized and report.truncations == 0:
        series = derived_series(report.span, depth=8, budget=budget)
        h1 = series.spans[1] if len(series.spans) > 1 else LieSpan(())
        lcs = lower_central_series(h1, h1, budget=budget)
        if series.reaches_zero() and not series.truncated \
                and lcs.nilpotent_step() is None and not lcs.truncated:
            # solvable + stabilized forces a nilpotent derived ideal
            raise InternalConsistencyError(
                "stabilized solvable closure but the derived ideal is not nilpotent")
        return FiniteDimVerdict("FiniteDim", dim=report.span.dim,
                                conditional=conditional)
    dims = [d for _, d in report.growth_trace]
    strictly_growing = len(dims) >= 6 and all(
        dims[i] < dims[i + 1] for i in range(len(dims) - 6, len(dims) - 1))
    series = derived_series(report.span, depth=2, budget=budget)
    h1 = series.spans[1] if len(series.spans) > 1 else LieSpan(())
    lcs = lower_central_series(h1, h1, budget=budget)
    nonnilpotent_evidence = lcs.stable_nonzero or lcs.nilpotent_step() is None
    if strictly_growing and nonnilpotent_evidence:
        return FiniteDimVerdict("LikelyInfinite", trace=report.growth_trace,
                                conditional=conditional)
    return FiniteDimVerdict("Unknown", trace=report.growth_trace,
                            conditional=conditional)


@dataclass(frozen=True)
class RankResult:
    kind: str  # "Rank2" | "AtMost1" | "Unknown"
    pair: Optional[OpportunePair] = None
    central: Optional[Derivation] = None
    heuristic: bool = False


def rank_analysis(gens: Sequence[Derivation],
                  budget: OrbitBudget = OrbitBudget()) -> RankResult:
    """Opportune search over the generators, their Jordan parts and their
    homogeneous pieces.

    Outside the hypotheses of the rank-2 criterion (solvable, non-toral,
    locally finite generators) the outcome is labeled heuristic.
    """
    candidates: list[Derivation] = []

    def add(d: Derivation):
        if d and d not in candidates:
            candidates.append(d)

    heuristic = False
    for d in gens:
        add(d)
    for d in gens:
        cert = certify_locally_finite(d, budget)
        if cert.kind != "LocallyFinite":
            heuristic = True
            continue
        try:
            d_s, d_n = jordan_decompose(d, budget)
        except NotLocallyFinite:
            heuristic = True
            continue
        add(d_s)
        add(d_n)
    for d in gens:
        try:
            g = to_graded(d)
        except NotConstantDivergence:
            heuristic = True
            continue
        toral = GradedForm(g.euler, {(0, 0): g.graded.get((0, 0), Scalar())})
        if not toral.is_zero():
            add(from_graded(toral))
        for (a, b), c in g.sorted_items():
            if (a, b) != (0, 0):
                add(from_graded(GradedForm.basis(a, b, c)))

    if not candidates:
        return RankResult("Unknown", heuristic=heuristic)
    result = opportune_search(candidates, budget)
    if result.kind == "OpportunePair":
        return RankResult("Rank2", pair=result.pair, heuristic=heuristic)
    if result.kind == "CentralDelta":
        return RankResult("AtMost1", central=result.delta, heuristic=heuristic)
    return RankResult("Unknown", heuristic=heuristic)


@dataclass(frozen=True)
class TriangularResult:
    kind: str  # "InJplus" | "InJminus" | "Neither"
    filtration_degree: Optional[int]


_JPLUS_FIXED = {(0, 0), (0, -1)}
_JMINUS_FIXED = {(0, 0), (-1, 0)}


def _jplus_degree(span: LieSpan) -> Optional[int]:
    degree = 0
    for g in span.basis:
        for (a, b) in g.graded:
            if (a, b) in _JPLUS_FIXED:
                continue
            if a == -1 and b >= 0:
                degree = max(degree, b)
            else:
                return None
    return degree


def _jminus_degree(span: LieSpan) -> Optional[int]:
    degree = 0
    for g in span.basis:
        for (a, b) in g.graded:
            if (a, b) in _JMINUS_FIXED:
                continue
            if b == -1 and a >= 0:
                degree = max(degree, a)
            else:
                return None
    return degree


def triangular_analysis(span: LieSpan) -> TriangularResult:
    """Membership in the triangular algebras p(y)dx + a*x*dx + b*y*dy + c*dy
    (or the x<->y mirror), with the least degree bound d on p."""
    plus = _jplus_degree(span)
    if plus is not None:
        return TriangularResult("InJplus", plus)
    minus = _jminus_degree(span)
    if minus is not None:
        return TriangularResult("InJminus", minus)
    return TriangularResult("Neither", None)


@dataclass(frozen=True)
class ExclusionResult:
    status: str  # "Clean" | "Violation"
    k: Optional[int] = None
    l: Optional[int] = None


def exclusion_check(span: LieSpan) -> ExclusionResult:
    """Simultaneous membership of some D[-1,k] and D[l,-1] with k, l >= 1
    rules out solvability; this scans the span for the smallest such pair."""
    ks = sorted({b for g in span.basis for (a, b) in g.graded if a == -1 and b >= 1})
    ls = sorted({a for g in span.basis for (a, b) in g.graded if b == -1 and a >= 1})
    ech = span.echelon()
    present_k = next(
        (k for k in ks if ech.contains(graded_to_vector(GradedForm.basis(-1, k)))), None)
    present_l = next(
        (l for l in ls if ech.contains(graded_to_vector(GradedForm.basis(l, -1)))), None)
    if present_k is not None and present_l is not None:
        return ExclusionResult("Violation", k=present_k, l=present_l)
    return ExclusionResult("Clean")


def full_closure_report(gens_graded: Sequence[GradedForm],
                        gens_derivations: Optional[Sequence[Derivation]] = None,
                        budget: ClosureBudget = ClosureBudget(),
                        orbit_budget: OrbitBudget = OrbitBudget(),
                        depth: int = 6) -> ClosureReport:
    """Closure plus the whole verdict block, for reports and the CLI.

    The closure, derived series and lower central series are computed once
    and shared by all verdicts.
    """
    report = lie_closure(list(gens_graded), budget)
    clean = report.stabilized and report.truncations == 0

    series = derived_series(report.span, depth=depth, budget=budget)
    derived_dims = series.dims()
    h1 = series.spans[1] if len(series.spans) > 1 else LieSpan(())
    lcs = lower_central_series(h1, h1, budget=budget)
    lcs_dims = lcs.dims()
    step = lcs.nilpotent_step()

    if clean and not series.truncated and series.reaches_zero():
        solvable = {"status": "Yes", "depth": series.derived_length()}
    else:
        solvable = {"status": "NoWithinBudget"}
    if clean and not lcs.truncated and step is not None:
        nilpotent_derived = {"status": "Yes", "step": step}
    else:
        nilpotent_derived = {"status": "NoWithinBudget"}

    conditional = False
    for g in gens_graded:
        if certify_locally_finite(from_graded(g), orbit_budget).kind != "LocallyFinite":
            conditional = True
            break
    if clean:
        solvable_clean = solvable["status"] == "Yes"
        if solvable_clean and step is None and not lcs.truncated:
            # solvable + stabilized forces a nilpotent derived ideal
            raise InternalConsistencyError(
                "stabilized solvable closure but the derived ideal is not nilpotent")
        finite_dim = {"status": "FiniteDim", "dim": report.span.dim}
    else:
        dims = [d for _, d in report.growth_trace]
        strictly_growing = len(dims) >= 6 and all(
            dims[i] < dims[i + 1] for i in range(len(dims) - 6, len(dims) - 1))
        nonnilpotent_evidence = lcs.stable_nonzero or step is None
        if strictly_growing and nonnilpotent_evidence:
            finite_dim = {"status": "LikelyInfinite"}
        else:
            finite_dim = {"status": "Unknown"}
    if conditional:
        finite_dim["conditional"] = True

    if gens_derivations is None:
        gens_derivations = [from_graded(g) for g in gens_graded]
    rank = rank_analysis(list(gens_derivations), orbit_budget)
    rank_verdict = {"status": {"Rank2": "2", "AtMost1": "AtMost1",
                               "Unknown": "Unknown"}[rank.kind]}
    if rank.heuristic:
        rank_verdict["heuristic"] = True

    tri = triangular_analysis(report.span)
    verdicts = {
        "solvable": solvable,
        "nilpotent_derived": nilpotent_derived,
        "finite_dim": finite_dim,
        "rank": rank_verdict,
        "triangular": tri.kind,
        "filtration_degree": tri.filtration_degree,
    }
    report.derived_dims = derived_dims
    report.lcs_dims = lcs_dims
    report.verdicts = verdicts
    report.rank_result = rank
    report.exclusion = exclusion_check(report.span)
    return report
