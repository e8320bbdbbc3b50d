"""Compositions, bounded completeness checks, and quotient arithmetic.

A generating set mixes schema families (identities instantiated over the
alphabet) with concrete polynomials.  Two generators interact through

* intersection records: their leading words overlap at top level, the
  shared word ``w`` being a proper suffix-prefix merge, and
* inclusion records: one leading word occurs inside the other at any
  depth (the plugged copy of the whole word is skipped for a generator
  against itself).

A record is trivial when its value reduces to zero by the generators
themselves through anchors below ``w``; a bounded check that reduces
every in-bounds record certifies the set on the bounded stratum, which
is what quotient arithmetic needs to be well defined there.

``check_gs`` has two routes.  The raw route reduces every record.  The
certified route applies when every schema family (i) is flagged as a
self-complete rewriting basis by its source, (ii) has a leading schema
with no adjacent variables, and (iii) keeps its leading monomial at all
assignments including units, and every concrete generator is
bracket-free; under those hypotheses schema-schema records are exactly
the input assumption and are reported as skipped rather than re-checked,
while everything touching a concrete generator is still reduced.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Mapping, Sequence, Union

from .opi import OPI, CatalogEntry, check_lm_no_subword, check_lm_stability, expand_instances
from .orders import OrderSpec
from .poly import OPoly, render_opoly
from .rewrite import RuleSet, normal_form
from .terms import (
    Alphabet,
    Context,
    Word,
    all_words,
    iter_occurrences,
    render,
    structural_key,
    substitute,
)

__all__ = [
    "BoundsExceeded",
    "CompositionRecord",
    "GSReport",
    "Generator",
    "GeneratorSet",
    "QuotientAlgebra",
    "TrivialityResult",
    "check_gs",
    "compositions",
    "enumerate_irr",
    "evaluate_morphism",
    "is_irreducible",
    "is_trivial",
]


class BoundsExceeded(ValueError):
    """Raised when quotient arithmetic would leave the verified stratum."""


@dataclass(frozen=True)
class Generator:
    """One expanded generator: a monic polynomial with provenance."""

    gen_id: str
    poly: OPoly
    lm: Word
    kind: str  # "concrete" | "schema" | "degenerate"


class GeneratorSet:
    """Catalog entries plus concrete polynomials under one order."""

    def __init__(
        self,
        entries: Sequence[CatalogEntry] = (),
        concrete: Sequence[OPoly] = (),
        order: OrderSpec | None = None,
        alphabet: Alphabet | None = None,
    ):
        if order is None or alphabet is None:
            raise ValueError("GeneratorSet needs an order and an alphabet")
        for e in entries:
            if e.preset != order.preset:
                raise ValueError(
                    f"catalog entry {e.key} declares preset {e.preset}; "
                    f"the active order is {order.preset} (pick the matching --order)"
                )
            for phi in e.opis:
                clash = [v for v in phi.variables if v in alphabet]
                if clash:
                    raise ValueError(
                        f"alphabet letters {','.join(clash)} collide with schema variables of {phi.name}"
                    )
        for i, g in enumerate(concrete):
            if g.is_zero():
                raise ValueError(f"concrete generator #{i} is zero")
        self.entries = tuple(entries)
        self.concrete = tuple(concrete)
        self.order = order
        self.alphabet = alphabet
        self._expanded_cache: dict[tuple[int, int], tuple[Generator, ...]] = {}
        self._ruleset_cache: dict[tuple[int, int], RuleSet] = {}

    @property
    def opis(self) -> tuple[OPI, ...]:
        return tuple(phi for e in self.entries for phi in e.opis)

    def max_gap(self) -> int:
        preset = self.order.preset
        gaps = [phi.op_gap(preset) for phi in self.opis]
        return max(gaps, default=0)

    def expanded(self, bounds: tuple[int, int]) -> tuple[Generator, ...]:
        got = self._expanded_cache.get(bounds)
        if got is not None:
            return got
        gens: list[Generator] = []
        seen: set[OPoly] = set()
        for i, g in enumerate(self.concrete):
            monic = g.monicize(self.order)
            if monic in seen:
                continue
            seen.add(monic)
            gens.append(Generator(f"g{i}", monic, monic.leading_monomial(self.order), "concrete"))
        for rec in expand_instances(self.opis, self.alphabet, bounds, self.order):
            monic = rec.poly.monicize(self.order)
            if monic in seen:
                continue
            seen.add(monic)
            gens.append(
                Generator(rec.gen_id(), monic, rec.lm, "schema" if rec.stable else "degenerate")
            )
        out = tuple(gens)
        self._expanded_cache[bounds] = out
        return out

    def ruleset(self, bounds: tuple[int, int]) -> RuleSet:
        got = self._ruleset_cache.get(bounds)
        if got is None:
            got = RuleSet.ordered(
                self.order,
                self.alphabet,
                bounds,
                opis=self.opis,
                concrete=self.concrete,
            )
            self._ruleset_cache[bounds] = got
        return got

    def envelope_ruleset(self, *words: Word) -> RuleSet:
        """Rule set large enough to reduce anything at these words' sizes."""
        max_z = max((w.z_degree for w in words), default=0)
        max_op = max((w.op_degree for w in words), default=0)
        return self.ruleset((max_z, max_op))

    def describe(self) -> str:
        parts = [e.key for e in self.entries] + [f"{len(self.concrete)} concrete"]
        return f"generators[{', '.join(parts)}] under {self.order.describe()}"


# ---------------------------------------------------------------------------
# composition enumeration


@dataclass
class CompositionRecord:
    kind: str  # "intersection" | "inclusion"
    left_id: str
    right_id: str
    w: Word
    witness: str
    context: Context | None
    value: OPoly
    pair_kind: str
    verdict: "TrivialityResult | None" = None
    skipped: str = ""

    def headline(self) -> str:
        return (
            f"{self.kind} ({self.left_id}, {self.right_id}) at w = {render(self.w)} [{self.witness}]"
        )


def _side(kind: str) -> str:
    return "concrete" if kind == "concrete" else "schema"


def _pair_kind(a: Generator, b: Generator) -> str:
    return f"{_side(a.kind)}-{_side(b.kind)}"


def _intersections(a: Generator, b: Generator, bounds: tuple[int, int]) -> list[CompositionRecord]:
    fa, fb = a.lm.factors, b.lm.factors
    out: list[CompositionRecord] = []
    for k in range(1, min(len(fa), len(fb))):
        if fa[len(fa) - k :] != fb[:k]:
            continue
        w = Word(fa + fb[k:])
        if w.z_degree > bounds[0] or w.op_degree > bounds[1]:
            continue
        u = Word(fb[k:])
        v = Word(fa[: len(fa) - k])
        value = a.poly * OPoly.from_word(u) - OPoly.from_word(v) * b.poly
        out.append(
            CompositionRecord(
                kind="intersection",
                left_id=a.gen_id,
                right_id=b.gen_id,
                w=w,
                witness=f"overlap k={k}",
                context=None,
                value=value,
                pair_kind=_pair_kind(a, b),
            )
        )
    return out


def _inclusions(a: Generator, b: Generator, bounds: tuple[int, int], same: bool) -> list[CompositionRecord]:
    # b's leading word inside a's
    out: list[CompositionRecord] = []
    w = a.lm
    if w.z_degree > bounds[0] or w.op_degree > bounds[1]:
        return out
    for q in iter_occurrences(w, b.lm):
        if same and q.is_trivial():
            continue
        value = a.poly - substitute(q, b.poly)
        out.append(
            CompositionRecord(
                kind="inclusion",
                left_id=a.gen_id,
                right_id=b.gen_id,
                w=w,
                witness=f"context {q}",
                context=q,
                value=value,
                pair_kind=_pair_kind(a, b),
            )
        )
    return out


def pair_compositions(
    a: Generator, b: Generator, bounds: tuple[int, int], *, same: bool = False
) -> list[CompositionRecord]:
    """All records between two generators (both directions when distinct)."""
    out = _intersections(a, b, bounds)
    if not same:
        out += _intersections(b, a, bounds)
    out += _inclusions(a, b, bounds, same)
    if not same:
        out += _inclusions(b, a, bounds, same)
    return out


def _record_sort_key(r: CompositionRecord):
    return (structural_key(r.w), r.kind, r.left_id, r.right_id, r.witness)


def _as_generators(
    obj, tag: str, order: OrderSpec, bounds: tuple[int, int], alphabet: Alphabet
) -> list[Generator]:
    if isinstance(obj, GeneratorSet):
        return list(obj.expanded(bounds))
    if isinstance(obj, CatalogEntry):
        gs = GeneratorSet(entries=(obj,), concrete=(), order=order, alphabet=alphabet)
        return list(gs.expanded(bounds))
    if isinstance(obj, OPI):
        out = []
        for rec in expand_instances((obj,), alphabet, bounds, order):
            monic = rec.poly.monicize(order)
            out.append(Generator(rec.gen_id(), monic, rec.lm, "schema" if rec.stable else "degenerate"))
        return out
    if isinstance(obj, OPoly):
        monic = obj.monicize(order)
        return [Generator(tag, monic, monic.leading_monomial(order), "concrete")]
    raise TypeError(f"cannot treat {type(obj).__name__} as a generator source")


def compositions(f, g, order: OrderSpec, bounds: tuple[int, int], alphabet: Alphabet | None = None):
    """Every intersection and inclusion record between the two inputs whose
    shared word fits the bounds, deterministically sorted.

    Inputs may be polynomials, identities, catalog entries, or whole
    generator sets; identities expand to their bounded instances first.
    When both inputs expand to the same polynomials the pair is treated
    as one self-paired family (no mirrored duplicates).
    """
    if alphabet is None:
        alphabet = Alphabet(order.base)
    left = _as_generators(f, "f", order, bounds, alphabet)
    right = _as_generators(g, "g", order, bounds, alphabet)
    records: list[CompositionRecord] = []
    if [x.poly for x in left] == [y.poly for y in right]:
        for i, a in enumerate(left):
            for b in left[i:]:
                records += pair_compositions(a, b, bounds, same=(a is b))
    else:
        for a in left:
            for b in right:
                records += pair_compositions(a, b, bounds, same=False)
    records.sort(key=_record_sort_key)
    return records


# ---------------------------------------------------------------------------
# triviality


@dataclass
class TrivialityResult:
    status: str  # "trivial" | "not_trivial" | "unresolved"
    residue: OPoly
    steps: tuple
    note: str = ""

    @property
    def conclusive(self) -> bool:
        return self.status in ("trivial", "not_trivial")

    def to_text(self) -> str:
        if self.status == "trivial":
            return f"trivial ({len(self.steps)} reduction step(s))"
        if self.status == "not_trivial":
            return f"NOT trivial: irreducible residue {self.residue} ({self.note})"
        return f"unresolved: {self.note}"


def is_trivial(
    h: OPoly,
    generators: GeneratorSet,
    w: Word,
    fuel: int,
    *,
    rules: RuleSet | None = None,
) -> TrivialityResult:
    """Decide whether ``h`` rewrites to zero through anchors below ``w``.

    Every monomial of ``h`` must already lie below ``w``; reduction then
    keeps anchors below ``w``, so reaching zero is a sound certificate.
    A nonzero normal form whose monomials stay inside the rule set's
    verified bounds is a conclusive refusal: such a residue is a nonzero
    ideal element supported on irreducible words, which a complete bounded
    system cannot have.  Anything else (fuel out, residue escaping the
    verified bounds) stays unresolved.
    """
    order = generators.order
    for m in h.support():
        if order.compare(m, w) >= 0:
            raise ValueError(
                f"monomial {render(m)} of the candidate is not below the shared word {render(w)}"
            )
    if rules is None:
        gap = generators.max_gap()
        rules = generators.ruleset((w.z_degree, w.op_degree + gap))
    res = normal_form(h, rules, fuel, want_trace=True)
    if res.poly.is_zero():
        return TrivialityResult("trivial", res.poly, res.steps)
    if res.exhausted:
        return TrivialityResult("unresolved", res.poly, res.steps, note=f"fuel {fuel} exhausted")
    vb = rules.bounds
    if vb is not None and all(
        m.z_degree <= vb[0] and m.op_degree <= vb[1] for m in res.poly.support()
    ):
        return TrivialityResult(
            "not_trivial", res.poly, res.steps, note=f"residue within verified bounds {vb}"
        )
    return TrivialityResult(
        "unresolved", res.poly, res.steps, note="residue leaves the verified bounds"
    )


# ---------------------------------------------------------------------------
# the bounded completeness check


@dataclass
class GSReport:
    bounds: tuple[int, int]
    fuel: int
    route: str  # "hypothesis" | "raw"
    order_text: str
    generator_counts: dict
    hypothesis: list  # (name, ok, detail)
    records: list
    counts: dict
    passed: bool

    def to_text(self) -> str:
        lines = [
            f"completeness check at bounds {self.bounds}, fuel {self.fuel}",
            f"order: {self.order_text}",
            "generators: "
            + ", ".join(f"{k}={v}" for k, v in sorted(self.generator_counts.items())),
            f"route: {self.route}"
            + (
                " (schema-schema records covered by the certified-family hypotheses)"
                if self.route == "hypothesis"
                else " (every record reduced)"
            ),
        ]
        if self.hypothesis:
            lines.append("hypotheses:")
            for name, ok, detail in self.hypothesis:
                lines.append(f"  {name}: {'ok' if ok else 'FAIL'}" + (f" ({detail})" if detail else ""))
        lines.append(
            "records: "
            + ", ".join(f"{k}={v}" for k, v in sorted(self.counts.items()))
        )
        for r in self.records:
            if r.skipped:
                lines.append(f"  skipped {r.headline()}: {r.skipped}")
            elif r.verdict is not None and r.verdict.status != "trivial":
                lines.append(f"  {r.headline()}")
                lines.append(f"    value = {r.value}")
                lines.append(f"    {r.verdict.to_text()}")
        lines.append("result: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        recs = []
        for r in self.records:
            d = {
                "kind": r.kind,
                "left": r.left_id,
                "right": r.right_id,
                "w": render(r.w),
                "witness": r.witness,
                "pair": r.pair_kind,
                "value": render_opoly(r.value),
            }
            if r.skipped:
                d["status"] = "skipped"
                d["reason"] = r.skipped
            elif r.verdict is not None:
                d["status"] = r.verdict.status
                if r.verdict.status != "trivial":
                    d["residue"] = render_opoly(r.verdict.residue)
                    d["note"] = r.verdict.note
            recs.append(d)
        return {
            "bounds": list(self.bounds),
            "fuel": self.fuel,
            "route": self.route,
            "order": self.order_text,
            "generators": dict(sorted(self.generator_counts.items())),
            "hypotheses": [
                {"name": n, "ok": ok, "detail": detail} for n, ok, detail in self.hypothesis
            ],
            "records": recs,
            "counts": dict(sorted(self.counts.items())),
            "passed": self.passed,
        }


def _evaluate_hypotheses(
    gens: GeneratorSet, bounds: tuple[int, int]
) -> tuple[list, bool]:
    order = gens.order
    out: list = []
    ok_all = True
    for e in gens.entries:
        out.append(
            (
                f"{e.key}: source-asserted completeness",
                e.asserted_gs,
                "input assumption, not re-derived here",
            )
        )
        ok_all = ok_all and e.asserted_gs
    for phi in gens.opis:
        nos = check_lm_no_subword(phi, order.preset)
        out.append((f"{phi.name}: leading schema shape", nos.ok, nos.witness or nos.lm))
        ok_all = ok_all and nos.ok
    for phi in gens.opis:
        stab = check_lm_stability(phi, order, gens.alphabet, bounds, include_units=True)
        detail = (
            f"{len(stab.certified)} certified, {stab.enumerated} enumerated"
            if stab.passed
            else f"violation at {stab.violations[0][0]}"
        )
        out.append((f"{phi.name}: leading-monomial stability (units included)", stab.passed, detail))
        ok_all = ok_all and stab.passed
    bracket_free = all(m.op_degree == 0 for g in gens.concrete for m in g.support())
    if gens.concrete:
        out.append(
            (
                "concrete generators bracket-free",
                bracket_free,
                "required so their records reduce classically",
            )
        )
        ok_all = ok_all and bracket_free
    return out, ok_all


def check_gs(
    generators: GeneratorSet,
    bounds: tuple[int, int],
    fuel: int,
    route: str = "auto",
    jobs: int = 1,
) -> GSReport:
    """Enumerate every in-bounds record and decide the certification.

    ``route="auto"`` applies the certified-family argument when its
    hypotheses hold and reduces the rest; ``route="raw"`` reduces every
    record unconditionally.
    """
    if route not in ("auto", "raw"):
        raise ValueError(f"route must be 'auto' or 'raw', got {route!r}")
    gens = generators
    expanded = gens.expanded(bounds)
    ruleset = gens.ruleset(bounds)

    hyp, hyp_ok = _evaluate_hypotheses(gens, bounds)
    use_hypothesis = route == "auto" and hyp_ok and bool(gens.opis)

    records: list[CompositionRecord] = []
    for i, a in enumerate(expanded):
        for b in expanded[i:]:
            records += pair_compositions(a, b, bounds, same=(a is b))
    records.sort(key=_record_sort_key)

    to_check: list[CompositionRecord] = []
    for r in records:
        if use_hypothesis and r.pair_kind == "schema-schema":
            r.skipped = "schema-schema record; covered by the certified-family hypotheses"
        else:
            to_check.append(r)

    def judge(rec: CompositionRecord) -> TrivialityResult:
        return is_trivial(rec.value, gens, rec.w, fuel, rules=ruleset)

    if jobs > 1 and len(to_check) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            verdicts = list(ex.map(judge, to_check))
    else:
        verdicts = [judge(r) for r in to_check]
    for rec, v in zip(to_check, verdicts):
        rec.verdict = v

    counts = {
        "total": len(records),
        "skipped": sum(1 for r in records if r.skipped),
        "trivial": sum(1 for r in records if r.verdict and r.verdict.status == "trivial"),
        "not_trivial": sum(1 for r in records if r.verdict and r.verdict.status == "not_trivial"),
        "unresolved": sum(1 for r in records if r.verdict and r.verdict.status == "unresolved"),
    }
    passed = (
        counts["not_trivial"] == 0
        and counts["unresolved"] == 0
        and (not use_hypothesis or hyp_ok)
    )
    kinds = {"concrete": 0, "schema": 0, "degenerate": 0}
    for a in expanded:
        kinds[a.kind] += 1
    return GSReport(
        bounds=bounds,
        fuel=fuel,
        route="hypothesis" if use_hypothesis else "raw",
        order_text=gens.order.describe(),
        generator_counts=kinds,
        hypothesis=hyp,
        records=records,
        counts=counts,
        passed=passed,
    )


# ---------------------------------------------------------------------------
# irreducibles and quotient arithmetic


def is_irreducible(u: Word, generators: GeneratorSet) -> bool:
    """No generator pattern (schema, degenerate, or concrete) matches in u."""
    gap = generators.max_gap()
    rules = generators.ruleset((u.z_degree, u.op_degree + gap))
    return rules.find_redex(u) is None


def enumerate_irr(generators: GeneratorSet, bounds: tuple[int, int]) -> tuple[Word, ...]:
    """All irreducible words within bounds, ascending in the active order."""
    gap = generators.max_gap()
    rules = generators.ruleset((bounds[0], bounds[1] + gap))
    order = generators.order
    out = [w for w in all_words(generators.alphabet, *bounds) if rules.find_redex(w) is None]
    out.sort(key=cmp_to_key(order.compare))
    return tuple(out)


class QuotientAlgebra:
    """Arithmetic in normal forms over a boundedly verified presentation.

    Construction runs the completeness check and refuses a failing set;
    all inputs and results must stay inside the verified bounds, and any
    escape raises instead of truncating.
    """

    def __init__(
        self,
        generators: GeneratorSet,
        bounds: tuple[int, int],
        fuel: int,
        *,
        report: GSReport | None = None,
    ):
        if report is None:
            report = check_gs(generators, bounds, fuel)
        if not report.passed:
            raise ValueError(
                f"generator set is not verified at bounds {bounds}; "
                f"quotient arithmetic refused (route {report.route})"
            )
        self.generators = generators
        self.bounds = bounds
        self.fuel = fuel
        self.report = report
        self._rules = generators.ruleset(bounds)

    @property
    def order(self) -> OrderSpec:
        return self.generators.order

    def _validate(self, f: OPoly, label: str) -> None:
        for m in f.support():
            if m.z_degree > self.bounds[0] or m.op_degree > self.bounds[1]:
                raise BoundsExceeded(
                    f"{label} contains {render(m)} outside verified bounds {self.bounds}"
                )

    def nf(self, f: OPoly) -> OPoly:
        """Normal form of an in-bounds polynomial; the class representative."""
        self._validate(f, "input")
        res = normal_form(f, self._rules, self.fuel, want_trace=False)
        if res.exhausted:
            raise RuntimeError(f"fuel {self.fuel} exhausted inside the verified stratum")
        self._validate(res.poly, "normal form")
        return res.poly

    def nf_multiply(self, f: OPoly, g: OPoly) -> OPoly:
        return self.nf(f * g)

    def nf_operator(self, f: OPoly) -> OPoly:
        return self.nf(f.apply_bracket())

    def irr_basis(self) -> tuple[Word, ...]:
        return enumerate_irr(self.generators, self.bounds)


def evaluate_morphism(
    f: OPoly,
    theta: Mapping[str, Union[Word, OPoly]],
    target: QuotientAlgebra,
) -> OPoly:
    """Image of ``f`` under the operator-preserving map sending each letter
    through ``theta``, computed entirely in target normal forms."""

    def letter_image(name: str) -> OPoly:
        try:
            img = theta[name]
        except KeyError:
            raise ValueError(f"letter {name!r} has no image under the morphism")
        return OPoly.from_word(img) if isinstance(img, Word) else img

    def word_image(w: Word) -> OPoly:
        acc = OPoly.one()
        for fct in w.factors:
            if isinstance(fct, str):
                acc = target.nf_multiply(acc, letter_image(fct))
            else:
                acc = target.nf_multiply(acc, target.nf_operator(word_image(fct.inner)))
        return acc

    out = OPoly.zero()
    for w, c in f.items(reverse=False):
        out = out + word_image(w).scale(c)
    return target.nf(out)
