"""Rewriting of operated polynomials by concrete and schema rules.

Two modes share one engine:

* ordered mode carries an OrderSpec; schema rules are guarded (an
  instance fires only where its leading monomial is the matched word, so
  every step strictly descends), and unstable bounded instances are
  pre-expanded into concrete rules so nothing the guard rejects is lost;
* raw mode has no order and no guard; it implements the structural
  rewriting that the type checkers are defined by.

Redex search is position-major: top-level slices left to right
(shorter slices first at a given start), then bracket factors left to
right, recursively; at one position, rules apply in declared priority.
The randomized strategies below randomize which monomial and which
position get reduced, never the rule priority at a position, so all
strategies compute the same linear normal-form map wherever the system
is confluent per word.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence, Union

from .opi import OPI, CatalogEntry, expand_instances, instantiate, _sigma_tuples
from .orders import OrderSpec
from .poly import OPoly
from .terms import (
    HOLE,
    Alphabet,
    Bracket,
    Context,
    Word,
    align_factors,
    all_words,
    render,
    substitute,
)

__all__ = [
    "ConcreteRule",
    "Redex",
    "ReductionResult",
    "RuleSet",
    "SchemaRule",
    "TraceStep",
    "TypeReport",
    "check_diff_type",
    "check_rb_type",
    "joinable",
    "normal_form",
    "normal_form_random",
    "one_step",
]


@dataclass(frozen=True)
class ConcreteRule:
    """lhs word -> rhs polynomial, with rhs strictly below lhs when ordered."""

    rule_id: str
    lhs: Word
    rhs: OPoly

    def __post_init__(self):
        if self.lhs.is_unit():
            raise ValueError(
                f"rule {self.rule_id}: the unit as a left side would rewrite everything"
            )
        if self.rhs.coeff(self.lhs):
            raise ValueError(f"rule {self.rule_id}: lhs appears in rhs")


@dataclass(frozen=True)
class SchemaRule:
    """Pattern rule backed by an OPI; each match instantiates the identity."""

    rule_id: str
    opi: OPI
    lhs: Word  # schema word over the OPI's variables
    nonempty: frozenset[str] = frozenset()
    guarded: bool = True


Rule = Union[ConcreteRule, SchemaRule]


@dataclass(frozen=True)
class Redex:
    rule_id: str
    context: Context
    sigma: tuple[tuple[str, Word], ...] | None
    matched: Word  # the slice the rule consumed
    rhs: OPoly  # replacement for the slice


@dataclass(frozen=True)
class TraceStep:
    index: int
    rule_id: str
    context: Context
    sigma: tuple[tuple[str, Word], ...] | None
    coeff: Fraction
    monomial: Word

    def to_text(self) -> str:
        if self.sigma:
            bindings = ", ".join(f"{v}={render(w)}" for v, w in self.sigma)
        else:
            bindings = "-"
        return f"step {self.index}: rule {self.rule_id}, context {self.context}, σ {bindings}"


@dataclass
class ReductionResult:
    poly: OPoly
    steps: tuple[TraceStep, ...]
    exhausted: bool

    def trace_text(self) -> str:
        return "\n".join(s.to_text() for s in self.steps)


class RuleSet:
    """Prioritized rules plus the optional order that guards them."""

    __slots__ = ("rules", "order", "bounds", "alphabet")

    def __init__(
        self,
        rules: Sequence[Rule],
        order: OrderSpec | None,
        bounds: tuple[int, int] | None = None,
        alphabet: Alphabet | None = None,
    ):
        self.rules = tuple(rules)
        self.order = order
        self.bounds = bounds
        self.alphabet = alphabet

    @classmethod
    def ordered(
        cls,
        order: OrderSpec,
        alphabet: Alphabet,
        bounds: tuple[int, int],
        opis: Sequence[OPI] = (),
        concrete: Sequence[OPoly] = (),
        concrete_ids: Sequence[str] | None = None,
    ) -> "RuleSet":
        """Compile guarded schema rules, concrete generator rules, and the
        bounded unstable instances of the schemas as extra concrete rules."""
        rules: list[Rule] = []
        for phi in opis:
            rules.append(
                SchemaRule(rule_id=phi.name, opi=phi, lhs=phi.lm(order.preset), guarded=True)
            )
        seen_polys: set[OPoly] = set()
        for i, g in enumerate(concrete):
            if g.is_zero():
                raise ValueError("zero polynomial cannot be a generator")
            monic = g.monicize(order)
            lhs, _ = monic.leading(order)
            if lhs.is_unit():
                raise ValueError(
                    "generator with constant leading monomial presents the unit ideal"
                )
            seen_polys.add(monic)
            rid = concrete_ids[i] if concrete_ids else f"g{i}"
            rules.append(ConcreteRule(rid, lhs, OPoly.from_word(lhs) - monic))
        for rec in expand_instances(opis, alphabet, bounds, order):
            if rec.lm.is_unit():
                # nonzero constant instance, stable or not
                raise ValueError(
                    f"instance {rec.gen_id()} is a nonzero constant; the ideal is the unit ideal"
                )
            if rec.stable:
                continue
            monic = rec.poly.monicize(order)
            if monic in seen_polys:
                continue
            seen_polys.add(monic)
            rules.append(
                ConcreteRule(rec.gen_id(), rec.lm, OPoly.from_word(rec.lm) - monic)
            )
        return cls(rules, order, bounds, alphabet)

    @classmethod
    def raw(cls, rules: Sequence[Rule]) -> "RuleSet":
        fixed = []
        for r in rules:
            if isinstance(r, SchemaRule) and r.guarded:
                r = SchemaRule(r.rule_id, r.opi, r.lhs, r.nonempty, guarded=False)
            fixed.append(r)
        return cls(fixed, order=None)

    # -- redex search ----------------------------------------------------

    def _rhs_for_schema(self, rule: SchemaRule, slice_word: Word, sigma: dict) -> OPoly | None:
        inst = instantiate(rule.opi, sigma)
        if inst.is_zero():
            return None
        if self.order is not None and rule.guarded:
            lm, lc = inst.leading(self.order)
            if lm != slice_word:
                return None
            inst = inst.scale(Fraction(1) / lc)
        else:
            lc = inst.coeff(slice_word)
            if lc != 1:
                # raw rules come from bodies with unit leading coefficient
                if not lc:
                    return None
                inst = inst.scale(Fraction(1) / lc)
        return OPoly.from_word(slice_word) - inst

    def iter_redexes(self, w: Word) -> Iterator[Redex]:
        fs = w.factors
        n = len(fs)
        for i in range(n):
            for j in range(i + 1, n + 1):
                sl = fs[i:j]
                wrap = fs[:i] + (HOLE,) + fs[j:]
                for rule in self.rules:
                    if isinstance(rule, ConcreteRule):
                        if sl == rule.lhs.factors:
                            yield Redex(rule.rule_id, Context(Word(wrap)), None, rule.lhs, rule.rhs)
                    else:
                        slice_word = None
                        for sigma in align_factors(
                            rule.lhs.factors, sl, frozenset(rule.opi.variables), rule.nonempty
                        ):
                            if slice_word is None:
                                slice_word = Word(sl)
                            rhs = self._rhs_for_schema(rule, slice_word, sigma)
                            if rhs is None:
                                continue
                            yield Redex(
                                rule.rule_id,
                                Context(Word(wrap)),
                                tuple((v, sigma[v]) for v in rule.opi.variables),
                                slice_word,
                                rhs,
                            )
        for idx, f in enumerate(fs):
            if isinstance(f, Bracket):
                for rdx in self.iter_redexes(f.inner):
                    outer = Word(fs[:idx] + (Bracket(rdx.context.word),) + fs[idx + 1 :])
                    yield Redex(rdx.rule_id, Context(outer), rdx.sigma, rdx.matched, rdx.rhs)

    def find_redex(self, w: Word) -> Redex | None:
        return next(self.iter_redexes(w), None)

    def position_redexes(self, w: Word) -> list[Redex]:
        """First applicable rule at each position, in scan order."""
        out: list[Redex] = []
        seen: set[Word] = set()
        for rdx in self.iter_redexes(w):
            key = rdx.context.word
            if key in seen:
                continue
            seen.add(key)
            out.append(rdx)
        return out

    def is_reducible(self, w: Word) -> bool:
        return self.find_redex(w) is not None

    def describe(self) -> str:
        schemas = sum(1 for r in self.rules if isinstance(r, SchemaRule))
        concrete = len(self.rules) - schemas
        mode = f"ordered[{self.order.preset}]" if self.order else "raw"
        return f"{mode}: {schemas} schema rule(s), {concrete} concrete rule(s)"


def _apply_redex(f: OPoly, w: Word, c: Fraction, rdx: Redex, order: OrderSpec | None) -> OPoly:
    replacement = substitute(rdx.context, rdx.rhs)
    if order is not None and replacement:
        hi = replacement.leading_monomial(order)
        assert order.compare(hi, w) < 0, (
            f"non-descending step: {render(hi)} !< {render(w)} via {rdx.rule_id}"
        )
    return f - OPoly.from_word(w, c) + replacement.scale(c)


def one_step(f: OPoly, rules: RuleSet, index: int = 0) -> tuple[OPoly, TraceStep] | None:
    """Reduce the greatest reducible monomial at its first position."""
    for w, c in f.items(rules.order):
        rdx = rules.find_redex(w)
        if rdx is not None:
            step = TraceStep(index, rdx.rule_id, rdx.context, rdx.sigma, c, w)
            return _apply_redex(f, w, c, rdx, rules.order), step
    return None


def normal_form(f: OPoly, rules: RuleSet, fuel: int, *, want_trace: bool = True) -> ReductionResult:
    """Iterate one_step until irreducible or out of fuel."""
    steps: list[TraceStep] = []
    cur = f
    for k in range(fuel):
        hit = one_step(cur, rules, index=k)
        if hit is None:
            return ReductionResult(cur, tuple(steps) if want_trace else (), False)
        cur, st = hit
        if want_trace:
            steps.append(st)
    still = any(rules.find_redex(w) is not None for w, _ in cur.items(rules.order))
    return ReductionResult(cur, tuple(steps) if want_trace else (), still)


def normal_form_random(
    f: OPoly,
    rules: RuleSet,
    fuel: int,
    rng: random.Random,
    *,
    want_trace: bool = False,
) -> ReductionResult:
    """Like normal_form, but the reducible monomial and the position are
    chosen by ``rng``.  Rule priority at a position stays fixed."""
    steps: list[TraceStep] = []
    cur = f
    for k in range(fuel):
        choices: list[tuple[Word, Fraction, list[Redex]]] = []
        for w, c in cur.items(rules.order):
            pos = rules.position_redexes(w)
            if pos:
                choices.append((w, c, pos))
        if not choices:
            return ReductionResult(cur, tuple(steps), False)
        w, c, pos = choices[rng.randrange(len(choices))]
        rdx = pos[rng.randrange(len(pos))]
        cur = _apply_redex(cur, w, c, rdx, rules.order)
        if want_trace:
            steps.append(TraceStep(k, rdx.rule_id, rdx.context, rdx.sigma, c, w))
    for w, _ in cur.items(rules.order):
        if rules.find_redex(w) is not None:
            return ReductionResult(cur, tuple(steps), True)
    return ReductionResult(cur, tuple(steps), False)


def joinable(f: OPoly, g: OPoly, rules: RuleSet, fuel: int) -> bool | None:
    """True/False when both normal forms land; None when fuel runs out."""
    rf = normal_form(f, rules, fuel, want_trace=False)
    rg = normal_form(g, rules, fuel, want_trace=False)
    if rf.exhausted or rg.exhausted:
        return None
    return rf.poly == rg.poly


# ---------------------------------------------------------------------------
# shape checks for the two rewriting families


@dataclass
class TypeReport:
    """Condition-by-condition outcome of a family membership check."""

    opi: str
    family: str
    bounds: tuple[int, int]
    fuel: int
    conditions: list = field(default_factory=list)  # (label, ok, detail)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.conditions)

    def add(self, label: str, ok: bool, detail: str = "") -> None:
        self.conditions.append((label, ok, detail))

    def to_text(self) -> str:
        lines = [f"{self.family} check for {self.opi} at bounds {self.bounds}, fuel {self.fuel}"]
        for label, ok, detail in self.conditions:
            mark = "pass" if ok else "FAIL"
            lines.append(f"  {label}: {mark}" + (f" ({detail})" if detail else ""))
        lines.append("  => " + ("PASSED" if self.passed else "FAILED"))
        return "\n".join(lines)


def _as_opi(candidate: Union[OPI, CatalogEntry]) -> OPI:
    if isinstance(candidate, CatalogEntry):
        if len(candidate.opis) != 1:
            raise ValueError(f"{candidate.key}: family checks need a single identity")
        return candidate.opis[0]
    return candidate


def _extract_rest(body: OPoly, lead: Word, name: str) -> OPoly:
    lc = body.coeff(lead)
    if not lc:
        raise ValueError(f"{name}: expected leading pattern {render(lead)} is absent")
    scaled = body.scale(Fraction(1) / lc)
    return OPoly.from_word(lead) - scaled


def _scan_adjacent_nonunit_brackets(w: Word) -> str | None:
    fs = w.factors
    for i in range(len(fs) - 1):
        a, b = fs[i], fs[i + 1]
        if (
            isinstance(a, Bracket)
            and isinstance(b, Bracket)
            and not a.inner.is_unit()
            and not b.inner.is_unit()
        ):
            return f"[{render(a.inner)}]*[{render(b.inner)}]"
    for f in fs:
        if isinstance(f, Bracket):
            hit = _scan_adjacent_nonunit_brackets(f.inner)
            if hit:
                return hit
    return None


def _scan_wide_bracket(w: Word) -> str | None:
    for f in w.factors:
        if isinstance(f, Bracket):
            if f.inner.breadth >= 2:
                return f"[{render(f.inner)}]"
            hit = _scan_wide_bracket(f.inner)
            if hit:
                return hit
    return None


def check_rb_type(
    candidate: Union[OPI, CatalogEntry],
    alphabet: Alphabet,
    bounds: tuple[int, int],
    fuel: int,
) -> TypeReport:
    """Bracket-pair family membership: the identity must collapse a pair
    of bracket factors into one bracket, with a linear collapse map whose
    induced rewriting terminates at bounds and is associative up to
    rewriting (units included in the probe tuples, jointly budgeted)."""
    phi = _as_opi(candidate)
    rep = TypeReport(opi=phi.name, family="bracket-pair", bounds=bounds, fuel=fuel)
    if phi.arity != 2:
        rep.add("shape", False, f"needs exactly 2 variables, got {phi.arity}")
        return rep
    x, y = phi.variables
    lead = Word((Bracket(Word((x,))), Bracket(Word((y,)))))
    try:
        rest = _extract_rest(phi.body, lead, phi.name)
    except ValueError as exc:
        rep.add("shape", False, str(exc))
        return rep
    inner_terms: list[tuple[Word, Fraction]] = []
    for m, c in rest.items(reverse=False):
        if m.breadth != 1 or not isinstance(m.factors[0], Bracket):
            rep.add("shape", False, f"residual term {render(m)} is not a single bracket")
            return rep
        inner_terms.append((m.factors[0].inner, c))
    b_poly = OPoly(inner_terms)
    rep.add("shape", True, f"collapse map with {len(b_poly)} term(s)")
    rep.add("(a) linearity", True, "multilinear by construction")

    witness = None
    for m in b_poly.support():
        witness = _scan_adjacent_nonunit_brackets(m)
        if witness:
            break
    rep.add(
        "(b) no forbidden subword",
        witness is None,
        witness or "no adjacent brackets with nonunit inners",
    )
    if witness is not None:
        return rep

    rules = RuleSet.raw([SchemaRule(phi.name, phi, lead, guarded=False)])
    max_z, max_op = bounds
    stuck = None
    for w in all_words(alphabet, max_z, max_op):
        res = normal_form(OPoly.from_word(w), rules, fuel, want_trace=False)
        if res.exhausted:
            stuck = render(w)
            break
    rep.add("(c) termination at bounds", stuck is None, stuck or "all bounded words reduce")
    if stuck is not None:
        return rep

    b_expr = OPI(f"{phi.name}.collapse", (x, y), b_poly)
    letters = tuple(alphabet.letters)
    bad = None
    for u, v, w in _sigma_tuples(letters, 3, max_z, max_op):
        left = instantiate(b_expr, {x: instantiate(b_expr, {x: u, y: v}), y: OPoly.from_word(w)})
        right = instantiate(b_expr, {x: OPoly.from_word(u), y: instantiate(b_expr, {x: v, y: w})})
        res = normal_form(left - right, rules, fuel, want_trace=False)
        if res.exhausted:
            bad = f"fuel exhausted at ({render(u)}, {render(v)}, {render(w)})"
            break
        if not res.poly.is_zero():
            bad = (
                f"({render(u)}, {render(v)}, {render(w)}) leaves {res.poly}"
            )
            break
    rep.add("(d) associativity closure", bad is None, bad or "all jointly bounded triples close")
    return rep


def check_diff_type(
    candidate: Union[OPI, CatalogEntry],
    alphabet: Alphabet,
    bounds: tuple[int, int],
    fuel: int,
) -> TypeReport:
    """Bracket-of-product family membership: the identity expands the
    bracket of a product through a linear map with no wide brackets, and
    the induced rewriting (nontrivial splits only) satisfies the cocycle
    closure on jointly bounded nonunit triples."""
    phi = _as_opi(candidate)
    rep = TypeReport(opi=phi.name, family="bracket-of-product", bounds=bounds, fuel=fuel)
    if phi.arity != 2:
        rep.add("shape", False, f"needs exactly 2 variables, got {phi.arity}")
        return rep
    x, y = phi.variables
    lead = Word((Bracket(Word((x, y))),))
    try:
        rest = _extract_rest(phi.body, lead, phi.name)
    except ValueError as exc:
        rep.add("shape", False, str(exc))
        return rep
    n_poly = rest
    rep.add("shape", True, f"expansion map with {len(n_poly)} term(s)")
    rep.add("(a) linearity", True, "multilinear by construction")

    witness = None
    for m in n_poly.support():
        witness = _scan_wide_bracket(m)
        if witness:
            break
    rep.add(
        "(b) no forbidden subword",
        witness is None,
        witness or "no bracket factor has a product inside",
    )
    if witness is not None:
        return rep

    rules = RuleSet.raw([SchemaRule(phi.name, phi, lead, nonempty=frozenset((x, y)), guarded=False)])
    max_z, max_op = bounds
    stuck = None
    for w in all_words(alphabet, max_z, max_op):
        res = normal_form(OPoly.from_word(w), rules, fuel, want_trace=False)
        if res.exhausted:
            stuck = render(w)
            break
    rep.add("termination at bounds", stuck is None, stuck or "all bounded words reduce")
    if stuck is not None:
        return rep

    n_expr = OPI(f"{phi.name}.expand", (x, y), n_poly)
    letters = tuple(alphabet.letters)
    bad = None
    for u, v, w in _sigma_tuples(letters, 3, max_z, max_op):
        if u.is_unit() or v.is_unit() or w.is_unit():
            continue
        left = instantiate(n_expr, {x: u * v, y: OPoly.from_word(w)})
        right = instantiate(n_expr, {x: OPoly.from_word(u), y: v * w})
        res = normal_form(left - right, rules, fuel, want_trace=False)
        if res.exhausted:
            bad = f"fuel exhausted at ({render(u)}, {render(v)}, {render(w)})"
            break
        if not res.poly.is_zero():
            bad = f"({render(u)}, {render(v)}, {render(w)}) leaves {res.poly}"
            break
    rep.add("(c) cocycle closure", bad is None, bad or "all jointly bounded nonunit triples close")
    return rep
