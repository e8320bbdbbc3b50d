"""Operated polynomial identities (OPIs) and the built-in catalog.

An OPI is a multilinear polynomial in ordered schema variables
``x1, x2, ...``: every monomial of the body contains each variable exactly
once (at any depth).  Substituting words or polynomials for the variables
produces ordinary operated polynomials; the set of all word instances of a
family is the schema part of a generating set.

The catalog ships the bracket-pair families (``rb:1`` .. ``rb:14``,
``nijenhuis``), the bracket-of-product families (``diff:1`` .. ``diff:6``,
``diffprime``), and the derived ``averaging`` and ``reynolds`` families.
Each entry records the order preset its leading schema is meant for,
whether its leading monomial survives unit assignments, and whether the
family is asserted to be a self-complete rewriting basis (an input
assumption that bounded checks cannot establish on their own).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .orders import OrderSpec
from .poly import OPoly
from .terms import Alphabet, Bracket, Word, all_words, render

__all__ = [
    "OPI",
    "Catalog",
    "CatalogEntry",
    "InstanceRecord",
    "NoSubwordReport",
    "StabilityReport",
    "catalog_help",
    "check_lm_no_subword",
    "check_lm_stability",
    "expand_instances",
    "instantiate",
    "parse_catalog",
    "s_phi_enumerate",
]

_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


def _var_counts(w: Word, variables: frozenset[str], acc: dict[str, int]) -> None:
    for f in w.factors:
        if isinstance(f, str):
            if f in variables:
                acc[f] = acc.get(f, 0) + 1
        else:
            _var_counts(f.inner, variables, acc)


class OPI:
    """Named multilinear identity over ordered variables."""

    __slots__ = ("name", "variables", "body", "_lm_cache")

    def __init__(self, name: str, variables: Sequence[str], body: OPoly):
        vs = tuple(variables)
        if not vs:
            raise ValueError("an OPI needs at least one variable")
        if len(set(vs)) != len(vs):
            raise ValueError(f"duplicate variables in {vs}")
        for v in vs:
            if not _IDENT_RE.fullmatch(v):
                raise ValueError(f"bad variable name {v!r}")
        if body.is_zero():
            raise ValueError(f"OPI {name}: body is zero")
        vset = frozenset(vs)
        for m in body.support():
            counts: dict[str, int] = {}
            _var_counts(m, vset, counts)
            bad = [v for v in vs if counts.get(v, 0) != 1]
            if bad:
                raise ValueError(
                    f"OPI {name}: monomial {render(m)} is not multilinear in {','.join(bad)}"
                )
        self.name = name
        self.variables = vs
        self.body = body
        self._lm_cache: dict[str, Word] = {}

    @property
    def arity(self) -> int:
        return len(self.variables)

    def order_for(self, preset: str) -> OrderSpec:
        """Order used to compare schema monomials: variables are the base."""
        return OrderSpec(preset, self.variables)

    def lm(self, preset: str) -> Word:
        """Leading schema monomial of the body under the preset."""
        got = self._lm_cache.get(preset)
        if got is None:
            got = self.body.leading_monomial(self.order_for(preset))
            self._lm_cache[preset] = got
        return got

    def op_gap(self, preset: str) -> int:
        """op_degree headroom between the leading schema and the lowest
        monomial; instance enumeration widens its net by this much."""
        lead_op = self.lm(preset).op_degree
        return lead_op - min(m.op_degree for m in self.body.support())

    def instantiate(self, sigma: Mapping[str, Union[Word, OPoly]]) -> OPoly:
        return instantiate(self, sigma)

    def __repr__(self) -> str:
        return f"OPI({self.name}: {self.body})"


def _subst_word(m: Word, sigma: Mapping[str, Union[Word, OPoly]], variables: frozenset[str]) -> OPoly:
    # expand one schema monomial; polynomial values distribute
    acc: list[tuple[tuple, Fraction]] = [((), Fraction(1))]
    for f in m.factors:
        if isinstance(f, str) and f in variables:
            val = sigma[f]
            if isinstance(val, Word):
                acc = [(fs + val.factors, c) for fs, c in acc]
            else:
                acc = [
                    (fs + w.factors, c * cw)
                    for fs, c in acc
                    for w, cw in val.items(reverse=False)
                ]
        elif isinstance(f, str):
            acc = [(fs + (f,), c) for fs, c in acc]
        else:
            inner = _subst_word(f.inner, sigma, variables)
            acc = [
                (fs + (Bracket(w),), c * cw)
                for fs, c in acc
                for w, cw in inner.items(reverse=False)
            ]
    return OPoly((Word(fs), c) for fs, c in acc)


def instantiate(phi: OPI, sigma: Mapping[str, Union[Word, OPoly]]) -> OPoly:
    """Substitute words or polynomials for the variables of ``phi``.

    Every variable must be assigned; polynomial values distribute by
    multilinearity.  The result may be zero (instances can cancel).
    """
    missing = [v for v in phi.variables if v not in sigma]
    if missing:
        raise ValueError(f"OPI {phi.name}: missing assignment for {','.join(missing)}")
    extra = [k for k in sigma if k not in phi.variables]
    if extra:
        raise ValueError(f"OPI {phi.name}: unknown variable(s) {','.join(sorted(extra))}")
    vset = frozenset(phi.variables)
    out = OPoly.zero()
    for m, c in phi.body.items(reverse=False):
        out = out + _subst_word(m, sigma, vset).scale(c)
    return out


def instantiate_word(schema: Word, sigma: Mapping[str, Word], variables: frozenset[str]) -> Word:
    """Plug word values into a schema word (no polynomials)."""
    out: list = []
    for f in schema.factors:
        if isinstance(f, str) and f in variables:
            out.extend(sigma[f].factors)
        elif isinstance(f, str):
            out.append(f)
        else:
            out.append(Bracket(instantiate_word(f.inner, sigma, variables)))
    return Word(out)


# ---------------------------------------------------------------------------
# instance enumeration


@dataclass(frozen=True)
class InstanceRecord:
    """One word instance of an OPI, tagged with leading-monomial data."""

    opi: OPI
    sigma: tuple[tuple[str, Word], ...]
    poly: OPoly
    lm: Word
    stable: bool  # True when lm is the instantiated leading schema

    def sigma_text(self) -> str:
        return ", ".join(f"{v}={render(w)}" for v, w in self.sigma)

    def gen_id(self) -> str:
        return f"{self.opi.name}[{self.sigma_text()}]"


@lru_cache(maxsize=None)
def _words_upto(letters: tuple[str, ...], max_z: int, max_op: int) -> tuple[Word, ...]:
    return all_words(letters, max_z, max_op)


def _sigma_tuples(
    letters: tuple[str, ...], arity: int, z_budget: int, op_budget: int
) -> Iterator[tuple[Word, ...]]:
    if arity == 0:
        yield ()
        return
    for w in _words_upto(letters, z_budget, op_budget):
        for rest in _sigma_tuples(letters, arity - 1, z_budget - w.z_degree, op_budget - w.op_degree):
            yield (w,) + rest


def expand_instances(
    opis: Sequence[OPI],
    alphabet: Alphabet,
    bounds: tuple[int, int],
    order: OrderSpec,
) -> tuple[InstanceRecord, ...]:
    """All nonzero word instances whose true leading monomial fits the
    bounds, deduplicated, in a deterministic order.

    The assignment net is sized so nothing is missed: instance z_degree is
    exact under multilinearity, and each monomial's op_degree is its schema
    op_degree plus the assignment total, so capping the total at
    ``max_op - min_schema_op`` covers every monomial that could lead.
    """
    max_z, max_op = bounds
    letters = tuple(alphabet.letters)
    out: list[InstanceRecord] = []
    seen: set[OPoly] = set()
    for phi in opis:
        schema_lm = phi.lm(order.preset)
        vset = frozenset(phi.variables)
        concrete_z = schema_lm.z_degree - phi.arity
        z_budget = max_z - concrete_z
        op_budget = max_op - min(m.op_degree for m in phi.body.support())
        if z_budget < 0 or op_budget < 0:
            continue
        for values in _sigma_tuples(letters, phi.arity, z_budget, op_budget):
            sigma = dict(zip(phi.variables, values))
            inst = instantiate(phi, sigma)
            if inst.is_zero():
                continue
            lm = inst.leading_monomial(order)
            if lm.z_degree > max_z or lm.op_degree > max_op:
                continue
            key = inst.monicize(order)
            if key in seen:
                continue
            seen.add(key)
            expected = instantiate_word(schema_lm, sigma, vset)
            out.append(
                InstanceRecord(
                    opi=phi,
                    sigma=tuple(zip(phi.variables, values)),
                    poly=inst,
                    lm=lm,
                    stable=(lm == expected),
                )
            )
    return tuple(out)


def s_phi_enumerate(
    opis: Sequence[OPI],
    alphabet: Alphabet,
    bounds: tuple[int, int],
    order: OrderSpec,
) -> tuple[OPoly, ...]:
    """The bounded schema part of a generating set: every distinct nonzero
    instance whose leading monomial fits ``bounds``."""
    return tuple(rec.poly for rec in expand_instances(opis, alphabet, bounds, order))


# ---------------------------------------------------------------------------
# leading-schema checks


@dataclass
class NoSubwordReport:
    opi: str
    lm: str
    ok: bool
    witness: str | None = None

    def to_text(self) -> str:
        if self.ok:
            return f"{self.opi}: leading schema {self.lm} has no adjacent-variable block"
        return f"{self.opi}: leading schema {self.lm} contains adjacent variables {self.witness}"


def check_lm_no_subword(phi: OPI, preset: str) -> NoSubwordReport:
    """Reject leading schemas with two adjacent variable factors anywhere.

    Instances of such a schema can swallow products of generator leading
    words, which is exactly what the certified route must exclude.
    """
    lm = phi.lm(preset)
    vset = frozenset(phi.variables)

    def scan(w: Word) -> str | None:
        fs = w.factors
        for i in range(len(fs) - 1):
            a, b = fs[i], fs[i + 1]
            if isinstance(a, str) and isinstance(b, str) and a in vset and b in vset:
                return f"{a}*{b}"
        for f in fs:
            if isinstance(f, Bracket):
                hit = scan(f.inner)
                if hit:
                    return hit
        return None

    witness = scan(lm)
    return NoSubwordReport(opi=phi.name, lm=render(lm), ok=witness is None, witness=witness)


@dataclass
class StabilityReport:
    """Outcome of the leading-monomial stability check."""

    opi: str
    preset: str
    bounds: tuple[int, int]
    include_units: bool
    certified: list = field(default_factory=list)  # (monomial text, reason)
    enumerated: int = 0
    domain: str = ""
    violations: list = field(default_factory=list)  # (sigma text, got-lm text)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_text(self) -> str:
        head = (
            f"lm stability [{self.opi}] preset {self.preset} bounds {self.bounds} "
            f"units={'in' if self.include_units else 'out'}"
        )
        lines = [head]
        for mono, reason in self.certified:
            lines.append(f"  certified vs {mono}: {reason}")
        if self.enumerated:
            lines.append(f"  enumerated {self.enumerated} assignments ({self.domain})")
        for sig, got in self.violations:
            lines.append(f"  VIOLATION at {sig}: leading monomial {got}")
        lines.append("  ok" if self.passed else "  FAILED")
        return "\n".join(lines)


def _has_top_level_variable(w: Word, vset: frozenset[str]) -> bool:
    return any(isinstance(f, str) and f in vset for f in w.factors)


def check_lm_stability(
    phi: OPI,
    order: OrderSpec,
    alphabet: Alphabet,
    bounds: tuple[int, int],
    include_units: bool = True,
) -> StabilityReport:
    """Verify the leading monomial commutes with instantiation at bounds.

    For each assignment of words within ``bounds`` (per value), the
    instance must vanish or lead with the instantiated leading schema.
    Monomials whose defeat is forced by measures alone are certified
    structurally without enumeration: z_degree differences are constant
    under multilinearity, op_degree differences likewise, and when neither
    side has a top-level variable the breadths are constant too.  Only the
    remaining monomials trigger exhaustive enumeration.
    """
    rep = StabilityReport(
        opi=phi.name,
        preset=order.preset,
        bounds=bounds,
        include_units=include_units,
    )
    lm = phi.lm(order.preset)
    vset = frozenset(phi.variables)
    op_second = order.preset in ("db", "dt")
    uncertified: list[Word] = []
    for m in phi.body.support():
        if m == lm:
            continue
        dz = lm.z_degree - m.z_degree
        dop = lm.op_degree - m.op_degree
        if dz > 0:
            rep.certified.append((render(m), f"z_degree gap {dz}"))
            continue
        if dz == 0 and op_second and dop > 0:
            rep.certified.append((render(m), f"op_degree gap {dop}"))
            continue
        if (
            dz == 0
            and dop == 0
            and op_second
            and not _has_top_level_variable(lm, vset)
            and not _has_top_level_variable(m, vset)
        ):
            db_wins = lm.breadth > m.breadth
            dt_wins = lm.breadth < m.breadth
            if (order.preset == "db" and db_wins) or (order.preset == "dt" and dt_wins):
                rep.certified.append(
                    (render(m), f"constant breadth {lm.breadth} vs {m.breadth}")
                )
                continue
        uncertified.append(m)

    if not uncertified:
        rep.domain = "none needed"
        return rep

    max_z, max_op = bounds
    letters = tuple(alphabet.letters)
    if phi.arity <= 2:
        values = _words_upto(letters, max_z, max_op)
        pools: Iterable[tuple[Word, ...]] = _product_tuples(values, phi.arity)
        rep.domain = f"per-value within {bounds}"
    else:
        # joint budget keeps high-arity enumeration tractable
        pools = _sigma_tuples(letters, phi.arity, max_z, max_op)
        rep.domain = f"joint budget within {bounds}"

    count = 0
    for tup in pools:
        if not include_units and any(w.is_unit() for w in tup):
            continue
        sigma = dict(zip(phi.variables, tup))
        inst = instantiate(phi, sigma)
        count += 1
        if inst.is_zero():
            continue
        expected = instantiate_word(lm, sigma, vset)
        got = inst.leading_monomial(order)
        if got != expected:
            if len(rep.violations) < 10:
                sig = ", ".join(f"{v}={render(w)}" for v, w in zip(phi.variables, tup))
                rep.violations.append((sig, render(got)))
    rep.enumerated = count
    return rep


def _product_tuples(values: tuple[Word, ...], arity: int) -> Iterator[tuple[Word, ...]]:
    if arity == 0:
        yield ()
        return
    for w in values:
        for rest in _product_tuples(values, arity - 1):
            yield (w,) + rest


# ---------------------------------------------------------------------------
# catalog


@dataclass(frozen=True)
class CatalogEntry:
    """A resolved catalog selector: OPIs plus their order metadata."""

    key: str
    family: str
    opis: tuple[OPI, ...]
    preset: str
    params: tuple[tuple[str, Fraction], ...]
    asserted_gs: bool
    units_stable: bool
    note: str = ""

    def describe(self) -> str:
        lines = [f"{self.key}  (preset {self.preset})"]
        for phi in self.opis:
            lines.append(f"  {phi.name}: {phi.body}")
        if self.note:
            lines.append(f"  note: {self.note}")
        return "\n".join(lines)


_X1, _X2 = "x1", "x2"


def _w(*fs) -> Word:
    return Word(fs)


def _b(*fs) -> Bracket:
    return Bracket(Word(fs))


def _rb_b_poly(item: int, lam: Fraction, c: Fraction) -> OPoly:
    x, y = _X1, _X2
    t: dict[Word, Fraction] = {}

    def add(word: Word, coeff) -> None:
        t[word] = t.get(word, Fraction(0)) + Fraction(coeff)

    if item == 1:
        add(_w(x, _b(y)), 1)
    elif item == 2:
        add(_w(_b(x), y), 1)
    elif item == 3:
        add(_w(x, _b(y)), 1)
        add(_w(y, _b(x)), 1)
    elif item == 4:
        add(_w(_b(x), y), 1)
        add(_w(_b(y), x), 1)
    elif item == 5:
        add(_w(x, _b(y)), 1)
        add(_w(_b(x), y), 1)
        add(_w(_b(x, y)), -1)
    elif item == 6:
        add(_w(x, _b(y)), 1)
        add(_w(_b(x), y), 1)
        add(_w(x, y), lam)
    elif item == 7:
        add(_w(x, _b(y)), 1)
        add(_w(x, _b(), y), -1)
        add(_w(x, y), lam)
    elif item == 8:
        add(_w(_b(x), y), 1)
        add(_w(x, _b(), y), -1)
        add(_w(x, y), lam)
    elif item == 9:
        add(_w(x, _b(y)), 1)
        add(_w(_b(x), y), 1)
        add(_w(x, _b(), y), -1)
        add(_w(x, y), lam)
    elif item == 10:
        add(_w(x, _b(y)), 1)
        add(_w(_b(x), y), 1)
        add(_w(x, y, _b()), -1)
        add(_w(x, _b(), y), -1)
        add(_w(x, y), lam)
    elif item == 11:
        add(_w(x, _b(y)), 1)
        add(_w(_b(x), y), 1)
        add(_w(x, _b(), y), -1)
        add(_w(_b(x, y)), -1)
        add(_w(x, y), lam)
    elif item == 12:
        add(_w(x, _b(y)), 1)
        add(_w(_b(x), y), 1)
        add(_w(x, _b(), y), -1)
        add(_w(_b(), x, y), -1)
        add(_w(x, y), lam)
    elif item == 13:
        add(_w(x, _b(), y), c)
        add(_w(x, y), lam)
    elif item == 14:
        add(_w(y, _b(), x), c)
        add(_w(y, x), lam)
    else:
        raise ValueError(f"rb item must be 1..14, got {item}")
    return OPoly(t)


def _rb_body(item: int, lam: Fraction, c: Fraction) -> OPoly:
    lead = OPoly.from_word(_w(_b(_X1), _b(_X2)))
    return lead - _rb_b_poly(item, lam, c).apply_bracket()


def _diff_n_poly(item: int, params: dict[str, Fraction]) -> OPoly:
    x, y = _X1, _X2
    t: dict[Word, Fraction] = {}

    def add(word: Word, coeff) -> None:
        co = Fraction(coeff)
        if co:
            t[word] = t.get(word, Fraction(0)) + co

    if item == 1:
        a, b, c = params["a"], params["b"], params["c"]
        if a * a != a + b * c:
            raise ValueError(f"diff:1 needs a^2 = a + b*c; got a={a}, b={b}, c={c}")
        if b != 0:
            raise ValueError(
                "diff:1 with b != 0 is not supported by preset dt: "
                "the bracket-pair term would outrank the bracket of the product"
            )
        add(_w(x, _b(y)), a)
        add(_w(_b(x), y), a)
        add(_w(_b(x), _b(y)), b)
        add(_w(x, y), c)
    elif item == 2:
        a, b = params["a"], params["b"]
        if a != 0:
            raise ValueError(
                "diff:2 with a != 0 is not supported by preset dt: "
                "the bracket-pair term would outrank the bracket of the product"
            )
        add(_w(y, x), a * b * b)
        add(_w(x, y), b)
        add(_w(_b(y), _b(x)), a)
        add(_w(y, _b(x)), -a * b)
        add(_w(_b(y), x), -a * b)
    elif item == 3:
        weights = {k: v for k, v in params.items() if k.startswith("l")}
        if not weights:
            raise ValueError("diff:3 needs at least one weight lIJ (e.g. l00=1)")
        for k, v in weights.items():
            m = re.fullmatch(r"l(\d)(\d)", k)
            if not m:
                raise ValueError(f"diff:3 weight {k!r} must look like l00, l01, l10, ...")
            i, j = int(m.group(1)), int(m.group(2))
            if v and i + j > 1:
                raise ValueError(
                    f"diff:3 weight {k}={v} is not supported by preset dt: "
                    "two or more unit brackets outrank the bracket of the product"
                )
            add(_w(*(( _b(),) * i + (x, y) + (_b(),) * j)), v)
        if not t:
            raise ValueError("diff:3: all weights vanish")
    elif item == 4:
        a, b = params["a"], params["b"]
        add(_w(x, _b(y)), 1)
        add(_w(_b(x), y), 1)
        add(_w(x, _b(), y), a)
        add(_w(x, y), b)
    elif item == 5:
        a = params["a"]
        add(_w(_b(x), y), 1)
        add(_w(x, _b(), y), a)
        add(_w(x, y, _b()), -a)
    elif item == 6:
        a = params["a"]
        add(_w(x, _b(y)), 1)
        add(_w(x, _b(), y), a)
        add(_w(_b(), x, y), -a)
    else:
        raise ValueError(f"diff item must be 1..6, got {item}")
    return OPoly(t)


def _diff_body(item: int, params: dict[str, Fraction]) -> OPoly:
    lead = OPoly.from_word(_w(_b(_X1, _X2)))
    return lead - _diff_n_poly(item, params)


def _reynolds_opi(n: int) -> OPI:
    vs = tuple(f"x{i}" for i in range(1, n + 1))
    wrapped = tuple(_b(v) for v in vs)
    t: dict[Word, Fraction] = {}
    t[_w(_b(*wrapped))] = Fraction(1)
    t[Word(wrapped)] = Fraction(1)
    for i in range(n):
        inner = wrapped[:i] + (vs[i],) + wrapped[i + 1 :]
        t[_w(Bracket(Word(inner)))] = Fraction(-1)
    return OPI(f"reynolds:{n}", vs, OPoly(t))


def _averaging_opis() -> tuple[OPI, ...]:
    a = OPI(
        "averaging:A",
        (_X1, _X2),
        OPoly({_w(_b(_b(_X1), _X2)): 1, _w(_b(_X1), _b(_X2)): -1}),
    )
    b = OPI(
        "averaging:B",
        (_X1, _X2),
        OPoly({_w(_b(_X1, _b(_X2))): 1, _w(_b(_X1), _b(_X2)): -1}),
    )
    c = OPI(
        "averaging:C",
        (_X1, _X2),
        OPoly({_w(_b(_b(_X1)), _b(_X2)): 1, _w(_b(_X1), _b(_b(_X2))): -1}),
    )
    return (a, b, c)


_PARAM_DEFAULTS = {
    "rb": {"lambda": Fraction(0), "c": Fraction(1)},
    "diff1": {"a": Fraction(1), "b": Fraction(0), "c": Fraction(0)},
    "diff2": {"a": Fraction(0), "b": Fraction(1)},
    "diff3": {},
    "diff4": {"a": Fraction(0), "b": Fraction(0)},
    "diff5": {"a": Fraction(1)},
    "diff6": {"a": Fraction(1)},
    "diffprime": {"c": Fraction(1)},
    "reynolds": {"n": Fraction(4)},
}

_RB_WITH_LAMBDA = {6, 7, 8, 9, 10, 11, 12, 13, 14}
_RB_WITH_C = {13, 14}


def _canonical_key(family: str, params: dict[str, Fraction]) -> str:
    if not params:
        return family
    inner = ",".join(f"{k}={params[k]}" for k in sorted(params))
    return f"{family}?{inner}"


def parse_catalog(selector: str) -> CatalogEntry:
    """Resolve a catalog selector like ``rb:6?lambda=1`` or ``reynolds?n=4``.

    Parameters are exact rationals.  Selectors that ask for parameter
    ranges the declared preset cannot order are refused with an
    explanation rather than silently producing a broken rule.
    """
    text = selector.strip()
    fam_text, _, param_text = text.partition("?")
    fam_text = fam_text.strip()
    params: dict[str, Fraction] = {}
    if param_text:
        for chunk in param_text.split(","):
            k, sep, v = chunk.partition("=")
            if not sep:
                raise ValueError(f"bad parameter {chunk!r} in selector {selector!r} (want key=value)")
            try:
                params[k.strip()] = Fraction(v.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"bad parameter value {v.strip()!r} in selector {selector!r}: {exc}")

    fam, _, item_text = fam_text.partition(":")
    fam = fam.strip()

    def reject_unknown(allowed: Iterable[str]) -> None:
        allowed = set(allowed)
        bad = [k for k in params if k not in allowed]
        if bad:
            raise ValueError(
                f"selector {selector!r}: unknown parameter(s) {','.join(sorted(bad))}"
                f" (allowed: {','.join(sorted(allowed)) or 'none'})"
            )

    if fam == "rb":
        item = _require_item(selector, item_text, 1, 14)
        allowed = set()
        if item in _RB_WITH_LAMBDA:
            allowed.add("lambda")
        if item in _RB_WITH_C:
            allowed.add("c")
        reject_unknown(allowed)
        lam = params.get("lambda", _PARAM_DEFAULTS["rb"]["lambda"])
        c = params.get("c", _PARAM_DEFAULTS["rb"]["c"])
        shown = {k: v for k, v in (("lambda", lam), ("c", c)) if k in allowed}
        body = _rb_body(item, lam, c)
        phi = OPI(f"rb:{item}", (_X1, _X2), body)
        return CatalogEntry(
            key=_canonical_key(f"rb:{item}", shown),
            family="rb",
            opis=(phi,),
            preset="db",
            params=tuple(sorted(shown.items())),
            asserted_gs=True,
            units_stable=True,
        )

    if fam == "nijenhuis":
        _no_item(selector, item_text)
        reject_unknown(())
        phi = OPI("nijenhuis", (_X1, _X2), _rb_body(5, Fraction(0), Fraction(1)))
        return CatalogEntry(
            key="nijenhuis",
            family="nijenhuis",
            opis=(phi,),
            preset="db",
            params=(),
            asserted_gs=True,
            units_stable=True,
            note="same identity as rb:5",
        )

    if fam == "diff":
        item = _require_item(selector, item_text, 1, 6)
        if item == 3:
            bad = [k for k in params if not re.fullmatch(r"l\d\d", k)]
            if bad:
                raise ValueError(
                    f"selector {selector!r}: diff:3 takes weights lIJ only, got {','.join(sorted(bad))}"
                )
            merged = dict(params) if params else {"l00": Fraction(1)}
        else:
            defaults = dict(_PARAM_DEFAULTS.get(f"diff{item}", {}))
            reject_unknown(defaults)
            merged = {**defaults, **params}
        body = _diff_body(item, merged)
        phi = OPI(f"diff:{item}", (_X1, _X2), body)
        return CatalogEntry(
            key=_canonical_key(f"diff:{item}", merged),
            family="diff",
            opis=(phi,),
            preset="dt",
            params=tuple(sorted(merged.items())),
            asserted_gs=True,
            units_stable=False,
            note="leading monomial shifts at unit assignments; unit instances join as degenerate rules",
        )

    if fam == "diffprime":
        _no_item(selector, item_text)
        reject_unknown(("c",))
        c = params.get("c", _PARAM_DEFAULTS["diffprime"]["c"])
        body = OPoly({_w(_b(_X1)): Fraction(1), _w(_X1): -c})
        phi = OPI("diffprime", (_X1,), body)
        return CatalogEntry(
            key=_canonical_key("diffprime", {"c": c}),
            family="diffprime",
            opis=(phi,),
            preset="dt",
            params=(("c", c),),
            asserted_gs=True,
            units_stable=True,
            note="normal forms scale bracket erasure by c per bracket",
        )

    if fam == "averaging":
        _no_item(selector, item_text)
        reject_unknown(())
        return CatalogEntry(
            key="averaging",
            family="averaging",
            opis=_averaging_opis(),
            preset="dt",
            params=(),
            asserted_gs=True,
            units_stable=True,
            note="derived three-element system; see check-gs routes for its verification status",
        )

    if fam == "reynolds":
        _no_item(selector, item_text)
        reject_unknown(("n",))
        n_frac = params.get("n", _PARAM_DEFAULTS["reynolds"]["n"])
        if n_frac.denominator != 1 or n_frac < 2:
            raise ValueError(f"reynolds needs integer n >= 2, got {n_frac}")
        n = int(n_frac)
        opis = tuple(_reynolds_opi(k) for k in range(2, n + 1))
        return CatalogEntry(
            key=f"reynolds?n={n}",
            family="reynolds",
            opis=opis,
            preset="dt",
            params=(("n", Fraction(n)),),
            asserted_gs=True,
            units_stable=True,
            note=f"family truncated at nesting {n}",
        )

    raise ValueError(
        f"unknown catalog family {fam!r} in selector {selector!r}; "
        f"families: rb:1..14, nijenhuis, diff:1..6, diffprime, averaging, reynolds"
    )


def _require_item(selector: str, item_text: str, lo: int, hi: int) -> int:
    if not item_text:
        raise ValueError(f"selector {selector!r} needs an item number {lo}..{hi}")
    try:
        item = int(item_text)
    except ValueError:
        raise ValueError(f"bad item {item_text!r} in selector {selector!r}")
    if not (lo <= item <= hi):
        raise ValueError(f"item {item} out of range {lo}..{hi} in selector {selector!r}")
    return item


def _no_item(selector: str, item_text: str) -> None:
    if item_text:
        raise ValueError(f"selector {selector!r} does not take an item number")


class Catalog:
    """Registry facade over the built-in families."""

    FAMILIES = (
        "rb:1..14 (bracket-pair collapse; optional lambda, c on 13/14)",
        "nijenhuis (alias of rb:5)",
        "diff:1..6 (bracket-of-product expansion; item parameters apply)",
        "diffprime (single-variable bracket collapse; parameter c)",
        "averaging (three derived identities)",
        "reynolds (nested family; parameter n >= 2)",
    )

    @staticmethod
    def get(selector: str) -> CatalogEntry:
        return parse_catalog(selector)

    @staticmethod
    def help() -> str:
        return catalog_help()


def catalog_help() -> str:
    return "catalog families:\n" + "\n".join(f"  {line}" for line in Catalog.FAMILIES)
