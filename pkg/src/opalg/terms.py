"""Bracketed words over a finite alphabet, with one linear operator.

A word is a finite sequence of factors; a factor is either a letter or a
bracketed word ``[u]``.  The empty sequence is the multiplicative unit,
written ``1``.  ``[1]`` is an ordinary factor and is not the unit.  Words
multiply by concatenation, so the set of all words is the free monoid on
letters and brackets, closed under the bracket operator.

Measures used throughout the package:

* breadth: number of top-level factors (``breadth(1) == 0``)
* z_degree: number of letter occurrences at every depth
* op_degree: number of bracket occurrences at every depth
* depth: maximal bracket nesting

Contexts are words with exactly one hole ``@``; plugging a word into the
hole splices its factor sequence in place (plugging the unit deletes the
hole).  Schema words may contain variable letters that match arbitrary
factor blocks; see :func:`schema_occurrences`.
"""

from __future__ import annotations

import re
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

__all__ = [
    "HOLE",
    "Alphabet",
    "Bracket",
    "Context",
    "MonoidOracle",
    "ParseError",
    "Word",
    "UNIT",
    "align_factors",
    "all_hole_insertions",
    "all_words",
    "bracket",
    "concat",
    "iter_occurrences",
    "iter_schema_matches",
    "iter_schema_occurrences",
    "measures",
    "normalize_mixed_word",
    "occurrences",
    "parse_context",
    "parse_word",
    "random_context",
    "random_word",
    "render",
    "schema_occurrences",
    "structural_key",
    "substitute",
]

HOLE = "@"

_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


class Bracket:
    """A single bracketed factor wrapping an inner word."""

    __slots__ = ("inner", "_hash")

    def __init__(self, inner: "Word"):
        if not isinstance(inner, Word):
            raise TypeError(f"bracket inner must be a Word, got {type(inner).__name__}")
        self.inner = inner
        self._hash = hash((Bracket, inner))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, Bracket) and self.inner == other.inner

    def __ne__(self, other: object) -> bool:
        return not self.__eq__(other)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Bracket({render(self.inner)!r})"


Factor = Union[str, Bracket]


class Word:
    """Immutable factor sequence with cached measures and hash.

    Equality is structural.  Words are valid dict keys; all arithmetic
    lives in :mod:`opalg.poly`.
    """

    __slots__ = ("factors", "z_degree", "op_degree", "depth", "_hash")

    def __init__(self, factors: Iterable[Factor] = ()):
        fs = tuple(factors)
        z = op = dep = 0
        for f in fs:
            if isinstance(f, str):
                z += 1
            elif isinstance(f, Bracket):
                inner = f.inner
                z += inner.z_degree
                op += inner.op_degree + 1
                if inner.depth + 1 > dep:
                    dep = inner.depth + 1
            else:
                raise TypeError(f"bad factor {f!r}")
        self.factors = fs
        self.z_degree = z
        self.op_degree = op
        self.depth = dep
        self._hash = hash(fs)

    @property
    def breadth(self) -> int:
        return len(self.factors)

    def is_unit(self) -> bool:
        return not self.factors

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, Word) and self._hash == other._hash and self.factors == other.factors

    def __ne__(self, other: object) -> bool:
        return not self.__eq__(other)

    def __hash__(self) -> int:
        return self._hash

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        return Word(self.factors + other.factors)

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"Word({render(self)!r})"


UNIT = Word(())


def bracket(u: Word) -> Word:
    """The one-factor word ``[u]``."""
    return Word((Bracket(u),))


def concat(*words: Word) -> Word:
    out: list[Factor] = []
    for w in words:
        out.extend(w.factors)
    return Word(out)


def measures(u: Word) -> tuple[int, int, int, int]:
    """``(breadth, z_degree, op_degree, depth)`` of a word."""
    return (u.breadth, u.z_degree, u.op_degree, u.depth)


def structural_key(u: Word) -> tuple:
    """Deterministic sort key independent of any monomial order."""
    return (u.z_degree, u.op_degree, u.breadth, render(u))


def render(u: Word) -> str:
    """Canonical text form: ``*``-joined factors, unit rendered ``1``."""
    if not u.factors:
        return "1"
    parts = []
    for f in u.factors:
        if isinstance(f, str):
            parts.append(f)
        else:
            parts.append("[" + render(f.inner) + "]")
    return "*".join(parts)


class Alphabet:
    """Finite ordered letter set; declaration order is the base order."""

    __slots__ = ("letters", "_rank")

    def __init__(self, letters: Iterable[str]):
        ls = tuple(letters)
        if not ls:
            raise ValueError("alphabet must not be empty")
        seen: dict[str, int] = {}
        for i, name in enumerate(ls):
            if not _IDENT_RE.fullmatch(name):
                raise ValueError(f"bad letter name {name!r}: want [A-Za-z][A-Za-z0-9_]*")
            if name in seen:
                raise ValueError(f"duplicate letter {name!r}")
            seen[name] = i
        self.letters = ls
        self._rank = seen

    def rank(self, name: str) -> int:
        return self._rank[name]

    def __contains__(self, name: object) -> bool:
        return name in self._rank

    def __iter__(self) -> Iterator[str]:
        return iter(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __repr__(self) -> str:
        return f"Alphabet({','.join(self.letters)})"

    def reordered(self, base: Sequence[str]) -> "Alphabet":
        """Same letters, ranked in the given order (must be a permutation)."""
        if sorted(base) != sorted(self.letters):
            raise ValueError(
                f"base order {','.join(base)} is not a permutation of alphabet {','.join(self.letters)}"
            )
        return Alphabet(base)


class ParseError(ValueError):
    """Input text rejected; carries the character position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class _Tokens:
    # token kinds: IDENT, NUM, and single chars * [ ] @ + - /
    _TOKEN_RE = re.compile(r"\s*([A-Za-z][A-Za-z0-9_]*|\d+|[*\[\]@+/-])")

    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, int]] = []
        pos = 0
        while pos < len(text):
            m = self._TOKEN_RE.match(text, pos)
            if m is None:
                stripped = text[pos:].lstrip()
                if not stripped:
                    break
                raise ParseError(f"unexpected character {stripped[0]!r}", len(text) - len(stripped))
            self.toks.append((m.group(1), m.start(1)))
            pos = m.end()
        self.i = 0

    def peek(self) -> str | None:
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def pos(self) -> int:
        return self.toks[self.i][1] if self.i < len(self.toks) else len(self.text)

    def take(self) -> str:
        tok = self.toks[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        if self.peek() != tok:
            raise ParseError(f"expected {tok!r}, found {self.peek()!r}", self.pos())
        self.take()


def _check_letter(name: str, alphabet: Alphabet | None, extra: frozenset[str], pos: int) -> None:
    if alphabet is not None and name not in alphabet and name not in extra:
        raise ParseError(f"unknown letter {name!r} (alphabet: {','.join(alphabet.letters)})", pos)


def _parse_word_tokens(
    toks: _Tokens,
    alphabet: Alphabet | None,
    allow_hole: bool,
    extra_letters: frozenset[str],
) -> Word:
    # word := "1" | factor ("*" factor)*
    if toks.peek() == "1":
        toks.take()
        return UNIT
    factors: list[Factor] = []
    while True:
        tok = toks.peek()
        pos = toks.pos()
        if tok is None:
            raise ParseError("expected a factor", pos)
        if tok == "[":
            toks.take()
            inner = _parse_word_tokens(toks, alphabet, allow_hole, extra_letters)
            toks.expect("]")
            factors.append(Bracket(inner))
        elif tok == HOLE:
            if not allow_hole:
                raise ParseError("hole '@' not allowed in a plain word", pos)
            toks.take()
            factors.append(HOLE)
        elif _IDENT_RE.fullmatch(tok):
            toks.take()
            _check_letter(tok, alphabet, extra_letters, pos)
            factors.append(tok)
        else:
            raise ParseError(f"unexpected token {tok!r}", pos)
        if toks.peek() == "*":
            toks.take()
            continue
        return Word(factors)


def parse_word(
    text: str,
    alphabet: Alphabet | None = None,
    *,
    allow_hole: bool = False,
    extra_letters: Iterable[str] = (),
) -> Word:
    """Parse word text: ``1``, letters, ``*`` products, ``[...]`` brackets.

    With an alphabet, unknown letters are rejected with their position.
    ``extra_letters`` admits schema variables on top of the alphabet.
    """
    toks = _Tokens(text)
    w = _parse_word_tokens(toks, alphabet, allow_hole, frozenset(extra_letters))
    if toks.peek() is not None:
        raise ParseError(f"trailing input {toks.peek()!r}", toks.pos())
    return w


def _count_holes(u: Word) -> int:
    n = 0
    for f in u.factors:
        if f == HOLE:
            n += 1
        elif isinstance(f, Bracket):
            n += _count_holes(f.inner)
    return n


def _has_hole(u: Word) -> bool:
    for f in u.factors:
        if f == HOLE or (isinstance(f, Bracket) and _has_hole(f.inner)):
            return True
    return False


def _splice(u: Word, s: Word) -> Word:
    out: list[Factor] = []
    for f in u.factors:
        if f == HOLE:
            out.extend(s.factors)
        elif isinstance(f, Bracket) and _has_hole(f.inner):
            out.append(Bracket(_splice(f.inner, s)))
        else:
            out.append(f)
    return Word(out)


class Context:
    """A word with exactly one hole ``@`` at any depth."""

    __slots__ = ("word",)

    def __init__(self, word: Word):
        n = _count_holes(word)
        if n != 1:
            raise ValueError(f"a context needs exactly one hole, found {n} in {render(word)}")
        self.word = word

    def is_trivial(self) -> bool:
        """True for the bare hole (plugging returns the argument itself)."""
        return self.word.factors == (HOLE,)

    def plug(self, s: Word) -> Word:
        """Replace the hole by the factors of ``s`` (unit deletes the hole)."""
        return _splice(self.word, s)

    def compose(self, inner: "Context") -> "Context":
        """Context whose plug is ``self.plug(inner.plug(.))``."""
        return Context(_splice(self.word, inner.word))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Context) and self.word == other.word

    def __hash__(self) -> int:
        return hash((Context, self.word))

    def __str__(self) -> str:
        return render(self.word)

    def __repr__(self) -> str:
        return f"Context({render(self.word)!r})"


TRIVIAL_CONTEXT = Context(Word((HOLE,)))


def parse_context(
    text: str,
    alphabet: Alphabet | None = None,
    *,
    extra_letters: Iterable[str] = (),
) -> Context:
    return Context(parse_word(text, alphabet, allow_hole=True, extra_letters=extra_letters))


def substitute(q: Context, s):
    """``q`` with ``s`` plugged into the hole; linear in ``s``.

    ``s`` may be a Word or anything with ``map_words`` (a polynomial); the
    polynomial case distributes the context over the terms.
    """
    if isinstance(s, Word):
        return q.plug(s)
    return s.map_words(q.plug)


def iter_occurrences(w: Word, u: Word) -> Iterator[Context]:
    """Contexts ``q`` with ``q.plug(u) == w``; top-level scan first, then
    descend into brackets left to right."""
    if u.is_unit():
        raise ValueError("occurrences of the unit are everywhere; refusing")
    k = len(u.factors)
    fs = w.factors
    for i in range(len(fs) - k + 1):
        if fs[i : i + k] == u.factors:
            yield Context(Word(fs[:i] + (HOLE,) + fs[i + k :]))
    for j, f in enumerate(fs):
        if isinstance(f, Bracket):
            for q in iter_occurrences(f.inner, u):
                yield Context(Word(fs[:j] + (Bracket(q.word),) + fs[j + 1 :]))


def occurrences(w: Word, u: Word) -> list[Context]:
    return list(iter_occurrences(w, u))


def _check_schema(schema: Word, variables: frozenset[str]) -> None:
    counts: dict[str, int] = {}

    def walk(u: Word) -> None:
        for f in u.factors:
            if isinstance(f, str):
                if f in variables:
                    counts[f] = counts.get(f, 0) + 1
            else:
                walk(f.inner)

    walk(schema)
    bad = [v for v, c in counts.items() if c > 1]
    if bad:
        raise ValueError(f"schema {render(schema)} repeats variable(s) {','.join(sorted(bad))}")


def _align(
    sf: tuple[Factor, ...],
    tf: tuple[Factor, ...],
    variables: frozenset[str],
    nonempty: frozenset[str],
    binding: dict[str, Word],
) -> Iterator[dict[str, Word]]:
    # Match a schema factor sequence against a target factor sequence.
    # Variables bind contiguous blocks; each occurs at most once (checked
    # upstream), so no consistency lookups are needed.
    if not sf:
        if not tf:
            yield binding
        return
    head = sf[0]
    if isinstance(head, str) and head in variables:
        lo = 1 if head in nonempty else 0
        for k in range(lo, len(tf) + 1):
            b2 = dict(binding)
            b2[head] = Word(tf[:k])
            yield from _align(sf[1:], tf[k:], variables, nonempty, b2)
    elif isinstance(head, str):
        if tf and tf[0] == head:
            yield from _align(sf[1:], tf[1:], variables, nonempty, binding)
    else:
        if tf and isinstance(tf[0], Bracket):
            for b2 in _align(head.inner.factors, tf[0].inner.factors, variables, nonempty, binding):
                yield from _align(sf[1:], tf[1:], variables, nonempty, b2)


def align_factors(
    schema_factors: tuple[Factor, ...],
    target_factors: tuple[Factor, ...],
    variables: Iterable[str],
    nonempty: Iterable[str] = (),
) -> Iterator[dict[str, Word]]:
    """Bindings matching a schema factor block onto a target factor block.

    Low-level entry for callers that slice factor tuples themselves; the
    schema must not repeat a variable (not rechecked here).
    """
    yield from _align(schema_factors, target_factors, frozenset(variables), frozenset(nonempty), {})


def iter_schema_matches(
    target: Word,
    schema: Word,
    variables: Iterable[str],
    *,
    nonempty: Iterable[str] = (),
) -> Iterator[dict[str, Word]]:
    """Assignments sending the whole schema word onto the whole target.

    ``nonempty`` variables must bind at least one factor.  Split points are
    tried shortest-first, so the iteration order is deterministic.
    """
    vs = frozenset(variables)
    _check_schema(schema, vs)
    yield from _align(schema.factors, target.factors, vs, frozenset(nonempty), {})


def iter_schema_occurrences(
    w: Word,
    schema: Word,
    variables: Iterable[str],
    *,
    nonempty: Iterable[str] = (),
) -> Iterator[tuple[Context, dict[str, Word]]]:
    """All ``(q, sigma)`` with ``q.plug(schema*sigma) == w``.

    Matched slices are nonempty (a schema instance standing for the unit
    never counts as occurring).  Top-level slices come first (start
    ascending, then end ascending), then brackets are searched left to
    right.
    """
    vs = frozenset(variables)
    _check_schema(schema, vs)
    ne = frozenset(nonempty)
    fs = w.factors
    n = len(fs)
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            for sigma in _align(schema.factors, fs[i:j], vs, ne, {}):
                yield Context(Word(fs[:i] + (HOLE,) + fs[j:])), sigma
    for j, f in enumerate(fs):
        if isinstance(f, Bracket):
            for q, sigma in iter_schema_occurrences(f.inner, schema, vs, nonempty=ne):
                yield Context(Word(fs[:j] + (Bracket(q.word),) + fs[j + 1 :])), sigma


def schema_occurrences(
    w: Word,
    schema: Word,
    variables: Iterable[str],
    *,
    nonempty: Iterable[str] = (),
) -> list[tuple[Context, dict[str, Word]]]:
    return list(iter_schema_occurrences(w, schema, variables, nonempty=nonempty))


class MonoidOracle:
    """Finite monoid given by a full multiplication table.

    The table is validated on construction: total on elements x elements,
    closed, unital, and associative (cubic scan; these tables are small).
    """

    __slots__ = ("elements", "unit", "_mul")

    def __init__(self, elements: Iterable[str], unit: str, table: Mapping[tuple[str, str], str]):
        elems = tuple(elements)
        eset = set(elems)
        if len(eset) != len(elems):
            raise ValueError("duplicate monoid elements")
        if unit not in eset:
            raise ValueError(f"unit {unit!r} not among elements")
        mul = dict(table)
        for a in elems:
            for b in elems:
                if (a, b) not in mul:
                    raise ValueError(f"multiplication table missing ({a!r}, {b!r})")
                if mul[(a, b)] not in eset:
                    raise ValueError(f"table not closed at ({a!r}, {b!r}) -> {mul[(a, b)]!r}")
        for a in elems:
            if mul[(unit, a)] != a or mul[(a, unit)] != a:
                raise ValueError(f"unit law fails at {a!r}")
        for a in elems:
            for b in elems:
                for c in elems:
                    if mul[(mul[(a, b)], c)] != mul[(a, mul[(b, c)])]:
                        raise ValueError(f"associativity fails at ({a!r}, {b!r}, {c!r})")
        self.elements = eset
        self.unit = unit
        self._mul = mul

    def mul(self, a: str, b: str) -> str:
        return self._mul[(a, b)]


def normalize_mixed_word(factors: Iterable[Factor], oracle: MonoidOracle) -> tuple[Factor, ...]:
    """Canonical form of a word mixing oracle elements with other factors.

    Adjacent oracle elements are merged through the table and resulting
    units dropped, so the output alternates oracle elements with opaque
    factors and contains no oracle unit.  Idempotent.
    """
    out: list[Factor] = []
    for f in factors:
        if isinstance(f, str) and f in oracle.elements:
            if out and isinstance(out[-1], str) and out[-1] in oracle.elements:
                merged = oracle.mul(out[-1], f)
                out.pop()
                if merged != oracle.unit:
                    out.append(merged)
            elif f != oracle.unit:
                out.append(f)
        else:
            out.append(f)
    return tuple(out)


def all_words(alphabet: Alphabet | Iterable[str], max_z: int, max_op: int) -> tuple[Word, ...]:
    """Every word with ``z_degree <= max_z`` and ``op_degree <= max_op``.

    Deterministic order (graded by structural key).  The count grows fast;
    intended for desk-scale bounds.
    """
    letters = tuple(alphabet.letters if isinstance(alphabet, Alphabet) else alphabet)
    cache: dict[tuple[int, int], tuple[Word, ...]] = {}

    def gen(d: int, p: int) -> tuple[Word, ...]:
        key = (d, p)
        got = cache.get(key)
        if got is not None:
            return got
        acc: list[Word] = [UNIT]
        if d >= 1:
            for name in letters:
                for tail in gen(d - 1, p):
                    acc.append(Word((name,) + tail.factors))
        if p >= 1:
            for inner in gen(d, p - 1):
                dz, dp = inner.z_degree, inner.op_degree + 1
                # first factor [inner] consumes (dz, dp) of the budget
                for tail in gen(d - dz, p - dp):
                    acc.append(Word((Bracket(inner),) + tail.factors))
        out = tuple(acc)
        cache[key] = out
        return out

    return tuple(sorted(gen(max_z, max_op), key=structural_key))


def random_word(rng, alphabet: Alphabet | Iterable[str], max_z: int, max_op: int) -> Word:
    """Sample a word within the measure budget; may return the unit."""
    letters = tuple(alphabet.letters if isinstance(alphabet, Alphabet) else alphabet)
    factors: list[Factor] = []
    z_left, op_left = max_z, max_op
    while (z_left > 0 or op_left > 0) and rng.random() < 0.6:
        if op_left > 0 and (z_left == 0 or rng.random() < 0.35):
            inner = random_word(rng, letters, z_left, op_left - 1)
            factors.append(Bracket(inner))
            z_left -= inner.z_degree
            op_left -= inner.op_degree + 1
        else:
            factors.append(letters[rng.randrange(len(letters))])
            z_left -= 1
    return Word(factors)


def all_hole_insertions(w: Word) -> list[Context]:
    """Every context obtained by inserting a hole into ``w`` at any depth."""
    out: list[Context] = []
    fs = w.factors
    for i in range(len(fs) + 1):
        out.append(Context(Word(fs[:i] + (HOLE,) + fs[i:])))
    for j, f in enumerate(fs):
        if isinstance(f, Bracket):
            for q in all_hole_insertions(f.inner):
                out.append(Context(Word(fs[:j] + (Bracket(q.word),) + fs[j + 1 :])))
    return out


def random_context(
    rng,
    alphabet: Alphabet | Iterable[str],
    max_z: int,
    max_op: int,
    *,
    nontrivial: bool = False,
) -> Context:
    w = random_word(rng, alphabet, max_z, max_op)
    slots = all_hole_insertions(w)
    if nontrivial:
        slots = [q for q in slots if not q.is_trivial()]
        if not slots:
            # empty word only offers the bare hole; force one wrapper
            return Context(bracket(Word((HOLE,))))
    return slots[rng.randrange(len(slots))]
