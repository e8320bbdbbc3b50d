"""Operated polynomials: rational linear combinations of bracketed words.

Coefficients are exact rationals (``fractions.Fraction``); there is no
floating point anywhere in the arithmetic.  The zero polynomial has empty
support.  Multiplication is the bilinear extension of word concatenation,
and ``apply_bracket`` extends the bracket operator linearly.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import cmp_to_key
from typing import Callable, Iterable, Iterator, Mapping, Tuple, Union

from .terms import (
    Alphabet,
    ParseError,
    UNIT,
    Word,
    bracket,
    parse_word,
    render,
    structural_key,
)

__all__ = ["OPoly", "parse_opoly", "render_opoly"]

Scalar = Union[int, Fraction]

_ZERO = Fraction(0)


class OPoly:
    """Immutable operated polynomial.

    Construct from a mapping or an iterable of ``(word, coefficient)``
    pairs; zero coefficients are dropped and repeated words accumulate.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Union[Mapping[Word, Scalar], Iterable[Tuple[Word, Scalar]]] = ()):
        acc: dict[Word, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for w, c in items:
            if not isinstance(w, Word):
                raise TypeError(f"monomial must be a Word, got {type(w).__name__}")
            c = Fraction(c)
            if not c:
                continue
            prev = acc.get(w)
            if prev is None:
                acc[w] = c
            else:
                s = prev + c
                if s:
                    acc[w] = s
                else:
                    del acc[w]
        self._terms = acc
        self._hash = hash(frozenset(acc.items()))

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls) -> "OPoly":
        return _ZERO_POLY

    @classmethod
    def one(cls) -> "OPoly":
        return _ONE_POLY

    @classmethod
    def from_word(cls, w: Word, c: Scalar = 1) -> "OPoly":
        return cls(((w, c),))

    @classmethod
    def constant(cls, c: Scalar) -> "OPoly":
        return cls(((UNIT, c),))

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coeff(self, w: Word) -> Fraction:
        return self._terms.get(w, _ZERO)

    def support(self) -> tuple[Word, ...]:
        return tuple(sorted(self._terms, key=structural_key))

    def items(self, order=None, *, reverse: bool = True) -> list[tuple[Word, Fraction]]:
        """Terms as pairs; descending under ``order`` when given, else
        descending structural order."""
        if order is None:
            key = lambda it: structural_key(it[0])
        else:
            key = cmp_to_key(lambda a, b: order.compare(a[0], b[0]))
        return sorted(self._terms.items(), key=key, reverse=reverse)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, OPoly) and self._terms == other._terms

    def __ne__(self, other: object) -> bool:
        return not self.__eq__(other)

    def __hash__(self) -> int:
        return self._hash

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: "OPoly") -> "OPoly":
        if not isinstance(other, OPoly):
            return NotImplemented
        if not self._terms:
            return other
        if not other._terms:
            return self
        acc = dict(self._terms)
        for w, c in other._terms.items():
            s = acc.get(w, _ZERO) + c
            if s:
                acc[w] = s
            else:
                acc.pop(w, None)
        return _wrap(acc)

    def __sub__(self, other: "OPoly") -> "OPoly":
        if not isinstance(other, OPoly):
            return NotImplemented
        acc = dict(self._terms)
        for w, c in other._terms.items():
            s = acc.get(w, _ZERO) - c
            if s:
                acc[w] = s
            else:
                acc.pop(w, None)
        return _wrap(acc)

    def __neg__(self) -> "OPoly":
        return _wrap({w: -c for w, c in self._terms.items()})

    def scale(self, c: Scalar) -> "OPoly":
        c = Fraction(c)
        if not c:
            return _ZERO_POLY
        return _wrap({w: c * k for w, k in self._terms.items()})

    def __mul__(self, other: Union["OPoly", Scalar]) -> "OPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, OPoly):
            return NotImplemented
        acc: dict[Word, Fraction] = {}
        for u, a in self._terms.items():
            for v, b in other._terms.items():
                w = u * v
                s = acc.get(w, _ZERO) + a * b
                if s:
                    acc[w] = s
                else:
                    acc.pop(w, None)
        return _wrap(acc)

    def __rmul__(self, other: Scalar) -> "OPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def apply_bracket(self) -> "OPoly":
        """Linear extension of the bracket operator to polynomials."""
        return _wrap({bracket(w): c for w, c in self._terms.items()})

    def map_words(self, fn: Callable[[Word], Word]) -> "OPoly":
        """Apply a word map to every monomial, merging collisions."""
        return OPoly((fn(w), c) for w, c in self._terms.items())

    # -- leading data ----------------------------------------------------

    def leading(self, order) -> tuple[Word, Fraction]:
        """Leading ``(monomial, coefficient)`` under ``order``.

        Zero has no terms; by convention it reports ``(1, 0)`` so that
        constants and zero share a code path.
        """
        if not self._terms:
            return (UNIT, _ZERO)
        lead = None
        for w in self._terms:
            if lead is None or order.compare(w, lead) > 0:
                lead = w
        return (lead, self._terms[lead])

    def leading_monomial(self, order) -> Word:
        return self.leading(order)[0]

    def monicize(self, order) -> "OPoly":
        """Same polynomial scaled so the leading coefficient is 1."""
        if not self._terms:
            raise ValueError("cannot monicize the zero polynomial")
        _, c = self.leading(order)
        if c == 1:
            return self
        return self.scale(Fraction(1) / c)

    def __str__(self) -> str:
        return render_opoly(self)

    def __repr__(self) -> str:
        return f"OPoly({render_opoly(self)!r})"


def _wrap(acc: dict) -> OPoly:
    p = OPoly.__new__(OPoly)
    p._terms = acc
    p._hash = hash(frozenset(acc.items()))
    return p


_ZERO_POLY = OPoly(())
_ONE_POLY = OPoly(((UNIT, 1),))


def _format_term(w: Word, c: Fraction) -> str:
    # sign handled by the caller
    mag = abs(c)
    if w.is_unit():
        return str(mag)
    if mag == 1:
        return render(w)
    return f"{mag}*{render(w)}"


def render_opoly(f: OPoly, order=None) -> str:
    """Text form: signed terms joined by `` + `` / `` - ``, zero is ``0``.

    Term order is descending under ``order`` when supplied, otherwise
    descending structural order, so rendering is deterministic.
    """
    terms = f.items(order)
    if not terms:
        return "0"
    out: list[str] = []
    for i, (w, c) in enumerate(terms):
        if i == 0:
            out.append(("-" if c < 0 else "") + _format_term(w, c))
        else:
            out.append((" - " if c < 0 else " + ") + _format_term(w, c))
    return "".join(out)


def _split_top_level(text: str) -> Iterator[tuple[str, str]]:
    # yields (sign, term_text) for +/- separated chunks outside brackets
    depth = 0
    sign = "+"
    start = 0
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced ']'", i)
        elif ch in "+-" and depth == 0:
            chunk = text[start:i]
            if chunk.strip():
                yield sign, chunk
            elif start != 0:
                raise ParseError("empty term", i)
            sign = ch
            start = i + 1
        i += 1
    if depth != 0:
        raise ParseError("unbalanced '['", len(text))
    chunk = text[start:]
    if chunk.strip():
        yield sign, chunk
    elif start == 0:
        raise ParseError("empty polynomial text", 0)


_NUM_RE = re.compile(r"\s*(\d+)\s*(?:/\s*(\d+)\s*)?")


def _parse_term(sign: str, chunk: str, alphabet: Alphabet | None, extra: frozenset[str]) -> tuple[Word, Fraction]:
    text = chunk.strip()
    coeff = Fraction(1)
    m = _NUM_RE.match(text)
    if m and m.start() == 0:
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) else 1
        rest = text[m.end() :].lstrip()
        if not rest:
            # bare number: possibly the constant term -- but bare "1" is
            # also the unit monomial; both mean the same polynomial term
            coeff = Fraction(num, den)
            word = UNIT
            if sign == "-":
                coeff = -coeff
            return word, coeff
        if rest.startswith("*"):
            coeff = Fraction(num, den)
            text = rest[1:]
        # digits not followed by '*' fall through; parse_word rejects them
    word = parse_word(text, alphabet, extra_letters=extra)
    if sign == "-":
        coeff = -coeff
    return word, coeff


def parse_opoly(
    text: str,
    alphabet: Alphabet | None = None,
    *,
    extra_letters: Iterable[str] = (),
) -> OPoly:
    """Parse polynomial text: signed terms with rational coefficients.

    Examples: ``"z1*[z2] - [z1]*z2"``, ``"-2/5*[1] + 3"``, ``"0"``.
    """
    stripped = text.strip()
    if stripped == "0":
        return OPoly.zero()
    extra = frozenset(extra_letters)
    acc: list[tuple[Word, Fraction]] = []
    for sign, chunk in _split_top_level(stripped):
        acc.append(_parse_term(sign, chunk, alphabet, extra))
    return OPoly(acc)
