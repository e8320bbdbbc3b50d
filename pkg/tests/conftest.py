"""Shared fixtures and hypothesis strategies.

Word and polynomial strategies are seeded through the package's own
random samplers: hypothesis shrinks the seed, the sampler keeps the
measure budgets.  Less pretty than a fully native strategy but every
generated value is guaranteed in-bounds.
"""

import random
from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from opalg import Alphabet, OPoly, OrderSpec
from opalg.terms import random_word

settings.register_profile("suite", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("suite")

Z12 = Alphabet(("z1", "z2"))
Z1 = Alphabet(("z",))


@pytest.fixture(scope="session")
def z12():
    return Z12


@pytest.fixture(scope="session")
def z1():
    return Z1


@pytest.fixture(scope="session")
def db12():
    return OrderSpec.for_alphabet("db", Z12)


@pytest.fixture(scope="session")
def dt12():
    return OrderSpec.for_alphabet("dt", Z12)


@pytest.fixture(scope="session")
def deglex12():
    return OrderSpec.for_alphabet("deglex", Z12)


@pytest.fixture(scope="session")
def db1():
    return OrderSpec.for_alphabet("db", Z1)


@pytest.fixture(scope="session")
def dt1():
    return OrderSpec.for_alphabet("dt", Z1)


def owords(alphabet=Z12, max_z=3, max_op=2):
    """Strategy for words within the given measure budget."""
    return st.integers(0, 2**32 - 1).map(
        lambda s: random_word(random.Random(s), alphabet, max_z, max_op)
    )


_COEFFS = st.sampled_from(
    [Fraction(1), Fraction(-1), Fraction(2), Fraction(-3), Fraction(1, 2), Fraction(-2, 3)]
)


def opolys(alphabet=Z12, max_z=3, max_op=2, max_terms=4):
    """Strategy for polynomials; may generate zero through cancellation."""

    def build(pairs):
        f = OPoly.zero()
        for seed, c in pairs:
            w = random_word(random.Random(seed), alphabet, max_z, max_op)
            f = f + OPoly.from_word(w, c)
        return f

    return st.lists(
        st.tuples(st.integers(0, 2**32 - 1), _COEFFS), min_size=0, max_size=max_terms
    ).map(build)


def nonzero_opolys(alphabet=Z12, max_z=3, max_op=2, max_terms=4):
    return opolys(alphabet, max_z, max_op, max_terms).filter(lambda f: not f.is_zero())
