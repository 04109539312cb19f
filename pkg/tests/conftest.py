"""Shared fixtures, generators of random grammars/instances, and the grammar corpus.

Every :class:`Slp` built while the suite runs is recorded (when its
expansion is at most ``CORPUS_MAX_LENGTH``) so the incompressibility check
can be applied to all of them at the end of the session.
"""

import random

import pytest
from hypothesis import strategies as st

from gcla import slp
from gcla.instances import SumInstance

CORPUS_MAX_LENGTH = 10**5

CORPUS: dict = {}

_original_init = slp.Slp.__init__


def _recording_init(self, *args, **kwargs):
    _original_init(self, *args, **kwargs)
    if self.length <= CORPUS_MAX_LENGTH:
        CORPUS.setdefault(self, None)


slp.Slp.__init__ = _recording_init


def pytest_collection_modifyitems(config, items):
    # the corpus-wide substring lower-bound check must see every grammar the other tests built
    last = [it for it in items if it.get_closest_marker("corpus_last")]
    rest = [it for it in items if not it.get_closest_marker("corpus_last")]
    items[:] = rest + last


def pytest_configure(config):
    config.addinivalue_line("markers", "corpus_last: run after every other test")


def random_slp(rng: random.Random, n_rules: int, max_length: int = 4096) -> slp.Slp:
    """A random grammar: two terminals, then concatenations of earlier rules."""
    rules = [("T", 0), ("T", 1)]
    lengths = [1, 1]
    while len(rules) < max(n_rules, 3):
        l = rng.randrange(len(rules))
        r = rng.randrange(len(rules))
        if lengths[l] + lengths[r] > max_length:
            l, r = rng.randrange(2), rng.randrange(len(rules))
            if lengths[l] + lengths[r] > max_length:
                continue
        rules.append(("C", l, r))
        lengths.append(lengths[l] + lengths[r])
    return slp.Slp(rules)


def random_bits(rng: random.Random, n: int, p_one: float = 0.5, sticky: float = 0.0) -> str:
    """Random bit string; ``sticky`` is the chance of copying the previous bit."""
    out = []
    for i in range(n):
        if i and rng.random() < sticky:
            out.append(out[-1])
        else:
            out.append("1" if rng.random() < p_one else "0")
    return "".join(out)


def random_instance(rng: random.Random, m: int, U: int, k: int = 3, exact_m: bool = False) -> SumInstance:
    sets = []
    for _ in range(k):
        size = m if exact_m else rng.randint(1, m)
        sets.append(rng.sample(range(1, U + 1), min(size, U)))
    return SumInstance.of(*sets, U=U)


@st.composite
def slps(draw, max_rules: int = 24, max_length: int = 2048):
    """Hypothesis strategy for grammars."""
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(1, max_rules))
    rng = random.Random(seed)
    if n == 1:
        return slp.terminal(rng.randrange(2))
    return random_slp(rng, n, max_length)


bit_strings = st.text(alphabet="01", min_size=1, max_size=300)


@st.composite
def sum_instances(draw, k: int = 3, max_m: int = 4, max_U: int = 12):
    U = draw(st.integers(1, max_U))
    sets = [draw(st.lists(st.integers(1, U), min_size=1, max_size=max_m)) for _ in range(k)]
    return SumInstance.of(*sets, U=U)


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def figure_one():
    """Five rules: S1 -> 0, S2 -> 1, S3 -> S1 S2, S4 -> S3 S3, S5 -> S4 S4 (expands to 01010101)."""
    return slp.Slp([("T", 0), ("T", 1), ("C", 0, 1), ("C", 2, 2), ("C", 3, 3)])
