import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import jack_C_at_one_oracle, jack_C_oracle
from sonine.jackcore import (
    Partition,
    dominates,
    enumerate_partitions,
    gen_pochhammer,
    jack_C,
    jack_C_at_one,
    jack_C_table,
)

alphas = st.sampled_from([0.5, 1.0, 2.0, 1 / 3, 2.7])


def test_partition_strips_zeros_and_validates():
    assert Partition((2, 1, 0)) == (2, 1)
    assert Partition((2, 0)).padded(3) == (2, 0, 0)
    assert Partition((3, 1)).conjugate() == (2, 1, 1)
    assert Partition((2, 2)).weight == 4
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((1, -1))


def test_enumerate_examples():
    assert enumerate_partitions(2, 2) == [(2,), (1, 1)]
    assert enumerate_partitions(0, 3) == [()]
    assert enumerate_partitions(3, 2) == [(3,), (2, 1)]


@given(st.integers(0, 9), st.integers(1, 4))
def test_enumerate_is_complete_and_ordered(m, n):
    parts = enumerate_partitions(m, n)
    brute = {tuple(sorted(c, reverse=True)) for c in itertools.product(range(m + 1), repeat=n)
             if sum(c) == m}
    assert {Partition(p).padded(n) for p in parts} == brute
    padded = [Partition(p).padded(n) for p in parts]
    assert padded == sorted(padded, reverse=True)


def test_pochhammer_examples():
    assert gen_pochhammer(1.7, (), 2.0) == 1
    assert gen_pochhammer(1.7, (1,), 0.3) == pytest.approx(1.7)
    assert gen_pochhammer(3, (2, 1), 2) == pytest.approx(30)


@given(st.lists(st.integers(0, 3), min_size=1, max_size=3), alphas)
def test_pochhammer_is_polynomial_in_mu(parts, alpha):
    lam = Partition(sorted(parts, reverse=True))
    deg = lam.weight
    nodes = np.linspace(-1.0, 2.0, deg + 1)
    vals = [gen_pochhammer(x, lam, alpha) for x in nodes]
    coef = np.polyfit(nodes, vals, deg) if deg else np.array(vals)
    for x in (0.37, 2.9, -1.6):
        exact = gen_pochhammer(x, lam, alpha)
        assert np.polyval(coef, x) == pytest.approx(exact, rel=1e-10, abs=1e-10)


def test_jack_examples():
    x = np.array([0.3, -1.2, 2.0])
    assert complex(jack_C((1,), 1.3, x)) == pytest.approx(x.sum())
    total = sum(complex(jack_C(lam, 0.7, [1.0, 2.0])) for lam in enumerate_partitions(2, 2))
    assert total == pytest.approx(9.0)
    a, b = 0.4, 1.7
    assert complex(jack_C((2, 1), 1.0, [a, b])) == pytest.approx(complex(jack_C((2, 1), 1.0, [b, a])))


def test_jack_rejects_bad_alpha():
    with pytest.raises(ValueError):
        jack_C((1,), 0.0, [1.0])


def test_jack_at_one_examples():
    assert jack_C_at_one((1,), 1.0, 3) == pytest.approx(3)
    assert jack_C_at_one((), 2.0, 4) == pytest.approx(1)
    # m = 2 identity at x = (1, 1): C_(2) + C_(1,1) = 4
    assert jack_C_at_one((2,), 2.0, 2) == pytest.approx(4 - jack_C_at_one((1, 1), 2.0, 2))


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0, 3.7])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_jack_matches_branching_oracle(alpha, n):
    rng = np.random.default_rng(n)
    for m in range(7):
        for lam in enumerate_partitions(m, n):
            x = rng.uniform(-1, 1.5, n)
            ref = jack_C_oracle(tuple(lam), alpha, x)
            assert complex(jack_C(lam, alpha, x)).real == pytest.approx(ref, rel=1e-11, abs=1e-11)
            assert jack_C_at_one(lam, alpha, n) == pytest.approx(
                jack_C_at_one_oracle(tuple(lam), alpha, n), rel=1e-12)


@given(st.integers(0, 8), st.integers(1, 3), alphas,
       st.lists(st.floats(-2, 2), min_size=3, max_size=3))
def test_normalization_property(m, n, alpha, xs):
    x = np.array(xs[:n])
    _, vals = jack_C_table(m, alpha, x[None, :])
    target = x.sum() ** m
    assert abs(vals.sum() - target) <= 1e-10 * max(1.0, abs(target))


@given(alphas, st.lists(st.floats(-2, 2), min_size=3, max_size=3), st.permutations(range(3)))
def test_symmetry_property(alpha, xs, perm):
    x = np.array(xs)
    for lam in enumerate_partitions(4, 3):
        a = complex(jack_C(lam, alpha, x))
        b = complex(jack_C(lam, alpha, x[list(perm)]))
        assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


@given(alphas, st.lists(st.floats(0.01, 2), min_size=3, max_size=3))
def test_positivity_property(alpha, xs):
    for m in range(6):
        for lam in enumerate_partitions(m, 3):
            assert complex(jack_C(lam, alpha, xs)).real > 0


def test_complex_arguments():
    z = np.array([0.3 + 0.2j, -0.5j])
    total = sum(complex(jack_C(lam, 2.0, z)) for lam in enumerate_partitions(3, 2))
    assert total == pytest.approx(z.sum() ** 3)


def test_dominance():
    assert dominates((2, 0), (1, 1))
    assert not dominates((1, 1), (2, 0))
    assert dominates((3, 1), (2, 2))


def test_table_batch_shape():
    parts, vals = jack_C_table(3, 1.0, np.ones((5, 2)))
    assert vals.shape == (5, len(parts))
    assert math.isclose(vals[0].sum().real, 8.0)
