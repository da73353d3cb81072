import random

from hypothesis import given
from hypothesis import strategies as st

from trackalg.algebra import FinAbGroup
from trackalg.laws import NOT_REPLAYED, Quantifier, check_law, replaying


def run(pred, group=(4, 4), budget=1000, seed=0, name="law"):
    G = FinAbGroup(group)
    return check_law(name, [Quantifier((), ("x", "y"), (G, G))], pred, budget, random.Random(seed))


def test_exhaustive_when_small():
    r = run(lambda x, y: True)
    assert r.passed and r.exhaustive and r.cases == 256


def test_sampled_when_over_budget():
    r = run(lambda x, y: True, budget=50)
    assert r.passed and not r.exhaustive and r.cases == 50


def test_failure_has_witness():
    r = run(lambda x, y: x[0] < 3)
    assert not r.passed
    assert r.witness["x"][0] == 3


def test_sampled_failure_is_shrunk():
    r = run(lambda x, y: not (x[0] >= 2 and y[1] >= 1), group=(8, 8, 8), budget=20)
    assert not r.passed and not r.exhaustive
    w = r.witness
    assert w["x"][0] >= 2 and w["y"][1] >= 1
    assert w["x"][1:] == [0, 0] or tuple(w["x"][1:]) == (0, 0)


@given(st.integers(0, 1000))
def test_reports_are_seed_deterministic(seed):
    a = run(lambda x, y: x != (1, 1), budget=10, seed=seed)
    b = run(lambda x, y: x != (1, 1), budget=10, seed=seed)
    assert a == b


def test_replay_reruns_only_named_witnesses():
    with replaying({"law": {"x": [3, 0], "y": [0, 0]}}):
        r = run(lambda x, y: x[0] < 3)
        other = run(lambda x, y: False, name="other")
    assert not r.passed and r.cases == 1
    assert other.note == NOT_REPLAYED and other.passed
