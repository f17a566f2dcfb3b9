import numpy as np
import pytest

from domdisc.frenet import Table, Transformed
from domdisc.verify import Check, random_gp_instance, run, run_suite

FAST = {"frenet-axioms": 20, "duality": 20, "restriction-projection": 20, "oracle-agreement": 500,
        "dev-landing": 20, "covering": 5, "tetrachotomy": 50, "gp-lemma": 50}


@pytest.mark.parametrize("name", sorted(FAST))
def test_small_suites_pass(name):
    rep = run_suite(name, n=FAST[name])
    assert rep.checks and rep.passed, [c.as_dict() for c in rep.checks if not c.passed]


def test_check_semantics():
    assert Check("a", 0.5, "<", 1.0).passed
    assert not Check("a", float("nan"), "<", 1.0).passed
    assert Check("a", 0, "==", 0).passed
    assert not Check("a", -1e-8, ">=", -1e-9).passed


def test_seeded_runs_repeat():
    a = run(["gp-lemma", "tetrachotomy"], seed=5, n=10)
    b = run(["gp-lemma", "tetrachotomy"], seed=5, n=10)
    assert a == b


def test_suite_streams_independent():
    alone = run_suite("tetrachotomy", seed=2, n=10).as_dict()
    together = run(["gp-lemma", "tetrachotomy"], seed=2, n=10)["suites"][1]
    assert alone == together


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope")


def test_random_gp_instance_shapes(rng):
    for n in (4, 5, 6):
        X, Y, ws = random_gp_instance(rng, n)
        assert X.dim + Y.dim == n and sum(w.dim for w in ws) == Y.dim


def test_table_curve_skips_analytic_suites(V):
    table = Table([(t, V.flag(t)) for t in np.linspace(0, 6, 5)])
    assert run_suite("patterns", table, n=1).skipped


def test_transformed_curve_passes_tetrachotomy():
    g = np.random.default_rng(4).standard_normal((4, 4)) + 3 * np.eye(4)
    assert run_suite("tetrachotomy", Transformed(g), n=20).passed
