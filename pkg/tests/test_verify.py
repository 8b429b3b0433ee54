import dataclasses
import math

import pytest

from etoc import fixedv, form1, form2, verify
from etoc.model import Problem

MU = 0.5


def test_appendix_solution_passes(appendix_problem, appendix_form1):
    rep = verify.check_all(appendix_form1, appendix_problem)
    assert rep.passed, rep.failed
    assert rep["hamiltonian"].max_violation < 1e-8
    d = rep.to_dict()
    assert d["passed"] is True and all(c["passed"] for c in d["checks"])


@pytest.mark.parametrize("mod", [form1, form2, fixedv])
def test_straight_line_passes_every_formulation(mod):
    pr = Problem.cartesian(1.0, 0.0, MU)
    p, _ = mod.solve(pr)
    rep = verify.check_all(p, pr)
    assert rep.passed, rep.failed
    for c in rep.checks:
        if c.name in ("control_circle", "transversality", "zeta4_rate"):
            assert c.max_violation < 1e-15


def test_corrupted_q_fails_terminal_only(appendix_problem, appendix_form1):
    p = appendix_form1
    bad = form1.derive_params(p.q + 1e-3, p.tf, MU)
    rep = verify.check_all(bad, appendix_problem)
    assert rep["control_circle"].passed
    assert rep.failed == ["terminal_position"]


def test_stale_constants_are_caught(appendix_problem, appendix_form1):
    bad = dataclasses.replace(appendix_form1, q=appendix_form1.q + 0.05)
    assert "derived_constants" in verify.check_all(bad, appendix_problem).failed


def test_unknown_solution_type(appendix_problem):
    with pytest.raises(TypeError):
        verify.check_all(object(), appendix_problem)


def test_cross_check_sixty_degrees():
    rep = verify.cross_check(Problem.polar(1.0, 60.0, MU))
    assert rep.passed, rep.failed
    assert {c.name for c in rep.checks} >= {"tf_agreement", "state_agreement", "replay_form1"}


def test_cross_check_appendix_and_straight_line():
    rep = verify.cross_check(Problem.polar(1.0, 30.0, MU))
    assert rep.passed
    rep = verify.cross_check(Problem.cartesian(1.0, 0.0, MU))
    assert rep.passed
    assert rep["state_agreement"].max_violation == 0.0


def test_shot_check(appendix_problem, appendix_form1):
    from etoc import shooting
    rep = verify.check_shot(tuple(shooting.from_form1(appendix_form1)), appendix_problem)
    assert rep.passed, rep.failed


def test_check_serialises_infinite_violation():
    c = verify.Check("x", math.inf, 1.0)
    assert not c.passed and c.to_dict()["passed"] is False
    assert not verify.Check("y", math.nan, 1.0).passed
    assert verify.Check("z", 0.0, 0.0).passed
