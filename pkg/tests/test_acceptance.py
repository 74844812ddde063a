"""Acceptance criteria, each run at its stated tolerance on configs/default.json.

Every criterion prints one PASS/FAIL line (also collected into the terminal
summary).  A criterion with a runtime budget fails when it overruns.
"""
import time

import numpy as np
import pytest

from hypwigner.config import named
from hypwigner.verify import (
    euclidean_check,
    covariance_checks,
    inversion_checks,
    invariance_checks,
    jacobian_checks,
    marginality_checks,
    operator_checks,
    pairing_checks,
    reconstruction_checks,
    roundtrip_checks,
    unitarity_checks,
)

from conftest import ACCEPTANCE_LINES


@pytest.fixture(scope="module")
def cfg():
    return named("default")


def _pairing(cfg):
    return pairing_checks(cfg.model_obj("disc"), np.random.default_rng(cfg.seed), 100)


def _jacobian(cfg):
    # the stated J(0,0) = 1 is checked as written; see the README
    return jacobian_checks(cfg.replace(model="disc"), stated_value=1.0)


CRITERIA = [
    (1, "euclidean degeneration (interval)", lambda cfg: [euclidean_check(cfg)], 5.0),
    (2, "round trip and plancherel (disc)", roundtrip_checks, 60.0),
    (3, "boundary pairing vs spherical function", _pairing, 10.0),
    (4, "jacobian suite", _jacobian, None),
    (5, "wigner invariance", invariance_checks, 120.0),
    (6, "marginality", marginality_checks, 300.0),
    (7, "inversion", inversion_checks, None),
    (8, "reconstruction", reconstruction_checks, None),
    (9, "unitarity", unitarity_checks, None),
    (10, "operator degenerations", operator_checks, None),
    (11, "covariance", covariance_checks, None),
]


@pytest.mark.slow
@pytest.mark.parametrize("number,title,run,budget", CRITERIA, ids=[f"c{c[0]:02d}" for c in CRITERIA])
def test_criterion(cfg, number, title, run, budget):
    start = time.perf_counter()
    checks = run(cfg)
    elapsed = time.perf_counter() - start
    failed = [c for c in checks if c.passed is False]
    in_time = budget is None or elapsed < budget
    ok = not failed and in_time
    budget_note = "" if budget is None else f" (budget {budget:g} s)"
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} [{elapsed:.1f} s{budget_note}]"
    detail = [f"    {c.line()}" for c in checks]
    print("\n".join([line] + detail))
    ACCEPTANCE_LINES.append(line)
    ACCEPTANCE_LINES.extend(detail)
    assert not failed, "; ".join(c.line() for c in failed)
    assert in_time, f"took {elapsed:.1f} s, budget {budget:g} s"
