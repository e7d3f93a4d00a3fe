import numpy as np
import pytest

from hypercolor import checks
from hypercolor.engine import GameState


def test_blocked_matrix_small():
    E = np.array([[0, 1, 2], [0, 1, 3]])
    asg = np.array([1, 1, 0, 0, 0])
    B = checks.blocked_matrix(E, asg, 2)
    assert B[2, 1] and B[3, 1] and not B[4].any() and B[:, 2].sum() == 0


def test_engine_check_passes_small():
    r = checks.check_engine(sequences=300, seed=1)
    assert r["holds"] and r["mismatches"] == 0 and r["moves"] > 0


def test_engine_check_catches_a_broken_update(monkeypatch):
    orig = GameState._color

    def broken(self, v, c, mover):
        orig(self, v, c, mover)
        # forget one blocker after every third move
        if len(self.history) % 3 == 0:
            for w in self.uncolored:
                if self.blockers[w]:
                    col = next(iter(self.blockers[w]))
                    del self.blockers[w][col]
                    break

    monkeypatch.setattr(GameState, "_color", broken)
    r = checks.check_engine(sequences=300, seed=1)
    assert not r["holds"] and r["first"]


def test_solver_check_small():
    r = checks.check_solver(instances=20)
    assert r["holds"]


def test_ground_truth_check():
    r = checks.check_ground_truth(instances=20)
    assert r["holds"]


def test_planted_core_has_six_core():
    H = checks.planted_core()
    assert H.n == 15 and sum(1 for e in H.edges if max(e) < 6) == 20


@pytest.mark.parametrize("name", sorted(checks.CHECKS))
def test_every_check_is_callable(name):
    assert callable(checks.CHECKS[name])
