import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "demos"))
import tour  # noqa: E402


def test_tour_runs(capsys):
    tour.main()
    out = capsys.readouterr().out
    assert "slice equivalence at the corepresentable: 10 = 10, ok=True" in out
    assert out.rstrip().endswith("apex bound 4: fail")
