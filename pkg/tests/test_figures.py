import numpy as np
import pytest

from majorana_probe import FIGURES, ParameterError, figure
from majorana_probe.figures import PAIRS, sign_pattern


def test_registry_covers_all_panels():
    expected = {f"fig{n}{p}" for n in (2, 3, 5, 6, 7, 10) for p in "abcd"} | {"fig4a", "fig4b", "fig8", "fig9a", "fig9b"}
    assert set(FIGURES) == expected


def test_unknown_figure():
    with pytest.raises(ParameterError):
        figure("fig11")


def test_pairs_and_grids():
    assert PAIRS == ((0.05, 0.05), (0.07, 0.03), (0.09, 0.01))
    b1 = FIGURES["fig4a"].spec.axis2 or FIGURES["fig4a"].spec.axis1
    values = np.array([v for v in b1.values])
    assert len(values) == 80 and values.min() == pytest.approx(0.005) and values.max() == pytest.approx(0.2)
    fig8 = FIGURES["fig8"].spec
    assert [v for v in fig8.axis1.values] == [-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5]
    assert fig8.base.delta_m == -0.5


def test_sign_pattern():
    assert sign_pattern([1, 2, -1, -3, 4]) == "+-+"
    assert sign_pattern([-1, -1]) == "-"
    assert sign_pattern([]) == ""


def test_fig2a_claims_and_table():
    report = figure("fig2a")
    assert report.passed
    assert "symmetric splitting: pass" in report.table()


def test_fig8_dips_are_measured_not_asserted():
    claims = {c.name: c for c in figure("fig8").claims}
    measured = [c for c in claims.values() if not c.asserted]
    assert measured and all(c.label == "measured" for c in measured)


def test_figure_is_deterministic(tmp_path):
    a = figure("fig5a").result.write_csv(tmp_path / "a.csv").read_bytes()
    b = figure("fig5a", workers=2).result.write_csv(tmp_path / "b.csv").read_bytes()
    assert a == b
