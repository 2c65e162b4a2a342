import importlib
import json

import pytest

from wcusp_waves.app import EXIT_OK, EXIT_PRECONDITION, EXIT_USAGE, main
from wcusp_waves.models import PatternKind, PatternReport

# the package re-exports the click command under the module name
figure_command = importlib.import_module("wcusp_waves.commands.figure")


def fake_run(kind: PatternKind):
    def run_and_report(config, directory, csv=False, strict=False):
        return PatternReport(kind=kind, stationarity=0.0, spikes_per_burst=2), []

    return run_and_report


def test_figure_list(capsys):
    assert main(["figure", "--list"]) == EXIT_OK
    listing = json.loads(capsys.readouterr().out)
    assert listing["_meta"]["total"] == 6
    assert [fig["id"] for fig in listing["_items"]][:3] == ["fig6", "fig7", "fig8"]


def test_figure_needs_id():
    assert main(["figure"]) == EXIT_USAGE


def test_figure_unknown_panel(tmp_path):
    assert main(["figure", "fig8", "--panel", "nope", "--output-dir", str(tmp_path)]) == 1


def test_figure_summary(tmp_path, monkeypatch):
    monkeypatch.setattr(
        figure_command, "run_and_report", fake_run(PatternKind.TRAVELING_BURST)
    )
    assert main(["figure", "fig8", "--output-dir", str(tmp_path)]) == EXIT_OK
    with open(tmp_path / "figure" / "fig8" / "figure.json") as f:
        summary = json.load(f)
    assert len(summary["pitchfork_goldens"]) == 2
    assert summary["panels"]["burst"]["matched"]
    assert summary["panels"]["burst"]["report"]["kind"] == "traveling_burst"


def test_figure_mismatch(tmp_path, monkeypatch, capsys):
    monkeypatch.setattr(figure_command, "run_and_report", fake_run(PatternKind.OTHER))
    assert main(["figure", "fig8", "--output-dir", str(tmp_path)]) == EXIT_PRECONDITION
    assert "expected traveling_burst, got other" in capsys.readouterr().err
    # the summary is written before the mismatch is reported
    with open(tmp_path / "figure" / "fig8" / "figure.json") as f:
        assert not json.load(f)["panels"]["burst"]["matched"]


@pytest.mark.slow
@pytest.mark.parametrize("figure_id", ["fig6", "fig7", "fig8", "fig9", "fig10", "fig11"])
def test_figure_reproduction(tmp_path, figure_id):
    assert main(["figure", figure_id, "--ci", "--output-dir", str(tmp_path)]) == EXIT_OK
