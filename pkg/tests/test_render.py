from rggspectra.experiments import SweepSummary
from rggspectra.render import render_markdown_to_html, render_report, write_report
from rggspectra.tables import RunManifest


def _manifest():
    manifest = RunManifest(
        command="fig2b",
        config={"regime": "thermodynamic", "n": [4096], "d": 1, "metric": "euclidean", "alpha": 0.001, "trials": 20},
        base_seed=0,
    )
    manifest.results = {"theorem2_bound": 0.125, "n=4096": {"radius": 0.0029296875}}
    manifest.timings = {"analytic": 0.25}
    return manifest


def test_report_lists_results_and_summaries():
    summary = SweepSummary(
        n=4096, trials=20, singular=0, mean_levy=0.1, mean_levy_cubed=0.001,
        std_levy_cubed=0.0002, bound_fraction=1.0,
    )
    text = render_report(_manifest(), [summary])
    assert text.startswith("# fig2b run")
    assert "| 4096 | 20 | 0 |" in text
    assert "**theorem2_bound**: 0.125" in text
    assert "radius = 0.0029296875" in text
    assert "- analytic: 0.250" in text


def test_html_has_table():
    html = render_markdown_to_html("| a | b |\n|---|---|\n| 1 | 2 |\n")
    assert "<table>" in html


def test_write_report(tmp_path):
    paths = write_report(_manifest(), [], tmp_path)
    assert [p.name for p in paths] == ["report.md", "report.html"]
    page = paths[1].read_text()
    assert "<title>rggspectra fig2b</title>" in page
    assert "<h1>fig2b run</h1>" in page
