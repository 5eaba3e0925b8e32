from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING, Sequence
import logging

import markdown
from jinja2 import Environment, FileSystemLoader, select_autoescape

from .tables import format_value, open_for_write

if TYPE_CHECKING:
    from .experiments import SweepSummary
    from .tables import RunManifest

logger = logging.getLogger(__name__)


def render_markdown_to_html(markdown_text: str) -> str:
    """
    Convert the markdown report into HTML using Python-Markdown.

    Tables are needed for the per-n summary.
    """
    return markdown.markdown(
        markdown_text,
        extensions=["tables"],
        output_format="html",
    )


def _create_jinja_environment() -> Environment:
    """Jinja2 environment reading the templates shipped inside the package."""
    templates_dir = Path(__file__).resolve().parent / "templates"
    env = Environment(
        loader=FileSystemLoader(str(templates_dir)),
        autoescape=select_autoescape(["html", "xml"]),
        keep_trailing_newline=True,
    )
    env.filters["num"] = format_value
    return env


_ENV = _create_jinja_environment()


def render_report(manifest: RunManifest, summaries: Sequence[SweepSummary]) -> str:
    """Markdown summary of an experiment directory: config, results, timings."""
    template = _ENV.get_template("report.md.j2")
    return template.render(manifest=manifest, summaries=summaries)


def write_report(
    manifest: RunManifest, summaries: Sequence[SweepSummary], out_dir: Path
) -> list[Path]:
    """
    Write `report.md` and its HTML rendering `report.html` into `out_dir`.

    Returns both paths so the caller can checksum them.
    """
    text = render_report(manifest, summaries)
    page = _ENV.get_template("report.html").render(
        title=f"rggspectra {manifest.command}",
        body_html=render_markdown_to_html(text),
    )
    paths = []
    for name, content in (("report.md", text), ("report.html", page)):
        path = out_dir / name
        with open_for_write(path) as handle:
            handle.write(content)
        paths.append(path)
    logger.debug("wrote report for %s to %s", manifest.command, out_dir)
    return paths
