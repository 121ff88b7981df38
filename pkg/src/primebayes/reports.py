"""Corpus file parsing, CSV serialization, run reports, and the decay chart.

Every serializer here is deterministic: identical inputs yield identical
bytes, which is what makes golden-file comparisons and cross-machine
reproducibility checks meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from ._version import __version__
from .corpus import CountTable, _checked_verb
from .experiments import DecayRecord, EffectRecord, ExperimentConfig

__all__ = [
    "CorpusError",
    "CORPUS_HEADER",
    "parse_corpus",
    "serialize_corpus",
    "sim1_csv",
    "sim2_csv",
    "verb_report_block",
    "RunReport",
    "decay_chart_svg",
]

CORPUS_HEADER = "verb,do,po"
SIM1_HEADER = "prime_structure,overlap,mean_prior_do,mean_post_do,effect"
SIM2_HEADER = "prime_structure,overlap,n_batches,effect,std_error,replications"


class CorpusError(ValueError):
    """Raised for malformed corpus files."""


def _parse_count(text: str, line_no: int, column: str) -> int:
    if not text.isdigit():
        raise CorpusError(f"line {line_no}: {column} count must be a non-negative integer, got {text!r}")
    return int(text)


def parse_corpus(text: str) -> CountTable:
    """Parse 'verb,do,po' CSV text into a count table.

    The header line is required and blank lines are ignored. Duplicate
    verbs, malformed verb tokens, negative or non-integer counts, and rows
    with the wrong number of fields are all rejected with the offending
    line number; a corpus with no verb rows is rejected too.
    """
    numbered = [(i, line.strip()) for i, line in enumerate(text.splitlines(), start=1) if line.strip()]
    if not numbered:
        raise CorpusError("corpus is empty")
    header_no, header = numbered[0]
    if header != CORPUS_HEADER:
        raise CorpusError(f"line {header_no}: expected header {CORPUS_HEADER!r}, got {header!r}")
    verbs: list[str] = []
    dos: list[int] = []
    totals: list[int] = []
    first_line: dict[str, int] = {}
    for line_no, line in numbered[1:]:
        fields = [field.strip() for field in line.split(",")]
        if len(fields) != 3:
            raise CorpusError(f"line {line_no}: expected 3 comma-separated fields, got {len(fields)}")
        verb, do_text, po_text = fields
        try:
            _checked_verb(verb)
        except ValueError as exc:
            raise CorpusError(f"line {line_no}: {exc}") from None
        if verb in first_line:
            raise CorpusError(f"line {line_no}: duplicate verb {verb!r} (first seen on line {first_line[verb]})")
        first_line[verb] = line_no
        do = _parse_count(do_text, line_no, "do")
        po = _parse_count(po_text, line_no, "po")
        verbs.append(verb)
        dos.append(do)
        totals.append(do + po)
    if not verbs:
        raise CorpusError("corpus has no verb rows")
    return CountTable(tuple(verbs), tuple(dos), tuple(totals))


def serialize_corpus(counts: CountTable) -> str:
    """Inverse of parse_corpus: the header plus one verb,do,po row per verb."""
    lines = [CORPUS_HEADER]
    for verb, do, total in counts.rows():
        lines.append(f"{verb},{do},{total - do}")
    return "\n".join(lines) + "\n"


def sim1_csv(records: Sequence[EffectRecord]) -> str:
    """Single-prime results as CSV, probabilities and effects to 6 decimals."""
    lines = [SIM1_HEADER]
    for record in records:
        condition = record.condition
        lines.append(
            f"{condition.prime_structure.value},{condition.overlap.value},"
            f"{record.mean_prior_do:.6f},{record.mean_post_do:.6f},{record.effect:.6f}"
        )
    return "\n".join(lines) + "\n"


def sim2_csv(records: Sequence[DecayRecord]) -> str:
    """Decay results as CSV, effects and standard errors to 6 decimals."""
    lines = [SIM2_HEADER]
    for record in records:
        condition = record.condition
        lines.append(
            f"{condition.prime_structure.value},{condition.overlap.value},{record.n_batches},"
            f"{record.effect:.6f},{record.std_error:.6f},{record.replications}"
        )
    return "\n".join(lines) + "\n"


def verb_report_block(model) -> str:
    """Per-verb counts and predictive P(DO) for a fitted model, as CSV."""
    lines = ["verb,do_count,total_count,p_do"]
    for verb, do, total in model.counts_.rows():
        lines.append(f"{verb},{do},{total},{model.verb_probability(verb):.6f}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class RunReport:
    """Plain-text run summary: tool version, a full config echo, results.

    The config echo uses repr for alpha so that every digit needed to
    reproduce the run survives the round trip.
    """

    command: str
    config: ExperimentConfig
    corpus_label: str
    global_do_bias: float
    body: str

    def render(self) -> str:
        config = self.config
        lines = [
            f"tool: primebayes {__version__}",
            f"command: {self.command}",
            f"corpus: {self.corpus_label}",
            f"alpha: {config.alpha!r}",
            f"grid_size: {config.grid_size}",
            f"seed: {config.seed}",
            f"replications: {config.replications}",
            f"n_items: {config.n_items}",
            f"max_batches: {config.max_batches}",
            f"batch_size: {config.batch_size}",
            f"global_do_bias: {self.global_do_bias:.6f}",
            "",
        ]
        return "\n".join(lines) + self.body


# -- decay chart -----------------------------------------------------------

_SERIES_COLORS = {
    ("DO", "same"): "#d62728",
    ("DO", "different"): "#ff7f0e",
    ("PO", "same"): "#1f77b4",
    ("PO", "different"): "#2ca02c",
}


def _tick_step(span: float) -> float:
    raw = span / 4.0
    power = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * power * (1.0 + 1e-9):
            return mult * power
    return 10.0 * power


def _ticks(lo: float, hi: float) -> list[float]:
    step = _tick_step(hi - lo)
    first = math.ceil(lo / step - 1e-9)
    last = math.floor(hi / step + 1e-9)
    return [k * step for k in range(first, last + 1)]


def decay_chart_svg(records: Sequence[DecayRecord], width: int = 640, height: int = 420) -> str:
    """Self-contained SVG line chart of priming effect against batch count.

    One series per condition with circle markers and +/-1 standard-error
    whiskers. Pure string construction with fixed-precision coordinates,
    so identical records render to identical bytes.
    """
    if not records:
        raise ValueError("no records to plot")
    series: dict = {}
    for record in records:
        series.setdefault(record.condition, []).append(record)
    for recs in series.values():
        recs.sort(key=lambda r: r.n_batches)

    margin_left, margin_right, margin_top, margin_bottom = 64.0, 16.0, 44.0, 52.0
    plot_w = width - margin_left - margin_right
    plot_h = height - margin_top - margin_bottom

    xs = sorted({r.n_batches for r in records})
    x_lo, x_hi = float(xs[0]), float(xs[-1])
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    y_lo = min(0.0, min(r.effect - r.std_error for r in records))
    y_hi = max(0.0, max(r.effect + r.std_error for r in records))
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    pad = 0.08 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad

    def px(x: float) -> float:
        return margin_left + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return margin_top + (y_hi - y) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
        f'<text x="{width / 2:.2f}" y="24" text-anchor="middle" font-size="15" fill="#202020">'
        "Priming effect and its decay over exposure batches</text>",
    ]
    for tick in _ticks(y_lo, y_hi):
        y = py(tick)
        color = "#606060" if abs(tick) < 1e-12 else "#d8d8d8"
        parts.append(
            f'<line x1="{margin_left:.2f}" y1="{y:.2f}" x2="{margin_left + plot_w:.2f}" y2="{y:.2f}" '
            f'stroke="{color}" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{margin_left - 8:.2f}" y="{y + 4:.2f}" text-anchor="end" font-size="11" '
            f'fill="#404040">{tick:g}</text>'
        )
    for xv in xs:
        x = px(float(xv))
        parts.append(
            f'<line x1="{x:.2f}" y1="{margin_top + plot_h:.2f}" x2="{x:.2f}" '
            f'y2="{margin_top + plot_h + 5:.2f}" stroke="#404040" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{margin_top + plot_h + 20:.2f}" text-anchor="middle" font-size="11" '
            f'fill="#404040">{xv}</text>'
        )
    parts.append(
        f'<rect x="{margin_left:.2f}" y="{margin_top:.2f}" width="{plot_w:.2f}" height="{plot_h:.2f}" '
        'fill="none" stroke="#808080" stroke-width="1"/>'
    )
    parts.append(
        f'<text x="{margin_left + plot_w / 2:.2f}" y="{height - 12:.2f}" text-anchor="middle" '
        'font-size="12" fill="#202020">post-prime exposure batches</text>'
    )
    parts.append(
        f'<text x="16" y="{margin_top + plot_h / 2:.2f}" text-anchor="middle" font-size="12" '
        f'fill="#202020" transform="rotate(-90 16 {margin_top + plot_h / 2:.2f})">'
        "priming effect (log-odds)</text>"
    )

    legend_x = margin_left + plot_w - 190.0
    legend_y = margin_top + 10.0
    for row, (condition, recs) in enumerate(series.items()):
        key = (condition.prime_structure.value, condition.overlap.value)
        color = _SERIES_COLORS.get(key, "#555555")
        points = " ".join(f"{px(float(r.n_batches)):.2f},{py(r.effect):.2f}" for r in recs)
        parts.append(f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="2"/>')
        for r in recs:
            x, y = px(float(r.n_batches)), py(r.effect)
            if r.std_error > 0:
                parts.append(
                    f'<line x1="{x:.2f}" y1="{py(r.effect - r.std_error):.2f}" x2="{x:.2f}" '
                    f'y2="{py(r.effect + r.std_error):.2f}" stroke="{color}" stroke-width="1"/>'
                )
            parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3.2" fill="{color}"/>')
        ly = legend_y + 16.0 * row
        label = f"{key[0]} prime, {key[1]} verb"
        parts.append(
            f'<line x1="{legend_x:.2f}" y1="{ly:.2f}" x2="{legend_x + 22:.2f}" y2="{ly:.2f}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{legend_x + 28:.2f}" y="{ly + 4:.2f}" font-size="11" fill="#202020">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
