from typing import List, Sequence

from ..utils.reporter import Pair, Reporter
from .bottleneck import BottleneckReport
from .compliance import ComplianceFinding
from .cost import GuessCost, format_scientific, weakening_factor


def report_pairs(report: BottleneckReport, findings: Sequence[ComplianceFinding], costs: Sequence[GuessCost]) -> List[Pair]:
    """Key/value pairs of an analysis, in the order ``analyze`` prints them"""
    pairs: List[Pair] = [
        ("chain", report.version),
        ("nominal_bits", report.nominal_bits),
        ("effective_bits", report.effective_bits),
        ("bottleneck_stage", report.bottleneck_stage),
        ("bottleneck_kind", report.bottleneck_kind),
        ("boundary_widths_bits", report.boundary_widths_bits),
        ("annotation_bits", report.annotation_bits),
        ("equivalent_chars", report.equivalent_chars),
        ("weakening_factor", format_scientific(weakening_factor(report))),
        ("findings", len(findings)),
    ]
    for index, finding in enumerate(findings):
        stage = "chain" if finding.stage is None else finding.stage
        pairs.append((f"finding.{index}", f"{finding.severity.value} {finding.code} stage={stage}"))
    for cost in costs:
        rate = format_scientific(cost.guesses_per_second)
        pairs.append((f"cost.{rate}", f"{cost.render()} seconds ({cost.years})"))
    return pairs


def render_report(
    report: BottleneckReport,
    findings: Sequence[ComplianceFinding],
    costs: Sequence[GuessCost],
    structured: bool = False,
) -> str:
    """
    Render an analysis

    Args:
        report: Bottleneck report
        findings: Compliance findings
        costs: Guess-cost estimates, one per configured rate
        structured: Stable ``key=value`` lines instead of tables

    Returns:
        Rendered text ending with a newline
    """
    reporter = Reporter(structured=structured)
    if structured:
        return reporter.export_structured(report_pairs(report, findings, costs))

    summary = [
        ("chain", report.version),
        ("nominal bits", report.nominal_bits),
        ("effective bits", report.effective_bits),
        ("bottleneck", f"stage {report.bottleneck_stage} ({report.bottleneck_kind})"),
        ("boundary widths", report.boundary_widths_bits),
        ("best-known attack bits", report.annotation_bits),
        ("equivalent password chars", report.equivalent_chars),
        ("weakening factor", format_scientific(weakening_factor(report))),
    ]
    parts = [reporter.render(f"Pre-image space: {report.version}", summary)]
    parts.append(
        reporter.export_table(
            "Compliance findings",
            ["severity", "code", "stage", "message"],
            [(f.severity.value, f.code, "chain" if f.stage is None else f.stage, f.message) for f in findings],
        )
    )
    if costs:
        parts.append(
            reporter.export_table(
                "Expected exhaustive search",
                ["guesses/s", "seconds", "years"],
                [(format_scientific(c.guesses_per_second), c.render(), c.years) for c in costs],
            )
        )
    return "".join(parts)
