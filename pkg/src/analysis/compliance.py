from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

from ..chains import ChainSpec
from ..logger import get_logger
from ..primitives import LEGACY_ALGORITHMS, Algorithm
from .bottleneck import DEFAULT_MD5_PREIMAGE_BITS, BottleneckReport, effective_preimage_space

logger = get_logger(__name__)

RECOMMENDED_BITS = 256
RECOMMENDED_PASSWORD_CHARS = 16


class Severity(str, Enum):
    INFO = "Info"
    WARN = "Warn"
    CRITICAL = "Critical"


@dataclass(frozen=True)
class ComplianceFinding:
    severity: Severity
    code: str
    message: str
    stage: Optional[int] = None


class ComplianceChecker:
    """Static hash-usage findings for one chain"""

    def __init__(self, annotation_bits: Optional[int] = DEFAULT_MD5_PREIMAGE_BITS):
        self.annotation_bits = annotation_bits

    def check_deprecated_algorithms(self, spec: ChainSpec) -> List[ComplianceFinding]:
        findings = []
        for index, stage in enumerate(spec.stages):
            if stage.algorithm not in LEGACY_ALGORITHMS:
                continue
            if stage.algorithm is Algorithm.MD5:
                findings.append(
                    ComplianceFinding(
                        Severity.CRITICAL,
                        "DEPRECATED_MD5",
                        "MD5 is broken for collision resistance; chosen-prefix collisions are practical",
                        index,
                    )
                )
            else:
                findings.append(
                    ComplianceFinding(
                        Severity.WARN,
                        "DEPRECATED_SHA1",
                        "SHA-1 is deprecated for digital signatures and password storage",
                        index,
                    )
                )
        return findings

    def check_bottleneck(self, report: BottleneckReport) -> List[ComplianceFinding]:
        if report.effective_bits >= RECOMMENDED_BITS:
            return []
        return [
            ComplianceFinding(
                Severity.WARN,
                "BOTTLENECK_LT_256",
                f"effective pre-image space is {report.effective_bits} bits, below {RECOMMENDED_BITS} "
                f"(nominal output {report.nominal_bits} bits)",
                report.bottleneck_stage,
            )
        ]

    def check_entropy(self, spec: ChainSpec, report: BottleneckReport) -> List[ComplianceFinding]:
        if not any(stage.algorithm in LEGACY_ALGORITHMS for stage in spec.stages):
            return []
        chars = report.equivalent_chars
        annotated = None if self.annotation_bits is None else self.annotation_bits // 8
        shortest = chars if annotated is None else min(chars, annotated)
        if shortest >= RECOMMENDED_PASSWORD_CHARS:
            return []
        return [
            ComplianceFinding(
                Severity.WARN,
                "ENTROPY_BELOW_RECOMMENDED_LENGTH",
                f"store distinguishes at most {shortest} ASCII characters of password entropy, "
                f"below the recommended {RECOMMENDED_PASSWORD_CHARS}",
            )
        ]

    def check_salting(self, spec: ChainSpec) -> List[ComplianceFinding]:
        if any(stage.salted for stage in spec.stages):
            return [ComplianceFinding(Severity.INFO, "SALTED", "per-user salts are applied")]
        return [ComplianceFinding(Severity.WARN, "UNSALTED", "no stage applies a per-user salt")]

    def check_memory_hardness(self, spec: ChainSpec) -> List[ComplianceFinding]:
        return [
            ComplianceFinding(
                Severity.INFO,
                "MEMORY_HARD_PRESENT",
                f"memory-hard stage {stage.name} present ({stage.scrypt.memory_bytes} bytes per evaluation)",
                index,
            )
            for index, stage in enumerate(spec.stages)
            if stage.memory_hard
        ]

    def run(self, spec: ChainSpec) -> List[ComplianceFinding]:
        report = effective_preimage_space(spec, self.annotation_bits)
        findings = (
            self.check_deprecated_algorithms(spec)
            + self.check_bottleneck(report)
            + self.check_entropy(spec, report)
            + self.check_salting(spec)
            + self.check_memory_hardness(spec)
        )
        logger.debug(f"Compliance check for {spec.version}: {len(findings)} findings")
        return findings


def compliance_report(spec: ChainSpec, annotation_bits: Optional[int] = DEFAULT_MD5_PREIMAGE_BITS) -> List[ComplianceFinding]:
    """Findings for ``spec``, deprecated-algorithm findings first, in stage order"""
    return ComplianceChecker(annotation_bits).run(spec)
