from dataclasses import dataclass
from typing import Optional, Tuple

from ..chains import ChainSpec, StageKind
from ..errors import InvalidSpecError

# Best-known MD5 pre-image cost in bits; literature value, carried as metadata only
DEFAULT_MD5_PREIMAGE_BITS = 123


@dataclass(frozen=True)
class BottleneckReport:
    """
    Structural pre-image space of a chain

    ``effective_bits`` is the narrowest digest boundary between the password
    and the stored value. Salts and pepper do not widen it: salts are public
    and the pepper is fixed for every verification.
    """

    version: str
    boundary_widths_bits: Tuple[int, ...]
    effective_bits: int
    bottleneck_stage: int
    nominal_bits: int
    bottleneck_kind: str
    annotation_bits: Optional[int] = None

    @property
    def equivalent_chars(self) -> int:
        """Longest ASCII password (8 bits per character) the store can tell apart"""
        return self.effective_bits // 8


def effective_preimage_space(spec: ChainSpec, annotation_bits: Optional[int] = DEFAULT_MD5_PREIMAGE_BITS) -> BottleneckReport:
    """
    Compute boundary widths and the bottleneck of ``spec``

    Args:
        spec: Chain to analyze
        annotation_bits: Best-known attack figure attached when the bottleneck
            stage is MD5; ignored otherwise

    Returns:
        BottleneckReport; ties resolve to the earliest stage
    """
    if not isinstance(spec, ChainSpec):
        raise InvalidSpecError("effective_preimage_space expects a ChainSpec")
    widths = tuple(stage.output_bits for stage in spec.stages)
    effective = min(widths)
    index = widths.index(effective)
    stage = spec.stages[index]
    annotation = None
    if annotation_bits is not None and stage.kind is StageKind.MD5_PLAIN:
        annotation = min(annotation_bits, effective)
    return BottleneckReport(
        version=spec.version,
        boundary_widths_bits=widths,
        effective_bits=effective,
        bottleneck_stage=index,
        nominal_bits=spec.output_width_bits,
        bottleneck_kind=stage.name,
        annotation_bits=annotation,
    )
