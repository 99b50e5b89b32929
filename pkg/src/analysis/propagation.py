from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from ..chains import ChainSpec, Octets, Pepper, SaltSet, evaluate_chain, to_octets
from ..errors import IdenticalInputsError


class Verdict(str, Enum):
    COLLISION_PROPAGATES = "CollisionPropagates"
    NO_COLLISION = "NoCollision"


@dataclass(frozen=True)
class PropagationProof:
    input_a: bytes
    input_b: bytes
    stage_names: Tuple[str, ...]
    stage_equal: Tuple[bool, ...]
    verdict: Verdict

    @property
    def propagates(self) -> bool:
        return self.verdict is Verdict.COLLISION_PROPAGATES

    @property
    def first_divergence(self) -> Optional[int]:
        for index, equal in enumerate(self.stage_equal):
            if not equal:
                return index
        return None


def collision_propagation_check(
    spec: ChainSpec,
    a: Octets,
    b: Octets,
    salts: Optional[SaltSet],
    pepper: Optional[Pepper],
) -> PropagationProof:
    """
    Evaluate ``a`` and ``b`` with the same salts and pepper and compare stage by stage

    Raises:
        IdenticalInputsError: a and b are the same octet string
    """
    left, right = to_octets(a), to_octets(b)
    if left == right:
        raise IdenticalInputsError("collision check needs two distinct inputs")
    trace_a = evaluate_chain(spec, left, salts, pepper)
    trace_b = evaluate_chain(spec, right, salts, pepper)
    flags = tuple(x.octets == y.octets for x, y in zip(trace_a.outputs, trace_b.outputs))
    verdict = Verdict.COLLISION_PROPAGATES if all(flags) else Verdict.NO_COLLISION
    return PropagationProof(
        input_a=left,
        input_b=right,
        stage_names=tuple(out.name for out in trace_a.outputs),
        stage_equal=flags,
        verdict=verdict,
    )
