"""
Collision demonstration

Ships a published identical-prefix MD5 collision pair (two printable
strings differing in one character) and walks it through a chain: shared
MD5, stage-by-stage propagation, then register-as-a / login-as-b against a
throwaway store.
"""

import secrets
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

from .analysis import PropagationProof, collision_propagation_check
from .chains import ChainSpec, InputEncoding, Pepper, SaltSet, StageKind
from .credstore import CredentialStore
from .errors import PropagationFailure
from .logger import get_logger
from .primitives import md5

logger = get_logger(__name__)

TEXTCOLL_A = b"TEXTCOLLBYfGiJUETHQ4hEcKSMd5zYpgqf1YRDhkmxHkhPWptrkoyz28wnI9V0aHeAuaKnak"
TEXTCOLL_B = b"TEXTCOLLBYfGiJUETHQ4hAcKSMd5zYpgqf1YRDhkmxHkhPWptrkoyz28wnI9V0aHeAuaKnak"
TEXTCOLL_MD5_HEX = "faad49866e9498fc1719f5289e7a0269"

CONFIRMED = "COLLISION CONFIRMED"
NOT_VULNERABLE = "NO COLLISION (chain not vulnerable)"


def verify_embedded_pair() -> str:
    """Re-check the shipped pair; raises PropagationFailure on any transcription error"""
    if TEXTCOLL_A == TEXTCOLL_B:
        raise PropagationFailure("embedded collision strings are identical")
    digest_a = md5(TEXTCOLL_A).hex()
    digest_b = md5(TEXTCOLL_B).hex()
    if digest_a != TEXTCOLL_MD5_HEX or digest_b != TEXTCOLL_MD5_HEX:
        raise PropagationFailure(
            f"embedded pair does not collide to {TEXTCOLL_MD5_HEX} (got {digest_a} / {digest_b})"
        )
    return digest_a


def starts_with_plain_md5(spec: ChainSpec) -> bool:
    """Chains whose password-facing stage is unsalted MD5 over raw octets must propagate the pair"""
    first = spec.stages[0]
    return first.kind is StageKind.MD5_PLAIN and first.input_encoding is InputEncoding.RAW_BYTES


@dataclass
class DemoTranscript:
    lines: List[str] = field(default_factory=list)
    proof: Optional[PropagationProof] = None
    login_accepted: bool = False

    @property
    def confirmed(self) -> bool:
        return self.proof is not None and self.proof.propagates and self.login_accepted

    @property
    def exit_code(self) -> int:
        return 0 if self.confirmed else 1

    def add(self, line: str) -> None:
        self.lines.append(line)

    def render(self) -> str:
        return "".join(f"{line}\n" for line in self.lines)


def check_expected_propagation(spec: ChainSpec, proof: PropagationProof) -> None:
    if starts_with_plain_md5(spec) and not proof.propagates:
        raise PropagationFailure(
            f"chain '{spec.version}' starts with MD5 but the collision stopped at stage {proof.first_divergence}"
        )


def record_propagation(
    transcript: DemoTranscript, spec: ChainSpec, pepper: Optional[Pepper] = None
) -> PropagationProof:
    """
    Run the pair through ``spec`` with fresh salts and add one line per stage

    Raises:
        PropagationFailure: an MD5-first chain failed to propagate
    """
    pepper = pepper or Pepper(secrets.token_bytes(32))
    proof = collision_propagation_check(spec, TEXTCOLL_A, TEXTCOLL_B, SaltSet.generate(), pepper)
    transcript.proof = proof
    for name, equal in zip(proof.stage_names, proof.stage_equal):
        transcript.add(f"stage {name}: {'equal' if equal else 'differs'}")
    check_expected_propagation(spec, proof)
    return proof


def run_local_demo(spec: ChainSpec, workdir: Optional[Path] = None) -> DemoTranscript:
    """
    Full demonstration against a temporary store

    Args:
        spec: Chain to attack
        workdir: Directory for the throwaway store (a fresh temp dir by default)

    Returns:
        Transcript; ``confirmed`` iff the collision propagates and login as b succeeds

    Raises:
        PropagationFailure: the embedded pair is wrong, or an MD5-first chain failed to propagate
    """
    transcript = DemoTranscript()
    shared = verify_embedded_pair()
    transcript.add(f"a={TEXTCOLL_A.decode('ascii')}")
    transcript.add(f"b={TEXTCOLL_B.decode('ascii')}")
    transcript.add(f"md5(a)=md5(b)={shared}")
    transcript.add(f"chain={spec.version}")

    pepper = Pepper(secrets.token_bytes(32))
    record_propagation(transcript, spec, pepper)

    with tempfile.TemporaryDirectory(dir=workdir) as tmp:
        store = CredentialStore.open(
            Path(tmp) / "demo-store.txt", create=True, chains={spec.version: spec}, default_chain=spec.version
        )
        store.create_account("eve", TEXTCOLL_A, spec=spec, pepper=pepper)
        transcript.add("register eve with a: ok")
        outcome = store.authenticate("eve", TEXTCOLL_B, pepper)
        transcript.login_accepted = outcome.accepted
        transcript.add(f"login eve with b: {outcome.value}")

    transcript.add(CONFIRMED if transcript.confirmed else NOT_VULNERABLE)
    logger.info(f"Collision demo on {spec.version}: {'confirmed' if transcript.confirmed else 'not vulnerable'}")
    return transcript
