import pytest

import src.collision as collision
from src.analysis import Verdict
from src.chains import facebook2014_chain, sha256_v1_chain, with_scrypt_cost
from src.errors import PropagationFailure


def test_embedded_pair_self_check():
    assert collision.verify_embedded_pair() == collision.TEXTCOLL_MD5_HEX


def test_self_check_catches_transcription_error(monkeypatch):
    monkeypatch.setattr(collision, "TEXTCOLL_B", collision.TEXTCOLL_B.replace(b"A", b"B", 1))
    with pytest.raises(PropagationFailure):
        collision.verify_embedded_pair()


def test_local_demo_confirms_on_fb2014(tmp_path):
    transcript = collision.run_local_demo(with_scrypt_cost(facebook2014_chain(), 16), workdir=tmp_path)
    assert transcript.confirmed
    assert transcript.exit_code == 0
    assert "md5(a)=md5(b)=faad49866e9498fc1719f5289e7a0269" in transcript.lines
    assert transcript.lines[-1] == collision.CONFIRMED
    assert transcript.proof.verdict is Verdict.COLLISION_PROPAGATES
    assert list(tmp_path.iterdir()) == []


def test_local_demo_on_control_chain(tmp_path):
    transcript = collision.run_local_demo(sha256_v1_chain(), workdir=tmp_path)
    assert not transcript.confirmed
    assert transcript.exit_code == 1
    assert transcript.lines[-1] == collision.NOT_VULNERABLE
    assert "login eve with b: reject" in transcript.lines


def test_md5_first_chain_that_does_not_propagate_is_a_failure(mocker):
    spec = with_scrypt_cost(facebook2014_chain(), 16)
    proof = mocker.Mock(propagates=False, first_divergence=2)
    with pytest.raises(PropagationFailure):
        collision.check_expected_propagation(spec, proof)


def test_record_propagation_adds_one_line_per_stage():
    transcript = collision.DemoTranscript()
    proof = collision.record_propagation(transcript, with_scrypt_cost(facebook2014_chain(), 16))
    assert proof.propagates
    assert transcript.proof is proof
    assert transcript.lines == [
        "stage md5: equal",
        "stage sha1: equal",
        "stage hmac_sha256: equal",
        "stage scrypt: equal",
        "stage sha256: equal",
    ]

    control = collision.DemoTranscript()
    assert not collision.record_propagation(control, sha256_v1_chain()).propagates
    assert control.lines == ["stage sha256: differs"]
