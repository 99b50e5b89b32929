import base64
import os
import signal
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

import src.credstore.store as store_module
from src.chains import (
    FB2014_VERSION,
    LEGACY_MD5_VERSION,
    SHA256_V1_VERSION,
    SaltSet,
    VerificationOutcome,
    evaluate_chain,
)
from src.collision import TEXTCOLL_A, TEXTCOLL_B
from src.credstore import STORE_HEADER, CredentialRecord, CredentialStore, parse_record, serialize_record
from src.errors import (
    DuplicateUsernameError,
    InvalidRecordError,
    MalformedLineError,
    StoreIOError,
    UnknownUserError,
    UnknownVersionError,
)
from src.logger import ROOT

ZERO_LINE = (
    "alice:$onion$fb2014$s1=AAAAAAAAAAAAAAAAAAAAAAAAAAA=,"
    "s2=AAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAA=$AAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAA="
)


def test_serialize_zero_record():
    record = CredentialRecord("alice", FB2014_VERSION, SaltSet.zeros(), bytes(32))
    assert serialize_record(record) == ZERO_LINE
    assert parse_record(ZERO_LINE) == record


def test_legacy_md5_record_has_empty_salt_section():
    record = CredentialRecord("bob", LEGACY_MD5_VERSION, None, bytes.fromhex("900150983cd24fb0d6963f7d28e17f72"))
    line = serialize_record(record)
    assert line == "bob:$onion$md5$$kAFQmDzST7DWlj99KOF/cg=="
    assert parse_record(line) == record


@given(
    st.from_regex(r"[A-Za-z0-9._@ -]{1,32}", fullmatch=True),
    st.binary(min_size=20, max_size=20),
    st.binary(min_size=32, max_size=32),
    st.binary(min_size=32, max_size=32),
)
def test_record_roundtrip_identity(username, sha1_salt, scrypt_salt, value):
    record = CredentialRecord(username, FB2014_VERSION, SaltSet(sha1_salt, scrypt_salt), value)
    line = serialize_record(record)
    assert parse_record(line) == record
    assert serialize_record(parse_record(line)) == line


@pytest.mark.parametrize(
    "line",
    [
        "alice",
        "alice:$notonion$fb2014$s1=,s2=$AAAA",
        ZERO_LINE.replace("s1=", "s1 ="),
        ZERO_LINE.replace("s1=AAAAAAAAAAAAAAAAAAAAAAAAAAA=", "s1=AAAA"),
        ZERO_LINE[:-1],
        ZERO_LINE + " ",
        ZERO_LINE.replace(",s2=", ";s2="),
        ZERO_LINE.replace("$AAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAA=", "$AAAA"),
        "alice:$onion$md5$$AAAA",
    ],
)
def test_parse_rejects_malformed_lines(line):
    with pytest.raises(MalformedLineError):
        parse_record(line)


def test_malformed_line_reports_position():
    with pytest.raises(MalformedLineError) as info:
        parse_record("alice:$wrong$")
    assert info.value.position == 6


def test_unknown_version_is_distinct():
    with pytest.raises(UnknownVersionError) as info:
        parse_record(ZERO_LINE.replace("$fb2014$", "$argon2$"))
    assert info.value.version == "argon2"
    assert info.value.username == "alice"


def test_record_invariants():
    with pytest.raises(InvalidRecordError):
        CredentialRecord("alice", FB2014_VERSION, SaltSet.zeros(), bytes(16))
    with pytest.raises(InvalidRecordError):
        CredentialRecord("alice", FB2014_VERSION, None, bytes(32))
    with pytest.raises(InvalidRecordError):
        CredentialRecord("a:b", FB2014_VERSION, SaltSet.zeros(), bytes(32))
    with pytest.raises(InvalidRecordError):
        CredentialRecord("x" * 65, FB2014_VERSION, SaltSet.zeros(), bytes(32))


def test_store_create_and_authenticate(store, pepper, store_path):
    store.create_account("eve", TEXTCOLL_A, pepper=pepper)
    assert store.authenticate("eve", TEXTCOLL_A, pepper) is VerificationOutcome.ACCEPT
    assert store.authenticate("eve", TEXTCOLL_B, pepper) is VerificationOutcome.ACCEPT
    assert store.authenticate("eve", "abd", pepper) is VerificationOutcome.REJECT
    text = store_path.read_text(encoding="utf-8")
    assert text.startswith(STORE_HEADER + "\n")
    assert text.endswith("\n")


def test_store_durable_across_instances(store, pepper, store_path, fast_fb2014):
    store.create_account("eve", "correct horse", pepper=pepper)
    reopened = CredentialStore.open(store_path, chains={FB2014_VERSION: fast_fb2014})
    assert reopened.authenticate("eve", "correct horse", pepper).accepted
    assert len(reopened) == 1


def test_store_holds_no_intermediates(store, pepper, store_path, fast_fb2014):
    record = store.create_account("eve", "hunter2", pepper=pepper)
    trace = evaluate_chain(fast_fb2014, "hunter2", record.salts, pepper)
    text = store_path.read_text(encoding="utf-8")
    for digest in (trace.m, trace.s1, trace.s2):
        assert digest.hex() not in text
    assert "hunter2" not in text
    assert len(text.strip().split("\n")) == 2


def test_duplicate_username(store, pepper):
    store.create_account("eve", "pw", pepper=pepper)
    with pytest.raises(DuplicateUsernameError):
        store.create_account("eve", "other", pepper=pepper)


def test_unknown_user_rejected_after_dummy_evaluation(store, pepper, mocker):
    spy = mocker.spy(store_module, "verify")
    assert store.authenticate("nobody", "pw", pepper) is VerificationOutcome.REJECT
    assert spy.call_count == 1


def test_set_password_rotates_salts(store, pepper):
    first = store.create_account("eve", "old", pepper=pepper)
    second = store.set_password("eve", "new", pepper)
    assert second.salts != first.salts
    assert store.authenticate("eve", "new", pepper).accepted
    assert not store.authenticate("eve", "old", pepper).accepted
    with pytest.raises(UnknownUserError):
        store.set_password("ghost", "x", pepper)


def test_mixed_versions_in_one_store(store, pepper, sha256_v1):
    store.create_account("eve", "pw", pepper=pepper)
    store.create_account("sam", "pw", spec=sha256_v1, pepper=pepper)
    assert store.authenticate("sam", "pw", pepper).accepted
    assert sorted(store.list_records()) == [("eve", FB2014_VERSION, True), ("sam", SHA256_V1_VERSION, True)]


def test_unknown_version_lines_are_preserved(store, pepper, store_path):
    foreign = ZERO_LINE.replace("alice", "zed").replace("$fb2014$", "$argon2$")
    store_path.write_text(f"{STORE_HEADER}\n{foreign}\n", encoding="utf-8")
    store.create_account("eve", "pw", pepper=pepper)
    assert foreign in store_path.read_text(encoding="utf-8").split("\n")
    assert ("zed", "argon2", False) in store.list_records()
    assert store.authenticate("zed", "pw", pepper) is VerificationOutcome.REJECT


def test_missing_store_is_io_error(tmp_path):
    with pytest.raises(StoreIOError):
        CredentialStore.open(tmp_path / "absent.txt")


def test_bad_header_and_duplicate_lines(store_path, fast_fb2014):
    store_path.write_text("#wrong\n", encoding="utf-8")
    with pytest.raises(MalformedLineError) as info:
        CredentialStore.open(store_path, chains={FB2014_VERSION: fast_fb2014})
    assert info.value.line_number == 1

    store_path.write_text(f"{STORE_HEADER}\n{ZERO_LINE}\n{ZERO_LINE}\n", encoding="utf-8")
    with pytest.raises(MalformedLineError) as info:
        CredentialStore.open(store_path, chains={FB2014_VERSION: fast_fb2014})
    assert info.value.line_number == 3


def test_failed_rename_leaves_previous_store(store, pepper, store_path, mocker):
    store.create_account("eve", "pw", pepper=pepper)
    before = store_path.read_text(encoding="utf-8")
    mocker.patch("src.utils.files.os.replace", side_effect=OSError("disk full"))
    with pytest.raises(StoreIOError):
        store.create_account("mallory", "pw", pepper=pepper)
    assert store_path.read_text(encoding="utf-8") == before
    assert not [p for p in store_path.parent.iterdir() if p.name.startswith(".") and p.name.endswith(".tmp")]


def test_failed_fsync_leaves_previous_store(store, pepper, store_path, mocker):
    store.create_account("eve", "pw", pepper=pepper)
    before = store_path.read_text(encoding="utf-8")
    mocker.patch("src.utils.files.os.fsync", side_effect=OSError("io error"))
    with pytest.raises(StoreIOError):
        store.set_password("eve", "new", pepper)
    assert store_path.read_text(encoding="utf-8") == before
    assert store.authenticate("eve", "pw", pepper).accepted


def test_lock_file_is_sidecar(store, pepper, store_path):
    store.create_account("eve", "pw", pepper=pepper)
    assert (store_path.parent / (store_path.name + ".lock")).exists()
    assert os.path.getsize(store_path.parent / (store_path.name + ".lock")) == 0


def test_over_long_candidate_is_rejected_not_raised(store, pepper):
    store.create_account("eve", "pw", pepper=pepper)
    assert store.authenticate("eve", b"x" * 4097, pepper) is VerificationOutcome.REJECT
    assert store.authenticate("ghost", b"x" * 4097, pepper) is VerificationOutcome.REJECT


def test_over_long_candidate_still_spends_a_chain_evaluation(store, pepper, mocker):
    spy = mocker.spy(store_module, "verify")
    assert store.authenticate("ghost", b"x" * 4097, pepper) is VerificationOutcome.REJECT
    assert spy.call_count == 2


def _b64_octets(n):
    return base64.b64encode(bytes(n)).decode("ascii")


def test_unknown_version_with_foreign_salt_widths_opens(store, pepper, store_path):
    foreign = f"zed:$onion$fb2030$s1={_b64_octets(16)},s2={_b64_octets(16)}${_b64_octets(16)}"
    store.create_account("eve", "pw", pepper=pepper)
    store_path.write_text(store_path.read_text(encoding="utf-8") + foreign + "\n", encoding="utf-8")

    reopened = CredentialStore.open(store_path, chains={FB2014_VERSION: store.default_spec})
    assert ("zed", "fb2030", False) in reopened.list_records()
    reopened.create_account("sam", "pw", pepper=pepper)
    assert foreign in store_path.read_text(encoding="utf-8").split("\n")
    assert reopened.authenticate("eve", "pw", pepper).accepted


def test_known_version_still_enforces_salt_widths():
    line = f"zed:$onion$fb2014$s1={_b64_octets(16)},s2={_b64_octets(32)}${_b64_octets(32)}"
    with pytest.raises(MalformedLineError):
        parse_record(line)


def test_unknown_version_must_still_be_canonical_base64():
    with pytest.raises(MalformedLineError):
        parse_record("zed:$onion$fb2030$s1=AAA,s2=AAAA$AAAA")


def test_dollar_in_username_with_unknown_version(store_path, fast_fb2014):
    store_path.write_text(f"{STORE_HEADER}\na$b:$onion$argon2$$AAAA\n", encoding="utf-8")
    store = CredentialStore.open(store_path, chains={FB2014_VERSION: fast_fb2014})
    assert store.list_records() == [("a$b", "argon2", False)]


@pytest.mark.parametrize("version", ["fb 2014", "fb$2014", "", "fb:2014"])
def test_serialize_rejects_bad_version_label(version):
    record = CredentialRecord("alice", version, None, bytes(16))
    with pytest.raises(InvalidRecordError):
        serialize_record(record)


_WRITER = """
import sys
from src.chains import SHA256_V1_VERSION, sha256_v1_chain
from src.credstore import CredentialStore

store = CredentialStore.open(sys.argv[1], create=True, default_chain=SHA256_V1_VERSION)
spec = sha256_v1_chain()
i = 0
while True:
    store.create_account(f"user{i}", "pw", spec=spec)
    print(f"committed user{i}", flush=True)
    i += 1
"""


@pytest.mark.parametrize("committed", [1, 5, 20])
def test_killed_writer_leaves_consistent_store(tmp_path, committed):
    path = tmp_path / "store.txt"
    env = dict(os.environ, PYTHONPATH=str(ROOT))
    child = subprocess.Popen(
        [sys.executable, "-c", _WRITER, str(path)],
        cwd=ROOT,
        env=env,
        stdout=subprocess.PIPE,
        stderr=subprocess.DEVNULL,
        text=True,
    )
    try:
        seen = 0
        while seen < committed:
            line = child.stdout.readline()
            assert line, "writer exited early"
            seen += line.startswith("committed ")
        child.send_signal(signal.SIGKILL)
    finally:
        child.kill()
        child.wait()
        child.stdout.close()

    store = CredentialStore.open(path, default_chain=SHA256_V1_VERSION)
    names = [username for username, _, _ in store.list_records()]
    assert len(names) >= committed
    assert names == [f"user{i}" for i in range(len(names))]
    for username in names:
        assert store.authenticate(username, "pw", None).accepted
