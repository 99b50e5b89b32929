import random
import secrets

import pytest
from hypothesis import given, settings, strategies as st

from src.collision import TEXTCOLL_A, TEXTCOLL_B
from src.errors import InvalidParamsError, MalformedHexError
from src.primitives import (
    LEGACY_ALGORITHMS,
    Algorithm,
    Digest,
    ScryptParams,
    constant_time_equal,
    hmac_sha256,
    md5,
    scrypt_kdf,
    sha1,
    sha256,
)


@pytest.mark.parametrize(
    "message,expected",
    [
        (b"", "d41d8cd98f00b204e9800998ecf8427e"),
        (b"a", "0cc175b9c0f1b6a831c399e269772661"),
        (b"abc", "900150983cd24fb0d6963f7d28e17f72"),
        (b"message digest", "f96b697d7cb7938d525a2f31aaf161d0"),
        (b"abcdefghijklmnopqrstuvwxyz", "c3fcd3d76192e4007dfb496cca67e13b"),
        (
            b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789",
            "d174ab98d277d9f5a5611c2c9f419d9f",
        ),
        (b"1234567890" * 8, "57edf4a22be3c955ac49da2e2107b67a"),
    ],
)
def test_md5_rfc1321_suite(message, expected):
    assert md5(message).hex() == expected


@pytest.mark.parametrize(
    "message,expected",
    [
        (b"abc", "a9993e364706816aba3e25717850c26c9cd0d89d"),
        (b"", "da39a3ee5e6b4b0d3255bfef95601890afd80709"),
        (b"abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq", "84983e441c3bd26ebaae4aa1f95129e5e54670f1"),
    ],
)
def test_sha1_vectors(message, expected):
    assert sha1(message).hex() == expected


@pytest.mark.parametrize(
    "message,expected",
    [
        (b"abc", "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"),
        (b"", "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"),
        (
            b"abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq",
            "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1",
        ),
    ],
)
def test_sha256_vectors(message, expected):
    assert sha256(message).hex() == expected


def test_hmac_sha256_rfc4231_case_1():
    tag = hmac_sha256(b"\x0b" * 20, b"Hi There")
    assert tag.hex() == "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7"


def test_hmac_sha256_rfc4231_case_2():
    tag = hmac_sha256(b"Jefe", b"what do ya want for nothing?")
    assert tag.hex() == "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843"


def test_hmac_sha256_accepts_empty_key():
    assert len(hmac_sha256(b"", b"x").raw) == 32


def test_scrypt_rfc7914_empty_password():
    out = scrypt_kdf(b"", b"", ScryptParams(n=16, r=1, p=1, dk_len=64))
    assert out.hex() == (
        "77d6576238657b203b19ca42c18a0497f16b4844e3074ae8dfdffa3fede21442"
        "fcd0069ded0948f8326a753a0fc81f17e8d3e0fb2e0d3628cf35e20c38d18906"
    )


def test_scrypt_rfc7914_password_nacl():
    out = scrypt_kdf(b"password", b"NaCl", ScryptParams(n=1024, r=8, p=16, dk_len=64))
    assert out.hex() == (
        "fdbabe1c9d3472007856e7190d01e9fe7c6ad7cbc8237830e77376634b373162"
        "2eaf30d92e22a3886ff109279d9830dac727afb94a83ee6d8360cbdfa2cc0640"
    )


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n": 15, "r": 8, "p": 1, "dk_len": 64},
        {"n": 1, "r": 8, "p": 1, "dk_len": 64},
        {"n": 16, "r": 0, "p": 1, "dk_len": 64},
        {"n": 16, "r": 8, "p": 0, "dk_len": 64},
        {"n": 16, "r": 8, "p": 1, "dk_len": 8},
    ],
)
def test_scrypt_params_rejected(kwargs):
    with pytest.raises(InvalidParamsError):
        ScryptParams(**kwargs)


def test_md5_textcoll_pair_collides():
    a = b"TEXTCOLLBYfGiJUETHQ4hEcKSMd5zYpgqf1YRDhkmxHkhPWptrkoyz28wnI9V0aHeAuaKnak"
    b = b"TEXTCOLLBYfGiJUETHQ4hAcKSMd5zYpgqf1YRDhkmxHkhPWptrkoyz28wnI9V0aHeAuaKnak"
    assert a != b
    assert md5(a) == md5(b)
    assert md5(a).hex() == "faad49866e9498fc1719f5289e7a0269"


def test_single_bit_flip_changes_every_digest():
    base, flipped = b"password", b"passwore"
    for fn in (md5, sha1, sha256):
        left, right = fn(base).raw, fn(flipped).raw
        differing = sum(bin(x ^ y).count("1") for x, y in zip(left, right))
        assert differing > len(left) * 8 // 4


def test_digest_from_hex_is_strict():
    assert Digest.from_hex(Algorithm.MD5, "900150983cd24fb0d6963f7d28e17f72") == md5(b"abc")
    with pytest.raises(MalformedHexError):
        Digest.from_hex(Algorithm.MD5, "900150983CD24FB0D6963F7D28E17F72")
    with pytest.raises(MalformedHexError):
        Digest.from_hex(Algorithm.MD5, "900150983cd24fb0")
    with pytest.raises(MalformedHexError):
        Digest.from_hex(Algorithm.MD5, "z00150983cd24fb0d6963f7d28e17f72")


def test_digest_length_checked():
    with pytest.raises(InvalidParamsError):
        Digest(Algorithm.SHA1, b"\x00" * 16)


def test_legacy_algorithms():
    assert LEGACY_ALGORITHMS == {Algorithm.MD5, Algorithm.SHA1}
    assert Algorithm.SHA256 not in LEGACY_ALGORITHMS


def test_constant_time_equal():
    assert constant_time_equal(b"abc", b"abc")
    assert not constant_time_equal(b"abc", b"abd")


WIDTHS = {md5: 16, sha1: 20, sha256: 32}


def test_output_width_constant_for_every_length_up_to_4096():
    buffer = secrets.token_bytes(4096)
    for length in range(4097):
        message = buffer[:length]
        for fn, width in WIDTHS.items():
            assert len(fn(message).raw) == width
        assert len(hmac_sha256(b"k", message).raw) == 32


@settings(max_examples=25, deadline=None)
@given(st.binary(max_size=4096), st.sampled_from([16, 32, 64]))
def test_scrypt_output_width_matches_dk_len(password, dk_len):
    assert len(scrypt_kdf(password, b"salt", ScryptParams(n=16, r=1, p=1, dk_len=dk_len))) == dk_len


@pytest.mark.parametrize("fn", [md5, sha1, sha256, lambda m: hmac_sha256(b"k", m)])
def test_one_bit_flip_changes_digest_in_every_trial(fn):
    rng = random.Random(1)
    for _ in range(100):
        message = bytearray(rng.randbytes(rng.randint(1, 256)))
        before = fn(bytes(message)).raw
        bit = rng.randrange(len(message) * 8)
        message[bit // 8] ^= 1 << (bit % 8)
        assert fn(bytes(message)).raw != before


def test_textcoll_pair_does_not_collide_beyond_md5():
    assert sha1(TEXTCOLL_A) != sha1(TEXTCOLL_B)
    assert sha256(TEXTCOLL_A) != sha256(TEXTCOLL_B)
