import math

import numpy as np
import pytest

from annealsolve import (
    BitRange,
    SupportKind,
    SupportSpec,
    SupportTooLargeError,
    decode,
    enumerate_patterns,
    enumerate_support,
)
from helpers import twos_complement_value

ALL_KINDS = list(SupportKind)


def test_bit_range_requires_r_below_p():
    with pytest.raises(ValueError):
        BitRange(0, 0)
    with pytest.raises(ValueError):
        BitRange(2, -1)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_decode_all_zero_bits(kind):
    spec = SupportSpec(kind, BitRange(-2, 1))
    assert decode([0] * spec.n_bits, spec) == 0.0


def test_decode_twos_complement_examples():
    spec = SupportSpec(SupportKind.TWOS_COMPLEMENT, BitRange(-1, 0))
    # theta = -1 + 1/2 = -1/2; bits are (q_{-1}, q_0)
    assert decode([1, 0], spec) == 0.5
    assert decode([0, 1], spec) == -0.5
    assert decode([1, 1], spec) == 0.0


def test_decode_positive_binary_expansion():
    spec = SupportSpec(SupportKind.POSITIVE, BitRange(-2, 0))
    assert decode([1, 1], spec) == 0.75


def test_decode_signed_magnitude_sign_bit():
    spec = SupportSpec(SupportKind.SIGNED_SYMMETRIC, BitRange(-1, 1))
    assert decode([1, 0, 0], spec) == 0.5
    assert decode([1, 0, 1], spec) == -0.5
    assert decode([0, 1, 1], spec) == -1.0


def test_decode_validates_length_and_bits():
    spec = SupportSpec(SupportKind.POSITIVE, BitRange(-2, 0))
    with pytest.raises(ValueError):
        decode([1], spec)
    with pytest.raises(ValueError):
        decode([1, 2], spec)


def test_enumerate_support_examples():
    sym = SupportSpec(SupportKind.SIGNED_SYMMETRIC, BitRange(0, 1))
    assert enumerate_support(sym).tolist() == [-1.0, 0.0, 1.0]

    pos = SupportSpec(SupportKind.POSITIVE, BitRange(-1, 1))
    assert enumerate_support(pos).tolist() == [0.0, 0.5, 1.0, 1.5]

    tc = SupportSpec(SupportKind.TWOS_COMPLEMENT, BitRange(-1, 0))
    bits, values = enumerate_patterns(tc)
    assert bits.shape == (4, 2)
    assert enumerate_support(tc).tolist() == [-0.5, 0.0, 0.5]


def test_enumeration_guard():
    spec = SupportSpec(SupportKind.POSITIVE, BitRange(-31, 0))
    with pytest.raises(SupportTooLargeError):
        enumerate_support(spec)


@pytest.mark.parametrize("kind", ALL_KINDS)
@pytest.mark.parametrize("r,p", [(-1, 0), (-3, 1), (0, 3), (-2, 2)])
def test_support_properties(kind, r, p):
    spec = SupportSpec(kind, BitRange(r, p))
    values = enumerate_support(spec)

    # strictly increasing distinct values inside the stated bounds
    assert np.all(np.diff(values) > 0)
    bound = math.ldexp(1.0, p) - math.ldexp(1.0, r)
    assert values.min() >= -bound and values.max() <= bound

    # grid spacing is a multiple of 2^r
    steps = np.diff(values) / math.ldexp(1.0, r)
    assert np.allclose(steps, np.round(steps), atol=0.0)

    if kind is SupportKind.POSITIVE:
        assert values.min() == 0.0
        assert values.size == 2 ** (p - r)
    else:
        # symmetric set: v present iff -v present
        assert set(values.tolist()) == set((-values).tolist())
    if kind is SupportKind.SIGNED_SYMMETRIC:
        assert values.size == 2 ** (p - r + 1) - 1


@pytest.mark.parametrize("r,p", [(-2, 1), (-1, 2)])
def test_positive_is_nonnegative_half_of_symmetric(r, p):
    sym = enumerate_support(SupportSpec(SupportKind.SIGNED_SYMMETRIC, BitRange(r, p)))
    pos = enumerate_support(SupportSpec(SupportKind.POSITIVE, BitRange(r, p)))
    assert pos.tolist() == [v for v in sym.tolist() if v >= 0.0]


def test_twos_complement_patterns_match_independent_expansion():
    spec = SupportSpec(SupportKind.TWOS_COMPLEMENT, BitRange(-3, 1))
    bits, values = enumerate_patterns(spec)
    assert bits.shape[0] == 2 ** (spec.range.width + 1)
    for row, value in zip(bits, values):
        assert value == twos_complement_value(row.tolist(), -3, 1)


def test_decode_matches_enumeration():
    for kind in ALL_KINDS:
        spec = SupportSpec(kind, BitRange(-2, 1))
        bits, values = enumerate_patterns(spec)
        for row, value in zip(bits, values):
            assert decode(row.tolist(), spec) == value
