"""Image containers, rotation pipelines, display tactics and patterns."""
import numpy as np
import pytest

from finrot.errors import DomainError
from finrot.image import (MonoImage, RgbImage, clip_mono, clip_rgb, from_bytes, normalize_mono,
                          normalize_rgb_joint, normalize_rgb_per_channel, pattern_delta, pattern_letter_r,
                          pattern_step, rotate_mono, rotate_rgb, to_bytes)
from finrot.kernel import KernelCache, build_kernel_cartesian
from finrot.oscillator import OscillatorRep

rng = np.random.default_rng(11)


def row(values):
    return MonoImage(np.array([values, values, values], dtype=float).T)


class TestContainers:
    def test_non_square(self):
        with pytest.raises(DomainError, match="square"):
            MonoImage(np.zeros((3, 4)))

    def test_screen_range(self):
        with pytest.raises(DomainError):
            MonoImage(np.full((2, 2), 1.2), screen=True)
        assert MonoImage(np.full((2, 2), 1.2)).N == 2

    def test_read_only_copy(self):
        src = np.zeros((3, 3))
        img = MonoImage(src)
        src[0, 0] = 5
        assert img.pixels[0, 0] == 0
        with pytest.raises(ValueError):
            img.pixels[0, 0] = 1

    def test_rgb_checks(self):
        a, b = MonoImage(np.zeros((3, 3))), MonoImage(np.zeros((4, 4)))
        with pytest.raises(DomainError):
            RgbImage(a, a, b)
        with pytest.raises(DomainError):
            RgbImage(a, a, MonoImage(np.zeros((3, 3)), screen=True))
        with pytest.raises(DomainError):
            RgbImage.from_array(np.zeros((3, 3, 4)))

    def test_rgb_array_round_trip(self):
        arr = rng.random((5, 5, 3))
        assert np.array_equal(RgbImage.from_array(arr).to_array(), arr)


class TestRotation:
    def test_zero_angle(self):
        img = MonoImage(rng.random((9, 9)))
        assert np.abs(rotate_mono(img, 0.0).pixels - img.pixels).max() < 1e-10

    def test_letter_escapes_range(self):
        out = rotate_mono(pattern_letter_r(50), np.pi / 4)
        assert out.pixels.min() < 0 and out.pixels.max() > 1
        assert not out.screen

    def test_half_steps_compose(self):
        img = MonoImage(rng.random((12, 12)))
        cache = KernelCache()
        twice = rotate_mono(rotate_mono(img, np.pi / 8, cache), np.pi / 8, cache)
        assert np.abs(twice.pixels - rotate_mono(img, np.pi / 4, cache).pixels).max() < 1e-8

    def test_linearity_and_energy(self):
        F, G = MonoImage(rng.normal(size=(8, 8))), MonoImage(rng.normal(size=(8, 8)))
        k = build_kernel_cartesian(OscillatorRep.from_size(8), 0.9)
        lhs = rotate_mono(MonoImage(2 * F.pixels - 3 * G.pixels), 0.9, k).pixels
        rhs = 2 * rotate_mono(F, 0.9, k).pixels - 3 * rotate_mono(G, 0.9, k).pixels
        assert np.abs(lhs - rhs).max() < 1e-9
        assert abs(np.sum(rotate_mono(F, 0.9, k).pixels ** 2) - np.sum(F.pixels ** 2)) < 1e-9

    def test_kernel_mismatch(self):
        k = build_kernel_cartesian(OscillatorRep.from_size(5), 0.3)
        with pytest.raises(DomainError):
            rotate_mono(MonoImage(np.zeros((6, 6))), 0.3, k)
        with pytest.raises(DomainError):
            rotate_mono(MonoImage(np.zeros((5, 5))), 0.31, k)
        with pytest.raises(DomainError):
            rotate_mono(MonoImage(np.zeros((5, 5))), 0.3, "cache")

    def test_rgb_equals_channelwise(self):
        img = RgbImage.from_array(rng.random((10, 10, 3)))
        cache = KernelCache()
        out = rotate_rgb(img, 0.6, cache)
        for c_out, c_in in zip(out.channels, img.channels):
            assert np.array_equal(c_out.pixels, rotate_mono(c_in, 0.6, cache).pixels)

    def test_gray_stays_gray(self):
        g = rng.random((7, 7))
        out = rotate_rgb(RgbImage.from_array(np.stack([g, g, g], -1)), 1.2)
        assert np.array_equal(out.r.pixels, out.g.pixels) and np.array_equal(out.g.pixels, out.b.pixels)

    def test_rgb_zero_angle(self):
        arr = rng.random((6, 6, 3))
        assert np.abs(rotate_rgb(RgbImage.from_array(arr), 0.0).to_array() - arr).max() < 1e-10


class TestDisplay:
    def test_normalize_example(self):
        out, st = normalize_mono(row([-0.2, 0.5, 1.3]))
        assert (st.s, st.S) == (-0.2, 1.3)
        assert np.allclose(out.pixels[:, 0], [0.0, 0.7 / 1.5, 1.0], atol=1e-15)
        assert out.screen and out.display == "normalize"

    def test_normalize_in_range_unchanged(self):
        img = MonoImage(rng.random((5, 5)))
        out, st = normalize_mono(img)
        assert np.array_equal(out.pixels, img.pixels)
        assert (st.lower, st.upper) == (0.0, 1.0)

    def test_normalize_idempotent(self):
        once, _ = normalize_mono(rotate_mono(pattern_delta(11), np.pi / 4))
        twice, _ = normalize_mono(once)
        assert np.array_equal(once.pixels, twice.pixels)

    def test_normalize_attains_bounds_only_when_escaping_both_sides(self):
        both, _ = normalize_mono(row([-0.5, 0.3, 1.5]))
        assert both.pixels.min() == 0.0 and both.pixels.max() == 1.0
        low_only, _ = normalize_mono(row([-0.5, 0.3, 0.9]))
        assert low_only.pixels.min() == 0.0 and low_only.pixels.max() < 1.0

    def test_rotated_delta_normalized(self):
        data = rotate_mono(pattern_delta(51), np.pi / 4)
        out, st = normalize_mono(data)
        assert out.pixels.min() == 0.0
        # S stays below 1 here, so the widened upper bound keeps the maximum below 1
        assert st.S < 1.0
        assert out.pixels.max() == pytest.approx((st.S - st.s) / (1.0 - st.s), abs=1e-15)
        assert ((out.pixels > 0) & (out.pixels < 1)).sum() == out.pixels.size - 1

    def test_clip(self):
        out = clip_mono(row([-0.2, 0.5, 1.3]))
        assert np.array_equal(out.pixels[:, 0], [0.0, 0.5, 1.0])
        assert np.array_equal(clip_mono(out).pixels, out.pixels)
        img = MonoImage(rng.random((4, 4)), screen=True)
        assert np.array_equal(clip_mono(img).pixels, img.pixels)

    def test_clip_vs_normalize_on_letter(self):
        data = rotate_mono(pattern_letter_r(50), np.pi / 4)
        clipped, normed = clip_mono(data), normalize_mono(data)[0]
        outside = (data.pixels < 0) | (data.pixels > 1)
        # both tactics send the global extremes to 0 and 1; every other escaping pixel differs
        outside &= (data.pixels != data.pixels.min()) & (data.pixels != data.pixels.max())
        assert outside.sum() > 10
        assert (clipped.pixels[outside] != normed.pixels[outside]).all()

    def test_joint_example(self):
        r = np.linspace(-0.5, 0.5, 16).reshape(4, 4)
        g = np.linspace(0, 1, 16).reshape(4, 4)
        b = np.linspace(0, 1.5, 16).reshape(4, 4)
        out, st = normalize_rgb_joint(RgbImage.from_array(np.stack([r, g, b], -1)))
        assert (st.s, st.S, st.mode) == (-0.5, 1.5, "joint")
        for got, src in zip(out.channels, (r, g, b)):
            assert np.allclose(got.pixels, (src + 0.5) / 2, atol=1e-15)
        assert out.display == "normalize-joint" and out.screen

    def test_joint_preserves_difference_ratios(self):
        data = rotate_rgb(RgbImage.from_array(rng.random((9, 9, 3))), 0.7)
        out, _ = normalize_rgb_joint(data)
        a, b = data.to_array(), out.to_array()
        ratio_in = (a[..., 0] - a[..., 1]) / (a[..., 1] - a[..., 2])
        ratio_out = (b[..., 0] - b[..., 1]) / (b[..., 1] - b[..., 2])
        assert np.allclose(ratio_in, ratio_out, rtol=1e-9)

    def test_per_channel_differs(self):
        data = RgbImage.from_array(np.stack([np.full((3, 3), v) for v in (-0.5, 0.5, 2.0)], -1)
                                   + np.linspace(0, 0.1, 9).reshape(3, 3, 1))
        joint, _ = normalize_rgb_joint(data)
        per, stats = normalize_rgb_per_channel(data)
        assert len(stats) == 3 and per.display == "normalize-per-channel"
        assert not np.array_equal(joint.to_array(), per.to_array())

    def test_screen_rgb_unchanged(self):
        arr = rng.random((4, 4, 3))
        img = RgbImage.from_array(arr, screen=True)
        assert np.array_equal(normalize_rgb_joint(img)[0].to_array(), arr)
        assert np.array_equal(clip_rgb(img).to_array(), arr)


class TestPatterns:
    def test_delta(self):
        img = pattern_delta(11)
        assert np.array_equal(img.pixels[:, 5], np.ones(11))
        assert img.pixels.sum() == 11 and (img.pixels == 0).sum() == 110
        assert np.array_equal(pattern_delta(3).pixels.T, [[0, 0, 0], [1, 1, 1], [0, 0, 0]])

    @pytest.mark.parametrize("N", [10, 2, 0])
    def test_delta_parity(self, N):
        with pytest.raises(DomainError):
            pattern_delta(N)

    def test_step(self):
        file_rows = pattern_step(10).pixels.T
        assert (file_rows[:5] == 0).all() and (file_rows[5:] == 1).all()
        assert np.array_equal(pattern_step(2).pixels.T, [[0, 0], [1, 1]])
        with pytest.raises(DomainError):
            pattern_step(11)

    def test_letter(self):
        img = pattern_letter_r(50)
        assert img.N == 50 and set(np.unique(img.pixels)) == {0.0, 1.0}
        with pytest.raises(DomainError):
            pattern_letter_r(5)


class TestQuantization:
    def test_round_trip(self):
        b = np.arange(256, dtype=np.uint8)
        assert np.array_equal(to_bytes(from_bytes(b)), b)

    def test_half_rounds_up(self):
        assert to_bytes([0.5 / 255, 1.5 / 255, 1.0]).tolist() == [1, 2, 255]

    def test_rejects_data_values(self):
        with pytest.raises(DomainError):
            to_bytes([-0.1, 0.5])
