import numpy as np
import pytest

from istftkit import blocks as B
from istftkit.nn import ShapeError, channel_concat, channel_shuffle, channel_split, leaky_relu

RNG = np.random.default_rng(77)


def randomize(layer, seed=0):
    rng = np.random.default_rng(seed)
    for _, p in layer.conv_params():
        p.weight[...] = rng.normal(0, 0.1, p.weight.shape).astype(np.float32)
        p.bias[...] = rng.normal(0, 0.1, p.bias.shape).astype(np.float32)
    return layer


def conv_weight_count(layer):
    return sum(p.weight.size for _, p in layer.conv_params())


class TestMrf1d:
    def test_zero_weights_add_fusion_is_identity(self):
        mrf = B.Mrf1d(B.Mrf1dConfig(8))
        x = RNG.standard_normal((8, 13)).astype(np.float32)
        assert np.allclose(mrf(x), x, atol=1e-6)

    def test_concat_fusion_channel_arity(self):
        mrf = randomize(B.Mrf1d(B.Mrf1dConfig(64, fusion="concat")))
        x = RNG.standard_normal((64, 5)).astype(np.float32)
        out = mrf(x)
        assert out.shape == (192, 5)
        assert mrf.out_shape((64, 5)) == (192, 5)

    @pytest.mark.parametrize("t", [1, 7, 64])
    def test_time_length_preserved(self, t):
        mrf = randomize(B.Mrf1d(B.Mrf1dConfig(4)))
        assert mrf(RNG.standard_normal((4, t)).astype(np.float32)).shape == (4, t)

    def test_channel_mismatch(self):
        mrf = B.Mrf1d(B.Mrf1dConfig(8))
        with pytest.raises(ShapeError):
            mrf.out_shape((4, 10))


class TestUpsample1d:
    def test_factor8_geometry(self):
        up = randomize(B.Upsample1d(128, 8))
        out = up(RNG.standard_normal((128, 10)).astype(np.float32))
        assert out.shape == (64, 80)

    def test_factor1_keeps_time_and_channels(self):
        up = randomize(B.Upsample1d(16, 1))
        assert up(RNG.standard_normal((16, 9)).astype(np.float32)).shape == (16, 9)

    def test_two_factor8_stages_give_64x(self):
        u1 = randomize(B.Upsample1d(128, 8))
        u2 = randomize(B.Upsample1d(64, 8))
        out = u2(u1(RNG.standard_normal((128, 3)).astype(np.float32)))
        assert out.shape == (32, 3 * 64)

    def test_unsupported_factor(self):
        with pytest.raises(ValueError):
            B.Upsample1d(8, 3)


class TestBlock2d:
    def test_res_zero_weights_identity(self):
        stack = B.Block2dStack(B.Block2dConfig(8))
        x = RNG.standard_normal((8, 4, 6)).astype(np.float32)
        assert np.allclose(stack(x), x, atol=1e-6)

    @pytest.mark.parametrize("kind", ["res", "shuffle"])
    @pytest.mark.parametrize("t", [1, 7, 64])
    def test_shape_preserved(self, kind, t):
        stack = randomize(B.Block2dStack(B.Block2dConfig(32, kind=kind)))
        x = RNG.standard_normal((32, 8, t)).astype(np.float32)
        assert stack(x).shape == (32, 8, t)

    def test_shuffle_zero_weights_fixed_permutation(self):
        cfg = B.Block2dConfig(8, kind="shuffle")
        stack = B.Block2dStack(cfg)
        x = RNG.standard_normal((8, 3, 4)).astype(np.float32)
        out = stack(x)
        # trace the split/concat/shuffle permutation over channel indices;
        # the transformed half becomes zero (bias-free convs)
        idx = np.arange(8)
        for _ in range(cfg.repeats):
            skip, _active = idx[:4], idx[4:]
            idx = np.concatenate([skip, np.full(4, -1)])
            idx = idx.reshape(2, 4).T.ravel()  # shuffle with two groups
        for pos, src in enumerate(idx):
            if src < 0:
                assert np.all(out[pos] == 0)
            else:
                assert np.array_equal(out[pos], x[src])

    def test_shuffle_conv_weights_half_of_res(self):
        for c in (8, 32, 64):
            res = B.Block2dStack(B.Block2dConfig(c, kind="res"))
            shf = B.Block2dStack(B.Block2dConfig(c, kind="shuffle"))
            assert 2 * conv_weight_count(shf) == conv_weight_count(res)

    def test_res_matches_primitive_composition(self):
        stack = randomize(B.Block2dStack(B.Block2dConfig(4, repeats=2)), seed=5)
        x = RNG.standard_normal((4, 5, 6)).astype(np.float32)
        want = x
        for c1, c2 in stack.units:
            xt = leaky_relu(want, 0.1)
            xt = c1(xt)
            xt = leaky_relu(xt, 0.1)
            want = want + c2(xt)
        assert np.allclose(stack(x), want, atol=1e-6)

    def test_shuffle_matches_primitive_composition(self):
        stack = randomize(B.Block2dStack(B.Block2dConfig(8, kind="shuffle")), seed=9)
        x = RNG.standard_normal((8, 3, 5)).astype(np.float32)
        want = x
        for c1, c2 in stack.units:
            skip, active = channel_split(want)
            xt = leaky_relu(active, 0.1)
            xt = c1(xt)
            xt = leaky_relu(xt, 0.1)
            want = channel_shuffle(channel_concat(skip, c2(xt)), 2)
        assert np.allclose(stack(x), want, atol=1e-6)

    def test_odd_channels_rejected(self):
        with pytest.raises(ValueError):
            B.Block2dConfig(7, kind="shuffle")


class TestFreqUpHead:
    def test_ladder_to_65_bins(self):
        head = randomize(B.FreqUpHead(32, 8, 65, 2))
        x = RNG.standard_normal((32, 8, 11)).astype(np.float32)
        out = head(x)
        assert out.shape == (2, 65, 11)
        assert len(head.rungs) == 3

    def test_multiband_variant(self):
        head = randomize(B.FreqUpHead(64, 4, 33, 8))
        out = head(RNG.standard_normal((64, 4, 5)).astype(np.float32))
        assert out.shape == (8, 33, 5)

    @pytest.mark.parametrize("t", [1, 7, 64])
    def test_time_axis_invariant(self, t):
        head = randomize(B.FreqUpHead(16, 8, 17, 2))
        assert head(RNG.standard_normal((16, 8, t)).astype(np.float32)).shape[2] == t

    def test_unreachable_geometry(self):
        with pytest.raises(ShapeError):
            B.FreqUpHead(16, 8, 20, 2)
