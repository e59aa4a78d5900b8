import numpy as np
import pytest
import torch
import torch.nn as nn

from ..errors import InsenetError, ModelConstructionError, NormalizationStateError, ShapeError
from ..frontend.pairing import PairedInput
from ..training.loss import smooth_l1
from ..training.norm_stats import NormStats
from .checkpoint import load_checkpoint, save_checkpoint
from .layers import InceptionBlock, SEBlock
from .network import build_model, count_parameters, forward
from .spec import InceptionBlockSpec, ModelSpec, SEBlockSpec, default_model_spec, miniature_model_spec

TABLE_SHAPES = {
    "inception_a1": (208, 16, 180),
    "inception_a2": (224, 16, 90),
    "se1": (224, 16, 90),
    "inception_b": (256, 16, 45),
    "se2": (256, 16, 45),
    "inception_c": (256, 14, 22),
    "se3": (256, 14, 22),
    "pool": (256, 4, 4),
    "fc1": (3200,),
    "fc2": (512,),
    "fc3": (1,),
}


@pytest.fixture(scope="module")
def default_model():
    model = build_model(default_model_spec(), seed=0)
    model.eval()
    return model


def _normalized_pair(seed=0, frames=360):
    tensor = np.random.default_rng(seed).standard_normal((2, 32, frames)).astype(np.float32)
    return PairedInput(tensor=tensor, normalized=True)


def test_spec_layer_shapes():
    assert dict(default_model_spec().layer_shapes()) == TABLE_SHAPES


def test_forward_layer_shapes(default_model):
    with torch.no_grad():
        outputs = default_model.layer_outputs(torch.randn(1, 2, 32, 360))
    assert [name for name, _ in outputs] == list(TABLE_SHAPES)
    for name, value in outputs:
        assert tuple(value.shape[1:]) == TABLE_SHAPES[name], name


def test_parameter_counts(default_model):
    assert 14_490_000 <= count_parameters(default_model) <= 16_010_000
    fc_in = 256 * 4 * 4
    head = (fc_in * 3200 + 3200) + (3200 * 512 + 512) + (512 + 1)
    assert head == 14_749_825
    assert sum(count_parameters(fc) for fc in default_model.head) == head
    assert count_parameters(default_model.head[-1]) == 513


def test_output_channels_are_branch_sums():
    for layer in default_model_spec().layers:
        if isinstance(layer, InceptionBlockSpec):
            assert layer.out_channels == sum(layer.widths)


def test_channel_mismatch_names_layer():
    spec = default_model_spec()
    a1, a2 = spec.layers[0], spec.layers[1]
    bad = ModelSpec(layers=(a1, InceptionBlockSpec("inception_a2", "A", 200, a2.widths, (3, 7), (7, 3), (1, 2))))
    with pytest.raises(ModelConstructionError, match="inception_a2"):
        build_model(bad)
    with pytest.raises(ModelConstructionError, match="se_bad"):
        build_model(ModelSpec(layers=(a1, SEBlockSpec("se_bad", 64))))


def test_input_too_small_names_layer():
    block = InceptionBlockSpec("tiny_c", "C", 2, (4, 4, 4, 4), (3, 3), (5, 5), (1, 2), "valid")
    with pytest.raises(ModelConstructionError, match="tiny_c"):
        ModelSpec(input_shape=(2, 2, 2), layers=(block,), fc_widths=()).layer_shapes()


def test_invalid_block_specs():
    with pytest.raises(ModelConstructionError):
        InceptionBlockSpec("x", "D", 2, (4, 4, 4, 4), (3, 7), (7, 3))
    with pytest.raises(ModelConstructionError):
        InceptionBlockSpec("x", "A", 2, (4, 4, 4, 4), (4, 7), (7, 3))


def test_spec_json_round_trip():
    spec = default_model_spec(0.5, dropout=0.25)
    assert ModelSpec.from_json(spec.to_json()) == spec


def test_zero_input_gives_zero_convolution_outputs():
    model = build_model(default_model_spec(), seed=1)
    block = model.features[0]
    captured = []
    hooks = [m.register_forward_hook(lambda _m, _i, out: captured.append(out)) for m in block.modules() if isinstance(m, nn.Conv2d)]
    with torch.no_grad():
        out = block(torch.zeros(2, 2, 32, 360))
    for h in hooks:
        h.remove()
    assert len(captured) == 6
    assert all(torch.all(c == 0) for c in captured)
    assert out.shape == (2, 208, 16, 180)


def test_inception_channel_mismatch():
    block = InceptionBlock(default_model_spec().layers[0])
    with pytest.raises(ShapeError):
        block(torch.zeros(1, 3, 32, 360))


def test_se_preserves_shape_and_sign():
    se = SEBlock(SEBlockSpec("se", 32))
    x = torch.rand(2, 32, 5, 7)
    y = se(x)
    assert y.shape == x.shape
    assert torch.all(y >= 0)
    with pytest.raises(ShapeError):
        se(torch.rand(2, 16, 5, 7))


def test_se_saturated_gates_are_identity():
    se = SEBlock(SEBlockSpec("se", 32))
    with torch.no_grad():
        se.fc2.weight.zero_()
        se.fc2.bias.fill_(50.0)
    x = torch.randn(3, 32, 4, 6)
    torch.testing.assert_close(se(x), x, atol=1e-6, rtol=1e-6)


def test_se_matches_straight_line_computation():
    torch.manual_seed(4)
    se = SEBlock(SEBlockSpec("se", 48, reduction_ratio=16)).double()
    x = torch.randn(2, 48, 3, 5, dtype=torch.float64)
    w1, b1 = se.fc1.weight.detach().numpy(), se.fc1.bias.detach().numpy()
    w2, b2 = se.fc2.weight.detach().numpy(), se.fc2.bias.detach().numpy()
    xn = x.numpy()
    expected = np.empty_like(xn)
    for n in range(xn.shape[0]):
        squeezed = [xn[n, c].mean() for c in range(48)]
        hidden = [max(0.0, sum(w1[j, c] * squeezed[c] for c in range(48)) + b1[j]) for j in range(3)]
        for c in range(48):
            gate = 1.0 / (1.0 + np.exp(-(sum(w2[c, j] * hidden[j] for j in range(3)) + b2[c])))
            expected[n, c] = xn[n, c] * gate
    np.testing.assert_allclose(se(x).detach().numpy(), expected, rtol=1e-10, atol=1e-12)


def test_se_bottleneck_floor():
    assert SEBlockSpec("se", 8).bottleneck == 1


def test_batch_independence(default_model):
    x = torch.randn(4, 2, 32, 360)
    with torch.no_grad():
        batched = default_model(x)
        single = torch.cat([default_model(x[i:i + 1]) for i in range(4)])
    assert batched.shape == (4,)
    torch.testing.assert_close(batched, single, atol=1e-5, rtol=1e-5)


def test_channel_swap_changes_score(default_model):
    x = torch.randn(2, 2, 32, 360)
    x[:, 1] += torch.randn(2, 32, 360)
    with torch.no_grad():
        assert not torch.allclose(default_model(x), default_model(x.flip(1)), atol=1e-6)


def test_forward_contract(default_model):
    score = forward(_normalized_pair(), default_model)
    assert isinstance(score, float)
    assert 1.0 <= score <= 5.0
    with pytest.raises(NormalizationStateError):
        forward(PairedInput(tensor=np.zeros((2, 32, 360), dtype=np.float32)), default_model)
    with pytest.raises(ShapeError):
        forward(_normalized_pair(frames=300), default_model)


def test_build_is_deterministic_and_leaves_global_rng_alone():
    spec = default_model_spec(0.125)
    torch.manual_seed(3)
    expected = torch.rand(1)
    torch.manual_seed(3)
    a = build_model(spec, seed=7)
    assert torch.equal(torch.rand(1), expected)
    b = build_model(spec, seed=7)
    c = build_model(spec, seed=8)
    for (name, pa), pb, pc in zip(a.state_dict().items(), b.state_dict().values(), c.state_dict().values()):
        assert torch.equal(pa, pb), name
    assert any(not torch.equal(pa, pc) for pa, pc in zip(a.parameters(), c.parameters()))


def test_miniature_gradients_match_finite_differences():
    model = build_model(miniature_model_spec(), seed=0).double()
    model.train()
    generator = torch.Generator().manual_seed(0)
    x = torch.randn(3, 2, 8, 16, dtype=torch.float64, generator=generator)
    y = torch.tensor([4.0, 4.5, 5.0], dtype=torch.float64)

    def loss():
        return smooth_l1(model(x), y)

    model.zero_grad()
    loss().backward()
    step = 1e-5
    worst = 0.0
    with torch.no_grad():
        for name, p in model.named_parameters():
            analytic = p.grad.detach().clone().reshape(-1)
            flat = p.data.reshape(-1)
            for i in range(flat.numel()):
                original = flat[i].item()
                flat[i] = original + step
                plus = loss().item()
                flat[i] = original - step
                minus = loss().item()
                flat[i] = original
                numeric = (plus - minus) / (2 * step)
                a = analytic[i].item()
                worst = max(worst, abs(a - numeric) / max(abs(a), abs(numeric), 1e-5))
    assert worst < 1e-4


def test_checkpoint_round_trip(tmp_path):
    model = build_model(default_model_spec(0.125), seed=2)
    stats = NormStats(mean=np.linspace(-80, -20, 32), std=np.linspace(5, 15, 32))
    path = save_checkpoint(tmp_path / "model.pt", model, stats, {"seed": 2, "learning_rate": 4e-5, "batch_size": 32})
    loaded = load_checkpoint(path)
    model.eval()
    x = torch.randn(2, 2, 32, 360)
    with torch.no_grad():
        assert torch.equal(model(x), loaded.model(x))
    assert loaded.spec == model.spec
    np.testing.assert_array_equal(loaded.norm_stats.mean, stats.mean)
    assert loaded.metadata["learning_rate"] == 4e-5
    assert loaded.metadata["batch_size"] == 32


def test_checkpoint_rejects_other_files(tmp_path):
    path = tmp_path / "other.pt"
    torch.save({"weights": torch.zeros(1)}, path)
    with pytest.raises(InsenetError):
        load_checkpoint(path)
    with pytest.raises(InsenetError):
        load_checkpoint(tmp_path / "missing.pt")
