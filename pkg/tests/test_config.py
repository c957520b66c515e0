import json

import pytest
from hypothesis import given, strategies as st

from ginibre.config import McConfig, RunConfig, merge
from ginibre.errors import UsageError
from ginibre.quadrature import QuadratureConfig

psi_texts = st.one_of(
    st.just("one"),
    st.just("modsq"),
    st.integers(0, 8).map(lambda k: f"pow:{k}"),
    st.floats(-5, 5, allow_nan=False).map(lambda s: f"shift:{s!r}"),
    st.lists(st.floats(-3, 3, allow_nan=False), min_size=1, max_size=4).map(lambda c: "poly:" + ",".join(map(repr, c))),
)

quad_configs = st.builds(
    lambda r, k1, k2, k3, tol, hx, hy: QuadratureConfig(
        real_cutoff=r, nodes_1d=16 * k1, nodes_2d=(16 * k2, 16 * k3), target_rel_tol=tol, halfplane_cutoff=(hx, hy)
    ),
    st.floats(8, 30),
    st.integers(4, 64),
    st.integers(4, 32),
    st.integers(4, 32),
    st.floats(1e-14, 1e-3),
    st.floats(1, 30),
    st.floats(1, 30),
)

run_configs = st.builds(
    RunConfig,
    ensemble=st.sampled_from(["ginoe", "ginue"]),
    n=st.integers(1, 12),
    psi=psi_texts,
    method=st.sampled_from(["auto", "pfaffian", "skew_orth", "parity_det", "ginue_det", "ginue_orth", "monte_carlo"]),
    quadrature=quad_configs,
    mc=st.builds(McConfig, samples=st.integers(1, 10**7), seed=st.integers(0, 2**63), threshold=st.floats(1e-14, 1e-2)),
    output_format=st.sampled_from(["json", "csv"]),
)


@given(run_configs)
def test_round_trip_is_lossless(cfg):
    assert RunConfig.from_json(cfg.to_json()) == cfg
    assert RunConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg


def test_method_aliases_and_resolution():
    assert RunConfig(method="mc").method == "monte_carlo"
    assert RunConfig(ensemble="ginue", method="det").method == "ginue_det"
    assert RunConfig(ensemble="ginue").resolved().method == "ginue_det"
    assert RunConfig().resolved().method == "pfaffian"


@pytest.mark.parametrize(
    "payload",
    [
        {"ensemble": "gue"},
        {"n": 0},
        {"psi": "exp"},
        {"method": "magic"},
        {"output_format": "xml"},
        {"colour": "red"},
        {"mc": {"samples": 0}},
        {"mc": {"seeds": 1}},
        {"quadrature": {"nodes_1d": 10}},
    ],
)
def test_invalid_configs(payload):
    with pytest.raises(UsageError):
        RunConfig.from_dict(payload)


def test_bad_json():
    with pytest.raises(UsageError):
        RunConfig.from_json("{not json")
    with pytest.raises(UsageError):
        RunConfig.from_json("[1, 2]")


def test_merge_precedence(tmp_path):
    path = tmp_path / "cfg.json"
    base = RunConfig(n=5, psi="pow:2", mc=McConfig(samples=10))
    path.write_text(base.to_json())
    loaded = RunConfig.load(path)
    merged = merge(loaded, {"n": 3, "psi": None, "mc.seed": 9, "quadrature.nodes_1d": 256})
    assert merged.n == 3 and merged.psi == "pow:2"
    assert merged.mc.samples == 10 and merged.mc.seed == 9
    assert merged.quadrature.nodes_1d == 256
    with pytest.raises(UsageError):
        merge(base, {"quadrature.bogus": 1})
