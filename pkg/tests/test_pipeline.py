import json
from pathlib import Path

import pytest

from mrmbench.embed import EmbedConfig
from mrmbench.errors import StageError
from mrmbench.linkpred import LPConfig
from mrmbench.pipeline import PipelineConfig, config_hash, run_pipeline
from mrmbench.rdfio.wd50k import serialize_wd50k_row
from mrmbench.synth import community_hyperfacts
from mrmbench.walks import WalkConfig

from conftest import STORY_REF_DOC


@pytest.fixture(scope="module")
def facts_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "facts.csv"
    facts = community_hyperfacts(n_communities=3, community_size=6, n_facts=50, seed=5)
    path.write_text("".join(serialize_wd50k_row(f) + "\n" for f in facts), encoding="utf-8")
    return path


def tiny_config(facts_file, out_dir, mrms=("REF", "SGP", "RDR")) -> PipelineConfig:
    return PipelineConfig(
        input_path=str(facts_file),
        input_kind="wd50k-csv",
        mrms=tuple(mrms),
        out_dir=str(out_dir),
        walk=WalkConfig(n=4, depth=3, beta=0.3, delta=0.3, seed=2),
        embed=EmbedConfig(dim=16, window=3, epochs=2, seed=2),
        lp=LPConfig(epochs=8, lr=0.05, seed=2),
    )


def test_pipeline_reports_for_every_model(facts_file, tmp_path):
    cfg = tiny_config(facts_file, tmp_path / "out")
    reports = run_pipeline(cfg)
    assert set(reports) == {"REF", "SGP", "RDR"}
    for report in reports.values():
        assert 0 < report.filtered.mrr <= 1
        assert 0 < report.raw.mrr <= 1


def test_pipeline_writes_manifest_and_artifacts(facts_file, tmp_path):
    out = tmp_path / "out"
    cfg = tiny_config(facts_file, out, mrms=("RDR",))
    run_pipeline(cfg)
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config_hash"] == config_hash(cfg)
    assert set(manifest["seeds"]) == {"split", "walk", "embed", "lp"}
    artifacts = manifest["artifacts"]["RDR"]
    expected_kinds = {
        "graph",
        "split-train",
        "split-valid",
        "split-test",
        "corpus",
        "embeddings",
        "model",
        "metrics",
    }
    assert set(artifacts) == expected_kinds
    for path in artifacts.values():
        assert Path(path).exists()
    metrics = json.loads(Path(artifacts["metrics"]).read_text())
    assert metrics["config_hash"] == manifest["config_hash"]


def test_pipeline_deterministic_metrics(facts_file, tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    run_pipeline(tiny_config(facts_file, out1, mrms=("REF",)))
    run_pipeline(tiny_config(facts_file, out2, mrms=("REF",)))
    assert (out1 / "metrics-REF.json").read_bytes() == (out2 / "metrics-REF.json").read_bytes()


def test_pipeline_missing_input_aborts_at_ingest(tmp_path):
    cfg = tiny_config(tmp_path / "missing.csv", tmp_path / "out", mrms=("REF",))
    with pytest.raises(StageError) as err:
        run_pipeline(cfg)
    assert err.value.stage == "ingest"
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert "ingest" in manifest["errors"]


def test_pipeline_kgrc_turtle_input(tmp_path):
    source = tmp_path / "story.ttl"
    source.write_text(STORY_REF_DOC, encoding="utf-8")
    cfg = PipelineConfig(
        input_path=str(source),
        input_kind="kgrc-turtle",
        mrms=("SGP", "RDR"),
        out_dir=str(tmp_path / "out"),
        emit_type=True,
        ratios=(0.5, 0.0, 0.5),
        walk=WalkConfig(n=3, depth=3, beta=0.5, delta=0.5, seed=1),
        embed=EmbedConfig(dim=8, window=2, epochs=1, seed=1),
        lp=LPConfig(epochs=3, lr=0.05, seed=1),
    )
    reports = run_pipeline(cfg)
    assert set(reports) == {"SGP", "RDR"}
