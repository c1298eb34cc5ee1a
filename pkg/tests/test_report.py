"""Batch scoring report tests."""

from dscore.corpus import ingest
from dscore.report import ORIGINAL_TAG, format_table, score_batch, score_record
from dscore.corpus import record_from_dict


def test_score_batch_fixture_corpus(mini_corpus_path):
    report = score_batch(ingest(mini_corpus_path))
    by_id = {r.record_id: r for r in report.records}
    assert set(by_id) == {"fig7", "fig8", "fig9", "fig10"}
    for rid in by_id:
        assert by_id[rid].best_tag == "finetuned", rid
    s = report.summary
    assert s["records"] == 4 and s["candidates"] == 8
    assert s["improved"] == 5 and s["regressed"] == 3
    assert s["unscorable"] == 0


def test_best_tag_defaults_to_original_on_tie():
    rec = record_from_dict({
        "id": "tie",
        "original_decompiled": "int f(int a) { return a; }",
        "candidates": {"same": "int f(int a) { return a; }"},
    })
    rep = score_record(rec)
    # identity candidate scores exactly 0, no strict improvement
    assert rep.results["same"].value == 0.0
    assert rep.best_tag == ORIGINAL_TAG


def test_unscorable_candidate_never_best():
    rec = record_from_dict({
        "id": "u",
        "original_decompiled": "int f(int a) { return a; }",
        "candidates": {"broken": "float f(float x) { return x; }"},
    })
    rep = score_record(rec)
    assert rep.results["broken"].kind == "unscorable"
    assert rep.best_tag == ORIGINAL_TAG


def test_format_table_mentions_every_candidate(mini_corpus_path):
    report = score_batch(ingest(mini_corpus_path))
    text = format_table(report)
    for rid in ("fig7", "fig8", "fig9", "fig10"):
        assert rid in text
    assert "baseline" in text and "finetuned" in text
