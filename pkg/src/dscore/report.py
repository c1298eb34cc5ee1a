"""Batch scoring over a corpus and best-of reporting."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .score import PASS_KIND, UNSCORABLE, DScoreResult, ScoreConfig, score

ORIGINAL_TAG = "original"


@dataclass
class RecordReport:
    record_id: str
    results: dict              # tag -> DScoreResult
    best_tag: str

    def to_json(self):
        return {
            "id": self.record_id,
            "best_tag": self.best_tag,
            "results": {tag: r.to_json() for tag, r in self.results.items()},
        }


@dataclass
class ScoreReport:
    records: list
    summary: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "summary": self.summary,
            "records": [r.to_json() for r in self.records],
        }


def _best_tag(results) -> str:
    """Highest score wins; ties fall back toward the original, then
    lexicographically, so a rewrite is only preferred when strictly better."""
    best = ORIGINAL_TAG
    best_value = 0.0           # the original scores 0 against itself by identity
    for tag in sorted(results):
        result = results[tag]
        if result.kind == UNSCORABLE or result.value is None:
            continue
        if result.value > best_value:
            best = tag
            best_value = result.value
    return best


def score_record(record, cfg: ScoreConfig = None) -> RecordReport:
    results = {}
    for tag in sorted(record.candidates):
        results[tag] = score(record.original_decompiled, record.candidates[tag], cfg)
    return RecordReport(record.id, results, _best_tag(results))


def score_batch(corpus, cfg: ScoreConfig = None, jobs: int = 1) -> ScoreReport:
    records = list(corpus)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(lambda r: score_record(r, cfg), records))
    else:
        reports = [score_record(r, cfg) for r in records]

    improved = regressed = unchanged = unscorable = total = 0
    delta_sum = 0.0
    delta_n = 0
    for report in reports:
        for result in report.results.values():
            total += 1
            if result.kind == UNSCORABLE:
                unscorable += 1
                continue
            delta_sum += result.value
            delta_n += 1
            if result.value > 0:
                improved += 1
            elif result.value < 0:
                regressed += 1
            else:
                unchanged += 1
    summary = {
        "records": len(reports),
        "candidates": total,
        "improved": improved,
        "regressed": regressed,
        "unchanged": unchanged,
        "unscorable": unscorable,
        "mean_score_delta": (delta_sum / delta_n) if delta_n else 0.0,
    }
    return ScoreReport(reports, summary)


def format_table(report: ScoreReport) -> str:
    lines = []
    header = f"{'id':24s} {'tag':12s} {'kind':14s} {'value':>10s}"
    lines.append(header)
    lines.append("-" * len(header))
    for rec in report.records:
        for tag, result in sorted(rec.results.items()):
            value = "-" if result.value is None else f"{result.value:+.4f}"
            marker = " *" if tag == rec.best_tag else ""
            lines.append(f"{rec.record_id:24s} {tag:12s} {result.kind:14s} "
                         f"{value:>10s}{marker}")
    s = report.summary
    lines.append("")
    lines.append(f"records={s['records']} candidates={s['candidates']} "
                 f"improved={s['improved']} regressed={s['regressed']} "
                 f"unchanged={s['unchanged']} unscorable={s['unscorable']} "
                 f"mean_delta={s['mean_score_delta']:+.4f}")
    return "\n".join(lines)
