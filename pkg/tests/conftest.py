import json
import pathlib

import pytest

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def fixture_src(name: str) -> str:
    return (FIXTURES / f"{name}.c").read_text()


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def mini_corpus_path(tmp_path_factory):
    """JSONL corpus built from the paired fixtures."""
    path = tmp_path_factory.mktemp("corpus") / "mini.jsonl"
    with open(path, "w") as fh:
        for fig in ("fig7", "fig8", "fig9", "fig10"):
            fh.write(json.dumps({
                "id": fig,
                "project": "demo",
                "original_decompiled": fixture_src(f"{fig}_original"),
                "candidates": {
                    "baseline": fixture_src(f"{fig}_baseline"),
                    "finetuned": fixture_src(f"{fig}_finetuned"),
                },
            }) + "\n")
    return path
