"""Golden corpus: canonical output of each document is frozen byte for byte.

Regenerating an .out file is a deliberate act; any drift in printing,
parsing, or normalization shows up here first.
"""

from pathlib import Path

import pytest

from mvcurl.dsl import document_from_json, document_to_json, parse, print_canonical

GOLDEN_DIR = Path(__file__).parent / "golden"
SOURCES = sorted(GOLDEN_DIR.glob("*.mv"))


def test_corpus_is_large_enough() -> None:
    assert len(SOURCES) >= 15


@pytest.mark.parametrize("source", SOURCES, ids=lambda p: p.stem)
def test_canonical_output_matches_frozen(source: Path) -> None:
    doc = parse(source.read_text())
    expected = source.with_suffix(".out").read_text()
    assert print_canonical(doc) == expected


@pytest.mark.parametrize("source", SOURCES, ids=lambda p: p.stem)
def test_canonical_output_round_trips(source: Path) -> None:
    doc = parse(source.read_text())
    canonical = print_canonical(doc)
    reparsed = parse(canonical)
    assert reparsed == doc
    # printing is idempotent on its own output
    assert print_canonical(reparsed) == canonical


@pytest.mark.parametrize("source", SOURCES, ids=lambda p: p.stem)
def test_json_round_trips(source: Path) -> None:
    doc = parse(source.read_text())
    payload = document_to_json(doc)
    assert document_from_json(payload) == doc
