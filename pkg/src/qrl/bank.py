"""Counterexample bank: a directory of persisted findings.

Each entry is a pair of files named by the first 16 hex digits of the
sha256 of the canonical QDIMACS text:

* ``<hash>.qdimacs`` — the (shrunk) instance;
* ``<hash>.json`` — metadata: seed, generator params, decide_verdict,
  oracle_verdict, violated_invariants, shrunk_from (hash of the original
  instance when it differs from the shrunk one).

Writes are atomic (temp file + rename) and first-origin-wins: an existing
entry is never overwritten, so reruns keep the earliest metadata and the
bank doubles as an append-only regression corpus.  Nothing here ever
deletes an entry.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

HASH_CHARS = 16


def text_hash(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:HASH_CHARS]


def _atomic_write(path: Path, data: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(data)
    os.replace(tmp, path)


def write_finding(bank_dir: str | Path, text: str, metadata: dict) -> str:
    """Persist one finding; returns its hash.  Existing entries are kept."""
    bank = Path(bank_dir)
    bank.mkdir(parents=True, exist_ok=True)
    h = text_hash(text)
    qdimacs = bank / f"{h}.qdimacs"
    meta = bank / f"{h}.json"
    if not qdimacs.exists():
        _atomic_write(qdimacs, text)
        _atomic_write(meta, json.dumps(metadata, indent=2, sort_keys=True) + "\n")
    return h


def load_entry(bank_dir: str | Path, h: str) -> tuple[str, dict]:
    bank = Path(bank_dir)
    text = (bank / f"{h}.qdimacs").read_text()
    metadata = json.loads((bank / f"{h}.json").read_text())
    return text, metadata


def iter_entries(bank_dir: str | Path) -> list[str]:
    """Hashes of all entries, sorted."""
    bank = Path(bank_dir)
    if not bank.is_dir():
        return []
    return sorted(p.stem for p in bank.glob("*.qdimacs"))
