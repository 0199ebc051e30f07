"""
fingerprint.py
SHA-256 fingerprints of datasets and files, recorded in model provenance.
Created 17/10/2026
"""

import json
from hashlib import sha256
from pathlib import Path
from typing import Iterable


def fingerprint_documents(documents: Iterable[dict]) -> str:
    """
    Fingerprint a set of JSON documents.

    Documents are serialized canonically (sorted keys, no whitespace) and
    hashed in sorted order, so the result does not depend on input order.

    Args:
        documents (Iterable[dict]): The documents.

    Returns:
        str: The hex digest.
    """
    digest = sha256()
    for line in sorted(json.dumps(d, sort_keys=True, separators=(",", ":")) for d in documents):
        digest.update(line.encode("utf-8"))
        digest.update(b"\n")
    return digest.hexdigest()


def fingerprint_file(path: Path) -> str:
    return sha256(Path(path).read_bytes()).hexdigest()
