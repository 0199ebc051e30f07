"""
store.py
Directory-backed JSON document store for job artifacts.
Created 17/10/2026
"""

import json
from pathlib import Path

from chromacst.errors import PathError


def dump_json(path: Path, data) -> None:
    """Write JSON with sorted keys, fixed indent and a trailing newline, so re-runs are byte-identical."""
    with open(path, "w", newline="\n") as file:
        json.dump(data, file, indent=2, sort_keys=True)
        file.write("\n")


def load_json(path: Path, hint: str = ""):
    path = Path(path)
    if not path.exists():
        raise PathError(path, hint)
    with open(path, "r") as file:
        return json.load(file)


class ArtifactStore():
    """
    Named collections of JSON documents under a root directory. Each
    collection is a subdirectory and each document a <key>.json file.
    """

    def __init__(self, root: Path) -> None:
        self.root = Path(root)

    def _collection(self, collection: str, create: bool = False) -> Path:
        path = self.root / collection
        if create:
            path.mkdir(parents=True, exist_ok=True)
        return path

    def read(self, collection: str, key: str) -> dict:
        return load_json(self._collection(collection) / f"{key}.json")

    def read_all(self, collection: str) -> list[dict]:
        """Every document of a collection, in key order."""
        return [self.read(collection, key) for key in self.keys(collection)]

    def keys(self, collection: str) -> list[str]:
        path = self._collection(collection)
        if not path.is_dir():
            return []
        return sorted(p.stem for p in path.glob("*.json"))

    def write(self, collection: str, key: str, document: dict) -> None:
        dump_json(self._collection(collection, create=True) / f"{key}.json", document)

    def count(self, collection: str) -> int:
        return len(self.keys(collection))

    def erase(self, collection: str, key: str) -> None:
        (self._collection(collection) / f"{key}.json").unlink(missing_ok=True)
