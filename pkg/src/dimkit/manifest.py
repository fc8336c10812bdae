"""Run manifests written next to every artifact a command produces."""

from __future__ import annotations

import datetime as _dt
import hashlib
import json
import os
import time
from dataclasses import asdict, dataclass, field

from . import __version__


def sha256_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    """Command line, seeds, inputs, outputs, version, timing and output digests."""

    command: list
    seeds: list = field(default_factory=list)
    inputs: list = field(default_factory=list)
    outputs: list = field(default_factory=list)
    version: str = __version__
    started: str = ""
    wall_time_s: float = 0.0
    digests: dict = field(default_factory=dict)
    threads: int = 1
    _t0: float = field(default=0.0, repr=False)

    @classmethod
    def start(cls, command, seeds=(), inputs=(), threads: int = 1) -> "RunManifest":
        m = cls(list(command), list(seeds), [str(p) for p in inputs], threads=threads)
        m.started = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
        m._t0 = time.perf_counter()
        return m

    def add_output(self, path: str) -> None:
        self.outputs.append(str(path))

    def finish(self) -> None:
        self.wall_time_s = round(time.perf_counter() - self._t0, 6)
        self.digests = {p: sha256_file(p) for p in self.outputs if os.path.isfile(p)}

    def to_json(self) -> dict:
        doc = asdict(self)
        doc.pop("_t0")
        return doc

    def write(self, path: str) -> str:
        self.finish()
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(self.to_json(), handle, indent=2, sort_keys=True)
            handle.write("\n")
        return path


def manifest_path(output: str) -> str:
    """``report.csv`` gets ``report.csv.manifest.json`` beside it."""
    return f"{output}.manifest.json"
