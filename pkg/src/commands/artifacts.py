"""
Deterministic artifact emission.

Every file a subcommand writes goes through ArtifactWriter, which records
it for manifest.json. JSON is indented with sorted-key dicts, CSV uses LF
line endings, and nothing written carries a timestamp, so identical
inputs and seeds give byte-identical output directories.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Sequence

import pandas as pd
from pydantic import BaseModel

from src.models.reports import ArtifactEntry, Manifest
from src.traces.catalogs import PopulationRaster, write_raster
from src.traces.store import TraceSet, write_traceset
from src.utils.digests import file_sha256
from src.utils.logger import get_logger

logger = get_logger(__name__)

MANIFEST_NAME = "manifest.json"


class ArtifactWriter:
    """Write artifacts under one output directory and keep the manifest list."""

    def __init__(self, out: Path | str) -> None:
        self.out = Path(out)
        self.out.mkdir(parents=True, exist_ok=True)
        self._paths: List[Path] = []

    def path(self, name: str) -> Path:
        target = self.out / name
        target.parent.mkdir(parents=True, exist_ok=True)
        return target

    def _record(self, path: Path) -> Path:
        if path not in self._paths:
            self._paths.append(path)
        logger.debug("artifact_written", path=str(path))
        return path

    def json(self, name: str, payload: BaseModel | Dict[str, Any] | List[Any]) -> Path:
        path = self.path(name)
        if isinstance(payload, BaseModel):
            text = payload.model_dump_json(indent=2)
        else:
            text = json.dumps(payload, indent=2, sort_keys=True, default=str)
        path.write_text(text + "\n", encoding="utf-8")
        return self._record(path)

    def csv(
        self, name: str, rows: pd.DataFrame | Sequence[Dict[str, Any]], columns: Sequence[str] = ()
    ) -> Path:
        frame = rows if isinstance(rows, pd.DataFrame) else pd.DataFrame(list(rows))
        if columns:
            frame = frame.reindex(columns=list(columns))
        path = self.path(name)
        frame.to_csv(path, index=False, lineterminator="\n")
        return self._record(path)

    def traces(self, name: str, ts: TraceSet) -> Path:
        return self._record(write_traceset(ts, self.path(name)))

    def raster(self, name: str, raster: PopulationRaster) -> List[Path]:
        path = write_raster(raster, self.path(name))
        return [self._record(path), self._record(path.with_suffix(".json"))]

    def finalize(self, command: str) -> Manifest:
        """Write manifest.json listing every artifact, sorted by relative path."""
        entries = sorted(
            (
                ArtifactEntry(path=p.relative_to(self.out).as_posix(), sha256=file_sha256(p))
                for p in self._paths
            ),
            key=lambda e: e.path,
        )
        manifest = Manifest(command=command, artifacts=entries)
        (self.out / MANIFEST_NAME).write_text(
            manifest.model_dump_json(indent=2) + "\n", encoding="utf-8"
        )
        logger.info("manifest_written", command=command, artifacts=len(entries))
        return manifest
