"""Correspondence containers: per-source-vertex targets with validity."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@dataclass
class CorrespondenceSet:
    """Per source-vertex target on another surface.

    Targets are either vertex indices on the target mesh (body -> proxy) or
    UV points on the proxy atlas (clothing -> proxy). Invalid entries carry
    no target. ``energy`` holds the last noise-filter energy per vertex.
    """

    kind: str                        # "vertex" | "uv"
    valid: np.ndarray                # (N,) bool
    target_vertex: np.ndarray | None = None   # (N,) int64, -1 where invalid
    target_uv: np.ndarray | None = None       # (N, 2) float64
    score: np.ndarray | None = None           # (N,) cosine similarity
    energy: np.ndarray | None = None          # (N,) filter energy E_i
    low_support: np.ndarray | None = None     # (N,) bool
    source_vertex_hint: np.ndarray | None = None  # synthetic ground truth only

    @staticmethod
    def from_vertex_indices(indices, valid, score=None) -> "CorrespondenceSet":
        indices = np.asarray(indices, dtype=np.int64)
        valid = np.asarray(valid, dtype=bool)
        indices = np.where(valid, indices, -1)
        return CorrespondenceSet(kind="vertex", valid=valid,
                                 target_vertex=indices,
                                 score=None if score is None else
                                 np.asarray(score, dtype=np.float64))

    @staticmethod
    def from_uv(uv, valid) -> "CorrespondenceSet":
        uv = np.asarray(uv, dtype=np.float64).reshape(-1, 2)
        valid = np.asarray(valid, dtype=bool)
        return CorrespondenceSet(kind="uv", valid=valid, target_uv=uv)

    def __len__(self) -> int:
        return len(self.valid)

    @property
    def n_valid(self) -> int:
        return int(self.valid.sum())

    def copy(self) -> "CorrespondenceSet":
        cp = lambda a: None if a is None else a.copy()
        return CorrespondenceSet(
            kind=self.kind, valid=self.valid.copy(),
            target_vertex=cp(self.target_vertex), target_uv=cp(self.target_uv),
            score=cp(self.score), energy=cp(self.energy),
            low_support=cp(self.low_support),
            source_vertex_hint=cp(self.source_vertex_hint))

    def target_positions(self, target_mesh) -> np.ndarray:
        """3-D target positions on the given mesh (NaN where invalid)."""
        out = np.full((len(self), 3), np.nan)
        if self.kind == "vertex":
            idx = self.target_vertex[self.valid]
            out[self.valid] = target_mesh.vertices[idx]
        else:
            from ..geom import uv_to_surface_batch

            tri, bary, _ = uv_to_surface_batch(target_mesh,
                                               self.target_uv[self.valid])
            pos = np.einsum("ik,ikj->ij", bary,
                            target_mesh.vertices[target_mesh.triangles[tri]])
            out[self.valid] = pos
        return out

    def target_vertices_on(self, target_mesh) -> np.ndarray:
        """Vertex-valued targets (-1 where invalid).

        UV targets resolve to the dominant barycentric corner of their
        UV triangle.
        """
        out = np.full(len(self), -1, dtype=np.int64)
        if self.kind == "vertex":
            out[self.valid] = self.target_vertex[self.valid]
        else:
            from ..geom import uv_to_surface_batch

            tri, bary, _ = uv_to_surface_batch(target_mesh,
                                               self.target_uv[self.valid])
            corner = np.argmax(bary, axis=1)
            out[self.valid] = target_mesh.triangles[tri, corner]
        return out


def save_corr(corr: CorrespondenceSet, path) -> None:
    """Text format, one line per source vertex: ``valid u v`` or ``invalid``."""
    if corr.kind != "uv":
        raise ValueError("the .corr text format stores UV correspondences")
    with open(path, "w") as fh:
        for ok, uv in zip(corr.valid, corr.target_uv):
            if ok:
                fh.write(f"valid {uv[0]:.9g} {uv[1]:.9g}\n")
            else:
                fh.write("invalid\n")


def load_corr(path, expected_vertices: int | None = None) -> CorrespondenceSet:
    uv, valid = [], []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "valid":
                if len(parts) != 3:
                    raise ValueError(f"{Path(path).name}:{lineno}: "
                                     "expected 'valid u v'")
                uv.append((float(parts[1]), float(parts[2])))
                valid.append(True)
            elif parts[0] == "invalid":
                uv.append((0.0, 0.0))
                valid.append(False)
            else:
                raise ValueError(f"{Path(path).name}:{lineno}: "
                                 f"unknown tag {parts[0]!r}")
    if expected_vertices is not None and len(valid) != expected_vertices:
        raise ValueError(
            f"{Path(path).name}: {len(valid)} entries but the garment has "
            f"{expected_vertices} vertices")
    return CorrespondenceSet.from_uv(np.asarray(uv, dtype=np.float64),
                                     np.asarray(valid, dtype=bool))
