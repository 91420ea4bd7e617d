"""OBJ and PLY mesh readers/writers. Vertex order is always preserved."""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .mesh import TriMesh


class MeshFormatError(ValueError):
    """Raised when a mesh file cannot be parsed or fails validation."""


def load_mesh(path, normalize: bool = True) -> TriMesh:
    """Load an OBJ or PLY file into a TriMesh, fan-splitting polygons.

    With ``normalize=True`` (default) the result lives in the unit frame
    (longest bbox axis 1, centered at the origin) and carries the inverse
    transform. Triangles with repeated vertex indices are dropped.
    """
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".obj":
        vertices, faces, uvs = _read_obj(path)
    elif suffix == ".ply":
        vertices, faces, uvs = _read_ply(path)
    else:
        raise MeshFormatError(f"unsupported mesh format: {path.name}")

    if len(vertices) == 0:
        raise MeshFormatError(f"{path.name}: no vertices")
    triangles = _fan_split(faces, len(vertices), path.name)
    if len(triangles) == 0:
        raise MeshFormatError(f"{path.name}: no triangles")

    mesh = TriMesh(vertices, triangles, uvs=uvs)
    return mesh.normalized() if normalize else mesh


def save_mesh(mesh: TriMesh, path, original_units: bool = True) -> None:
    """Write a TriMesh as OBJ or binary PLY (chosen by extension)."""
    path = Path(path)
    vertices = mesh.denormalized_vertices() if original_units else mesh.vertices
    suffix = path.suffix.lower()
    if suffix == ".obj":
        _write_obj(path, vertices, mesh.triangles, mesh.uvs)
    elif suffix == ".ply":
        _write_ply(path, vertices, mesh.triangles)
    else:
        raise MeshFormatError(f"unsupported mesh format: {path.name}")


def _fan_split(faces: list[list[int]], n_vertices: int, name: str) -> np.ndarray:
    triangles = []
    for face in faces:
        if len(face) < 3:
            raise MeshFormatError(f"{name}: face with fewer than 3 vertices")
        for idx in face:
            if idx < 0 or idx >= n_vertices:
                raise MeshFormatError(
                    f"{name}: vertex index {idx} out of range (0..{n_vertices - 1})")
        for k in range(1, len(face) - 1):
            tri = (face[0], face[k], face[k + 1])
            if tri[0] == tri[1] or tri[1] == tri[2] or tri[0] == tri[2]:
                continue  # degenerate: dropped
            triangles.append(tri)
    return np.asarray(triangles, dtype=np.int64).reshape(-1, 3)


# -- OBJ ---------------------------------------------------------------------

def _read_obj(path: Path):
    vertices: list[tuple] = []
    texcoords: list[tuple] = []
    faces: list[list[int]] = []
    face_uvs: list[list[int]] = []
    with open(path, "r", errors="replace") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            tag = parts[0]
            try:
                if tag == "v":
                    vertices.append(tuple(float(x) for x in parts[1:4]))
                elif tag == "vt":
                    texcoords.append(tuple(float(x) for x in parts[1:3]))
                elif tag == "f":
                    vidx, tidx = [], []
                    for token in parts[1:]:
                        fields = token.split("/")
                        vi = int(fields[0])
                        vidx.append(vi - 1 if vi > 0 else len(vertices) + vi)
                        if len(fields) > 1 and fields[1]:
                            ti = int(fields[1])
                            tidx.append(ti - 1 if ti > 0 else len(texcoords) + ti)
                    faces.append(vidx)
                    face_uvs.append(tidx if len(tidx) == len(vidx) else [])
            except (ValueError, IndexError) as exc:
                raise MeshFormatError(f"{path.name}:{lineno}: {exc}") from exc

    verts = np.asarray(vertices, dtype=np.float64).reshape(-1, 3)
    uvs = None
    if texcoords and any(face_uvs):
        # Per-vertex UVs: first vt assignment wins if corners disagree.
        uvs = np.zeros((len(verts), 2))
        seen = np.zeros(len(verts), dtype=bool)
        tc = np.asarray(texcoords, dtype=np.float64).reshape(-1, 2)
        for face, fuv in zip(faces, face_uvs):
            for vi, ti in zip(face, fuv):
                if not (0 <= vi < len(verts)) or not (0 <= ti < len(tc)):
                    continue
                if not seen[vi]:
                    uvs[vi] = tc[ti]
                    seen[vi] = True
        if not seen.all():
            uvs = None  # partial UV coverage: treat as absent
    return verts, faces, uvs


def _write_obj(path: Path, vertices, triangles, uvs) -> None:
    with open(path, "w") as fh:
        for v in vertices:
            fh.write(f"v {v[0]:.9g} {v[1]:.9g} {v[2]:.9g}\n")
        if uvs is not None:
            for uv in uvs:
                fh.write(f"vt {uv[0]:.9g} {uv[1]:.9g}\n")
            for t in triangles:
                fh.write(f"f {t[0]+1}/{t[0]+1} {t[1]+1}/{t[1]+1} {t[2]+1}/{t[2]+1}\n")
        else:
            for t in triangles:
                fh.write(f"f {t[0]+1} {t[1]+1} {t[2]+1}\n")


# -- PLY ---------------------------------------------------------------------

_PLY_TYPES = {
    "char": "b", "int8": "b", "uchar": "B", "uint8": "B",
    "short": "h", "int16": "h", "ushort": "H", "uint16": "H",
    "int": "i", "int32": "i", "uint": "I", "uint32": "I",
    "float": "f", "float32": "f", "double": "d", "float64": "d",
}


def _read_ply(path: Path):
    with open(path, "rb") as fh:
        if fh.readline().strip() != b"ply":
            raise MeshFormatError(f"{path.name}: not a PLY file")
        fmt = None
        elements = []  # (name, count, [(type, name)])
        while True:
            line = fh.readline()
            if not line:
                raise MeshFormatError(f"{path.name}: unexpected EOF in header")
            parts = line.decode("ascii", errors="replace").split()
            if not parts:
                continue
            if parts[0] == "format":
                fmt = parts[1]
            elif parts[0] == "element":
                elements.append((parts[1], int(parts[2]), []))
            elif parts[0] == "property":
                if parts[1] == "list":
                    elements[-1][2].append(("list", parts[2], parts[3], parts[4]))
                else:
                    elements[-1][2].append(("scalar", parts[1], parts[2]))
            elif parts[0] == "end_header":
                break

        if fmt not in ("ascii", "binary_little_endian"):
            raise MeshFormatError(f"{path.name}: unsupported PLY format {fmt}")

        vertices, faces = [], []
        if fmt == "ascii":
            tokens = fh.read().decode("ascii", errors="replace").split()
            pos = 0
            for name, count, props in elements:
                for _ in range(count):
                    values = {}
                    for prop in props:
                        if prop[0] == "list":
                            n = int(float(tokens[pos])); pos += 1
                            values[prop[3]] = [int(float(tokens[pos + k]))
                                               for k in range(n)]
                            pos += n
                        else:
                            values[prop[2]] = float(tokens[pos]); pos += 1
                    _collect_ply_row(name, values, vertices, faces)
        else:
            for name, count, props in elements:
                for _ in range(count):
                    values = {}
                    for prop in props:
                        if prop[0] == "list":
                            cfmt = _PLY_TYPES[prop[1]]
                            n = struct.unpack("<" + cfmt,
                                              fh.read(struct.calcsize(cfmt)))[0]
                            ifmt = _PLY_TYPES[prop[2]]
                            size = struct.calcsize(ifmt)
                            values[prop[3]] = list(
                                struct.unpack(f"<{n}{ifmt}", fh.read(n * size)))
                        else:
                            sfmt = _PLY_TYPES[prop[1]]
                            values[prop[2]] = struct.unpack(
                                "<" + sfmt, fh.read(struct.calcsize(sfmt)))[0]
                    _collect_ply_row(name, values, vertices, faces)

    verts = np.asarray(vertices, dtype=np.float64).reshape(-1, 3)
    return verts, faces, None


def _collect_ply_row(element: str, values: dict, vertices: list, faces: list):
    if element == "vertex":
        try:
            vertices.append((values["x"], values["y"], values["z"]))
        except KeyError as exc:
            raise MeshFormatError(f"PLY vertex missing coordinate {exc}") from exc
    elif element == "face":
        for key in ("vertex_indices", "vertex_index"):
            if key in values:
                faces.append([int(i) for i in values[key]])
                return


def _write_ply(path: Path, vertices, triangles) -> None:
    header = (
        "ply\nformat binary_little_endian 1.0\n"
        f"element vertex {len(vertices)}\n"
        "property float x\nproperty float y\nproperty float z\n"
        f"element face {len(triangles)}\n"
        "property list uchar int vertex_indices\nend_header\n"
    )
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(np.asarray(vertices, dtype="<f4").tobytes())
        for t in triangles:
            fh.write(struct.pack("<B3i", 3, int(t[0]), int(t[1]), int(t[2])))
