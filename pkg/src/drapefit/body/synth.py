"""Procedural humanoid test body and synthetic offset-surface garments.

The body is a tube-tree humanoid (trunk+head tube, two arms, two legs,
stitched into one connected component) with exact skinning weights, a
chart-per-part UV atlas, and four synthetic shape directions. Everything
is deterministic from the proportions seed and rounded to float32 so the
model archive round-trips bit-exactly.
"""
from __future__ import annotations

import numpy as np

from ..geom import TriMesh
from .model import BodyModel, BodyParams, lbs_forward

NSEG = 16  # radial segments per tube ring

JOINT_NAMES = [
    "pelvis", "spine", "chest", "head",
    "l_shoulder", "l_elbow", "l_wrist",
    "r_shoulder", "r_elbow", "r_wrist",
    "l_hip", "l_knee", "l_ankle",
    "r_hip", "r_knee", "r_ankle",
]
PARENTS = np.array([-1, 0, 1, 2, 2, 4, 5, 2, 7, 8, 0, 10, 11, 0, 13, 14])

PART_NAMES = ["trunk", "head", "l_arm", "r_arm", "l_leg", "r_leg"]


class _Builder:
    def __init__(self, nseg: int = NSEG):
        self.nseg = nseg
        self.verts: list[np.ndarray] = []
        self.uvs: list[tuple] = []
        self.tris: list[tuple] = []
        self.charted: list[bool] = []
        self.part: list[int] = []
        self.radial: list[np.ndarray] = []   # unit dir away from tube axis
        self.rings: list[dict] = []          # ring metadata for weights/joints

    def add_ring(self, center, e1, e2, rx, rz, part, chart, vband):
        u0, v0, u1, v1 = chart
        start = len(self.verts)
        nseg = self.nseg
        for k in range(nseg + 1):  # last column duplicates the first: UV seam
            phi = 2.0 * np.pi * (k % nseg) / nseg
            offset = rx * np.cos(phi) * e1 + rz * np.sin(phi) * e2
            self.verts.append(center + offset)
            n = np.linalg.norm(offset)
            self.radial.append(offset / n if n > 0 else np.zeros(3))
            self.uvs.append((u0 + (u1 - u0) * k / nseg, vband))
            self.part.append(part)
        self.rings.append({"start": start, "center": np.asarray(center, float),
                           "part": part})
        return start

    def bridge_rings(self, ring_a, ring_b, chart_flag=True):
        for k in range(self.nseg):
            a0, a1 = ring_a + k, ring_a + k + 1
            b0, b1 = ring_b + k, ring_b + k + 1
            self._tri(a0, b0, b1, chart_flag)
            self._tri(a0, b1, a1, chart_flag)

    def cap(self, ring, center, uv, part, outward=True):
        c = len(self.verts)
        self.verts.append(np.asarray(center, float))
        self.radial.append(np.zeros(3))
        self.uvs.append(uv)
        self.part.append(part)
        for k in range(self.nseg):
            if outward:
                self._tri(ring + k, ring + k + 1, c, True)
            else:
                self._tri(ring + k + 1, ring + k, c, True)
        return c

    def _tri(self, a, b, c, chart_flag):
        if a == b or b == c or a == c:
            return
        self.tris.append((a, b, c))
        self.charted.append(chart_flag)

    def stitch(self, ring, target_indices):
        """Collar of uncharted triangles joining a tube ring to host vertices."""
        verts = np.asarray(self.verts)
        ring_ids = list(range(ring, ring + self.nseg + 1))
        nn = []
        for rid in ring_ids:
            d = np.linalg.norm(verts[target_indices] - verts[rid], axis=1)
            nn.append(int(target_indices[int(np.argmin(d))]))
        for k in range(self.nseg):
            a0, a1 = ring_ids[k], ring_ids[k + 1]
            t0, t1 = nn[k], nn[k + 1]
            self._tri(a0, t0, t1, False)
            self._tri(a0, t1, a1, False)


def _tube(b: _Builder, stations, e1, e2, part, chart, cap_start=None,
          cap_end=None):
    """Stations: list of (center, rx, rz). Returns (first_ring, last_ring)."""
    u0, v0, u1, v1 = chart
    pad = 0.08 * (v1 - v0)
    rings = []
    n = len(stations)
    for i, (center, rx, rz) in enumerate(stations):
        vband = v0 + pad + (v1 - v0 - 2 * pad) * i / max(n - 1, 1)
        rings.append(b.add_ring(np.asarray(center, float), e1, e2, rx, rz,
                                part, chart, vband))
    for i in range(n - 1):
        b.bridge_rings(rings[i], rings[i + 1])
    mid_u = (u0 + u1) / 2.0
    if cap_start is not None:
        b.cap(rings[0], cap_start, (mid_u, v0 + 0.02 * (v1 - v0)), part,
              outward=False)
    if cap_end is not None:
        b.cap(rings[-1], cap_end, (mid_u, v1 - 0.02 * (v1 - v0)), part,
              outward=True)
    return rings[0], rings[-1], rings


def _subdivide_stations(stations, factor: int):
    """Insert factor-1 interpolated stations between consecutive ones."""
    if factor <= 1:
        return stations
    out = []
    for a, b in zip(stations[:-1], stations[1:]):
        ca, rxa, rza = a
        cb, rxb, rzb = b
        for k in range(factor):
            t = k / factor
            c = tuple((1 - t) * np.asarray(ca, float) + t * np.asarray(cb, float))
            out.append((c, (1 - t) * rxa + t * rxb, (1 - t) * rza + t * rzb))
    out.append(stations[-1])
    return out


def synth_body(seed: int = 0, resolution: int = 1) -> tuple[BodyModel, dict]:
    """Deterministic synthetic humanoid; returns (model, catalog).

    The catalog carries the ground-truth per-vertex UVs, named region masks
    for garment synthesis, and the landmark constants used to build the body.
    ``resolution`` scales ring density (1: ~1.5k vertices, 2: ~5k).
    """
    rng = np.random.default_rng(seed)
    jit = lambda w: float(1.0 + w * (rng.random() * 2.0 - 1.0))

    # landmark heights / radii (seed jitters proportions mildly)
    hip_y, waist_y, chest_y = -0.10, 0.14 * jit(0.05), 0.30 * jit(0.05)
    neck_y = 0.40 * jit(0.04)
    head_top = 0.62 * jit(0.04)
    shoulder_x = 0.14 * jit(0.05)
    wrist_x = 0.54 * jit(0.06)
    elbow_x = (shoulder_x + wrist_x) / 2.0
    hip_x = 0.090 * jit(0.05)
    ankle_y = -0.78 * jit(0.05)
    knee_y = (hip_y + ankle_y) / 2.0
    arm_y = 0.35 * jit(0.03)
    r_trunk = 0.125 * jit(0.08)
    r_arm = 0.045 * jit(0.08)
    r_leg = 0.058 * jit(0.08)
    r_head = 0.075 * jit(0.06)

    ex, ey, ez = np.eye(3)
    sub = max(int(resolution), 1)
    b = _Builder(nseg=NSEG * sub)

    # trunk + head: one vertical tube, radius profile pinched at the neck
    trunk_stations = [
        ((0, hip_y - 0.02, 0), r_trunk * 0.92, r_trunk * 0.66),
        ((0, hip_y + 0.055, 0), r_trunk * 1.00, r_trunk * 0.70),
        ((0, waist_y - 0.11, 0), r_trunk * 0.97, r_trunk * 0.68),
        ((0, waist_y - 0.035, 0), r_trunk * 0.94, r_trunk * 0.66),
        ((0, waist_y + 0.04, 0), r_trunk * 0.95, r_trunk * 0.67),
        ((0, waist_y + 0.105, 0), r_trunk * 0.98, r_trunk * 0.69),
        ((0, chest_y, 0), r_trunk * 1.02, r_trunk * 0.72),
        ((0, chest_y + 0.06, 0), r_trunk * 0.88, r_trunk * 0.64),
        ((0, neck_y, 0), r_trunk * 0.40, r_trunk * 0.40),
    ]
    head_stations = [
        ((0, neck_y + 0.04, 0), r_head * 0.75, r_head * 0.75),
        ((0, (neck_y + head_top) / 2 + 0.02, 0), r_head, r_head),
        ((0, head_top - 0.04, 0), r_head * 0.85, r_head * 0.85),
    ]
    charts = _chart_grid()
    trunk_stations = _subdivide_stations(trunk_stations, sub)
    head_stations = _subdivide_stations(head_stations, sub)
    first, last, _ = _tube(b, trunk_stations, ex, ez, 0, charts[0],
                           cap_start=(0, hip_y - 0.04, 0))
    head_first, head_last, _ = _tube(b, head_stations, ex, ez, 1, charts[1],
                                     cap_end=(0, head_top, 0))
    b.bridge_rings(last, head_first)  # neck: same tube family, charted
    # neck bridge spans two charts; mark those triangles uncharted
    for i in range(len(b.tris) - 2 * b.nseg, len(b.tris)):
        b.charted[i] = False

    trunk_vert_count = len(b.verts)
    trunk_ids = np.arange(trunk_vert_count)

    def arm(sign, part, chart):
        sx = sign
        stations = [
            ((sx * (shoulder_x - 0.02), arm_y, 0), r_arm * 1.15, r_arm * 1.15),
            ((sx * (shoulder_x + 0.05), arm_y, 0), r_arm * 1.05, r_arm * 1.05),
            ((sx * (elbow_x - 0.03), arm_y, 0), r_arm * 0.95, r_arm * 0.95),
            ((sx * (elbow_x + 0.03), arm_y, 0), r_arm * 0.90, r_arm * 0.90),
            ((sx * (wrist_x - 0.06), arm_y, 0), r_arm * 0.80, r_arm * 0.80),
            ((sx * wrist_x, arm_y, 0), r_arm * 0.72, r_arm * 0.72),
        ]
        f, l, _ = _tube(b, _subdivide_stations(stations, sub), ey, ez, part,
                        chart, cap_end=(sx * (wrist_x + 0.03), arm_y, 0))
        near = trunk_ids[np.abs(np.asarray(b.verts)[trunk_ids][:, 1] - arm_y) < 0.09]
        b.stitch(f, near)

    def leg(sign, part, chart):
        sx = sign
        stations = [
            ((sx * hip_x, hip_y - 0.015, 0), r_leg * 1.05, r_leg * 1.05),
            ((sx * hip_x, hip_y - 0.12, 0), r_leg * 1.00, r_leg * 1.00),
            ((sx * hip_x, knee_y + 0.05, 0), r_leg * 0.88, r_leg * 0.88),
            ((sx * hip_x, knee_y - 0.05, 0), r_leg * 0.80, r_leg * 0.80),
            ((sx * hip_x, ankle_y + 0.10, 0), r_leg * 0.68, r_leg * 0.68),
            ((sx * hip_x, ankle_y, 0), r_leg * 0.60, r_leg * 0.60),
        ]
        f, l, _ = _tube(b, _subdivide_stations(stations, sub), ex, ez, part,
                        chart, cap_end=(sx * hip_x, ankle_y - 0.035, 0))
        near = trunk_ids[np.asarray(b.verts)[trunk_ids][:, 1] < hip_y + 0.03]
        b.stitch(f, near)

    arm(-1.0, 2, charts[2])
    arm(+1.0, 3, charts[3])
    leg(-1.0, 4, charts[4])
    leg(+1.0, 5, charts[5])

    verts = np.asarray(b.verts)
    tris = np.asarray(b.tris, dtype=np.int64)
    uvs = np.asarray(b.uvs)
    part = np.asarray(b.part, dtype=np.int64)
    radial = np.asarray(b.radial)

    joints = _joint_positions(hip_y, waist_y, chest_y, neck_y, shoulder_x,
                              elbow_x, wrist_x, hip_x, knee_y, ankle_y, arm_y)
    weights = _skinning_weights(verts, part, joints)
    regressor = _joint_regressor(verts, part, joints)
    shape_basis = _shape_basis(verts, part, radial, joints,
                               head_center=(0, (neck_y + head_top) / 2, 0))

    f32 = lambda a: a.astype(np.float32).astype(np.float64)
    model = BodyModel(
        template=f32(verts),
        triangles=tris,
        uvs=f32(uvs),
        uv_charted=np.asarray(b.charted, dtype=bool),
        parents=PARENTS,
        joint_regressor=f32(regressor),
        weights=f32(weights),
        shape_basis=f32(shape_basis),
        joint_names=JOINT_NAMES,
        vertex_part=part,
        part_names=PART_NAMES,
    )
    catalog = {
        "uv": model.uvs.copy(),
        "landmarks": {
            "hip_y": hip_y, "waist_y": waist_y, "chest_y": chest_y,
            "neck_y": neck_y, "arm_y": arm_y, "shoulder_x": shoulder_x,
            "wrist_x": wrist_x, "ankle_y": ankle_y, "head_top": head_top,
        },
        "regions": {name: region_mask(model, name)
                    for name in ("torso", "tshirt", "jumpsuit")},
    }
    return model, catalog


def _chart_grid():
    """Six disjoint UV rectangles with generous margins."""
    cells = []
    for row in range(2):
        for col in range(3):
            u0 = col / 3 + 0.03
            v0 = row / 2 + 0.03
            cells.append((u0, v0, u0 + 1 / 3 - 0.06, v0 + 0.5 - 0.06))
    return cells


def _joint_positions(hip_y, waist_y, chest_y, neck_y, shoulder_x, elbow_x,
                     wrist_x, hip_x, knee_y, ankle_y, arm_y):
    return {
        "pelvis": (0, hip_y + 0.04, 0), "spine": (0, waist_y, 0),
        "chest": (0, chest_y, 0), "head": (0, neck_y + 0.03, 0),
        "l_shoulder": (-shoulder_x, arm_y, 0), "l_elbow": (-elbow_x, arm_y, 0),
        "l_wrist": (-wrist_x, arm_y, 0),
        "r_shoulder": (shoulder_x, arm_y, 0), "r_elbow": (elbow_x, arm_y, 0),
        "r_wrist": (wrist_x, arm_y, 0),
        "l_hip": (-hip_x, hip_y, 0), "l_knee": (-hip_x, knee_y, 0),
        "l_ankle": (-hip_x, ankle_y, 0),
        "r_hip": (hip_x, hip_y, 0), "r_knee": (hip_x, knee_y, 0),
        "r_ankle": (hip_x, ankle_y, 0),
    }


def _hat_weights(coord, stations):
    """Piecewise-linear blend over sorted (joint_index, coordinate) stations."""
    idx = np.zeros((len(coord), len(JOINT_NAMES)))
    pts = [s[1] for s in stations]
    for vi, x in enumerate(coord):
        if x <= pts[0]:
            idx[vi, stations[0][0]] = 1.0
        elif x >= pts[-1]:
            idx[vi, stations[-1][0]] = 1.0
        else:
            k = np.searchsorted(pts, x) - 1
            t = (x - pts[k]) / (pts[k + 1] - pts[k])
            idx[vi, stations[k][0]] = 1.0 - t
            idx[vi, stations[k + 1][0]] = t
    return idx


def _skinning_weights(verts, part, joints):
    j = {name: i for i, name in enumerate(JOINT_NAMES)}
    w = np.zeros((len(verts), len(JOINT_NAMES)))

    trunk = (part == 0) | (part == 1)
    w[trunk] = _hat_weights(verts[trunk, 1], [
        (j["pelvis"], joints["pelvis"][1]),
        (j["spine"], joints["spine"][1]),
        (j["chest"], joints["chest"][1]),
        (j["head"], joints["head"][1]),
    ])
    for side, arm_part in (("l", 2), ("r", 3)):
        sel = part == arm_part
        x = np.abs(verts[sel, 0])
        w[sel] = _hat_weights(x, [
            (j[f"{side}_shoulder"], abs(joints[f"{side}_shoulder"][0]) + 0.02),
            (j[f"{side}_elbow"], abs(joints[f"{side}_elbow"][0])),
            (j[f"{side}_wrist"], abs(joints[f"{side}_wrist"][0])),
        ])
    for side, leg_part in (("l", 4), ("r", 5)):
        sel = part == leg_part
        y = -verts[sel, 1]
        w[sel] = _hat_weights(y, [
            (j[f"{side}_hip"], -joints[f"{side}_hip"][1] + 0.02),
            (j[f"{side}_knee"], -joints[f"{side}_knee"][1]),
            (j[f"{side}_ankle"], -joints[f"{side}_ankle"][1]),
        ])
    return w


def _joint_regressor(verts, part, joints):
    reg = np.zeros((len(JOINT_NAMES), len(verts)))
    part_of_joint = {
        "pelvis": [0], "spine": [0], "chest": [0], "head": [0, 1],
        "l_shoulder": [2], "l_elbow": [2], "l_wrist": [2],
        "r_shoulder": [3], "r_elbow": [3], "r_wrist": [3],
        "l_hip": [4], "l_knee": [4], "l_ankle": [4],
        "r_hip": [5], "r_knee": [5], "r_ankle": [5],
    }
    for ji, name in enumerate(JOINT_NAMES):
        target = np.asarray(joints[name], dtype=float)
        cand = np.isin(part, part_of_joint[name])
        ids = np.where(cand)[0]
        d = np.linalg.norm(verts[ids] - target, axis=1)
        radius = np.sort(d)[min(2 * NSEG, len(d) - 1)] + 1e-9
        sel = ids[d <= radius]
        reg[ji, sel] = 1.0 / len(sel)
    return reg


def _shape_basis(verts, part, radial, joints, head_center):
    n = len(verts)
    basis = np.zeros((n, 3, 4))
    pelvis_y = joints["pelvis"][1]
    # 0: height — stretch along y away from the pelvis
    basis[:, 1, 0] = (verts[:, 1] - pelvis_y) * 0.12
    # 1: girth — push out along the tube radial direction
    basis[:, :, 1] = radial * 0.030
    # 2: limb length — arms stretch outward, legs downward
    arms = (part == 2) | (part == 3)
    legs = (part == 4) | (part == 5)
    sx = np.sign(verts[:, 0])
    shoulder = abs(joints["l_shoulder"][0])
    basis[arms, 0, 2] = (sx[arms] * np.clip(np.abs(verts[arms, 0]) - shoulder,
                                            0, None) * 0.18)
    hip_y = joints["l_hip"][1]
    basis[legs, 1, 2] = -np.clip(hip_y - verts[legs, 1], 0, None) * 0.18
    # 3: head size — inflate radially from the head center
    head = part == 1
    dirs = verts[head] - np.asarray(head_center)
    basis[head, :, 3] = dirs * 0.45
    return basis


def region_mask(model: BodyModel, name: str) -> np.ndarray:
    """Named garment regions over the synthetic body's part labels."""
    if model.vertex_part is None:
        raise ValueError("model carries no part labels")
    part = model.vertex_part
    y = model.template[:, 1]
    x = np.abs(model.template[:, 0])
    trunk = part == 0
    arms = (part == 2) | (part == 3)
    legs = (part == 4) | (part == 5)
    ty_lo, ty_hi = y[trunk].min(), y[trunk].max()
    t = lambda f: ty_lo + f * (ty_hi - ty_lo)
    if name == "torso":
        # band kept below the arm roots so the offset surface stays ~offset
        # away from the whole body, not just from the trunk
        return trunk & (y >= t(0.12)) & (y <= t(0.74))
    if name == "tshirt":
        ax_hi = x[arms].min() + 0.30 * (x[arms].max() - x[arms].min())
        return (trunk & (y >= t(0.10))) | (arms & (x <= ax_hi))
    if name == "jumpsuit":
        ax_hi = x[arms].min() + 0.72 * (x[arms].max() - x[arms].min())
        ly_lo = y[legs].min() + 0.28 * (y[legs].max() - y[legs].min())
        return (trunk | (arms & (x <= ax_hi)) | (legs & (y >= ly_lo)))
    raise ValueError(f"unknown region {name!r}; "
                     "expected torso / tshirt / jumpsuit or a boolean mask")


def garment_synth(model: BodyModel, params: BodyParams, region,
                  offset: float, layers: int = 1,
                  junction_cull: float = 0.75):
    """Offset-surface garment over a posed body, with exact UV ground truth.

    Returns (garment TriMesh, CorrespondenceSet of UV targets). Layer 2,
    when requested, is stacked at 2.2x the offset (never interpenetrating
    at rest). ``junction_cull`` drops vertices whose offset point has less
    than that fraction of the offset as clearance: high values give the
    clearance-uniform garments registration benchmarks want, low values
    keep sleeves connected through the shoulder collar for draping.
    """
    from ..corr.types import CorrespondenceSet

    if offset <= 0:
        raise ValueError("offset must be positive")
    if isinstance(region, str):
        mask = region_mask(model, region)
    else:
        mask = np.asarray(region, dtype=bool)
        if mask.shape != (model.n_vertices,):
            raise ValueError("region mask must have one flag per body vertex")
    if not mask.any():
        raise ValueError("empty garment region")

    posed = lbs_forward(model, params)
    normals = posed.vertex_normals

    # cull region vertices whose offset point lands inside or hugging an
    # adjacent body part (armpit / crotch junctions), so synthetic garments
    # start penetration-free
    from ..geom import signed_heights

    candidates = np.where(mask)[0]
    offset_points = posed.vertices[candidates] + offset * normals[candidates]
    h, _, _, _ = signed_heights(posed, offset_points)
    keep = h >= junction_cull * offset
    mask = mask.copy()
    mask[candidates[~keep]] = False
    if not mask.any():
        raise ValueError("empty garment region after junction culling")

    keep_tri = mask[model.triangles].all(axis=1)
    tris = model.triangles[keep_tri]
    used = np.unique(tris)

    # drop floater fragments cut off at region boundaries
    if len(used):
        from ..geom.graph import connected_component_labels

        remap0 = -np.ones(model.n_vertices, dtype=np.int64)
        remap0[used] = np.arange(len(used))
        probe = TriMesh(posed.vertices[used], remap0[tris])
        labels = connected_component_labels(probe)
        counts = np.bincount(labels)
        keep_comp = counts >= max(8, 0.08 * counts.max())
        keep_vert_local = keep_comp[labels]
        keep_vert = np.zeros(model.n_vertices, dtype=bool)
        keep_vert[used[keep_vert_local]] = True
        keep_tri &= keep_vert[model.triangles].all(axis=1)
        tris = model.triangles[keep_tri]
        used = np.unique(tris)
    remap = -np.ones(model.n_vertices, dtype=np.int64)
    remap[used] = np.arange(len(used))

    verts_list, tris_list, source_ids = [], [], []
    for layer in range(layers):
        off = offset * (1.0 + 1.2 * layer)
        verts_list.append(posed.vertices[used] + off * normals[used])
        tris_list.append(remap[tris] + layer * len(used))
        source_ids.append(used)
    garment = TriMesh(np.vstack(verts_list), np.vstack(tris_list))
    garment.layers = layers
    source_ids = np.concatenate(source_ids)

    uv_targets = model.uvs[source_ids]
    corr = CorrespondenceSet.from_uv(uv_targets,
                                     valid=np.ones(len(source_ids), bool))
    corr.source_vertex_hint = source_ids
    return garment, corr


def synth_skirt(model: BodyModel, params: BodyParams, length: float = 0.5,
                flare: float = 2.0, clearance: float = 0.006,
                n_rings: int = 12, n_seg: int = 24) -> TriMesh:
    """Open flared tube hanging from the waist of the posed body."""
    posed = lbs_forward(model, params)
    part = model.vertex_part
    trunk = posed.vertices[part == 0]
    # narrowest band in the waist window: the wider hip bulge below catches
    # the skirt instead of letting it slide off
    lo, hi = np.quantile(trunk[:, 1], [0.35, 0.75])
    ys = np.linspace(lo, hi, 9)
    def band_radius(y):
        band = trunk[np.abs(trunk[:, 1] - y) < 0.04]
        if len(band) == 0:
            return np.inf, None
        c = band.mean(axis=0)
        return np.linalg.norm(band[:, [0, 2]] - c[[0, 2]], axis=1).max(), c
    radii = [band_radius(y) for y in ys]
    k = int(np.argmin([r for r, _ in radii]))
    center = radii[k][1]
    r0 = radii[k][0] + clearance
    r1 = r0 * flare
    verts, tris = [], []
    for i in range(n_rings):
        t = i / (n_rings - 1)
        r = r0 * (1 - t) + r1 * t
        yy = center[1] - t * length
        for k in range(n_seg):
            phi = 2 * np.pi * k / n_seg
            verts.append((center[0] + r * np.cos(phi), yy,
                          center[2] + r * np.sin(phi)))
    for i in range(n_rings - 1):
        for k in range(n_seg):
            a0 = i * n_seg + k
            a1 = i * n_seg + (k + 1) % n_seg
            b0 = (i + 1) * n_seg + k
            b1 = (i + 1) * n_seg + (k + 1) % n_seg
            tris.append((a0, b0, b1))
            tris.append((a0, b1, a1))
    return TriMesh(np.asarray(verts), np.asarray(tris, dtype=np.int64))


def synth_poncho(model: BodyModel, params: BodyParams,
                 outer_radius: float = 0.33, n_rings: int = 8,
                 n_seg: int = 24) -> TriMesh:
    """Planar annulus resting over the shoulders: the neck keeps the inner
    ring in place and the brim hangs free, so its equilibrium shape is a
    direct read of the material stiffness."""
    posed = lbs_forward(model, params)
    part = model.vertex_part
    head = posed.vertices[part == 1]
    trunk = posed.vertices[part == 0]
    neck_y = trunk[:, 1].max()
    center = np.array([trunk[:, 0].mean(), neck_y + 0.015, trunk[:, 2].mean()])
    neck_band = trunk[trunk[:, 1] > neck_y - 0.04]
    r_in = np.linalg.norm(neck_band[:, [0, 2]] - center[[0, 2]],
                          axis=1).max() + 0.012
    verts, tris = [], []
    for i in range(n_rings):
        t = i / (n_rings - 1)
        r = r_in * (1 - t) + outer_radius * t
        for k in range(n_seg):
            phi = 2 * np.pi * k / n_seg
            verts.append((center[0] + r * np.cos(phi), center[1],
                          center[2] + r * np.sin(phi)))
    for i in range(n_rings - 1):
        for k in range(n_seg):
            a0 = i * n_seg + k
            a1 = i * n_seg + (k + 1) % n_seg
            b0 = (i + 1) * n_seg + k
            b1 = (i + 1) * n_seg + (k + 1) % n_seg
            tris.append((a0, b1, b0))
            tris.append((a0, a1, b1))
    return TriMesh(np.asarray(verts), np.asarray(tris, dtype=np.int64))
