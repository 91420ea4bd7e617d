"""Parametric proxy body: linear blend skinning with shape, displacement,
and per-axis scale extensions, evaluated in torch for exact gradients.

The 3-axis scale is applied in canonical space *before* skinning and joints
are regressed from the scaled rest shape; scaling after posing would shear
rotated limbs.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import torch

from ..geom import TriMesh

# Small fixed matmuls dominate; a single thread keeps every optimizer run
# bit-reproducible across processes.
torch.set_num_threads(1)


@dataclass
class BodyModel:
    """LBS proxy body: template + kinematic tree + skinning + shape basis."""

    template: np.ndarray        # (N, 3)
    triangles: np.ndarray       # (M, 3)
    uvs: np.ndarray             # (N, 2)
    uv_charted: np.ndarray      # (M,) bool; False = stitch triangles off-atlas
    parents: np.ndarray         # (J,) parent index, -1 for the single root
    joint_regressor: np.ndarray  # (J, N), rows sum to 1
    weights: np.ndarray         # (N, J), rows sum to 1
    shape_basis: np.ndarray     # (N, 3, S)
    joint_names: list[str] = field(default_factory=list)
    vertex_part: np.ndarray | None = None
    part_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.template = np.asarray(self.template, dtype=np.float64)
        self.triangles = np.asarray(self.triangles, dtype=np.int64)
        self.uvs = np.asarray(self.uvs, dtype=np.float64)
        self.uv_charted = np.asarray(self.uv_charted, dtype=bool)
        self.parents = np.asarray(self.parents, dtype=np.int64)
        self.joint_regressor = np.asarray(self.joint_regressor, dtype=np.float64)
        self.weights = np.asarray(self.weights, dtype=np.float64)
        self.shape_basis = np.asarray(self.shape_basis, dtype=np.float64)
        validate_model(self)

    @property
    def n_vertices(self) -> int:
        return len(self.template)

    @property
    def n_joints(self) -> int:
        return len(self.parents)

    @property
    def n_shape(self) -> int:
        return self.shape_basis.shape[2]

    def rest_mesh(self) -> TriMesh:
        return TriMesh(self.template, self.triangles, uvs=self.uvs)

    def atlas_mesh(self) -> TriMesh:
        """Rest mesh restricted to charted triangles (for UV lookups)."""
        mesh = getattr(self, "_atlas_mesh", None)
        if mesh is None:
            mesh = TriMesh(self.template, self.triangles[self.uv_charted],
                           uvs=self.uvs)
            self._atlas_mesh = mesh
        return mesh

    def torch_bundle(self) -> dict:
        bundle = getattr(self, "_torch_bundle", None)
        if bundle is None:
            t = lambda a: torch.as_tensor(np.array(a, dtype=np.float64))
            # weights are stored at float32 precision; renormalizing rows at
            # compute time keeps the zero-pose forward an exact identity
            w = self.weights / self.weights.sum(axis=1, keepdims=True)
            bundle = {
                "template": t(self.template),
                "joint_regressor": t(self.joint_regressor),
                "weights": t(w),
                "shape_basis": t(self.shape_basis),
                "parents": self.parents,
                "order": _topological_order(self.parents),
            }
            self._torch_bundle = bundle
        return bundle


def validate_model(model: BodyModel) -> None:
    n, j = model.n_vertices, model.n_joints
    if model.triangles.size and (model.triangles.min() < 0
                                 or model.triangles.max() >= n):
        raise ValueError("triangle index out of range")
    if model.uvs.shape != (n, 2):
        raise ValueError(f"uvs shape {model.uvs.shape} != ({n}, 2)")
    if model.uv_charted.shape != (len(model.triangles),):
        raise ValueError("uv_charted must have one flag per triangle")
    if model.weights.shape != (n, j):
        raise ValueError(f"weights shape {model.weights.shape} != ({n}, {j})")
    if model.joint_regressor.shape != (j, n):
        raise ValueError("joint_regressor shape mismatch")
    werr = np.abs(model.weights.sum(axis=1) - 1.0).max()
    if werr > 1e-6:
        raise ValueError(f"skinning weight rows must sum to 1 (err {werr:.2e})")
    jerr = np.abs(model.joint_regressor.sum(axis=1) - 1.0).max()
    if jerr > 1e-6:
        raise ValueError(f"joint regressor rows must sum to 1 (err {jerr:.2e})")
    _topological_order(model.parents)  # raises on cycles / multi-root


def _topological_order(parents: np.ndarray) -> list[int]:
    roots = [i for i, p in enumerate(parents) if p < 0]
    if len(roots) != 1:
        raise ValueError(f"kinematic tree must have exactly one root, got {roots}")
    order: list[int] = []
    placed = set()
    pending = list(range(len(parents)))
    while pending:
        progressed = False
        remaining = []
        for jnt in pending:
            p = parents[jnt]
            if p < 0 or p in placed:
                order.append(jnt)
                placed.add(jnt)
                progressed = True
            else:
                remaining.append(jnt)
        if not progressed:
            raise ValueError("kinematic tree contains a cycle")
        pending = remaining
    return order


@dataclass
class BodyParams:
    """Pose, shape, per-vertex displacement, 3-axis scale, root translation.

    The proxy-only special case is d = 0, s = (1, 1, 1). ``trans`` is an
    artifact extension (default 0) so arbitrarily placed inputs can be
    registered; it interpolates linearly like d and s.
    """

    theta: np.ndarray   # (J, 3) axis-angle per joint
    beta: np.ndarray    # (S,)
    d: np.ndarray       # (N, 3)
    s: np.ndarray       # (3,)
    trans: np.ndarray   # (3,)

    @staticmethod
    def zeros(model: BodyModel) -> "BodyParams":
        return BodyParams(
            theta=np.zeros((model.n_joints, 3)),
            beta=np.zeros(model.n_shape),
            d=np.zeros((model.n_vertices, 3)),
            s=np.ones(3),
            trans=np.zeros(3),
        )

    def copy(self) -> "BodyParams":
        return BodyParams(self.theta.copy(), self.beta.copy(), self.d.copy(),
                          self.s.copy(), self.trans.copy())

    def is_proxy_only(self, tol: float = 0.0) -> bool:
        return (np.abs(self.d).max(initial=0.0) <= tol
                and np.abs(self.s - 1.0).max() <= tol)


def _check_dims(model: BodyModel, params: BodyParams) -> None:
    if params.theta.shape != (model.n_joints, 3):
        raise ValueError(f"theta shape {params.theta.shape} != ({model.n_joints}, 3)")
    if params.beta.shape != (model.n_shape,):
        raise ValueError(f"beta shape {params.beta.shape} != ({model.n_shape},)")
    if params.d.shape != (model.n_vertices, 3):
        raise ValueError(f"d shape {params.d.shape} != ({model.n_vertices}, 3)")
    if params.s.shape != (3,):
        raise ValueError("s must be a 3-vector")
    if params.trans.shape != (3,):
        raise ValueError("trans must be a 3-vector")


def rodrigues(axis_angle: torch.Tensor) -> torch.Tensor:
    """Axis-angle (…, 3) to rotation matrices (…, 3, 3), autograd-safe at 0."""
    sq = (axis_angle * axis_angle).sum(dim=-1)
    angle = torch.sqrt(sq + 1e-30).clamp(min=1e-12)
    # cancellation-free coefficients: sin(t)/t and 2 sin^2(t/2)/t^2
    sin_c = torch.sin(angle) / angle
    half = torch.sin(angle / 2.0)
    cos_c = 2.0 * half * half / (angle * angle)

    zeros = torch.zeros_like(sq)
    kx, ky, kz = axis_angle[..., 0], axis_angle[..., 1], axis_angle[..., 2]
    k = torch.stack([
        torch.stack([zeros, -kz, ky], dim=-1),
        torch.stack([kz, zeros, -kx], dim=-1),
        torch.stack([-ky, kx, zeros], dim=-1),
    ], dim=-2)
    eye = torch.eye(3, dtype=axis_angle.dtype).expand(k.shape)
    return eye + sin_c[..., None, None] * k \
        + cos_c[..., None, None] * (k @ k)


def lbs_forward_torch(model: BodyModel, theta: torch.Tensor, beta: torch.Tensor,
                      d: torch.Tensor, s: torch.Tensor,
                      trans: torch.Tensor) -> torch.Tensor:
    """Differentiable LBS chain; returns posed vertices (N, 3)."""
    bundle = model.torch_bundle()
    rest = bundle["template"] + bundle["shape_basis"] @ beta + d
    rest = rest * s  # canonical-space axis scale, before joint regression
    joints = bundle["joint_regressor"] @ rest  # (J, 3)

    rots = rodrigues(theta)  # (J, 3, 3)
    parents = bundle["parents"]
    order = bundle["order"]

    world_r: list = [None] * model.n_joints
    world_t: list = [None] * model.n_joints
    for jnt in order:
        p = parents[jnt]
        local_t = joints[jnt] - (joints[p] if p >= 0 else 0.0)
        if p < 0:
            world_r[jnt] = rots[jnt]
            world_t[jnt] = local_t
        else:
            world_r[jnt] = world_r[p] @ rots[jnt]
            world_t[jnt] = world_r[p] @ local_t + world_t[p]

    rot_stack = torch.stack(world_r)                      # (J, 3, 3)
    t_stack = torch.stack(world_t)                        # (J, 3)
    # subtract each joint's rest position: x -> R (x - j) + t_world + j0-chain
    t_rel = t_stack - torch.einsum("jab,jb->ja", rot_stack, joints)

    w = bundle["weights"]
    vert_r = torch.einsum("nj,jab->nab", w, rot_stack)    # (N, 3, 3)
    vert_t = w @ t_rel                                    # (N, 3)
    posed = torch.einsum("nab,nb->na", vert_r, rest) + vert_t
    return posed + trans


def lbs_forward(model: BodyModel, params: BodyParams) -> TriMesh:
    """Pose the proxy body; returns a TriMesh sharing the model topology."""
    _check_dims(model, params)
    t = lambda a: torch.as_tensor(a, dtype=torch.float64)
    with torch.no_grad():
        posed = lbs_forward_torch(model, t(params.theta), t(params.beta),
                                  t(params.d), t(params.s), t(params.trans))
    return TriMesh(posed.numpy(), model.triangles, uvs=model.uvs)


# -- parameter interpolation ---------------------------------------------

def _axis_angle_to_quat(aa: np.ndarray) -> np.ndarray:
    angle = np.linalg.norm(aa, axis=-1, keepdims=True)
    axis = np.divide(aa, angle, out=np.zeros_like(aa), where=angle > 0)
    half = angle / 2.0
    return np.concatenate([np.cos(half), np.sin(half) * axis], axis=-1)


def _quat_to_axis_angle(q: np.ndarray) -> np.ndarray:
    q = q / np.linalg.norm(q, axis=-1, keepdims=True)
    w = np.clip(q[..., :1], -1.0, 1.0)
    vec = q[..., 1:]
    norm = np.linalg.norm(vec, axis=-1, keepdims=True)
    angle = 2.0 * np.arctan2(norm, w)
    axis = np.divide(vec, norm, out=np.zeros_like(vec), where=norm > 1e-300)
    return axis * angle


def _slerp(qa: np.ndarray, qb: np.ndarray, t: float) -> np.ndarray:
    dot = (qa * qb).sum(axis=-1, keepdims=True)
    qb = np.where(dot < 0, -qb, qb)  # shortest arc
    dot = np.abs(dot).clip(max=1.0)
    theta = np.arccos(dot)
    sin_theta = np.sin(theta)
    near = sin_theta < 1e-9
    w_a = np.where(near, 1.0 - t, np.sin((1.0 - t) * theta) / np.where(near, 1.0, sin_theta))
    w_b = np.where(near, t, np.sin(t * theta) / np.where(near, 1.0, sin_theta))
    out = w_a * qa + w_b * qb
    return out / np.linalg.norm(out, axis=-1, keepdims=True)


def interpolate(source: BodyParams, target: BodyParams, t: float) -> BodyParams:
    """Blend two parameter sets: slerp per joint, lerp for beta, d, s, trans.

    t = 0 and t = 1 return exact copies of the endpoints.
    """
    if t == 0.0:
        return source.copy()
    if t == 1.0:
        return target.copy()
    qa = _axis_angle_to_quat(source.theta)
    qb = _axis_angle_to_quat(target.theta)
    theta = _quat_to_axis_angle(_slerp(qa, qb, float(t)))
    lerp = lambda a, b: (1.0 - t) * a + t * b
    return BodyParams(theta=theta,
                      beta=lerp(source.beta, target.beta),
                      d=lerp(source.d, target.d),
                      s=lerp(source.s, target.s),
                      trans=lerp(source.trans, target.trans))
