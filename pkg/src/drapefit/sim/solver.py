"""Position-based (XPBD) cloth stepping with body collisions.

Deterministic throughout: constraints project over a fixed greedy coloring
in index order, collisions resolve vertex-by-vertex with frozen contact
frames per substep, and all arithmetic is plain numpy.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..geom import TriMesh, signed_heights
from .cloth import ClothConstraints

GRAVITY = (0.0, -5.8, 0.0)  # 9.81 m/s^2 expressed in unit-frame lengths


@dataclass
class SimConfig:
    morph_frames: int = 30
    settle_frames: int = 20
    substeps: int = 4
    iterations: int = 20
    collision_margin: float = 0.003
    gravity: tuple = GRAVITY
    damping: float = 0.02
    frame_dt: float = 1.0 / 30.0
    self_collision: bool | None = None  # None: on for multi-component garments

    def __post_init__(self):
        for name in ("morph_frames", "settle_frames", "substeps", "iterations"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.collision_margin <= 0:
            raise ValueError("collision_margin must be positive")


@dataclass
class ClothState:
    x: np.ndarray
    v: np.ndarray
    constraints: ClothConstraints
    triangles: np.ndarray
    self_collision: bool = False
    friction: float = 0.4

    @staticmethod
    def rest(garment_positions, constraints, triangles,
             self_collision=False, friction=0.4) -> "ClothState":
        x = np.array(garment_positions, dtype=np.float64)
        return ClothState(x=x, v=np.zeros_like(x), constraints=constraints,
                          triangles=triangles, self_collision=self_collision,
                          friction=friction)


def step(state: ClothState, body: TriMesh | None, config: SimConfig) -> float:
    """Advance one frame; returns the max penetration depth encountered."""
    cons = state.constraints
    dt = config.frame_dt / config.substeps
    gravity = np.asarray(config.gravity)
    damp = max(0.0, 1.0 - config.damping)
    max_pen = 0.0

    for _ in range(config.substeps):
        state.v += gravity * dt
        state.v *= damp
        x_prev = state.x.copy()
        state.x = state.x + state.v * dt

        contacts = _find_contacts(state.x, body, config, state.friction)
        self_contacts = (_find_self_contacts(state, config)
                         if state.self_collision else None)

        lam_pairs = np.zeros(len(cons.pairs))
        lam_bend = np.zeros(len(cons.bend_quads))
        for _ in range(config.iterations):
            _project_distance(state, lam_pairs, dt)
            _project_bending(state, lam_bend, dt)
            pen = _project_contacts(state.x, x_prev, contacts, config)
            max_pen = max(max_pen, pen)
            if self_contacts is not None:
                _project_contacts(state.x, x_prev, self_contacts, config)
        # contact frames freeze per substep; one refreshed pass keeps the
        # substep's end state penetration-free
        contacts = _find_contacts(state.x, body, config, state.friction)
        pen = _project_contacts(state.x, x_prev, contacts, config)
        max_pen = max(max_pen, pen)

        state.v = (state.x - x_prev) / dt

    if not np.isfinite(state.x).all():
        raise FloatingPointError("cloth state diverged (non-finite positions)")
    return max_pen


def _project_distance(state: ClothState, lam: np.ndarray, dt: float) -> None:
    cons = state.constraints
    x = state.x
    w = cons.inv_mass
    alpha = cons.compliances / (dt * dt)
    for batch in cons.pair_colors:
        i = cons.pairs[batch, 0]
        j = cons.pairs[batch, 1]
        delta = x[i] - x[j]
        length = np.sqrt((delta * delta).sum(axis=1) + 1e-30)
        n = delta / length[:, None]
        c = length - cons.rest_lengths[batch]
        a = alpha[batch]
        dlam = (-c - a * lam[batch]) / (w[i] + w[j] + a)
        lam[batch] += dlam
        x[i] += (w[i] * dlam)[:, None] * n
        x[j] -= (w[j] * dlam)[:, None] * n


def _project_bending(state: ClothState, lam: np.ndarray, dt: float) -> None:
    cons = state.constraints
    if len(cons.bend_quads) == 0:
        return
    x = state.x
    w = cons.inv_mass
    alpha = cons.bend_compliances / (dt * dt)
    for batch in cons.bend_colors:
        q = cons.bend_quads[batch]
        i1, i2, i3, i4 = q[:, 0], q[:, 1], q[:, 2], q[:, 3]
        p2 = x[i2] - x[i1]
        p3 = x[i3] - x[i1]
        p4 = x[i4] - x[i1]
        n1 = np.cross(p2, p3)
        n2 = np.cross(p2, p4)
        l1 = np.sqrt((n1 * n1).sum(axis=1) + 1e-30)
        l2 = np.sqrt((n2 * n2).sum(axis=1) + 1e-30)
        n1 /= l1[:, None]
        n2 /= l2[:, None]
        d = np.clip((n1 * n2).sum(axis=1), -1.0, 1.0)
        c = np.arccos(d) - cons.bend_rest_angles[batch]

        # gradients of d (Mueller et al. position-based dynamics, appendix)
        q3 = (np.cross(p2, n2) + np.cross(n1, p2) * d[:, None]) / l1[:, None]
        q4 = (np.cross(p2, n1) + np.cross(n2, p2) * d[:, None]) / l2[:, None]
        q2 = -(np.cross(p3, n2) + np.cross(n1, p3) * d[:, None]) / l1[:, None] \
             - (np.cross(p4, n1) + np.cross(n2, p4) * d[:, None]) / l2[:, None]
        q1 = -q2 - q3 - q4

        sin_sq = np.maximum(1.0 - d * d, 1e-8)
        denom = (w[i1] * (q1 * q1).sum(axis=1) + w[i2] * (q2 * q2).sum(axis=1)
                 + w[i3] * (q3 * q3).sum(axis=1)
                 + w[i4] * (q4 * q4).sum(axis=1)) / sin_sq
        a = alpha[batch]
        dlam = (-c - a * lam[batch]) / (denom + a)
        lam[batch] += dlam
        scale = dlam / np.sqrt(sin_sq)  # chain rule through arccos
        x[i1] += (w[i1] * scale)[:, None] * q1
        x[i2] += (w[i2] * scale)[:, None] * q2
        x[i3] += (w[i3] * scale)[:, None] * q3
        x[i4] += (w[i4] * scale)[:, None] * q4


@dataclass
class _Contacts:
    vertex: np.ndarray    # (K,)
    h0: np.ndarray        # (K,) true signed height at collection
    x0: np.ndarray        # (K, 3) vertex positions at collection
    normal: np.ndarray    # (K, 3) frozen contact pseudonormals
    friction: float


def _find_contacts(x, body: TriMesh | None, config: SimConfig,
                   friction: float = 0.4):
    if body is None:
        return None
    pad = 4.0 * config.collision_margin  # catch approaching vertices too
    h, tri, bary, feet = signed_heights(body, x)
    near = h < config.collision_margin + pad
    if not near.any():
        return None
    from ..geom.mesh import surface_point_normal

    normals = surface_point_normal(body, tri[near], bary[near])
    return _Contacts(vertex=np.where(near)[0], h0=h[near],
                     x0=x[near].copy(), normal=normals, friction=friction)


def _find_self_contacts(state: ClothState, config: SimConfig):
    """Vertex-vs-own-triangle contacts, skipping each vertex's own fan."""
    mesh = TriMesh(state.x, state.triangles)
    h, tri, bary, feet = signed_heights(mesh, state.x)
    near = np.abs(h) < config.collision_margin
    if not near.any():
        return None
    idx = np.where(near)[0]
    keep = []
    for row, v in enumerate(idx):
        if v not in state.triangles[tri[idx[row]]]:
            keep.append(row)
    if not keep:
        return None
    keep = np.asarray(keep)
    from ..geom.mesh import surface_point_normal

    normals = surface_point_normal(mesh, tri[idx[keep]], bary[idx[keep]])
    # orient push-out along the side the vertex currently occupies
    side = np.sign(((state.x[idx[keep]] - feet[idx[keep]]) * normals).sum(axis=1))
    side[side == 0] = 1.0
    normals = normals * side[:, None]
    return _Contacts(vertex=idx[keep], h0=np.abs(h[idx[keep]]),
                     x0=state.x[idx[keep]].copy(), normal=normals,
                     friction=0.2)


def _project_contacts(x, x_prev, contacts: _Contacts | None,
                      config: SimConfig) -> float:
    if contacts is None:
        return 0.0
    v = contacts.vertex
    # true height at collection, tracked through the frozen contact plane
    h = contacts.h0 + ((x[v] - contacts.x0) * contacts.normal).sum(axis=1)
    gap = config.collision_margin - h
    active = gap > 0.0
    if not active.any():
        return 0.0
    va = v[active]
    push = gap[active]
    x[va] += push[:, None] * contacts.normal[active]
    # Coulomb-style friction: static contacts cancel the whole tangential
    # motion of this substep, sliding ones cancel mu * push worth of it
    motion = x[va] - x_prev[va]
    normal_part = (motion * contacts.normal[active]).sum(axis=1)
    tangent = motion - normal_part[:, None] * contacts.normal[active]
    t_len = np.sqrt((tangent * tangent).sum(axis=1) + 1e-30)
    limit = contacts.friction * push
    scale = np.where(t_len <= limit, 1.0, limit / t_len)
    x[va] -= tangent * scale[:, None]
    return max(0.0, float(-h.min()))
