"""Revolve a profile curve about the x-axis into a triangle mesh.

Vertices are ``s(t, theta) = (x, y cos theta, y sin theta)`` and normals
``nu = (sin phi, -cos phi cos theta, -cos phi sin theta)``.  With this normal
a cylinder of radius r has H = +1/(2r), i.e. nu points towards the axis
where the profile runs in +x.  Since ``s_t x s_theta = l y nu``, every face is
wound so that its geometric normal is ``sign(l) nu``.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import expr as ex
from .profile import CurveSample, ProblemSpec, ProfileTrace, uniform_derivative
from .singularity import ZERO_REL, SingularPointReport


@dataclass(frozen=True)
class Mesh:
    vertices: np.ndarray      # (n_rings * n_theta, 3), t-major
    normals: np.ndarray       # (n_rings * n_theta, 3)
    faces: np.ndarray         # (2 (n_rings - 1) n_theta, 3), 0-based
    n_rings: int
    n_theta: int
    t: np.ndarray             # parameter of each ring
    annotations: tuple = field(default=())

    def index(self, ring: int, j: int) -> int:
        return ring * self.n_theta + (j % self.n_theta)

    def with_annotations(self, annotations) -> "Mesh":
        return Mesh(self.vertices, self.normals, self.faces, self.n_rings,
                    self.n_theta, self.t, tuple(annotations))


def _columns(samples) -> dict[str, np.ndarray]:
    if isinstance(samples, ProfileTrace):
        return {"t": samples.t, "x": samples.x, "y": samples.y, "phi": samples.phi,
                "l": samples.l, "cos_phi": samples.cos_phi, "sin_phi": samples.sin_phi}
    s = list(samples)
    return {
        "t": np.array([c.t for c in s]),
        "x": np.array([c.x for c in s]),
        "y": np.array([c.y for c in s]),
        "phi": np.array([c.phi for c in s]),
        "l": np.array([c.l_val for c in s]),
        "cos_phi": np.array([c.tangent_dir[0] for c in s]),
        "sin_phi": np.array([c.tangent_dir[1] for c in s]),
    }


def revolve(samples: ProfileTrace | Sequence[CurveSample], n_theta: int) -> Mesh:
    """Triangulate the surface of revolution of sampled profile points."""
    if n_theta < 3:
        raise ValueError("n_theta must be at least 3")
    c = _columns(samples)
    n = len(c["t"])
    if n < 2:
        raise ValueError("need at least two profile samples")
    if np.any(c["y"] <= 0):
        raise ValueError("profile samples must have y > 0")
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    ct, st = np.cos(theta), np.sin(theta)
    x, y = c["x"][:, None], c["y"][:, None]
    vertices = np.stack(
        [np.broadcast_to(x, (n, n_theta)), y * ct, y * st], axis=-1
    ).reshape(-1, 3)
    sp, cp = c["sin_phi"][:, None], c["cos_phi"][:, None]
    normals = np.stack(
        [np.broadcast_to(sp, (n, n_theta)), -cp * ct, -cp * st], axis=-1
    ).reshape(-1, 3)

    i = np.arange(n - 1)[:, None]
    j = np.arange(n_theta)[None, :]
    a = i * n_theta + j
    b = (i + 1) * n_theta + j
    cc = (i + 1) * n_theta + (j + 1) % n_theta
    d = i * n_theta + (j + 1) % n_theta
    faces = np.concatenate(
        [np.stack([a, b, cc], -1).reshape(-1, 3), np.stack([a, cc, d], -1).reshape(-1, 3)]
    )
    # interleave the two triangles of each quad for a stable, local ordering
    nq = (n - 1) * n_theta
    faces = np.stack([faces[:nq], faces[nq:]], axis=1).reshape(-1, 3)
    return Mesh(vertices, normals, faces.astype(np.int64), n, n_theta, c["t"].copy())


def mean_curvature_audit(samples: ProfileTrace | Sequence[CurveSample],
                         spec: ProblemSpec) -> float:
    """Max |m - (l cos(phi)/y - phi')/2| over samples with |l| > sqrt(zero tol).

    phi' comes from fourth-order finite differences of the unwrapped phi,
    so this is independent of how the frame was computed.
    """
    c = _columns(samples)
    t = c["t"]
    h = float(t[1] - t[0])
    if not np.allclose(np.diff(t), h, rtol=1e-9, atol=1e-12 * max(1.0, abs(t[-1]))):
        raise ValueError("samples must be uniformly spaced in t")
    dphi = uniform_derivative(c["phi"], h)
    m = ex.evaluate(spec.m, t)
    reconstructed = 0.5 * (c["l"] * c["cos_phi"] / c["y"] - dphi)
    regular = np.abs(c["l"]) > math.sqrt(ZERO_REL)
    if not regular.any():
        return 0.0
    return float(np.abs(m - reconstructed)[regular].max())


def label_surface_singularities(reports: Sequence[SingularPointReport],
                                samples: ProfileTrace | Sequence[CurveSample] | None = None
                                ) -> list[dict]:
    """One annotation per singular ring: its parameter, label and nearest ring."""
    t = None if samples is None else _columns(samples)["t"]
    out = []
    for r in reports:
        note = {"t": r.p, "label": r.cusp_class.edge_label,
                "cusp": r.cusp_class.value, "front": r.is_front}
        if t is not None:
            note["ring"] = int(np.argmin(np.abs(t - r.p)))
        out.append(note)
    return out


def _cot(vx: np.ndarray, p1: np.ndarray, p2: np.ndarray) -> np.ndarray:
    """Cotangent of the angle at ``vx`` in triangles (vx, p1, p2)."""
    u = p1 - vx
    w = p2 - vx
    return np.einsum("ij,ij->i", u, w) / np.linalg.norm(np.cross(u, w), axis=1)


def discrete_mean_curvature(mesh: Mesh) -> np.ndarray:
    """Cotangent-Laplacian mean curvature per vertex, signed by ``nu``.

    Uses H = (Delta s . nu) / 2 with the mixed Voronoi area of Meyer et al.;
    boundary rings get NaN.
    """
    V, Fc = mesh.vertices, mesh.faces
    P = V[Fc]
    lap = np.zeros_like(V)
    area = np.zeros(len(V))
    dots = [np.einsum("ij,ij->i", P[:, (k + 1) % 3] - P[:, k], P[:, (k + 2) % 3] - P[:, k])
            for k in range(3)]
    obtuse = (dots[0] < 0) | (dots[1] < 0) | (dots[2] < 0)
    tri_area = 0.5 * np.linalg.norm(np.cross(P[:, 1] - P[:, 0], P[:, 2] - P[:, 0]), axis=1)
    for k in range(3):
        k1, k2 = (k + 1) % 3, (k + 2) % 3
        # edge (k1, k2) weighted by the cotangent of the opposite angle at k
        cot = _cot(P[:, k], P[:, k1], P[:, k2])
        e = P[:, k2] - P[:, k1]
        np.add.at(lap, Fc[:, k1], 0.5 * cot[:, None] * e)
        np.add.at(lap, Fc[:, k2], -0.5 * cot[:, None] * e)
        a = P[:, k1] - P[:, k]
        b = P[:, k2] - P[:, k]
        voronoi = (np.einsum("ij,ij->i", b, b) * _cot(P[:, k1], P[:, k], P[:, k2])
                   + np.einsum("ij,ij->i", a, a) * _cot(P[:, k2], P[:, k], P[:, k1])) / 8.0
        mixed = np.where(~obtuse, voronoi,
                         np.where(dots[k] < 0, tri_area / 2.0, tri_area / 4.0))
        np.add.at(area, Fc[:, k], mixed)
    H = 0.5 * np.einsum("ij,ij->i", lap, mesh.normals) / area
    H = H.reshape(mesh.n_rings, mesh.n_theta)
    H[0] = np.nan
    H[-1] = np.nan
    return H.reshape(-1)


def _fmt(v: float) -> str:
    return repr(float(v))


def to_obj(mesh: Mesh) -> str:
    """Wavefront OBJ text: t-major, theta-minor vertices with normals."""
    buf = io.StringIO()
    buf.write("# surface of revolution\n")
    buf.write(f"# rings {mesh.n_rings} theta {mesh.n_theta}\n")
    for note in mesh.annotations:
        ring = note.get("ring", "")
        buf.write(f"# singular ring {ring} t={_fmt(note['t'])}: {note['label']}\n")
    for x, y, z in mesh.vertices:
        buf.write(f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}\n")
    for x, y, z in mesh.normals:
        buf.write(f"vn {_fmt(x)} {_fmt(y)} {_fmt(z)}\n")
    for a, b, c in mesh.faces + 1:
        buf.write(f"f {a}//{a} {b}//{b} {c}//{c}\n")
    return buf.getvalue()


def write_obj(mesh: Mesh, path: str | Path) -> None:
    Path(path).write_text(to_obj(mesh), encoding="ascii")
