"""SVG slices and boundary-surface meshes (OBJ, binary PLY)."""
from __future__ import annotations

import io
import math
import struct
from dataclasses import dataclass

import numpy as np

from .boundary import IntersectionPattern, PlaneChart, _align, ruling_lift
from .frenet import TWO_PI, FrenetCurve, Transformed
from .projlin import Chart

VIEW = 1000.0
PAD = 50.0


# slices

def _chart_from(B: np.ndarray, k: np.ndarray) -> PlaneChart:
    k = k / np.linalg.norm(k)
    q, _ = np.linalg.qr(np.column_stack([k, np.eye(3)]))
    return PlaneChart(B, k, q[:, 1:3])


def plane_chart(pat: IntersectionPattern, chart: Chart) -> tuple[PlaneChart, bool]:
    """Restriction of a chart of RP^3 to the slicing plane.

    When that sends a singular point to infinity (its marker could not be drawn) the
    pattern's own chart is tried, then one normalizing every singular point; the flag
    tells whether the selected chart survived.
    """
    B = pat.plane.basis
    S = np.array([p.v for p, _, _ in pat.singular_points]).reshape(-1, 4) @ B
    S = S / np.linalg.norm(S, axis=1, keepdims=True) if len(S) else S

    def finite(ch: PlaneChart) -> bool:
        return not len(S) or float(np.min(np.abs(S @ ch.k))) > 1e-3

    k = B.T @ chart.covector
    if np.linalg.norm(k) > 1e-9:
        ch = _chart_from(B, k)
        if finite(ch):
            return ch, True
    ch = pat.chart()
    if finite(ch):
        return ch, False
    return _chart_from(B, np.linalg.lstsq(S, np.ones(len(S)), rcond=None)[0]), False


def _pieces(ch: PlaneChart, V: np.ndarray, eps: float = 1e-3) -> list[np.ndarray]:
    """Affine polylines of a sampled curve, broken where it runs off to infinity."""
    V = _align(V)
    pair = ch.pairing(V)
    ok = np.abs(pair) > eps
    out, cur, sgn = [], [], 0.0
    for v, good, p in zip(V, ok, pair):
        if not good or (cur and np.sign(p) != sgn):
            if len(cur) > 1:
                out.append(np.array(cur))
            cur = []
            if not good:
                continue
        sgn = np.sign(p)
        cur.append(ch.coords(v[None])[0])
    if len(cur) > 1:
        out.append(np.array(cur))
    return out


@dataclass
class _Frame:
    scale: float
    cx: float
    cy: float

    def __call__(self, P: np.ndarray) -> np.ndarray:
        P = np.atleast_2d(P)
        x = VIEW / 2 + self.scale * (P[:, 0] - self.cx)
        y = VIEW / 2 - self.scale * (P[:, 1] - self.cy)
        return np.column_stack([x, y])


def _fit(points: np.ndarray) -> _Frame:
    lo = np.quantile(points, 0.01, axis=0)
    hi = np.quantile(points, 0.99, axis=0)
    span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-9))
    c = 0.5 * (lo + hi)
    return _Frame((VIEW - 2 * PAD) / span, float(c[0]), float(c[1]))


def _fmt(P: np.ndarray) -> str:
    P = np.clip(P, -1e6, 1e6)
    return " L ".join(f"{x:.3f} {y:.3f}" for x, y in P)


def slice_svg(pat: IntersectionPattern, chart: Chart | None = None, title: str = "") -> str:
    """One path per arc (class arc) and per line (class line), markers per singular point."""
    ch, selected = plane_chart(pat, chart or Chart.default())
    arcs = [_pieces(ch, a.samples) for a in pat.arcs]
    pts = [p for pieces in arcs for p in pieces]
    frame = _fit(np.vstack(pts)) if pts else _Frame(1.0, 0.0, 0.0)
    out = io.StringIO()
    out.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    out.write(f"<!-- {title} scale={frame.scale:.9g} center=({frame.cx:.9g},{frame.cy:.9g}) "
              f"chart={np.round(ch.basis @ ch.k, 12).tolist()}"
              f"{'' if selected else ' (own chart of the slice)'} -->\n")
    out.write(f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {VIEW:g} {VIEW:g}" '
              f'width="{VIEW:g}" height="{VIEW:g}">\n')
    out.write("<style>.arc{fill:none;stroke:#1f4e9c;stroke-width:2}"
              ".line{fill:none;stroke:#888;stroke-width:1.5;stroke-dasharray:6 4}"
              ".cusp{fill:#c0392b}.c1x{fill:#27ae60}</style>\n")
    for i, pieces in enumerate(arcs):
        d = " ".join("M " + _fmt(frame(p)) for p in pieces)
        out.write(f'<path class="arc" id="arc{i}" d="{d}"/>\n')
    for i, line in enumerate(pat.lines):
        # the line is straight in the chart; draw it across twice the view
        t = np.linspace(0.0, math.pi, 721)
        L = np.outer(np.cos(t), line.basis[:, 0]) + np.outer(np.sin(t), line.basis[:, 1])
        pieces = _pieces(ch, L)
        segs = []
        for p in pieces:
            q = frame(p)
            inside = np.all(np.abs(q - VIEW / 2) < VIEW, axis=1)
            if inside.sum() > 1:
                segs.append(q[inside][[0, -1]])
        d = " ".join("M " + _fmt(s) for s in segs)
        out.write(f'<path class="line" id="line{i}" d="{d}"/>\n')
    for p, kind, _ in pat.singular_points:
        cls = {"BalancedCusp": "cusp", "C1Crossing": "c1x"}.get(kind.kind)
        if cls is None or abs(ch.pairing(p.v[None])[0]) < 1e-9:
            continue
        x, y = frame(ch.coords(p.v[None]))[0]
        out.write(f'<circle class="{cls}" cx="{x:.3f}" cy="{y:.3f}" r="6"/>\n')
    out.write("</svg>\n")
    return out.getvalue()


# meshes

@dataclass
class Mesh:
    vertices: np.ndarray  # (N, 3) chart coordinates
    triangles: np.ndarray  # (M, 3) vertex indices
    near_curve: np.ndarray  # (N,) vertex lies within a grid step of the curve itself
    homogeneous: np.ndarray  # (N, 4) unit representatives

    def obj(self) -> str:
        out = io.StringIO()
        for x, y, z in self.vertices:
            out.write(f"v {x!r} {y!r} {z!r}\n")
        for i, j, k in self.triangles + 1:
            out.write(f"f {i} {j} {k}\n")
        return out.getvalue()

    def ply(self) -> bytes:
        head = ("ply\nformat binary_little_endian 1.0\n"
                f"element vertex {len(self.vertices)}\n"
                "property double x\nproperty double y\nproperty double z\n"
                f"element face {len(self.triangles)}\n"
                "property list uchar int vertex_indices\nend_header\n").encode("ascii")
        body = np.ascontiguousarray(self.vertices, dtype="<f8").tobytes()
        faces = np.empty(len(self.triangles), dtype=[("n", "u1"), ("idx", "<i4", (3,))])
        faces["n"] = 3
        faces["idx"] = self.triangles
        return head + body + faces.tobytes()


def grid_params(n: int) -> np.ndarray:
    """Cell-centred circle parameters, keeping clear of the special values 0 and pi."""
    return TWO_PI * (np.arange(n) + 0.5) / n


def boundary_grid(curve: FrenetCurve, n: int) -> np.ndarray:
    """(x, y) -> xi^2(x) meet xi^3(y) on an n x n grid, row x, column y, unit rows."""
    base = curve.base if isinstance(curve, Transformed) else curve
    if base.lift is None or base.ambient_dim != 4:
        raise ValueError("meshes need an analytic curve in RP^3")
    th = grid_params(n)
    H = np.vstack([_align(ruling_lift(base, float(x))(th)) for x in th])
    if isinstance(curve, Transformed):
        H = H @ curve.g.T
    return H / np.linalg.norm(H, axis=1, keepdims=True)


def boundary_mesh(curve: FrenetCurve, n: int, chart: Chart | None = None) -> Mesh:
    chart = chart or Chart.default()
    H = boundary_grid(curve, n)
    H = H * np.where(H @ chart.covector < 0, -1.0, 1.0)[:, None]
    V = chart.coords(H)
    idx = np.arange(n * n).reshape(n, n)
    a = idx
    b = np.roll(idx, -1, axis=0)
    c = np.roll(np.roll(idx, -1, axis=0), -1, axis=1)
    d = np.roll(idx, -1, axis=1)
    tri = np.concatenate([np.stack([a, b, c], -1).reshape(-1, 3),
                          np.stack([a, c, d], -1).reshape(-1, 3)]) if n > 1 else np.zeros((0, 3), int)
    th = grid_params(n)
    gap = np.abs(th[:, None] - th[None, :])
    gap = np.minimum(gap, TWO_PI - gap)
    near = (gap <= TWO_PI / n + 1e-12).reshape(-1)
    return Mesh(V, tri.astype(np.int64), near, H)


def mesh_F_residual(mesh: Mesh) -> np.ndarray:
    """|F| at each vertex, F the discriminant in the leading-coefficient chart."""
    from .domains import surface_F

    x, y, z = mesh.vertices.T
    return np.abs(surface_F(x, y, z))


def mesh_unit_residual(mesh: Mesh) -> np.ndarray:
    """The same residual on unit homogeneous representatives, free of the chart's scale."""
    from .kernels import discriminant

    return np.abs(discriminant(mesh.homogeneous))


def leaves_svg(leaves, chart: Chart | None = None, title: str = "") -> str:
    """Leaves drawn in the first two coordinates of the chart, endpoints as markers."""
    chart = chart or Chart.default()
    polys, ends = [], []
    for lf in leaves:
        V = _align(lf.samples)
        ok = np.abs(V @ chart.covector) > 1e-9
        polys.append(chart.coords(V[ok])[:, :2])
        for p, _ in lf.endpoints:
            p = np.asarray(p, float)
            if abs(p @ chart.covector) > 1e-9:
                ends.append(chart.coords(p[None])[0, :2])
    pts = [p for p in polys if len(p)] + ([np.array(ends)] if ends else [])
    frame = _fit(np.vstack(pts)) if pts else _Frame(1.0, 0.0, 0.0)
    out = io.StringIO()
    out.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    out.write(f"<!-- {title} scale={frame.scale:.9g} center=({frame.cx:.9g},{frame.cy:.9g}) "
              f"chart={chart.covector.tolist()} projection=xy -->\n")
    out.write(f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {VIEW:g} {VIEW:g}" '
              f'width="{VIEW:g}" height="{VIEW:g}">\n')
    out.write("<style>.leaf{fill:none;stroke:#1f4e9c;stroke-width:2}.end{fill:#c0392b}</style>\n")
    for i, P in enumerate(polys):
        if len(P) > 1:
            out.write(f'<path class="leaf" id="leaf{i}" d="M {_fmt(frame(P))}"/>\n')
    for x, y in frame(np.array(ends)) if ends else []:
        out.write(f'<circle class="end" cx="{x:.3f}" cy="{y:.3f}" r="5"/>\n')
    out.write("</svg>\n")
    return out.getvalue()


def write_bytes(path, data) -> None:
    mode = "wb" if isinstance(data, (bytes, bytearray)) else "w"
    with open(path, mode) as fh:
        fh.write(data)


def unpack_ply_vertices(data: bytes) -> np.ndarray:
    """Vertices of a binary PLY written by ``Mesh.ply`` (for round-trip checks)."""
    end = data.index(b"end_header\n") + len(b"end_header\n")
    header = data[:end].decode("ascii")
    nv = int(next(l.split()[-1] for l in header.splitlines() if l.startswith("element vertex")))
    return np.array(struct.unpack_from(f"<{3 * nv}d", data, end)).reshape(nv, 3)
