"""Strut-lattice unit cell catalog, tessellation, and periodicity map.

Each topology is a graph of straight circular struts inside the cubic cell
[0, cell_size]^3.  Coordinates are dyadic fractions of the cell edge, so node
positions and face tests are exact in floating point.  The honeycomb
topologies are 2D wall graphs extruded through the cell: the in-plane pattern
is repeated at the bottom, mid, and top layers and vertical struts run
through every pattern vertex.

The periodicity map records, for every node on a max face of the bounding
box, the index of its image node on the opposite face(s) together with the
integer cell offset, which is what the homogenization solver needs to tie
opposite faces together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DensityError, GeometryError, UnknownTopologyError


class Topology(Enum):
    """Catalog of supported unit-cell topologies; values are display labels."""

    SIMPLE_CUBIC = "Simple Cubic"
    BODY_CENTRED_CUBIC = "Body Centred Cubic"
    FACE_CENTRED_CUBIC = "Face Centred Cubic"
    OCTET = "Octet"
    DIAMOND = "Diamond"
    KELVIN_CELL = "Kelvin Cell"
    ISO_TRUSS = "Iso Truss"
    FCC_FOAM = "FCC Foam"
    HEXAGONAL_HONEYCOMB = "Hexagonal Honeycomb"
    TRIANGULAR_HONEYCOMB = "Triangular Honeycomb"
    RE_ENTRANT_HONEYCOMB = "Re entrant Honeycomb"

    @property
    def label(self) -> str:
        return self.value

    @classmethod
    def from_string(cls, name: str) -> "Topology":
        """Accept the display label or a snake_case identifier."""
        for topo in cls:
            if name == topo.value or name == topo.name.lower():
                return topo
        raise UnknownTopologyError(name, [t.name.lower() for t in cls])


@dataclass(frozen=True)
class TessellationSpec:
    """Number of unit-cell repetitions along each axis."""

    nx: int = 2
    ny: int = 2
    nz: int = 2

    def __post_init__(self):
        if min(self.nx, self.ny, self.nz) < 1:
            raise GeometryError("tessellation counts must be >= 1")


@dataclass(frozen=True)
class LatticeGraph:
    """Strut graph with geometry and its periodic boundary pairing.

    nodes        (n, 3) coordinates in mm
    struts       (m, 2) node index pairs, i < j, unique
    cell_size    edge length of one unit cell in mm
    strut_diameter  circular strut diameter in mm
    dims         unit-cell repetitions (nx, ny, nz) this graph spans
    periodicity  tuple of (node, image, (kx, ky, kz)) entries meaning
                 nodes[node] == nodes[image] + (kx*Lx, ky*Ly, kz*Lz)
    """

    nodes: np.ndarray
    struts: np.ndarray
    cell_size: float
    strut_diameter: float
    dims: tuple = (1, 1, 1)
    periodicity: tuple = field(default_factory=tuple)

    @property
    def box(self) -> np.ndarray:
        """Bounding box edge lengths (Lx, Ly, Lz) in mm."""
        return self.cell_size * np.array(self.dims, dtype=float)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_struts(self) -> int:
        return len(self.struts)

    def strut_lengths(self) -> np.ndarray:
        d = self.nodes[self.struts[:, 1]] - self.nodes[self.struts[:, 0]]
        return np.linalg.norm(d, axis=1)

    def to_json_dict(self) -> dict:
        return {
            "cell_size": self.cell_size,
            "strut_diameter": self.strut_diameter,
            "nodes": [[float(c) for c in p] for p in self.nodes],
            "struts": [[int(i), int(j)] for i, j in self.struts],
        }


# Unit-coordinate point sets reused by several topologies.
_CORNERS = [(x, y, z) for x in (0.0, 1.0) for y in (0.0, 1.0) for z in (0.0, 1.0)]
_FACE_CENTERS = [
    (0.0, 0.5, 0.5), (1.0, 0.5, 0.5),
    (0.5, 0.0, 0.5), (0.5, 1.0, 0.5),
    (0.5, 0.5, 0.0), (0.5, 0.5, 1.0),
]


def _pairs_at_distance(points, dist, tol=1e-9):
    """All unordered point-index pairs separated by exactly ``dist``."""
    out = []
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            d = math.dist(points[i], points[j])
            if abs(d - dist) < tol:
                out.append((i, j))
    return out


def _simple_cubic():
    nodes = list(_CORNERS)
    struts = _pairs_at_distance(nodes, 1.0)
    return nodes, struts


def _body_centred_cubic():
    nodes = list(_CORNERS) + [(0.5, 0.5, 0.5)]
    c = len(nodes) - 1
    struts = [(i, c) for i in range(8)]
    return nodes, struts


def _face_centred_cubic():
    nodes = list(_CORNERS) + list(_FACE_CENTERS)
    # Corner-to-face-centre struts only: every pair at half a face diagonal.
    struts = []
    for i in range(8):
        for j in range(8, 14):
            if abs(math.dist(nodes[i], nodes[j]) - math.sqrt(0.5)) < 1e-9:
                struts.append((i, j))
    return nodes, struts


def _octet():
    nodes = list(_CORNERS) + list(_FACE_CENTERS)
    # Full nearest-neighbour graph of the 14 close-packed sites.
    struts = _pairs_at_distance(nodes, math.sqrt(0.5))
    return nodes, struts


def _diamond():
    # Tetrahedral bond network.  Only the even corners carry bonds inside
    # this cell; the odd corners' bonds live in neighbouring cells and are
    # recovered by the periodic pairing, so they are not nodes here.
    even_corners = [c for c in _CORNERS if (c[0] + c[1] + c[2]) % 2 == 0]
    interior = [(0.25, 0.25, 0.25), (0.75, 0.75, 0.25),
                (0.75, 0.25, 0.75), (0.25, 0.75, 0.75)]
    nodes = even_corners + list(_FACE_CENTERS) + interior
    struts = []
    for t in range(10, 14):
        for j in range(10):
            if abs(math.dist(nodes[t], nodes[j]) - math.sqrt(3.0) / 4.0) < 1e-9:
                struts.append((j, t))
    return nodes, struts


def _kelvin_cell():
    # Truncated-octahedron vertices: centre + permutations of (0, +-1/4, +-1/2).
    base = []
    for perm in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (2, 0, 1), (1, 2, 0), (2, 1, 0)):
        for sa in (0.25, -0.25):
            for sb in (0.5, -0.5):
                v = [0.0, 0.0, 0.0]
                v[perm.index(0)] = 0.0
                v[perm.index(1)] = sa
                v[perm.index(2)] = sb
                base.append(tuple(0.5 + c for c in v))
    nodes = sorted(set(base))
    struts = _pairs_at_distance(nodes, math.sqrt(0.125))
    return nodes, struts


def _iso_truss():
    nodes = list(_CORNERS) + list(_FACE_CENTERS) + [(0.5, 0.5, 0.5)]
    c = len(nodes) - 1
    struts = [(i, c) for i in range(14)]
    return nodes, struts


def _fcc_foam():
    # Rhombic-dodecahedron edge skeleton: 6 face centres + 8 interior sites.
    interior = [(x, y, z) for x in (0.25, 0.75) for y in (0.25, 0.75) for z in (0.25, 0.75)]
    nodes = list(_FACE_CENTERS) + interior
    struts = []
    for j in range(6, 14):
        for i in range(6):
            if abs(math.dist(nodes[i], nodes[j]) - math.sqrt(0.1875)) < 1e-9:
                struts.append((i, j))
    return nodes, struts


def _extrude_walls(points2d, struts2d):
    """Repeat a 2D wall pattern at z = 0, 1/2, 1 and add vertical struts."""
    nodes = []
    for z in (0.0, 0.5, 1.0):
        nodes.extend((x, y, z) for x, y in points2d)
    n2 = len(points2d)
    struts = []
    for layer in range(3):
        off = layer * n2
        struts.extend((off + i, off + j) for i, j in struts2d)
    for i in range(n2):
        struts.append((i, n2 + i))
        struts.append((n2 + i, 2 * n2 + i))
    return nodes, struts


def _row(points2d, struts2d, y, xs):
    """Append a horizontal chain of wall segments to a 2D pattern."""
    start = len(points2d)
    points2d.extend((x, y) for x in xs)
    struts2d.extend((start + k, start + k + 1) for k in range(len(xs) - 1))
    return {x: start + k for k, x in enumerate(xs)}


def _hexagonal_honeycomb():
    # Staggered-wall pattern: three full courses, joints alternating
    # between x = 1/4 (lower band) and x = 3/4 (upper band).
    pts, st = [], []
    bot = _row(pts, st, 0.0, (0.0, 0.25, 0.75, 1.0))
    mid = _row(pts, st, 0.5, (0.0, 0.25, 0.75, 1.0))
    top = _row(pts, st, 1.0, (0.0, 0.25, 0.75, 1.0))
    st.append((bot[0.25], mid[0.25]))
    st.append((mid[0.75], top[0.75]))
    return _extrude_walls(pts, st)


def _triangular_honeycomb():
    # Fully triangulated 2x2 grid: axis-aligned walls plus centre diagonals.
    pts, st = [], []
    rows = [_row(pts, st, y, (0.0, 0.5, 1.0)) for y in (0.0, 0.5, 1.0)]
    for x in (0.0, 0.5, 1.0):
        for k in range(2):
            st.append((rows[k][x], rows[k + 1][x]))
    for cx in (0.25, 0.75):
        for cy in (0.25, 0.75):
            c = len(pts)
            pts.append((cx, cy))
            for dx in (-0.25, 0.25):
                for dy in (-0.25, 0.25):
                    corner = (cx + dx, cy + dy)
                    row = rows[{0.0: 0, 0.5: 1, 1.0: 2}[corner[1]]]
                    st.append((row[corner[0]], c))
    return _extrude_walls(pts, st)


def _re_entrant_honeycomb():
    # Courses like the hexagonal pattern but each joint is a pair of
    # inward-slanted struts, giving the re-entrant (bow-tie) cell shape.
    pts, st = [], []
    band_xs = (0.0, 0.125, 0.375, 0.625, 0.875, 1.0)
    bot = _row(pts, st, 0.0, band_xs)
    mid = _row(pts, st, 0.5, (0.0, 0.25, 0.75, 1.0))
    top = _row(pts, st, 1.0, band_xs)
    st.append((bot[0.125], mid[0.25]))
    st.append((bot[0.375], mid[0.25]))
    st.append((top[0.625], mid[0.75]))
    st.append((top[0.875], mid[0.75]))
    return _extrude_walls(pts, st)


_BUILDERS = {
    Topology.SIMPLE_CUBIC: _simple_cubic,
    Topology.BODY_CENTRED_CUBIC: _body_centred_cubic,
    Topology.FACE_CENTRED_CUBIC: _face_centred_cubic,
    Topology.OCTET: _octet,
    Topology.DIAMOND: _diamond,
    Topology.KELVIN_CELL: _kelvin_cell,
    Topology.ISO_TRUSS: _iso_truss,
    Topology.FCC_FOAM: _fcc_foam,
    Topology.HEXAGONAL_HONEYCOMB: _hexagonal_honeycomb,
    Topology.TRIANGULAR_HONEYCOMB: _triangular_honeycomb,
    Topology.RE_ENTRANT_HONEYCOMB: _re_entrant_honeycomb,
}

DEFAULT_CELL_SIZE = 5.0


def _merge_tol(cell_size: float) -> float:
    return 1e-9 * cell_size


def build_periodicity(nodes: np.ndarray, box) -> tuple:
    """Pair every max-face node with its image on the opposite min face(s).

    Returns entries (node, image, (kx, ky, kz)) with k in {0, 1} per axis.
    Raises GeometryError when a face node has no opposite image, i.e. the
    graph is not periodic.
    """
    box = np.asarray(box, dtype=float)
    tol = 1e-9 * float(max(box))
    index = {}
    for i, p in enumerate(nodes):
        index[tuple(round(c / tol) for c in p)] = i
    entries = []
    on_min_face = [False] * len(nodes)
    paired = set()
    for i, p in enumerate(nodes):
        k = [0, 0, 0]
        canon = list(p)
        for ax in range(3):
            if abs(p[ax] - box[ax]) < tol:
                k[ax] = 1
                canon[ax] = 0.0
            elif abs(p[ax]) < tol:
                on_min_face[i] = True
        if k == [0, 0, 0]:
            continue
        key = tuple(round(c / tol) for c in canon)
        if key not in index:
            raise GeometryError(
                f"node {i} at {tuple(p)} has no periodic image on the opposite face"
            )
        master = index[key]
        entries.append((i, master, tuple(k)))
        paired.add(master)
        paired.add(i)
    for i, p in enumerate(nodes):
        if on_min_face[i] and i not in paired:
            raise GeometryError(
                f"min-face node {i} at {tuple(p)} is never referenced by an "
                "opposite-face image; cell is not periodic"
            )
    return tuple(entries)


def build_unit_cell(topology: Topology, thickness: float,
                    cell_size: float = DEFAULT_CELL_SIZE) -> LatticeGraph:
    """Instantiate one unit cell of ``topology``.

    ``thickness`` is the circular strut diameter in mm; ``cell_size`` the
    cell edge length in mm.
    """
    if not isinstance(topology, Topology):
        topology = Topology.from_string(str(topology))
    if thickness <= 0 or cell_size <= 0:
        raise GeometryError("thickness and cell_size must be positive")
    unit_nodes, unit_struts = _BUILDERS[topology]()
    nodes = np.array(unit_nodes, dtype=float) * cell_size
    struts = np.array(sorted({(min(i, j), max(i, j)) for i, j in unit_struts}),
                      dtype=np.int64)
    graph = LatticeGraph(
        nodes=nodes,
        struts=struts,
        cell_size=float(cell_size),
        strut_diameter=float(thickness),
        dims=(1, 1, 1),
        periodicity=build_periodicity(nodes, (cell_size,) * 3),
    )
    validate_graph(graph)
    return graph


def tessellate(graph: LatticeGraph, spec: TessellationSpec = TessellationSpec()) -> LatticeGraph:
    """Repeat ``graph`` spec.nx x spec.ny x spec.nz times, merging shared nodes.

    Copies are placed in x-major order; nodes within the merge tolerance
    (1e-9 of the cell size) collapse to the first occurrence and duplicate
    struts on shared faces are dropped.
    """
    if graph.dims != (1, 1, 1):
        raise GeometryError("tessellate expects a single unit cell")
    tol = _merge_tol(graph.cell_size)
    L = graph.cell_size
    merged_nodes = []
    index = {}
    struts = set()
    for ix in range(spec.nx):
        for iy in range(spec.ny):
            for iz in range(spec.nz):
                offset = np.array([ix, iy, iz], dtype=float) * L
                local = []
                for p in graph.nodes + offset:
                    key = tuple(round(c / tol) for c in p)
                    if key not in index:
                        index[key] = len(merged_nodes)
                        merged_nodes.append(p)
                    local.append(index[key])
                for i, j in graph.struts:
                    a, b = local[i], local[j]
                    if a == b:
                        raise GeometryError("strut collapsed during tessellation")
                    struts.add((min(a, b), max(a, b)))
    nodes = np.array(merged_nodes, dtype=float)
    dims = (spec.nx, spec.ny, spec.nz)
    out = LatticeGraph(
        nodes=nodes,
        struts=np.array(sorted(struts), dtype=np.int64),
        cell_size=graph.cell_size,
        strut_diameter=graph.strut_diameter,
        dims=dims,
        periodicity=build_periodicity(nodes, L * np.array(dims, dtype=float)),
    )
    validate_graph(out)
    return out


def validate_graph(graph: LatticeGraph) -> None:
    """Check geometric invariants; raises GeometryError on violation."""
    box = graph.box
    tol = _merge_tol(graph.cell_size)
    if graph.n_nodes == 0 or graph.n_struts == 0:
        raise GeometryError("graph has no nodes or no struts")
    if (graph.nodes < -tol).any() or (graph.nodes > box + tol).any():
        raise GeometryError("node coordinates fall outside the bounding box")
    s = graph.struts
    if (s[:, 0] == s[:, 1]).any():
        raise GeometryError("zero-length strut (identical endpoints)")
    if s.min() < 0 or s.max() >= graph.n_nodes:
        raise GeometryError("strut references a missing node")
    if len({(min(i, j), max(i, j)) for i, j in s}) != len(s):
        raise GeometryError("duplicate struts")
    if (graph.strut_lengths() <= tol).any():
        raise GeometryError("degenerate strut of near-zero length")
    touched = np.zeros(graph.n_nodes, dtype=bool)
    touched[s.ravel()] = True
    if not touched.all():
        raise GeometryError("isolated node without any strut")
    # Periodicity entries must close exactly up to tolerance.
    for node, image, k in graph.periodicity:
        want = graph.nodes[image] + np.array(k, dtype=float) * box
        if np.abs(graph.nodes[node] - want).max() > tol:
            raise GeometryError("periodicity entry does not match coordinates")


def periodic_unique_struts(graph: LatticeGraph) -> np.ndarray:
    """Indices of struts that are not periodic translates of another strut.

    A strut whose endpoints both sit on max faces is the image of a strut
    near the opposite min face(s); the infinite periodic medium contains
    that strut only once per period, so duplicates must carry no stiffness
    in a periodic solve.  A strut is dropped when translating it by the
    common part of its endpoints' cell offsets lands on an existing strut.
    """
    box = graph.box
    tol = _merge_tol(graph.cell_size)
    offset = {node: np.array(k, dtype=float) for node, _, k in graph.periodicity}
    index = {tuple(round(c / tol) for c in p): i for i, p in enumerate(graph.nodes)}
    strut_set = {(int(i), int(j)) for i, j in graph.struts}
    zero = np.zeros(3)
    keep = []
    for s, (i, j) in enumerate(graph.struts):
        ki = offset.get(int(i), zero)
        kj = offset.get(int(j), zero)
        k_common = np.minimum(ki, kj)
        if not k_common.any():
            keep.append(s)
            continue
        shift = k_common * box
        try:
            a = index[tuple(round(c / tol) for c in graph.nodes[i] - shift)]
            b = index[tuple(round(c / tol) for c in graph.nodes[j] - shift)]
        except KeyError:
            keep.append(s)
            continue
        if (min(a, b), max(a, b)) not in strut_set:
            keep.append(s)
    return np.array(keep, dtype=np.int64)


def relative_density(graph: LatticeGraph) -> float:
    """Solid volume fraction: sum of cylinder volumes over the box volume.

    Strut overlaps at joints are not corrected, so the value overestimates
    slightly at large diameters; a value >= 1 is rejected as non-physical.
    """
    area = math.pi * graph.strut_diameter ** 2 / 4.0
    volume = float(np.sum(graph.strut_lengths()) * area)
    rho = volume / float(np.prod(graph.box))
    if rho >= 1.0:
        raise DensityError(
            f"relative density {rho:.3f} >= 1; struts fill the whole cell"
        )
    return rho
