"""Effective elastic stiffness of periodic strut lattices.

The lattice is modelled as a frame of beam elements.  Six independent
macroscopic strain cases are applied through periodic boundary conditions:
paired nodes on opposite faces are forced to satisfy

    u_plus - u_minus = eps_bar . (x_plus - x_minus),   theta_plus = theta_minus

where eps_bar is the (tensor) macroscopic strain of the load case.  The
constraints are eliminated master-slave, one node's translations are pinned
to remove rigid translation, and the reduced symmetric system is solved by
direct sparse factorization (one factorization, six right-hand sides).

Because the response is linear in eps_bar, the solution of a combined case
is the sum of unit-case solutions, so the full stiffness follows from the
energy inner products of the six unit fields:

    C[p, q] = u_p^T K u_q / V

with V the bounding-box volume.  This is the energy method with case
superposition; the resulting C is symmetric by construction.

Voigt order is (11, 22, 33, 12, 13, 23) with engineering shear angles, so
a unit shear case gamma_12 = 1 means tensor strain eps_12 = 1/2 and the
diagonal entry C[3, 3] equals the shear modulus G_xy of the homogenized
medium.  Units: moduli in GPa, lengths in mm, hence C in GPa.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import MechanismError, NumericalError, SingularStiffnessError
from .frame import DOF_PER_NODE, assemble_stiffness, circular_section
from .lattice import (LatticeGraph, TessellationSpec, Topology,
                      build_unit_cell, periodic_unique_struts,
                      relative_density, tessellate, validate_graph)

VOIGT_COMPONENTS = ((0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2))


@dataclass(frozen=True)
class Material:
    """Isotropic parent alloy: E in GPa, Poisson ratio, k in W/(m K)."""

    young_modulus: float
    poisson_ratio: float
    conductivity: float = 0.0

    def __post_init__(self):
        if self.young_modulus <= 0:
            raise ValueError("young_modulus must be positive")
        if not -1.0 < self.poisson_ratio < 0.5:
            raise ValueError("poisson_ratio must lie in (-1, 0.5)")


INCONEL_625 = Material(208.0, 0.28, 9.7)
TI_6AL_4V = Material(138.8, 0.342, 6.7)


def strain_tensor(case: int) -> np.ndarray:
    """Macroscopic strain tensor for unit Voigt case ``case`` (0..5).

    Normal cases are unit stretches; shear cases are unit engineering
    shear angles, i.e. tensor components of 1/2.
    """
    i, j = VOIGT_COMPONENTS[case]
    eps = np.zeros((3, 3))
    if i == j:
        eps[i, i] = 1.0
    else:
        eps[i, j] = eps[j, i] = 0.5
    return eps


@dataclass(frozen=True)
class EngineeringConstants:
    """Directional engineering constants extracted from the compliance."""

    ex: float
    ey: float
    ez: float
    gxy: float
    gxz: float
    gyz: float
    nu_xy: float
    nu_xz: float
    nu_yz: float

    def to_json_dict(self) -> dict:
        return {
            "Ex": self.ex, "Ey": self.ey, "Ez": self.ez,
            "Gxy": self.gxy, "Gxz": self.gxz, "Gyz": self.gyz,
            "nu_xy": self.nu_xy, "nu_xz": self.nu_xz, "nu_yz": self.nu_yz,
        }


@dataclass(frozen=True)
class HomogenizationResult:
    topology: Topology
    thickness: float
    cell_size: float
    material: Material
    stiffness: np.ndarray
    engineering: EngineeringConstants
    relative_density: float

    def to_json_dict(self) -> dict:
        return {
            "topology": self.topology.label,
            "thickness_mm": self.thickness,
            "cell_size_mm": self.cell_size,
            "material": {
                "E": self.material.young_modulus,
                "nu": self.material.poisson_ratio,
                "k": self.material.conductivity,
            },
            "C": [[float(v) for v in row] for row in self.stiffness],
            "engineering": self.engineering.to_json_dict(),
            "relative_density": self.relative_density,
        }


def _check_connected(graph: LatticeGraph) -> None:
    """The frame must be one component once periodic pairs are identified."""
    parent = list(range(graph.n_nodes))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for i, j in graph.struts:
        union(int(i), int(j))
    for node, image, _ in graph.periodicity:
        union(int(node), int(image))
    roots = {find(i) for i in range(graph.n_nodes)}
    if len(roots) != 1:
        raise MechanismError(
            f"lattice splits into {len(roots)} disconnected components"
        )


def _constraint_operator(graph: LatticeGraph):
    """Master-slave elimination operator for the periodic constraints.

    Returns (T, offsets, slave_translation_rows):
      T        sparse (ndof, nred) selection matrix, full DOF = T u_red + g
      builder  callable mapping a strain tensor to the affine offset g
    The first retained (non-slave) node has its translations pinned.
    """
    n = graph.n_nodes
    ndof = n * DOF_PER_NODE
    box = graph.box
    master_of = {}
    for node, image, k in graph.periodicity:
        master_of[node] = (image, np.asarray(k, dtype=float) * box)

    pin = next(i for i in range(n) if i not in master_of)

    red_index = np.full(ndof, -1, dtype=np.int64)
    nred = 0
    for i in range(n):
        if i in master_of:
            continue
        for c in range(DOF_PER_NODE):
            if i == pin and c < 3:
                continue
            red_index[i * DOF_PER_NODE + c] = nred
            nred += 1

    rows, cols = [], []
    # (dof row, master node, offset vector) for slave translations
    slave_rows = []
    for i in range(n):
        if i in master_of:
            m, delta = master_of[i]
            for c in range(DOF_PER_NODE):
                r = red_index[m * DOF_PER_NODE + c]
                if r >= 0:
                    rows.append(i * DOF_PER_NODE + c)
                    cols.append(r)
                if c < 3:
                    slave_rows.append((i * DOF_PER_NODE + c, c, delta))
        else:
            for c in range(DOF_PER_NODE):
                r = red_index[i * DOF_PER_NODE + c]
                if r >= 0:
                    rows.append(i * DOF_PER_NODE + c)
                    cols.append(r)
    T = sp.coo_matrix((np.ones(len(rows)), (rows, cols)),
                      shape=(ndof, nred)).tocsr()

    def offsets(eps: np.ndarray) -> np.ndarray:
        g = np.zeros(ndof)
        for row, comp, delta in slave_rows:
            g[row] = eps[comp] @ delta
        return g

    return T, offsets


def effective_stiffness(graph: LatticeGraph, material: Material) -> np.ndarray:
    """Homogenized 6x6 stiffness matrix of ``graph`` in GPa."""
    validate_graph(graph)
    _check_connected(graph)
    sec = circular_section(graph.strut_diameter, material.young_modulus,
                           material.poisson_ratio)
    # Boundary struts duplicated by the periodic closure carry stiffness
    # exactly once per period.
    struts = graph.struts[periodic_unique_struts(graph)]
    K = assemble_stiffness(graph.nodes, struts, sec)
    T, offsets = _constraint_operator(graph)
    K_red = (T.T @ K @ T).tocsc()
    try:
        solve = spla.factorized(K_red)
    except RuntimeError as exc:
        raise MechanismError(f"singular lattice system: {exc}") from exc

    volume = float(np.prod(graph.box))
    fields = np.empty((K.shape[0], 6))
    for case in range(6):
        g = offsets(strain_tensor(case))
        rhs = -(T.T @ (K @ g))
        u_red = solve(rhs)
        if not np.isfinite(u_red).all():
            raise NumericalError("non-finite displacement solution")
        fields[:, case] = T @ u_red + g

    C = fields.T @ (K @ fields) / volume
    C = 0.5 * (C + C.T)
    if not np.isfinite(C).all():
        raise NumericalError("non-finite stiffness matrix")
    return C


def engineering_constants(C: np.ndarray) -> EngineeringConstants:
    """Directional moduli and Poisson ratios from the compliance S = C^-1."""
    try:
        S = np.linalg.inv(C)
    except np.linalg.LinAlgError as exc:
        raise SingularStiffnessError(
            "effective stiffness is singular; no compliance exists"
        ) from exc
    return EngineeringConstants(
        ex=1.0 / S[0, 0], ey=1.0 / S[1, 1], ez=1.0 / S[2, 2],
        gxy=1.0 / S[3, 3], gxz=1.0 / S[4, 4], gyz=1.0 / S[5, 5],
        nu_xy=-S[1, 0] / S[0, 0],
        nu_xz=-S[2, 0] / S[0, 0],
        nu_yz=-S[2, 1] / S[1, 1],
    )


def homogenize(topology, thickness: float, material: Material,
               cell_size: float = 5.0,
               tessellation: TessellationSpec = TessellationSpec()) -> HomogenizationResult:
    """Build, tessellate, and homogenize one lattice configuration."""
    if not isinstance(topology, Topology):
        topology = Topology.from_string(str(topology))
    cell = build_unit_cell(topology, thickness, cell_size)
    rho = relative_density(cell)
    graph = tessellate(cell, tessellation)
    C = effective_stiffness(graph, material)
    return HomogenizationResult(
        topology=topology,
        thickness=float(thickness),
        cell_size=float(cell_size),
        material=material,
        stiffness=C,
        engineering=engineering_constants(C),
        relative_density=rho,
    )
