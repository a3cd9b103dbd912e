"""3D frame (beam) finite elements for strut lattices.

Each strut is one two-node Euler-Bernoulli beam with 6 degrees of freedom
per node (three translations, three rotations).  Circular cross-sections
make the two bending planes identical, so the orientation of the local
y/z axes around the strut axis has no physical effect; a fixed convention
is still applied so assembled matrices are reproducible bit-for-bit.

Element matrices are built for all struts at once with numpy broadcasting
and scattered into one scipy COO matrix; lattice systems stay far below
10^4 degrees of freedom, so a direct sparse factorization is used later.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

DOF_PER_NODE = 6


@dataclass(frozen=True)
class Section:
    """Circular strut section with material constants (GPa, mm units)."""

    area: float
    inertia_y: float
    inertia_z: float
    torsion: float
    young: float
    shear: float


def circular_section(diameter: float, young: float, poisson: float) -> Section:
    r"""Section constants of a solid circular strut.

    A = pi d^2 / 4, I = pi d^4 / 64 about both bending axes, and the polar
    constant J = pi d^4 / 32; G follows from isotropy, G = E / (2 (1 + nu)).
    """
    if diameter <= 0:
        raise ValueError("strut diameter must be positive")
    area = math.pi * diameter ** 2 / 4.0
    inertia = math.pi * diameter ** 4 / 64.0
    return Section(
        area=area,
        inertia_y=inertia,
        inertia_z=inertia,
        torsion=2.0 * inertia,
        young=young,
        shear=young / (2.0 * (1.0 + poisson)),
    )


def local_stiffness_batch(lengths: np.ndarray, sec: Section) -> np.ndarray:
    """Local 12x12 stiffness for every element, shape (ne, 12, 12)."""
    L = np.asarray(lengths, dtype=float)
    ne = len(L)
    EA = sec.young * sec.area
    EIy = sec.young * sec.inertia_y
    EIz = sec.young * sec.inertia_z
    GJ = sec.shear * sec.torsion
    K = np.zeros((ne, 12, 12))

    ax = EA / L
    K[:, 0, 0] = K[:, 6, 6] = ax
    K[:, 0, 6] = K[:, 6, 0] = -ax

    t = GJ / L
    K[:, 3, 3] = K[:, 9, 9] = t
    K[:, 3, 9] = K[:, 9, 3] = -t

    # Bending in the local x-y plane (rotation about local z, EIz).
    b1 = 12.0 * EIz / L ** 3
    b2 = 6.0 * EIz / L ** 2
    b3 = 4.0 * EIz / L
    b4 = 2.0 * EIz / L
    for (i, j, v) in ((1, 1, b1), (1, 5, b2), (1, 7, -b1), (1, 11, b2),
                      (5, 5, b3), (5, 7, -b2), (5, 11, b4),
                      (7, 7, b1), (7, 11, -b2), (11, 11, b3)):
        K[:, i, j] = v
        K[:, j, i] = v

    # Bending in the local x-z plane (rotation about local y, EIy).
    c1 = 12.0 * EIy / L ** 3
    c2 = 6.0 * EIy / L ** 2
    c3 = 4.0 * EIy / L
    c4 = 2.0 * EIy / L
    for (i, j, v) in ((2, 2, c1), (2, 4, -c2), (2, 8, -c1), (2, 10, -c2),
                      (4, 4, c3), (4, 8, c2), (4, 10, c4),
                      (8, 8, c1), (8, 10, c2), (10, 10, c3)):
        K[:, i, j] = v
        K[:, j, i] = v
    return K


def rotation_batch(directions: np.ndarray) -> np.ndarray:
    """Local axis triads, shape (ne, 3, 3); rows are local x, y, z.

    Near-vertical struts (axis along global z) take local y = global y;
    all others take local y horizontal, perpendicular to the strut.
    """
    d = np.asarray(directions, dtype=float)
    cx, cy, cz = d[:, 0], d[:, 1], d[:, 2]
    horiz = np.sqrt(cx * cx + cy * cy)
    R = np.zeros((len(d), 3, 3))
    vertical = horiz < 1e-12

    R[:, 0, 0], R[:, 0, 1], R[:, 0, 2] = cx, cy, cz
    h = np.where(vertical, 1.0, horiz)
    R[:, 1, 0] = np.where(vertical, 0.0, -cy / h)
    R[:, 1, 1] = np.where(vertical, 1.0, cx / h)
    R[:, 2, 0] = np.where(vertical, -cz, -cx * cz / h)
    R[:, 2, 1] = np.where(vertical, 0.0, -cy * cz / h)
    R[:, 2, 2] = np.where(vertical, 0.0, h)
    return R


def element_stiffness_batch(nodes: np.ndarray, struts: np.ndarray,
                            sec: Section) -> np.ndarray:
    """Global-frame 12x12 stiffness of every strut, shape (ne, 12, 12)."""
    vec = nodes[struts[:, 1]] - nodes[struts[:, 0]]
    lengths = np.linalg.norm(vec, axis=1)
    if (lengths <= 0).any():
        raise ValueError("zero-length strut")
    K_local = local_stiffness_batch(lengths, sec)
    R = rotation_batch(vec / lengths[:, None])
    T = np.zeros((len(struts), 12, 12))
    for b in range(4):
        T[:, 3 * b:3 * b + 3, 3 * b:3 * b + 3] = R
    return np.einsum("eji,ejk,ekl->eil", T, K_local, T)


def assemble_stiffness(nodes: np.ndarray, struts: np.ndarray,
                       sec: Section) -> sp.csr_matrix:
    """Sparse symmetric global stiffness (6 DOF per node)."""
    Ke = element_stiffness_batch(nodes, struts, sec)
    ne = len(struts)
    dof = np.empty((ne, 12), dtype=np.int64)
    for end in (0, 1):
        base = struts[:, end] * DOF_PER_NODE
        for k in range(DOF_PER_NODE):
            dof[:, 6 * end + k] = base + k
    rows = np.repeat(dof, 12, axis=1).ravel()
    cols = np.tile(dof, (1, 12)).ravel()
    n = len(nodes) * DOF_PER_NODE
    K = sp.coo_matrix((Ke.ravel(), (rows, cols)), shape=(n, n))
    return K.tocsr()
