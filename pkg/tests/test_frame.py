"""Beam element checks against closed-form structural mechanics."""

import math

import numpy as np
import pytest

from archmat.frame import (assemble_stiffness, circular_section,
                           element_stiffness_batch, local_stiffness_batch,
                           rotation_batch)


def test_circular_section_constants():
    sec = circular_section(2.0, 100.0, 0.3)
    assert sec.area == pytest.approx(math.pi)
    assert sec.inertia_y == pytest.approx(math.pi / 4.0)
    assert sec.inertia_z == sec.inertia_y
    assert sec.torsion == pytest.approx(math.pi / 2.0)
    assert sec.shear == pytest.approx(100.0 / 2.6)
    with pytest.raises(ValueError):
        circular_section(0.0, 100.0, 0.3)


def test_local_stiffness_symmetry_and_axial_term():
    sec = circular_section(0.5, 200.0, 0.3)
    L = 3.0
    K = local_stiffness_batch(np.array([L]), sec)[0]
    assert np.allclose(K, K.T)
    assert K[0, 0] == pytest.approx(sec.young * sec.area / L)
    assert K[0, 6] == pytest.approx(-sec.young * sec.area / L)
    assert K[3, 3] == pytest.approx(sec.shear * sec.torsion / L)


def test_element_has_six_rigid_body_modes():
    sec = circular_section(0.5, 200.0, 0.3)
    K = local_stiffness_batch(np.array([2.0]), sec)[0]
    eig = np.linalg.eigvalsh(K)
    scale = eig.max()
    assert (eig > -1e-9 * scale).all()
    assert np.sum(np.abs(eig) < 1e-9 * scale) == 6


def test_rotation_triads_are_orthonormal():
    dirs = np.array([
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],   # vertical special case
        [0.0, 0.0, -1.0],
        [1.0, 1.0, 1.0] / np.sqrt(3.0),
        [-0.3, 0.4, 0.866],
    ])
    dirs = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
    R = rotation_batch(dirs)
    for k in range(len(dirs)):
        assert np.allclose(R[k] @ R[k].T, np.eye(3), atol=1e-12)
        assert np.linalg.det(R[k]) == pytest.approx(1.0)
        assert np.allclose(R[k, 0], dirs[k])


def _solve_tip(load_dof, load, L=2.0, d=0.4, E=210.0, nu=0.3):
    """Cantilever along +x, node 0 clamped; returns tip displacement."""
    nodes = np.array([[0.0, 0.0, 0.0], [L, 0.0, 0.0]])
    struts = np.array([[0, 1]])
    sec = circular_section(d, E, nu)
    K = assemble_stiffness(nodes, struts, sec).toarray()
    free = slice(6, 12)
    f = np.zeros(6)
    f[load_dof] = load
    u = np.linalg.solve(K[free, free], f)
    return u, sec


def test_cantilever_matches_beam_theory():
    L, E = 2.0, 210.0
    u, sec = _solve_tip(0, 1.0, L=L, E=E)          # axial
    assert u[0] == pytest.approx(L / (E * sec.area), rel=1e-12)

    u, sec = _solve_tip(1, 1.0, L=L, E=E)          # transverse
    assert u[1] == pytest.approx(L ** 3 / (3 * E * sec.inertia_z), rel=1e-12)
    # Euler-Bernoulli tip rotation PL^2 / 2EI about z.
    assert u[5] == pytest.approx(L ** 2 / (2 * E * sec.inertia_z), rel=1e-12)

    u, sec = _solve_tip(3, 1.0, L=L, E=E)          # torsion
    assert u[3] == pytest.approx(L / (sec.shear * sec.torsion), rel=1e-12)


def test_global_element_invariant_under_direction():
    # A strut along y must present its axial stiffness on the y axis.
    sec = circular_section(0.5, 100.0, 0.3)
    nodes = np.array([[0.0, 0.0, 0.0], [0.0, 2.0, 0.0]])
    K = element_stiffness_batch(nodes, np.array([[0, 1]]), sec)[0]
    assert K[1, 1] == pytest.approx(sec.young * sec.area / 2.0)
    assert np.allclose(K, K.T)


def test_assembly_sums_shared_nodes():
    sec = circular_section(0.5, 100.0, 0.3)
    nodes = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0]])
    struts = np.array([[0, 1], [1, 2]])
    K = assemble_stiffness(nodes, struts, sec).toarray()
    ax = sec.young * sec.area
    assert K[6, 6] == pytest.approx(2.0 * ax)      # middle node carries both
    assert np.allclose(K, K.T)


def test_zero_length_strut_rejected():
    sec = circular_section(0.5, 100.0, 0.3)
    nodes = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    with pytest.raises(ValueError):
        element_stiffness_batch(nodes, np.array([[0, 1]]), sec)
