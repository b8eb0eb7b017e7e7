import numpy as np
import pytest

from eigbound.mesh import (Mesh, MeshError, check_mesh, format_mesh, generate_mesh,
                           is_steklov_compatible, parse_mesh, polygon_area, read_mesh, read_polygon,
                           reentrant_corners, steklov_compatible, template_domain, uniform_square,
                           validate_polygon, write_mesh)


def test_uniform_square_counts():
    m = uniform_square(4)
    assert (m.nv, m.nt) == (25, 32)
    assert len(m.boundary_edges) == 16
    assert m.h_max == pytest.approx(np.sqrt(2) / 4)
    check_mesh(m, area=1.0)


def test_template_areas_and_corners():
    assert polygon_area(template_domain("lshape")) == pytest.approx(3.0)
    db = template_domain("dumbbell", bar_width=0.25, bar_length=1.0)
    assert polygon_area(db) == pytest.approx(2.25)
    assert len(reentrant_corners(db)) == 2
    assert len(reentrant_corners(template_domain("dumbbell", 0.25, layout="centered"))) == 4
    assert reentrant_corners(template_domain("lshape")).tolist() == [[1.0, 1.0]]


@pytest.mark.parametrize("poly", [
    [[0, 0], [1, 0]],
    [[0, 0], [0, 1], [1, 0]],  # clockwise
    [[0, 0], [1, 0], [2, 0], [1, 1]],  # collinear
])
def test_invalid_polygons(poly):
    with pytest.raises(MeshError):
        validate_polygon(poly)


def test_generate_mesh_respects_h_max_and_area():
    poly = template_domain("lshape")
    m = generate_mesh(poly, 0.25)
    check_mesh(m)
    assert m.h_max <= 0.25 + 1e-12
    assert m.areas.sum() == pytest.approx(3.0, rel=1e-12)


def test_graded_mesh_is_finer_near_the_corner():
    poly = template_domain("lshape")
    m = generate_mesh(poly, 0.25, "auto")
    c = m.centroids
    r = np.linalg.norm(c - np.array([1.0, 1.0]), axis=1)
    near = m.h_elements[r < 0.1]
    far = m.h_elements[r > 0.8]
    assert near.max() < far.max()
    assert m.nt > generate_mesh(poly, 0.25).nt


def test_non_rectilinear_polygon():
    poly = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 0.8]])
    m = generate_mesh(poly, 0.2)
    check_mesh(m)
    assert m.areas.sum() == pytest.approx(0.4)


def test_text_round_trip(tmp_path):
    m = generate_mesh(template_domain("dumbbell", 0.375), 0.3, "auto")
    text = format_mesh(m)
    assert text.splitlines()[0] == f"{m.nv} {m.nt} {len(m.boundary_edges)}"
    m2 = parse_mesh(text)
    assert np.array_equal(m2.vertices, m.vertices)
    assert np.array_equal(m2.triangles, m.triangles)
    path = tmp_path / "m.txt"
    write_mesh(m, path)
    assert format_mesh(read_mesh(path)) == text


def test_parse_rejects_truncated_and_inverted():
    text = format_mesh(uniform_square(2))
    with pytest.raises(MeshError):
        parse_mesh("\n".join(text.splitlines()[:-3]))
    lines = text.splitlines()
    nv = int(lines[0].split()[0])
    i, j, k = lines[1 + nv].split()
    lines[1 + nv] = f"{j} {i} {k}"
    with pytest.raises(MeshError):
        parse_mesh("\n".join(lines))


def test_hanging_node_detected():
    # two triangles on the left, the right triangle spans the whole edge
    v = np.array([[0, 0], [1, 0], [1, 1], [0, 1], [1, 0.5], [2, 0.5]], dtype=float)
    t = np.array([[0, 1, 4], [0, 4, 2], [0, 2, 3], [1, 5, 2]])
    b = np.array([[0, 1], [1, 5], [5, 2], [2, 3], [3, 0]])
    with pytest.raises(MeshError):
        check_mesh(Mesh(v, t, b, np.ones(len(b), dtype=int)))


def test_steklov_compatible_fixup():
    m = uniform_square(4)
    assert not is_steklov_compatible(m)
    ok, fixed = steklov_compatible(m)
    assert not ok
    assert is_steklov_compatible(fixed)
    assert fixed.areas.sum() == pytest.approx(1.0)
    assert steklov_compatible(fixed)[0]


def test_boundary_sides_cover_each_boundary_edge_once():
    m = uniform_square(3)
    tris, loc = m.boundary_sides()
    edges = m.tri_edges[tris, loc]
    assert sorted(edges.tolist()) == sorted(m.boundary_edge_ids.tolist())


def test_read_polygon(tmp_path):
    p = tmp_path / "tri.poly"
    p.write_text("# triangle\n0 0\n1 0\n0 1\n", encoding="utf-8")
    assert read_polygon(p).shape == (3, 2)
