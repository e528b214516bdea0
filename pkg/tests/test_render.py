import xml.etree.ElementTree as ET

import pytest

from jacobiset import render_svg, triangulate_structured

from conftest import grid_field, quad_field


def parse_svg(svg: str):
    root = ET.fromstring(svg)  # raises on invalid XML
    ns = "{http://www.w3.org/2000/svg}"
    polygons = root.findall(f".//{ns}polygon")
    lines = root.findall(f".//{ns}line")
    return root, polygons, lines


def test_identity_field_all_red_no_edges():
    field = grid_field(4, 4, lambda x, y: x, lambda x, y: y)
    svg = render_svg(field)
    root, polygons, lines = parse_svg(svg)
    assert len(polygons) == field.n_triangles
    assert len(lines) == 0
    fills = {p.get("fill") for p in polygons}
    assert len(fills) == 1
    fill = fills.pop()
    r, g, b = (int(fill[i : i + 2], 16) for i in (1, 3, 5))
    assert r > g and r > b  # red-dominant


def test_mirrored_field_all_blue():
    field = grid_field(4, 4, lambda x, y: x, lambda x, y: -y)
    assert (field.dets < 0).all()
    _, polygons, _ = parse_svg(render_svg(field))
    for p in polygons:
        fill = p.get("fill")
        r, g, b = (int(fill[i : i + 2], 16) for i in (1, 3, 5))
        assert b > r


def test_two_sign_quad_has_black_edge():
    field = quad_field([0, 1, 1, 0], [0, 1, 0, 1])
    svg = render_svg(field)
    root, polygons, lines = parse_svg(svg)
    assert len(polygons) == 2
    assert len(lines) == 1
    fills = [p.get("fill") for p in polygons]
    rgb = [tuple(int(f[i : i + 2], 16) for i in (1, 3, 5)) for f in fills]
    assert any(r > b for r, g, b in rgb)  # one red
    assert any(b > r for r, g, b in rgb)  # one blue
    # Jacobi group is stroked black.
    assert 'stroke="#000000"' in svg


def test_show_jacobi_toggle():
    field = quad_field([0, 1, 1, 0], [0, 1, 0, 1])
    svg = render_svg(field, show_jacobi=False)
    _, _, lines = parse_svg(svg)
    assert len(lines) == 0


def test_degenerate_tinted_at_min_saturation():
    field = triangulate_structured(3, 2, (1.0, 1.0), [0, 1, 2, 0, 1, 2], [0, 0, 0, 1, 1, 1])
    field.set_vertex_values([4], field.values[1])  # degenerate one triangle
    assert (field.dets == 0).any()
    svg = render_svg(field)
    _, polygons, _ = parse_svg(svg)
    fills = {p.get("fill") for p in polygons}
    assert len(fills) >= 2  # faint degenerate tint differs from full tint


def test_no_external_references_and_saturation_scale():
    field = grid_field(3, 3, lambda x, y: x, lambda x, y: y)
    svg = render_svg(field, saturation_scale=2.0)
    assert "http" not in svg.replace("http://www.w3.org/2000/svg", "")
    assert "href" not in svg
    with pytest.raises(ValueError):
        render_svg(field, saturation_scale=0.0)
