import io
import math
import random
from collections import deque

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sitetrace.errors import (
    DuplicateSessionError,
    InfeasibleConstraintsError,
    LayoutRequiredError,
    SitetraceError,
)
from sitetrace.render import (
    RenderConfig,
    TraceImage,
    emit_dataset,
    encode_png,
    radius,
    render,
    solve_radius_params,
)
from sitetrace.sitemap import Sitemap
from sitetrace.subgraph import SessionSubgraph

PAPERLIKE = (4, 80, 50, 50)  # (r_min, r_max, x_gate, r_gate) defaults


class TestRadiusSolve:
    def test_c_is_r_max(self):
        p = solve_radius_params(*PAPERLIKE)
        assert p.c == 80

    def test_constraints_hold(self):
        p = solve_radius_params(*PAPERLIKE)
        assert radius(p, 1) == pytest.approx(4.0, abs=1e-9)
        assert radius(p, 50) == pytest.approx(50.0, abs=1e-9)
        assert radius(p, 1e6) == pytest.approx(80.0, abs=1e-6)

    def test_coefficients_match_linear_solve(self):
        # independent route: solve the 2x2 linear system numerically
        r_min, r_max, x_gate, r_gate = PAPERLIKE
        rhs = np.log([r_max / r_min - 1, r_max / r_gate - 1])
        mat = np.array([[-1.0, 1.0], [-x_gate, 1.0]])
        a_ref, b_ref = np.linalg.solve(mat, rhs)
        p = solve_radius_params(*PAPERLIKE)
        assert p.a == pytest.approx(a_ref, abs=1e-12)
        assert p.b == pytest.approx(b_ref, abs=1e-12)
        assert (p.a, p.b) == (pytest.approx(0.0705, abs=1e-4),
                              pytest.approx(3.0149, abs=1e-4))

    @pytest.mark.parametrize("args", [
        (50, 80, 50, 50),    # r_gate == r_min
        (4, 80, 50, 90),     # r_gate above r_max
        (4, 80, 1, 50),      # x_gate not above 1
        (0, 80, 50, 50),     # r_min not positive
    ])
    def test_infeasible(self, args):
        with pytest.raises(InfeasibleConstraintsError):
            solve_radius_params(*args)


@given(st.floats(min_value=1, max_value=300),
       st.floats(min_value=1e-3, max_value=50))
def test_radius_strictly_increasing(x, delta):
    # float64 resolves growth of this size comfortably up to x ~ 350 here;
    # far beyond that f saturates to r_max and ties are unavoidable
    p = solve_radius_params(*PAPERLIKE)
    assert radius(p, x) < radius(p, x + delta)
    assert radius(p, x) < p.r_max


def laid_out(nodes_coords, edges=()):
    nodes = [p for p, _ in nodes_coords]
    coords = [c for _, c in nodes_coords]
    if "INVALID" not in nodes:
        nodes.append("INVALID")
        coords.append((0.99, 0.99))
    sm = Sitemap(nodes=nodes, edges=set(edges),
                 invalid_node_id=nodes.index("INVALID"), coordinates=coords)
    sm.validate()
    return sm


def oracle_raster(sitemap, subgraph, config):
    """Full-canvas per-pixel evaluation of the membership predicates."""
    size = config.image_size
    scale = 1
    while size * (scale * 2) <= 32768:
        scale *= 2
    pad = config.padding_fraction
    span = (1.0 - 2.0 * pad) * size

    def scaled_point(node):
        u, v = sitemap.coordinates[node]
        px = (pad * size + u * span) * scale
        py = (pad * size + v * span) * scale
        return int(math.floor(px + 0.5)), int(math.floor(py + 0.5))

    qx = np.arange(size, dtype=np.int64) * scale + scale // 2
    qy = np.arange(size, dtype=np.int64) * scale + scale // 2
    img = np.full((size, size), 255, dtype=np.uint8)

    if config.line_width > 0:
        hw = config.line_width * scale // 2
        for a, b in subgraph.edges:
            ax, ay = scaled_point(a)
            bx, by = scaled_point(b)
            aqx, aqy = qx[None, :] - ax, qy[:, None] - ay
            bqx, bqy = qx[None, :] - bx, qy[:, None] - by
            abx, aby = bx - ax, by - ay
            ab2 = abx * abx + aby * aby
            aq2 = aqx * aqx + aqy * aqy
            if ab2 == 0:
                mask = aq2 <= hw * hw
            else:
                t = aqx * abx + aqy * aby
                bq2 = bqx * bqx + bqy * bqy
                mask = np.where(
                    t <= 0, aq2 <= hw * hw,
                    np.where(t >= ab2, bq2 <= hw * hw,
                             aq2 * ab2 - t * t <= hw * hw * ab2))
            img[mask] = 0

    for node, freq in subgraph.frequencies.items():
        cx, cy = scaled_point(node)
        r = int(math.floor(radius(config.radius, freq) * scale + 0.5))
        mask = (qx[None, :] - cx) ** 2 + (qy[:, None] - cy) ** 2 <= r * r
        img[mask] = 0
    return img


class TestRender:
    def test_empty_subgraph_is_white(self, shop_sitemap):
        img = render(shop_sitemap, SessionSubgraph(session_id="e"),
                     RenderConfig())
        assert (img.pixels == 255).all()

    def test_missing_coordinates_rejected(self):
        sm = Sitemap(nodes=["/", "INVALID"], edges=set(), invalid_node_id=1)
        with pytest.raises(LayoutRequiredError):
            render(sm, SessionSubgraph(session_id="x", frequencies={0: 1}),
                   RenderConfig())

    def test_centered_disc_matches_oracle_exactly(self):
        sm = laid_out([("/solo", (0.5, 0.5))])
        sg = SessionSubgraph(session_id="s", frequencies={0: 1})
        config = RenderConfig()
        img = render(sm, sg, config)
        # radius 4 disc at the canvas center
        assert img.pixels[128, 128] == 0
        assert np.array_equal(img.pixels, oracle_raster(sm, sg, config))

    def test_two_nodes_one_edge_matches_oracle(self):
        sm = laid_out([("/a", (0.2, 0.3)), ("/b", (0.8, 0.7))])
        sg = SessionSubgraph(session_id="s", frequencies={0: 3, 1: 60},
                             edges={(0, 1)})
        config = RenderConfig()
        assert np.array_equal(render(sm, sg, config).pixels,
                              oracle_raster(sm, sg, config))

    def test_render_is_deterministic(self, shop_sitemap):
        sg = SessionSubgraph(session_id="s", frequencies={0: 2, 2: 9, 3: 120},
                             edges={(0, 2), (2, 3), (3, 0)})
        a = render(shop_sitemap, sg, RenderConfig())
        b = render(shop_sitemap, sg, RenderConfig())
        assert a.pixels.tobytes() == b.pixels.tobytes()

    def test_node_centers_are_black(self, shop_sitemap):
        sg = SessionSubgraph(
            session_id="s",
            frequencies={i: 1 + i for i in range(6)},
            edges={(i, i + 1) for i in range(5)},
        )
        config = RenderConfig()
        img = render(shop_sitemap, sg, config)
        pad, size = config.padding_fraction, config.image_size
        for node in sg.frequencies:
            u, v = shop_sitemap.coordinates[node]
            ix = int((pad * size + u * (1 - 2 * pad) * size))
            iy = int((pad * size + v * (1 - 2 * pad) * size))
            assert img.pixels[iy, ix] == 0

    def test_huge_frequency_clipped_at_canvas(self):
        sm = laid_out([("/edge", (0.0, 0.0))])
        sg = SessionSubgraph(session_id="s", frequencies={0: 10**6})
        img = render(sm, sg, RenderConfig())
        assert (img.pixels == 0).any()  # drew something, no error


def connected_components(pixels):
    seen = np.zeros_like(pixels, dtype=bool)
    count = 0
    for sy, sx in zip(*np.nonzero(pixels == 0)):
        if seen[sy, sx]:
            continue
        count += 1
        queue = deque([(sy, sx)])
        seen[sy, sx] = True
        while queue:
            y, x = queue.popleft()
            for ny, nx in ((y - 1, x), (y + 1, x), (y, x - 1), (y, x + 1)):
                if (0 <= ny < pixels.shape[0] and 0 <= nx < pixels.shape[1]
                        and not seen[ny, nx] and pixels[ny, nx] == 0):
                    seen[ny, nx] = True
                    queue.append((ny, nx))
    return count


def test_spot_count_with_lines_disabled():
    coords = [(0.1, 0.1), (0.9, 0.1), (0.5, 0.5), (0.1, 0.9), (0.9, 0.9)]
    sm = laid_out([(f"/n{i}", c) for i, c in enumerate(coords)])
    sg = SessionSubgraph(session_id="s",
                         frequencies={i: 2 for i in range(5)},
                         edges={(0, 1), (1, 2), (2, 3)})
    config = RenderConfig(line_width=0)
    img = render(sm, sg, config)
    assert connected_components(img.pixels) == 5


class TestPng:
    def test_pillow_decodes_identically(self):
        rng = np.random.default_rng(1)
        pixels = np.where(rng.uniform(size=(64, 64)) < 0.2, 0, 255).astype(np.uint8)
        from PIL import Image

        back = np.asarray(Image.open(io.BytesIO(encode_png(pixels))))
        assert np.array_equal(back, pixels)

    def test_encoding_is_stable(self):
        pixels = np.full((16, 16), 255, dtype=np.uint8)
        pixels[3:9, 4:7] = 0
        assert encode_png(pixels) == encode_png(pixels)


class TestEmitDataset:
    def make_images(self, *sids_labels):
        pixels = np.full((8, 8), 255, dtype=np.uint8)
        return [TraceImage(pixels=pixels, session_id=s, label=l)
                for s, l in sids_labels]

    def test_files_and_manifest(self, tmp_path):
        manifest = emit_dataset(
            self.make_images(("b", "bot"), ("a", "human")), tmp_path
        )
        lines = manifest.read_text().splitlines()
        assert lines == [
            "file,session_id,label",
            "images/a.png,a,human",
            "images/b.png,b,bot",
        ]
        assert (tmp_path / "images" / "a.png").exists()

    def test_empty_list(self, tmp_path):
        manifest = emit_dataset([], tmp_path)
        assert manifest.read_text() == "file,session_id,label\n"

    def test_unlabeled_column_empty(self, tmp_path):
        manifest = emit_dataset(self.make_images(("x", None)), tmp_path)
        assert "images/x.png,x,\n" in manifest.read_text()

    def test_duplicate_session_id(self, tmp_path):
        with pytest.raises(DuplicateSessionError):
            emit_dataset(self.make_images(("x", None), ("x", None)), tmp_path)

    def test_hostile_session_id(self, tmp_path):
        with pytest.raises(SitetraceError):
            emit_dataset(self.make_images(("../evil", None)), tmp_path)

    def test_rerun_is_byte_identical(self, tmp_path):
        rng = np.random.default_rng(5)
        pixels = np.where(rng.uniform(size=(32, 32)) < 0.3, 0, 255).astype(np.uint8)
        images = [TraceImage(pixels=pixels, session_id="s1", label="bot")]
        emit_dataset(images, tmp_path / "one")
        emit_dataset(images, tmp_path / "two")
        assert ((tmp_path / "one" / "images" / "s1.png").read_bytes()
                == (tmp_path / "two" / "images" / "s1.png").read_bytes())
        assert ((tmp_path / "one" / "manifest.csv").read_bytes()
                == (tmp_path / "two" / "manifest.csv").read_bytes())


def test_render_config_validation():
    with pytest.raises(ValueError):
        RenderConfig(image_size=100)  # below 2 * r_max
    with pytest.raises(ValueError):
        RenderConfig(padding_fraction=0.5)
