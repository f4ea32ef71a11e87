"""Pure-numpy implementations of the hot kernels.

Pixel predicates run on int64 arrays, which is exact for the value ranges
the renderer feeds in (all scaled coordinates fit in 15 bits), so results
match the compiled core bit for bit.

The layout step mirrors the compiled core's accumulation order: spring
terms over ascending neighbor ids, then repulsion terms over ascending
node ids. Where the compiled loop skips a term (j == i, or no edge), this
version adds an explicit 0.0; IEEE-754 makes the sums equal except for the
sign of an exactly-zero force, which downstream consumers cannot observe.
"""

import numpy as np


def fill_disc(img: np.ndarray, cx: int, cy: int, r: int, scale: int) -> None:
    """Blacken pixels whose center lies within r of (cx, cy); scaled ints."""
    if r < 0:
        return
    h, w = img.shape
    half = scale // 2
    x_lo = max(0, (cx - r) // scale - 1)
    x_hi = min(w - 1, (cx + r) // scale + 1)
    y_lo = max(0, (cy - r) // scale - 1)
    y_hi = min(h - 1, (cy + r) // scale + 1)
    if x_lo > x_hi or y_lo > y_hi:
        return
    xs = np.arange(x_lo, x_hi + 1, dtype=np.int64) * scale + half - cx
    ys = np.arange(y_lo, y_hi + 1, dtype=np.int64) * scale + half - cy
    mask = ys[:, None] ** 2 + xs[None, :] ** 2 <= r * r
    region = img[y_lo : y_hi + 1, x_lo : x_hi + 1]
    region[mask] = 0


def fill_segment(img: np.ndarray, ax: int, ay: int, bx: int, by: int,
                 half_width: int, scale: int) -> None:
    """Blacken pixels whose center is within half_width of segment AB."""
    if half_width < 0:
        return
    h, w = img.shape
    half = scale // 2
    x_lo = max(0, (min(ax, bx) - half_width) // scale - 1)
    x_hi = min(w - 1, (max(ax, bx) + half_width) // scale + 1)
    y_lo = max(0, (min(ay, by) - half_width) // scale - 1)
    y_hi = min(h - 1, (max(ay, by) + half_width) // scale + 1)
    if x_lo > x_hi or y_lo > y_hi:
        return

    abx = np.int64(bx - ax)
    aby = np.int64(by - ay)
    ab2 = abx * abx + aby * aby
    hw2 = np.int64(half_width) * np.int64(half_width)

    qx = np.arange(x_lo, x_hi + 1, dtype=np.int64) * scale + half
    qy = np.arange(y_lo, y_hi + 1, dtype=np.int64) * scale + half
    aqx = qx[None, :] - ax
    aqy = qy[:, None] - ay

    if ab2 == 0:
        mask = aqx * aqx + aqy * aqy <= hw2
    else:
        t = aqx * abx + aqy * aby
        aq2 = aqx * aqx + aqy * aqy
        bqx = qx[None, :] - bx
        bqy = qy[:, None] - by
        bq2 = bqx * bqx + bqy * bqy
        # three zones: before A, past B, and the perpendicular band
        mask = np.where(
            t <= 0,
            aq2 <= hw2,
            np.where(t >= ab2, bq2 <= hw2, aq2 * ab2 - t * t <= hw2 * ab2),
        )
    region = img[y_lo : y_hi + 1, x_lo : x_hi + 1]
    region[mask] = 0


def layout_step(pos, prev, force, indptr, indices,
                k_attract, rest_len, k_repel, damping, dt2, min_d2):
    """One force/integration step; returns max squared displacement.

    pos, prev and force are (n, 2) float64 arrays updated in place.
    indptr/indices hold the undirected adjacency in CSR form, neighbor
    ids ascending.
    """
    n = pos.shape[0]
    x = pos[:, 0]
    y = pos[:, 1]

    # non-finite transients are the driver's problem (it checks and raises)
    with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
        dx = x[None, :] - x[:, None]
        dy = y[None, :] - y[:, None]
        d2 = dx * dx + dy * dy
        d2 = np.maximum(d2, min_d2)
        d = np.sqrt(d2)

        adj = np.zeros((n, n), dtype=bool)
        for i in range(n):
            adj[i, indices[indptr[i] : indptr[i + 1]]] = True

        fx = force[:, 0]
        fy = force[:, 1]
        fx[:] = 0.0
        fy[:] = 0.0

        s = k_attract * (d - rest_len) / d
        sx = np.where(adj, s * dx, 0.0)
        sy = np.where(adj, s * dy, 0.0)
        for j in range(n):
            fx += sx[:, j]
            fy += sy[:, j]

        offdiag = ~np.eye(n, dtype=bool)
        r = k_repel / (d2 * d)
        rx = np.where(offdiag, r * dx, 0.0)
        ry = np.where(offdiag, r * dy, 0.0)
        for j in range(n):
            fx -= rx[:, j]
            fy -= ry[:, j]

        new_x = x + damping * (x - prev[:, 0]) + fx * dt2
        new_y = y + damping * (y - prev[:, 1]) + fy * dt2
        disp_x = new_x - x
        disp_y = new_y - y
        max_disp2 = float(np.max(disp_x * disp_x + disp_y * disp_y)) if n else 0.0

    prev[:, 0] = x
    prev[:, 1] = y
    pos[:, 0] = new_x
    pos[:, 1] = new_y
    return max_disp2
