# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels; see the package docstring for contracts.

Pixel fills use int64 arithmetic on pre-scaled coordinates (exact). The
layout step accumulates spring forces over ascending neighbor ids and
repulsion over ascending node ids, matching the numpy fallback's order.
Build with -ffp-contract=off so gcc does not fuse multiply-adds that the
fallback performs as separate operations.
"""

from libc.math cimport sqrt


def fill_disc(unsigned char[:, ::1] img, long long cx, long long cy,
              long long r, long long scale):
    cdef long long h = img.shape[0]
    cdef long long w = img.shape[1]
    cdef long long half = scale // 2
    cdef long long x_lo, x_hi, y_lo, y_hi, ix, iy, dx, dy, r2
    if r < 0:
        return
    x_lo = (cx - r) // scale - 1
    if x_lo < 0:
        x_lo = 0
    x_hi = (cx + r) // scale + 1
    if x_hi > w - 1:
        x_hi = w - 1
    y_lo = (cy - r) // scale - 1
    if y_lo < 0:
        y_lo = 0
    y_hi = (cy + r) // scale + 1
    if y_hi > h - 1:
        y_hi = h - 1
    r2 = r * r
    for iy in range(y_lo, y_hi + 1):
        dy = iy * scale + half - cy
        for ix in range(x_lo, x_hi + 1):
            dx = ix * scale + half - cx
            if dx * dx + dy * dy <= r2:
                img[iy, ix] = 0


def fill_segment(unsigned char[:, ::1] img, long long ax, long long ay,
                 long long bx, long long by, long long half_width,
                 long long scale):
    cdef long long h = img.shape[0]
    cdef long long w = img.shape[1]
    cdef long long half = scale // 2
    cdef long long x_lo, x_hi, y_lo, y_hi, ix, iy
    cdef long long abx, aby, ab2, hw2, aqx, aqy, bqx, bqy, t, aq2, bq2
    cdef long long lo, hi
    if half_width < 0:
        return
    lo = ax if ax < bx else bx
    hi = ax if ax > bx else bx
    x_lo = (lo - half_width) // scale - 1
    if x_lo < 0:
        x_lo = 0
    x_hi = (hi + half_width) // scale + 1
    if x_hi > w - 1:
        x_hi = w - 1
    lo = ay if ay < by else by
    hi = ay if ay > by else by
    y_lo = (lo - half_width) // scale - 1
    if y_lo < 0:
        y_lo = 0
    y_hi = (hi + half_width) // scale + 1
    if y_hi > h - 1:
        y_hi = h - 1

    abx = bx - ax
    aby = by - ay
    ab2 = abx * abx + aby * aby
    hw2 = half_width * half_width

    for iy in range(y_lo, y_hi + 1):
        aqy = iy * scale + half - ay
        bqy = iy * scale + half - by
        for ix in range(x_lo, x_hi + 1):
            aqx = ix * scale + half - ax
            bqx = ix * scale + half - bx
            if ab2 == 0:
                if aqx * aqx + aqy * aqy <= hw2:
                    img[iy, ix] = 0
                continue
            t = aqx * abx + aqy * aby
            if t <= 0:
                if aqx * aqx + aqy * aqy <= hw2:
                    img[iy, ix] = 0
            elif t >= ab2:
                if bqx * bqx + bqy * bqy <= hw2:
                    img[iy, ix] = 0
            else:
                aq2 = aqx * aqx + aqy * aqy
                if aq2 * ab2 - t * t <= hw2 * ab2:
                    img[iy, ix] = 0


def layout_step(double[:, ::1] pos, double[:, ::1] prev,
                double[:, ::1] force,
                long long[::1] indptr, long long[::1] indices,
                double k_attract, double rest_len, double k_repel,
                double damping, double dt2, double min_d2):
    cdef Py_ssize_t n = pos.shape[0]
    cdef Py_ssize_t i, j, jj
    cdef double xi, yi, dx, dy, d2, d, s, r, fxi, fyi
    cdef double nx, ny, ddx, ddy, disp2, max_disp2 = 0.0

    for i in range(n):
        xi = pos[i, 0]
        yi = pos[i, 1]
        fxi = 0.0
        fyi = 0.0
        for jj in range(indptr[i], indptr[i + 1]):
            j = indices[jj]
            dx = pos[j, 0] - xi
            dy = pos[j, 1] - yi
            d2 = dx * dx + dy * dy
            if d2 < min_d2:
                d2 = min_d2
            d = sqrt(d2)
            s = k_attract * (d - rest_len) / d
            fxi += s * dx
            fyi += s * dy
        for j in range(n):
            if j == i:
                continue
            dx = pos[j, 0] - xi
            dy = pos[j, 1] - yi
            d2 = dx * dx + dy * dy
            if d2 < min_d2:
                d2 = min_d2
            d = sqrt(d2)
            r = k_repel / (d2 * d)
            fxi -= r * dx
            fyi -= r * dy
        force[i, 0] = fxi
        force[i, 1] = fyi

    for i in range(n):
        nx = pos[i, 0] + damping * (pos[i, 0] - prev[i, 0]) + force[i, 0] * dt2
        ny = pos[i, 1] + damping * (pos[i, 1] - prev[i, 1]) + force[i, 1] * dt2
        ddx = nx - pos[i, 0]
        ddy = ny - pos[i, 1]
        disp2 = ddx * ddx + ddy * ddy
        if disp2 > max_disp2:
            max_disp2 = disp2
        prev[i, 0] = pos[i, 0]
        prev[i, 1] = pos[i, 1]
        pos[i, 0] = nx
        pos[i, 1] = ny
    return max_disp2
