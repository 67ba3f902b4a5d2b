"""Naive reference implementations used as oracles by the test suite.

Everything here favors obviousness over speed: plain Python loops and
textbook formulas, sharing no code with the package internals.
"""

import math

import numpy as np


def wrap(i, n):
    while i < 0:
        i += n
    while i >= n:
        i -= n
    return i


def naive_gradient(a, dx, dy, paper_divisor):
    """Periodic central differences by explicit loops."""
    nx, ny = a.shape
    gx = np.zeros_like(a)
    gy = np.zeros_like(a)
    ddx = dx if paper_divisor else 2.0 * dx
    ddy = dy if paper_divisor else 2.0 * dy
    for i in range(nx):
        for j in range(ny):
            gx[i, j] = (a[wrap(i + 1, nx), j] - a[wrap(i - 1, nx), j]) / ddx
            gy[i, j] = (a[i, wrap(j + 1, ny)] - a[i, wrap(j - 1, ny)]) / ddy
    return gx, gy


def naive_laplacian9(a, dx):
    """Nine-point stencil [edges 2, diagonals 1, center -12] / (3 dx^2)."""
    nx, ny = a.shape
    out = np.zeros_like(a)
    for i in range(nx):
        for j in range(ny):
            ip, im = wrap(i + 1, nx), wrap(i - 1, nx)
            jp, jm = wrap(j + 1, ny), wrap(j - 1, ny)
            out[i, j] = (
                2.0 * (a[ip, j] + a[im, j] + a[i, jp] + a[i, jm])
                + a[ip, jp] + a[ip, jm] + a[im, jp] + a[im, jm]
                - 12.0 * a[i, j]
            ) / (3.0 * dx * dx)
    return out


def naive_sequential_sum(a, dx, dy):
    """Plain left-to-right raster accumulation."""
    total = 0.0
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            total += float(a[i, j])
    return total * dx * dy


def stencil_symbol_min(dx, n=721):
    """Most negative eigenvalue of the nine-point stencil over Fourier modes.

    The symbol at wavenumbers (X, Y) in [0, pi]^2 follows from substituting
    plane waves into the stencil.
    """
    X = np.linspace(0.0, np.pi, n)[:, None]
    Y = np.linspace(0.0, np.pi, n)[None, :]
    sym = (
        2.0 * (2.0 * np.cos(X) + 2.0 * np.cos(Y))
        + 2.0 * np.cos(X + Y) + 2.0 * np.cos(X - Y)
        - 12.0
    ) / (3.0 * dx * dx)
    return float(sym.min())


def disk_cells(r_sq, n=51):
    """Integer lattice points of the open disk about (n//2, n//2).

    Returns (count, farthest on-axis offset); n only needs to exceed the disk.
    """
    c = n // 2
    count = 0
    max_axis = 0
    for i in range(n):
        for j in range(n):
            if (i - c) ** 2 + (j - c) ** 2 < r_sq:
                count += 1
                if j == c:
                    max_axis = max(max_axis, abs(i - c))
    return count, max_axis


def branchy_angle(gx, gy):
    """Quadrant-branch arctangent as circulated reference codes write it.

    Unhandled cases (both components zero, or gy = 0 with gx > 0) fall through
    to 0.
    """
    if gx == 0.0:
        if gy < 0.0:
            return -0.5 * math.pi
        if gy > 0.0:
            return 0.5 * math.pi
        return 0.0
    if gx > 0.0:
        if gy < 0.0:
            return 2.0 * math.pi + math.atan(gy / gx)
        if gy > 0.0:
            return math.atan(gy / gx)
        return 0.0
    return math.pi + math.atan(gy / gx)


def reference_step(phi, temp, mp, dx, dt, paper_divisor=True,
                   replicate_bug=False, chi=None, freeze_temperature=False):
    """One explicit update of the coupled equations, written longhand.

    mp is any object with eps_bar, delta, j_mode, theta0, alpha, gamma, t_eq,
    latent_heat, tau, noise_amp attributes.  Returns (phi_new, temp_new).
    """
    nx, ny = phi.shape
    gx, gy = naive_gradient(phi, dx, dx, paper_divisor)
    lap_phi = naive_laplacian9(phi, dx)
    lap_t = naive_laplacian9(temp, dx)

    theta = np.zeros_like(phi)
    eps = np.zeros_like(phi)
    epsp = np.zeros_like(phi)
    for i in range(nx):
        for j in range(ny):
            th = math.atan2(gy[i, j], gx[i, j])
            theta[i, j] = th
            u = mp.j_mode * (th - mp.theta0)
            eps[i, j] = mp.eps_bar * (1.0 + mp.delta * math.cos(u))
            epsp[i, j] = -mp.eps_bar * mp.j_mode * mp.delta * math.sin(u)

    eps2 = eps * eps
    ge2x, ge2y = naive_gradient(eps2, dx, dx, paper_divisor)
    if replicate_bug:
        ge2x = np.full_like(ge2x, ge2x[nx - 1, ny - 1])
        ge2y = np.full_like(ge2y, ge2y[nx - 1, ny - 1])

    ddx = dx if paper_divisor else 2.0 * dx
    phi_new = np.zeros_like(phi)
    temp_new = np.zeros_like(temp)
    for i in range(nx):
        for j in range(ny):
            ip, im = wrap(i + 1, nx), wrap(i - 1, nx)
            jp, jm = wrap(j + 1, ny), wrap(j - 1, ny)
            term1 = (eps[i, jp] * epsp[i, jp] * gx[i, jp]
                     - eps[i, jm] * epsp[i, jm] * gx[i, jm]) / ddx
            term2 = -(eps[ip, j] * epsp[ip, j] * gy[ip, j]
                      - eps[im, j] * epsp[im, j] * gy[im, j]) / ddx
            term3 = ge2x[i, j] * gx[i, j] + ge2y[i, j] * gy[i, j]
            m = mp.alpha / math.pi * math.atan(mp.gamma * (mp.t_eq - temp[i, j]))
            rhs = (term1 + term2 + term3
                   + eps2[i, j] * lap_phi[i, j]
                   + phi[i, j] * (1.0 - phi[i, j]) * (phi[i, j] - 0.5 + m))
            if chi is not None:
                rhs += mp.noise_amp * phi[i, j] * (1.0 - phi[i, j]) * chi[i, j]
            dphi = rhs * dt / mp.tau
            phi_new[i, j] = phi[i, j] + dphi
            if freeze_temperature:
                temp_new[i, j] = temp[i, j]
            else:
                temp_new[i, j] = temp[i, j] + dt * lap_t[i, j] + mp.latent_heat * dphi
    return phi_new, temp_new


def rotated90(a, k=1):
    """Periodic rotation about cell (n//2, n//2); also correct on even grids,
    where np.rot90 would pivot about a half-cell point instead."""
    n0, n1 = a.shape
    assert n0 == n1
    c = n0 // 2
    out = np.array(a)
    for _ in range(k % 4):
        ii, jj = np.meshgrid(np.arange(n0), np.arange(n0), indexing="ij")
        src_i = (c + (jj - c)) % n0
        src_j = (c - (ii - c)) % n0
        out = out[src_i, src_j]
    return np.ascontiguousarray(out)


def naive_pgm_bytes(a):
    """Expected binary graymap payload: clamp to [0, 1], round half up,
    top row = highest y index."""
    nx, ny = a.shape
    rows = []
    for j in range(ny - 1, -1, -1):
        row = bytearray()
        for i in range(nx):
            v = min(max(a[i, j], 0.0), 1.0)
            row.append(int(math.floor(v * 255.0 + 0.5)))
        rows.append(bytes(row))
    return b"P5\n%d %d\n255\n" % (nx, ny) + b"".join(rows)
