"""Explicit time integration of the coupled phase/temperature equations.

Each step is a strict two-pass (Jacobi) update: pass 1 evaluates every stencil
quantity from the current fields, pass 2 combines them cell by cell, so no
freshly updated value leaks into another cell within the same step.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .lattice import (
    PAPER_CODE,
    DIVISOR_MODES,
    Field,
    divisors,
    gradient_arrays,
    laplacian9_arrays,
    shifted,
)
from .physics import (
    ModelParams,
    RngStream,
    epsilon_of_theta,
    interface_angle,
    m_of_temperature,
    noise_term,
    reaction_term,
)


class BlowupError(RuntimeError):
    """Raised when a step produces a non-finite value."""

    def __init__(self, step: int, field_name: str, cell: tuple[int, int]):
        self.step = step
        self.field_name = field_name
        self.cell = cell
        super().__init__(f"non-finite {field_name} at step {step}, cell {cell}")


@dataclass
class SimParams:
    """Complete run description: model constants plus grid and schedule."""

    model: ModelParams = dataclass_field(default_factory=ModelParams)
    nx: int = 500
    ny: int = 500
    dx: float = 0.03
    dt: float = 1e-4
    total_steps: int = 2000
    seed_radius_sq: float = 20.0
    rng_seed: int = 0
    divisor_mode: str = PAPER_CODE
    snapshot_every: int = 500
    diagnostics_every: int = 100
    replicate_appendix_bug: bool = False
    allow_unstable: bool = False

    def __post_init__(self):
        if self.nx < 3 or self.ny < 3:
            raise ValueError(f"nx/ny must be >= 3, got {self.nx}x{self.ny}")
        if self.dx <= 0.0:
            raise ValueError(f"dx must be > 0, got {self.dx}")
        if self.dt <= 0.0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.total_steps < 0:
            raise ValueError(f"total_steps must be >= 0, got {self.total_steps}")
        if self.seed_radius_sq < 0.0:
            raise ValueError(f"seed_radius_sq must be >= 0, got {self.seed_radius_sq}")
        if math.sqrt(self.seed_radius_sq) >= min(self.nx, self.ny) / 2:
            raise ValueError(
                f"seed_radius_sq={self.seed_radius_sq} does not fit a {self.nx}x{self.ny} grid"
            )
        if self.divisor_mode not in DIVISOR_MODES:
            raise ValueError(f"divisor_mode must be one of {DIVISOR_MODES}, got {self.divisor_mode!r}")
        if self.snapshot_every < 1:
            raise ValueError(f"snapshot_every must be >= 1, got {self.snapshot_every}")
        if self.diagnostics_every < 1:
            raise ValueError(f"diagnostics_every must be >= 1, got {self.diagnostics_every}")
        ok, dt_thermal, dt_phase = stability_check(self)
        if not ok and not self.allow_unstable:
            raise ValueError(
                f"dt={self.dt} exceeds the explicit stability bound "
                f"min(dt_max_thermal={dt_thermal}, dt_max_phase={dt_phase}); "
                "reduce dt or set the unstable override"
            )


@dataclass
class SimState:
    phi: Field
    temp: Field
    step: int = 0
    time: float = 0.0


def stability_check(p: SimParams) -> tuple[bool, float, float]:
    """Explicit-Euler step limits for the thermal and phase equations.

    The nine-point stencil's most negative eigenvalue is -16 / (3 dx^2), giving
    dt <= 3 dx^2 / 8 for the heat equation and the same bound scaled by
    tau / eps_max^2 for the phase equation.
    """
    dt_thermal = 3.0 * p.dx * p.dx / 8.0
    eps_max = p.model.eps_bar * (1.0 + p.model.delta)
    if eps_max > 0.0:
        dt_phase = dt_thermal * p.model.tau / (eps_max * eps_max)
    else:
        dt_phase = math.inf
    ok = p.dt <= min(dt_thermal, dt_phase)
    return ok, dt_thermal, dt_phase


def initialize(p: SimParams) -> SimState:
    """Solid disk of radius^2 seed_radius_sq (in cells) at the grid center,
    surrounded by supercooled liquid at temperature 0."""
    di = np.arange(p.nx)[:, None] - p.nx // 2
    dj = np.arange(p.ny)[None, :] - p.ny // 2
    phi = np.where(di * di + dj * dj < p.seed_radius_sq, 1.0, 0.0)
    temp = np.zeros((p.nx, p.ny))
    return SimState(
        phi=Field.from_array(phi, p.dx),
        temp=Field.from_array(temp, p.dx),
        step=0,
        time=0.0,
    )


def _row_bands(n: int, workers: int) -> list[tuple[int, int]]:
    nbands = max(1, min(workers, n))
    base, extra = divmod(n, nbands)
    bands, lo = [], 0
    for b in range(nbands):
        hi = lo + base + (1 if b < extra else 0)
        bands.append((lo, hi))
        lo = hi
    return bands


def step(
    state: SimState,
    p: SimParams,
    rng: RngStream | None = None,
    workers: int = 1,
    freeze_temperature: bool = False,
) -> SimState:
    """Advance one step.

    Pass 1 (whole grid): gradients and Laplacians of phi, Laplacian of T, the
    interface angle, eps/eps' fields, the flux product eps*eps'*grad(phi) with
    its four neighbor shifts, the gradient of eps^2, and the noise field.
    Pass 2 (optionally split into row bands) is purely elementwise on those
    arrays, so the result is bitwise identical for any worker count:

        term1 =  d/dy [eps eps' dphi/dx]
        term2 = -d/dx [eps eps' dphi/dy]
        term3 =  grad(eps^2) . grad(phi)
        dphi  = (dt/tau) (term1 + term2 + eps^2 lap(phi) + term3
                          + reaction + noise)
        T'    =  T + dt lap(T) + latent_heat * dphi

    With replicate_appendix_bug the eps^2 gradient degenerates to the two
    scalars left over from the last raster cell, reproducing the circulated
    reference code's stale-variable behavior.
    """
    mp = p.model
    phi = state.phi.data
    temp = state.temp.data
    dx = state.phi.dx
    dy = state.phi.dy

    gx, gy = gradient_arrays(phi, dx, dy, p.divisor_mode)
    lap_phi = laplacian9_arrays(phi, dx, dy)
    lap_t = laplacian9_arrays(temp, dx, dy)

    theta = interface_angle(gx, gy)
    eps, eps_prime = epsilon_of_theta(theta, mp)
    eps2 = eps * eps
    flux = eps * eps_prime
    qx = flux * gx
    qy = flux * gy
    qx_jp = shifted(qx, 0, 1)
    qx_jm = shifted(qx, 0, -1)
    qy_ip = shifted(qy, 1, 0)
    qy_im = shifted(qy, -1, 0)

    ge2x, ge2y = gradient_arrays(eps2, dx, dy, p.divisor_mode)
    if p.replicate_appendix_bug:
        # stale scalars from the last cell visited by the reference code
        ge2x = np.full_like(ge2x, ge2x[-1, -1])
        ge2y = np.full_like(ge2y, ge2y[-1, -1])

    chi = None
    if mp.noise_amp > 0.0:
        if rng is None:
            raise ValueError("noise_amp > 0 requires an RngStream")
        chi = rng.uniform_sym(phi.shape)

    xdiv, ydiv = divisors(dx, dy, p.divisor_mode)
    dt_over_tau = p.dt / mp.tau
    phi_new = np.empty_like(phi)
    temp_new = np.empty_like(temp)

    def sweep(lo: int, hi: int):
        s = slice(lo, hi)
        term1 = (qx_jp[s] - qx_jm[s]) / ydiv
        term2 = -(qy_ip[s] - qy_im[s]) / xdiv
        term3 = ge2x[s] * gx[s] + ge2y[s] * gy[s]
        m = m_of_temperature(temp[s], mp)
        rhs = (term1 + term2) + term3 + (eps2[s] * lap_phi[s] + reaction_term(phi[s], m))
        if chi is not None:
            rhs = rhs + noise_term(phi[s], mp.noise_amp, chi[s])
        dphi = rhs * dt_over_tau
        phi_new[s] = phi[s] + dphi
        if freeze_temperature:
            temp_new[s] = temp[s]
        else:
            temp_new[s] = temp[s] + p.dt * lap_t[s] + mp.latent_heat * dphi

    bands = _row_bands(phi.shape[0], workers)
    if len(bands) == 1:
        sweep(*bands[0])
    else:
        with ThreadPoolExecutor(max_workers=len(bands)) as pool:
            list(pool.map(lambda b: sweep(*b), bands))

    new_step = state.step + 1
    for name, arr in (("phi", phi_new), ("temp", temp_new)):
        if not np.isfinite(arr).all():
            bad = np.argwhere(~np.isfinite(arr))[0]
            raise BlowupError(new_step, name, (int(bad[0]), int(bad[1])))

    return SimState(
        phi=Field(state.phi.nx, state.phi.ny, dx, dy, phi_new),
        temp=Field(state.temp.nx, state.temp.ny, dx, dy, temp_new),
        step=new_step,
        time=new_step * p.dt,
    )


def run(
    p: SimParams,
    on_snapshot=None,
    on_diagnostics=None,
    workers: int = 1,
):
    """Initialize and advance total_steps steps, emitting through the sinks.

    Snapshots are emitted at step 0, every snapshot_every steps, and at the
    final step; diagnostics likewise with diagnostics_every.  Identical params
    (including rng_seed) give bitwise identical emitted data for any worker
    count.  On blow-up the last good state is emitted as a snapshot before the
    error propagates.

    Returns (final state, list of DiagnosticsRecord).
    """
    from .diagnostics import measure

    state = initialize(p)
    rng = RngStream(p.rng_seed)
    records = []

    def emit(st):
        if on_snapshot is not None:
            on_snapshot(st)

    def sample(st):
        rec = measure(st, p.model)
        records.append(rec)
        if on_diagnostics is not None:
            on_diagnostics(rec)

    emit(state)
    sample(state)
    for _ in range(p.total_steps):
        try:
            state = step(state, p, rng, workers=workers)
        except BlowupError:
            emit(state)
            raise
        last = state.step == p.total_steps
        if state.step % p.snapshot_every == 0 or last:
            emit(state)
        if state.step % p.diagnostics_every == 0 or last:
            sample(state)
    return state, records
