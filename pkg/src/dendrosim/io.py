"""Config parsing, snapshot/PGM/CSV serialization, and the run manifest.

The config format is flat "key = value" text; unknown keys are a hard error so
typos in sweep scripts fail loudly.  Snapshots are a short human-readable
header followed by raw little-endian float64 payload, lossless by design.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone

import numpy as np

from .lattice import DIVISOR_MODES, Field
from .physics import ModelParams
from .solver import SimParams

SNAPSHOT_MAGIC = b"PFDS1\n"

CONFIG_KEYS = (
    "nx", "ny", "dx", "dt", "total_steps", "tau", "eps_bar", "delta", "j_mode",
    "theta0", "alpha", "gamma", "t_eq", "latent_heat", "noise_amp", "rng_seed",
    "seed_radius_sq", "divisor_mode", "snapshot_every", "diagnostics_every",
    "replicate_appendix_bug",
)

_INT_KEYS = {"nx", "ny", "total_steps", "j_mode", "rng_seed", "snapshot_every", "diagnostics_every"}
_FLOAT_KEYS = {
    "dx", "dt", "tau", "eps_bar", "delta", "theta0", "alpha", "gamma", "t_eq",
    "latent_heat", "noise_amp", "seed_radius_sq",
}
_BOOL_KEYS = {"replicate_appendix_bug"}

_MODEL_KEYS = {
    "tau", "eps_bar", "delta", "j_mode", "theta0", "alpha", "gamma", "t_eq",
    "latent_heat", "noise_amp",
}


class ConfigError(ValueError):
    pass


class SnapshotFormatError(ValueError):
    pass


def default_config() -> dict:
    """The shipped defaults as a typed key -> value dict."""
    return params_to_dict(SimParams())


def parse_value(key: str, text: str):
    """Parse one config value with the type that key demands."""
    if key not in CONFIG_KEYS:
        raise ConfigError(f"unknown config key '{key}'")
    text = text.strip()
    try:
        if key in _INT_KEYS:
            return int(text, 10)
        if key in _FLOAT_KEYS:
            return float(text)
        if key in _BOOL_KEYS:
            if text in ("true", "false"):
                return text == "true"
            raise ValueError(text)
        if text not in DIVISOR_MODES:
            raise ValueError(text)
        return text
    except ValueError:
        raise ConfigError(f"could not parse value {text!r} for config key '{key}'") from None


def parse_config_text(text: str) -> dict:
    """Parse "key = value" lines into a typed override dict (no defaults applied)."""
    overrides = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        overrides[key] = parse_value(key, value)
    return overrides


def params_from_dict(values: dict, allow_unstable: bool = False) -> SimParams:
    """Build validated SimParams from a complete typed config dict."""
    merged = params_to_dict(SimParams())
    for key, val in values.items():
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown config key '{key}'")
        merged[key] = val
    model_kwargs = {k: merged[k] for k in _MODEL_KEYS}
    sim_kwargs = {k: merged[k] for k in CONFIG_KEYS if k not in _MODEL_KEYS}
    try:
        model = ModelParams(**model_kwargs)
        return SimParams(model=model, allow_unstable=allow_unstable, **sim_kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def parse_config(text: str, allow_unstable: bool = False) -> SimParams:
    """Parse a config document merged over the shipped defaults."""
    return params_from_dict(parse_config_text(text), allow_unstable=allow_unstable)


def params_to_dict(p: SimParams) -> dict:
    m = p.model
    return {
        "nx": p.nx, "ny": p.ny, "dx": p.dx, "dt": p.dt,
        "total_steps": p.total_steps, "tau": m.tau, "eps_bar": m.eps_bar,
        "delta": m.delta, "j_mode": m.j_mode, "theta0": m.theta0,
        "alpha": m.alpha, "gamma": m.gamma, "t_eq": m.t_eq,
        "latent_heat": m.latent_heat, "noise_amp": m.noise_amp,
        "rng_seed": p.rng_seed, "seed_radius_sq": p.seed_radius_sq,
        "divisor_mode": p.divisor_mode, "snapshot_every": p.snapshot_every,
        "diagnostics_every": p.diagnostics_every,
        "replicate_appendix_bug": p.replicate_appendix_bug,
    }


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_config(p: SimParams) -> str:
    """Serialize resolved params so that parse_config round-trips exactly."""
    d = params_to_dict(p)
    return "".join(f"{key} = {_format_value(d[key])}\n" for key in CONFIG_KEYS)


def write_snapshot(field: Field, path, name: str = "phi", step: int = 0, dt: float = 0.0) -> int:
    """Write a field as header + raw float64 payload; returns bytes written."""
    header = SNAPSHOT_MAGIC + (
        f"nx {field.nx}\n"
        f"ny {field.ny}\n"
        f"dx {field.dx!r}\n"
        f"dt {dt!r}\n"
        f"step {step}\n"
        f"field {name}\n"
        "\n"
    ).encode("ascii")
    payload = field.data.astype("<f8").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)
    return len(header) + len(payload)


def read_snapshot(path) -> tuple[Field, dict]:
    """Read a snapshot back; returns (field, meta) with meta holding step/dt/name."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if not blob.startswith(SNAPSHOT_MAGIC):
        if blob.startswith(b"PFDS"):
            raise SnapshotFormatError(
                f"unsupported snapshot version {blob[:5]!r}, expected {SNAPSHOT_MAGIC[:-1]!r}"
            )
        raise SnapshotFormatError("bad magic: not a snapshot file")
    try:
        end = blob.index(b"\n\n", len(SNAPSHOT_MAGIC))
    except ValueError:
        raise SnapshotFormatError("truncated snapshot header") from None
    header = {}
    for line in blob[len(SNAPSHOT_MAGIC):end].decode("ascii").splitlines():
        key, _, value = line.partition(" ")
        header[key] = value
    for key in ("nx", "ny", "dx", "dt", "step", "field"):
        if key not in header:
            raise SnapshotFormatError(f"snapshot header missing '{key}'")
    nx, ny = int(header["nx"]), int(header["ny"])
    payload = blob[end + 2:]
    expected = 8 * nx * ny
    if len(payload) != expected:
        raise SnapshotFormatError(
            f"payload size mismatch: expected {expected} bytes for {nx}x{ny}, got {len(payload)}"
        )
    data = np.frombuffer(payload, dtype="<f8").reshape(nx, ny)
    field = Field.from_array(data.copy(), float(header["dx"]))
    meta = {"step": int(header["step"]), "dt": float(header["dt"]), "field": header["field"]}
    return field, meta


def write_pgm(field: Field, path) -> None:
    """8-bit binary graymap of a field, clamped to [0, 1], round-half-up.

    Image width is nx and height ny; row 0 (top) is the j = ny-1 grid row, so
    +y points up when viewed.
    """
    q = np.clip(field.data, 0.0, 1.0)
    pixels = np.floor(q * 255.0 + 0.5).astype(np.uint8)
    img = np.ascontiguousarray(pixels.T[::-1, :])
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (field.nx, field.ny))
        fh.write(img.tobytes())


DIAGNOSTICS_HEADER = (
    "step,time,solid_fraction,tip_px,tip_mx,tip_py,tip_my,"
    "conservation_sum,free_energy,arm_count"
)


def write_diagnostics_csv(records, path) -> None:
    lines = [DIAGNOSTICS_HEADER]
    for r in records:
        lines.append(
            f"{r.step},{r.time!r},{r.solid_fraction!r},{r.tip_px!r},{r.tip_mx!r},"
            f"{r.tip_py!r},{r.tip_my!r},{r.conservation_sum!r},{r.free_energy!r},"
            f"{r.arm_count}"
        )
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def write_field_csv(field: Field, path) -> None:
    """Field values as CSV, one line per grid row (fixed i), full precision."""
    with open(path, "w", encoding="ascii") as fh:
        for row in field.data:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def write_manifest(path, params: SimParams, outputs, versions: dict, created: str | None = None) -> None:
    """Record the exact resolved params, tool versions, and emitted files.

    `created_utc` is the only non-reproducible entry; everything else depends
    solely on the run inputs.
    """
    doc = {
        "versions": dict(versions),
        "created_utc": created or datetime.now(timezone.utc).isoformat(),
        "params": params_to_dict(params),
        "outputs": list(outputs),
    }
    with open(path, "w", encoding="ascii") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def read_manifest(path) -> dict:
    with open(path, "r", encoding="ascii") as fh:
        return json.load(fh)
