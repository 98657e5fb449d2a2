"""Flat key = value run configuration: parsing, defaults, validation, echo.

The file format is one `key = value` per line, with blank lines and `#`
comments ignored.  Every key has a default; unknown keys, malformed lines,
and duplicates are errors that name the line.  The resolved configuration is
echoed to `config.resolved` in the output directory in a form that parses
back to the identical RunConfig.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_config",
           "format_config", "default_config"]


class ConfigError(ValueError):
    """Invalid configuration file or values (CLI exit code 2)."""


@dataclass(frozen=True)
class RunConfig:
    """Validated run settings; lengths in metres, times in seconds."""

    nx: int = 64
    ny: int = 64
    Lx: float = 4.0e7
    Ly: float = 4.0e7
    f: float = 1.0e-4
    g: float = 9.8
    H: float = 5960.0
    u0: float = 20.0
    jet_width: float = -1.0      # -1 resolves to Ly / 16
    b0: float = 2000.0
    r0: float = -1.0             # -1 resolves to Ly / 9
    xc: float = -1.0             # -1 resolves to Lx / 2
    yc: float = -1.0             # -1 resolves to Ly / 4
    dt: float = 3600.0
    T: float = 3600.0
    M: int | None = None         # None means auto from T and the fastest mode
    propagator: str = "exact"
    tol: float = 1.0e-10
    t_end: float = 1296000.0     # 15 days
    snapshot_every: float = 86400.0
    workers: int = 1
    output_dir: str = "out"
    seed: int = 0
    ref_dt: float = 180.0
    reference_path: str = ""


_INT_KEYS = {"nx", "ny", "workers", "seed"}
_FLOAT_KEYS = {"Lx", "Ly", "f", "g", "H", "u0", "jet_width", "b0", "r0",
               "xc", "yc", "dt", "T", "tol", "t_end", "snapshot_every", "ref_dt"}
_STR_KEYS = {"propagator", "output_dir", "reference_path"}
_ALL_KEYS = _INT_KEYS | _FLOAT_KEYS | _STR_KEYS | {"M"}


def _convert(key: str, raw: str, where: str):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key == "M":
            return None if raw == "auto" else int(raw)
    except ValueError:
        kind = "an integer" if key in _INT_KEYS or key == "M" else "a number"
        raise ConfigError(f"{where}: key {key!r} needs {kind}, got {raw!r}") from None
    return raw


def _is_multiple(value: float, dt: float) -> bool:
    n = value / dt
    return abs(n - round(n)) <= 1e-9 * max(1.0, abs(n))


def _validate(cfg: RunConfig) -> RunConfig:
    def bad(msg: str):
        raise ConfigError(f"invalid config: {msg}")

    for name in ("nx", "ny"):
        n = getattr(cfg, name)
        if n < 8 or n % 2 != 0:
            bad(f"{name} must be even and >= 8, got {n}")
    for name in ("Lx", "Ly", "g", "H", "u0", "dt", "tol", "ref_dt"):
        if not getattr(cfg, name) > 0:
            bad(f"{name} must be positive, got {getattr(cfg, name)}")

    # sentinel -1 means "derive from the domain size"
    upd = {}
    if cfg.jet_width < 0:
        upd["jet_width"] = cfg.Ly / 16.0
    if cfg.r0 < 0:
        upd["r0"] = cfg.Ly / 9.0
    if cfg.xc < 0:
        upd["xc"] = 0.5 * cfg.Lx
    if cfg.yc < 0:
        upd["yc"] = 0.25 * cfg.Ly
    cfg = replace(cfg, **upd)

    if not 0 <= cfg.b0 < cfg.H:
        bad(f"need 0 <= b0 < H, got b0 = {cfg.b0}, H = {cfg.H}")
    if not cfg.r0 < min(cfg.Lx, cfg.Ly) / 2.0:
        bad(f"r0 = {cfg.r0} must be below half the domain size")
    if cfg.T < 0:
        bad(f"T must be nonnegative, got {cfg.T}")
    if cfg.M is not None and cfg.M < 0:
        bad(f"M must be nonnegative or auto, got {cfg.M}")
    if cfg.T == 0.0 and cfg.M not in (None, 0):
        bad(f"T = 0 admits only M = 0, got M = {cfg.M}")
    if cfg.propagator not in ("exact", "chebyshev"):
        bad(f"propagator must be exact or chebyshev, got {cfg.propagator!r}")
    if cfg.t_end < 0:
        bad(f"t_end must be nonnegative, got {cfg.t_end}")
    if not _is_multiple(cfg.t_end, cfg.dt):
        bad(f"t_end = {cfg.t_end} must be a multiple of dt = {cfg.dt}")
    if cfg.snapshot_every != 0.0 and not _is_multiple(cfg.snapshot_every, cfg.dt):
        bad(f"snapshot_every = {cfg.snapshot_every} must be 0 or a multiple of dt")
    if cfg.snapshot_every < 0:
        bad(f"snapshot_every must be nonnegative, got {cfg.snapshot_every}")
    if cfg.workers < 1:
        bad(f"workers must be at least 1, got {cfg.workers}")
    return cfg


def parse_config(text: str, where: str = "config") -> RunConfig:
    """Parse flat key = value text into a validated RunConfig."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{where} line {lineno}: expected key = value, "
                              f"got {stripped!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in _ALL_KEYS:
            raise ConfigError(f"{where} line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{where} line {lineno}: duplicate key {key!r}")
        values[key] = _convert(key, raw, f"{where} line {lineno}")
    return _validate(RunConfig(**values))


def load_config(path: str) -> RunConfig:
    """Read and validate a configuration file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config(text, where=path)


def default_config() -> RunConfig:
    """The all-defaults configuration, fully resolved."""
    return _validate(RunConfig())


def format_config(cfg: RunConfig) -> str:
    """Render a RunConfig as flat key = value text that parses back identically."""
    lines = []
    for fld in fields(RunConfig):
        value = getattr(cfg, fld.name)
        if fld.name == "M":
            text = "auto" if value is None else str(value)
        elif isinstance(value, float):
            text = repr(value)
        else:
            text = str(value)
        lines.append(f"{fld.name} = {text}")
    return "\n".join(lines) + "\n"
