"""Scenario configuration: presets, config files, validation."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError

SCENARIOS = ("fig1", "fig2", "fig3", "fig4", "custom")
METHODS = ("dense", "branches", "auto")

# dense evolution is the oracle path; beyond this size the branch path is used
DENSE_LIMIT = 200


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str = "custom"
    n0: float = 100.0
    nbar: float = 1.0
    phi0: float = 0.0
    n_ph: int = 0  # 0 = auto truncation rule
    gt_max: float = 10.0
    steps: int = 400
    init_qubit: tuple[float, float, float] = (0.0, 0.0, 1.0)  # Bloch (r_x, r_y, r_z)
    method: str = "auto"
    rank_tol: float = 1e-12
    out_path: str = ""

    def validate(self) -> "ScenarioConfig":
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}")
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        if self.n0 <= 0:
            raise ConfigError(f"n0 must be > 0, got {self.n0}")
        if self.nbar < 0:
            raise ConfigError(f"nbar must be >= 0, got {self.nbar}")
        if self.steps < 2:
            raise ConfigError(f"steps must be >= 2, got {self.steps}")
        if self.gt_max <= 0:
            raise ConfigError(f"gt_max must be > 0, got {self.gt_max}")
        if self.n_ph < 0:
            raise ConfigError(f"n_ph must be >= 0, got {self.n_ph}")
        if not (0 < self.rank_tol < 1):
            raise ConfigError(f"rank_tol must be in (0, 1), got {self.rank_tol}")
        r = np.asarray(self.init_qubit, dtype=float)
        if r.shape != (3,):
            raise ConfigError(f"init_qubit must have three components, got {self.init_qubit}")
        if np.linalg.norm(r) > 1.0 + 1e-12:
            raise ConfigError(f"init_qubit Bloch vector has |r| > 1: {self.init_qubit}")
        return self


def bloch_to_density(r: tuple[float, float, float]) -> np.ndarray:
    """Qubit density matrix (|e>, |g>) from a Bloch vector."""
    rx, ry, rz = (float(v) for v in r)
    return 0.5 * np.array(
        [[1.0 + rz, rx - 1j * ry], [rx + 1j * ry, 1.0 - rz]], dtype=complex
    )


def preset(name: str) -> ScenarioConfig:
    """Published-scenario presets; grids resolve each Rabi period."""
    if name == "fig1":
        n0 = 100.0
        return ScenarioConfig(
            scenario="fig1", n0=n0, nbar=1.0, gt_max=2.2 * np.pi * np.sqrt(n0),
            steps=400, init_qubit=(0.0, 0.0, 1.0),
        )
    if name == "fig2":
        n0 = 500.0
        return ScenarioConfig(
            scenario="fig2", n0=n0, nbar=1.0, gt_max=4.0 * np.pi / (2.0 * np.sqrt(n0)),
            steps=200, init_qubit=(0.0, 0.0, 1.0),
        )
    if name == "fig3":
        n0 = 100.0
        return ScenarioConfig(
            scenario="fig3", n0=n0, nbar=1.0, gt_max=1.1 * np.pi * np.sqrt(n0),
            steps=400, init_qubit=(0.0, 1.0, 0.0),
        )
    if name == "fig4":
        n0 = 50.0
        return ScenarioConfig(
            scenario="fig4", n0=n0, nbar=1.0, gt_max=2.2 * np.pi * np.sqrt(n0),
            steps=400, init_qubit=(0.0, 0.0, 0.0),
        )
    if name == "custom":
        return ScenarioConfig()
    raise ConfigError(f"unknown scenario {name!r}")


_FLOAT_KEYS = {"n0", "nbar", "phi0", "gt_max", "rank_tol"}
_INT_KEYS = {"n_ph", "steps"}
_STR_KEYS = {"scenario", "method", "out_path"}


def parse_config_file(path: str) -> dict:
    """Flat key=value files, '#' comments, keys matching ScenarioConfig fields."""
    values: dict = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(lines, 1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line.strip()!r}")
        key, raw = (part.strip() for part in text.split("=", 1))
        try:
            if key in _FLOAT_KEYS:
                values[key] = float(raw)
            elif key in _INT_KEYS:
                values[key] = int(raw)
            elif key in _STR_KEYS:
                values[key] = raw
            elif key == "init_qubit" or key == "init":
                values["init_qubit"] = parse_bloch(raw)
            else:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {raw!r}") from exc
    return values


def parse_bloch(raw: str) -> tuple[float, float, float]:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 3:
        raise ConfigError(f"init must be rx,ry,rz, got {raw!r}")
    try:
        rx, ry, rz = (float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"init must be three floats, got {raw!r}") from exc
    return (rx, ry, rz)


def build_config(scenario: str, file_values: dict | None = None, **overrides) -> ScenarioConfig:
    """Preset -> config file -> CLI flags, later sources winning."""
    cfg = preset(scenario)
    merged = dict(file_values or {})
    merged.update({k: v for k, v in overrides.items() if v is not None})
    merged.pop("scenario", None)
    valid = {f for f in ScenarioConfig.__dataclass_fields__}
    unknown = set(merged) - valid
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return replace(cfg, **merged).validate()
