"""Run configuration: a flat key/value text file plus CLI overrides."""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .vertex_model import FAMILIES, LatticeSpec, Regime, random_lattice

_KNOWN_KEYS = {
    "regime",
    "eta",
    "L",
    "M",
    "xi",
    "xi_spread",
    "seed",
    "tolerance",
    "perm_cap",
    "output_dir",
}


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs; one seed drives all sampling."""

    family: str = "rational"
    eta: complex = 1.0 + 0.0j
    length: int = 6
    magnons: int = 2
    xi: tuple[complex, ...] | None = None  # None: sampled from seed + spread
    xi_spread: float | None = None  # None: per-family default
    seed: int = 7
    tolerance: float | None = None  # None: per-check defaults
    perm_cap: int = 9
    output_dir: Path = Path("out")

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"regime must be one of {FAMILIES}, got {self.family!r}")
        if self.length < 1:
            raise ConfigError("L must be at least 1")
        if not 0 <= self.magnons <= self.length:
            raise ConfigError(f"M={self.magnons} must satisfy 0 <= M <= L={self.length}")
        if self.tolerance is not None and self.tolerance <= 0:
            raise ConfigError("tolerance must be positive")
        if self.xi is not None and len(self.xi) != self.length:
            raise ConfigError(
                f"explicit xi list has {len(self.xi)} entries for L={self.length}"
            )
        if self.perm_cap < 1:
            raise ConfigError("perm_cap must be at least 1")
        object.__setattr__(self, "eta", complex(self.eta))
        if self.xi is not None:
            object.__setattr__(self, "xi", tuple(complex(x) for x in self.xi))
        object.__setattr__(self, "output_dir", Path(self.output_dir))

    def regime(self) -> Regime:
        try:
            return Regime(self.family, self.eta)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def resolve_lattice(self, rng: np.random.Generator) -> LatticeSpec:
        """Explicit lattice, or one sampled deterministically from the rng."""
        if self.xi is not None:
            return LatticeSpec(self.length, self.xi)
        return random_lattice(self.length, self.regime(), rng, spread=self.xi_spread)

    def with_overrides(self, tolerance=None, seed=None, output_dir=None) -> "RunConfig":
        cfg = self
        if tolerance is not None:
            cfg = replace(cfg, tolerance=tolerance)
        if seed is not None:
            cfg = replace(cfg, seed=seed)
        if output_dir is not None:
            cfg = replace(cfg, output_dir=Path(output_dir))
        return cfg


def parse_config_text(text: str) -> RunConfig:
    """Parse the flat key: value format; '#' starts a comment."""
    fields: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ConfigError(f"line {lineno}: expected 'key: value', got {raw!r}")
        key = key.strip()
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        fields[key] = value.strip()

    kwargs: dict = {}
    try:
        if "regime" in fields:
            kwargs["family"] = fields["regime"]
        if "eta" in fields:
            kwargs["eta"] = complex(fields["eta"])
        if "L" in fields:
            kwargs["length"] = int(fields["L"])
        if "M" in fields:
            kwargs["magnons"] = int(fields["M"])
        if "xi" in fields and fields["xi"] != "random":
            kwargs["xi"] = tuple(complex(p.strip()) for p in fields["xi"].split(","))
        if "xi_spread" in fields:
            kwargs["xi_spread"] = float(fields["xi_spread"])
        if "seed" in fields:
            kwargs["seed"] = int(fields["seed"])
        if "tolerance" in fields:
            kwargs["tolerance"] = float(fields["tolerance"])
        if "perm_cap" in fields:
            kwargs["perm_cap"] = int(fields["perm_cap"])
        if "output_dir" in fields:
            kwargs["output_dir"] = Path(fields["output_dir"])
    except ValueError as exc:
        raise ConfigError(f"bad value in config: {exc}") from exc
    return RunConfig(**kwargs)


def load_config(path) -> RunConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    return parse_config_text(path.read_text())


def config_as_dict(config: RunConfig, lattice: LatticeSpec | None = None) -> dict:
    """Deterministic JSON-friendly echo, with the resolved lattice if given."""
    return {
        "regime": config.family,
        "eta": repr(config.eta),
        "L": config.length,
        "M": config.magnons,
        "xi": [repr(x) for x in (lattice.xi if lattice else (config.xi or ()))],
        "xi_spread": config.xi_spread,
        "seed": config.seed,
        "tolerance": config.tolerance,
        "perm_cap": config.perm_cap,
    }
