"""Plain-text run configuration: one ``key = value`` per line, ``#`` comments.

Numeric values are constant expressions (``3/4``, ``2*pi``).  Example::

    # cusp at t = 0
    l = t
    m = 1
    H = 1/t
    c1 = 1/10
    c2 = 1/10
    domain = -1, 1
    samples = 2001
"""
from __future__ import annotations

from dataclasses import dataclass, fields
from importlib import resources
from pathlib import Path

from . import expr as ex
from .errors import ParseError, SingrevError
from .profile import ProblemSpec
from .quad import DEFAULT_TOL


class ConfigError(SingrevError, ValueError):
    code = "E_CONFIG"

    def __init__(self, message: str, line: int | None = None, key: str | None = None,
                 source: str = "<config>"):
        where = source
        if line is not None:
            where += f":{line}"
        if key is not None:
            where += f" ({key})"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.key = key


@dataclass
class RunConfig:
    l: str
    m: str
    t_min: float
    t_max: float
    c1: float | None = None
    c2: float | None = None
    H: str | None = None
    samples: int = 2001
    L: float | None = None
    n_theta: int = 64
    tol: float = DEFAULT_TOL
    title: str | None = None
    trace_out: str | None = None
    report_out: str | None = None
    plot_out: str | None = None
    mesh_out: str | None = None

    def spec(self, need_constants: bool = True) -> ProblemSpec:
        if need_constants and (self.c1 is None or self.c2 is None):
            raise ConfigError("c1 and c2 are required for this command")
        return ProblemSpec(
            l=ex.parse(self.l),
            m=ex.parse(self.m),
            c1=0.0 if self.c1 is None else self.c1,
            c2=0.0 if self.c2 is None else self.c2,
            t_min=self.t_min,
            t_max=self.t_max,
            H_display=ex.parse(self.H) if self.H else None,
            L=self.L,
        )


_EXPR_KEYS = {"l", "m", "H"}
_FLOAT_KEYS = {"c1", "c2", "t_min", "t_max", "L", "tol"}
_INT_KEYS = {"samples", "n_theta"}
_TEXT_KEYS = {"title", "trace_out", "report_out", "plot_out", "mesh_out"}
_KNOWN = {f.name for f in fields(RunConfig)} | {"domain"}


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    values: dict[str, object] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", lineno, source=source)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KNOWN:
            raise ConfigError(f"unknown key {key!r}", lineno, key, source)
        if key in lines:
            raise ConfigError(f"duplicate key (first on line {lines[key]})", lineno, key, source)
        if not value:
            raise ConfigError("empty value", lineno, key, source)
        lines[key] = lineno
        try:
            if key in _EXPR_KEYS:
                ex.parse(value)  # validate now, keep the text
                values[key] = value
            elif key in _FLOAT_KEYS:
                values[key] = ex.parse_constant(value)
            elif key in _INT_KEYS:
                number = ex.parse_constant(value)
                if number != int(number) or number < 1:
                    raise ConfigError("expected a positive integer", lineno, key, source)
                values[key] = int(number)
            elif key == "domain":
                parts = value.split(",")
                if len(parts) != 2:
                    raise ConfigError("expected 't_min, t_max'", lineno, key, source)
                values["t_min"] = ex.parse_constant(parts[0])
                values["t_max"] = ex.parse_constant(parts[1])
                lines["t_min"] = lines["t_max"] = lineno
            else:
                values[key] = value
        except ParseError as exc:
            raise ConfigError(f"{exc.message} at column {exc.position + 1}: {value!r}",
                              lineno, key, source) from None
        except ArithmeticError as exc:
            raise ConfigError(str(exc), lineno, key, source) from None
    for key in ("l", "m", "t_min", "t_max"):
        if key not in values:
            raise ConfigError(f"missing required key {key!r}", source=source)
    cfg = RunConfig(**values)
    if not cfg.t_min < cfg.t_max:
        raise ConfigError("empty domain", lines.get("t_min"), "domain", source)
    if not cfg.t_min <= 0.0 <= cfg.t_max:
        raise ConfigError("domain must contain t = 0 (integrals are anchored there)",
                          lines.get("t_min"), "domain", source)
    if cfg.samples < 2:
        raise ConfigError("need at least 2 samples", lines.get("samples"), "samples", source)
    if cfg.n_theta < 3:
        raise ConfigError("need at least 3 angular steps", lines.get("n_theta"), "n_theta",
                          source)
    if cfg.tol <= 0:
        raise ConfigError("tol must be positive", lines.get("tol"), "tol", source)
    return cfg


def fixture_names() -> list[str]:
    root = resources.files("singrev") / "fixtures"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".cfg"))


def fixture_text(name: str) -> str:
    return (resources.files("singrev") / "fixtures" / f"{name}.cfg").read_text()


def load_config(path_or_name: str) -> RunConfig:
    """Read a config file, or a bundled fixture when no such file exists."""
    path = Path(path_or_name)
    if path.is_file():
        return parse_config(path.read_text(), str(path))
    if path_or_name in fixture_names():
        return parse_config(fixture_text(path_or_name), f"fixture:{path_or_name}")
    raise FileNotFoundError(f"no config file or fixture named {path_or_name!r}")
