"""Search budgets and the key=value experiment config format."""
from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

from .errors import DomainError

CONFIG_VERSION = 1
BUDGET_ENV = "WSATLAB_BUDGET"


@dataclass(frozen=True)
class Budget:
    """Limits for the bounded searches.

    ``candidates`` and ``seconds`` bound the exact wsat search, ``extensions``
    bounds each path-power backtracking search, ``max_exact_edges`` is the
    largest host the exact solver accepts.
    """

    candidates: int = 10**8
    seconds: float = 60.0
    extensions: int = 10**7
    max_exact_edges: int = 45
    ham_max_n_s3: int = 120
    ham_max_n_s4: int = 80

    @classmethod
    def from_env(cls, base: "Budget | None" = None) -> "Budget":
        """Apply ``WSATLAB_BUDGET`` (``key=value`` pairs, comma separated)."""
        budget = base or cls()
        spec = os.environ.get(BUDGET_ENV, "").strip()
        if not spec:
            return budget
        kinds = {f.name: f.type for f in fields(cls)}
        updates = {}
        for item in spec.split(","):
            key, _, value = item.partition("=")
            key = key.strip()
            if key not in kinds:
                raise DomainError(f"{BUDGET_ENV}: unknown budget key {key!r}")
            updates[key] = float(value) if key == "seconds" else int(float(value))
        return replace(budget, **updates)


def default_budget() -> Budget:
    return Budget.from_env()


@dataclass
class ExperimentConfig:
    """A command plus its parameters, stored one ``key=value`` per line."""

    command: str
    params: dict[str, str]
    version: int = CONFIG_VERSION

    def to_text(self) -> str:
        lines = [f"version={self.version}", f"command={self.command}"]
        lines.extend(f"{k}={v}" for k, v in sorted(self.params.items()))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        params: dict[str, str] = {}
        command = ""
        version = CONFIG_VERSION
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise DomainError(f"config line {lineno}: expected key=value")
            key, value = key.strip().replace("-", "_"), value.strip()
            if key == "command":
                command = value
            elif key == "version":
                version = int(value)
            else:
                params[key] = value
        if version > CONFIG_VERSION:
            raise DomainError(f"config version {version} is newer than supported {CONFIG_VERSION}")
        return cls(command, params, version)
