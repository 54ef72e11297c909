"""Experiment configuration files (INI syntax, one experiment per file).

Every value lookup goes through :class:`ExperimentConfig`, which reports
errors as ``path:line: [section] key: message``.
"""

from __future__ import annotations

import configparser
import math
import re
from fractions import Fraction

import numpy as np

from .errors import ConfigError, DispersiveError

_KEY_RE = re.compile(r"^\s*([A-Za-z0-9_.\-]+)\s*[=:]")
_SEC_RE = re.compile(r"^\s*\[([^\]]+)\]")

_MISSING = object()


def _line_map(text):
    """``{(section, key): line}`` and ``{section: line}`` from raw INI text."""
    keys, secs = {}, {}
    section = None
    for i, line in enumerate(text.splitlines(), start=1):
        m = _SEC_RE.match(line)
        if m:
            section = m.group(1).strip()
            secs.setdefault(section, i)
            continue
        m = _KEY_RE.match(line)
        if m and section is not None:
            keys.setdefault((section, m.group(1).strip().lower()), i)
    return keys, secs


class ExperimentConfig:
    """Typed access to an INI experiment description."""

    def __init__(self, text, source="<config>"):
        self.source = source
        self.text = text
        self._parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"),
                                                 interpolation=None)
        try:
            self._parser.read_string(text, source=source)
        except configparser.Error as exc:
            raise ConfigError(f"{source}: {exc}") from exc
        self._keys, self._secs = _line_map(text)

    @classmethod
    def load(cls, path):
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"{path}: cannot read configuration: {exc}") from exc
        return cls(text, source=str(path))

    @classmethod
    def from_dict(cls, sections, source="<flags>"):
        lines = []
        for sec, items in sections.items():
            lines.append(f"[{sec}]")
            for k, v in items.items():
                if v is None:
                    continue
                if isinstance(v, (list, tuple)):
                    v = ", ".join(str(x) for x in v)
                lines.append(f"{k} = {v}")
            lines.append("")
        return cls("\n".join(lines), source=source)

    # diagnostics ----------------------------------------------------------
    def where(self, section, key=None):
        if key is not None and (section, key.lower()) in self._keys:
            return f"{self.source}:{self._keys[(section, key.lower())]}"
        if section in self._secs:
            return f"{self.source}:{self._secs[section]}"
        return self.source

    def error(self, section, key, message):
        loc = self.where(section, key)
        label = f"[{section}]" + (f" {key}" if key else "")
        return ConfigError(f"{loc}: {label}: {message}")

    # access -----------------------------------------------------------------
    def has(self, section, key=None):
        if key is None:
            return self._parser.has_section(section)
        return self._parser.has_option(section, key)

    def sections(self):
        return self._parser.sections()

    def items(self, section):
        if not self._parser.has_section(section):
            return {}
        return dict(self._parser.items(section))

    def raw(self, section, key, default=_MISSING):
        if self._parser.has_option(section, key):
            v = self._parser.get(section, key).strip()
            if v != "":
                return v
        if default is _MISSING:
            raise self.error(section, key, "missing required value")
        return default

    def get_str(self, section, key, default=_MISSING, choices=None):
        v = self.raw(section, key, default)
        if choices is not None and v is not None and v not in choices:
            raise self.error(section, key, f"expected one of {sorted(choices)}, got {v!r}")
        return v

    def get_float(self, section, key, default=_MISSING):
        v = self.raw(section, key, default)
        if v is None or isinstance(v, (int, float)):
            return v
        try:
            return parse_number(v)
        except ValueError as exc:
            raise self.error(section, key, f"not a number: {v!r}") from exc

    def get_int(self, section, key, default=_MISSING):
        v = self.raw(section, key, default)
        if v is None or isinstance(v, int):
            return v
        try:
            return int(v)
        except ValueError as exc:
            raise self.error(section, key, f"not an integer: {v!r}") from exc

    def get_bool(self, section, key, default=_MISSING):
        v = self.raw(section, key, default)
        if isinstance(v, bool) or v is None:
            return v
        low = v.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise self.error(section, key, f"not a boolean: {v!r}")

    def get_list(self, section, key, default=_MISSING, cast=float):
        v = self.raw(section, key, default)
        if v is None or isinstance(v, list):
            return v
        out = []
        for part in v.split(","):
            part = part.strip()
            if not part:
                continue
            try:
                out.append(cast(part) if cast is not float else parse_number(part))
            except ValueError as exc:
                raise self.error(section, key, f"bad list entry {part!r}") from exc
        return out

    def get_grid(self, section, prefix, default_points=16, spacing="log"):
        """``prefix_min``, ``prefix_max``, ``prefix_points`` as an array."""
        if self.has(section, prefix + "_values"):
            return np.array(self.get_list(section, prefix + "_values"))
        lo = self.get_float(section, prefix + "_min")
        hi = self.get_float(section, prefix + "_max")
        n = self.get_int(section, prefix + "_points", default_points)
        if not (lo > 0 and hi > lo) and spacing == "log":
            raise self.error(section, prefix + "_min", "log grid needs 0 < min < max")
        return np.geomspace(lo, hi, n) if spacing == "log" else np.linspace(lo, hi, n)

    def wrap(self, section, key, fn, *args, **kw):
        """Call ``fn`` and re-raise package errors with the config location."""
        try:
            return fn(*args, **kw)
        except ConfigError:
            raise
        except DispersiveError as exc:
            raise self.error(section, key, str(exc)) from exc


def parse_number(text):
    """Float from ``1.5``, ``1e-3``, ``1/3``, ``inf``."""
    t = text.strip().lower()
    if t in ("inf", "+inf", "infinity"):
        return math.inf
    if "/" in t:
        return float(Fraction(t))
    return float(t)


def model_params(cfg, section="model"):
    """Keyword arguments for :func:`make_model` from a ``[model]`` section."""
    items = cfg.items(section)
    if "kind" not in items:
        raise cfg.error(section, "kind", "missing required value")
    out = {}
    for k, v in items.items():
        if k == "kind":
            continue
        v = v.strip()
        low = v.lower()
        if low in ("true", "false"):
            out[k] = low == "true"
            continue
        try:
            out[k] = Fraction(v) if k in ("a", "b", "c", "d") and items["kind"] == "abcd" else parse_number(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise cfg.error(section, k, f"not a number: {v!r}") from exc
    return items["kind"].strip(), out
