"""Run configuration: INI-style sections of flat key = value pairs.

CLI flags override config-file values, which override the defaults below.
``nlstw --print-config`` dumps every default.
"""

import configparser
import io

import numpy as np

from .functionals import ChiCutoff
from .grid import Grid
from .nonlinearity import (CubicQuintic, CutoffPhi, GrossPitaevskii,
                           ModelInvalidError, Tabulated)


class ConfigError(ValueError):
    pass


DEFAULTS = {
    "model": {
        "nonlinearity": "gp",        # gp | cubic-quintic | tabulated
        "alpha1": "1.0",
        "alpha3": "3.0",
        "alpha5": "2.0",
        "table_csv": "",             # rows of s,F(s) for tabulated
    },
    "grid": {
        "dim": "3",
        "sizes": "64",               # one value or comma list
        "half_widths": "10.0",       # one value or comma list; fixes spacings
    },
    "speed": {
        "c": "",                     # absolute speed, or
        "c_frac": "0.5",             # fraction of v_s when c is empty
    },
    "ansatz": {
        "R": "6.0",
        "eps": "1.0",
        "A": "",                     # empty = R
        "slack": "0.03",
    },
    "minimize": {
        "max_iters": "20000",
        "tol_residual": "1e-3",
        "tol_constraint": "1e-4",
        "project_every": "25",
        "gauge_every": "400",
        "step0": "",
        "armijo_shrink": "0.5",
        "armijo_slope": "1e-4",
    },
    "regularize": {
        "h": "0.2",
        "max_iters": "400",
        "tol": "1e-4",
    },
    "verify": {
        "seed": "12345",
        "size": "32",
    },
    "run": {
        "threads": "0",              # 0 = automatic; NLSW_THREADS overrides
    },
}


def default_config_text():
    buf = io.StringIO()
    for section, items in DEFAULTS.items():
        buf.write("[%s]\n" % section)
        for k, v in items.items():
            buf.write("%s = %s\n" % (k, v))
        buf.write("\n")
    return buf.getvalue()


def load_config(path=None, overrides=None):
    """Merged settings dict-of-dicts (defaults < file < overrides)."""
    cfg = {s: dict(items) for s, items in DEFAULTS.items()}
    if path:
        parser = configparser.ConfigParser()
        read = parser.read(path)
        if not read:
            raise ConfigError("cannot read config file %s" % path)
        for section in parser.sections():
            if section not in cfg:
                raise ConfigError("unknown config section [%s]" % section)
            for k, v in parser.items(section):
                if k not in cfg[section]:
                    raise ConfigError("unknown key %s in section [%s]" % (k, section))
                cfg[section][k] = v
    for (section, key), value in (overrides or {}).items():
        if value is None:
            continue
        cfg[section][key] = str(value)
    return cfg


def _floats(text):
    return [float(t) for t in str(text).split(",") if t.strip()]


def _ints(text):
    return [int(t) for t in str(text).split(",") if t.strip()]


def build_model(cfg):
    section = cfg["model"]
    kind = section["nonlinearity"].strip().lower()
    try:
        if kind == "gp":
            model = GrossPitaevskii()
        elif kind == "cubic-quintic":
            model = CubicQuintic(float(section["alpha1"]),
                                 float(section["alpha3"]),
                                 float(section["alpha5"]))
        elif kind == "tabulated":
            path = section["table_csv"].strip()
            if not path:
                raise ConfigError("tabulated nonlinearity needs table_csv")
            data = np.loadtxt(path, delimiter=",")
            model = Tabulated(data[:, 0], data[:, 1])
        else:
            raise ConfigError("unknown nonlinearity %r" % kind)
        model.validate()
    except ModelInvalidError as exc:
        raise ConfigError(str(exc)) from exc
    return model


def build_grid(cfg):
    g = cfg["grid"]
    dim = int(g["dim"])
    sizes = _ints(g["sizes"])
    hws = _floats(g["half_widths"])
    if len(sizes) == 1:
        sizes = sizes * dim
    if len(hws) == 1:
        hws = hws * dim
    if len(sizes) != dim or len(hws) != dim:
        raise ConfigError("sizes/half_widths must have 1 or dim entries")
    try:
        return Grid(tuple(sizes), tuple(2.0 * hw / n for hw, n in zip(hws, sizes)))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def resolve_speed(cfg, model):
    s = cfg["speed"]
    if s["c"].strip():
        c = float(s["c"])
    else:
        c = float(s["c_frac"]) * model.v_s
    if not (0.0 < c < model.v_s):
        raise ConfigError(
            "speed c=%g is not subsonic: traveling waves require 0 < c < v_s = %g"
            % (c, model.v_s))
    return c


def build_cutoffs(model):
    return CutoffPhi(model.r0), ChiCutoff(model.r0)
