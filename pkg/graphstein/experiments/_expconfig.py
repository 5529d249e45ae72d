"""
Experiment config files.

The format is flat ``key = value`` lines, followed by optional sections
that hold one list item per line. Comments start with ``#``. Example:

```
# Power of gKSS against two-star perturbations
experiment = power-curve
null = ergm
n = 20
beta = -2, 0
sweep = beta2
trials = 100

[grid]
-0.5
0
0.5

[kernels]
const
wl1
wl3
```

Keys:

* `experiment`: power-curve, assess-samples or runtime-bench.
* `name`: the experiment id written in result rows (default: the experiment).
* `null`: ergm, grg_torus, grg_square or barabasi_albert.
* `n`: the number of vertices. `beta`: ERGM coefficients (edge, two-star).
  `counts`: raw or scaled. `r`: grg radius. `m`, `alpha`: Barabasi-Albert.
* `sweep`: the null parameter that the [grid] values replace to get the
  alternatives (beta1, beta2, r, m or alpha).
* `test`: gkss or agrasst. Default gkss for an ergm null, agrasst otherwise.
* `statistic`: density, bidegree or common_neighbours (AgraSSt).
* `convention`: flip or literal.
* `B`, `l`, `a`, `trials`, `n_fit`, `seed`, `workers`: the test settings.
  `B = all` averages over all vertex pairs.
* `observed`, `samples`: a graph file and a sample directory (assess-samples).
* `sizes`, `graphs`, `repeats`: runtime-bench settings.

Sections: [grid] (alternative values), [kernels] (kernel names as
accepted by KernelSpec.parse), [statistics] (assess-samples) and
[regimes] (runtime-bench: sparse, dense).
"""

import os

from .._config import config
from .._errors import ConfigError, InvalidArgument
from ..graphs import ErgmModel, GeneratorSpec, STATISTIC_KINDS, BIDEGREE
from ..kernels import KernelSpec
from ..stein import CONVENTIONS, FLIP


POWER_CURVE = "power-curve"
ASSESS_SAMPLES = "assess-samples"
RUNTIME_BENCH = "runtime-bench"

EXPERIMENTS = POWER_CURVE, ASSESS_SAMPLES, RUNTIME_BENCH

NULL_KINDS = "ergm", "grg_torus", "grg_square", "barabasi_albert"
SECTIONS = "grid", "kernels", "statistics", "regimes"

# The beta of the density regimes of the runtime benchmark
REGIMES = {"sparse": (-2.0, 0.0), "dense": (1.0, 0.0)}

# The kernel rows of the result tables
DEFAULT_KERNELS = [
    "const",
    "gveh0.1",
    "gveh1",
    "gveh10",
    "gveh100",
    "sp",
    "krw2",
    "krw3",
    "krw4",
    "krw5",
    "grw1e-5",
    "grw1e-4",
    "grw1e-3",
    "grw1e-2",
    "grw5e-2",
    "wl1",
    "wl3",
    "wl5",
    "glet3",
    "conglet3",
    "conglet4",
]


def _floats(text):
    return [float(v) for v in text.replace(";", ",").split(",") if v.strip()]


def _ints(text):
    return [int(v) for v in text.replace(";", ",").split(",") if v.strip()]


def _resample_size(text):
    return None if text.lower() == "all" else int(text)


# name -> (converter, default). A default of None means: from the config.
_KEYS = {
    "experiment": (str, None),
    "name": (str, ""),
    "null": (str, "ergm"),
    "n": (int, 20),
    "beta": (_floats, [-2.0, 0.0]),
    "counts": (str, "raw"),
    "r": (float, 0.3),
    "m": (int, 1),
    "alpha": (float, 1.0),
    "sweep": (str, ""),
    "test": (str, ""),
    "statistic": (str, BIDEGREE),
    "convention": (str, FLIP),
    "B": (_resample_size, None),
    "l": (int, None),
    "a": (float, None),
    "trials": (int, None),
    "n_fit": (int, None),
    "seed": (int, None),
    "workers": (int, None),
    "observed": (str, ""),
    "samples": (str, ""),
    "sizes": (_ints, [20, 40]),
    "graphs": (int, 100),
    "repeats": (int, 10),
    "fast": (lambda v: v.lower() in ("true", "yes", "on", "1"), False),
}

_FROM_CONFIG = {
    "B": "resample_size",
    "l": "n_simulate",
    "a": "level",
    "trials": "trials",
    "n_fit": "n_fit",
    "seed": "seed",
    "workers": "workers",
}


class ExperimentConfig:
    """A parsed and validated experiment config. Values are available as
    attributes named like the keys; the sections as lists `grid`,
    `kernels` (KernelSpec objects), `statistics` and `regimes`.
    """

    def __init__(self, values, sections, filename=None):
        self.filename = filename
        for key, (_, default) in _KEYS.items():
            value = values.get(key, default)
            if value is None and key in _FROM_CONFIG:
                value = getattr(config, _FROM_CONFIG[key])
            setattr(self, key, value)
        self.name = self.name or self.experiment
        self.grid = sections.get("grid", [])
        self.kernels = sections.get("kernels", [])
        self.statistics = sections.get("statistics", [])
        self.regimes = sections.get("regimes", [])

    @property
    def is_agrasst(self):
        return self.test == "agrasst"

    def null_spec(self):
        """Get the null model as an ErgmModel or GeneratorSpec."""
        if self.null == "ergm":
            return ErgmModel.e2s(self.beta[0], self.beta[1], self.n, self.counts)
        elif self.null == "grg_torus":
            return GeneratorSpec.grg_torus(self.n, self.r)
        elif self.null == "grg_square":
            return GeneratorSpec.grg_square(self.n, self.r)
        else:
            return GeneratorSpec.barabasi_albert(self.n, self.m, self.alpha)

    def tested_null(self):
        """Get the null in the form the test needs: the ErgmModel itself
        for gKSS, a GeneratorSpec for AgraSSt.
        """
        null = self.null_spec()
        if self.is_agrasst and isinstance(null, ErgmModel):
            return GeneratorSpec.ergm(null)
        return null

    def alternative(self, value):
        """Get the generator of the alternative with the swept parameter set to value."""
        null = self.null_spec()
        spec = GeneratorSpec.ergm(null) if isinstance(null, ErgmModel) else null
        return spec.with_param(self.sweep, value)

    def override(self, seed=None, workers=None):
        """Apply command line overrides."""
        if seed is not None:
            self.seed = int(seed)
        if workers is not None:
            self.workers = int(workers)
        return self

    def __repr__(self):
        return f"<ExperimentConfig {self.name} ({self.experiment})>"


def load_experiment_config(filename):
    """Read and validate an experiment config file."""
    try:
        with open(filename, "rb") as f:
            text = f.read().decode()
    except OSError as err:
        raise ConfigError(f"Cannot read config {filename}: {err}")
    except UnicodeDecodeError as err:
        msg = f"Config {filename} is not valid UTF-8: {err.reason} at byte {err.start}"
        raise ConfigError(msg) from None
    return parse_experiment_config(text, os.fspath(filename))


def parse_experiment_config(text, filename=None):
    """Parse and validate the text of an experiment config."""
    values = {}
    sections = {}
    section = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"Invalid section header {line!r}", lineno)
            section = line[1:-1].strip().lower()
            if section not in SECTIONS:
                raise ConfigError(f"Unknown section [{section}]", lineno)
            sections.setdefault(section, [])
            continue
        if section is not None:
            try:
                sections[section].append(_section_item(section, line))
            except (ValueError, InvalidArgument) as err:
                raise ConfigError(f"Invalid [{section}] item {line!r}: {err}", lineno)
            continue
        key, sep, raw = line.partition("=")
        key, raw = key.strip(), raw.strip()
        if not sep:
            raise ConfigError(f"Expected 'key = value', got {line!r}", lineno)
        if key not in _KEYS:
            raise ConfigError(f"Unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"Duplicate key {key!r}", lineno)
        try:
            values[key] = _KEYS[key][0](raw)
        except ValueError as err:
            raise ConfigError(f"Invalid value for {key}: {err}", lineno)
    cfg = ExperimentConfig(values, sections, filename)
    validate_experiment_config(cfg, sections)
    return cfg


def _section_item(section, line):
    if section == "grid":
        return float(line)
    elif section == "kernels":
        return KernelSpec.parse(line)
    elif section == "statistics":
        if line not in STATISTIC_KINDS:
            raise ValueError(f"expected one of {STATISTIC_KINDS}")
        return line
    else:
        if line not in REGIMES:
            raise ValueError(f"expected one of {tuple(REGIMES)}")
        return line


def validate_experiment_config(cfg, sections):
    if cfg.experiment not in EXPERIMENTS:
        raise ConfigError(f"experiment must be one of {EXPERIMENTS}, got {cfg.experiment!r}")
    if cfg.null not in NULL_KINDS:
        raise ConfigError(f"null must be one of {NULL_KINDS}, got {cfg.null!r}")
    if not cfg.test:
        cfg.test = "gkss" if cfg.null == "ergm" else "agrasst"
    if cfg.test not in ("gkss", "agrasst"):
        raise ConfigError(f"test must be gkss or agrasst, got {cfg.test!r}")
    if cfg.test == "gkss" and cfg.null != "ergm":
        raise ConfigError("A gkss test needs an ergm null")
    if cfg.statistic not in STATISTIC_KINDS:
        raise ConfigError(f"statistic must be one of {STATISTIC_KINDS}")
    if cfg.convention not in CONVENTIONS:
        raise ConfigError(f"convention must be one of {CONVENTIONS}")
    if cfg.null == "ergm" and len(cfg.beta) != 2:
        raise ConfigError("beta needs two values (edge, two-star)")
    for key in ("l", "trials", "n_fit", "workers", "graphs", "repeats"):
        if getattr(cfg, key) < 1:
            raise ConfigError(f"{key} must be >= 1")
    if cfg.B is not None and cfg.B < 1:
        raise ConfigError("B must be >= 1 or 'all'")
    if not (0.0 < cfg.a < 1.0):
        raise ConfigError("a must be in (0, 1)")
    try:
        cfg.null_spec()
    except InvalidArgument as err:
        raise ConfigError(f"Invalid null model: {err}")

    if cfg.experiment == POWER_CURVE:
        if not cfg.kernels:
            raise ConfigError("power-curve needs a nonempty [kernels] section")
        if not cfg.grid:
            raise ConfigError("power-curve needs a nonempty [grid] section")
        if not cfg.sweep:
            raise ConfigError("power-curve needs a sweep parameter")
        try:
            cfg.alternative(cfg.grid[0])
        except (InvalidArgument, KeyError) as err:
            raise ConfigError(f"Cannot sweep {cfg.sweep!r}: {err}")
    elif cfg.experiment == ASSESS_SAMPLES:
        if not cfg.observed or not cfg.samples:
            raise ConfigError("assess-samples needs observed and samples")
        if "kernels" in sections and not cfg.kernels:
            raise ConfigError("The [kernels] section is empty")
        cfg.kernels = cfg.kernels or [KernelSpec.parse(k) for k in DEFAULT_KERNELS]
        cfg.statistics = cfg.statistics or [cfg.statistic]
    else:
        if "kernels" in sections and not cfg.kernels:
            raise ConfigError("The [kernels] section is empty")
        cfg.kernels = cfg.kernels or [KernelSpec.parse(k) for k in DEFAULT_KERNELS]
        cfg.regimes = cfg.regimes or list(REGIMES)
        if not cfg.sizes or min(cfg.sizes) < 2:
            raise ConfigError("sizes must hold vertex counts >= 2")
