import os
import sys


LOG_LEVELS = ("debug", "info", "warning", "error", "critical")


def to_bool(value):
    """Converts a string to a bool"""
    return str(value).strip().lower() in ("true", "yes", "on", "1")


def to_log_level(value):
    level = str(value).strip().lower()
    if level not in LOG_LEVELS:
        raise ValueError(f"expected one of {', '.join(LOG_LEVELS)}, got {value!r}")
    return level


def to_count(value):
    """Converts to an int that is at least one."""
    count = int(value)
    if count < 1:
        raise ValueError(f"expected an int >= 1, got {count}")
    return count


def to_level(value):
    """Converts to a float strictly between zero and one."""
    level = float(value)
    if not 0 < level < 1:
        raise ValueError(f"expected a value in (0, 1), got {level}")
    return level


class Config:
    """Object that holds the default settings of graphstein.

    * `log_level (str)`: the log level for the graphstein logger. Default "info".
    * `workers (int)`: the number of worker processes used to run
      test trials. Default 1 (run in-process).
    * `seed (int)`: the base seed for all randomized operations. Default 0.
    * `resample_size (int)`: the number B of vertex pairs re-sampled for
      each statistic. Default 200.
    * `n_simulate (int)`: the number l of networks simulated from the
      null model in the Monte Carlo test. Default 200.
    * `level (float)`: the test level a. Default 0.05.
    * `n_fit (int)`: the number of generator samples used to fit the
      conditional edge probabilities of AgraSSt. Default 100.
    * `trials (int)`: the number of observed networks per rejection rate.
      Default 100.
    * `slow (bool)`: whether the slow statistical tests run. Default False.

    Experiment config files override these per run. The values themselves
    come from CLI arguments and environment variables, the latter winning:
    ```
    python -m graphstein power-curve --config exp.cfg --workers=4
    python -m graphstein power-curve --config exp.cfg --workers 4
    GRAPHSTEIN_N_SIMULATE=100 GRAPHSTEIN_LOG_LEVEL=debug
    ```
    """

    _ITEMS = [
        ("log_level", to_log_level, "info"),
        ("workers", to_count, 1),
        ("seed", int, 0),
        ("resample_size", to_count, 200),
        ("n_simulate", to_count, 200),
        ("level", to_level, 0.05),
        ("n_fit", to_count, 100),
        ("trials", to_count, 100),
        ("slow", to_bool, False),
    ]
    __slots__ = [name for name, _, _ in _ITEMS]

    def __repr__(self):
        values = ", ".join(f"{name}={getattr(self, name)!r}" for name in self.__slots__)
        return f"<Config {values}>"


config = Config()


def set_config(argv=None, env=None):
    """Set config values. By default argv is sys.argv and env is os.environ."""
    argv = sys.argv if argv is None else argv
    env = os.environ if env is None else env

    values = {name: default for name, _, default in Config._ITEMS}
    values.update(_values_from_argv(argv))
    values.update(_values_from_env(env))
    for name, conv, default in Config._ITEMS:
        raw_value = values[name]
        try:
            value = default if raw_value is default else conv(raw_value)
        except Exception as err:
            raise RuntimeError(f"Could not set config.{name}: {err}")
        setattr(config, name, value)


def _values_from_argv(argv):
    # Both --n_fit and --n-fit are accepted, with "=" or as two args
    flags = {}
    for name, _, _ in Config._ITEMS:
        flags["--" + name] = name
        flags["--" + name.replace("_", "-")] = name
    values = {}
    for i, arg in enumerate(argv):
        flag, eq, raw_value = arg.partition("=")
        name = flags.get(flag)
        if name is None:
            continue
        if not eq:
            if i + 1 >= len(argv):
                raise RuntimeError(f"Value for {arg} not given")
            raw_value = argv[i + 1]
        values[name] = raw_value
    return values


def _values_from_env(env):
    values = {}
    for name, _, _ in Config._ITEMS:
        raw_value = env.get("GRAPHSTEIN_" + name.upper())
        if raw_value:
            values[name] = raw_value
    return values


set_config()
