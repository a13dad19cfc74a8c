"""
Experiment configuration

A configuration is a nested dict addressed with dotted keys. Sources, lowest precedence first:
settings defaults, the config file, dedicated command line flags, `--override key=value` pairs.

Config files hold `key = value` lines with `#` comments; values are read as JSON and fall back to
plain strings, ie.

    alpha = 0.5
    method = power:0.5,mirror:0.5,mirror:1
    schedule.outer_steps = 20
    dims = [2, 8]

A file starting with `{` is read as one JSON document instead.
"""
import copy
import hashlib
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Tuple

import dpath

from .exceptions import ConfigError, DomainError
from .exploration import ExplorationSchedule
from .settings import EXPERIMENT, EXPERIMENT_DEFAULTS
from .transforms import Family, TransformConfig

logger = logging.getLogger(__name__)

SEPARATOR = '.'

METHODS = ('power', 'mirror', 'ais')

METHOD_FAMILIES = {
    'power': Family.POWER,
    'mirror': Family.EXPONENTIAL,
}


def parse_value(raw: str) -> Any:
    raw = raw.strip()
    try:
        return json.loads(raw)
    except ValueError:
        return raw


def parse_assignment(line: str, line_number: int = None) -> Tuple[str, Any]:
    if '=' not in line:
        where = "" if line_number is None else "line {}: ".format(line_number)
        raise ConfigError("{}expected `key = value`, got {!r}".format(where, line))
    key, raw = line.split('=', 1)
    key = key.strip()
    if not key:
        raise ConfigError("empty key in {!r}".format(line))
    return key, parse_value(raw)


def parse_config_text(text: str) -> Dict[str, Any]:
    """
    :return: dotted key -> value
    """
    if text.lstrip().startswith('{'):
        try:
            document = json.loads(text)
        except ValueError as e:
            raise ConfigError("invalid JSON config: {}".format(e))
        return dict(_leaves(document))

    values = {}
    for line_number, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        key, value = parse_assignment(line, line_number)
        values[key] = value
    return values


def load_config_file(path: str) -> Dict[str, Any]:
    try:
        with open(path, 'r', encoding='utf-8') as source:
            return parse_config_text(source.read())
    except OSError as e:
        raise ConfigError("cannot read config file {}: {}".format(path, e))


def _leaves(document: dict, prefix: str = ''):
    for key, value in document.items():
        path = prefix + str(key)
        # dicts keyed by non-identifiers (label maps) are values, not sections
        if isinstance(value, dict) and value and all(str(k).isidentifier() for k in value):
            yield from _leaves(value, path + SEPARATOR)
        else:
            yield path, value


def apply(options: dict, values: Dict[str, Any]) -> dict:
    """
    Sets dotted keys, creating intermediate dicts
    """
    for key, value in values.items():
        if isinstance(value, dict) and value and all(str(k).isidentifier() for k in value):
            apply(options, {key + SEPARATOR + k: v for k, v in _leaves(value)})
        else:
            dpath.new(options, key, value, separator=SEPARATOR)
    return options


def lookup(options: dict, key: str, default=None):
    try:
        return dpath.get(options, key, separator=SEPARATOR)
    except KeyError:
        return default


def defaults(experiment: str) -> dict:
    if experiment not in EXPERIMENT_DEFAULTS:
        raise ConfigError("unknown experiment {!r}, choose one of {}".format(
            experiment, ', '.join(EXPERIMENT_DEFAULTS)))
    options = copy.deepcopy(EXPERIMENT)
    return apply(options, dict(_leaves(copy.deepcopy(EXPERIMENT_DEFAULTS[experiment]))))


def merge_sources(experiment: str, file_values: Dict[str, Any] = None, flags: Dict[str, Any] = None,
                  overrides: Iterable[str] = ()) -> dict:
    options = defaults(experiment)
    apply(options, file_values or {})
    apply(options, {k: v for k, v in (flags or {}).items() if v is not None})
    apply(options, dict(parse_assignment(o) for o in overrides))
    options['experiment'] = experiment
    return options


def config_hash(options: dict) -> str:
    canonical = json.dumps(options, sort_keys=True, separators=(',', ':'), default=str)
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()


@dataclass(frozen=True)
class MethodSpec:
    name: str
    alpha: float

    @property
    def slug(self) -> str:
        return "{}_alpha{:g}".format(self.name, self.alpha)

    def __str__(self):
        return "{}-{}".format(self.alpha, self.name)


def parse_methods(value, alpha: float) -> List[MethodSpec]:
    """
    `power`, `power:0.5,mirror:1` or a list of such items; a method without order uses `alpha`
    """
    items = value if isinstance(value, (list, tuple)) else str(value).split(',')
    methods = []
    for item in items:
        name, _, order = str(item).strip().partition(':')
        name = name.strip().lower()
        if name not in METHODS:
            raise ConfigError("unknown method {!r}, choose from {}".format(name, ', '.join(METHODS)))
        try:
            method_alpha = float(order) if order else float(alpha)
        except ValueError:
            raise ConfigError("invalid alpha in method {!r}".format(item))
        methods.append(MethodSpec(name, method_alpha))
    if not methods:
        raise ConfigError("at least one method is needed")
    return methods


@dataclass
class ExperimentConfig:
    experiment: str
    methods: List[MethodSpec]
    alpha: float
    transform: dict
    schedule: ExplorationSchedule
    b_infty: Optional[float] = None
    carry_weights: bool = False
    skip_flagged: bool = False
    warn_only: bool = False
    dims: List[int] = field(default_factory=list)
    replicates: int = 1
    master_seed: int = 0
    dataset_path: Optional[str] = None
    minibatch: int = 100
    output_dir: str = 'out'
    export_format: str = 'csv'
    # the merged nested dict, experiment specific keys included
    options: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_options(cls, options: dict) -> 'ExperimentConfig':
        experiment = options.get('experiment')
        try:
            alpha = float(options['alpha'])
            if not math.isfinite(alpha):
                raise ConfigError("alpha must be finite")
            schedule = ExplorationSchedule.from_dict(options['schedule'])
            b_infty = options['transform'].get('b_infty')
            config = cls(
                experiment=experiment,
                methods=parse_methods(options['method'], alpha),
                alpha=alpha,
                transform=dict(options['transform']),
                schedule=schedule,
                b_infty=None if b_infty is None else float(b_infty),
                carry_weights=bool(options['carry_weights']),
                skip_flagged=bool(options['skip_flagged']),
                warn_only=bool(options['warn_only']),
                dims=[int(d) for d in (options['dims'] or [])],
                replicates=int(options['replicates']),
                master_seed=int(options['master_seed']),
                dataset_path=options.get('dataset_path'),
                minibatch=int(options['minibatch']),
                output_dir=str(options['output_dir']),
                export_format=str(options['export_format']),
                options=options,
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError("invalid configuration: {}".format(e))
        config.validate()
        return config

    def validate(self):
        if self.replicates < 1:
            raise ConfigError("replicates must be >= 1, got {}".format(self.replicates))
        if not 0 <= self.master_seed < 2 ** 64:
            raise ConfigError("master_seed must be a 64-bit unsigned integer")
        if self.experiment == 'toy' and not self.dims:
            raise ConfigError("toy experiment requires dims")
        if any(d < 1 for d in self.dims):
            raise ConfigError("dimensions must be >= 1")
        if self.experiment == 'blr' and not self.dataset_path:
            raise ConfigError("blr experiment requires dataset_path")
        if self.minibatch < 1:
            raise ConfigError("minibatch must be >= 1")
        for method in self.methods:
            if method.name in METHOD_FAMILIES:
                self.transform_config(method)

    def transform_config(self, method: MethodSpec) -> TransformConfig:
        options = dict(self.transform, family=METHOD_FAMILIES[method.name].value)
        try:
            return TransformConfig.from_dict(method.alpha, options)
        except (DomainError, ValueError) as e:
            raise ConfigError("invalid transform for {}: {}".format(method, e))

    def get(self, key: str, default=None):
        return lookup(self.options, key, default)

    @property
    def hash(self) -> str:
        return config_hash(self.options)


def build_config(experiment: str, config_file: str = None, flags: Dict[str, Any] = None,
                 overrides: Iterable[str] = ()) -> ExperimentConfig:
    file_values = load_config_file(config_file) if config_file else {}
    return ExperimentConfig.from_options(merge_sources(experiment, file_values, flags, overrides))
