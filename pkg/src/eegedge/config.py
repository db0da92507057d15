"""Pipeline and synth-spec configuration files.

Both use INI-style ``key = value`` sections::

    [pipeline]
    seed = 0

    [icwmh]
    height = 224
    width = 224
    interpolation = bilinear

    [edge]
    mode = canny
    blur_kernel = 3
    canny_low = 50
    canny_high = 120

    [train]
    lr = 9e-4
    epochs = 100

Unknown sections and keys are rejected. The pipeline seed also seeds
training, so ``[train]`` has no ``seed`` key.
"""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .classifier import TrainConfig
from .edge_detect import EdgeConfig
from .errors import ConfigError
from .icwmh import IcwmhConfig
from .signal_core import SynthSpec


@dataclass(frozen=True)
class IoConfig:
    dataset: str = ""
    out: str = ""


@dataclass(frozen=True)
class PipelineConfig:
    icwmh: IcwmhConfig = field(default_factory=IcwmhConfig)
    edge: EdgeConfig = field(default_factory=EdgeConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    io: IoConfig = field(default_factory=IoConfig)
    seed: int = 0

    def __post_init__(self):
        if self.train.seed != self.seed:
            object.__setattr__(self, "train", dataclasses.replace(self.train, seed=self.seed))

    def with_seed(self, seed):
        return dataclasses.replace(self, seed=int(seed))

    def to_dict(self) -> dict:
        out = {"pipeline": {"seed": self.seed}}
        for name in ("icwmh", "edge", "train", "io"):
            section = dataclasses.asdict(getattr(self, name))
            if name == "train":
                section.pop("seed")
            out[name] = section
        return out

    def to_text(self) -> str:
        return dict_to_ini(self.to_dict())

    @classmethod
    def from_dict(cls, sections: dict) -> "PipelineConfig":
        unknown = set(sections) - {"pipeline", "icwmh", "edge", "train", "io"}
        if unknown:
            raise ConfigError(f"unknown config sections: {sorted(unknown)}")
        pipeline = dict(sections.get("pipeline", {}))
        seed = _coerce("pipeline", "seed", pipeline.pop("seed", 0), int)
        if pipeline:
            raise ConfigError(f"unknown keys in [pipeline]: {sorted(pipeline)}")
        train = dict(sections.get("train", {}))
        if "seed" in train:
            raise ConfigError("[train] takes its seed from [pipeline] seed")
        return cls(
            icwmh=_build(IcwmhConfig, "icwmh", sections.get("icwmh", {})),
            edge=_build(EdgeConfig, "edge", sections.get("edge", {})),
            train=_build(TrainConfig, "train", train, seed=seed),
            io=_build(IoConfig, "io", sections.get("io", {})),
            seed=seed,
        )


def _coerce(section, key, value, kind):
    if not isinstance(value, str):
        return kind(value)
    text = value.strip()
    try:
        if kind is int:
            number = float(text)
            if number != int(number):
                raise ValueError
            return int(number)
        if kind is float:
            return float(text)
        if kind is tuple:
            return tuple(float(v) for v in text.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"[{section}] {key}: cannot parse {value!r} as {kind.__name__}") from None
    return text


def _field_kind(cls, f):
    default = f.default
    if default is dataclasses.MISSING and f.default_factory is not dataclasses.MISSING:
        default = f.default_factory()
    if isinstance(default, bool):
        return bool
    if isinstance(default, (int, float, str, tuple)):
        return type(default)
    if f.name in ("frequencies", "gains"):
        return tuple
    raise TypeError(f"no coercion for {cls.__name__}.{f.name}")


def _build(cls, section, values, **fixed):
    known = {f.name: f for f in dataclasses.fields(cls)}
    kwargs = dict(fixed)
    for key, value in values.items():
        if key not in known or key in fixed:
            raise ConfigError(f"unknown key in [{section}]: {key!r}")
        kind = _field_kind(cls, known[key])
        if kind is tuple and isinstance(value, str) and value.strip().lower() in ("", "none", "auto"):
            kwargs[key] = None
        else:
            kwargs[key] = _coerce(section, key, value, kind)
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"[{section}]: {exc}") from None


def read_ini(path) -> dict:
    parser = configparser.ConfigParser(interpolation=None, delimiters=("=",))
    parser.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None
    return {name: dict(parser[name]) for name in parser.sections()}


def dict_to_ini(sections: dict) -> str:
    lines = []
    for name, values in sections.items():
        lines.append(f"[{name}]")
        for key, value in values.items():
            if value is None:
                value = "none"
            elif isinstance(value, (tuple, list)):
                value = ", ".join(repr(float(v)) for v in value)
            elif isinstance(value, float):
                value = repr(value)
            lines.append(f"{key} = {value}")
        lines.append("")
    return "\n".join(lines)


def load_config(path: Optional[str | Path] = None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    return PipelineConfig.from_dict(read_ini(path))


def synth_spec_from_dict(sections: dict) -> SynthSpec:
    unknown = set(sections) - {"synth"}
    if unknown:
        raise ConfigError(f"unknown synth spec sections: {sorted(unknown)}")
    values = dict(sections.get("synth", {}))
    fractions = tuple(
        _coerce("synth", key, values.pop(key), float)
        for key in ("train_fraction", "val_fraction", "test_fraction")
        if key in values
    )
    if fractions and len(fractions) != 3:
        raise ConfigError("give all three of train_fraction, val_fraction, test_fraction")
    spec = _build(SynthSpec, "synth", values, **({"fractions": fractions} if fractions else {}))
    return spec.validate()


def synth_spec_to_dict(spec: SynthSpec) -> dict:
    values = dataclasses.asdict(spec)
    train, val, test = values.pop("fractions")
    values.update(train_fraction=train, val_fraction=val, test_fraction=test)
    return {"synth": values}


def load_synth_spec(path: Optional[str | Path] = None) -> SynthSpec:
    if path is None:
        return SynthSpec().validate()
    return synth_spec_from_dict(read_ini(path))
