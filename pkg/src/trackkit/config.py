"""Flat key-value run configuration with one section per module."""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

from .association import AssocConfig
from .sim import SimConfig
from .tracker import TrackerConfig

DEFAULT_CONFIG = """\
[assoc]
; method defaults: alpha, 1:1 weights and both thresholds
alpha = 2.0
cos_weight = 1.0
bbox_weight = 1.0
tau1 = 0.56
tau2 = 0.64
; implementation choice: hungarian | greedy
solver = hungarian

[tracker]
; method default
beta = 0.4
; implementation choices
max_lost_age = 30
min_confidence = 0.4
embedding_dim = 512

[sim]
; implementation choices (synthetic benchmark only)
n_identities = 10
n_frames = 100
arena_width = 1000
arena_height = 800
box_min = 40
box_max = 80
speed_min = 2
speed_max = 6
det_jitter_sigma = 0.0
fp_rate = 0.0
fn_rate = 0.0
occlusion_iou = 1.0
feature_noise_sigma = 0.0
occlusion_feature_corruption = 0.0
feature_dim = 64
orthogonal_anchors = true
seed = 0
"""

_ASSOC_KEYS = {"alpha", "cos_weight", "bbox_weight", "tau1", "tau2", "solver"}
_TRACKER_KEYS = {"beta", "max_lost_age", "min_confidence", "embedding_dim"}
_SIM_KEYS = {
    "n_identities", "n_frames", "arena_width", "arena_height", "box_min", "box_max",
    "speed_min", "speed_max", "det_jitter_sigma", "fp_rate", "fn_rate", "occlusion_iou",
    "feature_noise_sigma", "occlusion_feature_corruption", "feature_dim",
    "orthogonal_anchors", "seed",
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    tracker: TrackerConfig = field(default_factory=TrackerConfig)
    sim: SimConfig = field(default_factory=SimConfig)


def _check_keys(parser: configparser.ConfigParser, section: str, allowed: set[str]) -> None:
    if not parser.has_section(section):
        return
    unknown = set(parser.options(section)) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(sorted(unknown))}")


def load_config(text: str) -> RunConfig:
    """Parse config text; unknown sections or keys are rejected outright."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text)
    except configparser.Error as e:
        raise ConfigError(f"malformed config: {e}") from None

    known_sections = {"assoc", "tracker", "sim"}
    unknown_sections = set(parser.sections()) - known_sections
    if unknown_sections:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown_sections))}")
    _check_keys(parser, "assoc", _ASSOC_KEYS)
    _check_keys(parser, "tracker", _TRACKER_KEYS)
    _check_keys(parser, "sim", _SIM_KEYS)

    try:
        a = parser["assoc"] if parser.has_section("assoc") else {}
        assoc = AssocConfig(
            alpha=float(a.get("alpha", 2.0)),
            cos_weight=float(a.get("cos_weight", 1.0)),
            bbox_weight=float(a.get("bbox_weight", 1.0)),
            tau1=float(a.get("tau1", 0.56)),
            tau2=float(a.get("tau2", 0.64)),
            solver=str(a.get("solver", "hungarian")),
        )
        t = parser["tracker"] if parser.has_section("tracker") else {}
        tracker = TrackerConfig(
            assoc=assoc,
            beta=float(t.get("beta", 0.4)),
            max_lost_age=int(t.get("max_lost_age", 30)),
            min_confidence=float(t.get("min_confidence", 0.4)),
            embedding_dim=int(t.get("embedding_dim", 512)),
        )
        s = parser["sim"] if parser.has_section("sim") else {}
        sim = SimConfig(
            n_identities=int(s.get("n_identities", 10)),
            n_frames=int(s.get("n_frames", 100)),
            arena=(float(s.get("arena_width", 1000)), float(s.get("arena_height", 800))),
            box_size=(float(s.get("box_min", 40)), float(s.get("box_max", 80))),
            speed=(float(s.get("speed_min", 2)), float(s.get("speed_max", 6))),
            det_jitter_sigma=float(s.get("det_jitter_sigma", 0.0)),
            fp_rate=float(s.get("fp_rate", 0.0)),
            fn_rate=float(s.get("fn_rate", 0.0)),
            occlusion_iou=float(s.get("occlusion_iou", 1.0)),
            feature_noise_sigma=float(s.get("feature_noise_sigma", 0.0)),
            occlusion_feature_corruption=float(s.get("occlusion_feature_corruption", 0.0)),
            feature_dim=int(s.get("feature_dim", 64)),
            orthogonal_anchors=str(s.get("orthogonal_anchors", "true")).lower() in ("1", "true", "yes"),
            seed=int(s.get("seed", 0)),
        )
    except ValueError as e:
        raise ConfigError(str(e)) from None
    return RunConfig(tracker=tracker, sim=sim)


def load_config_file(path: str) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return load_config(fh.read())
