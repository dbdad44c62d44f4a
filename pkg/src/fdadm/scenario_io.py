"""Scenario file ingestion.

Scenarios are JSON objects; distances arrive in kilometres and angles
in degrees, converted on load. Eavesdroppers are either explicit
coordinates or a ``random`` spec expanded via rejection sampling from
the scenario seed, excluding a guard box around every desired receiver.
Unknown keys anywhere in the document are rejected, and every
validation error names the offending key.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources

from .fda import ArrayConfig, PolarPosition
from .metrics import Scenario
from .precoding import DEFAULT_NULLSPACE, FULL_NULLSPACE, Method, resolve_an_dims
from .seeding import STREAM_EVE_PLACEMENT, derived_rng


class ScenarioError(ValueError):
    """Scenario file failed to parse or validate."""


DEFAULT_GUARD_ANGLE_DEG = 2.0
DEFAULT_GUARD_RANGE_KM = 10.0
_MAX_REJECTIONS = 100_000


@dataclass(frozen=True)
class LoadedScenario:
    """Validated scenario plus the experiment knobs the file carried."""

    scenario: Scenario
    methods: tuple[Method, ...]
    an_dims: int
    #: random-eavesdropper spec (kept for sweeps that redraw placements)
    eve_box: "EveBox"


@dataclass(frozen=True)
class EveBox:
    """Sampling region for random eavesdropper placement."""

    range_km_min: float = 50.0
    range_km_max: float = 400.0
    angle_deg_min: float = -90.0
    angle_deg_max: float = 90.0
    guard_angle_deg: float = DEFAULT_GUARD_ANGLE_DEG
    guard_range_km: float = DEFAULT_GUARD_RANGE_KM


def _require_keys(obj: dict, allowed: set[str], required: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ScenarioError(f"{where}: unknown key(s) {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise ScenarioError(f"{where}: missing key(s) {sorted(missing)}")


def _number(obj: dict, key: str, where: str) -> float:
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ScenarioError(f"{where}.{key}: expected a number, got {v!r}")
    if not math.isfinite(float(v)):
        raise ScenarioError(f"{where}.{key}: must be finite, got {v!r}")
    return float(v)


def _integer(obj: dict, key: str, where: str) -> int:
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ScenarioError(f"{where}.{key}: expected an integer, got {v!r}")
    return v


def _position(obj, where: str) -> PolarPosition:
    if not isinstance(obj, dict):
        raise ScenarioError(f"{where}: expected an object with range_km/angle_deg")
    _require_keys(obj, {"range_km", "angle_deg"}, {"range_km", "angle_deg"}, where)
    range_km = _number(obj, "range_km", where)
    angle_deg = _number(obj, "angle_deg", where)
    if range_km <= 0:
        raise ScenarioError(f"{where}.range_km: must be positive, got {range_km}")
    if not -90.0 < angle_deg < 90.0:
        raise ScenarioError(
            f"{where}.angle_deg: must lie strictly inside (-90, 90), got {angle_deg}"
        )
    return PolarPosition.from_km_deg(range_km, angle_deg)


def _inside_guard(range_km: float, angle_deg: float, desired,
                  box: EveBox) -> bool:
    for p in desired:
        if (abs(angle_deg - p.angle_deg) < box.guard_angle_deg
                and abs(range_km - p.range_km) < box.guard_range_km):
            return True
    return False


def draw_eavesdroppers(desired, box: EveBox, count: int,
                       rng) -> tuple[PolarPosition, ...]:
    """Rejection-sample ``count`` positions outside every guard box."""
    out: list[PolarPosition] = []
    rejections = 0
    while len(out) < count:
        if rejections >= _MAX_REJECTIONS:
            raise ScenarioError(
                "eavesdroppers.random: sampling region infeasible after "
                f"{_MAX_REJECTIONS} rejections (guard zones too large?)"
            )
        range_km = float(rng.uniform(box.range_km_min, box.range_km_max))
        angle_deg = float(rng.uniform(box.angle_deg_min, box.angle_deg_max))
        if (range_km <= 0 or not -90.0 < angle_deg < 90.0
                or _inside_guard(range_km, angle_deg, desired, box)):
            rejections += 1
            continue
        out.append(PolarPosition.from_km_deg(range_km, angle_deg))
    return tuple(out)


def _parse_eve_box(obj: dict, where: str) -> tuple[EveBox, int]:
    _require_keys(
        obj,
        {"count", "range_km", "angle_deg", "guard_angle_deg", "guard_range_km"},
        {"count", "range_km", "angle_deg"},
        where,
    )
    count = _integer(obj, "count", where)
    if count < 0:
        raise ScenarioError(f"{where}.count: must be non-negative, got {count}")

    def _pair(key: str) -> tuple[float, float]:
        v = obj[key]
        if (not isinstance(v, list) or len(v) != 2
                or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in v)):
            raise ScenarioError(f"{where}.{key}: expected [min, max]")
        lo, hi = float(v[0]), float(v[1])
        if not lo < hi:
            raise ScenarioError(f"{where}.{key}: min must be below max, got {v}")
        return lo, hi

    r_lo, r_hi = _pair("range_km")
    a_lo, a_hi = _pair("angle_deg")
    guard_a = float(obj.get("guard_angle_deg", DEFAULT_GUARD_ANGLE_DEG))
    guard_r = float(obj.get("guard_range_km", DEFAULT_GUARD_RANGE_KM))
    if guard_a < 0 or guard_r < 0:
        raise ScenarioError(f"{where}: guard sizes must be non-negative")
    return EveBox(r_lo, r_hi, a_lo, a_hi, guard_a, guard_r), count


def load_scenario(path: str, seed_override: int | None = None) -> LoadedScenario:
    """Parse, validate, and expand a scenario file.

    ``seed_override`` replaces the file's seed before validation, so
    seeded expansion (random eavesdroppers) follows the override too.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise ScenarioError(f"scenario file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ScenarioError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}"
        ) from None
    if seed_override is not None:
        if not isinstance(doc, dict):
            raise ScenarioError("scenario document must be a JSON object")
        doc["seed"] = seed_override
    return scenario_from_dict(doc)


def scenario_from_dict(doc) -> LoadedScenario:
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a JSON object")
    _require_keys(
        doc,
        {"array", "desired", "eavesdroppers", "power", "noise", "an",
         "method", "seed"},
        {"array", "desired", "power", "noise", "seed"},
        "scenario",
    )

    arr = doc["array"]
    if not isinstance(arr, dict):
        raise ScenarioError("array: expected an object")
    _require_keys(
        arr,
        {"n_half", "n_carriers", "f0_hz", "delta_f_hz", "t_obs_s"},
        {"n_half", "n_carriers", "f0_hz", "delta_f_hz"},
        "array",
    )
    try:
        cfg = ArrayConfig(
            n_half=_integer(arr, "n_half", "array"),
            n_carriers=_integer(arr, "n_carriers", "array"),
            f0_hz=_number(arr, "f0_hz", "array"),
            delta_f_hz=_number(arr, "delta_f_hz", "array"),
            t_obs_s=_number(arr, "t_obs_s", "array") if "t_obs_s" in arr else 0.0,
        )
    except ValueError as exc:
        raise ScenarioError(f"array: {exc}") from None

    if not isinstance(doc["desired"], list) or not doc["desired"]:
        raise ScenarioError("desired: expected a non-empty list of positions")
    desired = tuple(
        _position(p, f"desired[{i}]") for i, p in enumerate(doc["desired"])
    )

    power = doc["power"]
    if not isinstance(power, dict):
        raise ScenarioError("power: expected an object")
    _require_keys(power, {"beta1", "ps"}, {"beta1", "ps"}, "power")
    beta1 = _number(power, "beta1", "power")
    ps = _number(power, "ps", "power")
    if not 0.0 < beta1 <= 1.0:
        raise ScenarioError(f"power.beta1: must be within (0, 1], got {beta1}")
    if ps <= 0:
        raise ScenarioError(f"power.ps: must be positive, got {ps}")

    noise = doc["noise"]
    if not isinstance(noise, dict):
        raise ScenarioError("noise: expected an object")
    _require_keys(noise, {"snr_db", "sigma2"}, set(), "noise")
    if ("snr_db" in noise) == ("sigma2" in noise):
        raise ScenarioError("noise: provide exactly one of snr_db or sigma2")
    if "snr_db" in noise:
        snr_db = _number(noise, "snr_db", "noise")
        sigma2 = ps / (10.0 ** (snr_db / 10.0))
    else:
        sigma2 = _number(noise, "sigma2", "noise")
        if sigma2 <= 0:
            raise ScenarioError(f"noise.sigma2: must be positive, got {sigma2}")

    an = doc.get("an", {})
    if not isinstance(an, dict):
        raise ScenarioError("an: expected an object")
    _require_keys(an, {"sigma_z2", "an_dims"}, set(), "an")
    sigma_z2 = _number(an, "sigma_z2", "an") if "sigma_z2" in an else 1.0
    if sigma_z2 <= 0:
        raise ScenarioError(f"an.sigma_z2: must be positive, got {sigma_z2}")
    an_dims_raw = an.get("an_dims", DEFAULT_NULLSPACE)
    if isinstance(an_dims_raw, bool) or not isinstance(an_dims_raw, (int, str)):
        raise ScenarioError(
            f"an.an_dims: expected an integer, '{DEFAULT_NULLSPACE}' or "
            f"'{FULL_NULLSPACE}', got {an_dims_raw!r}"
        )
    if isinstance(an_dims_raw, str) and an_dims_raw not in (
            DEFAULT_NULLSPACE, FULL_NULLSPACE):
        raise ScenarioError(
            f"an.an_dims: expected an integer, '{DEFAULT_NULLSPACE}' or "
            f"'{FULL_NULLSPACE}', got {an_dims_raw!r}"
        )
    try:
        an_dims = resolve_an_dims(cfg, len(desired), an_dims_raw)
    except ValueError as exc:
        raise ScenarioError(f"an.an_dims: {exc}") from None
    if an_dims > cfg.m_total - len(desired):
        raise ScenarioError(
            f"an.an_dims: {an_dims} exceeds the null-space dimension "
            f"{cfg.m_total - len(desired)}"
        )

    method_raw = doc.get("method", "both")
    if method_raw == "both":
        methods: tuple[Method, ...] = (Method.ZF, Method.SVD)
    else:
        try:
            methods = (Method(method_raw),)
        except ValueError:
            raise ScenarioError(
                f"method: expected 'zf', 'svd' or 'both', got {method_raw!r}"
            ) from None

    seed = _integer(doc, "seed", "scenario")
    if not 0 <= seed < 2 ** 64:
        raise ScenarioError(f"seed: must be an unsigned 64-bit value, got {seed}")

    eves_doc = doc.get("eavesdroppers", [])
    eve_box = EveBox()
    if isinstance(eves_doc, dict):
        _require_keys(eves_doc, {"random"}, {"random"}, "eavesdroppers")
        if not isinstance(eves_doc["random"], dict):
            raise ScenarioError("eavesdroppers.random: expected an object")
        eve_box, count = _parse_eve_box(eves_doc["random"], "eavesdroppers.random")
        eves = draw_eavesdroppers(
            desired, eve_box, count, derived_rng(seed, STREAM_EVE_PLACEMENT))
    elif isinstance(eves_doc, list):
        eves = tuple(
            _position(p, f"eavesdroppers[{i}]") for i, p in enumerate(eves_doc)
        )
    else:
        raise ScenarioError(
            "eavesdroppers: expected a list of positions or a random spec"
        )

    try:
        scenario = Scenario(
            array=cfg,
            desired=desired,
            eavesdroppers=eves,
            beta1=beta1,
            ps=ps,
            sigma_wd2=sigma2,
            sigma_we2=sigma2,
            sigma_z2=sigma_z2,
            seed=seed,
        )
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None
    return LoadedScenario(scenario=scenario, methods=methods,
                          an_dims=an_dims, eve_box=eve_box)


def bundled_scenario_path(name: str = "paper_sec4.json") -> str:
    """Filesystem path of a scenario shipped with the package."""
    return str(resources.files("fdadm").joinpath("data", name))
