"""Axis-step random walks on Z^k with a pluggable step-distribution policy.

A walk starts at the origin and at step i picks one of q step distributions
(by iid weighted draw, cyclic rotation, or a fixed script), then moves one
unit along axis j with the chosen distribution's j-th probability. A lattice
point is visible from the origin iff the gcd of its coordinates is 1.

Walks are reproducible: the generator is PCG64 seeded from
SeedSequence(seed, spawn_key=(stream,)), so distinct streams are independent
and the full coordinate sequence is a pure function of (config, stream, n).
The scalar stepper and the vectorized chunk engine consume the generator
identically and produce bit-identical walks.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "AlphaVector",
    "ConfigError",
    "DEFAULT_CHUNK",
    "Position",
    "SelectionPolicy",
    "WalkConfig",
    "config_from_dict",
    "config_from_json",
    "config_to_dict",
    "config_to_json",
    "gcd_vec",
    "is_visible",
    "load_config",
    "make_rng",
    "next_step",
    "validate_config",
    "visibility_chunks",
    "walk_counts",
]

PROB_SUM_TOL = 1e-12
MAX_STEP_INDEX = 2**62
DEFAULT_CHUNK = 1 << 17

POLICY_VARIANTS = ("iid", "cyclic", "scripted")


class ConfigError(ValueError):
    """Invalid walk configuration."""


@dataclass(frozen=True)
class AlphaVector:
    """One step distribution over the k axis directions."""

    k: int
    probs: tuple[float, ...]


@dataclass(frozen=True)
class SelectionPolicy:
    """How the step distribution is chosen at each step.

    variant "iid": draw type t with probability weights[t] independently each
    step (weights default to uniform). "cyclic": step i uses type (i-1) mod q.
    "scripted": step i uses script[(i-1) mod len(script)]; script entries are
    1-based type indices and the script repeats if the walk is longer.
    """

    variant: str
    weights: tuple[float, ...] | None = None
    script: tuple[int, ...] | None = None


@dataclass(frozen=True)
class WalkConfig:
    k: int
    alphas: tuple[AlphaVector, ...]
    policy: SelectionPolicy
    seed: int


@dataclass(frozen=True)
class Position:
    """Lattice point after step_index steps; coordinates sum to step_index."""

    coords: tuple[int, ...]
    step_index: int


def origin(k: int) -> Position:
    return Position(coords=(0,) * k, step_index=0)


def validate_config(cfg: WalkConfig) -> WalkConfig:
    """Check all config invariants; returns a config with normalized weights."""
    if cfg.k < 2:
        raise ConfigError("dimension k must be >= 2")
    q = len(cfg.alphas)
    if q < 1:
        raise ConfigError("the set of step distributions must be non-empty")
    for alpha in cfg.alphas:
        if alpha.k != cfg.k or len(alpha.probs) != cfg.k:
            raise ConfigError("all step distributions must have dimension k")
        for p in alpha.probs:
            if not 0.0 < p < 1.0:
                raise ConfigError("probabilities must be strictly interior to (0, 1)")
        if abs(math.fsum(alpha.probs) - 1.0) > PROB_SUM_TOL:
            raise ConfigError("step distribution probabilities must sum to 1")

    pol = cfg.policy
    if pol.variant not in POLICY_VARIANTS:
        raise ConfigError(f"unknown policy variant {pol.variant!r}")
    if pol.variant == "iid":
        if pol.script is not None:
            raise ConfigError("script is only valid for the scripted policy")
        weights = pol.weights if pol.weights is not None else (1.0 / q,) * q
        if len(weights) != q:
            raise ConfigError("need one weight per step distribution")
        if any(w <= 0.0 for w in weights):
            raise ConfigError("weights must be positive")
        total = math.fsum(weights)
        pol = replace(pol, weights=tuple(w / total for w in weights))
    elif pol.variant == "cyclic":
        if pol.weights is not None or pol.script is not None:
            raise ConfigError("cyclic policy takes no weights or script")
    else:
        if pol.weights is not None:
            raise ConfigError("weights are only valid for the iid policy")
        if not pol.script:
            raise ConfigError("scripted policy needs a non-empty script")
        if any(not 1 <= s <= q for s in pol.script):
            raise ConfigError(f"script indices must lie in 1..{q}")
        pol = replace(pol, script=tuple(int(s) for s in pol.script))

    if not isinstance(cfg.seed, int) or cfg.seed < 0:
        raise ConfigError("seed must be a nonnegative integer")
    return replace(cfg, policy=pol)


# --- JSON config schema -----------------------------------------------------
# {"k": int, "alphas": [[real, ...], ...],
#  "policy": {"type": "iid"|"cyclic"|"scripted", "weights"?: [...], "script"?: [...]},
#  "seed": int}


def config_from_dict(data: dict) -> WalkConfig:
    try:
        k = int(data["k"])
        alphas = tuple(
            AlphaVector(k=k, probs=tuple(float(p) for p in row)) for row in data["alphas"]
        )
        pd = data["policy"]
        policy = SelectionPolicy(
            variant=str(pd["type"]),
            weights=tuple(float(w) for w in pd["weights"]) if "weights" in pd else None,
            script=tuple(int(s) for s in pd["script"]) if "script" in pd else None,
        )
        seed = int(data["seed"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed walk config: {exc}") from exc
    return validate_config(WalkConfig(k=k, alphas=alphas, policy=policy, seed=seed))


def config_from_json(text: str) -> WalkConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config JSON must be an object")
    return config_from_dict(data)


def load_config(path: str) -> WalkConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_json(fh.read())


def config_to_dict(cfg: WalkConfig) -> dict:
    policy: dict = {"type": cfg.policy.variant}
    if cfg.policy.weights is not None:
        policy["weights"] = list(cfg.policy.weights)
    if cfg.policy.script is not None:
        policy["script"] = list(cfg.policy.script)
    return {
        "k": cfg.k,
        "alphas": [list(a.probs) for a in cfg.alphas],
        "policy": policy,
        "seed": cfg.seed,
    }


def config_to_json(cfg: WalkConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2)


# --- random generation -------------------------------------------------------


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Independent, reproducible generator for one walk stream."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream,))))


def _cum_weights(cfg: WalkConfig) -> np.ndarray:
    w = np.cumsum(np.asarray(cfg.policy.weights, dtype=np.float64))
    w[-1] = 1.0
    return w


def _cum_alphas(cfg: WalkConfig) -> np.ndarray:
    cum = np.cumsum(np.asarray([a.probs for a in cfg.alphas], dtype=np.float64), axis=1)
    cum[:, -1] = 1.0  # uniforms are in [0, 1), so the last bin always catches
    return cum


def _scripted_types(policy: SelectionPolicy, q: int, start: int, count: int) -> np.ndarray:
    """0-based type indices for steps start..start+count-1 (deterministic policies)."""
    steps = np.arange(start - 1, start - 1 + count, dtype=np.int64)
    if policy.variant == "cyclic":
        return steps % q
    script = np.asarray(policy.script, dtype=np.int64) - 1
    return script[steps % len(script)]


def next_step(pos: Position, cfg: WalkConfig, rng: np.random.Generator) -> Position:
    """Advance one step: pick a type by policy, then a direction by its probabilities.

    Reference scalar implementation; consumes the generator exactly like the
    vectorized engine (two uniforms per step for iid, one otherwise).
    """
    i = pos.step_index + 1
    if i > MAX_STEP_INDEX:
        raise ValueError("step index would overflow the coordinate budget")
    cum = _cum_alphas(cfg)
    if cfg.policy.variant == "iid":
        u = rng.random(2)
        t = int(np.searchsorted(_cum_weights(cfg), u[0], side="right"))
        j = int(np.searchsorted(cum[t], u[1], side="right"))
    else:
        t = int(_scripted_types(cfg.policy, len(cfg.alphas), i, 1)[0])
        j = int(np.searchsorted(cum[t], rng.random(), side="right"))
    coords = list(pos.coords)
    coords[j] += 1
    return Position(coords=tuple(coords), step_index=i)


def gcd_vec(coords) -> int:
    """gcd over all coordinates, with gcd(0, n) = n; all-zero is a domain error."""
    g = 0
    for c in coords:
        g = math.gcd(g, int(c))
    if g == 0:
        raise ValueError("gcd of the all-zero vector is undefined here")
    return g


def is_visible(pos: Position) -> bool:
    """True iff no lattice point lies strictly between pos and the origin."""
    return gcd_vec(pos.coords) == 1


# --- vectorized walk engine ---------------------------------------------------


def _direction_chunks(cfg: WalkConfig, rng: np.random.Generator, n: int, chunk: int):
    """Yield (start, dirs) with 0-based directions for steps start..start+len-1."""
    cum_alphas = _cum_alphas(cfg)
    iid = cfg.policy.variant == "iid"
    cum_w = _cum_weights(cfg) if iid else None
    q = len(cfg.alphas)
    for start in range(1, n + 1, chunk):
        count = min(chunk, n - start + 1)
        if iid:
            u = rng.random((count, 2))
            types = np.searchsorted(cum_w, u[:, 0], side="right")
            u_dir = u[:, 1]
        else:
            types = _scripted_types(cfg.policy, q, start, count)
            u_dir = rng.random(count)
        dirs = (u_dir[:, None] < cum_alphas[types]).argmax(axis=1)
        yield start, dirs


def visibility_chunks(cfg: WalkConfig, n: int, stream: int = 0, chunk: int = DEFAULT_CHUNK):
    """Yield (start, visible) boolean chunks covering steps 1..n in order.

    visible[j] tells whether the lattice point after step start+j is visible.
    """
    cfg = validate_config(cfg)
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > MAX_STEP_INDEX:
        raise ValueError("n exceeds the coordinate overflow budget")
    rng = make_rng(cfg.seed, stream)
    offsets = [0] * cfg.k
    for start, dirs in _direction_chunks(cfg, rng, n, chunk):
        g = None
        for j in range(cfg.k):
            cj = np.cumsum(dirs == j, dtype=np.int64)
            cj += offsets[j]
            offsets[j] = int(cj[-1])
            g = cj if g is None else np.gcd(g, cj)
        yield start, g == 1


def walk_counts(
    cfg: WalkConfig, n: int, stream: int = 0, chunk: int = DEFAULT_CHUNK
) -> np.ndarray:
    """(n, k) array of walk coordinates after steps 1..n (row i-1 is p_i)."""
    cfg = validate_config(cfg)
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = make_rng(cfg.seed, stream)
    out = np.empty((n, cfg.k), dtype=np.int64)
    offsets = np.zeros(cfg.k, dtype=np.int64)
    for start, dirs in _direction_chunks(cfg, rng, n, chunk):
        block = out[start - 1 : start - 1 + len(dirs)]
        for j in range(cfg.k):
            np.cumsum(dirs == j, dtype=np.int64, out=block[:, j])
        block += offsets
        offsets = block[-1].copy()
    return out
