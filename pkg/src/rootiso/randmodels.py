"""Random integer polynomial models with exact bitsize, weight and uniformity.

Sample ``i`` of a configuration with seed ``s`` is drawn from a Philox stream
keyed by ``SeedSequence([s, i])``, so samples are independent of each other and
of the order (or process) in which they are generated.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator

import numpy as np

from rootiso.poly import IntPolynomial, read_polynomial

KINDS = ("uniform", "support", "signs", "exact_bitsize", "smoothed")


class ModelConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RandomModelConfig:
    kind: str
    d: int
    tau: int
    support_set: tuple[int, ...] | None = None
    sign_vector: tuple[int, ...] | None = None
    base_poly: IntPolynomial | None = None
    sigma: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ModelConfigError(f"unknown model kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.d < 0:
            raise ModelConfigError("degree must be non-negative")
        if self.tau < 0 or (self.kind == "exact_bitsize" and self.tau < 1):
            raise ModelConfigError(f"invalid tau {self.tau} for model {self.kind}")
        if not 0 <= self.seed < 2**64:
            raise ModelConfigError("seed must be a 64-bit unsigned integer")
        if self.kind == "support":
            if self.support_set is None:
                raise ModelConfigError("support model needs a support set")
            s = set(self.support_set)
            if 0 not in s or self.d not in s or not s <= set(range(self.d + 1)):
                raise ModelConfigError("support set must lie in {0..d} and contain 0 and d")
            object.__setattr__(self, "support_set", tuple(sorted(s)))
        if self.kind == "signs":
            if self.sign_vector is None:
                object.__setattr__(self, "sign_vector", (1,) * (self.d + 1))
            if len(self.sign_vector) != self.d + 1 or any(s not in (-1, 1) for s in self.sign_vector):
                raise ModelConfigError("sign vector must hold d + 1 entries from {-1, +1}")
            object.__setattr__(self, "sign_vector", tuple(self.sign_vector))
        if self.kind == "smoothed":
            if not self.sigma:
                raise ModelConfigError("smoothed model needs a nonzero integer sigma")
            if self.base_poly is None:
                raise ModelConfigError("smoothed model needs a base polynomial")
            if not self.base_poly.is_zero and self.base_poly.degree > self.d:
                raise ModelConfigError("base polynomial degree exceeds d")

    def with_seed(self, seed: int) -> "RandomModelConfig":
        return _replace(self, seed=seed)

    def with_degree(self, d: int) -> "RandomModelConfig":
        return _replace(self, d=d)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "d": self.d, "tau": self.tau, "seed": self.seed}
        if self.support_set is not None:
            out["support"] = list(self.support_set)
        if self.sign_vector is not None:
            out["signs"] = list(self.sign_vector)
        if self.base_poly is not None:
            out["base_poly"] = list(self.base_poly.coeffs)
        if self.sigma is not None:
            out["sigma"] = self.sigma
        return out


def _replace(cfg: RandomModelConfig, **kw) -> RandomModelConfig:
    fields = dict(kind=cfg.kind, d=cfg.d, tau=cfg.tau, support_set=cfg.support_set, sign_vector=cfg.sign_vector,
                  base_poly=cfg.base_poly, sigma=cfg.sigma, seed=cfg.seed)
    fields.update(kw)
    return RandomModelConfig(**fields)


def config_from_dict(data: dict, base_dir: Path | None = None) -> RandomModelConfig:
    """Build a config from the JSON keys kind, d, tau, support, signs, base_poly_file, sigma, seed."""
    known = {"kind", "d", "tau", "support", "signs", "base_poly_file", "base_poly", "sigma", "seed"}
    extra = set(data) - known
    if extra:
        raise ModelConfigError(f"unknown config keys: {', '.join(sorted(extra))}")
    try:
        kind, d, tau = data["kind"], int(data["d"]), int(data["tau"])
    except KeyError as exc:
        raise ModelConfigError(f"missing config key {exc.args[0]!r}") from None
    base = None
    if data.get("base_poly_file"):
        p = Path(data["base_poly_file"])
        if base_dir is not None and not p.is_absolute():
            p = base_dir / p
        base = read_polynomial(p)
    elif data.get("base_poly") is not None:
        base = IntPolynomial([int(c) for c in data["base_poly"]])
    return RandomModelConfig(
        kind=kind,
        d=d,
        tau=tau,
        support_set=tuple(int(i) for i in data["support"]) if data.get("support") is not None else None,
        sign_vector=tuple(int(s) for s in data["signs"]) if data.get("signs") is not None else None,
        base_poly=base,
        sigma=int(data["sigma"]) if data.get("sigma") is not None else None,
        seed=int(data.get("seed", 0)),
    )


def load_config(path: str | Path) -> RandomModelConfig:
    path = Path(path)
    with open(path) as fh:
        data = json.load(fh)
    return config_from_dict(data, path.parent)


# ---------------------------------------------------------------------------
# sampling

def generator_for(seed: int, index: int) -> np.random.Philox:
    return np.random.Philox(np.random.SeedSequence([seed, index]))


def uniform_below(bitgen: np.random.Philox, span: int, n: int) -> list[int]:
    """``n`` independent integers uniform on ``[0, span)`` by bitmask rejection."""
    if span < 1:
        raise ValueError("empty range")
    if span == 1:
        return [0] * n
    k = (span - 1).bit_length()
    words = (k + 63) // 64
    mask = (1 << k) - 1
    out = [0] * n
    pending = list(range(n))
    while pending:
        raw = bitgen.random_raw(len(pending) * words)
        still = []
        for j, i in enumerate(pending):
            v = 0
            for w in range(words):
                v = (v << 64) | int(raw[j * words + w])
            v &= mask
            if v < span:
                out[i] = v
            else:
                still.append(i)
        pending = still
    return out


def _uniform_coeffs(bitgen, tau: int, n: int) -> list[int]:
    top = 1 << tau
    return [v - top for v in uniform_below(bitgen, 2 * top + 1, n)]


def sample(config: RandomModelConfig, index: int = 0) -> IntPolynomial:
    """Draw sample ``index`` of the model; deterministic in (config, seed, index)."""
    if index < 0:
        raise ValueError("sample index must be non-negative")
    bg = generator_for(config.seed, index)
    d, tau = config.d, config.tau
    if config.kind == "uniform":
        coeffs = _uniform_coeffs(bg, tau, d + 1)
    elif config.kind == "support":
        drawn = _uniform_coeffs(bg, tau, len(config.support_set))
        coeffs = [0] * (d + 1)
        for i, c in zip(config.support_set, drawn):
            coeffs[i] = c
    elif config.kind == "signs":
        drawn = uniform_below(bg, 1 << tau, d + 1)
        coeffs = [s * (v + 1) for s, v in zip(config.sign_vector, drawn)]
    elif config.kind == "exact_bitsize":
        half = 1 << (tau - 1)
        drawn = uniform_below(bg, 2 * half, d + 1)
        # first half of the range maps to the negative block, second to the positive one
        coeffs = [-(half + v) if v < half else v for v in drawn]
    else:
        noise = _uniform_coeffs(bg, tau, d + 1)
        coeffs = [config.base_poly[i] + config.sigma * c for i, c in enumerate(noise)]
    return IntPolynomial(coeffs)


def samples(config: RandomModelConfig, n: int, start: int = 0) -> Iterator[IntPolynomial]:
    for i in range(start, start + n):
        yield sample(config, i)


# ---------------------------------------------------------------------------
# model parameters

@dataclass(frozen=True)
class ModelStats:
    tau_effective: int
    weight: Fraction
    uniformity: float

    @property
    def uniformity_ratio(self) -> Fraction:
        """``exp(u) = (1 + 2^(tau + 1)) w`` as an exact rational."""
        return (1 + 2 ** (self.tau_effective + 1)) * self.weight


def bitsize_of(value: int) -> int:
    """Least integer t with ``|value| <= 2^t`` (0 for value in {-1, 0, 1})."""
    m = abs(value)
    return 0 if m <= 1 else (m - 1).bit_length()


def value_bound(config: RandomModelConfig) -> int:
    """Largest possible absolute value of any coefficient."""
    if config.kind in ("uniform", "support", "signs"):
        return 1 << config.tau
    if config.kind == "exact_bitsize":
        return (1 << config.tau) - 1
    base = max((abs(c) for c in config.base_poly.coeffs), default=0)
    return base + abs(config.sigma) * (1 << config.tau)


def model_stats(config: RandomModelConfig) -> ModelStats:
    """Exact bitsize, weight (max point mass of the coefficients of 1 and X^d) and uniformity."""
    tau_eff = bitsize_of(value_bound(config))
    if config.kind in ("uniform", "support", "smoothed"):
        # shifting by the base and scaling by sigma leave point masses unchanged
        w = Fraction(1, (1 << (config.tau + 1)) + 1)
    else:
        w = Fraction(1, 1 << config.tau)
    ratio = (1 + 2 ** (tau_eff + 1)) * w
    u = 0.0 if ratio == 1 else math.log(ratio.numerator) - math.log(ratio.denominator)
    return ModelStats(tau_eff, w, u)
