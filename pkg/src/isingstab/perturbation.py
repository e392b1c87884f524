"""Perturbed Hamiltonians: binary round-off and bounded uniform noise."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonian import IsingInstance


@dataclass(frozen=True)
class PerturbationSpec:
    mode: str  # "roundoff" or "uniform_noise"
    bits: int | None = None
    delta_: float | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.mode == "roundoff":
            if self.bits is None or self.bits < 1:
                raise ValueError("round-off needs bits >= 1")
        elif self.mode == "uniform_noise":
            if self.delta_ is None or not self.delta_ >= 0:
                raise ValueError("uniform noise needs delta >= 0")
        else:
            raise ValueError(f"unknown perturbation mode {self.mode!r}")

    @classmethod
    def roundoff(cls, bits: int) -> "PerturbationSpec":
        return cls("roundoff", bits=int(bits))

    @classmethod
    def uniform(cls, delta: float, seed: int | None = None) -> "PerturbationSpec":
        return cls("uniform_noise", delta_=float(delta), seed=seed)

    @property
    def delta(self) -> float:
        return 2.0 ** -self.bits if self.mode == "roundoff" else self.delta_

    def apply(self, instance: IsingInstance, seed: int | None = None) -> IsingInstance:
        if self.mode == "roundoff":
            return round_off(instance, self.bits)[0]
        s = self.seed if seed is None else seed
        if s is None:
            raise ValueError("uniform noise needs a seed")
        return perturb_uniform(instance, self.delta_, s)

    def to_json(self) -> dict:
        if self.mode == "roundoff":
            return {"mode": "roundoff", "bits": self.bits, "delta": self.delta}
        return {"mode": "uniform_noise", "delta": self.delta_, "seed": self.seed}


def truncate_binary(values, bits: int) -> np.ndarray:
    """Keep the integer part (floor) and the first ``bits`` binary digits.

    The fractional part is taken nonnegative, so negative inputs truncate
    toward minus infinity: ``-0.3`` with 2 bits becomes ``-1 + 0.10b = -0.5``.
    """
    if bits < 1:
        raise ValueError("bits must be >= 1")
    scale = 2.0 ** bits
    return np.floor(np.asarray(values, dtype=np.float64) * scale) / scale


def round_off(instance: IsingInstance, bits: int) -> tuple[IsingInstance, float]:
    J = truncate_binary(instance.couplings, bits)
    h = truncate_binary(instance.fields, bits)
    return instance.with_params(J, h), 2.0 ** -bits


def perturb_uniform(instance: IsingInstance, delta: float, seed) -> IsingInstance:
    """Shift every parameter by an independent draw from ``[-delta, delta]``."""
    if not delta >= 0:
        raise ValueError("delta must be nonnegative")
    rng = np.random.default_rng(seed)
    dJ = rng.uniform(-delta, delta, size=instance.couplings.size)
    dh = rng.uniform(-delta, delta, size=instance.fields.size)
    return instance.with_params(
        _within(instance.couplings, dJ, delta), _within(instance.fields, dh, delta)
    )


def _within(p: np.ndarray, d: np.ndarray, delta: float) -> np.ndarray:
    # p + d can round to a point slightly more than delta away from p
    q = p + d
    bad = np.abs(q - p) > delta
    while np.any(bad):
        q[bad] = np.nextafter(q[bad], p[bad])
        bad = np.abs(q - p) > delta
    return q


def sup_difference(a: IsingInstance, b: IsingInstance) -> float:
    d = np.concatenate([np.abs(a.couplings - b.couplings), np.abs(a.fields - b.fields)])
    return float(d.max()) if d.size else 0.0
