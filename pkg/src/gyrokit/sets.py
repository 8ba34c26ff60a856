"""Carrier subsets: exact finite sets and radial balls.

Finite subsets are bitmask-backed and support exact elementwise set
arithmetic A (+) B = {a + b : a in A, b in B}.  For the continuous ball
models only radial (norm-ball) sets are supported; there

    ball(r) (+) ball(s) = ball(radial_add(r, s))

exactly, because |u + v| <= radial_add(|u|, |v|) with equality
approached on positive-collinear pairs.  Axis sets exist as membership
descriptors for subgyrogroup tests; they take no part in set arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import GyroModel
from .models import radial_add

__all__ = ["FiniteSet", "RadialBall", "AxisSet", "OriginSet", "parse_subset"]


class FiniteSet:
    """An immutable subset of a finite carrier, stored as a bitmask."""

    __slots__ = ("n", "mask")

    def __init__(self, n: int, mask: int = 0, indices=None):
        self.n = n
        m = mask
        if indices is not None:
            for i in indices:
                if not 0 <= i < n:
                    raise ValueError(f"index {i} out of range 0..{n - 1}")
                m |= 1 << int(i)
        self.mask = m

    def indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if self.mask >> i & 1)

    def __len__(self):
        return bin(self.mask).count("1")

    def __contains__(self, i) -> bool:
        i = int(i)
        return 0 <= i < self.n and bool(self.mask >> i & 1)

    def contains(self, model, x) -> bool:
        return int(x) in self

    def __eq__(self, other):
        return (isinstance(other, FiniteSet)
                and self.n == other.n and self.mask == other.mask)

    def __hash__(self):
        return hash((self.n, self.mask))

    def __le__(self, other):
        return self.mask & ~other.mask == 0

    def __and__(self, other):
        return FiniteSet(self.n, self.mask & other.mask)

    def __or__(self, other):
        return FiniteSet(self.n, self.mask | other.mask)

    def __repr__(self):
        return f"FiniteSet({set(self.indices())})"

    def oplus(self, model: GyroModel, other: "FiniteSet") -> "FiniteSet":
        a = np.fromiter(self.indices(), dtype=np.int64)
        b = np.fromiter(other.indices(), dtype=np.int64)
        if a.size == 0 or b.size == 0:
            return FiniteSet(self.n)
        out = model.op(a[:, None], b[None, :])
        return FiniteSet(self.n, indices=np.unique(out))

    def inv_image(self, model: GyroModel) -> "FiniteSet":
        idx = np.fromiter(self.indices(), dtype=np.int64)
        if idx.size == 0:
            return FiniteSet(self.n)
        return FiniteSet(self.n, indices=np.unique(model.inv(idx)))

    def gyr_image(self, model: GyroModel, a: int, b: int) -> "FiniteSet":
        idx = np.fromiter(self.indices(), dtype=np.int64)
        if idx.size == 0:
            return FiniteSet(self.n)
        return FiniteSet(self.n, indices=np.unique(model.gyr(a, b, idx)))

    def is_symmetric(self, model: GyroModel) -> bool:
        return self.inv_image(model) == self

    def gyr_invariance_witness(self, model: GyroModel):
        """None if gyr[a, b] maps the set onto itself for all a, b; else (a, b)."""
        for a in range(model.n):
            for b in range(model.n):
                if self.gyr_image(model, a, b) != self:
                    return (a, b)
        return None

    @staticmethod
    def full(n: int) -> "FiniteSet":
        return FiniteSet(n, (1 << n) - 1)

    @staticmethod
    def singleton_zero(n: int) -> "FiniteSet":
        return FiniteSet(n, 1)


@dataclass(frozen=True)
class RadialBall:
    """The open norm ball {x : |x| < radius} in a ball model."""

    radius: float

    def contains(self, model, x, slack: float = 0.0) -> bool:
        return bool(np.all(model.norm(x) < self.radius + slack))

    def oplus(self, model, other: "RadialBall") -> "RadialBall":
        c = getattr(model, "c", 1.0)
        return RadialBall(radial_add(self.radius, other.radius, c))

    def sample(self, model, rng: np.random.Generator, size: int):
        pts = model.sample(rng, size)
        bound = 0.99 * getattr(model, "c", 1.0)
        return pts * (self.radius / bound)


@dataclass(frozen=True)
class AxisSet:
    """A coordinate axis intersected with the carrier ball.

    axis is a dimension index for vector models; the real axis of the
    disk model is axis 0.  Closed under the operation (collinear
    addition stays on the line) but generally not gyration-invariant.
    """

    axis: int = 0

    def contains(self, model, x, slack: float | None = None) -> bool:
        tol = model.eps if slack is None else slack
        x = np.asarray(x)
        if np.iscomplexobj(x):
            off = np.abs(x.imag) if self.axis == 0 else np.abs(x.real)
            return bool(np.all(off <= tol) and np.all(np.abs(x) < 1.0))
        others = np.delete(x, self.axis, axis=-1)
        return bool(np.all(np.abs(others) <= tol)
                    and np.all(model.norm(x) < getattr(model, "c", 1.0)))

    def sample(self, model, rng: np.random.Generator, size: int):
        c = getattr(model, "c", 1.0)
        t = (2.0 * rng.random(size) - 1.0) * 0.99 * c
        if np.iscomplexobj(np.asarray(model.zero)):
            return t * (1.0 + 0j if self.axis == 0 else 1.0j)
        out = np.zeros((size, model.zero.shape[0]))
        out[:, self.axis] = t
        return out


@dataclass(frozen=True)
class OriginSet:
    """The trivial subgyrogroup {0}."""

    def contains(self, model, x, slack: float | None = None) -> bool:
        tol = model.eps if slack is None else slack
        return bool(np.all(model.residual(x, model.zero) <= tol))

    def sample(self, model, rng: np.random.Generator, size: int):
        z = np.asarray(model.zero)
        return np.broadcast_to(z, (size,) + z.shape).copy()


_AXES = {"x": 0, "y": 1, "z": 2, "real": 0, "imag": 1}


def parse_subset(model: GyroModel, text: str):
    """Parse a CLI subset descriptor.

    Finite models: comma-separated indices, e.g. ``0,2``.  Continuous
    models: ``axis:x`` / ``axis:y`` / ``axis:z`` (``axis:real`` /
    ``axis:imag`` on the disk), ``ball:0.5``, or ``origin``.
    """
    text = text.strip()
    if model.is_finite:
        idx = [int(t) for t in text.split(",") if t != ""]
        return FiniteSet(model.n, indices=idx)
    if text == "origin":
        return OriginSet()
    if text.startswith("axis:"):
        key = text[5:]
        if key not in _AXES:
            raise ValueError(f"unknown axis {key!r}")
        return AxisSet(_AXES[key])
    if text.startswith("ball:"):
        r = float(text[5:])
        if not 0 < r < getattr(model, "c", 1.0):
            raise ValueError("ball radius must lie inside the carrier")
        return RadialBall(r)
    raise ValueError(f"cannot parse subset {text!r} for model {model.name}")
