"""Subgyrogroups, left cosets, and the quotient projection.

A nonempty subset H is a subgyrogroup iff it is closed under inverse
and the operation.  H is an L-subgyrogroup when additionally
gyr[a, h](H) = H for every a in the carrier and h in H; exactly then
the left cosets a + H partition the carrier and the projection
pi(a) = a + H is well defined with fibers pi^-1(pi(a)) = a + H.

Cosets are materialized for finite models only.  For continuous models
the module offers membership testing ((-a) + b in H within tolerance)
and sampled subgyrogroup verdicts, never explicit cosets.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import CosetError, GyroModel, SampleSpec
from .models import FiniteTable
from .sets import FiniteSet

__all__ = [
    "is_subgyrogroup",
    "is_L_subgyrogroup",
    "left_cosets",
    "CosetPartition",
    "same_coset",
    "homogeneity_translate",
]


def _as_finite_set(model, H) -> FiniteSet:
    if isinstance(H, FiniteSet):
        return H
    return FiniteSet(model.n, indices=H)


def is_subgyrogroup(model: GyroModel, H, spec: SampleSpec = SampleSpec(1000)):
    """Closure of H under inverse and the operation; (verdict, witness).

    Exhaustive for finite models.  For continuous models H must expose
    ``sample``/``contains``; closure is attested at sampled pairs.
    """
    if model.is_finite:
        H = _as_finite_set(model, H)
        idx = H.indices()
        if not idx:
            raise CosetError("H must be nonempty")
        if 0 not in H:
            return False, {"kind": "missing-identity"}
        for x in idx:
            for y in idx:
                if model.op(x, y) not in H:
                    return False, {"kind": "closure",
                                   "elements": [int(x), int(y)],
                                   "product": int(model.op(x, y))}
        for x in idx:
            if model.inv(x) not in H:
                return False, {"kind": "inverse", "elements": [int(x)]}
        return True, None

    rng = np.random.default_rng(spec.seed)
    xs = H.sample(model, rng, spec.count)
    ys = H.sample(model, rng, spec.count)
    if not H.contains(model, model.zero):
        return False, {"kind": "missing-identity"}
    for x in xs:
        if not H.contains(model, model.inv(x)):
            return False, {"kind": "inverse", "elements": [model.to_payload(x)]}
    prods = model.op(xs, ys)
    for x, y, p in zip(xs, ys, prods):
        if not H.contains(model, p):
            return False, {"kind": "closure",
                           "elements": [model.to_payload(x), model.to_payload(y)],
                           "product": model.to_payload(p)}
    return True, None


def is_L_subgyrogroup(model: GyroModel, H, spec: SampleSpec = SampleSpec(1000)):
    """Whether gyr[a, h] maps H onto H for all a in G, h in H."""
    ok, witness = is_subgyrogroup(model, H, spec)
    if not ok:
        raise CosetError(f"H is not a subgyrogroup: {witness}")
    if model.is_finite:
        H = _as_finite_set(model, H)
        for a in range(model.n):
            for h in H.indices():
                if H.gyr_image(model, a, h) != H:
                    return False, {"kind": "gyration",
                                   "elements": [int(a), int(h)]}
        return True, None

    rng = np.random.default_rng(spec.seed + 1)
    azs = model.sample(rng, spec.count)
    hs = H.sample(model, rng, spec.count)
    xs = H.sample(model, rng, spec.count)
    img = model.gyr(azs, hs, xs)
    for a, h, x, g in zip(azs, hs, xs, img):
        if not H.contains(model, g):
            return False, {"kind": "gyration",
                           "elements": [model.to_payload(a), model.to_payload(h),
                                        model.to_payload(x)],
                           "image": model.to_payload(g)}
    return True, None


@dataclass
class CosetPartition:
    """The left-coset decomposition {a + H} of a finite model.

    Cosets are ordered by their minimal element, which also serves as
    the canonical representative, so reports diff cleanly.
    """

    model: FiniteTable
    H: FiniteSet
    cosets: list[tuple[int, ...]] = field(default_factory=list)
    index_of: np.ndarray | None = None

    @property
    def representatives(self) -> list[int]:
        return [c[0] for c in self.cosets]

    def project(self, a) -> int:
        """pi(a): the index of the coset containing a."""
        out = self.index_of[np.asarray(a, dtype=np.int64)]
        return int(out) if out.ndim == 0 else out

    def coset_set(self, i: int) -> FiniteSet:
        return FiniteSet(self.model.n, indices=self.cosets[i])


def left_cosets(model: FiniteTable, H) -> CosetPartition:
    """Partition the carrier into left cosets a + H.

    Refuses to run unless H is an L-subgyrogroup (otherwise the coset
    family may fail to partition).  Verifies exhaustively that the
    cosets are disjoint, cover the carrier, have size |H|, and satisfy
    (a + h) + H = a + H for every a and h in H.
    """
    H = _as_finite_set(model, H)
    ok, witness = is_L_subgyrogroup(model, H)
    if not ok:
        raise CosetError(f"H is not an L-subgyrogroup: {witness}")

    n = model.n
    coset_of = {}
    for a in range(n):
        coset_of[a] = FiniteSet(n, indices=model.op(
            np.full(len(H), a, dtype=np.int64),
            np.fromiter(H.indices(), dtype=np.int64)))

    distinct = sorted({c.mask for c in coset_of.values()})
    sets = [FiniteSet(n, m) for m in distinct]
    union = 0
    total = 0
    for s in sets:
        if union & s.mask:
            raise CosetError(f"cosets overlap: {s.indices()}")
        if len(s) != len(H):
            raise CosetError(f"coset {s.indices()} has size {len(s)} != |H|")
        union |= s.mask
        total += len(s)
    if union != (1 << n) - 1:
        raise CosetError("cosets do not cover the carrier")

    # the derivation (a + h) + H = a + (h + H) = a + H, exhaustively
    for a in range(n):
        for h in H.indices():
            if coset_of[model.op(a, h)] != coset_of[a]:
                raise CosetError(
                    f"(a+h)+H != a+H at a={a}, h={h}; H is not coset-stable")

    cosets = sorted((s.indices() for s in sets), key=lambda t: t[0])
    index_of = np.empty(n, dtype=np.int64)
    for i, c in enumerate(cosets):
        for x in c:
            index_of[x] = i
    return CosetPartition(model=model, H=H, cosets=cosets, index_of=index_of)


def same_coset(model: GyroModel, H, a, b, slack: float | None = None) -> bool:
    """Membership test (-a) + b in H: the coset relation pi(a) = pi(b).

    This is the only coset interface for continuous models, whose
    cosets are uncountable and never materialized.
    """
    diff = model.op(model.inv(a), b)
    if model.is_finite:
        return int(diff) in _as_finite_set(model, H)
    return H.contains(model, diff, slack if slack is not None else model.eps)


def homogeneity_translate(partition: CosetPartition, a: int, coset: int) -> int:
    """The coset translation h_a(x + H) = (a + x) + H.

    Evaluated from every representative x of the coset; a disagreement
    means H is not gyration-invariant enough for the translation to be
    well defined, and raises.
    """
    model = partition.model
    images = {partition.project(model.op(a, x)) for x in partition.cosets[coset]}
    if len(images) != 1:
        raise CosetError(
            f"h_a is representative-dependent at a={a}, coset={coset}: "
            f"images {sorted(images)}")
    return images.pop()
