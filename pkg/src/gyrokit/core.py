"""Gyrogroup model interface and the axiom/identity verification engine.

A gyrogroup is a magma (G, +) with a two-sided identity, two-sided
inverses, and for every pair a, b an automorphism gyr[a, b] of (G, +)
(the gyration) such that

    a + (b + z) = (a + b) + gyr[a, b](z)        (gyroassociativity)
    gyr[a + b, b] = gyr[a, b]                   (loop property)

Groups are exactly the gyrogroups with all gyrations trivial.  The
gyration is never stored: it is recovered from the operation through

    gyr[a, b](z) = -(a + b) + (a + (b + z))

which every model here exposes as ``gyr_formula``.  Models with a known
closed form (e.g. the Moebius disk) may override ``gyr``; the formula
remains the oracle and the two are compared by ``check_identities``.

Verification is sample-based: finite models are always checked
exhaustively, continuous models with a seeded pseudorandom sampler plus
deterministic boundary-stress points.  Failures are report entries with
a replayable witness, never exceptions.
"""

from __future__ import annotations

import json
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

__all__ = [
    "CarrierError",
    "TableError",
    "ChainError",
    "CosetError",
    "GyroModel",
    "SampleSpec",
    "CheckResult",
    "AxiomReport",
    "check_axioms",
    "check_identities",
]


class CarrierError(ValueError):
    """An element lies outside the model's carrier."""


class TableError(ValueError):
    """A Cayley-table file is malformed or fails the gyrogroup axioms."""


class ChainError(ValueError):
    """A dyadic chain violates symmetry, gyr-invariance, or containment."""


class CosetError(ValueError):
    """A coset operation was attempted with an invalid subgyrogroup."""


class GyroModel(ABC):
    """Abstract carrier with a gyrogroup operation.

    Concrete models work on numpy-backed batches: an "element" is an
    index (finite models), a complex scalar (disk models), or a float
    vector (ball models), and every operation broadcasts over leading
    axes.  ``eps`` is the componentwise absolute equality tolerance;
    finite models use ``eps = 0`` and exact index equality.
    """

    name: str = "gyromodel"
    eps: float = 0.0
    is_finite: bool = False

    @property
    @abstractmethod
    def zero(self):
        """The identity element."""

    @abstractmethod
    def op(self, a, b):
        """The gyrogroup operation a + b."""

    @abstractmethod
    def inv(self, a):
        """The inverse -a."""

    @abstractmethod
    def residual(self, a, b):
        """Componentwise absolute deviation between a and b (batched)."""

    @abstractmethod
    def contains(self, a) -> bool:
        """Whether a lies in the carrier."""

    @abstractmethod
    def sample(self, rng: np.random.Generator, size: int):
        """Draw ``size`` carrier elements."""

    def gyr(self, a, b, z):
        """The gyration gyr[a, b](z); overridable by a closed form."""
        return self.gyr_formula(a, b, z)

    def gyr_formula(self, a, b, z):
        """gyr[a, b](z) = -(a + b) + (a + (b + z)), the defining formula."""
        ab = self.op(a, b)
        return self.op(self.inv(ab), self.op(a, self.op(b, z)))

    def equal(self, a, b):
        return self.residual(a, b) <= self.eps

    def validate(self, a):
        """Raise ``CarrierError`` if a is outside the carrier."""
        if not self.contains(a):
            raise CarrierError(f"element {a!r} outside carrier of {self.name}")
        return a

    def stress_elements(self) -> list:
        """Deterministic hard-case elements mixed into every sample sweep."""
        return [self.zero]

    def elements(self):
        """All elements (finite models only)."""
        return None

    def to_payload(self, a) -> Any:
        """JSON-friendly form of one element, for witnesses."""
        return a


@dataclass(frozen=True)
class SampleSpec:
    """Sampling contract for verification sweeps.

    Finite models ignore ``count`` and ``seed`` and are checked
    exhaustively; continuous models draw ``count`` seeded triples and
    prepend the model's deterministic stress elements.
    """

    count: int = 10_000
    seed: int = 0


@dataclass
class CheckResult:
    """Verdict of one verification sweep."""

    name: str
    passed: bool
    samples: int
    max_residual: float
    witness: dict | None = None

    def to_json(self) -> str:
        rec = {
            "check": self.name,
            "verdict": "pass" if self.passed else "fail",
            "samples": self.samples,
            "residual": float(self.max_residual),
            "witnesses": [self.witness] if self.witness else [],
        }
        return json.dumps(rec, sort_keys=True)


@dataclass
class AxiomReport:
    """Collected verdicts of an axiom or identity sweep."""

    model: str
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def max_residual(self) -> float:
        return max((r.max_residual for r in self.results), default=0.0)

    def result(self, name: str) -> CheckResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def to_json_lines(self) -> list[str]:
        return [r.to_json() for r in sorted(self.results, key=lambda r: r.name)]


def _triples(model: GyroModel, spec: SampleSpec):
    """Element triples (X, Y, Z) for a sweep.

    Finite: the full cube of index triples.  Continuous: independent
    seeded draws, with the stress elements rotated through the three
    slots so every stress point meets every role.
    """
    if model.is_finite:
        n = len(model.elements())
        idx = np.indices((n, n, n)).reshape(3, -1)
        return idx[0], idx[1], idx[2]
    rng = np.random.default_rng(spec.seed)
    stress = model.stress_elements()
    s = len(stress)
    xs = model.sample(rng, spec.count)
    ys = model.sample(rng, spec.count)
    zs = model.sample(rng, spec.count)
    sx = np.stack(stress)
    sy = np.stack(stress[1:] + stress[:1]) if s > 1 else sx
    sz = np.stack(stress[2:] + stress[:2]) if s > 2 else sx
    x = np.concatenate([sx, xs])
    y = np.concatenate([sy, ys])
    z = np.concatenate([sz, zs])
    return x, y, z


def _sweep(model: GyroModel, name: str, lhs, rhs, elems: Sequence) -> CheckResult:
    """Compare two batched evaluations; extract the worst witness."""
    res = np.asarray(model.residual(lhs, rhs), dtype=float)
    res = np.atleast_1d(res)
    worst = int(np.argmax(res))
    max_res = float(res[worst])
    passed = bool(max_res <= model.eps)
    witness = None
    if not passed:
        witness = {
            "elements": [model.to_payload(_pick(e, worst)) for e in elems],
            "residual": max_res,
        }
    return CheckResult(name, passed, res.size, max_res, witness)


def _pick(batch, i):
    arr = np.asarray(batch)
    if arr.ndim == 0:
        return batch
    return arr[i]


def check_axioms(model: GyroModel, spec: SampleSpec = SampleSpec()) -> AxiomReport:
    """Verify the gyrogroup axioms on sampled (exhaustive if finite) triples.

    Covers the two-sided identity, two-sided inverses,
    gyroassociativity, the loop property, and that gyrations are
    automorphisms (additivity).  Finite models additionally get exact
    gyration bijectivity and the left-division consistency of the
    gyration formula; ball models get the gyration-isometry check that
    makes norm balls a gyration-invariant neighborhood base.
    """
    x, y, z = _triples(model, spec)
    report = AxiomReport(model=model.name)
    add = report.results.append

    zero = model.zero
    add(_sweep(model, "axiom-identity-left", model.op(zero, x), x, [x]))
    add(_sweep(model, "axiom-identity-right", model.op(x, zero), x, [x]))

    ix = model.inv(x)
    zb = np.broadcast_to(np.asarray(zero), np.asarray(x).shape).copy() \
        if not model.is_finite else np.zeros_like(x)
    add(_sweep(model, "axiom-inverse-left", model.op(ix, x), zb, [x]))
    add(_sweep(model, "axiom-inverse-right", model.op(x, ix), zb, [x]))

    gy = model.gyr(x, y, z)
    add(_sweep(model, "axiom-gyroassociativity",
               model.op(x, model.op(y, z)),
               model.op(model.op(x, y), gy), [x, y, z]))
    add(_sweep(model, "axiom-loop-property",
               model.gyr(model.op(x, y), y, z), gy, [x, y, z]))
    add(_sweep(model, "gyration-additivity",
               model.gyr(x, y, model.op(z, x)),
               model.op(gy, model.gyr(x, y, x)), [x, y, z]))

    if model.is_finite:
        report.results.extend(_finite_extras(model))
    else:
        norm = getattr(model, "norm", None)
        if norm is not None:
            res = np.abs(norm(gy) - norm(z))
            worst = int(np.argmax(res))
            passed = bool(res[worst] <= model.eps)
            witness = None
            if not passed:
                witness = {"elements": [model.to_payload(_pick(e, worst))
                                        for e in (x, y, z)],
                           "residual": float(res[worst])}
            add(CheckResult("gyration-isometry", passed, res.size,
                            float(res[worst]), witness))
    return report


def _finite_extras(model: GyroModel) -> list[CheckResult]:
    """Exact finite-only checks: gyration bijectivity and left-division.

    ``gyration-left-division`` solves (a+b) + w = a + (b+z) for w by
    scanning the Cayley row and compares against the gyration formula;
    the two agree exactly when gyroassociativity holds with a unique
    solution.
    """
    elems = np.asarray(model.elements())
    n = elems.size
    results = []
    a, b = np.indices((n, n)).reshape(2, -1)
    z = elems[None, :]  # each pair against all z
    img = model.gyr(a[:, None], b[:, None], z)
    perm_ok = np.all(np.sort(img, axis=1) == elems[None, :], axis=1)
    bad = int(np.argmin(perm_ok)) if not perm_ok.all() else 0
    results.append(CheckResult(
        "gyration-bijectivity", bool(perm_ok.all()), n * n,
        0.0 if perm_ok.all() else 1.0,
        None if perm_ok.all() else {
            "elements": [int(a[bad]), int(b[bad])],
            "residual": 1.0,
        }))

    # w solving (a+b) + w = a + (b+z), found by row scan
    ab = model.op(a[:, None], b[:, None])                    # (pairs, 1)
    target = model.op(a[:, None], model.op(b[:, None], z))   # (pairs, n)
    row = model.op(ab[..., None], elems[None, None, :])      # (pairs, 1, n)
    eq = row == target[..., None]                            # (pairs, n, n)
    solved = np.argmax(eq, axis=-1)
    solvable = eq.any(axis=-1)
    formula = model.gyr_formula(a[:, None], b[:, None], z)
    ok = solvable & (solved == formula)
    all_ok = bool(ok.all())
    if all_ok:
        witness = None
    else:
        i, j = np.argwhere(~ok)[0]
        witness = {"elements": [int(a[i]), int(b[i]), int(elems[j])],
                   "residual": 1.0}
    results.append(CheckResult("gyration-left-division", all_ok,
                               n * n * n, 0.0 if all_ok else 1.0, witness))
    return results


def check_identities(model: GyroModel, spec: SampleSpec = SampleSpec()) -> AxiomReport:
    """Verify the classical gyrogroup identities on sampled triples.

    * left cancellation              (-x) + (x + y) = y
    * right cancellation, gyr form   (x + (-y)) + gyr[x, -y](y) = x
    * right cancellation, co-form    (x + gyr[x, y](-y)) + y = x
    * gyration formula               gyr agrees with -(x+y) + (x+(y+z))
    * gyrotranslation                (-x+y) + gyr[-x, y](-y+z) = -x+z
    * gyrosum inversion              -(x+y) = gyr[x, y]((-y) + (-x))
    """
    x, y, z = _triples(model, spec)
    report = AxiomReport(model=model.name)
    add = report.results.append

    ix, iy = model.inv(x), model.inv(y)
    add(_sweep(model, "identity-left-cancellation",
               model.op(ix, model.op(x, y)), y, [x, y]))
    add(_sweep(model, "identity-right-cancellation",
               model.op(model.op(x, iy), model.gyr(x, iy, y)), x, [x, y]))
    add(_sweep(model, "identity-right-cancellation-co",
               model.op(model.op(x, model.gyr(x, y, iy)), y), x, [x, y]))
    add(_sweep(model, "identity-gyration-formula",
               model.gyr(x, y, z), model.gyr_formula(x, y, z), [x, y, z]))
    add(_sweep(model, "identity-gyrotranslation",
               model.op(model.op(ix, y), model.gyr(ix, y, model.op(iy, z))),
               model.op(ix, z), [x, y, z]))
    add(_sweep(model, "identity-gyrosum-inversion",
               model.inv(model.op(x, y)),
               model.gyr(x, y, model.op(iy, ix)), [x, y]))
    return report
