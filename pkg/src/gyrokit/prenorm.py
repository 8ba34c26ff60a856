"""Dyadic neighborhood chains, the induced prenorm, and its metrics.

From a chain U_0 >= U_1 >= ... of symmetric, gyration-invariant sets
containing 0 with U_{n+1} (+) U_{n+1} <= U_n (weak flavor; the
admissible flavor strengthens this to U_{n+1} (+) (U_{n+1} (+) U_{n+1})
<= U_n), a family of sets indexed by dyadic rationals is built:

    V(1) = U_0,   V(1/2^n) = U_n,   V(2m/2^n) = V(m/2^(n-1)),
    V((2m+1)/2^n) = U_n (+) V(m/2^(n-1)),   V(m/2^n) = G for m > 2^n.

The prenorm is the Birkhoff-Kakutani infimum N(x) = inf{r : x in V(r)},
capped at 1 for points in no proper V.  It yields

    rho_N(x, y)  = N(-x + y) + N(-y + x)       (a metric when the
                                                chain tail is {0})
    d(x, y)      = |N(x) - N(y)|               (a pseudometric)
    varrho(pi(x), pi(y)) = d(-x+y, 0) + d(-y+x, 0)
                                               (a metric on the coset
                                                space G/H for the tail
                                                H of an admissible
                                                chain)

Finite chains are eventually constant: the last listed set repeats
forever and is the tail H.  Evaluation then closes the family under the
tail -- a membership x in H (+) V(r) certifies N(x) <= r, because a
level-d bit of the index with d past stabilization contributes exactly
an H factor, and iterated H factors collapse through gyration
invariance.  This makes the computed N the exact infimum of the
infinite construction (exact dyadic rationals), provided the build
depth reaches the chain's stabilization index.

Continuous chains are radial: every set is a norm ball and the whole
construction collapses to exact one-dimensional arithmetic on radii.

The prenorm laws (zero, symmetry, subadditivity, gyration invariance)
hold for the infimum only when the chain sets interact well with the
tail; they are therefore verified per chain by ``prenorm_laws_check``
rather than assumed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import IO

import numpy as np

from .core import ChainError, CheckResult, GyroModel, SampleSpec
from .cosets import CosetPartition
from .models import radial_third
from .sets import FiniteSet, OriginSet, RadialBall

__all__ = [
    "DyadicChain",
    "ChainReport",
    "validate_chain",
    "DyadicFamily",
    "build_dyadic_family",
    "prenorm_eval",
    "rho_N",
    "metric_d",
    "quotient_metric",
    "coset_invariant_N_check",
    "prenorm_laws_check",
    "ball",
    "rho_ball",
    "quotient_ball",
    "shrink",
    "admissible_hull",
    "admissible_intersection",
    "admissible_quotient_inclusion_check",
    "micro_assoc_check",
    "chain_load",
]

ONE = Fraction(1)


@dataclass
class DyadicChain:
    """A decreasing chain of neighborhood sets with a containment law.

    ``flavor`` is "weak" (U_{n+1}+U_{n+1} <= U_n) or "admissible"
    (U_{n+1}+(U_{n+1}+U_{n+1}) <= U_n).  Finite chains extend beyond
    the listed sets by repeating the last one (the tail); radial chains
    are only as deep as their radii list.
    """

    sets: list
    flavor: str = "weak"

    def __post_init__(self):
        if self.flavor not in ("weak", "admissible"):
            raise ChainError(f"unknown flavor {self.flavor!r}")
        if not self.sets:
            raise ChainError("chain must be nonempty")

    @property
    def kind(self) -> str:
        return "finite" if isinstance(self.sets[0], FiniteSet) else "radial"

    def __len__(self):
        return len(self.sets)

    def set_at(self, n: int):
        if n < len(self.sets):
            return self.sets[n]
        if self.kind == "finite":
            return self.sets[-1]
        raise ChainError(f"depth {n} exceeds chain length {len(self.sets)}")

    @property
    def tail(self):
        """The eventual intersection: last set (finite) or {0} (radial)."""
        return self.sets[-1] if self.kind == "finite" else OriginSet()

    def to_dict(self) -> dict:
        if self.kind == "finite":
            return {"flavor": self.flavor,
                    "sets": [list(s.indices()) for s in self.sets]}
        return {"flavor": self.flavor,
                "radii": [s.radius for s in self.sets]}


def chain_load(model: GyroModel, source: str | bytes | IO | dict) -> DyadicChain:
    """Load a chain-spec JSON document for the given model.

    ``{"flavor": "weak"|"admissible", "sets": [[indices...], ...]}`` for
    finite models, ``{"flavor": ..., "radii": [r0, r1, ...]}`` for ball
    models.
    """
    if isinstance(source, dict):
        doc = source
    else:
        text = source.read() if hasattr(source, "read") else source
        if isinstance(text, bytes):
            text = text.decode("utf-8")
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise ChainError(f"invalid JSON: {e}") from None
    flavor = doc.get("flavor", "weak")
    if "sets" in doc:
        if not model.is_finite:
            raise ChainError("explicit sets require a finite model")
        sets = [FiniteSet(model.n, indices=s) for s in doc["sets"]]
        return DyadicChain(sets, flavor)
    if "radii" in doc:
        if model.is_finite:
            raise ChainError("radial chains require a ball model")
        bound = getattr(model, "c", 1.0)
        radii = [float(r) for r in doc["radii"]]
        if any(not 0 < r < bound for r in radii):
            raise ChainError("radii must lie strictly inside the carrier")
        return DyadicChain([RadialBall(r) for r in radii], flavor)
    raise ChainError("chain document needs a 'sets' or 'radii' field")


@dataclass
class ChainReport:
    """Verdicts of a chain validation."""

    results: list[CheckResult] = field(default_factory=list)
    failing_index: int | None = None

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def to_json_lines(self) -> list[str]:
        return [r.to_json() for r in sorted(self.results, key=lambda r: r.name)]


def _law_sets(chain: DyadicChain, n: int):
    """(lhs, target) of the containment law at index n."""
    small, big = chain.sets[n + 1], chain.sets[n]
    return small, big


def validate_chain(model: GyroModel, chain: DyadicChain,
                   spec: SampleSpec = SampleSpec(1000)) -> ChainReport:
    """Verify symmetry, gyration invariance, and the containment law.

    Finite chains are checked exhaustively, including closure of the
    tail (required for the repeat-forever convention).  Radial chains
    reduce the law to radial arithmetic; their gyration invariance is
    the model's gyration isometry, attested at sampled triples.
    """
    report = ChainReport()
    add = report.results.append

    if chain.kind == "finite":
        for n, U in enumerate(chain.sets):
            ok = 0 in U
            add(CheckResult(f"chain-zero[{n}]", ok, 1, 0.0 if ok else 1.0,
                            None if ok else {"index": n}))
            ok = U.is_symmetric(model)
            add(CheckResult(f"chain-symmetric[{n}]", ok, len(U),
                            0.0 if ok else 1.0,
                            None if ok else {"index": n}))
            w = U.gyr_invariance_witness(model)
            add(CheckResult(f"chain-gyr-invariant[{n}]", w is None,
                            model.n * model.n, 0.0 if w is None else 1.0,
                            None if w is None else
                            {"index": n, "elements": [w[0], w[1]]}))
        for n in range(len(chain.sets) - 1):
            small, big = _law_sets(chain, n)
            prod = small.oplus(model, small)
            if chain.flavor == "admissible":
                prod = small.oplus(model, prod)
            ok = prod <= big
            if not ok and report.failing_index is None:
                report.failing_index = n
            escaped = sorted(set(prod.indices()) - set(big.indices()))
            add(CheckResult(f"chain-containment[{n}]", ok, len(prod),
                            0.0 if ok else 1.0,
                            None if ok else {"index": n, "escaped": escaped}))
        tail = chain.sets[-1]
        prod = tail.oplus(model, tail)
        ok = prod <= tail
        if not ok and report.failing_index is None:
            report.failing_index = len(chain.sets) - 1
        add(CheckResult("chain-tail-closed", ok, len(prod),
                        0.0 if ok else 1.0,
                        None if ok else
                        {"escaped": sorted(set(prod.indices())
                                           - set(tail.indices()))}))
        return report

    radii = [s.radius for s in chain.sets]
    bound = getattr(model, "c", 1.0)
    for n, r in enumerate(radii):
        ok = 0.0 < r < bound
        add(CheckResult(f"chain-radius[{n}]", ok, 1, 0.0 if ok else 1.0,
                        None if ok else {"index": n, "radius": r}))
    # radii are float data: a few-ulp guard keeps exactly-tight chains
    # (e.g. radial_add(0.5, 0.5) = 0.8) valid under roundoff
    guard = 1e-12
    for n in range(len(radii) - 1):
        s = radii[n + 1]
        val = RadialBall(s).oplus(model, RadialBall(s))
        if chain.flavor == "admissible":
            val = RadialBall(s).oplus(model, val)
        ok = val.radius <= radii[n] + guard
        if not ok and report.failing_index is None:
            report.failing_index = n
        add(CheckResult(f"chain-containment[{n}]", ok, 1,
                        max(0.0, val.radius - radii[n]),
                        None if ok else
                        {"index": n, "law_radius": val.radius,
                         "bound": radii[n]}))

    rng = np.random.default_rng(spec.seed)
    a = model.sample(rng, spec.count)
    b = model.sample(rng, spec.count)
    z = model.sample(rng, spec.count)
    res = np.abs(model.norm(model.gyr(a, b, z)) - model.norm(z))
    worst = int(np.argmax(res))
    ok = bool(res[worst] <= model.eps)
    add(CheckResult("chain-gyr-invariant", ok, res.size, float(res[worst]),
                    None if ok else
                    {"elements": [model.to_payload(a[worst]),
                                  model.to_payload(b[worst]),
                                  model.to_payload(z[worst])]}))
    return report


class DyadicFamily:
    """The dyadic family V(m/2^n) built from a validated chain.

    ``entries`` maps reduced dyadic rationals in (0, 1] to sets.  For
    finite models the evaluation grid carries exact ``Fraction`` values
    (0 on the tail); for radial chains evaluation is a step function of
    the norm over exactly-computed ball radii.
    """

    def __init__(self, model: GyroModel, chain: DyadicChain, depth: int):
        self.model = model
        self.chain = chain
        self.depth = depth
        self.entries: dict[Fraction, object] = {}

        self.entries[ONE] = chain.set_at(0)
        for n in range(1, depth + 1):
            self.entries[Fraction(1, 2 ** n)] = chain.set_at(n)
            u_n = chain.set_at(n)
            for m in range(1, 2 ** (n - 1)):
                key = Fraction(2 * m + 1, 2 ** n)
                self.entries[key] = u_n.oplus(
                    model, self.entries[Fraction(m, 2 ** (n - 1))])
        self.sorted_entries = sorted(self.entries.items())

        if chain.kind == "finite":
            tail = chain.tail
            self.tail = tail
            grid = []
            aug = [(r, tail.oplus(model, S))
                   for r, S in self.sorted_entries if r < ONE]
            for x in range(model.n):
                if x in tail:
                    grid.append(Fraction(0))
                    continue
                val = ONE
                for r, S in aug:
                    if x in S:
                        val = r
                        break
                grid.append(val)
            self._grid = grid
        else:
            self.tail = OriginSet()
            self._values = np.array([float(r) for r, _ in self.sorted_entries])
            self._radii = np.array([s.radius for _, s in self.sorted_entries])
            self._eval_monotone = bool(np.all(np.diff(self._radii) >= 0))

    def value_grid(self) -> list[Fraction]:
        """Exact N per element (finite models)."""
        if self.chain.kind != "finite":
            raise ChainError("value grids exist for finite models only")
        return list(self._grid)

    def prenorm(self, x):
        """N(x): exact Fraction (finite) or float (radial)."""
        if self.chain.kind == "finite":
            return self._grid[int(x)]
        return self.prenorm_batch(x)

    def prenorm_batch(self, xs):
        """Vectorized N over a batch (radial chains)."""
        if self.chain.kind == "finite":
            arr = np.asarray(xs, dtype=np.int64)
            vals = np.array([float(v) for v in self._grid])
            return vals[arr]
        r = np.atleast_1d(np.asarray(self.model.norm(xs), dtype=float))
        if self._eval_monotone:
            idx = np.searchsorted(self._radii, r, side="right")
            out = np.where(idx < self._values.size,
                           self._values[np.minimum(idx, self._values.size - 1)],
                           1.0)
        else:
            inside = r[:, None] < self._radii[None, :]
            masked = np.where(inside, self._values[None, :], np.inf)
            out = np.min(masked, axis=1)
            out = np.where(np.isfinite(out), out, 1.0)
        out = np.where(r == 0.0, 0.0, out)
        return float(out[0]) if np.asarray(xs).ndim <= 1 and out.size == 1 else out

    def monotone_check(self) -> CheckResult:
        """r <= s implies V(r) <= V(s), a derived property of the family."""
        if self.chain.kind == "finite":
            for (r1, s1), (r2, s2) in zip(self.sorted_entries,
                                          self.sorted_entries[1:]):
                if not s1 <= s2:
                    return CheckResult(
                        "family-monotone", False, len(self.sorted_entries), 1.0,
                        {"r": str(r1), "s": str(r2),
                         "escaped": sorted(set(s1.indices())
                                           - set(s2.indices()))})
            return CheckResult("family-monotone", True,
                               len(self.sorted_entries), 0.0)
        diffs = np.diff(self._radii)
        ok = bool(np.all(diffs >= 0))
        worst = float(-diffs.min()) if diffs.size else 0.0
        return CheckResult("family-monotone", ok, len(self.sorted_entries),
                           max(0.0, worst),
                           None if ok else {"radii": self._radii.tolist()})


def build_dyadic_family(model: GyroModel, chain: DyadicChain,
                        depth: int = 10) -> DyadicFamily:
    """Validate the chain (weak law suffices) and build V(m/2^n) to depth."""
    if depth < 1:
        raise ChainError("depth must be at least 1")
    if chain.kind == "radial" and depth > len(chain.sets) - 1:
        raise ChainError(
            f"depth {depth} exceeds chain length {len(chain.sets)}")
    report = validate_chain(model, chain)
    if not report.passed:
        bad = report.failures()[0]
        err = ChainError(f"invalid chain: {bad.name} ({bad.witness})")
        err.report = report
        raise err
    return DyadicFamily(model, chain, depth)


def prenorm_eval(family: DyadicFamily, x):
    """N(x) = inf{m/2^n : x in V(m/2^n)}, 1 if x is in no proper V."""
    return family.prenorm(x)


def rho_N(family: DyadicFamily, x, y):
    """The two-sided gyro-distance N(-x + y) + N(-y + x)."""
    m = family.model
    return (family.prenorm(m.op(m.inv(x), y))
            + family.prenorm(m.op(m.inv(y), x)))


def metric_d(family: DyadicFamily, x, y):
    """The prenorm-level pseudometric |N(x) - N(y)|."""
    return abs(family.prenorm(x) - family.prenorm(y))


def ball(family: DyadicFamily, x, eps) -> FiniteSet:
    """{x' : d(x', x) < eps} in a finite model."""
    if family.chain.kind != "finite":
        raise ChainError("explicit balls exist for finite models only")
    n = family.model.n
    return FiniteSet(n, indices=[i for i in range(n)
                                 if metric_d(family, i, x) < eps])


def rho_ball(family: DyadicFamily, x, eps) -> FiniteSet:
    """{x' : rho_N(x', x) < eps} in a finite model.

    This is exactly the fiber of the quotient ball: rho_N(x', x) equals
    varrho(pi(x'), pi(x)) by definition, so pi^-1(B*(pi(x), eps)) is the
    rho_N-ball.  The d-ball merely contains it (|N(x') - N(x)| never
    exceeds either one-sided term, by subadditivity).
    """
    if family.chain.kind != "finite":
        raise ChainError("explicit balls exist for finite models only")
    n = family.model.n
    return FiniteSet(n, indices=[i for i in range(n)
                                 if rho_N(family, i, x) < eps])


def quotient_ball(family: DyadicFamily, partition: CosetPartition,
                  coset: int, eps) -> list[int]:
    """{coset' : varrho(coset', coset) < eps} in the coset space."""
    return [j for j in range(len(partition.cosets))
            if quotient_metric(family.model, family, partition, coset, j) < eps]


def coset_invariant_N_check(model: GyroModel, family: DyadicFamily,
                            H) -> CheckResult:
    """N(x + h) = N(x) for all x and h in the chain tail H."""
    if model.is_finite:
        if not isinstance(H, FiniteSet):
            H = FiniteSet(model.n, indices=H)
        if H != family.tail:
            raise ValueError("H must be the tail of the family's chain")
        for x in range(model.n):
            for h in H.indices():
                if family.prenorm(model.op(x, h)) != family.prenorm(x):
                    return CheckResult(
                        "coset-invariance", False, model.n * len(H), 1.0,
                        {"elements": [x, h],
                         "n_xh": str(family.prenorm(model.op(x, h))),
                         "n_x": str(family.prenorm(x))})
        return CheckResult("coset-invariance", True, model.n * len(H), 0.0)
    # radial tails are {0}: N(x + 0) = N(x) holds identically
    rng = np.random.default_rng(0)
    xs = model.sample(rng, 256)
    res = np.abs(family.prenorm_batch(model.op(xs, model.zero))
                 - family.prenorm_batch(xs))
    worst = int(np.argmax(res))
    ok = bool(res[worst] == 0.0)
    return CheckResult("coset-invariance", ok, res.size, float(res[worst]),
                       None if ok else
                       {"elements": [model.to_payload(xs[worst])]})


def quotient_metric(model: GyroModel, family: DyadicFamily,
                    partition: CosetPartition, ci: int, cj: int):
    """varrho(pi(x), pi(y)) = d(-x+y, 0) + d(-y+x, 0) on the coset space.

    Requires the partition's H to be the tail of the (admissible) chain
    the family was built from.  Evaluated from every representative
    pair; any disagreement is raised as representative dependence.
    """
    if family.chain.flavor != "admissible":
        raise ValueError("quotient metrics require an admissible chain")
    if partition.H != family.tail:
        raise ValueError("partition subgroup must equal the chain tail")
    vals = {rho_N(family, x, y)
            for x in partition.cosets[ci] for y in partition.cosets[cj]}
    if len(vals) != 1:
        raise ValueError(
            f"representative-dependent quotient distance between cosets "
            f"{ci} and {cj}: values {sorted(map(str, vals))}")
    return vals.pop()


def prenorm_laws_check(model: GyroModel, family: DyadicFamily,
                       spec: SampleSpec = SampleSpec(1000)) -> list[CheckResult]:
    """Verify the prenorm laws and the sandwich property for a family.

    Exhaustive on finite models.  On radial chains the laws are exact
    consequences of the one-dimensional arithmetic except within float
    distance of a ball boundary; sampled points falling there are
    counted for the verdict anyway (seeded runs are reproducible).
    """
    out = [family.monotone_check()]
    N = family.prenorm
    if model.is_finite:
        n = model.n
        ok = N(0) == 0
        out.append(CheckResult("prenorm-zero", ok, 1, 0.0 if ok else 1.0))
        bad = next((x for x in range(n) if N(model.inv(x)) != N(x)), None)
        out.append(CheckResult("prenorm-symmetry", bad is None, n,
                               0.0 if bad is None else 1.0,
                               None if bad is None else {"elements": [bad]}))
        bad = None
        for x in range(n):
            for y in range(n):
                if N(model.op(x, y)) > N(x) + N(y):
                    bad = {"elements": [x, y],
                           "n_xy": str(N(model.op(x, y))),
                           "bound": str(N(x) + N(y))}
                    break
            if bad:
                break
        out.append(CheckResult("prenorm-subadditivity", bad is None, n * n,
                               0.0 if bad is None else 1.0, bad))
        bad = None
        for a in range(n):
            for b in range(n):
                gz = model.gyr(a, b, np.arange(n))
                if any(N(int(gz[z])) != N(z) for z in range(n)):
                    z = next(z for z in range(n) if N(int(gz[z])) != N(z))
                    bad = {"elements": [a, b, z]}
                    break
            if bad:
                break
        out.append(CheckResult("prenorm-gyr-invariance", bad is None,
                               n * n * n, 0.0 if bad is None else 1.0, bad))
        bad = None
        for k in range(family.depth + 1):
            U = family.chain.set_at(k)
            lo, hi = Fraction(1, 2 ** k), Fraction(2, 2 ** k)
            for x in range(n):
                if N(x) < lo and x not in U:
                    bad = {"index": k, "elements": [x], "side": "lower"}
                    break
                if x in U and N(x) > hi:
                    bad = {"index": k, "elements": [x], "side": "upper"}
                    break
            if bad:
                break
        out.append(CheckResult("prenorm-sandwich", bad is None,
                               (family.depth + 1) * n,
                               0.0 if bad is None else 1.0, bad))
        return out

    rng = np.random.default_rng(spec.seed)
    xs = model.sample(rng, spec.count)
    ys = model.sample(rng, spec.count)
    nx = family.prenorm_batch(xs)

    ok = family.prenorm(model.zero) == 0.0
    out.append(CheckResult("prenorm-zero", ok, 1, 0.0 if ok else 1.0))

    res = np.abs(family.prenorm_batch(model.inv(xs)) - nx)
    worst = int(np.argmax(res))
    out.append(CheckResult("prenorm-symmetry", bool(res[worst] == 0.0),
                           res.size, float(res[worst]),
                           None if res[worst] == 0.0 else
                           {"elements": [model.to_payload(xs[worst])]}))

    ny = family.prenorm_batch(ys)
    nxy = family.prenorm_batch(model.op(xs, ys))
    res = nxy - (nx + ny)
    worst = int(np.argmax(res))
    ok = bool(res[worst] <= 0.0)
    out.append(CheckResult("prenorm-subadditivity", ok, res.size,
                           max(0.0, float(res[worst])),
                           None if ok else
                           {"elements": [model.to_payload(xs[worst]),
                                         model.to_payload(ys[worst])]}))

    zs = model.sample(rng, spec.count)
    res = np.abs(family.prenorm_batch(model.gyr(xs, ys, zs))
                 - family.prenorm_batch(zs))
    worst = int(np.argmax(res))
    ok = bool(res[worst] == 0.0)
    out.append(CheckResult("prenorm-gyr-invariance", ok, res.size,
                           float(res[worst]),
                           None if ok else
                           {"elements": [model.to_payload(xs[worst]),
                                         model.to_payload(ys[worst]),
                                         model.to_payload(zs[worst])]}))

    bad = None
    norms = model.norm(xs)
    for k in range(family.depth + 1):
        rk = family.chain.set_at(k).radius
        lo, hi = 1.0 / 2 ** k, 2.0 / 2 ** k
        low_bad = (nx < lo) & (norms >= rk)
        up_bad = (norms < rk) & (nx > hi)
        if low_bad.any() or up_bad.any():
            i = int(np.argmax(low_bad | up_bad))
            bad = {"index": k, "elements": [model.to_payload(xs[i])],
                   "n": float(nx[i]), "norm": float(norms[i])}
            break
    out.append(CheckResult("prenorm-sandwich", bad is None,
                           (family.depth + 1) * xs.shape[0],
                           0.0 if bad is None else 1.0, bad))
    return out


# ------------------------------------------------------- shrink machinery

def _orbit_units(model: GyroModel) -> list[FiniteSet]:
    """Partition the carrier into closures under inverse and all gyrations.

    Removing whole units keeps a set symmetric and gyration-invariant.
    """
    n = model.n
    maps = [np.asarray(model.inv(np.arange(n)))]
    for a in range(n):
        for b in range(n):
            g = np.asarray(model.gyr(a, b, np.arange(n)))
            if not np.array_equal(g, np.arange(n)):
                maps.append(g)
    unit_of = [None] * n
    units = []
    for x in range(n):
        if unit_of[x] is not None:
            continue
        seen = {x}
        frontier = [x]
        while frontier:
            y = frontier.pop()
            for mp in maps:
                t = int(mp[y])
                if t not in seen:
                    seen.add(t)
                    frontier.append(t)
        unit = FiniteSet(n, indices=seen)
        for y in seen:
            unit_of[y] = unit
        units.append(unit)
    return units


def _invariant_restriction(model: GyroModel, U: FiniteSet) -> FiniteSet:
    """Largest symmetric gyration-invariant subset of U (union of units)."""
    out = FiniteSet(U.n)
    for unit in _orbit_units(model):
        if unit <= U:
            out = out | unit
    return out


def _greedy_shrink(model: GyroModel, start: FiniteSet, target: FiniteSet,
                   triple: bool) -> FiniteSet:
    """Largest-by-greedy V <= start with V+V <= target (or V+(V+V) <= target).

    Offending elements are removed largest index first, together with
    their symmetry/gyration unit, until the law holds.  Deterministic;
    0 is never removed.
    """
    units = _orbit_units(model)
    unit_of = {}
    for unit in units:
        for x in unit.indices():
            unit_of[x] = unit
    V = FiniteSet(start.n)
    for unit in units:
        if unit <= start:
            V = V | unit
    in_target = np.zeros(model.n, dtype=bool)
    in_target[list(target.indices())] = True
    while True:
        idx = np.fromiter(V.indices(), dtype=np.int64)
        if triple:
            xx, yy, zz = np.meshgrid(idx, idx, idx, indexing="ij")
            vals = model.op(xx, model.op(yy, zz))
            bad = ~in_target[vals]
            involved = np.concatenate(
                [xx[bad].ravel(), yy[bad].ravel(), zz[bad].ravel()])
        else:
            xx, yy = np.meshgrid(idx, idx, indexing="ij")
            vals = model.op(xx, yy)
            bad = ~in_target[vals]
            involved = np.concatenate([xx[bad].ravel(), yy[bad].ravel()])
        if involved.size == 0:
            return V
        worst = int(np.max(involved[involved != 0]))
        V = FiniteSet(V.n, V.mask & ~unit_of[worst].mask)


def shrink(model: GyroModel, U):
    """A symmetric gyration-invariant V containing 0 with V + V <= U.

    Finite models: the greedy-largest such subset of U.  Radial models:
    the exact half-radius ball solving radial_add(r, r) = radius(U).
    """
    if model.is_finite:
        if 0 not in U:
            raise ValueError("U must contain the identity")
        start = _invariant_restriction(model, U)
        return _greedy_shrink(model, start, U, triple=False)
    if not isinstance(U, RadialBall):
        raise ValueError("continuous shrinking supports radial balls only")
    from .models import radial_half
    return RadialBall(radial_half(U.radius, getattr(model, "c", 1.0)))


def admissible_hull(model: GyroModel, U, depth: int = 10):
    """An admissible chain inside U and its tail L-subgyrogroup H.

    Finite models descend strictly: each step takes the greedy-largest
    symmetric gyration-invariant V with V+(V+V) inside the previous
    set, force-dropping the largest remaining unit when the previous
    set was already closed, until reaching {0}.  Radial models take
    exact third-radii r_{n+1} = tanh(artanh(r_n)/3).  H = {0} always
    succeeds; the chain is padded with its tail out to ``depth``.
    """
    if model.is_finite:
        if 0 not in U:
            raise ValueError("U must contain the identity")
        sets = [_invariant_restriction(model, U)]
        zero = FiniteSet.singleton_zero(model.n)
        while sets[-1] != zero:
            cur = sets[-1]
            V = _greedy_shrink(model, cur, cur, triple=True)
            if V == cur:
                worst = max(x for x in cur.indices() if x != 0)
                units = _orbit_units(model)
                unit = next(u for u in units if worst in u)
                V = FiniteSet(cur.n, cur.mask & ~unit.mask)
            sets.append(V)
        while len(sets) < depth + 1:
            sets.append(sets[-1])
        chain = DyadicChain(sets, "admissible")
        return chain, sets[-1]
    if not isinstance(U, RadialBall):
        raise ValueError("continuous hulls support radial balls only")
    r = U.radius
    bound = getattr(model, "c", 1.0)
    radii = [r]
    for _ in range(depth):
        radii.append(radial_third(radii[-1], bound))
    chain = DyadicChain([RadialBall(t) for t in radii], "admissible")
    return chain, OriginSet()


def admissible_intersection(model: GyroModel, chains: list[DyadicChain]):
    """The diagonal chain V_n = intersection of U_{i,n} over i <= n.

    Admissible whenever the inputs are; its tail is the intersection of
    the input tails.  Finitely many chains truncate the diagonal at the
    last chain index.
    """
    if not chains:
        raise ChainError("need at least one chain")
    if any(c.flavor != "admissible" for c in chains):
        raise ChainError("all chains must be admissible")
    if len({c.kind for c in chains}) > 1:
        raise ChainError("cannot mix finite and radial chains")
    k = len(chains)
    if k == 1:
        return chains[0], chains[0].tail

    if chains[0].kind == "finite":
        length = max(len(c) for c in chains) + k
        sets = []
        for n in range(length):
            cur = chains[0].set_at(n)
            for i in range(1, min(n, k - 1) + 1):
                cur = cur & chains[i].set_at(n)
            sets.append(cur)
        chain = DyadicChain(sets, "admissible")
        return chain, sets[-1]

    length = min(len(c) for c in chains)
    if length < k:
        raise ChainError(
            "radial chains must be at least as long as their count "
            "for the diagonal to reach every chain")
    sets = []
    for n in range(length):
        rr = min(chains[i].sets[n].radius for i in range(min(n, k - 1) + 1))
        sets.append(RadialBall(rr))
    return DyadicChain(sets, "admissible"), OriginSet()


def admissible_quotient_inclusion_check(model: GyroModel, chain: DyadicChain,
                                        H) -> CheckResult:
    """U_{n+1} + H <= U_{n+1} + U_{n+1} <= U_n for every chain index."""
    if chain.kind == "radial":
        # H = {0} and radial_add(r, 0) = r <= r_n
        ok = all(chain.sets[n + 1].radius <= chain.sets[n].radius
                 for n in range(len(chain) - 1))
        return CheckResult("quotient-inclusion", ok, len(chain) - 1,
                           0.0 if ok else 1.0)
    if not isinstance(H, FiniteSet):
        H = FiniteSet(model.n, indices=H)
    for n in range(len(chain) - 1):
        small, big = chain.sets[n + 1], chain.sets[n]
        left = small.oplus(model, H)
        mid = small.oplus(model, small)
        if not (left <= mid and mid <= big):
            return CheckResult(
                "quotient-inclusion", False, len(chain) - 1, 1.0,
                {"index": n,
                 "left<=mid": bool(left <= mid),
                 "mid<=right": bool(mid <= big)})
    return CheckResult("quotient-inclusion", True, len(chain) - 1, 0.0)


def _directions(model: GyroModel, count: int) -> np.ndarray:
    """Deterministic unit directions: roots of unity or a Fibonacci sphere."""
    if np.iscomplexobj(np.asarray(model.zero)):
        ang = 2.0 * math.pi * np.arange(count) / count
        return np.exp(1j * ang)
    dim = model.zero.shape[0]
    if dim == 2:
        ang = 2.0 * math.pi * np.arange(count) / count
        return np.stack([np.cos(ang), np.sin(ang)], axis=-1)
    i = np.arange(count) + 0.5
    phi = math.pi * (3.0 - math.sqrt(5.0)) * i
    cz = 1.0 - 2.0 * i / count
    sz = np.sqrt(1.0 - cz * cz)
    return np.stack([sz * np.cos(phi), sz * np.sin(phi), cz], axis=-1)


def micro_assoc_check(model: GyroModel, W, V,
                      spec: SampleSpec = SampleSpec(100),
                      directions: int = 256) -> CheckResult:
    """Set equality a + (b + V) = (a + b) + V for a, b ranging over W.

    Exact set comparison on finite models.  On ball models V and W are
    radial; equality is certified by pulling boundary probes of each
    side back through the other and measuring the worst norm defect
    over ``directions`` deterministic directions (a sampled Hausdorff
    bound).
    """
    if model.is_finite:
        if not (W <= V):
            raise ValueError("W must be contained in V")
        for a in W.indices():
            for b in W.indices():
                bV = FiniteSet(model.n, indices=[b]).oplus(model, V)
                lhs = FiniteSet(model.n, indices=[a]).oplus(model, bV)
                rhs = FiniteSet(model.n,
                                indices=[model.op(a, b)]).oplus(model, V)
                if lhs != rhs:
                    diff = sorted(set(lhs.indices()) ^ set(rhs.indices()))
                    return CheckResult(
                        "micro-associativity", False, len(W) ** 2, 1.0,
                        {"elements": [a, b], "difference": diff})
        return CheckResult("micro-associativity", True, len(W) ** 2, 0.0)

    if not (isinstance(W, RadialBall) and isinstance(V, RadialBall)):
        raise ValueError("continuous micro-associativity supports radial "
                         "balls only")
    if W.radius > V.radius:
        raise ValueError("W must be contained in V")
    rng = np.random.default_rng(spec.seed)
    azs = W.sample(model, rng, spec.count)
    bzs = W.sample(model, rng, spec.count)
    dirs = _directions(model, directions)
    probes = V.radius * dirs
    worst = 0.0
    witness = None
    for a, b in zip(azs, bzs):
        ab = model.op(a, b)
        # forward probes: a + (b + z) must land on the boundary of (a+b) + V
        p = model.op(a, model.op(b, probes))
        back = model.norm(model.op(model.inv(ab), p))
        r1 = float(np.max(np.abs(back - V.radius)))
        # reverse probes: (a + b) + z pulled back through a, b
        q = model.op(ab, probes)
        back2 = model.norm(model.op(model.inv(b), model.op(model.inv(a), q)))
        r2 = float(np.max(np.abs(back2 - V.radius)))
        if max(r1, r2) > worst:
            worst = max(r1, r2)
            witness = {"elements": [model.to_payload(a), model.to_payload(b)],
                       "residual": worst}
    passed = worst < 1e-6
    return CheckResult("micro-associativity", passed,
                       spec.count * directions, worst,
                       None if passed else witness)
