"""Sector geometry: good coverings, q-spiral domains, root admissibility.

A good covering is a cyclic family of open sectors E_0..E_{n-1} with a
common vertex at 0 such that consecutive sectors (indices mod n)
overlap, non-consecutive ones are disjoint, and the union covers a full
punctured disc.

The q-spiral domain attached to a direction d and threshold dlt is

    R_{d,dlt} = { T != 0 : |1 + r e^{id} / T| > dlt  for all r >= 0 }.

Writing theta = wrap(d - arg T), the infimum over r is 1 when
cos(theta) >= 0 and |sin(theta)| otherwise, which gives a closed-form
membership test.  Its bounded version intersects with a disc.

Root layouts: for a polynomial pair (Q, R_D) and integers d_D >= 1, the
auxiliary polynomial in tau attached to a Fourier point m has roots
located explicitly: the d_D-th roots of

    [Q(im)/R_D(im)] * (q^{1/k})^{ (d_D+k)(d_D+k-1)/2 - k(k-1)/2 }.

A direction is admissible when every sampled point tau of its test
domain keeps |tau - root| >= M1 (1+|tau|) and >= M2 |root| for all
roots over the m-grid.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi


def wrap_angle(a):
    """Wrap to (-pi, pi]; accepts scalars or arrays."""
    w = math.pi - np.mod(math.pi - np.asarray(a, dtype=float), TWO_PI)
    if np.ndim(a) == 0:
        return float(w)
    return w


@dataclass(frozen=True)
class Sector:
    """Open sector { z : inner_radius < |z| < radius,
    |wrap(arg z - bisector)| < half_opening }."""

    bisector: float
    half_opening: float
    radius: float = math.inf
    inner_radius: float = 0.0

    def __post_init__(self) -> None:
        if not 0 < self.half_opening < math.pi:
            raise ValueError(f"half_opening must be in (0, pi), got {self.half_opening}")
        if not self.radius > self.inner_radius >= 0:
            raise ValueError("need radius > inner_radius >= 0")

    def contains(self, z: complex) -> bool:
        z = complex(z)
        r = abs(z)
        if not (self.inner_radius < r < self.radius):
            return False
        return abs(wrap_angle(cmath.phase(z) - self.bisector)) < self.half_opening

    def contains_angle(self, a: float) -> bool:
        return abs(wrap_angle(a - self.bisector)) < self.half_opening

    def angular_gap(self, other: "Sector") -> float:
        """|wrap(bisector difference)| - (sum of half openings); negative
        means the angular arcs overlap."""
        return abs(wrap_angle(self.bisector - other.bisector)) \
            - (self.half_opening + other.half_opening)

    def intersects(self, other: "Sector") -> bool:
        radial = min(self.radius, other.radius) > max(self.inner_radius,
                                                      other.inner_radius)
        return radial and self.angular_gap(other) < 0

    def sample_points(self, n_radial: int = 24, n_angular: int = 24,
                      r_cap: float = 1e3, pad: float = 1e-3) -> np.ndarray:
        """Polar sample grid strictly inside the sector (unbounded sectors
        truncated at r_cap)."""
        r_hi = min(self.radius, r_cap)
        r_lo = max(self.inner_radius, r_hi * 1e-6)
        radii = np.exp(np.linspace(math.log(r_lo * (1 + pad)),
                                   math.log(r_hi * (1 - pad)), n_radial))
        h = self.half_opening * (1 - pad)
        angles = self.bisector + np.linspace(-h, h, n_angular)
        return np.multiply.outer(radii, np.exp(1j * angles)).ravel()

    def to_dict(self) -> dict:
        return {"bisector": self.bisector, "opening": 2.0 * self.half_opening,
                "radius": self.radius if math.isfinite(self.radius) else None}

    @classmethod
    def from_dict(cls, d: dict) -> "Sector":
        radius = d.get("radius")
        return cls(bisector=d["bisector"], half_opening=0.5 * d["opening"],
                   radius=math.inf if radius is None else radius,
                   inner_radius=d.get("inner_radius", 0.0))


@dataclass(frozen=True)
class CoveringReport:
    ok: bool
    n: int
    adjacency_violations: list
    coverage_gaps: list
    common_radius: float


@dataclass(frozen=True)
class GoodCovering:
    """Cyclic family of origin sectors, consecutive-overlap only."""

    sectors: tuple[Sector, ...]

    def __post_init__(self) -> None:
        if len(self.sectors) < 2:
            raise ValueError("a covering needs at least 2 sectors")
        for s in self.sectors:
            if s.inner_radius != 0.0:
                raise ValueError("covering sectors must have vertex at the origin "
                                 "(inner_radius = 0)")

    @property
    def n(self) -> int:
        return len(self.sectors)

    def sector(self, p: int) -> Sector:
        return self.sectors[p % self.n]

    @property
    def common_radius(self) -> float:
        return min(s.radius for s in self.sectors)

    def overlap_bisector(self, p: int) -> float:
        """Bisector angle of E_p intersect E_{p+1} (cyclic)."""
        a, b = self.sector(p), self.sector(p + 1)
        lo = wrap_angle(b.bisector - b.half_opening - a.bisector)  # rel to a.bisector
        hi = a.half_opening
        if lo >= hi:
            raise ValueError(f"sectors {p} and {p + 1} do not overlap")
        return a.bisector + 0.5 * (lo + hi)

    def overlap_half_width(self, p: int) -> float:
        a, b = self.sector(p), self.sector(p + 1)
        lo = wrap_angle(b.bisector - b.half_opening - a.bisector)
        hi = a.half_opening
        return 0.5 * (hi - lo)

    def overlap_radius(self, p: int) -> float:
        return min(self.sector(p).radius, self.sector(p + 1).radius)

    def membership(self, z: complex) -> list[int]:
        return [p for p in range(self.n) if self.sectors[p].contains(z)]

    def to_dict(self) -> dict:
        return {"covering": [s.to_dict() for s in self.sectors]}

    @classmethod
    def from_dict(cls, d: dict) -> "GoodCovering":
        return cls(sectors=tuple(Sector.from_dict(sd) for sd in d["covering"]))


def validate_good_covering(cov: GoodCovering,
                           arc_resolution: int = 2048) -> CoveringReport:
    """Check the three defining properties on an angle grid.

    Reported violations: consecutive pairs that fail to overlap,
    non-consecutive pairs that do, and sample angles covered by no
    sector.  The common radius is the largest disc radius on which the
    covering covers a full punctured neighborhood.
    """
    n = cov.n
    adjacency = []
    for p in range(n):
        for r in range(p + 1, n):
            gap = min((r - p) % n, (p - r) % n)
            inter = cov.sectors[p].intersects(cov.sectors[r])
            if gap == 1 and not inter:
                adjacency.append({"pair": (p, r), "problem": "consecutive sectors disjoint"})
            if gap > 1 and inter:
                adjacency.append({"pair": (p, r), "problem": "non-consecutive sectors overlap"})
    gaps = []
    angles = np.linspace(-math.pi, math.pi, arc_resolution, endpoint=False)
    covered = np.zeros(arc_resolution, dtype=bool)
    for s in cov.sectors:
        covered |= np.abs(((angles - s.bisector + math.pi) % TWO_PI) - math.pi) \
            < s.half_opening
    for a in angles[~covered]:
        gaps.append(float(a))
    ok = not adjacency and not gaps
    return CoveringReport(ok=ok, n=n, adjacency_violations=adjacency,
                          coverage_gaps=gaps, common_radius=cov.common_radius)


def make_cyclic_covering(n: int, radius: float, half_opening: float,
                         phase: float = 0.0) -> GoodCovering:
    """Equispaced bisectors; good iff pi/n < half_opening < 2*pi/n (strictly)."""
    step = TWO_PI / n
    if not (step < 2 * half_opening < 2 * step):
        raise ValueError("half_opening incompatible with a good covering: need "
                         f"pi/{n} < half_opening < 2pi/{n}")
    sectors = tuple(Sector(bisector=wrap_angle(phase + p * step),
                           half_opening=half_opening, radius=radius)
                    for p in range(n))
    return GoodCovering(sectors=sectors)


# --- q-spiral domains -------------------------------------------------------

def qspiral_infimum(d: float, T: complex) -> float:
    """inf over r >= 0 of |1 + r e^{id}/T|, in closed form."""
    T = complex(T)
    if T == 0:
        raise ValueError("T must be nonzero")
    theta = wrap_angle(d - cmath.phase(T))
    if math.cos(theta) >= 0.0:
        return 1.0
    return abs(math.sin(theta))


def qspiral_membership(d: float, dlt: float, T: complex) -> bool:
    """T in R_{d,dlt}: the ray r e^{id} stays dlt-clear of -T for r >= 0."""
    if not 0 < dlt < 1:
        raise ValueError(f"dlt must be in (0,1), got {dlt}")
    return qspiral_infimum(d, T) > dlt


@dataclass(frozen=True)
class QSpiralDomain:
    """R_{d,dlt}, optionally intersected with a disc of given radius."""

    d: float
    dlt: float
    radius: float = math.inf

    def __post_init__(self) -> None:
        if not 0 < self.dlt < 1:
            raise ValueError(f"dlt must be in (0,1), got {self.dlt}")

    def contains(self, T: complex) -> bool:
        T = complex(T)
        if T == 0 or abs(T) >= self.radius:
            return False
        return qspiral_membership(self.d, self.dlt, T)

    def infimum(self, T: complex) -> float:
        return qspiral_infimum(self.d, T)

    def bounded(self, radius: float) -> "QSpiralDomain":
        return QSpiralDomain(d=self.d, dlt=self.dlt,
                             radius=min(self.radius, radius))


# --- explicit root layouts and admissibility --------------------------------

def polyval_im(coeffs, m) -> np.ndarray:
    """Evaluate the polynomial with ascending coefficients at x = i*m."""
    return np.polynomial.polynomial.polyval(1j * np.asarray(m, dtype=float),
                                            np.asarray(coeffs, dtype=complex))


@dataclass(frozen=True)
class RootConfig:
    """Data needed to locate the roots attached to one operator level.

    Q, RD: ascending coefficient lists; d_D >= 1 dilation power; k the
    Gevrey level; q the base.  M1, M2 are the admissibility margins, and
    m_grid the Fourier grid the layout is examined on.
    """

    Q: tuple[float, ...]
    RD: tuple[float, ...]
    d_D: int
    k: float
    q: float
    M1: float = 0.05
    M2: float = 0.05
    m_grid: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.d_D < 1:
            raise ValueError("d_D must be >= 1")
        if not (self.q > 1 and self.k > 0):
            raise ValueError("need q > 1 and k > 0")

    def default_m_grid(self) -> np.ndarray:
        if self.m_grid is not None and len(self.m_grid):
            return np.asarray(self.m_grid, dtype=float)
        return default_m_grid()


def default_m_grid(n: int = 257, m_max: float = 20.0) -> np.ndarray:
    """Symmetric grid on [-m_max, m_max], denser near 0 (odd count keeps 0)."""
    half = (n - 1) // 2
    t = np.linspace(0.0, 1.0, half + 1)
    pos = m_max * np.sinh(3.0 * t) / math.sinh(3.0)
    return np.concatenate([-pos[::-1][:-1], pos])


def roots_of_P(cfg: RootConfig, m: float) -> np.ndarray:
    """The d_D roots of the tau-polynomial at Fourier point m, sorted by
    principal argument (ties by modulus).

    They are the d_D-th roots of
        [Q(im)/RD(im)] * (q^{1/k})^{ (d_D+k)(d_D+k-1)/2 - k(k-1)/2 }.
    """
    qnum = complex(polyval_im(cfg.Q, m))
    rden = complex(polyval_im(cfg.RD, m))
    if rden == 0:
        raise ZeroDivisionError(f"RD(im) vanishes at m={m}")
    expo = ((cfg.d_D + cfg.k) * (cfg.d_D + cfg.k - 1) / 2.0
            - cfg.k * (cfg.k - 1) / 2.0) / cfg.k
    target = qnum / rden * cfg.q ** expo
    if target == 0:
        return np.zeros(cfg.d_D, dtype=complex)
    rho = abs(target) ** (1.0 / cfg.d_D)
    base = cmath.phase(target) / cfg.d_D
    roots = np.array([rho * cmath.exp(1j * (base + TWO_PI * j / cfg.d_D))
                      for j in range(cfg.d_D)])
    order = np.lexsort((np.abs(roots), np.angle(roots)))
    return roots[order]


@dataclass(frozen=True)
class AdmissibilityReport:
    ok: bool
    M1_est: float
    M2_est: float
    M1_required: float
    M2_required: float
    worst_tau: complex
    worst_root: complex
    n_tau: int
    n_m: int


def direction_admissible(cfg: RootConfig, domain: Sector,
                         include_disc_radius: float | None = None,
                         n_radial: int = 40, n_angular: int = 15,
                         r_cap: float = 1e3) -> AdmissibilityReport:
    """Estimate the admissibility margins of a candidate direction.

    The test domain is sampled (sector cloud, optionally union a disc of
    given radius for the level-one variant) and

        M1_est = min |tau - root| / (1 + |tau|),
        M2_est = min |tau - root| / |root|

    are taken over all sampled tau, grid m and roots.  ok requires both
    estimates to clear the configured margins.
    """
    taus = domain.sample_points(n_radial=n_radial, n_angular=n_angular, r_cap=r_cap)
    if include_disc_radius is not None and include_disc_radius > 0:
        radii = np.linspace(include_disc_radius / 12, include_disc_radius, 12)
        angles = np.linspace(-math.pi, math.pi, 24, endpoint=False)
        taus = np.concatenate([taus, np.multiply.outer(radii,
                                                       np.exp(1j * angles)).ravel()])
    m_grid = cfg.default_m_grid()
    all_roots = np.concatenate([roots_of_P(cfg, m) for m in m_grid])
    nonzero = all_roots[np.abs(all_roots) > 0]

    dist = np.abs(taus[:, None] - all_roots[None, :])
    r1 = dist / (1.0 + np.abs(taus))[:, None]
    i1 = np.unravel_index(int(np.argmin(r1)), r1.shape)
    m1_est = float(r1[i1])
    if len(nonzero):
        dist2 = np.abs(taus[:, None] - nonzero[None, :]) / np.abs(nonzero)[None, :]
        i2 = np.unravel_index(int(np.argmin(dist2)), dist2.shape)
        m2_est = float(dist2[i2])
        worst_tau, worst_root = complex(taus[i1[0]]), complex(all_roots[i1[1]])
    else:
        m2_est = math.inf
        worst_tau, worst_root = complex(taus[i1[0]]), complex(all_roots[i1[1]])
    ok = (m1_est >= cfg.M1) and (m2_est >= cfg.M2)
    return AdmissibilityReport(ok=ok, M1_est=m1_est, M2_est=m2_est,
                               M1_required=cfg.M1, M2_required=cfg.M2,
                               worst_tau=worst_tau, worst_root=worst_root,
                               n_tau=len(taus), n_m=len(m_grid))


# --- pairing of covering sectors with spiral domains ------------------------

@dataclass(frozen=True)
class FamilyReport:
    ok: bool
    product_failures: list
    overlap_failures: list


def associate_family(cov: GoodCovering, directions: list[float], dlt: float,
                     t_sector: Sector, epsilon0: float,
                     n_eps: int = 7, n_t: int = 7) -> FamilyReport:
    """Couple each covering sector E_p with the spiral domain of its direction.

    Verifies on sample grids that (i) eps*t lands in the bounded domain
    R_{d_p, dlt} cap D(0, epsilon0 * t_radius) for every sampled
    (eps, t) in E_p x T, and (ii) consecutive bounded domains intersect
    (witness search on a polar grid).
    """
    if len(directions) != cov.n:
        raise ValueError("need exactly one direction per covering sector")
    r_t = t_sector.radius
    product_failures = []
    for p in range(cov.n):
        dom = QSpiralDomain(d=directions[p], dlt=dlt, radius=epsilon0 * r_t)
        eps_samples = cov.sector(p).sample_points(n_radial=n_eps, n_angular=n_eps)
        # scale into the sector's radial range [tiny, radius)
        t_samples = t_sector.sample_points(n_radial=n_t, n_angular=n_t)
        for e in eps_samples:
            for t in t_samples:
                if not dom.contains(e * t):
                    product_failures.append({"p": p, "eps": repr(e), "t": repr(t)})
    overlap_failures = []
    for p in range(cov.n):
        a = QSpiralDomain(d=directions[p], dlt=dlt, radius=epsilon0 * r_t)
        b = QSpiralDomain(d=directions[(p + 1) % cov.n], dlt=dlt,
                          radius=epsilon0 * r_t)
        radii = np.linspace(epsilon0 * r_t / 40, epsilon0 * r_t * 0.98, 12)
        angles = np.linspace(-math.pi, math.pi, 96, endpoint=False)
        found = any(a.contains(r * np.exp(1j * th)) and b.contains(r * np.exp(1j * th))
                    for r in radii for th in angles)
        if not found:
            overlap_failures.append({"pair": (p, (p + 1) % cov.n)})
    return FamilyReport(ok=not product_failures and not overlap_failures,
                        product_failures=product_failures,
                        overlap_failures=overlap_failures)


# --- scenario (de)serialization ---------------------------------------------

def geometry_scenario_to_dict(cov: GoodCovering, directions: list[float],
                              dlt: float, rho: float) -> dict:
    d = cov.to_dict()
    d.update({"directions": list(directions), "delta_t": dlt, "rho": rho})
    return d


def geometry_scenario_from_dict(d: dict) -> tuple[GoodCovering, list[float], float, float]:
    cov = GoodCovering.from_dict(d)
    return cov, list(d["directions"]), float(d["delta_t"]), float(d["rho"])


def geometry_scenario_from_json(s: str):
    return geometry_scenario_from_dict(json.loads(s))
