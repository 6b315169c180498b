"""Worked solution family exhibiting the two-level difference dichotomy.

The family attaches to each sector of a good covering a directional
q-Laplace transform (fast level k2) of one kernel branch:

    U_p(T) = (k2/log q) int_{ray d_p} shape_p(u) / Theta_{q^{1/k2}}(u/T) du/u.

Kernel branches combine a log-Gaussian factor flat of order kappa at the
origin (with a sector-adapted logarithm branch) and shared simple-pole
terms u/(u - u*):

    shape_p(u) = amp * exp( -(kappa/(2 log q)) L_p(u)^2 + drift L_p(u) )
               + sum_j s_j u / (u - u*_j),
    L_p(u) = log|u| + i (arg u - center_p  wrapped).

Consecutive differences U_{p+1} - U_p contract the integration rays and
split into explicit contour pieces:

  * both sectors on one branch, a pole u* inside the wedge ("fast"):
        diff = I1 - I2 + I3,
    outer rays from radius rho plus the inner arc; every piece -- and,
    by the residue theorem, the total  (k2/lq) 2 pi i s_j / Theta(u*/T)
    -- decays in |T| at the fast rate k2;

  * branch change across the wedge ("slow"):
        diff = I1 - I2 + I4 + I5 + I6,
    two outer rays, two arcs to the wedge mid-direction, and a mid-ray
    segment I6 carrying the branch discrepancy.  The discrepancy is flat
    of order kappa, and the Laplace saddle turns that into decay at the
    slow rate  k1 = kappa k2 / (kappa + k2):   -k2 + k2^2/(kappa+k2) = -k1.

Fitting log ||diff|| = a log^2|T| + b log|T| + c and reading the rate as
-2 a log q recovers k2 on fast overlaps and k1 on slow ones.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .asymptotics import (GevreyFit, RemainderRow, RemainderTable,
                          fit_zero_gevrey_relative, restrict_and_refit)
from .cocycle import classify_levels
from functools import lru_cache

from .fourier import DecayProfile, complex_quad, inverse_fourier
from .frames import GevreyScale, QFrame, make_qframe
from .geometry import GoodCovering, Sector, make_cyclic_covering, wrap_angle
from .theta import inv_theta as _inv_theta_spec, spec_for_annulus

LOG_TINY = -690.0  # below exp() underflow; integrand values are cut here


@lru_cache(maxsize=64)
def _theta_spec_bucket(q: float, k: float, bucket: int):
    reach = math.exp(8.0 * bucket)
    return spec_for_annulus(q, k, 1.0 / reach, reach, tail_tol=1e-16)


def _inv_theta(q: float, k: float, z: complex) -> complex:
    """1/Theta at one point, with a truncation order cached per log-radius
    bucket so deep-cascade arguments stay certified."""
    la = abs(math.log(max(abs(z), 1e-300)))
    bucket = max(1, math.ceil(la / 8.0))
    return complex(_inv_theta_spec(_theta_spec_bucket(q, k, bucket), z))


@dataclass(frozen=True)
class PoleSpec:
    """Simple pole of the kernel: term strength * u / (u - location)."""

    location: complex
    strength: complex

    def to_dict(self) -> dict:
        return {"location": [self.location.real, self.location.imag],
                "strength": [self.strength.real, self.strength.imag]}

    @classmethod
    def from_dict(cls, d: dict) -> "PoleSpec":
        return cls(location=complex(*d["location"]),
                   strength=complex(*d["strength"]))


@dataclass(frozen=True)
class ModelScenario:
    """Geometry and kernel data for the worked solution family.

    directions[p] is the Laplace ray of sector p (radians, strictly
    increasing over one turn); branch_centers[p] the center of the
    logarithm branch used by that sector's kernel (sharing a center
    means sharing a branch); u_half_widths[p] the angular half-width of
    the kernel's analyticity sector around directions[p], which decides
    fast/slow overlaps.  rho is the contraction radius of the pieces and
    must stay below every pole modulus.
    """

    frame: QFrame
    covering: GoodCovering
    directions: tuple
    branch_centers: tuple
    u_half_widths: tuple
    rho: float
    kernel_amp: complex
    drift: float
    poles: tuple
    mu: float
    beta: float
    t_bisector: float = -math.pi / 4

    def __post_init__(self) -> None:
        n = self.covering.n
        if not (len(self.directions) == len(self.branch_centers)
                == len(self.u_half_widths) == n):
            raise ValueError("per-sector data must match the covering size")
        for pole in self.poles:
            if abs(pole.location) <= self.rho:
                raise ValueError("poles must lie outside the contraction "
                                 f"radius rho={self.rho}")
        if not 0 < self.rho:
            raise ValueError("rho must be positive")

    @property
    def n(self) -> int:
        return self.covering.n

    def u_sectors(self) -> tuple:
        return tuple(Sector(bisector=self.directions[p],
                            half_opening=self.u_half_widths[p])
                     for p in range(self.n))

    def levels(self) -> tuple:
        """2 (fast) where neighbouring kernel sectors intersect, else 1."""
        return classify_levels(self.covering, self.u_sectors())

    def wedge(self, p: int) -> tuple:
        """Forward wedge (d_p, d_{p+1}) of overlap p, unwrapped."""
        lo = self.directions[p]
        hi = self.directions[(p + 1) % self.n]
        while hi <= lo:
            hi += 2.0 * math.pi
        return lo, hi

    def mid_direction(self, p: int) -> float:
        lo, hi = self.wedge(p)
        return 0.5 * (lo + hi)

    def wedge_poles(self, p: int) -> tuple:
        lo, hi = self.wedge(p)
        found = []
        for pole in self.poles:
            a = math.atan2(pole.location.imag, pole.location.real)
            while a <= lo:
                a += 2.0 * math.pi
            if a < hi:
                found.append(pole)
        return tuple(found)

    def probe_T(self, p: int, j: int) -> complex:
        """Probe point |T| = 2^-j along the overlap mid-direction (its
        theta-zero spiral then points opposite the wedge)."""
        return 2.0 ** (-j) * complex(math.cos(self.mid_direction(p)),
                                     math.sin(self.mid_direction(p)))

    def to_dict(self) -> dict:
        return {"frame": self.frame.to_dict(),
                "covering": self.covering.to_dict(),
                "directions": list(self.directions),
                "branch_centers": list(self.branch_centers),
                "u_half_widths": list(self.u_half_widths),
                "rho": self.rho,
                "kernel_amp": [self.kernel_amp.real, self.kernel_amp.imag],
                "drift": self.drift,
                "poles": [pl.to_dict() for pl in self.poles],
                "mu": self.mu, "beta": self.beta,
                "t_bisector": self.t_bisector}

    @classmethod
    def from_dict(cls, d: dict) -> "ModelScenario":
        return cls(frame=QFrame.from_dict(d["frame"]),
                   covering=GoodCovering.from_dict(d["covering"]),
                   directions=tuple(d["directions"]),
                   branch_centers=tuple(d["branch_centers"]),
                   u_half_widths=tuple(d["u_half_widths"]),
                   rho=d["rho"], kernel_amp=complex(*d["kernel_amp"]),
                   drift=d["drift"],
                   poles=tuple(PoleSpec.from_dict(x) for x in d["poles"]),
                   mu=d["mu"], beta=d["beta"],
                   t_bisector=d.get("t_bisector", -math.pi / 4))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, s: str) -> "ModelScenario":
        return cls.from_dict(json.loads(s))


def default_scenario() -> ModelScenario:
    """Four sectors; one shared branch over the first three directions
    (two fast overlaps through two poles), a second branch on the last
    (two slow overlaps through the branch discrepancy)."""
    frame = make_qframe(q=2.0, k1=1.0, k2=2.0, epsilon0=0.4, rT=0.9)
    cov = make_cyclic_covering(4, radius=0.4,
                               half_opening=math.radians(60.0),
                               phase=math.radians(45.0))
    d = tuple(math.radians(90.0 * p) for p in range(4))
    center_a = math.radians(90.0)
    center_b = math.radians(270.0)
    poles = (PoleSpec(location=1.2 * np.exp(1j * math.radians(45.0)),
                      strength=0.5 + 0.0j),
             PoleSpec(location=1.2 * np.exp(1j * math.radians(135.0)),
                      strength=0.3 - 0.2j))
    return ModelScenario(frame=frame, covering=cov, directions=d,
                         branch_centers=(center_a, center_a, center_a,
                                         center_b),
                         u_half_widths=(math.radians(50.0),) * 3
                                       + (math.radians(30.0),),
                         rho=0.8, kernel_amp=1.0 + 0.0j, drift=1.0,
                         poles=poles, mu=4.0, beta=1.0)


# --- kernel ------------------------------------------------------------------

def branch_log(u, center: float):
    """log|u| + i (arg u - center wrapped): the branch cut sits opposite
    the center direction."""
    u = np.asarray(u, dtype=complex)
    return np.log(np.maximum(np.abs(u), 1e-300)) \
        + 1j * wrap_angle(np.angle(u) - center)


def gaussian_branch_part(scn: ModelScenario, p: int, u):
    fr = scn.frame
    L = branch_log(u, scn.branch_centers[p % scn.n])
    expo = (-(fr.kappa / (2.0 * math.log(fr.q))) * L * L + scn.drift * L)
    expo = np.where(expo.real < LOG_TINY, LOG_TINY + 1j * expo.imag, expo)
    return scn.kernel_amp * np.exp(expo)


def pole_part(scn: ModelScenario, u):
    u = np.asarray(u, dtype=complex)
    acc = np.zeros_like(u)
    for pole in scn.poles:
        acc = acc + pole.strength * u / (u - pole.location)
    return acc


def kernel_shape(scn: ModelScenario, p: int, u):
    """shape_p(u): branch-dependent log-Gaussian plus shared pole terms."""
    return gaussian_branch_part(scn, p, u) + pole_part(scn, u)


def kernel_jump_shape(scn: ModelScenario, p: int, u):
    """shape_{p+1} - shape_p: the pole terms cancel exactly, leaving the
    pure branch discrepancy (zero when the branch centers agree)."""
    if scn.branch_centers[(p + 1) % scn.n] == scn.branch_centers[p % scn.n]:
        return np.zeros_like(np.asarray(u, dtype=complex))
    return gaussian_branch_part(scn, p + 1, u) - gaussian_branch_part(scn, p, u)


def m_profile(scn: ModelScenario, m):
    am = np.abs(np.asarray(m, dtype=float))
    return (1.0 + am) ** (-scn.mu) * np.exp(-scn.beta * am)


def kernel(scn: ModelScenario, p: int, u, m):
    return kernel_shape(scn, p, u) * m_profile(scn, m)


# --- quadrature pieces --------------------------------------------------------

def _prefactor(scn: ModelScenario) -> float:
    return scn.frame.k2 / math.log(scn.frame.q)


def _budget(tol: float) -> float:
    return math.log(1.0 / tol) + 12.0


def _laplace_ray(scn: ModelScenario, branch: int, direction: float, T: complex,
                 s_lo: float, s_hi: float, tol: float):
    """(k2/lq) int shape_branch(e^{s+id}) invTheta(e^{s+id}/T) ds over the
    log-radius window [s_lo, s_hi]."""
    fr = scn.frame
    eid = complex(math.cos(direction), math.sin(direction))

    def f(s):
        u = math.exp(s) * eid
        return (complex(np.asarray(kernel_shape(scn, branch, u)).reshape(()))
                * _inv_theta(fr.q, fr.k2, u / T))

    val, err, neval = complex_quad(f, s_lo, s_hi, epsabs=tol * 1e-250,
                                   epsrel=tol, limit=400)
    return _prefactor(scn) * val, err, neval


def outer_ray_piece(scn: ModelScenario, branch: int, direction: float,
                    T: complex, tol: float = 1e-11) -> complex:
    """Ray piece over [rho, infinity): the integrand peaks at the inner
    endpoint and dies off at the fast-level Gaussian speed."""
    fr = scn.frame
    lq = math.log(fr.q)
    s0 = math.log(scn.rho)
    L = math.log(abs(T))
    gap = max(s0 - L, 1.0)
    ds = _budget(tol) * lq / (fr.k2 * gap) + 2.0
    val, _, _ = _laplace_ray(scn, branch, direction, T, s0, s0 + ds, tol)
    return val


def arc_piece(scn: ModelScenario, branch: int, theta_lo: float,
              theta_hi: float, T: complex, radius: float | None = None,
              tol: float = 1e-11) -> complex:
    """(k2/lq) i int_{theta_lo}^{theta_hi} shape(r e^{i th})
    invTheta(r e^{i th}/T) d th at fixed radius (default rho)."""
    fr = scn.frame
    r = scn.rho if radius is None else radius

    def f(th):
        u = r * complex(math.cos(th), math.sin(th))
        return (complex(np.asarray(kernel_shape(scn, branch, u)).reshape(()))
                * _inv_theta(fr.q, fr.k2, u / T))

    val, _, _ = complex_quad(f, theta_lo, theta_hi, epsabs=tol * 1e-250,
                             epsrel=tol, limit=200)
    return _prefactor(scn) * 1j * val


def mid_segment_piece(scn: ModelScenario, p: int, T: complex,
                      tol: float = 1e-11) -> complex:
    """(k2/lq) int_0^rho [shape_{p+1} - shape_p](u) invTheta(u/T) du/u
    along the wedge mid-direction: the slow-rate carrier.

    The integrand's log-radius exponent is a sum of two Gaussians whose
    saddle realizes  kappa k2/(kappa + k2) = k1;  the window is centred
    there.
    """
    fr = scn.frame
    lq = math.log(fr.q)
    kap, k2 = fr.kappa, fr.k2
    L = math.log(abs(T))
    d = scn.mid_direction(p)
    eid = complex(math.cos(d), math.sin(d))

    s_star = (k2 * L + lq * (scn.drift - 0.5)) / (kap + k2)
    half = math.sqrt(2.0 * lq * _budget(tol) / (kap + k2)) + 2.0
    s_lo = s_star - half
    s_hi = min(math.log(scn.rho), s_star + half)

    def f(s):
        u = math.exp(s) * eid
        return (complex(np.asarray(kernel_jump_shape(scn, p, u)).reshape(()))
                * _inv_theta(fr.q, fr.k2, u / T))

    val, _, _ = complex_quad(f, s_lo, s_hi, epsabs=tol * 1e-250,
                             epsrel=tol, limit=400)
    return _prefactor(scn) * val


def residue_closed_form(scn: ModelScenario, p: int, T: complex) -> complex:
    """Exact value of a fast-overlap difference via residues.

    The counterclockwise wedge boundary runs up the ray d_p and down the
    ray d_{p+1}, so the forward difference of the two ray transforms is
    minus 2 pi i (k2/lq) times the residues of shape/(Theta(./T) u) at
    the wedge poles."""
    fr = scn.frame
    acc = 0.0 + 0.0j
    for pole in scn.wedge_poles(p):
        acc += pole.strength * _inv_theta(fr.q, fr.k2, pole.location / T)
    return -_prefactor(scn) * 2j * math.pi * acc


@dataclass
class DiffPieces:
    """One consecutive difference, split into its contour pieces."""

    p: int
    T: complex
    level: int
    pieces: dict
    oracle: complex | None = None   # residue closed form on fast overlaps

    @property
    def total(self) -> complex:
        return sum(self.pieces.values())

    def to_dict(self) -> dict:
        return {"p": self.p, "T": [self.T.real, self.T.imag],
                "level": self.level,
                "pieces": {k: [v.real, v.imag] for k, v in self.pieces.items()},
                "total": [self.total.real, self.total.imag],
                "oracle": None if self.oracle is None
                else [self.oracle.real, self.oracle.imag]}


def consecutive_difference(scn: ModelScenario, p: int, T: complex,
                           route: str = "decomposed", tol: float = 1e-11):
    """U_{p+1}(T) - U_p(T) on overlap p.

    route="decomposed": contour pieces (cancellation-free, usable deep
    into the cascade).  route="direct": subtract two full-ray transforms
    (loses one digit per fast-level Gaussian factor, shallow use only).
    route="both": dict with the two values and the pieces.
    """
    if route not in ("decomposed", "direct", "both"):
        raise ValueError("route must be decomposed|direct|both")
    level = scn.levels()[p]
    out = {}
    if route in ("decomposed", "both"):
        lo, hi = scn.wedge(p)
        pieces = {
            "outer_plus": outer_ray_piece(scn, p + 1, hi, T, tol),
            "outer_minus": -outer_ray_piece(scn, p, lo, T, tol),
        }
        if level == 2:
            pieces["inner_arc"] = arc_piece(scn, p, lo, hi, T, tol=tol)
            oracle = residue_closed_form(scn, p, T)
        else:
            mid = scn.mid_direction(p)
            pieces["arc_lo"] = arc_piece(scn, p, lo, mid, T, tol=tol)
            pieces["arc_hi"] = arc_piece(scn, p + 1, mid, hi, T, tol=tol)
            pieces["mid_segment"] = mid_segment_piece(scn, p, T, tol)
            oracle = None
        out["decomposed"] = DiffPieces(p=p, T=complex(T), level=level,
                                       pieces=pieces, oracle=oracle)
    if route in ("direct", "both"):
        out["direct"] = (laplace_transform_shape(scn, p + 1, T, tol)
                         - laplace_transform_shape(scn, p, T, tol))
    if route == "decomposed":
        return out["decomposed"]
    if route == "direct":
        return out["direct"]
    return out


def laplace_transform_shape(scn: ModelScenario, p: int, T: complex,
                            tol: float = 1e-12) -> complex:
    """U_p(T): full-ray fast-level transform of the sector kernel."""
    fr = scn.frame
    lq = math.log(fr.q)
    L = math.log(abs(T))
    half = math.sqrt(2.0 * lq * _budget(tol) / fr.k2) + 2.0
    s_lo = L - half
    s_hi = max(L + half, math.log(scn.rho) + half)
    val, _, _ = _laplace_ray(scn, p % scn.n, scn.directions[p % scn.n], T,
                             s_lo, s_hi, tol)
    return val


def assemble_solution(scn: ModelScenario, p: int, t: complex, z: complex,
                      eps: complex, method: str = "factored",
                      tol: float = 1e-10) -> complex:
    """u_p(t, z, eps): inverse Fourier transform in m of the directional
    transform of kernel(u, m) at T = eps t.

    method="factored" exploits that the kernel separates into
    shape(u) * profile(m); method="nested" re-evaluates the u-integral
    inside the m-quadrature without using separability (slow; serves as
    a cross-check of the nested path).
    """
    T = eps * t
    prof = DecayProfile(C=1.0, mu=scn.mu, beta=scn.beta)
    if method == "factored":
        U = laplace_transform_shape(scn, p, T, tol)
        base = inverse_fourier(lambda m: m_profile(scn, m), z, prof, tol=tol)
        return U * base.value
    if method != "nested":
        raise ValueError("method must be factored|nested")
    U0 = laplace_transform_shape(scn, p, T, tol)
    prof_sym = DecayProfile(C=max(abs(U0), 1e-300) * 4.0, mu=scn.mu,
                            beta=scn.beta)

    def symbol(m):
        m_arr = np.atleast_1d(np.asarray(m, dtype=float))
        vals = np.empty(m_arr.shape, dtype=complex)
        for i, mi in enumerate(m_arr):
            fr = scn.frame
            lq = math.log(fr.q)
            L = math.log(abs(T))
            half = math.sqrt(2.0 * lq * _budget(tol) / fr.k2) + 2.0
            eid = complex(math.cos(scn.directions[p % scn.n]),
                          math.sin(scn.directions[p % scn.n]))

            def f(s, mi=mi):
                u = math.exp(s) * eid
                return (complex(np.asarray(kernel(scn, p, u, mi)).reshape(()))
                        * _inv_theta(fr.q, fr.k2, u / T))

            val, _, _ = complex_quad(f, L - half,
                                     max(L + half, math.log(scn.rho) + half),
                                     epsabs=tol * 1e-100, epsrel=tol,
                                     limit=200)
            vals[i] = _prefactor(scn) * val
        return vals if np.ndim(m) else complex(vals[0])

    return inverse_fourier(symbol, z, prof_sym, tol=tol).value


# --- cascades, tables, rate fits ----------------------------------------------

@dataclass
class DiffRow:
    j: int
    absT: float
    norm: float
    route: str

    def to_dict(self) -> dict:
        return {"j": self.j, "absT": self.absT, "norm": self.norm,
                "route": self.route}


@dataclass
class DiffTable:
    p: int
    level: int
    rows: list

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["j", "abs T", "norm", "route"])
            for r in self.rows:
                w.writerow([r.j, repr(r.absT), repr(r.norm), r.route])

    @classmethod
    def read_csv(cls, path: str, p: int = -1, level: int = 0) -> "DiffTable":
        rows = []
        with open(path, newline="") as fh:
            rd = csv.reader(fh)
            next(rd)
            for line in rd:
                rows.append(DiffRow(j=int(line[0]), absT=float(line[1]),
                                    norm=float(line[2]), route=line[3]))
        return cls(p=p, level=level, rows=rows)


def difference_cascade(scn: ModelScenario, p: int, js: Sequence[int],
                       route: str = "decomposed", tol: float = 1e-11
                       ) -> DiffTable:
    """||U_{p+1} - U_p|| along |T| = 2^-j on the overlap mid-direction."""
    level = scn.levels()[p]
    rows = []
    for j in js:
        T = scn.probe_T(p, j)
        if route == "both":
            both = consecutive_difference(scn, p, T, "both", tol)
            rows.append(DiffRow(j=j, absT=abs(T),
                                norm=abs(both["decomposed"].total),
                                route="decomposed"))
            rows.append(DiffRow(j=j, absT=abs(T), norm=abs(both["direct"]),
                                route="direct"))
        else:
            d = consecutive_difference(scn, p, T, route, tol)
            norm = abs(d.total) if isinstance(d, DiffPieces) else abs(d)
            rows.append(DiffRow(j=j, absT=abs(T), norm=norm, route=route))
    return DiffTable(p=p, level=level, rows=rows)


@dataclass
class RateFit:
    """Quadratic-in-log fit of a decay cascade.

    log norm = a log^2|T| + b log|T| + c;  rate = -2 a log q  is the
    Gaussian level of the decay.
    """

    a: float
    b: float
    c: float
    rate: float
    residual_rms: float
    n_rows: int

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "rate": self.rate,
                "residual_rms": self.residual_rms, "n_rows": self.n_rows}


def fit_rate(table: DiffTable, q: float, route: str | None = None) -> RateFit:
    rows = [r for r in table.rows if route is None or r.route == route]
    if len(rows) < 3:
        raise ValueError("need at least 3 cascade rows to fit a rate")
    x = np.array([math.log(r.absT) for r in rows])
    y = np.array([math.log(max(r.norm, 1e-300)) for r in rows])
    X = np.column_stack([x * x, x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = X @ coef - y
    return RateFit(a=float(coef[0]), b=float(coef[1]), c=float(coef[2]),
                   rate=float(-2.0 * coef[0] * math.log(q)),
                   residual_rms=float(np.sqrt(np.mean(resid ** 2))),
                   n_rows=len(rows))


@dataclass
class DichotomyReport:
    """Fitted decay level per overlap against the geometric prediction."""

    entries: list   # (p, level, target_rate, fitted_rate, rel_err)
    tolerance: float

    @property
    def ok(self) -> bool:
        return all(e[4] <= self.tolerance for e in self.entries)

    def to_dict(self) -> dict:
        return {"tolerance": self.tolerance, "ok": self.ok,
                "entries": [{"p": p, "level": lv, "target": tg,
                             "fitted": ft, "rel_err": re}
                            for p, lv, tg, ft, re in self.entries]}


def verify_rate_dichotomy(scn: ModelScenario, js: Sequence[int] = range(3, 13),
                          tol: float = 1e-11, rel_tol: float = 0.15
                          ) -> DichotomyReport:
    """Fit every overlap's cascade and compare with k2 (fast) / k1 (slow)."""
    fr = scn.frame
    entries = []
    for p in range(scn.n):
        table = difference_cascade(scn, p, js, "decomposed", tol)
        fit = fit_rate(table, fr.q)
        target = fr.k2 if table.level == 2 else fr.k1
        rel = abs(fit.rate - target) / target
        entries.append((p, table.level, float(target), fit.rate, float(rel)))
    return DichotomyReport(entries=entries, tolerance=rel_tol)


# --- end-to-end verification ---------------------------------------------------

def difference_remainder_table(scn: ModelScenario, p: int, level_k: float,
                               N_range: Sequence[int], eps_mods=(0.25, 0.35),
                               t_frac: float = 0.7, tol: float = 1e-11
                               ) -> RemainderTable:
    """Shrinking-disc rows for the overlap difference: for each order N
    place |t| = t_frac q^{-(N+1)/(2 level_k)} (inside the level's disc
    ladder) and record ||U_{p+1} - U_p|| at T = eps t.

    The difference plays its own remainder: the sectorial expansions
    agree through every order, so the gap must obey the level's
    (N, eps)-ladder bound.
    """
    fr = scn.frame
    table = RemainderTable()
    mid = scn.mid_direction(p)
    for N in N_range:
        t_abs = t_frac * fr.q ** (-(N + 1) / (2.0 * level_k))
        for em in eps_mods:
            T = em * t_abs * complex(math.cos(mid), math.sin(mid))
            d = consecutive_difference(scn, p, T, "decomposed", tol)
            table.add(N, em, abs(d.total), t_abs)
    return table


@dataclass
class TheoremReport:
    """End-to-end two-level verification on one scenario."""

    covering_ok: bool
    dichotomy: DichotomyReport
    fast_fit: GevreyFit
    slow_fit: GevreyFit
    corollary_fit: GevreyFit
    corollary_rows_kept: int

    @property
    def ok(self) -> bool:
        return (self.covering_ok and self.dichotomy.ok
                and self.fast_fit.certified and self.slow_fit.certified
                and self.corollary_fit.certified)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "covering_ok": self.covering_ok,
                "dichotomy": self.dichotomy.to_dict(),
                "fast_fit": self.fast_fit.to_dict(),
                "slow_fit": self.slow_fit.to_dict(),
                "corollary_fit": self.corollary_fit.to_dict(),
                "corollary_rows_kept": self.corollary_rows_kept}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def verify_two_level_theorem(scn: ModelScenario, js: Sequence[int] = range(3, 11),
                             N_range: Sequence[int] = range(0, 7),
                             tol: float = 1e-11) -> TheoremReport:
    """Covering sanity, rate dichotomy, certified ladder fits at both
    levels, and the restriction corollary (a fast-level certificate,
    restricted to the slow level's smaller discs, re-certifies there)."""
    from .geometry import validate_good_covering
    cov_rep = validate_good_covering(scn.covering)

    dich = verify_rate_dichotomy(scn, js, tol)

    fr = scn.frame
    levels = scn.levels()
    p_fast = levels.index(2)
    p_slow = levels.index(1)

    fast_table = difference_remainder_table(scn, p_fast, fr.k2, N_range,
                                            tol=tol)
    slow_table = difference_remainder_table(scn, p_slow, fr.k1, N_range,
                                            tol=tol)
    fast_fit = fit_zero_gevrey_relative(
        fast_table, GevreyScale(q=fr.q, k=fr.k2, C=1.0, A=1.0, level=2))
    slow_fit = fit_zero_gevrey_relative(
        slow_table, GevreyScale(q=fr.q, k=fr.k1, C=1.0, A=1.0, level=1))

    _, corollary_fit, kept = restrict_and_refit(fast_table, fr.q,
                                                k_from=fr.k2, k_to=fr.k1)

    return TheoremReport(covering_ok=cov_rep.ok, dichotomy=dich,
                         fast_fit=fast_fit, slow_fit=slow_fit,
                         corollary_fit=corollary_fit,
                         corollary_rows_kept=len(kept.rows))
