"""q-Laplace transform of order k along a direction, with certified domains.

For f analytic near 0 and along the ray L_d = R_+ e^{id} with the
log-Gaussian growth certificate

    |f(u)| <= K exp( k log^2|u| / (2 log q) + alpha log|u| ),  |u| >= rho,
    |f(u)| <= K,                                               |u| <= rho,

the transform

    (L_{q;1/k}^d f)(T) = (k / log q) * integral_{L_d} f(u) / Theta_k(u/T) du/u

converges and is holomorphic on the spiral-clear domain R_{d,dlt}
intersected with |T| < r1 = q^{(1/2 - alpha)/k} / 2.  Substituting
u = e^{s + id} turns the integrand into a function with log-Gaussian
decay on both ends of the s-line (the theta kernel dominates), so an
adaptive quadrature on a certificate-derived window suffices.

Monomials u^n map to c_{n,k} T^n; the constants c_{n,k} are measured by
quadrature and cached, never hard-coded, and satisfy the ratio law
c_{n,k}/c_{n-1,k} = q^{(n-1)/k} forced by the theta q-difference
equation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .fourier import complex_quad
from .geometry import qspiral_infimum, qspiral_membership
from .theta import ThetaSpec, inv_theta, spec_for_annulus


@dataclass(frozen=True)
class GrowthCertificate:
    """Log-Gaussian growth data along a ray: level k, log-slope alpha,
    amplitude K, disc radius rho."""

    K: float
    alpha: float
    k: float
    rho: float = 1.0

    def __post_init__(self) -> None:
        if not (self.K > 0 and self.k >= 0 and self.rho > 0):
            raise ValueError("need K > 0, k >= 0, rho > 0")

    def log_bound(self, r: float, q: float) -> float:
        """log of the certified envelope at |u| = r."""
        if r <= self.rho:
            return math.log(self.K)
        L = math.log(r)
        return math.log(self.K) + 0.5 * self.k * L * L / math.log(q) + self.alpha * L

    def certify(self, f: Callable[[complex], complex], d: float, q: float,
                r_lo: float = 1e-6, r_hi: float = 1e3, n: int = 200) -> tuple[bool, float]:
        """Check |f| against the envelope on a log grid along the ray.

        Returns (ok, worst log-excess); worst <= 0 means certified."""
        rs = np.exp(np.linspace(math.log(r_lo), math.log(r_hi), n))
        worst = -math.inf
        for r in rs:
            v = abs(f(r * cmath.exp(1j * d)))
            if v == 0.0:
                continue
            worst = max(worst, math.log(v) - self.log_bound(float(r), q))
        return worst <= 1e-9, worst


def domain_radius(q: float, k: float, alpha: float) -> float:
    """r1 = q^{(1/2 - alpha)/k} / 2, the certified disc radius of the
    transform domain."""
    if not (q > 1 and k > 0):
        raise ValueError("need q > 1 and k > 0")
    return q ** ((0.5 - alpha) / k) / 2.0


@dataclass(frozen=True)
class QLaplaceSpec:
    """Direction, base, order and guard parameters for the transform."""

    q: float
    k: float
    direction: float
    dlt_floor: float = 0.1
    reroute: float = 1e-3
    tol: float = 1e-12

    def __post_init__(self) -> None:
        if not (self.q > 1 and self.k > 0):
            raise ValueError("need q > 1 and k > 0")
        if not 0 < self.dlt_floor < 1:
            raise ValueError("dlt_floor must be in (0,1)")


@dataclass
class QLaplaceResult:
    value: complex
    error_estimate: float
    nodes_used: int
    direction_used: float
    window: tuple[float, float]


def _integration_window(spec: QLaplaceSpec, cert: GrowthCertificate,
                        absT: float) -> tuple[float, float]:
    """s-window outside which the integrand envelope is below tol * peak.

    The envelope in s = log|u| is the certified growth of f minus the
    theta kernel's lower bound:

        g(s) = log_bound(e^s) - (k/2)(s-L)^2/log q - (s-L)/2,

    with L = log|T|.  The window ends where g has dropped `budget` below
    its peak on each side; if g keeps rising to the right the growth
    certificate is too strong for the transform order and we refuse.
    """
    lq = math.log(spec.q)
    L = math.log(absT)
    budget = math.log(1.0 / spec.tol) + 10.0

    def g(s: float) -> float:
        return cert.log_bound(math.exp(s), spec.q) \
            - 0.5 * spec.k * (s - L) ** 2 / lq - 0.5 * (s - L)

    scan_hi = max(L, math.log(cert.rho)) + 2.0
    scan = np.linspace(L - 2.0, scan_hi, 64)
    g_peak = max(g(float(s)) for s in scan)

    step = 0.25
    s_hi = scan_hi
    rises = 0
    while g(s_hi) > g_peak - budget:
        if g(s_hi + step) > g(s_hi):
            rises += 1
            if rises > 400:
                raise ValueError(
                    "integrand envelope does not decay along the ray: growth "
                    f"certificate (k={cert.k}, alpha={cert.alpha}) too strong "
                    f"for transform order k={spec.k} at |T|={absT:.3g}")
        s_hi += step
        if s_hi - scan_hi > 200.0:
            raise ValueError("q-Laplace window exceeds 200 log units; "
                             "certificate incompatible with |T|")
    s_lo = L - 2.0
    while g(s_lo) > g_peak - budget:
        s_lo -= step
    return s_lo - 0.5, s_hi + 0.5


def qlaplace(spec: QLaplaceSpec, f: Callable[[complex], complex], T: complex,
             cert: GrowthCertificate, enforce_domain: bool = True) -> QLaplaceResult:
    """Evaluate the transform at T by adaptive quadrature on the log-ray.

    T must lie in the spiral-clear domain for the floor threshold; if
    the ray grazes the theta zero spiral the direction is rerouted by at
    most `reroute` radians, otherwise the point is rejected.  With
    enforce_domain, |T| must also be below the certified radius r1.
    """
    T = complex(T)
    if T == 0:
        raise ValueError("T must be nonzero")
    if enforce_domain:
        r1 = domain_radius(spec.q, spec.k, cert.alpha)
        if abs(T) >= r1:
            raise ValueError(f"|T|={abs(T):.6g} outside certified radius r1={r1:.6g}")
    d = spec.direction
    if not qspiral_membership(d, spec.dlt_floor, T):
        for dd in (spec.reroute, -spec.reroute):
            if qspiral_membership(d + dd, spec.dlt_floor, T):
                d = d + dd
                break
        else:
            raise ValueError(
                f"ray direction {spec.direction} grazes the theta zero spiral at "
                f"T={T} (clearance {qspiral_infimum(spec.direction, T):.3g} <= "
                f"{spec.dlt_floor}) and rerouting by {spec.reroute} rad does not fix it")

    s_lo, s_hi = _integration_window(spec, cert, abs(T))
    r_hi = math.exp(s_hi - math.log(abs(T))) + 10.0
    tspec = spec_for_annulus(spec.q, spec.k, 1.0 / r_hi, r_hi, tail_tol=1e-16)
    eid = cmath.exp(1j * d)

    def integrand(s: float) -> complex:
        u = cmath.exp(s) * eid
        return complex(f(u)) * complex(inv_theta(tspec, u / T))

    val, err, n = complex_quad(integrand, s_lo, s_hi,
                               epsabs=spec.tol, epsrel=spec.tol * 10)
    scale = spec.k / math.log(spec.q)
    return QLaplaceResult(value=scale * val, error_estimate=scale * err,
                          nodes_used=n, direction_used=d, window=(s_lo, s_hi))


# --- monomial images --------------------------------------------------------

@lru_cache(maxsize=None)
def monomial_image_constant(q: float, k: float, n: int, tol: float = 1e-12,
                            direction: float = 0.0, absT: float = 0.25) -> complex:
    """Measured c_{n,k} with L(u^n)(T) = c_{n,k} T^n, from quadrature at a
    reference point on the ray.  Cached per (q, k, n, tol)."""
    spec = QLaplaceSpec(q=q, k=k, direction=direction, tol=tol)
    cert = GrowthCertificate(K=1.0, alpha=float(n), k=0.0, rho=1.0)
    T = absT * cmath.exp(1j * direction)
    res = qlaplace(spec, lambda u: u ** n, T, cert, enforce_domain=False)
    return res.value / T ** n


def monomial_ratio_law(q: float, k: float, n: int) -> float:
    """q^{(n-1)/k}: the exact ratio c_{n,k}/c_{n-1,k} forced by the theta
    q-difference equation."""
    return q ** ((n - 1) / k)


# --- kernel link ------------------------------------------------------------

@dataclass(frozen=True)
class LinkProbe:
    tau: complex
    m: float
    eps: complex


@dataclass
class LinkReport:
    ok: bool
    max_rel_err: float
    per_probe: list


def verify_laplace_link(q: float, kappa: float, direction: float,
                        w_inner: Callable[[complex, float, complex], complex],
                        w_outer: Callable[[complex, float, complex], complex],
                        probes: list[LinkProbe], cert: GrowthCertificate,
                        tol: float = 1e-8) -> LinkReport:
    """Check w_outer(tau, m, eps) = (L_{q;1/kappa}^d w_inner(., m, eps))(tau)
    at finitely many probes.

    Relative error is measured against max(|lhs|, |rhs|, 1e-30)."""
    spec = QLaplaceSpec(q=q, k=kappa, direction=direction, tol=1e-13)
    rows = []
    worst = 0.0
    for pr in probes:
        lhs = qlaplace(spec, lambda u: w_inner(u, pr.m, pr.eps), pr.tau, cert,
                       enforce_domain=False).value
        rhs = complex(w_outer(pr.tau, pr.m, pr.eps))
        rel = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-30)
        worst = max(worst, rel)
        rows.append({"tau": repr(pr.tau), "m": pr.m, "eps": repr(pr.eps),
                     "rel_err": rel})
    return LinkReport(ok=worst <= tol, max_rel_err=worst, per_probe=rows)
