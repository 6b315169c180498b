"""Order-k Jacobi-type theta function and its certified lower envelope.

The function evaluated here is the bilateral series

    Theta_k(z) = sum_{p in Z} q^{-p(p-1)/(2k)} z^p,   z != 0,

truncated symmetrically to |p| <= P.  It solves the q-difference
equation

    Theta_k(q^{m/k} z) = q^{m(m+1)/(2k)} z^m Theta_k(z),   m in Z,

has an essential singularity at 0, and vanishes exactly on the spiral
z = -q^{m/k}, m in Z.  Away from that spiral it admits the lower bound

    |Theta_k(z)| >= C * dlt * exp((k/2) log^2|z| / log q) * |z|^{1/2}

on { z : inf_m |1 + z q^{m/k}| > dlt }, where C = C(q,k) is calibrated
numerically (grid minimum of the ratio, deflated by a safety factor)
and persisted with the spec; it is never hard-coded.

All evaluations run in shifted-exponent form so that the huge dynamic
range of the series (the dominant term is ~ exp((k/2) log^2|z|/log q))
never overflows intermediate arithmetic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np


@dataclass(frozen=True)
class ThetaSpec:
    """Truncation contract for the theta series.

    P is the symmetric truncation order (terms p = -P..P), tail_tol the
    relative tail budget the truncation was chosen for on the annulus
    the spec was built for.  Cqk is the calibrated lower-bound constant
    (None until calibrate() has run).
    """

    q: float
    k: float
    P: int
    tail_tol: float = 1e-14
    Cqk: float | None = None

    def __post_init__(self) -> None:
        if not self.q > 1.0:
            raise ValueError(f"q must be > 1, got {self.q}")
        if not self.k > 0.0:
            raise ValueError(f"k must be > 0, got {self.k}")
        if self.P < 1:
            raise ValueError(f"P must be >= 1, got {self.P}")
        if not 0 < self.tail_tol < 1:
            raise ValueError(f"tail_tol must be in (0,1), got {self.tail_tol}")

    def to_dict(self) -> dict:
        return {"q": self.q, "k": self.k, "P": self.P,
                "tail_tol": self.tail_tol, "Cqk": self.Cqk}

    @classmethod
    def from_dict(cls, d: dict) -> "ThetaSpec":
        return cls(q=d["q"], k=d["k"], P=d["P"],
                   tail_tol=d.get("tail_tol", 1e-14), Cqk=d.get("Cqk"))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, s: str) -> "ThetaSpec":
        return cls.from_dict(json.loads(s))


def truncation_order(q: float, k: float, r_min: float, r_max: float,
                     tail_tol: float = 1e-14) -> int:
    """Symmetric truncation order P adequate on the annulus r_min <= |z| <= r_max.

    The term magnitudes q^{-p(p-1)/(2k)} |z|^p peak near
    p* = k log|z|/log q + 1/2 and then decay super-geometrically; P is
    the peak index for the worst radius plus a tail margin derived from
    tail_tol, so the discarded tail is below tail_tol relative to the
    retained sum.
    """
    if not (0 < r_min <= r_max):
        raise ValueError("need 0 < r_min <= r_max")
    lq = math.log(q)
    reach = max(abs(math.log(r_max)), abs(math.log(r_min)))
    peak = k * reach / lq + 0.5
    margin = math.sqrt(2.0 * k * max(math.log(1.0 / tail_tol), 1.0) / lq)
    return int(math.ceil(peak + margin)) + 8


def spec_for_annulus(q: float, k: float, r_min: float, r_max: float,
                     tail_tol: float = 1e-14) -> ThetaSpec:
    return ThetaSpec(q=q, k=k, P=truncation_order(q, k, r_min, r_max, tail_tol),
                     tail_tol=tail_tol)


def theta_eval_scaled(spec: ThetaSpec, z) -> tuple[np.ndarray, np.ndarray]:
    """Theta as (mantissa, log_scale): theta = mantissa * exp(log_scale).

    Vectorized over z (any array shape).  z must be nonzero.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise ValueError("theta has an essential singularity at z = 0")
    lq = math.log(spec.q)
    p = np.arange(-spec.P, spec.P + 1)
    lz = np.log(z)  # principal branch; |z|^p and arg-phases both handled
    expo = (-p * (p - 1) * (lq / (2.0 * spec.k)))[..., :] + np.multiply.outer(lz, p)
    shift = expo.real.max(axis=-1)
    mant = np.exp(expo - shift[..., None]).sum(axis=-1)
    return mant, shift


def theta_eval(spec: ThetaSpec, z) -> np.ndarray:
    """Theta values (may overflow for extreme |z|; use theta_eval_scaled then)."""
    mant, shift = theta_eval_scaled(spec, z)
    out = mant * np.exp(shift)
    if np.isscalar(z) or np.asarray(z).shape == ():
        return complex(out)
    return out


def inv_theta(spec: ThetaSpec, z) -> np.ndarray:
    """1/Theta(z), safe against overflow of Theta itself (underflows to 0)."""
    mant, shift = theta_eval_scaled(spec, z)
    with np.errstate(under="ignore"):
        out = np.exp(-shift) / mant
    return out


def theta_qdiff_residual(spec: ThetaSpec, z: complex, m: int) -> float:
    """Relative residual of the q-difference equation at (z, m):

        | Theta(q^{m/k} z) - q^{m(m+1)/(2k)} z^m Theta(z) | / max(|lhs|, |rhs|)

    computed in shifted-exponent form so it is meaningful even when the
    two sides are astronomically large.
    """
    z = complex(z)
    lq = math.log(spec.q)
    lm, sm = theta_eval_scaled(spec, spec.q ** (m / spec.k) * z)
    rm, sr = theta_eval_scaled(spec, z)
    # fold the prefactor q^{m(m+1)/(2k)} z^m into the right mantissa/scale
    lzm = m * np.log(complex(z))
    sr = sr + m * (m + 1) * lq / (2.0 * spec.k) + lzm.real
    rm = rm * np.exp(1j * lzm.imag)
    base = max(float(sm), float(sr))
    lhs = complex(lm) * math.exp(float(sm) - base)
    rhs = complex(rm) * math.exp(float(sr) - base)
    denom = max(abs(lhs), abs(rhs))
    if denom == 0.0:
        return 0.0
    return abs(lhs - rhs) / denom


def spiral_clearance(q: float, k: float, z: complex) -> float:
    """inf over m in Z of |1 + z q^{m/k}|.

    Only finitely many m can bring z q^{m/k} near -1; outside the window
    |z q^{m/k}| in [1/8, 8] the distance to -1 is at least 7/8 from
    below and 7 from above, so the window minimum together with those
    floors is the exact infimum for any threshold < 7/8 and a correct
    lower bound in general.
    """
    az = abs(z)
    if az == 0:
        raise ValueError("z must be nonzero")
    lq = math.log(q)
    m_lo = int(math.floor(k * (math.log(0.125) - math.log(az)) / lq)) - 1
    m_hi = int(math.ceil(k * (math.log(8.0) - math.log(az)) / lq)) + 1
    m = np.arange(m_lo, m_hi + 1)
    w = z * np.exp(m * lq / k)
    window_min = float(np.min(np.abs(1.0 + w)))
    return min(window_min, 0.875)


def spiral_admissible(q: float, k: float, z: complex, dlt: float) -> bool:
    """Whether z keeps distance > dlt from the zero spiral in the
    normalized sense inf_m |1 + z q^{m/k}| > dlt.  Exact for dlt < 7/8."""
    if not 0 < dlt < 0.875:
        raise ValueError(f"dlt must lie in (0, 0.875), got {dlt}")
    return spiral_clearance(q, k, z) > dlt


def lower_envelope(q: float, k: float, z) -> np.ndarray:
    """exp((k/2) log^2|z|/log q) * |z|^{1/2}, the shape of the lower bound."""
    az = np.abs(np.asarray(z, dtype=complex))
    L = np.log(az)
    return np.exp(0.5 * k * L * L / math.log(q) + 0.5 * L)


def _log_abs_theta(spec: ThetaSpec, z) -> np.ndarray:
    mant, shift = theta_eval_scaled(spec, z)
    with np.errstate(divide="ignore"):
        return np.log(np.abs(mant)) + shift


def calibrate_theta_constant(spec: ThetaSpec, dlt: float = 0.3,
                             n_radial: int = 48, n_angular: int = 720,
                             safety: float = 0.9,
                             boundary_pad: float = 1.02) -> ThetaSpec:
    """Measure C(q,k) and return a spec carrying it.

    The ratio |Theta(z)| / (dlt * envelope(z)) is log-periodic in |z|
    with period q^{1/k}, so one radial period suffices.  The minimum is
    approached as the clearance decreases to dlt; besides a dense polar
    grid we add, for each radius, the two angles where the clearance
    crosses boundary_pad * dlt (bisection), then set

        Cqk = safety * min ratio over all admissible samples.

    The safety deflation (default 0.9) absorbs the residual gap between
    the sampled minimum and the true infimum over the admissible set.
    """
    q, k = spec.q, spec.k
    radii = np.exp(np.linspace(0.0, math.log(q) / k, n_radial, endpoint=False))
    angles = np.linspace(-math.pi, math.pi, n_angular, endpoint=False)
    zs = np.multiply.outer(radii, np.exp(1j * angles)).ravel()

    extra = []
    target = boundary_pad * dlt
    for r in radii:
        # clearance at angle a is even around pi; find the crossing by bisection
        def clear(a: float) -> float:
            return spiral_clearance(q, k, r * np.exp(1j * a))

        lo, hi = math.pi, math.pi / 2.0  # clearance(pi)=dist to spiral min, grows away
        if clear(lo) >= target:
            continue
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if clear(mid) < target:
                lo = mid
            else:
                hi = mid
        for a in (hi, -hi):
            extra.append(r * np.exp(1j * a))
    if extra:
        zs = np.concatenate([zs, np.asarray(extra)])

    ok = np.array([spiral_admissible(q, k, z, dlt) for z in zs])
    zs = zs[ok]
    ratios = np.exp(_log_abs_theta(spec, zs)
                    - np.log(dlt * lower_envelope(q, k, zs)))
    c = safety * float(np.min(ratios))
    return replace(spec, Cqk=c)


@dataclass(frozen=True)
class ThetaBoundCheck:
    z: complex
    admissible: bool
    clearance: float
    lhs: float          # |Theta(z)| (may be inf if out of double range)
    rhs: float          # Cqk * dlt * envelope(z)
    log_margin: float   # log lhs - log rhs; >= 0 means the bound holds
    ok: bool


def theta_lower_bound(spec: ThetaSpec, z: complex, dlt: float) -> ThetaBoundCheck:
    """Check |Theta(z)| >= Cqk * dlt * envelope(z) at one admissible point.

    Raises if the spec has no calibrated Cqk.  Points failing the spiral
    clearance are reported admissible=False and not judged.
    """
    if spec.Cqk is None:
        raise ValueError("ThetaSpec has no calibrated Cqk; run calibrate_theta_constant")
    clearance = spiral_clearance(spec.q, spec.k, z)
    admissible = clearance > dlt
    log_lhs = float(_log_abs_theta(spec, z))
    log_rhs = math.log(spec.Cqk * dlt) + float(np.log(lower_envelope(spec.q, spec.k, z)))
    margin = log_lhs - log_rhs
    lhs = math.exp(log_lhs) if log_lhs < 700 else math.inf
    rhs = math.exp(log_rhs) if log_rhs < 700 else math.inf
    return ThetaBoundCheck(z=complex(z), admissible=admissible, clearance=clearance,
                           lhs=lhs, rhs=rhs, log_margin=margin,
                           ok=admissible and margin >= 0.0)
