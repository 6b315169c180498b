"""Inverse Fourier transform for exponentially decaying symbols.

For a symbol f on the real line satisfying

    |f(m)| <= C (1 + |m|)^{-mu} exp(-beta |m|),   mu > 1, beta > 0,

the normalized inverse transform

    (F^{-1} f)(z) = (2 pi)^{-1/2} * integral f(m) exp(i z m) dm

defines a bounded holomorphic function on any horizontal strip
|Im z| <= beta' < beta.  The integral is truncated at a cutoff M
derived from the declared profile so the discarded tail is below the
requested tolerance on the whole strip, then evaluated by adaptive
Gauss-Kronrod quadrature (real and imaginary parts separately).

Symbols are either registered closed forms or CSV sample tables with
columns (m, Re f, Im f), linearly interpolated; in both cases a
DecayProfile must be declared and is certified on a grid before use.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

SQRT2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class HorizontalStrip:
    """Open strip |Im z| < half_width."""

    half_width: float

    def __post_init__(self) -> None:
        if not self.half_width > 0:
            raise ValueError(f"half_width must be > 0, got {self.half_width}")

    def contains(self, z: complex) -> bool:
        return abs(complex(z).imag) < self.half_width


@dataclass(frozen=True)
class DecayProfile:
    """Envelope C (1+|m|)^{-mu} e^{-beta |m|} with mu > 1, beta > 0."""

    C: float
    mu: float
    beta: float

    def __post_init__(self) -> None:
        if not self.C > 0:
            raise ValueError(f"C must be > 0, got {self.C}")
        if not self.mu > 1:
            raise ValueError(f"mu must be > 1 for integrability, got {self.mu}")
        if not self.beta > 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")

    def bound(self, m) -> np.ndarray:
        m = np.abs(np.asarray(m, dtype=float))
        return self.C * (1.0 + m) ** (-self.mu) * np.exp(-self.beta * m)

    def certify(self, f: Callable[[np.ndarray], np.ndarray],
                m_grid: np.ndarray) -> tuple[bool, float, float]:
        """Check |f| <= bound on a grid.

        Returns (ok, worst_ratio, argmax_m); worst_ratio <= 1 means the
        profile dominates the samples.
        """
        m_grid = np.asarray(m_grid, dtype=float)
        vals = np.abs(np.asarray(f(m_grid), dtype=complex))
        bnd = self.bound(m_grid)
        ratios = vals / bnd
        i = int(np.argmax(ratios))
        return bool(ratios[i] <= 1.0 + 1e-12), float(ratios[i]), float(m_grid[i])

    def cutoff(self, strip_half_width: float, tol: float) -> float:
        """Cutoff M with the two tails of the strip-weighted integral below tol.

        Tail estimate: 2/sqrt(2 pi) * C (1+M)^{-mu} e^{-(beta-b')M} / (beta-b').
        Solved by fixed-point iteration on the log.
        """
        gap = self.beta - strip_half_width
        if gap <= 0:
            raise ValueError(
                f"strip half-width {strip_half_width} must be < beta={self.beta}")
        M = 1.0
        for _ in range(200):
            t = 2.0 / SQRT2PI * self.C * (1.0 + M) ** (-self.mu) \
                * math.exp(-gap * M) / gap
            if t <= tol:
                break
            M += max((math.log(t / tol)) / gap, 0.25)
        return M


def complex_quad(f: Callable[[float], complex], a: float, b: float,
                 epsabs: float = 1e-12, epsrel: float = 1e-11,
                 limit: int = 300) -> tuple[complex, float, int]:
    """Adaptive Gauss-Kronrod on [a,b] for a complex integrand.

    Returns (value, error_estimate, evaluation_count)."""
    re, re_err, info_r = quad(lambda x: f(x).real, a, b, epsabs=epsabs,
                              epsrel=epsrel, limit=limit, full_output=True)[:3]
    im, im_err, info_i = quad(lambda x: f(x).imag, a, b, epsabs=epsabs,
                              epsrel=epsrel, limit=limit, full_output=True)[:3]
    return re + 1j * im, math.hypot(re_err, im_err), info_r["neval"] + info_i["neval"]


@dataclass
class InverseFourierResult:
    value: complex
    error_estimate: float
    nodes_used: int
    cutoff: float


def inverse_fourier(f: Callable, z: complex, profile: DecayProfile,
                    strip: HorizontalStrip | None = None,
                    tol: float = 1e-12) -> InverseFourierResult:
    """(2 pi)^{-1/2} * integral_{-M}^{M} f(m) e^{izm} dm with profile-derived M.

    z must lie strictly inside the declared strip (default: half of the
    profile's beta).  The tail beyond M is bounded by tol by design.
    """
    if strip is None:
        strip = HorizontalStrip(half_width=0.5 * profile.beta)
    if strip.half_width >= profile.beta:
        raise ValueError("strip half-width must be smaller than the decay rate beta")
    z = complex(z)
    if not strip.contains(z):
        raise ValueError(f"z={z} lies outside the declared strip "
                         f"|Im z| < {strip.half_width}")
    M = profile.cutoff(strip.half_width, tol)
    val, err, n = complex_quad(lambda m: complex(f(m)) * np.exp(1j * z * m),
                               -M, M, epsabs=tol / 4.0, epsrel=1e-11)
    return InverseFourierResult(value=val / SQRT2PI, error_estimate=err / SQRT2PI + tol,
                                nodes_used=n, cutoff=M)


def inverse_fourier_grid(f: Callable, zs, profile: DecayProfile,
                         strip: HorizontalStrip | None = None,
                         tol: float = 1e-12) -> np.ndarray:
    """inverse_fourier over an array of z values."""
    return np.asarray([inverse_fourier(f, z, profile, strip, tol).value
                       for z in np.asarray(zs).ravel()]).reshape(np.asarray(zs).shape)


# --- symbol registry -------------------------------------------------------

def standard_symbol(beta: float, mu: float) -> Callable:
    """f(m) = (1+|m|)^{-mu} e^{-beta|m|}; saturates its own profile with C=1."""
    def f(m):
        am = np.abs(m)
        return (1.0 + am) ** (-mu) * np.exp(-beta * am)
    return f


def gaussian_symbol() -> Callable:
    """f(m) = exp(-m^2); inverse transform is exp(-z^2/4)/sqrt(2)."""
    def f(m):
        return np.exp(-np.asarray(m, dtype=float) ** 2)
    return f


def oscillating_symbol(beta: float, mu: float, freq: float = 1.0) -> Callable:
    """f(m) = cos(freq*m) (1+|m|)^{-mu} e^{-beta|m|}."""
    def f(m):
        am = np.abs(m)
        return np.cos(freq * m) * (1.0 + am) ** (-mu) * np.exp(-beta * am)
    return f


BUILTIN_SYMBOLS: dict[str, Callable[..., Callable]] = {
    "standard": standard_symbol,
    "gaussian": lambda beta=0.0, mu=0.0: gaussian_symbol(),
    "oscillating": oscillating_symbol,
}


def make_symbol(name: str, beta: float, mu: float) -> Callable:
    if name not in BUILTIN_SYMBOLS:
        raise KeyError(f"unknown symbol '{name}'; have {sorted(BUILTIN_SYMBOLS)}")
    return BUILTIN_SYMBOLS[name](beta, mu)


def default_profile_for(name: str, beta: float, mu: float) -> DecayProfile:
    """Profile certified to dominate the named builtin."""
    if name == "gaussian":
        # exp(-m^2) <= C (1+|m|)^{-mu} e^{-beta|m|} needs C = sup ratio
        grid = np.linspace(0, 60, 6001)
        c = float(np.max(np.exp(-grid ** 2) * (1 + grid) ** mu * np.exp(beta * grid)))
        return DecayProfile(C=max(c, 1.0), mu=mu, beta=beta)
    return DecayProfile(C=1.0, mu=mu, beta=beta)


def symbol_from_csv(path: str, profile: DecayProfile) -> Callable:
    """Load samples (m, Re f, Im f) and return a linear interpolant.

    The samples are certified against the declared profile; violation or
    a non-monotone m column raises.  Outside the sampled range the
    interpolant returns 0 (consistent with the declared decay).
    """
    ms, res, ims = [], [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for row in reader:
            if not row or row[0].strip().startswith("#") or row[0].strip().lower() == "m":
                continue
            ms.append(float(row[0]))
            res.append(float(row[1]))
            ims.append(float(row[2]) if len(row) > 2 else 0.0)
    m = np.asarray(ms)
    if len(m) < 2 or np.any(np.diff(m) <= 0):
        raise ValueError(f"symbol CSV {path}: need >= 2 strictly increasing m samples")
    fre, fim = np.asarray(res), np.asarray(ims)
    vals = np.hypot(fre, fim)
    bad = vals > profile.bound(m) * (1 + 1e-12)
    if np.any(bad):
        i = int(np.argmax(vals / profile.bound(m)))
        raise ValueError(f"symbol CSV {path}: sample at m={m[i]} violates the "
                         f"declared decay profile")

    def f(x):
        x = np.asarray(x, dtype=float)
        return np.interp(x, m, fre, left=0.0, right=0.0) \
            + 1j * np.interp(x, m, fim, left=0.0, right=0.0)
    return f


def write_symbol_csv(path: str, f: Callable, m_grid: np.ndarray) -> None:
    """Write samples in the (m, Re f, Im f) exchange format."""
    m_grid = np.asarray(m_grid, dtype=float)
    vals = np.asarray(f(m_grid), dtype=complex)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["m", "Re f", "Im f"])
        for m, v in zip(m_grid, vals):
            w.writerow([repr(float(m)), repr(float(v.real)), repr(float(v.imag))])
