"""Global parameter frames and scalar bound utilities.

Everything downstream is parametrised by a base q > 1 and a pair of
Gevrey levels 1 <= k1 < k2.  The auxiliary level kappa is defined by

    1/kappa = 1/k1 - 1/k2,

so that kappa > k1 and the splitting identity

    -k2 + k2^2/(kappa + k2) = -k1

holds exactly.  Two scalar facts used throughout:

* sup_{x>0} x^{gamma-N} exp(-(k/2) log^2(x)/log q)
      = q^{gamma^2/(2k)} (q^{-gamma/k})^N q^{N^2/(2k)},
  which converts a log-Gaussian functional bound into a sequence of
  geometric-in-N bounds, and

* H(x) = x^{m1} exp(-m2 log^2 x) attains its maximum at
  x0 = exp(m1/(2 m2)) with H(x0) = exp(m1^2/(4 m2)).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


@dataclass(frozen=True)
class QFrame:
    """Base q and the two Gevrey levels, with derived kappa.

    kappa is always recomputed from (k1, k2); it is never stored in
    serialized form, so a round trip cannot drift.
    """

    q: float
    k1: float
    k2: float
    epsilon0: float = 0.4
    rT: float = 0.4
    kappa: float = field(init=False)

    def __post_init__(self) -> None:
        _require(self.q > 1.0, f"q must be > 1, got {self.q}")
        _require(self.k1 >= 1.0, f"k1 must be >= 1, got {self.k1}")
        _require(self.k2 > self.k1, f"need k2 > k1, got k1={self.k1}, k2={self.k2}")
        _require(0.0 < self.epsilon0 < 1.0, f"epsilon0 must be in (0,1), got {self.epsilon0}")
        _require(0.0 < self.rT < 1.0, f"rT must be in (0,1), got {self.rT}")
        object.__setattr__(self, "kappa", self.k1 * self.k2 / (self.k2 - self.k1))

    @property
    def log_q(self) -> float:
        return math.log(self.q)

    def level(self, j: int) -> float:
        """k_j for j in {1, 2}."""
        if j == 1:
            return self.k1
        if j == 2:
            return self.k2
        raise ValueError(f"level index must be 1 or 2, got {j}")

    def splitting_identity_residual(self) -> float:
        """|(-k2 + k2^2/(kappa+k2)) - (-k1)|, should be ~ a few ulps."""
        return abs((-self.k2 + self.k2 ** 2 / (self.kappa + self.k2)) - (-self.k1))

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "k1": self.k1,
            "k2": self.k2,
            "epsilon0": self.epsilon0,
            "rT": self.rT,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "QFrame":
        return cls(q=d["q"], k1=d["k1"], k2=d["k2"],
                   epsilon0=d.get("epsilon0", 0.4), rT=d.get("rT", 0.4))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, s: str) -> "QFrame":
        return cls.from_dict(json.loads(s))


def make_qframe(q: float, k1: float, k2: float,
                epsilon0: float = 0.4, rT: float = 0.4) -> QFrame:
    """Validated constructor for QFrame."""
    return QFrame(q=q, k1=k1, k2=k2, epsilon0=epsilon0, rT=rT)


@dataclass(frozen=True)
class GevreyScale:
    """A geometric ladder of radii r_p = q^{-p/(2k)} with bound constants.

    `level` is a free label (1 or 2) naming which Gevrey level the
    ladder belongs to; the radii only depend on (q, k).  C and A are
    the constants of a bound  C * A^(N+1) * |eps|^(N+1)  certified
    relative to this ladder.
    """

    q: float
    k: float
    C: float = 1.0
    A: float = 1.0
    level: int = 1

    def __post_init__(self) -> None:
        _require(self.q > 1.0, f"q must be > 1, got {self.q}")
        _require(self.k > 0.0, f"k must be > 0, got {self.k}")
        _require(self.C > 0.0, f"C must be > 0, got {self.C}")
        _require(self.A > 0.0, f"A must be > 0, got {self.A}")

    def radius(self, p: int | float) -> float:
        """r_p = q^{-p/(2k)}; strictly decreasing in p, -> 0."""
        return self.q ** (-p / (2.0 * self.k))

    def radii(self, p_max: int) -> list[float]:
        return [self.radius(p) for p in range(p_max + 1)]

    def to_dict(self) -> dict:
        return {"q": self.q, "k": self.k, "C": self.C, "A": self.A, "level": self.level}

    @classmethod
    def from_dict(cls, d: dict) -> "GevreyScale":
        return cls(**d)


def log_gaussian_power(q: float, k: float, gamma: float, N: int, absT: float) -> float:
    """|T|^{gamma-N} * exp(-(k/2) log^2|T| / log q), the left side of the
    sequence-bound inequality.  Defined for absT > 0."""
    _require(absT > 0.0, "absT must be positive")
    _require(q > 1.0, "q must be > 1")
    _require(k > 0.0, "k must be > 0")
    L = math.log(absT)
    return math.exp((gamma - N) * L - 0.5 * k * L * L / math.log(q))


def seq_bound_from_log_bound(q: float, k: float, gamma: float, N: int) -> float:
    """Supremum over |T| > 0 of log_gaussian_power(q, k, gamma, N, |T|):

        q^{gamma^2/(2k)} * (q^{-gamma/k})^N * q^{N^2/(2k)}.

    The bound is tight (attained at |T| = q^{(gamma-N)/k}).
    """
    _require(q > 1.0, "q must be > 1")
    _require(k > 0.0, "k must be > 0")
    lq = math.log(q)
    expo = (gamma * gamma / (2.0 * k) - gamma * N / k + N * N / (2.0 * k)) * lq
    return math.exp(expo)


def log_gaussian_max(m1: float, m2: float) -> tuple[float, float]:
    """Maximizer and maximum of H(x) = x^{m1} exp(-m2 log^2 x) on x > 0.

    Returns (x0, H(x0)) = (exp(m1/(2 m2)), exp(m1^2/(4 m2))).  m2 must be
    positive, otherwise H is unbounded.
    """
    _require(m2 > 0.0, f"m2 must be > 0 for a finite maximum, got {m2}")
    x0 = math.exp(m1 / (2.0 * m2))
    hmax = math.exp(m1 * m1 / (4.0 * m2))
    return x0, hmax
