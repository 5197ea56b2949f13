"""System model for a two-way relay serving two NOMA user groups.

Two user pairs exchange messages through one half-duplex decode-and-forward
relay in two slots.  Slot 1 is an uplink NOMA phase (both groups transmit to
the relay), slot 2 a downlink NOMA phase (the relay broadcasts the re-encoded
superpositions).  All links are quasi-static Rayleigh, so the channel power
gains |h_i|^2 are exponentially distributed with means Omega_i = d_i^-alpha,
and reciprocity makes the slot-1 and slot-2 coefficients of a given user
identical within a block.

Imperfect SIC is modelled two ways:

* cross-antenna leakage at the relay (level ``varpi1``) and at the user nodes
  (level ``varpi2``), always present when the levels are nonzero;
* a residual channel g (variance ``omega_I``) left behind by the SIC stage,
  active only in ipSIC mode (epsilon = 1) and absent under pSIC (epsilon = 0).

This module owns the configuration record, the signal-index convention, the
channel sampler and the five SINR expressions every other module consumes.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass


class ConfigError(ValueError):
    """Raised when a configuration violates a named model invariant."""


def _positive(name, value):
    if not (value > 0) or not math.isfinite(value):
        raise ConfigError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class SystemConfig:
    """Every model parameter in one immutable record.

    ``rho`` is the linear transmit SNR.  It is stored linear; dB conversion
    happens once, at the command-line boundary.  ``a1..a4`` are the uplink
    power-allocation coefficients, ``b1..b4`` the downlink ones (only the b's
    carry the sum-to-one pairing constraint).  ``omega1..omega4`` default to
    the distance law d^-alpha and may be overridden, in which case they must
    still agree with the stored distances when both are supplied.

    ``t_slot``, ``pu_watts`` and ``pr_watts`` only matter for the energy
    efficiency metric and never enter the statistical model.
    """

    rho: float = 1.0
    a1: float = 0.8
    a2: float = 0.2
    a3: float = 0.8
    a4: float = 0.2
    b1: float = 0.2
    b2: float = 0.8
    b3: float = 0.2
    b4: float = 0.8
    varpi1: float = 0.01
    varpi2: float = 0.01
    omega_I: float = 0.01
    alpha: float = 2.0
    d1: float = 2.0
    d2: float = 10.0
    omega1: float | None = None
    omega2: float | None = None
    omega3: float | None = None
    omega4: float | None = None
    r1: float = 0.1
    r2: float = 0.01
    r3: float = 0.1
    r4: float = 0.01
    sic_mode: str = "ipsic"
    t_slot: float = 1.0
    pu_watts: float = 10.0
    pr_watts: float = 10.0

    def __post_init__(self):
        _positive("rho", self.rho)
        _positive("alpha", self.alpha)
        _positive("d1", self.d1)
        _positive("d2", self.d2)
        _positive("omega_I", self.omega_I)
        _positive("t_slot", self.t_slot)
        _positive("pu_watts", self.pu_watts)
        _positive("pr_watts", self.pr_watts)
        for i in (1, 2, 3, 4):
            _positive(f"a{i}", getattr(self, f"a{i}"))
            _positive(f"b{i}", getattr(self, f"b{i}"))
            rate = getattr(self, f"r{i}")
            if rate < 0 or not math.isfinite(rate):
                raise ConfigError(f"r{i} must be a finite rate >= 0, got {rate!r}")
        if abs(self.b1 + self.b2 - 1.0) > 1e-12:
            raise ConfigError("downlink coefficients must satisfy b1 + b2 = 1")
        if abs(self.b3 + self.b4 - 1.0) > 1e-12:
            raise ConfigError("downlink coefficients must satisfy b3 + b4 = 1")
        if not self.b2 > self.b1:
            raise ConfigError("downlink ordering requires b2 > b1 (far user gets more power)")
        if not self.b4 > self.b3:
            raise ConfigError("downlink ordering requires b4 > b3")
        for name in ("varpi1", "varpi2"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ConfigError(f"{name} must lie in [0, 1], got {v!r}")
        if self.sic_mode not in ("ipsic", "psic"):
            raise ConfigError(f"sic_mode must be 'ipsic' or 'psic', got {self.sic_mode!r}")
        # Fill in the distance-law variances, checking consistency when a
        # variance was supplied alongside the distance it must match.
        derived = {1: self.d1 ** -self.alpha, 2: self.d2 ** -self.alpha,
                   3: self.d1 ** -self.alpha, 4: self.d2 ** -self.alpha}
        for i in (1, 2, 3, 4):
            given = getattr(self, f"omega{i}")
            if given is None:
                object.__setattr__(self, f"omega{i}", derived[i])
            else:
                _positive(f"omega{i}", given)
                if abs(given - derived[i]) > 1e-9 * derived[i]:
                    raise ConfigError(
                        f"omega{i}={given!r} conflicts with the distance law "
                        f"d^-alpha = {derived[i]!r}; drop one of the two")

    @property
    def epsilon(self) -> float:
        """SIC-mode switch: 1.0 under ipSIC, 0.0 under pSIC."""
        return 1.0 if self.sic_mode == "ipsic" else 0.0

    def a(self, i):
        return getattr(self, f"a{i}")

    def b(self, i):
        return getattr(self, f"b{i}")

    def omega(self, i):
        return getattr(self, f"omega{i}")

    def rate(self, i):
        return getattr(self, f"r{i}")

    def with_rho(self, rho: float) -> "SystemConfig":
        return dataclasses.replace(self, rho=rho)

    def with_mode(self, sic_mode: str) -> "SystemConfig":
        return dataclasses.replace(self, sic_mode=sic_mode)


_STRONG_PAIRS = {(1, 3), (3, 1)}
_WEAK_PAIRS = {(2, 4), (4, 2)}


@dataclass(frozen=True)
class SignalIndex:
    """Which group's signal pair is under analysis.

    ``l`` is the stronger uplink signal the relay decodes first, ``k`` the
    near user of the receiving group, ``t`` the weaker signal decoded after
    SIC, ``r`` the far user that ultimately wants it.  Only (l, k) in
    {(1,3), (3,1)} combined with (t, r) in {(2,4), (4,2)} are constructible.
    """

    l: int
    k: int
    t: int
    r: int

    def __post_init__(self):
        if (self.l, self.k) not in _STRONG_PAIRS:
            raise ValueError(f"(l, k) must be one of {sorted(_STRONG_PAIRS)}, got ({self.l}, {self.k})")
        if (self.t, self.r) not in _WEAK_PAIRS:
            raise ValueError(f"(t, r) must be one of {sorted(_WEAK_PAIRS)}, got ({self.t}, {self.r})")

    @classmethod
    def for_signal(cls, signal: int) -> "SignalIndex":
        """Index tuple under which signal ``signal`` is analysed.

        Signals 1 and 3 are the strong members of their exchanges, signals
        2 and 4 the weak ones.  x1 and x2 travel toward group two, x3 and x4
        back the other way.
        """
        if signal in (1, 2):
            return cls(l=1, k=3, t=2, r=4)
        if signal in (3, 4):
            return cls(l=3, k=1, t=4, r=2)
        raise ValueError(f"signal must be 1..4, got {signal!r}")


def signal_role(signal: int) -> str:
    """'strong' for signals 1 and 3, 'weak' for 2 and 4."""
    if signal in (1, 3):
        return "strong"
    if signal in (2, 4):
        return "weak"
    raise ValueError(f"signal must be 1..4, got {signal!r}")


@dataclass(frozen=True)
class ChannelDraw:
    """One realization of the five channel power gains.

    ``g1..g4`` are the user-link gains |h_i|^2, ``gI`` the residual-SIC
    channel gain |g|^2.  Fields may be scalars or equal-shape arrays, every
    consumer broadcasts elementwise.
    """

    g1: object
    g2: object
    g3: object
    g4: object
    gI: object

    def gain(self, i):
        return getattr(self, f"g{i}")


@dataclass(frozen=True)
class SinrSet:
    """The five SINRs of one exchange, for a fixed SignalIndex.

    relay_strong      : relay decoding x_l, weak signal still superposed
    relay_weak        : relay decoding x_t after SIC of x_l
    near_decodes_weak : near user D_k stripping x_t before its own signal
    near_decodes_own  : D_k decoding x_l after that SIC step
    far_decodes_weak  : far user D_r decoding x_t directly
    """

    relay_strong: object
    relay_weak: object
    near_decodes_weak: object
    near_decodes_own: object
    far_decodes_weak: object


def gamma_threshold(rate_bpcu):
    """Linear SINR threshold for a target rate: 2^(2 R) - 1.

    The factor 2 in the exponent pays for the two-slot exchange.
    """
    if rate_bpcu < 0:
        raise ValueError(f"target rate must be >= 0, got {rate_bpcu!r}")
    return 2.0 ** (2.0 * rate_bpcu) - 1.0


def sample_channel_draw(config: SystemConfig, stream, size=None) -> ChannelDraw:
    """Draw the five exponential channel gains from ``stream``.

    ``stream`` is a numpy Generator.  With ``size=None`` the fields are
    scalars, otherwise arrays of that shape.  Identical stream state yields
    identical draws, which is what the reproducibility contract rests on.
    """
    return ChannelDraw(
        g1=stream.exponential(config.omega1, size),
        g2=stream.exponential(config.omega2, size),
        g3=stream.exponential(config.omega3, size),
        g4=stream.exponential(config.omega4, size),
        gI=stream.exponential(config.omega_I, size),
    )


def sinr_set(config: SystemConfig, draw: ChannelDraw, idx: SignalIndex) -> SinrSet:
    """Evaluate the five SINR expressions for one pairing.

    With rho the transmit SNR, eps the SIC switch and w1, w2 the leakage
    levels, the uplink pair is

        relay_strong = rho a_l g_l / (rho a_t g_t + rho w1 (a_k g_k + a_r g_r) + 1)
        relay_weak   = rho a_t g_t / (eps rho gI + rho w1 (a_k g_k + a_r g_r) + 1)

    and the downlink triple is

        near_decodes_weak = rho g_k b_t / (rho g_k b_l + rho w2 g_k + 1)
        near_decodes_own  = rho g_k b_l / (eps rho gI + rho w2 g_k + 1)
        far_decodes_weak  = rho g_r b_t / (rho g_r b_l + rho w2 g_r + 1)

    The user-node leakage term scales the user's own gain, which is kept
    verbatim rather than reinterpreted as an independent cross link.
    Scalar and array gains are both accepted.
    """
    rho = config.rho
    eps = config.epsilon
    a_l, a_k, a_t, a_r = (config.a(idx.l), config.a(idx.k),
                          config.a(idx.t), config.a(idx.r))
    b_l, b_t = config.b(idx.l), config.b(idx.t)
    g_l, g_k = draw.gain(idx.l), draw.gain(idx.k)
    g_t, g_r = draw.gain(idx.t), draw.gain(idx.r)

    cross = rho * config.varpi1 * (a_k * g_k + a_r * g_r)
    relay_strong = rho * a_l * g_l / (rho * a_t * g_t + cross + 1.0)
    relay_weak = rho * a_t * g_t / (eps * rho * draw.gI + cross + 1.0)

    near_decodes_weak = (rho * g_k * b_t
                         / (rho * g_k * b_l + rho * config.varpi2 * g_k + 1.0))
    near_decodes_own = (rho * g_k * b_l
                        / (eps * rho * draw.gI + rho * config.varpi2 * g_k + 1.0))
    far_decodes_weak = (rho * g_r * b_t
                        / (rho * g_r * b_l + rho * config.varpi2 * g_r + 1.0))

    return SinrSet(relay_strong, relay_weak, near_decodes_weak,
                   near_decodes_own, far_decodes_weak)
