"""Rate, minimum transmit power and the maximum-loss bound.

Public inputs carry explicit units: powers in dBm, losses in dB.  Linear
conversions happen here and nowhere else.  Noise is the total in-channel
noise power and is not rescaled with bandwidth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, PowerRangeError

LN2 = math.log(2.0)
# exp() overflows past this argument
_MAX_EXP_ARG = 709.0


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def dbm_to_watts(p_dbm: float) -> float:
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


def watts_to_dbm(p_w: float) -> float:
    if p_w <= 0:
        return -math.inf
    return 10.0 * math.log10(p_w) + 30.0


@dataclass(frozen=True)
class LinkBudgetParams:
    """Link parameters.

    ``num_users`` is overwritten with the scenario's user count when a
    scenario is built; the bandwidth and rate defaults are placeholders
    (the propagation analysis does not depend on them).
    """

    bandwidth_hz: float = 20e6
    rate_demand_bps: float = 1e4
    num_users: int = 1
    noise_dbm: float = -120.0
    snr_threshold_db: float = 10.0
    max_tx_power_dbm: float = math.inf

    def __post_init__(self) -> None:
        if not (math.isfinite(self.bandwidth_hz) and self.bandwidth_hz > 0):
            raise DomainError("LinkBudgetParams.bandwidth_hz must be > 0")
        if int(self.num_users) != self.num_users or self.num_users < 1:
            raise DomainError("LinkBudgetParams.num_users must be an integer >= 1")
        object.__setattr__(self, "num_users", int(self.num_users))
        if not (math.isfinite(self.rate_demand_bps) and self.rate_demand_bps >= 0):
            raise DomainError("LinkBudgetParams.rate_demand_bps must be >= 0")
        for name in ("noise_dbm", "snr_threshold_db"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"LinkBudgetParams.{name} must be finite")
        if math.isnan(self.max_tx_power_dbm):
            raise DomainError("LinkBudgetParams.max_tx_power_dbm must not be NaN")

    @property
    def spectral_load(self) -> float:
        """``v M / B``: bits/s/Hz each user must carry on its B/M slice."""
        return self.rate_demand_bps * self.num_users / self.bandwidth_hz

    @property
    def channel_bandwidth_hz(self) -> float:
        return self.bandwidth_hz / self.num_users


def user_rate(tx_power_dbm: float, pathloss_db: float, channel_bandwidth_hz: float, noise_dbm: float) -> float:
    """Shannon rate in bits/s on one user's channel."""
    if not channel_bandwidth_hz > 0:
        raise DomainError("channel bandwidth must be > 0")
    snr = 10.0 ** ((tx_power_dbm - pathloss_db - noise_dbm) / 10.0)
    return channel_bandwidth_hz * math.log1p(snr) / LN2


def _snr_factor(params: LinkBudgetParams) -> float:
    # 2^(vM/B) - 1, accurate for small loads
    arg = params.spectral_load * LN2
    if arg > _MAX_EXP_ARG:
        raise PowerRangeError(f"2^(vM/B) overflows for vM/B = {params.spectral_load:g}")
    return math.expm1(arg)


def per_user_min_power(pathloss_db: float, params: LinkBudgetParams) -> float:
    """Smallest transmit power (W) that gives one user its demanded rate."""
    return _snr_factor(params) * dbm_to_watts(params.noise_dbm) * db_to_linear(pathloss_db)


def total_min_power(pathlosses_db: Sequence[float], params: LinkBudgetParams) -> float:
    if len(pathlosses_db) != params.num_users:
        raise DomainError(
            f"got {len(pathlosses_db)} path losses for num_users={params.num_users}"
        )
    return math.fsum(per_user_min_power(L, params) for L in pathlosses_db)


def max_allowable_loss(params: LinkBudgetParams) -> float:
    """Upper bound on the summed linear path loss set by the power budget.

    ``inf`` when no maximum transmit power is configured.
    """
    if not params.spectral_load > 0:
        raise DomainError("maximum allowable loss undefined for zero rate demand")
    if params.max_tx_power_dbm == math.inf:
        return math.inf
    return dbm_to_watts(params.max_tx_power_dbm) / (_snr_factor(params) * dbm_to_watts(params.noise_dbm))


def received_power_threshold_dbm(params: LinkBudgetParams) -> float:
    return params.noise_dbm + params.snr_threshold_db


def worst_case_min_tx_power(pathloss_db: float, params: LinkBudgetParams) -> float:
    """Transmit power (dBm) needed to reach the SNR threshold over ``pathloss_db``."""
    return received_power_threshold_dbm(params) + pathloss_db
