"""Closed-form rate and energy evaluation at a fixed operating point.

Everything here is exact and deterministic: legitimate rates under
treating-interference-as-noise, harvested energies under both energy models,
eavesdropper sum rates and their per-order chain-rule decompositions, and the
clamped secrecy corner tuples.  All rates are base-2 (bits per channel use).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

import numpy as np

from .linalg import inv_quadratic_form, log2_det, rank_one_update_sum
from .model import DecodingOrder, EnergyModel, OperatingPoint, SystemConfig


class EmptySubsetError(ValueError):
    pass


class TooManyUsersError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class RateTuple:
    """Per-user rates in bits/channel use; entries are never negative."""

    per_user: np.ndarray

    def __post_init__(self):
        arr = np.array(self.per_user, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "per_user", arr)
        if np.any(arr < 0):
            raise ValueError(f"rates must be >= 0, got {arr}")


@dataclass(frozen=True, eq=False)
class EnergyVector:
    """Per-user harvested energies in power units; entries >= 0."""

    per_user: np.ndarray

    def __post_init__(self):
        arr = np.array(self.per_user, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "per_user", arr)
        if np.any(arr < 0):
            raise ValueError(f"energies must be >= 0, got {arr}")


def legitimate_rate(cfg: SystemConfig, op: OperatingPoint, k: int) -> float:
    """Rate of user k with interference treated as noise.

    R_k = log2(1 + eta_k p_k g_kk / (sig_k^2 + eta_k (rho_k^2 + sum_{j!=k} p_j g_kj)))
    with g_kj = |h_kj|^2.
    """
    g = cfg.gain_powers
    eta = op.splits[k]
    interference = float(g[k] @ op.powers) - g[k, k] * op.powers[k]
    num = eta * op.powers[k] * g[k, k]
    den = cfg.processing_noise_vars[k] + eta * (cfg.antenna_noise_vars[k] + interference)
    return float(np.log2(1.0 + num / den))


def legitimate_rates(cfg: SystemConfig, op: OperatingPoint) -> np.ndarray:
    return np.array([legitimate_rate(cfg, op, k) for k in range(cfg.num_users)])


def harvested_energy(cfg: SystemConfig, op: OperatingPoint, k: int) -> float:
    """Harvested energy of user k under the config's energy model.

    PRODUCT:       (1 - eta_k) (sum_j p_j g_kj + rho_k^2)
    REFORMULATED:  sig_k^2 + (1 - eta_k) sum_j p_j g_kj
    """
    received = float(cfg.gain_powers[k] @ op.powers)
    if cfg.energy_model is EnergyModel.PRODUCT:
        return (1.0 - op.splits[k]) * (received + cfg.antenna_noise_vars[k])
    return cfg.processing_noise_vars[k] + (1.0 - op.splits[k]) * received


def harvested_energies(cfg: SystemConfig, op: OperatingPoint) -> EnergyVector:
    return EnergyVector(np.array([harvested_energy(cfg, op, k)
                                  for k in range(cfg.num_users)]))


def _eve_covariance(cfg: SystemConfig, p: np.ndarray, users) -> np.ndarray:
    sbar = cfg.eve_noise_total
    return rank_one_update_sum(
        cfg.num_eve_antennas,
        [(p[j] / sbar, cfg.eve_channels[j]) for j in users])


def eve_sum_rate(cfg: SystemConfig, p: np.ndarray, subset) -> float:
    """Total rate the eavesdropper can extract about the users in ``subset``,
    with the complement users acting as noise.

    Equals log2_det of the all-users covariance minus log2_det of the
    complement covariance.
    """
    subset = frozenset(int(k) for k in subset)
    if not subset:
        raise EmptySubsetError("subset of users must be nonempty")
    p = np.asarray(p, dtype=float)
    complement = [j for j in range(cfg.num_users) if j not in subset]
    full = _eve_covariance(cfg, p, range(cfg.num_users))
    inner = _eve_covariance(cfg, p, complement)
    return log2_det(full) - log2_det(inner)


def eve_rate_chain(cfg: SystemConfig, p: np.ndarray, order: DecodingOrder,
                   subset=None) -> np.ndarray:
    """Per-user eavesdropper rates for one chain-rule split.

    The eavesdropper decodes the subset's users successively in ``order``:
    a user decoded at position i sees the not-yet-decoded subset users and
    every out-of-subset user as noise, while already-decoded users are
    conditioned away.  Returns a length-K array; entries outside the subset
    are zero.  Summing over the subset recovers eve_sum_rate exactly.
    """
    if subset is None:
        subset = range(cfg.num_users)
    subset = frozenset(int(k) for k in subset)
    if len(order) != cfg.num_users:
        raise ValueError(f"order has {len(order)} entries for {cfg.num_users} users")
    p = np.asarray(p, dtype=float)
    sbar = cfg.eve_noise_total
    out = np.zeros(cfg.num_users)
    remaining = [u for u in order.users if u in subset]
    outsiders = [u for u in range(cfg.num_users) if u not in subset]
    for i, k in enumerate(remaining):
        interferers = remaining[i + 1:] + outsiders
        q = _eve_covariance(cfg, p, interferers)
        quad = inv_quadratic_form(q, cfg.eve_channels[k])
        out[k] = np.log2(1.0 + p[k] * quad / sbar)
    return out


def secrecy_corner(cfg: SystemConfig, op: OperatingPoint, order: DecodingOrder) -> RateTuple:
    """Clamped secrecy rates [R_k - R_Ek]^+ for one decoding order."""
    rates = legitimate_rates(cfg, op)
    leak = eve_rate_chain(cfg, op.powers, order)
    return RateTuple(np.maximum(rates - leak, 0.0))


class SubsetCheck(NamedTuple):
    ok: bool
    worst_violation: float
    worst_subset: tuple


def subset_constraints_satisfied(cfg: SystemConfig, op: OperatingPoint,
                                 rates: RateTuple, tol: float = 1e-9) -> SubsetCheck:
    """Check a candidate secrecy tuple against every subset sum constraint.

    For each nonempty S: sum_{k in S} rates_k <= [sum_{k in S} R_k -
    eve_sum_rate(S)]^+ + tol.  Returns the worst signed violation and the
    subset attaining it.
    """
    k = cfg.num_users
    if k > 16:
        raise TooManyUsersError(f"subset enumeration guarded at K <= 16, got K={k}")
    legit = legitimate_rates(cfg, op)
    tup = rates.per_user
    worst, worst_s = -np.inf, ()
    for size in range(1, k + 1):
        for subset in combinations(range(k), size):
            bound = max(float(legit[list(subset)].sum())
                        - eve_sum_rate(cfg, op.powers, subset), 0.0)
            violation = float(tup[list(subset)].sum()) - bound
            if violation > worst:
                worst, worst_s = violation, subset
    return SubsetCheck(worst <= tol, worst, worst_s)
