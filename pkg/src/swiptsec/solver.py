"""Weighted max-min power and split allocation via condensed geometric programs.

The per-weight problem (maximize the smallest weighted rate subject to
harvesting demands and box constraints) is a signomial program: every rate
constraint is a ratio of posynomials in the transmit powers p, the splitting
coefficients eta and the epigraph variable lambda = 2^beta.  Each outer
iteration replaces the ratio denominators with their arithmetic-geometric
mean monomial lower bounds anchored at the previous solution (single
condensation), which yields a geometric program; the eavesdropper quadratic
forms are frozen at the previous powers over the same iteration.  The GP is
solved in log-transformed variables, where it is convex.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.optimize

from .linalg import inv_quadratic_form, rank_one_update_sum
from .metrics import eve_rate_chain, legitimate_rates, secrecy_corner
from .model import DecodingOrder, OperatingPoint, SystemConfig, Weights

SECURE = "secure"
RELIABLE = "reliable"
MODES = (SECURE, RELIABLE)


class NonPositiveTermError(ValueError):
    pass


class NonPositiveAnchorError(ValueError):
    pass


class InfeasibleAnchorError(ValueError):
    pass


class InfeasibleError(RuntimeError):
    """No point satisfies the constraints (best violation attached)."""

    def __init__(self, message, violation=None, point=None):
        super().__init__(message)
        self.violation = violation
        self.point = point


class NumericalFailureError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Posynomial algebra
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Posynomial:
    """Sum of monomials c_t * prod_i x_i^{a_ti} with positive coefficients.

    coeffs has shape (T,), exponents (T, n).  A single-term posynomial is a
    monomial.
    """

    coeffs: np.ndarray
    exponents: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        e = np.atleast_2d(np.asarray(self.exponents, dtype=float))
        if c.size == 0:
            raise NonPositiveTermError("posynomial needs at least one term")
        if np.any(c <= 0) or not np.all(np.isfinite(c)):
            raise NonPositiveTermError(f"coefficients must be finite and > 0, got {c}")
        if e.shape[0] != c.size:
            raise ValueError(f"{c.size} coefficients vs {e.shape[0]} exponent rows")
        c.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "exponents", e)

    @property
    def num_terms(self) -> int:
        return self.coeffs.size

    @property
    def num_vars(self) -> int:
        return self.exponents.shape[1]

    @property
    def is_monomial(self) -> bool:
        return self.num_terms == 1

    def term_values(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.coeffs * np.exp(self.exponents @ np.log(x))

    def value(self, x) -> float:
        return float(self.term_values(x).sum())

    def log_value(self, y) -> float:
        """Value of log posy(exp(y)); the convex log-space form."""
        r = self.exponents @ np.asarray(y, dtype=float) + np.log(self.coeffs)
        m = r.max()
        return float(m + np.log(np.exp(r - m).sum()))

    def times(self, other: "Posynomial") -> "Posynomial":
        coeffs = np.outer(self.coeffs, other.coeffs).ravel()
        exps = (self.exponents[:, None, :] + other.exponents[None, :, :])
        return Posynomial(coeffs, exps.reshape(-1, self.num_vars))

    def scaled(self, factor: float) -> "Posynomial":
        return Posynomial(self.coeffs * factor, self.exponents)

    def over_monomial(self, mono: "Posynomial") -> "Posynomial":
        if not mono.is_monomial:
            raise ValueError("divisor must be a monomial")
        return Posynomial(self.coeffs / mono.coeffs[0],
                          self.exponents - mono.exponents[0])


def posynomial(num_vars: int, terms) -> Posynomial:
    """Build a posynomial from (coefficient, {var_index: power}) pairs.

    Terms with zero coefficient are dropped; they come from zero channel
    gains or zero demands and are not part of the algebra.
    """
    coeffs, rows = [], []
    for coef, powers in terms:
        if coef == 0.0:
            continue
        row = np.zeros(num_vars)
        for idx, power in powers.items():
            row[idx] += power
        coeffs.append(coef)
        rows.append(row)
    if not coeffs:
        raise NonPositiveTermError("all terms vanished; posynomial needs one positive term")
    return Posynomial(np.array(coeffs), np.array(rows))


def optimal_condensation_weights(term_values) -> np.ndarray:
    """Weights making the AM-GM monomial bound tight: each term's share of
    the total."""
    t = np.asarray(term_values, dtype=float)
    if np.any(t <= 0) or not np.all(np.isfinite(t)):
        raise NonPositiveTermError(f"term values must be finite and > 0, got {t}")
    return t / t.sum()


def condense(posy: Posynomial, anchor) -> Posynomial:
    """Monomial lower bound of ``posy``, exact at ``anchor``.

    Uses sum_t f_t >= prod_t (f_t / c_t)^{c_t} with c_t chosen from the term
    shares at the anchor, so the bound touches the posynomial there.
    """
    anchor = np.asarray(anchor, dtype=float)
    if np.any(anchor <= 0) or not np.all(np.isfinite(anchor)):
        raise NonPositiveAnchorError(f"anchor must be strictly positive, got {anchor}")
    if posy.is_monomial:
        return posy
    c = optimal_condensation_weights(posy.term_values(anchor))
    log_coef = float(c @ (np.log(posy.coeffs) - np.log(c)))
    exponent = c @ posy.exponents
    return Posynomial(np.array([np.exp(log_coef)]), exponent[None, :])


# ---------------------------------------------------------------------------
# GP construction
# ---------------------------------------------------------------------------

# Variable layout: index 0 is lambda, then the K powers, then the K splits.

def _var_layout(num_users: int):
    lam = 0
    p = lambda k: 1 + k
    eta = lambda k: 1 + num_users + k
    return lam, p, eta


@dataclass(frozen=True, eq=False)
class GpInstance:
    """One condensed geometric program: maximize lambda subject to
    posynomial(x) <= 1 constraints over x = (lambda, p, eta).

    lagged_q[k] is the frozen eavesdropper quadratic form of user k (None in
    reliable mode); condensations pairs each condensed denominator with its
    monomial bound so approximation gaps can be evaluated later.
    """

    num_users: int
    constraints: list
    labels: list
    anchor: np.ndarray
    floors: np.ndarray
    caps: np.ndarray
    condensations: list = field(default_factory=list)
    lagged_q: Optional[np.ndarray] = None
    lagged_matrices: Optional[list] = None


def _interferers(order: DecodingOrder, k: int) -> list:
    pos = order.users.index(k)
    return list(order.users[pos + 1:])


def _effective_rates(cfg, op, mode, order, lagged_q=None):
    """Unclamped per-user effective rates: secrecy gaps in secure mode,
    plain rates otherwise.  lagged_q substitutes frozen quadratic forms."""
    rates = legitimate_rates(cfg, op)
    if mode == RELIABLE:
        return rates
    if lagged_q is not None:
        sbar = cfg.eve_noise_total
        leak = np.log2(1.0 + op.powers * lagged_q / sbar)
    else:
        leak = eve_rate_chain(cfg, op.powers, order)
    return rates - leak


def build_gp(cfg: SystemConfig, alpha: Weights, order: DecodingOrder,
             anchor: OperatingPoint, mode: str, prev_powers=None,
             floor_frac: float = 1e-6) -> GpInstance:
    """Emit the condensed GP for one outer iteration.

    Per user: the rate/secrecy constraint (skipped when alpha_k = 0), the
    harvesting constraint (skipped when it is vacuous for every feasible
    point), and the box constraints.  Denominators are condensed at the
    anchor; eavesdropper quadratic forms are constants built from
    ``prev_powers`` (defaults to the anchor powers).
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    kk = cfg.num_users
    lam, p_of, eta_of = _var_layout(kk)
    n = 1 + 2 * kk
    g = cfg.gain_powers
    sbar = cfg.eve_noise_total
    sig2 = cfg.processing_noise_vars
    rho2 = cfg.antenna_noise_vars
    pmax = cfg.power_budget

    floors = np.empty(n)
    floors[lam] = 2.0 ** -64
    caps = np.empty(n)
    caps[lam] = 2.0 ** 64
    for k in range(kk):
        floors[p_of(k)] = floor_frac * pmax[k]
        caps[p_of(k)] = pmax[k]
        floors[eta_of(k)] = floor_frac
        caps[eta_of(k)] = 1.0

    if np.any(~np.isfinite(anchor.powers)) or np.any(~np.isfinite(anchor.splits)):
        raise InfeasibleAnchorError("anchor contains non-finite entries")
    anchor_x = np.empty(n)
    anchor_x[1:kk + 1] = np.clip(anchor.powers, floors[1:kk + 1], caps[1:kk + 1])
    anchor_x[kk + 1:] = np.clip(anchor.splits, floors[kk + 1:], caps[kk + 1:])
    anchor_op = OperatingPoint(anchor_x[1:kk + 1], anchor_x[kk + 1:])

    if prev_powers is None:
        prev_powers = anchor_op.powers
    prev_powers = np.asarray(prev_powers, dtype=float)

    lagged_q = None
    lagged_matrices = None
    if mode == SECURE:
        lagged_q = np.empty(kk)
        lagged_matrices = []
        for k in range(kk):
            inter = _interferers(order, k)
            q_mat = rank_one_update_sum(
                cfg.num_eve_antennas,
                [(prev_powers[j] / sbar, cfg.eve_channels[j]) for j in inter])
            lagged_matrices.append(q_mat)
            lagged_q[k] = inv_quadratic_form(q_mat, cfg.eve_channels[k])

    # Anchor value of lambda: tight against the worst weighted effective
    # rate, so the anchor triple is feasible for its own condensation.
    eff = _effective_rates(cfg, anchor_op, mode, order, lagged_q)
    active = alpha.alpha > 0
    if not np.any(active):
        raise ValueError("alpha must have at least one positive entry")
    beta_anchor = float(np.min(eff[active] / alpha.alpha[active]))
    anchor_x[lam] = np.clip(2.0 ** beta_anchor, floors[lam], caps[lam])

    constraints, labels, condensations = [], [], []

    def add_ratio(numerator, denominator, label):
        mono = condense(denominator, anchor_x)
        constraints.append(numerator.over_monomial(mono))
        labels.append(label)
        condensations.append((denominator, mono))

    for k in range(kk):
        a_terms = [(sig2[k], {}), (rho2[k], {eta_of(k): 1})]
        a_terms += [(g[k, j], {eta_of(k): 1, p_of(j): 1})
                    for j in range(kk) if j != k]
        d_terms = a_terms + [(g[k, k], {eta_of(k): 1, p_of(k): 1})]
        if alpha.alpha[k] > 0:
            a_posy = posynomial(n, a_terms)
            num = a_posy.times(posynomial(n, [(1.0, {lam: alpha.alpha[k]})]))
            if mode == SECURE:
                eve_terms = [(1.0, {}), (lagged_q[k] / sbar, {p_of(k): 1})]
                num = num.times(posynomial(n, eve_terms))
            add_ratio(num, posynomial(n, d_terms), f"rate[{k}]")

        psi = cfg.eh_demands[k]
        received = [(g[k, j], {p_of(j): 1}) for j in range(kk)]
        if cfg.energy_model.value == "product":
            # psi <= (1 - eta)(T + rho^2)  <=>  psi + eta T + eta rho^2 <= T + rho^2
            if psi > 0:
                num = posynomial(n, [(psi, {}), (rho2[k], {eta_of(k): 1})]
                                 + [(c, {**pw, eta_of(k): 1}) for c, pw in received])
                den = posynomial(n, received + [(rho2[k], {})])
                add_ratio(num, den, f"eh[{k}]")
        else:
            # psi <= sig^2 + (1 - eta) T  <=>  (psi - sig^2) + eta T <= T;
            # vacuous whenever psi <= sig^2 because eta <= 1.
            if psi > sig2[k]:
                num = posynomial(n, [(psi - sig2[k], {})]
                                 + [(c, {**pw, eta_of(k): 1}) for c, pw in received])
                try:
                    den = posynomial(n, received)
                except NonPositiveTermError:
                    raise InfeasibleError(
                        f"user {k} demands {psi} but receives no power at all")
                add_ratio(num, den, f"eh[{k}]")

        constraints.append(posynomial(n, [(1.0 / pmax[k], {p_of(k): 1})]))
        labels.append(f"box:p[{k}]")
        constraints.append(posynomial(n, [(1.0, {eta_of(k): 1})]))
        labels.append(f"box:eta[{k}]")

    return GpInstance(num_users=kk, constraints=constraints, labels=labels,
                      anchor=anchor_x, floors=floors, caps=caps,
                      condensations=condensations, lagged_q=lagged_q,
                      lagged_matrices=lagged_matrices)


# ---------------------------------------------------------------------------
# Log-space solve
# ---------------------------------------------------------------------------

def _log_constraints(gp: GpInstance):
    mats = []
    for posy in gp.constraints:
        mats.append((posy.exponents, np.log(posy.coeffs)))
    return mats


def _g_and_grad(a, b, y):
    r = a @ y + b
    m = r.max()
    e = np.exp(r - m)
    s = e.sum()
    return float(m + np.log(s)), (e / s) @ a


def _max_violation(mats, y) -> float:
    return max(_g_and_grad(a, b, y)[0] for a, b in mats)


def _phase_one(mats, y0, bounds, maxiter):
    """Minimize the largest log-constraint value; feasible iff it reaches <= 0."""
    n = y0.size

    def fun(z):
        return z[-1]

    def jac(z):
        grad = np.zeros(n + 1)
        grad[-1] = 1.0
        return grad

    cons = []
    for a, b in mats:
        def f(z, a=a, b=b):
            return z[-1] - _g_and_grad(a, b, z[:-1])[0]

        def fj(z, a=a, b=b):
            _, grad = _g_and_grad(a, b, z[:-1])
            return np.concatenate([-grad, [1.0]])

        cons.append({"type": "ineq", "fun": f, "jac": fj})
    z0 = np.concatenate([y0, [_max_violation(mats, y0) + 0.1]])
    res = scipy.optimize.minimize(
        fun, z0, jac=jac, method="SLSQP", bounds=bounds + [(None, None)],
        constraints=cons, options={"maxiter": maxiter, "ftol": 1e-12})
    return res.x[:-1], float(res.x[-1])


def solve_gp(gp: GpInstance, tol: float = 1e-8,
             maxiter: int = 300) -> tuple:
    """Maximize lambda over the GP; returns (lambda, OperatingPoint).

    Solved as a smooth convex program in log variables.  Raises
    InfeasibleError when no point satisfies the constraints within ``tol``
    and NumericalFailureError when the optimizer cannot reach a feasible
    stationary point.
    """
    mats = _log_constraints(gp)
    n = gp.anchor.size
    bounds = [(lo, hi) for lo, hi in zip(np.log(gp.floors), np.log(gp.caps))]
    y0 = np.log(gp.anchor)

    if _max_violation(mats, y0) > tol:
        y0, violation = _phase_one(mats, y0, bounds, maxiter)
        y0 = np.clip(y0, np.log(gp.floors), np.log(gp.caps))
        if violation > tol:
            raise InfeasibleError(
                f"no feasible point; smallest attainable violation {violation:.3e}",
                violation=violation, point=np.exp(y0))

    def fun(y):
        return -y[0]

    grad0 = np.zeros(n)
    grad0[0] = -1.0

    cons = []
    for a, b in mats:
        def f(y, a=a, b=b):
            return -_g_and_grad(a, b, y)[0]

        def fj(y, a=a, b=b):
            return -_g_and_grad(a, b, y)[1]

        cons.append({"type": "ineq", "fun": f, "jac": fj})

    def _slsqp(start):
        return scipy.optimize.minimize(
            fun, start, jac=lambda y: grad0, method="SLSQP", bounds=bounds,
            constraints=cons, options={"maxiter": maxiter, "ftol": 1e-14})

    res = _slsqp(y0)
    y = res.x
    if not res.success and _max_violation(mats, y) <= tol:
        # Line-search stalls near the optimum are common; a warm restart is
        # cheap and usually finishes the job.
        res2 = _slsqp(y)
        if _max_violation(mats, res2.x) <= tol and res2.x[0] >= y[0]:
            y = res2.x
    if _max_violation(mats, y) > tol or y[0] < y0[0] - 1e-12:
        alt = _trust_region_solve(mats, y0, gp, maxiter)
        if (alt is not None and alt[0] >= y[0] - 1e-12
                and _max_violation(mats, alt) <= tol):
            y = alt
    if _max_violation(mats, y) > tol:
        raise NumericalFailureError(
            f"optimizer left constraints violated by {_max_violation(mats, y):.3e}")
    if y[0] < y0[0] - 1e-9:
        # Never regress below the feasible starting anchor.
        y = y0
    x = np.exp(np.clip(y, np.log(gp.floors), np.log(gp.caps)))
    kk = gp.num_users
    return float(x[0]), OperatingPoint(x[1:kk + 1], np.minimum(x[kk + 1:], 1.0))


def _trust_region_solve(mats, y0, gp, maxiter):
    n = y0.size

    def fun(y):
        return -y[0]

    grad0 = np.zeros(n)
    grad0[0] = -1.0

    def cfun(y):
        return np.array([_g_and_grad(a, b, y)[0] for a, b in mats])

    def cjac(y):
        return np.vstack([_g_and_grad(a, b, y)[1] for a, b in mats])

    nlc = scipy.optimize.NonlinearConstraint(cfun, -np.inf, 0.0, jac=cjac)
    lb = np.log(gp.floors)
    ub = np.log(gp.caps)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            res = scipy.optimize.minimize(
                fun, y0, jac=lambda y: grad0, method="trust-constr",
                bounds=scipy.optimize.Bounds(lb, ub), constraints=[nlc],
                options={"maxiter": 4 * maxiter, "gtol": 1e-12, "xtol": 1e-14})
    except Exception:
        return None
    return res.x if res.x is not None else None


# ---------------------------------------------------------------------------
# Outer condensation loop
# ---------------------------------------------------------------------------

@dataclass
class SolverOptions:
    eps_conv: float = 1e-6
    max_iters: int = 100
    floor_frac: float = 1e-6
    feas_tol: float = 1e-8
    reanchor_retries: int = 2


@dataclass
class SolveReport:
    """Outcome of one weighted max-min solve.

    ``lam`` is recomputed from the returned operating point through the exact
    rate formulas (clamped secrecy rates in secure mode), so log2(lam) equals
    the smallest weighted effective rate at the point.  ``lam_trace`` holds
    the raw per-iteration GP optima, which use lagged eavesdropper matrices.
    """

    lam: float
    op: OperatingPoint
    iterations: int
    lam_trace: list
    gaps: np.ndarray
    converged: bool
    clamped: bool
    non_monotone: bool
    mode: str
    alpha: Weights
    order: Optional[DecodingOrder]
    rates: np.ndarray

    @property
    def objective(self) -> float:
        """min_k R_eff_k / alpha_k at the returned point, i.e. log2(lam)."""
        return float(np.log2(self.lam))


def iterate(cfg: SystemConfig, alpha: Weights, order: Optional[DecodingOrder],
            mode: str, options: Optional[SolverOptions] = None) -> SolveReport:
    """Run the condensation loop for one weight vector.

    Anchored at full power with half splits; each iteration rebuilds the GP
    at the previous solution (which also refreshes the lagged eavesdropper
    matrices) until the GP optimum stops moving or the iteration budget is
    exhausted.
    """
    opt = options or SolverOptions()
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if order is None:
        order = DecodingOrder(tuple(range(cfg.num_users)))

    anchor = OperatingPoint(cfg.power_budget.copy(),
                            np.full(cfg.num_users, 0.5))
    prev_powers = cfg.power_budget.copy()
    trace = []
    converged = False
    gp = None
    point = anchor
    retries = opt.reanchor_retries

    it = 0
    while it < opt.max_iters:
        it += 1
        gp = build_gp(cfg, alpha, order, anchor, mode,
                      prev_powers=prev_powers, floor_frac=opt.floor_frac)
        try:
            lam_gp, point = solve_gp(gp, tol=opt.feas_tol)
        except InfeasibleError as exc:
            if retries > 0 and exc.point is not None:
                # The condensed program can be infeasible even when the true
                # one is not; re-anchor at the least-violating point and retry.
                retries -= 1
                it -= 1
                kk = cfg.num_users
                anchor = OperatingPoint(exc.point[1:kk + 1],
                                        np.minimum(exc.point[kk + 1:], 1.0))
                prev_powers = anchor.powers
                continue
            raise InfeasibleError(
                f"{mode} solve infeasible for alpha={alpha.alpha}: {exc}",
                violation=exc.violation, point=exc.point) from exc
        trace.append(lam_gp)
        if len(trace) >= 2 and abs(trace[-1] - trace[-2]) <= opt.eps_conv * max(1.0, trace[-1]):
            converged = True
            break
        anchor = point
        prev_powers = point.powers

    # Report with exact rates at the final point (eavesdropper matrices
    # rebuilt from the final powers, not the lagged ones).
    if mode == SECURE:
        corner = secrecy_corner(cfg, point, order)
        eff = corner.per_user
        clamped = bool(np.any(legitimate_rates(cfg, point)
                              - eve_rate_chain(cfg, point.powers, order) < 0))
    else:
        eff = legitimate_rates(cfg, point)
        clamped = False
    active = alpha.alpha > 0
    beta = float(np.min(eff[active] / alpha.alpha[active]))
    lam = 2.0 ** beta

    x_final = np.concatenate([[lam], point.powers, point.splits])
    x_final = np.clip(x_final, gp.floors, gp.caps)
    gaps = np.array([denom.value(x_final) - mono.value(x_final)
                     for denom, mono in gp.condensations])

    non_monotone = any(trace[i + 1] < trace[i] - opt.eps_conv * max(1.0, trace[i])
                       for i in range(len(trace) - 1))
    return SolveReport(lam=lam, op=point, iterations=len(trace), lam_trace=trace,
                       gaps=gaps, converged=converged, clamped=clamped,
                       non_monotone=non_monotone, mode=mode, alpha=alpha,
                       order=order if mode == SECURE else None, rates=eff)
