"""Closed-form generating functions, Laplace transforms, and finite-sum PMFs.

Generating functions are evaluated through ``log1p``-based powers so the
identities between neighbouring laws (d -> 0, theta -> 0, c -> 1) hold to
full precision.  The probability functions of the tempered discrete stable
and tempered discrete Linnik laws are the finite sums

    P(X_TDS = k) = exp(-sgn(a) b (1-(1-c)^a)) (-c)^k
                   sum_{m=0}^{k} (sgn(a) b)^m / m!  C_{a,m}(k)

    P(X_TDL = k) = (-c)^k sum_{m=0}^{k} binom(-1/d, m)
                   (-sgn(a) b d)^m / (1 + sgn(a) b d (1-(1-c)^a))^(m+1/d)
                   C_{a,m}(k)

Both are specializations of the same coefficient form with outer function
exp(x) resp. x^(-1/d); see :func:`general_pmf_coefficient_form`.  Every
term of the m-sum carries the same sign, so the sums themselves are
cancellation-free; :func:`build_pmf_table` additionally folds the damping
factor c^k and the m-weights into one convolution ladder so that whole
tables stay inside the normal floating-point range out to k of several
hundred (the raw coefficients overflow double precision for a < 0 around
k ~ 150 while c^k underflows, even though their products are harmless).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .coeffs import CoeffTable, _abs_binom_sequence, build_table
from .errors import (
    DomainError,
    NumericalInstability,
    UnknownLaw,
    UnsupportedOuterFunction,
)
from .params import (
    GammaParams,
    GdsSibuyaParams,
    LinnikParams,
    NegativeBinomialParams,
    PoissonParams,
    SibuyaParams,
    StableParams,
    TdlParams,
    TdsParams,
    TemperedLinnikParams,
    TemperedStableParams,
    sgn,
)

#: abort threshold for probabilities escaping [0, 1] before clamping
INSTABILITY_TOLERANCE = 1e-6

#: default table size for PMF evaluation (CLI exposes an override)
DEFAULT_KMAX = 60


def _check_s(s: float) -> None:
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"s must lie in [0, 1], got {s}")


def _pow_one_minus(x: float, a: float) -> float:
    """(1 - x)^a for x in [0, 1], accurate for x near 0 and 1.

    The x == 1 corner only arises with a > 0 (c = 1 requires a in (0, 1]).
    """
    if x >= 1.0:
        return 0.0
    return math.exp(a * math.log1p(-x))


# ---------------------------------------------------------------------------
# Probability generating functions


def tdl_pgf(p: TdlParams, s: float) -> float:
    """Tempered discrete Linnik p.g.f.

    g(s) = (1 + sgn(a) b d ((1-cs)^a - (1-c)^a))^(-1/d), d > 0.
    The d == 0 branch is the Poisson-Tweedie law; use :func:`tds_pgf`.
    """
    _check_s(s)
    if p.d == 0:
        raise DomainError("d == 0 is the Poisson-Tweedie branch; use tds_pgf")
    if p.a == 0:
        return 1.0
    delta = _pow_one_minus(p.c * s, p.a) - _pow_one_minus(p.c, p.a)
    return math.exp(-math.log1p(sgn(p.a) * p.b * p.d * delta) / p.d)


def tds_pgf(p: TdsParams, s: float) -> float:
    """Tempered discrete stable (Poisson-Tweedie) p.g.f.

    g(s) = exp(sgn(a) b ((1-c)^a - (1-cs)^a)).
    """
    _check_s(s)
    if p.a == 0:
        return 1.0
    delta = _pow_one_minus(p.c * s, p.a) - _pow_one_minus(p.c, p.a)
    return math.exp(-sgn(p.a) * p.b * delta)


def ds_pgf(p: StableParams, s: float) -> float:
    """Discrete stable p.g.f. exp(-lam (1-s)^gamma)."""
    _check_s(s)
    return math.exp(-p.lam * _pow_one_minus(s, p.gamma))


def dl_pgf(p: LinnikParams, s: float) -> float:
    """Discrete Linnik p.g.f. (1 + lam (1-s)^gamma / delta)^(-delta)."""
    _check_s(s)
    return math.exp(
        -p.delta * math.log1p(p.lam * _pow_one_minus(s, p.gamma) / p.delta)
    )


def sibuya_pgf(p: SibuyaParams, s: float) -> float:
    """Sibuya p.g.f. 1 - (1-s)^gamma."""
    _check_s(s)
    return 1.0 - _pow_one_minus(s, p.gamma)


def gds_pgf(p: GdsSibuyaParams, s: float) -> float:
    """Geometric down-weighting Sibuya p.g.f. 1 + (1-tau)^gamma - (1-tau s)^gamma."""
    _check_s(s)
    return 1.0 + _pow_one_minus(p.tau, p.gamma) - _pow_one_minus(p.tau * s, p.gamma)


def nb_pgf(p: NegativeBinomialParams, s: float) -> float:
    """Negative binomial p.g.f. ((1-pi) / (1-pi s))^delta."""
    _check_s(s)
    return math.exp(p.delta * (math.log1p(-p.pi) - math.log1p(-p.pi * s)))


def poisson_pgf(p: PoissonParams, s: float) -> float:
    _check_s(s)
    return math.exp(-p.lam * (1.0 - s))


_PGF_DISPATCH = {
    "tdl": tdl_pgf,
    "tds": tds_pgf,
    "ds": ds_pgf,
    "dl": dl_pgf,
    "sibuya": sibuya_pgf,
    "gds": gds_pgf,
    "nb": nb_pgf,
    "poisson": poisson_pgf,
}


def family_pgf(law: str, params, s: float) -> float:
    """Evaluate the p.g.f. of a named integer law at s in [0, 1]."""
    try:
        fn = _PGF_DISPATCH[law]
    except KeyError:
        raise UnknownLaw(f"no p.g.f. for law {law!r}") from None
    return fn(params, s)


# ---------------------------------------------------------------------------
# Laplace transforms (real argument t > 0 only)


def _check_t(t: float) -> None:
    if not t > 0:
        raise DomainError(f"t must be > 0, got {t}")


def ps_laplace(p: StableParams, t: float) -> float:
    """Positive stable Laplace transform exp(-lam t^gamma)."""
    _check_t(t)
    return math.exp(-p.lam * t**p.gamma)


def tps_laplace(p: TemperedStableParams, t: float) -> float:
    """Tweedie / tempered positive stable transform.

    L(t) = exp(sgn(gamma) lam (theta^gamma - (theta+t)^gamma)).
    """
    _check_t(t)
    if p.gamma == 0:
        return 1.0
    return math.exp(
        sgn(p.gamma) * p.lam * (p.theta**p.gamma - (p.theta + t) ** p.gamma)
    )


def pl_laplace(p: LinnikParams, t: float) -> float:
    """Positive Linnik transform (1 + lam t^gamma / delta)^(-delta)."""
    _check_t(t)
    return math.exp(-p.delta * math.log1p(p.lam * t**p.gamma / p.delta))


def tpl_laplace(p: TemperedLinnikParams, t: float) -> float:
    """Tempered positive Linnik transform.

    L(t) = (1 + sgn(gamma) lam ((theta+t)^gamma - theta^gamma) / delta)^(-delta).
    """
    _check_t(t)
    if p.gamma == 0:
        return 1.0
    inner = sgn(p.gamma) * p.lam * ((p.theta + t) ** p.gamma - p.theta**p.gamma)
    return math.exp(-p.delta * math.log1p(inner / p.delta))


def gamma_laplace(p: GammaParams, t: float) -> float:
    """Gamma transform (1 + scale*t)^(-shape)."""
    _check_t(t)
    return math.exp(-p.shape * math.log1p(p.scale * t))


_LAPLACE_DISPATCH = {
    "ps": ps_laplace,
    "tps": tps_laplace,
    "pl": pl_laplace,
    "tpl": tpl_laplace,
    "gamma": gamma_laplace,
}


def family_laplace(law: str, params, t: float) -> float:
    """Evaluate the Laplace transform of a named positive law at real t > 0."""
    try:
        fn = _LAPLACE_DISPATCH[law]
    except KeyError:
        raise UnknownLaw(f"no Laplace transform for law {law!r}") from None
    return fn(params, t)


# ---------------------------------------------------------------------------
# Finite-sum probability functions


@dataclass(frozen=True)
class PmfTable:
    """Probabilities p[0..kmax] of an integer law plus tail accounting.

    ``tail_mass`` is defined as 1 - sum(p), so the two always add to one
    by construction; a tail below -1e-9 would indicate a broken build and
    is rejected at construction time.
    """

    law: str
    params: object
    kmax: int
    p: np.ndarray
    tail_mass: float

    def __post_init__(self) -> None:
        self.p.setflags(write=False)

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.kmax + 1)


def _finalize_pmf(law: str, params, raw: np.ndarray) -> PmfTable:
    """Instability check, clamp to [0, 1], and tail-mass bookkeeping."""
    if not np.all(np.isfinite(raw)):
        raise NumericalInstability(f"{law} PMF produced non-finite values")
    low, high = raw.min(), raw.max()
    if low < -INSTABILITY_TOLERANCE or high > 1.0 + INSTABILITY_TOLERANCE:
        raise NumericalInstability(
            f"{law} PMF left [0, 1] by more than {INSTABILITY_TOLERANCE:g} "
            f"(min {low:.3g}, max {high:.3g}); reduce kmax or use the series oracle"
        )
    p = np.clip(raw, 0.0, 1.0)
    tail = 1.0 - p.sum()
    if tail < -1e-9:
        raise NumericalInstability(f"{law} PMF sums to {p.sum():.12f} > 1 + 1e-9")
    return PmfTable(law=law, params=params, kmax=len(p) - 1, p=p, tail_mass=tail)


def general_pmf_coefficient_form(
    outer: str,
    alpha: float,
    beta: float,
    gamma: float,
    phi_damp: float,
    k: int,
    *,
    power_exponent: float | None = None,
    table: CoeffTable | None = None,
) -> float:
    """P(X = k) for a law with p.g.f. phi(alpha + beta (1 - phi_damp*s)^gamma).

    The probability is the finite sum

        (-phi_damp)^k sum_{m=0}^{k} (-beta)^m / m! * phi^(m)(alpha+beta)
                      * C_{gamma,m}(k)

    with ``outer`` selecting phi: ``"exp"`` or ``"power"`` (x^power_exponent,
    the exponent passed separately).  Derivative factors are accumulated by
    term ratios, so no factorial or binomial overflows occur.
    """
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    if not 0.0 <= phi_damp <= 1.0:
        raise DomainError(f"phi_damp must lie in [0, 1], got {phi_damp}")
    if outer not in ("exp", "power"):
        raise UnsupportedOuterFunction(
            f"outer must be 'exp' or 'power', got {outer!r}"
        )
    if outer == "power" and power_exponent is None:
        raise UnsupportedOuterFunction("outer 'power' needs power_exponent")
    x = alpha + beta
    if outer == "power" and x <= 0:
        raise DomainError(f"power outer needs alpha + beta > 0, got {x}")
    if table is None:
        table = build_table(gamma, k)
    elif table.gamma != gamma or table.kmax < k:
        raise DomainError("coefficient table does not cover (gamma, k)")

    # term_m = (-beta)^m / m! * phi^(m)(x), advanced by its ratio
    term = math.exp(x) if outer == "exp" else x**power_exponent
    total = 0.0
    col = table.values[: k + 1, k]
    for m in range(k + 1):
        total += term * col[m]
        if outer == "exp":
            term *= -beta / (m + 1)
        else:
            term *= -beta * (power_exponent - m) / ((m + 1) * x)
    return (-phi_damp) ** k * total


def tdl_pmf(p: TdlParams, k: int, table: CoeffTable | None = None) -> float:
    """Tempered discrete Linnik probability P(X = k), d > 0 branch.

    Outer function x^(-1/d) with alpha = 1 - sgn(a) b d (1-c)^a and
    beta = sgn(a) b d.  Requires a coefficient table for gamma = a covering
    k (built on the fly when omitted).
    """
    if p.d == 0:
        raise DomainError("d == 0 is the Poisson-Tweedie branch; use tds_pmf")
    if p.is_degenerate:
        return 1.0 if k == 0 else 0.0
    s = sgn(p.a)
    omc = _pow_one_minus(p.c, p.a)
    val = general_pmf_coefficient_form(
        "power",
        alpha=1.0 - s * p.b * p.d * omc,
        beta=s * p.b * p.d,
        gamma=p.a,
        phi_damp=p.c,
        k=k,
        power_exponent=-1.0 / p.d,
        table=table,
    )
    return min(max(val, 0.0), 1.0)


def tds_pmf(p: TdsParams, k: int, table: CoeffTable | None = None) -> float:
    """Tempered discrete stable probability P(X = k).

    Outer function exp(x) with alpha = sgn(a) b (1-c)^a, beta = -sgn(a) b.
    """
    if p.is_degenerate:
        return 1.0 if k == 0 else 0.0
    s = sgn(p.a)
    omc = _pow_one_minus(p.c, p.a)
    val = general_pmf_coefficient_form(
        "exp",
        alpha=s * p.b * omc,
        beta=-s * p.b,
        gamma=p.a,
        phi_damp=p.c,
        k=k,
        table=table,
    )
    return min(max(val, 0.0), 1.0)


def _pmf_ladder(
    a: float, b: float, c: float, kmax: int, *, d: float | None
) -> np.ndarray:
    """All-positive evaluation of the finite-sum PMF for k = 0..kmax.

    Rewrites the m-sum as sum_m G_m W_m[k] where W_m is the m-th convolution
    power of |binom(a, j)| c^j (so the damping c^k is folded in) and the
    weights G_m > 0 absorb the outer-derivative factors:

        d > 0:  G_0 = x0^(-1/d),  G_m/G_{m-1} = (1/d + m - 1)/m * (b d / x0)
        d None (tempered discrete stable):
                G_0 = exp(-sgn(a) b h),  G_m/G_{m-1} = b/m

    with h = 1 - (1-c)^a and x0 = 1 + sgn(a) b d h.  Identical in exact
    arithmetic to the double sum; free of overflow and cancellation.
    """
    out = np.zeros(kmax + 1)
    if a == 0 or c == 0:
        out[0] = 1.0
        return out
    h = 1.0 - _pow_one_minus(c, a)
    s = sgn(a)
    r = _abs_binom_sequence(a, kmax, damp=c)
    if d is None:
        g0 = math.exp(-s * b * h)
    else:
        arg = s * b * d * h
        g0 = math.exp(-math.log1p(arg) / d)  # (1 + sgn(a) b d h)^(-1/d)
        x0 = 1.0 + arg
        y = b * d / x0
    cur = np.zeros(kmax + 1)
    cur[0] = g0
    out += cur
    for m in range(1, kmax + 1):
        ratio = b / m if d is None else (1.0 / d + m - 1.0) / m * y
        cur = ratio * np.convolve(cur, r)[: kmax + 1]
        out += cur
        if cur.max() < 1e-320:
            break
    return out


def build_pmf_table(p: Union[TdlParams, TdsParams], kmax: int) -> PmfTable:
    """Tabulate P(X = k) for k = 0..kmax with tail-mass accounting.

    Accepts tempered discrete Linnik parameters (the d == 0 record routes
    to the Poisson-Tweedie sum) or tempered discrete stable parameters.
    Raises :class:`NumericalInstability` if any pre-clamp probability
    leaves [0, 1] by more than 1e-6.
    """
    if kmax < 0:
        raise DomainError(f"kmax must be >= 0, got {kmax}")
    if isinstance(p, TdlParams):
        if p.d == 0:
            raw = _pmf_ladder(p.a, p.b, p.c, kmax, d=None)
            return _finalize_pmf("tds", p.tds(), raw)
        raw = _pmf_ladder(p.a, p.b, p.c, kmax, d=p.d)
        return _finalize_pmf("tdl", p, raw)
    if isinstance(p, TdsParams):
        raw = _pmf_ladder(p.a, p.b, p.c, kmax, d=None)
        return _finalize_pmf("tds", p, raw)
    raise DomainError(f"expected TdlParams or TdsParams, got {type(p).__name__}")
