"""Random variate generation for every law in the hierarchy.

All draws come from explicit :class:`RngStream` objects (PCG64 keyed by a
64-bit seed plus a stream id), so results are reproducible bit-for-bit
within one build.  Streams are single-owner mutable state: send them
between threads, never share one concurrently; parallel work should use
``stream.split(i)`` to derive independently seeded streams.

Generation routes follow the mixture/compound identities of the family:

* positive stable: Kanter's ratio-of-sines representation driven by one
  uniform and one exponential variate, scaled by lam^(1/gamma),
* tempered positive stable: for gamma < 0 the compound Poisson-of-Gammas
  Gamma(1/theta, -gamma * Poisson(lam theta^gamma)) (an atom at zero with
  mass exp(-lam theta^gamma)); for gamma in (0, 1] exponential rejection
  of stable proposals with acceptance probability exp(-theta * X),
* tempered discrete stable: Poisson(TPS(a, b c^a, 1/c - 1)),
* tempered discrete Linnik, four interchangeable routes:
    a  (any a)       Poisson(TPS(a, Gamma(b d c^a, 1/d), 1/c - 1))
    b  (a < 0)       Poisson(Gamma(c/(1-c), -a Poisson(Gamma(b d (1-c)^a, 1/d))))
    c  (a < 0)       NB(c, -a NB(q/(1+q), 1/d)) with q = b d (1-c)^a
    d  (a in (0,1])  sum of NB(b d/(1+b d), 1/d) copies of GDS-Sibuya(a, c)

Poisson, Gamma, negative binomial, and binomial primitives are delegated
to numpy's Generator; their correctness is enforced by the goodness-of-fit
suite rather than by pinning a particular classical algorithm.  The Sibuya
law is drawn exactly in O(1) per variate through its beta-mixed geometric
representation: P(X > k | W) = W^k with W ~ Beta(1-gamma, gamma), so
X = ceil(log(U) / log(W)).  (Sequential inversion of the pmf recurrence
p_{k+1} = p_k (k-gamma)/(k+1), used for tabulation, has infinite expected
cost per draw because the law has no mean.)  Draws beyond the 1e9 support
cap raise :class:`HeavyTailOverflow`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    HeavyTailOverflow,
    IncompatibleRoute,
    RejectionBudgetExceeded,
    UnknownLaw,
)
from .params import (
    GdsSibuyaParams,
    NegativeBinomialParams,
    SibuyaParams,
    StableParams,
    TdlParams,
    TdsParams,
    TemperedStableParams,
)

#: retry cap for the exponential-rejection tempering step
DEFAULT_MAX_TRIES = 10**6

#: support cap for heavy-tailed integer draws
SIBUYA_SUPPORT_CAP = 10**9

#: numpy's Poisson generator rejects intensities above roughly 2^63 * 1e-1;
#: anything near that is a heavy-tail blowup we surface as a typed error
_POISSON_LAM_CAP = 9.0e18

TDL_ROUTES = ("a", "b", "c", "d")


class RngStream:
    """Deterministic pseudo-random stream keyed by (seed, stream).

    Same key, same build: identical draw sequence.  ``split(i)`` derives
    the i-th parallel stream of the same seed.
    """

    __slots__ = ("seed", "stream", "_gen")

    def __init__(self, seed: int, stream: int = 0) -> None:
        self.seed = int(seed)
        self.stream = int(stream)
        self._gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence((self.seed, self.stream)))
        )

    def split(self, stream: int) -> "RngStream":
        return RngStream(self.seed, stream)

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream={self.stream})"


@dataclass(frozen=True)
class SampleBatch:
    """A batch of draws with the law descriptor and seed that produced it."""

    law: str
    params: object
    n: int
    values: np.ndarray
    seed: int
    stream: int = 0

    def __post_init__(self) -> None:
        if len(self.values) != self.n:
            raise DomainError("values length does not match n")
        self.values.setflags(write=False)


# ---------------------------------------------------------------------------
# library-grade primitives


def draw_poisson(r: RngStream, lam: float) -> int:
    """One Poisson(lam) variate; lam = 0 gives 0."""
    if not (math.isfinite(lam) and lam >= 0):
        raise DomainError(f"lam must be finite and >= 0, got {lam}")
    return int(r.generator.poisson(lam))


def draw_gamma(r: RngStream, scale: float, shape: float) -> float:
    """One Gamma variate with mean scale*shape; shape = 0 gives 0.

    Shape zero arises as the empty convolution in the compound
    Poisson-of-Gammas construction, hence is allowed here.
    """
    if not (math.isfinite(scale) and scale > 0):
        raise DomainError(f"scale must be > 0, got {scale}")
    if not (math.isfinite(shape) and shape >= 0):
        raise DomainError(f"shape must be >= 0, got {shape}")
    if shape == 0:
        return 0.0
    return float(r.generator.gamma(shape=shape, scale=scale))


def binomial_thin(r: RngStream, alpha: float, x: int) -> int:
    """Binomial thinning: sum of x Bernoulli(alpha) marks."""
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
    if x < 0:
        raise DomainError(f"x must be >= 0, got {x}")
    return int(r.generator.binomial(x, alpha))


def _nb_vec(gen: np.random.Generator, pi, delta, n: int | None = None) -> np.ndarray:
    """Negative binomial NB(pi, delta) draws; numpy's p is the 1-pi convention."""
    return gen.negative_binomial(delta, 1.0 - np.asarray(pi), size=n)


def draw_negative_binomial(r: RngStream, p: NegativeBinomialParams) -> int:
    return int(_nb_vec(r.generator, p.pi, p.delta))


# ---------------------------------------------------------------------------
# Sibuya and its geometric down-weighting


def _sibuya_vec(gen: np.random.Generator, gamma: float, n: int) -> np.ndarray:
    if gamma == 1.0:
        return np.ones(n, dtype=np.int64)
    w = gen.beta(1.0 - gamma, gamma, size=n)
    u = 1.0 - gen.random(n)  # in (0, 1]
    # clip away the measure-zero fp endpoints of W before taking logs
    w = np.clip(w, 5e-324, np.nextafter(1.0, 0.0))
    x = np.ceil(np.log(u) / np.log(w))
    x = np.maximum(x, 1.0)
    if np.any(x > SIBUYA_SUPPORT_CAP):
        raise HeavyTailOverflow(
            f"Sibuya draw exceeded the support cap {SIBUYA_SUPPORT_CAP:g}"
        )
    return x.astype(np.int64)


def draw_sibuya(r: RngStream, gamma: float) -> int:
    """One Sibuya(gamma) variate on {1, 2, ...}; gamma = 1 is the constant 1."""
    SibuyaParams(gamma)  # domain check
    return int(_sibuya_vec(r.generator, gamma, 1)[0])


def _gds_pmf_cdf(gamma: float, tau: float, cap: int = 10**7) -> np.ndarray:
    """CDF table of the GDS-Sibuya law, extended until the tail is below 1e-17.

    P(0) = (1-tau)^gamma and P(k) = tau^k * SibuyaPmf(gamma, k) for k >= 1,
    by the pmf recurrence.  tau < 1 makes the tail geometric, so the table
    is short; tau = 1 must use the exact Sibuya sampler instead.
    """
    probs = [math.exp(gamma * math.log1p(-tau))]
    pk = gamma * tau  # P(1)
    k = 1
    while True:
        probs.append(pk)
        # p_{j+1} <= tau * p_j, so the remaining tail is below pk*tau/(1-tau);
        # a subtractive running survival would stall on rounding noise here
        tail_bound = pk * tau / (1.0 - tau)
        pk *= tau * (k - gamma) / (k + 1)
        k += 1
        if tail_bound < 1e-17:
            break
        if k > cap:
            raise HeavyTailOverflow(
                f"GDS-Sibuya inversion table exceeded {cap:g} entries "
                f"(tau = {tau} too close to 1)"
            )
    return np.cumsum(probs)


def _gds_vec(gen: np.random.Generator, gamma: float, tau: float, n: int) -> np.ndarray:
    if tau == 1.0:
        return _sibuya_vec(gen, gamma, n)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    cdf = _gds_pmf_cdf(gamma, tau)
    u = gen.random(n)
    return np.searchsorted(cdf, u, side="right").astype(np.int64)


def draw_gds_sibuya(r: RngStream, gamma: float, tau: float) -> int:
    """One geometric down-weighting Sibuya variate on {0, 1, ...}.

    Sequential inversion against the damped pmf recurrence; tau = 1
    reduces to the plain Sibuya law (whose P(0) is zero).
    """
    GdsSibuyaParams(gamma, tau)  # domain check
    return int(_gds_vec(r.generator, gamma, tau, 1)[0])


# ---------------------------------------------------------------------------
# positive stable and its tempering


def _kanter_vec(gen: np.random.Generator, gamma: float, lam, n: int) -> np.ndarray:
    """PS(gamma, lam) draws via Kanter's representation, gamma in (0, 1).

    X = lam^(1/gamma) * (A(U)/E)^((1-gamma)/gamma) with
    A(u) = [sin(gamma pi u)^gamma sin((1-gamma) pi u)^(1-gamma)
            / sin(pi u)]^(1/(1-gamma)),
    evaluated in log space; u is kept inside (0, pi] so the sines never
    vanish exactly.  lam may be an array for mixture draws.
    """
    u = (1.0 - gen.random(n)) * np.pi
    e = gen.standard_exponential(n)
    bracket = (
        gamma * np.log(np.sin(gamma * u))
        + (1.0 - gamma) * np.log(np.sin((1.0 - gamma) * u))
        - np.log(np.sin(u))
    )
    x = np.exp(bracket / gamma - (1.0 - gamma) / gamma * np.log(e))
    return np.asarray(lam) ** (1.0 / gamma) * x


def _ps_vec(gen: np.random.Generator, gamma: float, lam, n: int) -> np.ndarray:
    if gamma == 1.0:
        # Laplace transform exp(-lam t): point mass at lam
        return np.broadcast_to(np.asarray(lam, dtype=float), (n,)).copy()
    return _kanter_vec(gen, gamma, lam, n)


def draw_positive_stable(r: RngStream, p: StableParams) -> float:
    """One positive stable variate with Laplace transform exp(-lam t^gamma)."""
    return float(_ps_vec(r.generator, p.gamma, p.lam, 1)[0])


def _tps_vec(
    gen: np.random.Generator,
    gamma: float,
    lam,
    theta: float,
    n: int,
    max_tries: int = DEFAULT_MAX_TRIES,
) -> np.ndarray:
    """Tempered positive stable draws; lam may be an array (mixture scale)."""
    lam = np.broadcast_to(np.asarray(lam, dtype=float), (n,))
    if gamma == 0.0:
        return np.zeros(n)
    if gamma < 0.0:
        counts = gen.poisson(lam * theta**gamma)
        return gen.gamma(shape=-gamma * counts, scale=1.0 / theta)
    if theta == 0.0 or gamma == 1.0:
        return _ps_vec(gen, gamma, lam, n)
    out = np.empty(n)
    active = np.flatnonzero(lam > 0)
    out[lam == 0] = 0.0
    tries = 0
    while active.size:
        tries += 1
        if tries > max_tries:
            raise RejectionBudgetExceeded(
                f"tempering rejection exceeded {max_tries} tries per draw "
                f"(acceptance rate exp(-lam theta^gamma) too small)"
            )
        x = _kanter_vec(gen, gamma, lam[active], active.size)
        accept = gen.random(active.size) <= np.exp(-theta * x)
        out[active[accept]] = x[accept]
        active = active[~accept]
    return out


def draw_tempered_positive_stable(
    r: RngStream, p: TemperedStableParams, max_tries: int = DEFAULT_MAX_TRIES
) -> float:
    """One Tweedie / tempered positive stable variate.

    gamma < 0 uses the exact compound Poisson-of-Gammas construction
    (including the atom at zero with mass exp(-lam theta^gamma)); gamma in
    (0, 1] uses exponential rejection of Kanter proposals, aborting with
    :class:`RejectionBudgetExceeded` after ``max_tries`` rounds.
    """
    return float(_tps_vec(r.generator, p.gamma, p.lam, p.theta, 1, max_tries)[0])


# ---------------------------------------------------------------------------
# the discrete hierarchy


def _poisson_intensity_guard(t: np.ndarray) -> np.ndarray:
    if np.any(t > _POISSON_LAM_CAP):
        raise HeavyTailOverflow(
            "Poisson mixing intensity exceeded the generator cap "
            f"{_POISSON_LAM_CAP:g} (heavy-tailed mixture draw)"
        )
    return t


def _tds_vec(
    gen: np.random.Generator,
    p: TdsParams,
    n: int,
    max_tries: int = DEFAULT_MAX_TRIES,
) -> np.ndarray:
    """Tempered discrete stable via Poisson(TPS(a, b c^a, 1/c - 1))."""
    if p.is_degenerate:
        return np.zeros(n, dtype=np.int64)
    theta = 1.0 / p.c - 1.0
    t = _tps_vec(gen, p.a, p.b * p.c**p.a, theta, n, max_tries)
    return gen.poisson(_poisson_intensity_guard(t))


def _tdl_route_a(gen, p: TdlParams, n, max_tries) -> np.ndarray:
    v = gen.gamma(shape=1.0 / p.d, scale=p.b * p.d * p.c**p.a, size=n)
    theta = 1.0 / p.c - 1.0
    t = _tps_vec(gen, p.a, v, theta, n, max_tries)
    return gen.poisson(_poisson_intensity_guard(t))


def _tdl_route_b(gen, p: TdlParams, n, max_tries) -> np.ndarray:
    omc_a = (1.0 - p.c) ** p.a
    g1 = gen.gamma(shape=1.0 / p.d, scale=p.b * p.d * omc_a, size=n)
    n1 = gen.poisson(g1)
    g2 = gen.gamma(shape=-p.a * n1, scale=p.c / (1.0 - p.c))
    return gen.poisson(_poisson_intensity_guard(g2))


def _tdl_route_c(gen, p: TdlParams, n, max_tries) -> np.ndarray:
    q = p.b * p.d * (1.0 - p.c) ** p.a
    z = _nb_vec(gen, q / (1.0 + q), 1.0 / p.d, n)
    out = np.zeros(n, dtype=np.int64)
    nz = z > 0
    if np.any(nz):
        out[nz] = _nb_vec(gen, p.c, -p.a * z[nz])
    return out


def _tdl_route_d(gen, p: TdlParams, n, max_tries) -> np.ndarray:
    bd = p.b * p.d
    z = _nb_vec(gen, bd / (1.0 + bd), 1.0 / p.d, n)
    total = int(z.sum())
    w = _gds_vec(gen, p.a, p.c, total)
    csum = np.concatenate(([0], np.cumsum(w)))
    ends = np.cumsum(z)
    return (csum[ends] - csum[ends - z]).astype(np.int64)


_TDL_ROUTE_FNS = {
    "a": _tdl_route_a,
    "b": _tdl_route_b,
    "c": _tdl_route_c,
    "d": _tdl_route_d,
}


def _tdl_vec(
    gen: np.random.Generator,
    p: TdlParams,
    n: int,
    route: str = "a",
    max_tries: int = DEFAULT_MAX_TRIES,
) -> np.ndarray:
    if route not in _TDL_ROUTE_FNS:
        raise IncompatibleRoute(f"route must be one of {TDL_ROUTES}, got {route!r}")
    if p.is_degenerate:
        # a point mass at zero, whatever the requested route
        return np.zeros(n, dtype=np.int64)
    if route in ("b", "c") and p.a >= 0:
        raise IncompatibleRoute(f"route {route!r} requires a < 0, got a = {p.a}")
    if route == "d" and not 0.0 < p.a <= 1.0:
        raise IncompatibleRoute(f"route 'd' requires a in (0, 1], got a = {p.a}")
    if p.d == 0:
        return _tds_vec(gen, p.tds(), n, max_tries)
    return _TDL_ROUTE_FNS[route](gen, p, n, max_tries)


def draw_tdl(
    r: RngStream,
    p: TdlParams,
    route: str = "a",
    max_tries: int = DEFAULT_MAX_TRIES,
) -> int:
    """One tempered discrete Linnik variate via the chosen identity.

    Routes "b"/"c" need a < 0, route "d" needs a in (0, 1]; route "a"
    applies everywhere.  All routes draw from the same distribution.
    The d == 0 record dispatches to the tempered discrete stable sampler
    regardless of route.
    """
    return int(_tdl_vec(r.generator, p, 1, route, max_tries)[0])


def draw_tds(
    r: RngStream, p: TdsParams, max_tries: int = DEFAULT_MAX_TRIES
) -> int:
    """One tempered discrete stable (Poisson-Tweedie) variate."""
    return int(_tds_vec(r.generator, p, 1, max_tries)[0])


# ---------------------------------------------------------------------------
# batch front end


def _sample_law(
    gen: np.random.Generator,
    law: str,
    params,
    n: int,
    route: str,
    max_tries: int,
) -> np.ndarray:
    if law == "tdl":
        return _tdl_vec(gen, params, n, route, max_tries)
    if law == "tds":
        return _tds_vec(gen, params, n, max_tries)
    if law == "ds":
        t = _ps_vec(gen, params.gamma, params.lam, n)
        return gen.poisson(_poisson_intensity_guard(t))
    if law == "dl":
        v = gen.gamma(shape=params.delta, scale=params.lam / params.delta, size=n)
        t = _ps_vec(gen, params.gamma, v, n)
        return gen.poisson(_poisson_intensity_guard(t))
    if law == "ps":
        return _ps_vec(gen, params.gamma, params.lam, n)
    if law == "tps":
        return _tps_vec(gen, params.gamma, params.lam, params.theta, n, max_tries)
    if law == "pl":
        v = gen.gamma(shape=params.delta, scale=params.lam / params.delta, size=n)
        return _ps_vec(gen, params.gamma, v, n)
    if law == "tpl":
        v = gen.gamma(shape=params.delta, scale=params.lam / params.delta, size=n)
        return _tps_vec(gen, params.gamma, v, params.theta, n, max_tries)
    if law == "nb":
        return _nb_vec(gen, params.pi, params.delta, n)
    if law == "sibuya":
        return _sibuya_vec(gen, params.gamma, n)
    if law == "gds":
        return _gds_vec(gen, params.gamma, params.tau, n)
    if law == "poisson":
        return gen.poisson(params.lam, size=n)
    if law == "gamma":
        return gen.gamma(shape=params.shape, scale=params.scale, size=n)
    raise UnknownLaw(f"no sampler for law {law!r}")


def sample_batch(
    law: str,
    params,
    n: int,
    seed: int,
    stream: int = 0,
    route: str = "a",
    max_tries: int = DEFAULT_MAX_TRIES,
) -> SampleBatch:
    """Draw n variates of a named law from a fresh (seed, stream) stream."""
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    r = RngStream(seed, stream)
    values = _sample_law(r.generator, law, params, n, route, max_tries)
    return SampleBatch(
        law=law, params=params, n=n, values=values, seed=seed, stream=stream
    )
