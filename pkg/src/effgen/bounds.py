"""Effective constants, each returned with a replayable derivation trace."""

from __future__ import annotations

from fractions import Fraction

from .basket import xi_bound
from .lattice import as_fraction
from .trace import BoundTrace, TraceBuilder

NON_EFFECTIVE = "non-effective branch exists: the non-big (fibration) case has no explicit constant"


def kollar_q(n: int) -> BoundTrace:
    """Multiplier making ``|q a (K+B)|`` base point free in dimension ``n``."""
    if n < 1:
        raise ValueError("n >= 1")
    t = TraceBuilder(n=n)
    t.step("q", "4 * factorial(n + 2) * (n + 1)", "effective-bpf",
           "q = 4(n+2)!(n+1)")
    return t.build()


def brieskorn_r(k: int, epsilon) -> BoundTrace:
    """Bound on the local group order of a klt surface germ whose minimal
    resolution has ``k`` curves, all with discrepancy ``>= -1 + epsilon``."""
    epsilon = as_fraction(epsilon)
    if k < 1 or not 0 < epsilon <= 1:
        raise ValueError("need k >= 1 and 0 < epsilon <= 1")
    t = TraceBuilder(k=k, epsilon=epsilon)
    t.step("r", "120 * k ** 2 / epsilon ** 3", "klt-surface-index",
           "|G| <= r = 120 k^2 / eps^3")
    t.step("r_ceil", "ceil(r)", "klt-surface-index", "rD Cartier for every Weil D",
           "integer order bound")
    return t.build()


def surface_m(a: int, p: int) -> BoundTrace:
    """Multiple ``m(a, p)`` with ``R(X, m(K+B))`` generated in degree 4 on a
    log smooth surface pair with ``p`` boundary components and ``aB`` Cartier."""
    if a < 1 or p < 1:
        raise ValueError("a, p >= 1")
    t = TraceBuilder(a=a, p=p)
    t.step("epsilon", "1 / a", "surface-ld", "a(Gamma, S) >= -1 + 1/a")
    t.step("k", "p", "minimal-resolution-factorisation",
           "h contracts only components of g_*B", "k <= p")
    t.step("r", "ceil(120 * k ** 2 / epsilon ** 3)", "klt-surface-index",
           "r = 120 k^2 / eps^3")
    t.step("cartier", "a * r", "klt-surface-index", "ar(K_S + B_S) Cartier")
    t.step("q2", "4 * factorial(2 + 2) * (2 + 1)", "effective-bpf", "q = 4(n+2)!(n+1), n = 2")
    t.step("m", "q2 * cartier", "surface-degree-4",
           "R(X, q(K+B)) generated in degree 4", "big case")
    return t.build(flags=(NON_EFFECTIVE,))


def cartier_index_bound(rho: int) -> BoundTrace:
    """Global Cartier index of Weil divisors on the minimal model of a smooth
    threefold of Picard number ``rho``: every local index is at most
    ``Xi <= 2 rho``, so ``lcm(1..2 rho)`` works."""
    xb = xi_bound(rho)
    t = TraceBuilder(rho=rho)
    for s in xb.steps:
        t.step(s.name, s.formula, s.statement, s.anchor, s.note)
    t.step("r", "lcm_range(xi)", "cartier-index", "local index <= Xi(Y) <= 2 rho(X)",
           "derived composition: lcm of all admissible local indices")
    return t.build()


def threefold_q(rho: int) -> BoundTrace:
    """``q(rho)`` with ``R(X, q a (K+B))`` generated in degree 5."""
    cib = cartier_index_bound(rho)
    t = TraceBuilder(rho=rho)
    for s in cib.steps:
        t.step(s.name, s.formula, s.statement, s.anchor, s.note)
    t.step("q3", "4 * factorial(3 + 2) * (3 + 1)", "effective-bpf", "q = 4(n+2)!(n+1), n = 3")
    t.step("q", "q3 * r", "threefold-degree-5", "R(X, qa(K+B)) generated in degree 5",
           "q = q' r")
    return t.build()


def corollary_m(rho: int, a: int = 1, reading: str = "safe") -> BoundTrace:
    """Multiple ``m`` with stable base locus of ``K_X`` equal to ``Bs|m K_X|``.

    The two readings differ in whether ``a`` enters the base-point-free
    multiplier itself: ``outer`` gives ``5! q a``, ``inner`` gives
    ``5! q a^2``.  ``safe`` (default) takes the larger.
    """
    if a < 1:
        raise ValueError("a >= 1")
    tq = threefold_q(rho)
    t = TraceBuilder(rho=rho, a=a)
    for s in tq.steps:
        t.step(s.name, s.formula, s.statement, s.anchor, s.note)
    t.step("m_outer", "factorial(5) * q * a", "stable-base-locus", "q = m!, m = 5")
    t.step("m_inner", "factorial(5) * q * a * a", "stable-base-locus", "q = m!, m = 5",
           "bpf multiplier applied to the Cartier multiple ra")
    formula = {"outer": "m_outer", "inner": "m_inner", "safe": "max(m_outer, m_inner)"}
    if reading not in formula:
        raise ValueError(f"unknown reading {reading!r}")
    t.step("m", formula[reading], "threefold-stable-base-locus",
           "stable base locus of K_X = Bs|mK_X|", f"reading: {reading}")
    env = t.env
    return t.build(alternatives={"outer": env["m_outer"], "inner": env["m_inner"]})


CALCULATORS = {
    "kollar": kollar_q,
    "brieskorn": brieskorn_r,
    "surface-m": surface_m,
    "cartier-index": cartier_index_bound,
    "threefold-q": threefold_q,
    "corollary-m": corollary_m,
    "xi": xi_bound,
}
