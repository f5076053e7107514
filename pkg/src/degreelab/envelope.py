"""Exact smallest log-concave majorants of finite rational sequences.

The envelope of points (x_i, v_i) is the upper convex hull of (x_i, log v_i)
with geometric interpolation between breakpoints.  All hull decisions reduce
to comparisons of products of rational powers, settled by a float prefilter
and, whenever the float margin is small, an exact big-integer power test, so
near-ties are never misclassified.

Values between breakpoints are generally irrational; envelope_eval returns a
handle supporting exact comparison against rationals and other handles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ConcavityViolation,
    DuplicateAbscissa,
    LengthMismatch,
    NegativeValue,
    OutOfDomain,
)

FLOAT_MARGIN = 1e-6


@dataclass(frozen=True)
class PowerProduct:
    """Exact non-negative value coeff * prod(base_i ** exp_i), bases > 0."""

    coeff: Fraction
    factors: tuple   # ((base, exp), ...) with Fraction entries

    @classmethod
    def from_rational(cls, c):
        c = Fraction(c)
        if c < 0:
            raise NegativeValue(f"power products are non-negative, got {c}")
        return cls(coeff=c, factors=())

    def is_zero(self):
        return self.coeff == 0

    def log(self):
        if self.coeff == 0:
            return -math.inf
        acc = math.log(self.coeff)
        for base, exp in self.factors:
            acc += float(exp) * math.log(base)
        return acc

    def to_float(self):
        lg = self.log()
        return 0.0 if lg == -math.inf else math.exp(lg)

    def as_rational(self):
        """Exact Fraction when every exponent is integral, else None."""
        if self.coeff == 0:
            return Fraction(0)
        acc = self.coeff
        for base, exp in self.factors:
            if exp.denominator != 1:
                return None
            acc *= Fraction(base) ** int(exp)
        return acc

    def compare(self, other):
        """-1, 0, 1 against a rational or another handle, exactly."""
        if not isinstance(other, PowerProduct):
            other = PowerProduct.from_rational(other)
        if self.coeff == 0 or other.coeff == 0:
            return (self.coeff > 0) - (other.coeff > 0)
        la_, lb = self.log(), other.log()
        margin = abs(la_ - lb)
        if margin > FLOAT_MARGIN * max(1.0, abs(la_), abs(lb)):
            return -1 if la_ < lb else 1
        d = 1
        for _, exp in self.factors + other.factors:
            d = d * exp.denominator // math.gcd(d, exp.denominator)
        lhs = self.coeff ** d
        for base, exp in self.factors:
            lhs *= Fraction(base) ** int(exp * d)
        rhs = other.coeff ** d
        for base, exp in other.factors:
            rhs *= Fraction(base) ** int(exp * d)
        return (lhs > rhs) - (lhs < rhs)

    def __eq__(self, other):
        if not isinstance(other, (PowerProduct, Fraction, int)):
            return NotImplemented
        return self.compare(other) == 0

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __hash__(self):
        return hash((self.coeff, self.factors))


def _as_handle(value):
    return value if isinstance(value, PowerProduct) else PowerProduct.from_rational(value)


def value_compare(a, b):
    return _as_handle(a).compare(b)


def _chord_dominates(p, q, r, strict=False):
    """Is the middle point q on-or-below (strictly below) the chord p..r in
    log coordinates?  Equivalent power test:
        v_q^(x_r-x_p)  <=  v_p^(x_r-x_q) * v_r^(x_q-x_p).
    """
    (xp, vp), (xq, vq), (xr, vr) = p, q, r
    d = 1
    for span in (xr - xp, xr - xq, xq - xp):
        d = d * span.denominator // math.gcd(d, span.denominator)
    e_pr, e_qr, e_pq = int((xr - xp) * d), int((xr - xq) * d), int((xq - xp) * d)
    log_lhs = e_pr * math.log(vq)
    log_rhs = e_qr * math.log(vp) + e_pq * math.log(vr)
    margin = abs(log_lhs - log_rhs)
    if margin > FLOAT_MARGIN * max(1.0, abs(log_lhs), abs(log_rhs)):
        return log_lhs < log_rhs
    lhs = Fraction(vq) ** e_pr
    rhs = Fraction(vp) ** e_qr * Fraction(vr) ** e_pq
    return lhs < rhs if strict else lhs <= rhs


@dataclass(frozen=True)
class LogConcaveEnvelope:
    breakpoints: tuple    # ((x, v), ...) strictly increasing x, v > 0
    domain: tuple         # (lo, hi)

    def __post_init__(self):
        lo, hi = self.domain
        xs = [x for x, _ in self.breakpoints]
        if any(x2 <= x1 for x1, x2 in zip(xs, xs[1:])):
            raise DuplicateAbscissa("breakpoints must have strictly increasing x")
        if xs and (xs[0] < lo or xs[-1] > hi):
            raise OutOfDomain("breakpoints outside the domain")
        if any(v <= 0 for _, v in self.breakpoints):
            raise NegativeValue("breakpoint values must be positive")
        for p, q, r in zip(self.breakpoints, self.breakpoints[1:], self.breakpoints[2:]):
            if _chord_dominates(p, q, r):
                raise ConcavityViolation(
                    f"log-space slopes not strictly decreasing at x={q[0]}")

    def is_zero(self):
        return not self.breakpoints

    def evaluate(self, x):
        """Exact value at x: a Fraction at breakpoints and outside the hull
        span, a PowerProduct handle between breakpoints."""
        x = Fraction(x)
        lo, hi = self.domain
        if x < lo or x > hi:
            raise OutOfDomain(f"{x} outside domain [{lo}, {hi}]")
        if not self.breakpoints:
            return Fraction(0)
        if x < self.breakpoints[0][0] or x > self.breakpoints[-1][0]:
            return Fraction(0)
        lo_i, hi_i = 0, len(self.breakpoints) - 1
        while lo_i < hi_i:
            mid = (lo_i + hi_i + 1) // 2
            if self.breakpoints[mid][0] <= x:
                lo_i = mid
            else:
                hi_i = mid - 1
        xp, vp = self.breakpoints[lo_i]
        if xp == x:
            return vp
        xq, vq = self.breakpoints[lo_i + 1]
        span = xq - xp
        handle = PowerProduct(coeff=Fraction(1),
                              factors=((Fraction(vp), (xq - x) / span),
                                       (Fraction(vq), (x - xp) / span)))
        exact = handle.as_rational()
        return exact if exact is not None else handle


def upper_log_envelope(points, domain=None):
    """Minimal log-concave majorant of the points (monotone chain on logs).

    Points with value 0 are absent from the hull; an all-zero input yields
    the identically-zero envelope.
    """
    pts = [(Fraction(x), Fraction(v)) for x, v in points]
    pts.sort(key=lambda p: p[0])
    for (x1, _), (x2, _) in zip(pts, pts[1:]):
        if x1 == x2:
            raise DuplicateAbscissa(f"duplicate abscissa {x1}")
    for _, v in pts:
        if v < 0:
            raise NegativeValue(f"negative input value {v}")
    if domain is None:
        if not pts:
            raise LengthMismatch("no points and no domain given")
        domain = (pts[0][0], pts[-1][0])
    domain = (Fraction(domain[0]), Fraction(domain[1]))
    positive = [p for p in pts if p[1] > 0]
    hull = []
    for p in positive:
        while len(hull) >= 2 and _chord_dominates(hull[-2], hull[-1], p):
            hull.pop()
        hull.append(p)
    return LogConcaveEnvelope(breakpoints=tuple(hull), domain=domain)


def envelope_eval(env, x):
    """Value handle of the envelope at a rational abscissa."""
    return env.evaluate(x)


def envelopes_equal(env_a, env_b):
    """Exact piecewise equality, decided at the union of breakpoint abscissas.

    Agreement there implies agreement everywhere for piecewise-geometric
    functions; returns (equal, counterexample_x_or_None).
    """
    xs = sorted({x for x, _ in env_a.breakpoints} | {x for x, _ in env_b.breakpoints})
    for x in xs:
        va, vb = env_a.evaluate(x), env_b.evaluate(x)
        if value_compare(va, vb) != 0:
            return False, x
    return True, None


COND2_GRID = tuple(Fraction(2) ** i for i in range(-20, 21))


@dataclass(frozen=True)
class ConditionReport:
    cond1: bool
    cond2: bool
    cond1_witnesses: tuple   # j with b_{2j} < a_j
    cond2_witnesses: tuple   # (k, grid r witnessing the violation, or None)


def _abscissa(j, placement):
    return 2 * j if placement == "double" else j


def check_conditions(a, b, placement="double", r_grid=COND2_GRID):
    """Exact test of the two envelope hypotheses for sequences a_0..a_n and
    b_0..b_{2n}.

    The second condition -- r^k b_k <= max_j r^(2j) a_j for every real
    r >= 0 -- holds iff every point (k, b_k) lies on or below the envelope
    of {(2j, a_j)}; the r = 0 endpoint (with 0^0 = 1) is the k = 0 instance
    of that test.  Witnesses carry a violating grid r when one exists.
    """
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    n = len(a) - 1
    if len(b) != 2 * n + 1:
        raise LengthMismatch(f"need {2 * n + 1} b-values for {n + 1} a-values, got {len(b)}")
    if any(x < 0 for x in a) or any(x < 0 for x in b):
        raise NegativeValue("sequences must be non-negative")

    cond1_witnesses = tuple(j for j in range(n + 1) if b[2 * j] < a[j])
    env = upper_log_envelope([(_abscissa(j, placement), a[j]) for j in range(n + 1)],
                             domain=(Fraction(0), Fraction(2 * n)))
    cond2_witnesses = []
    for k in range(2 * n + 1):
        if b[k] == 0:
            continue
        if value_compare(b[k], env.evaluate(Fraction(k))) > 0:
            cond2_witnesses.append((k, _grid_witness(a, b, k, placement, r_grid)))
    return ConditionReport(
        cond1=not cond1_witnesses,
        cond2=not cond2_witnesses,
        cond1_witnesses=cond1_witnesses,
        cond2_witnesses=tuple(cond2_witnesses),
    )


def _grid_witness(a, b, k, placement, r_grid):
    """A grid value of r with r^k b_k > max_j r^(2j) a_j, if the grid sees one."""
    n = len(a) - 1
    for r in r_grid:
        lhs = Fraction(r) ** k * b[k]
        rhs = max(Fraction(r) ** _abscissa(j, placement) * a[j] for j in range(n + 1))
        if lhs > rhs:
            return Fraction(r)
    return None


def condition2_grid_oracle(a, b, r_grid, placement="double"):
    """Direct finite-grid scan of the second condition; exact arithmetic.

    Independent of the envelope reduction: evaluates r^k b_k against
    max_j r^(2j) a_j at every grid r.  Returns violating (k, r) pairs.
    """
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    n = len(a) - 1
    hits = []
    for r in r_grid:
        powers = [Fraction(r) ** _abscissa(j, placement) * a[j] for j in range(n + 1)]
        bound = max(powers)
        for k in range(2 * n + 1):
            if Fraction(r) ** k * b[k] > bound:
                hits.append((k, Fraction(r)))
    return tuple(hits)


@dataclass(frozen=True)
class Prop1Report:
    status: str              # "equal" | "unequal" | "hypotheses-fail"
    conditions: ConditionReport
    a_breakpoints: tuple
    b_breakpoints: tuple
    counterexample: object   # abscissa where the envelopes differ, or None


def prop1_verdict(a, b, placement="double"):
    """Envelope-equality verdict for a hypothesis-satisfying pair.

    Builds the envelope of {(2j, a_j)} and of {(k, b_k)} and declares
    equality iff they agree exactly at every breakpoint of either.
    """
    conditions = check_conditions(a, b, placement=placement)
    if not (conditions.cond1 and conditions.cond2):
        return Prop1Report("hypotheses-fail", conditions, (), (), None)
    n = len(a) - 1
    env_a = upper_log_envelope([(_abscissa(j, placement), Fraction(a[j]))
                                for j in range(n + 1)],
                               domain=(Fraction(0), Fraction(2 * n)))
    env_b = upper_log_envelope([(Fraction(k), Fraction(b[k])) for k in range(2 * n + 1)],
                               domain=(Fraction(0), Fraction(2 * n)))
    equal, counterexample = envelopes_equal(env_a, env_b)
    return Prop1Report(
        "equal" if equal else "unequal",
        conditions,
        env_a.breakpoints,
        env_b.breakpoints,
        counterexample,
    )


def weaker_ddc_equal(lambdas, chis, tol=1e-6):
    """Envelope comparison for numeric degree data.

    Floats are lifted exactly to rationals, the exact hull machinery runs
    unchanged, and equality at the union of breakpoints is decided within a
    multiplicative tolerance.  Returns (equal, detail).
    """
    pts_a = [(2 * j, Fraction(float(v))) for j, v in enumerate(lambdas)]
    pts_b = [(k, Fraction(float(v))) for k, v in enumerate(chis)]
    hi = Fraction(2 * (len(lambdas) - 1))
    env_a = upper_log_envelope(pts_a, domain=(Fraction(0), hi))
    env_b = upper_log_envelope(pts_b, domain=(Fraction(0), hi))
    xs = sorted({x for x, _ in env_a.breakpoints} | {x for x, _ in env_b.breakpoints})
    detail = []
    equal = True
    for x in xs:
        va, vb = _as_handle(env_a.evaluate(x)), _as_handle(env_b.evaluate(x))
        fa, fb = va.to_float(), vb.to_float()
        same = (fa == fb == 0.0) or (
            fa > 0 and fb > 0 and abs(math.log(fa) - math.log(fb)) <= math.log1p(tol))
        equal = equal and same
        detail.append((float(x), fa, fb, same))
    return equal, tuple(detail)


def rational_below(value, shrink=Fraction(1, 64)):
    """Largest convenient rational certified <= the given envelope value."""
    handle = _as_handle(value)
    exact = handle.as_rational() if isinstance(value, PowerProduct) else Fraction(value)
    if exact is not None:
        return exact
    approx = Fraction(handle.to_float()).limit_denominator(10 ** 6)
    cand = approx * (1 - shrink)
    for _ in range(60):
        if cand <= 0:
            return Fraction(0)
        if handle.compare(cand) >= 0:
            return cand
        cand = cand * (1 - shrink)
    return Fraction(0)
