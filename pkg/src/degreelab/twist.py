"""Polarized and Frobenius endomorphism models, scaling operators, twisted
compositions, Diophantine approximation, and Jordan-size comparison.

Models with prescribed eigenvalue moduli base^(k/2) may carry an adapted
inner product per degree (a rational Gram matrix declaring a chosen
eigenbasis orthonormal); adjoints and Frobenius norms are then taken with
respect to that Gram matrix, never the raw coordinate one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from . import spectral
from .degrees import IterateSystem, endo_degrees, cohomological_degrees, numerical_degrees, iterate
from .errors import NonPositiveR, NotAnEigenvalue, SingularBlock, SingularMatrix, SpaceMismatch
from .model import GradedMap, numerical_pushdown

MODULUS_RTOL = 1e-9


def _check_weil_moduli(map_, base, rtol=MODULUS_RTOL, exact_dim_limit=32):
    """Every eigenvalue of block k must have modulus base^(k/2)."""
    for k, block in enumerate(map_.blocks):
        if not block:
            continue
        want = float(base) ** (k / 2)
        moduli = spectral.poly_root_moduli(la.charpoly(la.to_fraction(block)))
        for m in moduli:
            if abs(m - want) > rtol * max(want, 1.0):
                raise NotAnEigenvalue(
                    f"block {k} has eigenvalue modulus {m}, want {want}")


@dataclass(frozen=True)
class PolarizedModel:
    a: int
    map: GradedMap
    weil_rh: bool = True
    semisimple: bool = False
    gram: tuple | None = None    # per-degree symmetric positive Gram matrices

    def __post_init__(self):
        if self.a <= 1:
            raise NonPositiveR(f"polarization constant must exceed 1, got {self.a}")
        if self.weil_rh:
            _check_weil_moduli(self.map, self.a)

    @property
    def space(self):
        return self.map.space

    @property
    def base(self):
        return self.a


@dataclass(frozen=True)
class FrobeniusModel:
    q: int
    map: GradedMap
    gram: tuple | None = None

    def __post_init__(self):
        if self.q <= 1:
            raise NonPositiveR(f"prime power must exceed 1, got {self.q}")
        _check_weil_moduli(self.map, self.q)

    @property
    def space(self):
        return self.map.space

    @property
    def base(self):
        return self.q


@dataclass(frozen=True)
class KroneckerResult:
    s: int
    t: int
    residual: float
    rational: bool = False

    def __post_init__(self):
        if self.t <= 0:
            raise NonPositiveR("Kronecker t must be positive")


# -- adapted inner products ----------------------------------------------------

def adapted_adjoint(block, gram=None):
    """Adjoint with respect to the Gram matrix: G^{-1} B^T G."""
    bt = la.transpose(block)
    if gram is None:
        return bt
    return la.mat_mul(la.mat_mul(la.inv(gram), bt), gram)


def adapted_norm_sq(block, gram=None):
    """Squared Frobenius norm in the adapted basis: Tr(B^tau B), exact for
    rational data."""
    if not block:
        return Fraction(0)
    prod = la.mat_mul(adapted_adjoint(block, gram), block)
    return sum(prod[i][i] for i in range(len(prod)))


def adapted_singular_extremes(block, gram=None, exact_dim_limit=32):
    """(sigma_min, sigma_max) of B with respect to the adapted inner product."""
    n = len(block)
    if n == 0:
        return (0.0, 0.0)
    prod = la.mat_mul(block, adapted_adjoint(block, gram))
    if la._is_exact(prod):
        smax, _ = spectral.poly_max_modulus(la.charpoly(prod))
        if la.rank(block) < n:
            return (0.0, math.sqrt(smax))
        inv_sp, _ = spectral.poly_max_modulus(la.charpoly(la.inv(prod)))
        return (inv_sp ** -0.5, math.sqrt(smax))
    import numpy as np

    eig = np.linalg.eigvals(np.array([[complex(x) for x in row] for row in prod]))
    mods = sorted(abs(eig))
    return (math.sqrt(max(mods[0], 0.0)), math.sqrt(mods[-1]))


# -- operators ------------------------------------------------------------------

def gr_operator(space, r):
    """Block k is r^k times the identity."""
    r = Fraction(r)
    if r <= 0:
        raise NonPositiveR(f"scaling parameter must be positive, got {r}")
    return GradedMap(space, tuple(
        la.mat_scale(r ** k, la.identity(space.dims[k])) if space.dims[k] else ()
        for k in range(space.degree_count())))


def _model_map(f_or_model):
    return f_or_model.map if isinstance(f_or_model, (PolarizedModel, FrobeniusModel)) else f_or_model


def twist_compose(f, model, s):
    """Per-degree product (F_k)^s . f_k; negative s needs invertible blocks."""
    fm = _model_map(model)
    if not f.space.same_as(fm.space):
        raise SpaceMismatch("twist operands on different spaces")
    blocks = []
    for k, (a, b) in enumerate(zip(fm.blocks, f.blocks)):
        if not b:
            blocks.append(())
            continue
        try:
            power = la.mat_pow(a, s)
        except SingularMatrix as exc:
            raise SingularBlock(f"block {k} singular, cannot twist by s={s}") from exc
        blocks.append(la.mat_mul(power, b))
    return GradedMap(f.space, tuple(blocks))


def frobenius_schedule(r, base, t_values=(1, 2, 3, 4, 5)):
    """s_t = floor(2 t log_base r) along the given t values."""
    lr = math.log(float(r)) / math.log(float(base))
    return tuple(math.floor(2 * t * lr) for t in t_values)


# -- Kronecker approximation ----------------------------------------------------

def _continued_fraction_convergents(theta):
    """Convergents p/q of a positive rational (exact lift of the input)."""
    num, den = theta.numerator, theta.denominator
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    while den:
        a0, rem = divmod(num, den)
        p_prev, p = p, a0 * p + p_prev
        q_prev, q = q, a0 * q + q_prev
        yield p, q
        num, den = den, rem


def kronecker_convergents(theta, count=60):
    """Successive (s, t) = (-q, p) along the convergents p/q of theta, with
    exact residuals |theta s + t|; entries with t == 0 are skipped."""
    theta = theta if isinstance(theta, Fraction) else Fraction(theta)
    if theta <= 0:
        raise NonPositiveR(f"theta must be positive, got {theta}")
    out = []
    for p, q in _continued_fraction_convergents(theta):
        if p <= 0:
            continue
        residual = abs(theta * (-q) + p)
        out.append(KroneckerResult(s=-q, t=p, residual=float(residual),
                                   rational=(residual == 0)))
        if residual == 0 or len(out) >= count:
            break
    return tuple(out)


RATIONAL_RECOGNITION_DEN = 10 ** 12


def kronecker_approx(theta, epsilon):
    """First convergent pair with |theta s + t| < epsilon and t > 0.

    A theta recognized as rational p/q within the working precision (exact
    lift matching a denominator below 10^12) short-circuits to the exact
    relation (s, t) = (-q, p) with residual 0.
    """
    if float(epsilon) <= 0:
        raise NonPositiveR("epsilon must be positive")
    theta = theta if isinstance(theta, Fraction) else Fraction(theta)
    if theta <= 0:
        raise NonPositiveR(f"theta must be positive, got {theta}")
    recognized = theta.limit_denominator(RATIONAL_RECOGNITION_DEN)
    if recognized == theta:
        return KroneckerResult(s=-theta.denominator, t=theta.numerator,
                               residual=0.0, rational=True)
    eps = Fraction(epsilon)
    last = None
    for p, q in _continued_fraction_convergents(theta):
        if p <= 0:
            continue
        residual = abs(theta * (-q) + p)
        last = KroneckerResult(s=-q, t=p, residual=float(residual),
                               rational=(residual == 0))
        if residual < eps:
            return last
    if last is not None and last.rational:
        return last
    raise NonPositiveR("continued fraction expansion exhausted before epsilon")


# -- inequality scans -------------------------------------------------------------

DEFAULT_R_GRID = tuple(Fraction(2) ** i for i in range(-10, 11))


@dataclass(frozen=True)
class Eq1Report:
    lambdas: tuple
    chis: tuple
    violations: tuple      # (r, k, lhs, rhs)
    max_margin: float      # largest log(lhs/rhs) over the scan
    diagnostics: dict


def eq1_scan(sys_or_map, ns=None, r_grid=DEFAULT_R_GRID, tol=1e-9, t_max=None,
             base=None):
    """Scan of r^k chi_k <= max_j r^(2j) lambda_j over a grid of r values.

    Exact degrees in endomorphism-power mode, estimates otherwise; each
    violation is reported with its witnesses.
    """
    if isinstance(sys_or_map, GradedMap):
        sys = IterateSystem.power(sys_or_map, numerical=ns)
    else:
        sys = sys_or_map
        if ns is None:
            ns = sys.numerical
    n = sys.space.n
    if sys.mode == "power":
        lambdas, chis = endo_degrees(sys.base, ns)
    else:
        lambdas = tuple(numerical_degrees(sys, j, t_max).value for j in range(n + 1))
        chis = tuple(cohomological_degrees(sys, k, t_max).value for k in range(2 * n + 1))
    violations = []
    max_margin = -math.inf
    for r in r_grid:
        rf = float(r)
        bound = max(rf ** (2 * j) * lambdas[j] for j in range(n + 1))
        for k in range(2 * n + 1):
            lhs = rf ** k * chis[k]
            if lhs > 0 and bound > 0:
                max_margin = max(max_margin, math.log(lhs / bound))
            if lhs > bound * (1 + tol):
                violations.append((r, k, lhs, bound))
    diagnostics = {}
    if base is not None:
        mid = r_grid[len(r_grid) // 2 + 1] if len(r_grid) > 1 else Fraction(2)
        diagnostics["schedule"] = {
            "base": base, "r": float(mid),
            "s_of_t": frobenius_schedule(mid, base),
        }
    return Eq1Report(lambdas, chis, tuple(violations), max_margin, diagnostics)


@dataclass(frozen=True)
class Claim1Report:
    k: int
    s: int
    t: int
    lhs: float
    rhs: float             # max_j a^(sj) ||f_t|_{N^j}||, without the constant
    implied_c: float
    sigma_min: float
    h_norm: float
    numerical_norms: tuple


def claim1_check(f_sys, model, k, s, t):
    """Per-instance evaluation of the twisted norm inequality.

    lhs = sigma_min(A^s) ||f_t|_{H^k}||,  rhs = max_j a^(sj) ||f_t|_{N^j}||;
    the implied constant lhs/rhs probes uniformity across a batch.
    """
    ns = f_sys.numerical
    if ns is None:
        raise SpaceMismatch("iterate system carries no numerical structure")
    fm = _model_map(model)
    gram = getattr(model, "gram", None)
    block = fm.blocks[k]
    try:
        a_s = la.mat_pow(block, s)
    except SingularMatrix as exc:
        raise SingularBlock(f"block {k} singular, cannot raise to s={s}") from exc
    sigma_min, _ = adapted_singular_extremes(a_s, gram[k] if gram else None)
    f_t = iterate(f_sys, t)
    h_norm = math.sqrt(float(adapted_norm_sq(f_t.blocks[k], gram[k] if gram else None)))
    pushed = numerical_pushdown(ns, f_t)
    norms = tuple(math.sqrt(float(la.frobenius_norm_sq(b))) if b else 0.0
                  for b in pushed)
    base = float(model.base)
    rhs = max(base ** (s * j) * norms[j] for j in range(len(norms)))
    lhs = sigma_min * h_norm
    if rhs > 0:
        implied = lhs / rhs
    else:
        implied = math.inf if lhs > 0 else 0.0
    return Claim1Report(k, s, t, lhs, rhs, implied, sigma_min, h_norm, norms)


# -- Jordan-size comparison --------------------------------------------------------

@dataclass(frozen=True)
class JordanCompareReport:
    b1: int
    b2: int
    equal: bool
    dominant1: tuple
    dominant2: tuple
    theta: float | None
    certificate: tuple


def dominant_jordan_size(block, rtol=MODULUS_RTOL):
    """Largest Jordan block size among the eigenvalues of maximal modulus.

    Exact characteristic polynomial with a gcd-derivative chain supplies the
    multiplicities; only dominant eigenvalues that are actually multiple get
    a rank-sequence profile (exactly for rational eigenvalues).
    """
    if not block:
        return 0, ()
    p = la.charpoly(la.to_fraction(block))
    chain = [la.poly_monic(p)]
    while len(chain[-1]) > 1:
        g = la.poly_gcd(chain[-1], la.poly_deriv(chain[-1]))
        if len(g) == 1:
            break
        chain.append(g)
    dominant = spectral.poly_root_moduli(p)[0]
    scale = max(dominant, 1.0)
    max_mult = 1
    for level, d in enumerate(chain[1:], start=2):
        moduli = spectral.poly_root_moduli(d)
        if moduli and abs(moduli[0] - dominant) <= rtol * scale:
            max_mult = level + 0  # roots of chain[i] have multiplicity > i
    if max_mult == 1:
        return 1, (dominant,)
    roots = _poly_roots(la.squarefree_part(chain[1]))
    best = 1
    dominants = []
    for root in roots:
        if abs(abs(root) - dominant) > rtol * scale:
            continue
        dominants.append(root)
        rational = _rational_root(p, root)
        if rational is not None:
            profile = spectral.jordan_profile(la.to_fraction(block), rational)
        else:
            profile = spectral.jordan_profile(block, root)
        best = max(best, profile.largest)
    return best, tuple(dominants) or (dominant,)


def _poly_roots(p, dps=40):
    import mpmath

    if len(p) <= 1:
        return ()
    with mpmath.workdps(dps):
        coeffs = [mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator) for c in p]
        try:
            roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=120)
        except mpmath.libmp.NoConvergence:
            roots = mpmath.polyroots(coeffs, maxsteps=1000, extraprec=400)
        return tuple(complex(r) for r in roots)


def _rational_root(p, root, max_den=10 ** 6):
    if abs(root.imag) > 1e-20 * max(1.0, abs(root)):
        return None
    cand = Fraction(root.real).limit_denominator(max_den)
    return cand if la.poly_eval(p, cand) == 0 else None


def jordan_compare(model1, model2, k, steps=60):
    """Largest dominant Jordan sizes of both models at degree k, with the
    Kronecker-driven divergence certificate t^(b_hi - 1) / |s|^(b_lo - 1)
    when the sizes differ."""
    if not model1.space.same_as(model2.space):
        raise SpaceMismatch("models on different spaces")
    b1, dom1 = dominant_jordan_size(_model_map(model1).blocks[k])
    b2, dom2 = dominant_jordan_size(_model_map(model2).blocks[k])
    equal = b1 == b2
    theta = None
    certificate = ()
    if not equal:
        lo_model, lo_b = (model1, b1) if b1 < b2 else (model2, b2)
        hi_model, hi_b = (model2, b2) if b1 < b2 else (model1, b1)
        theta = math.log(float(lo_model.base)) / math.log(float(hi_model.base))
        theta_frac = Fraction(theta)
        values = []
        for res in kronecker_convergents(theta_frac, count=steps):
            log_val = (hi_b - 1) * math.log(res.t) - (lo_b - 1) * math.log(abs(res.s))
            values.append(math.exp(log_val) if log_val < 700 else math.inf)
        certificate = tuple(values)
    return JordanCompareReport(b1, b2, equal, dom1, dom2, theta, certificate)
