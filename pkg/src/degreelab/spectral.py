"""Spectral radii, singular extremes, power-norm asymptotics, Jordan data.

Exact-entry matrices of modest size go through an exact characteristic
polynomial (division-free recursion) whose squarefree part is rooted with
mpmath at high working precision; everything else uses normalized repeated
squaring (Gelfand) or numpy factorizations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from . import linalg as la
from .errors import IllConditionedFit, NonConvergence, NotAnEigenvalue

EXACT_DIM_LIMIT = 12


@dataclass(frozen=True)
class SpectralReport:
    value: float
    method: str          # "exact-charpoly" | "gelfand"
    iterations: int
    residual: float


@dataclass(frozen=True)
class JordanReport:
    eigenvalue: object
    block_sizes: tuple
    largest: int

    @property
    def multiplicity(self):
        return sum(self.block_sizes)


def frobenius_norm(m):
    """Root-sum-square of the entries."""
    return la.frobenius_norm(m)


def frobenius_norm_sq(m):
    return la.frobenius_norm_sq(m)


def _exactable(m):
    for row in m:
        for x in row:
            if isinstance(x, complex):
                return False
            if isinstance(x, float) and not math.isfinite(x):
                return False
    return True


def _genuinely_exact(m):
    return all(isinstance(x, (int, Fraction)) for row in m for x in row)


def _lift(m):
    return tuple(tuple(Fraction(x) for x in row) for row in m)


def poly_max_modulus(p, dps=40):
    """Largest root modulus of an exact rational polynomial (leading-first).

    The squarefree part is rooted, so multiple eigenvalues cost nothing in
    conditioning; the returned residual is mpmath's root error estimate.
    """
    sf = la.squarefree_part(p)
    deg = len(sf) - 1
    if deg == 0:
        return 0.0, 0.0
    with mpmath.workdps(dps):
        coeffs = [mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator) for c in sf]
        try:
            roots, err = mpmath.polyroots(coeffs, maxsteps=200, extraprec=120,
                                          error=True)
        except mpmath.libmp.NoConvergence:
            roots, err = mpmath.polyroots(coeffs, maxsteps=1000, extraprec=400,
                                          error=True)
        value = max((abs(r) for r in roots), default=mpmath.mpf(0))
        return float(value), float(err)


def poly_root_moduli(p, dps=40):
    """Moduli of the distinct roots of an exact polynomial, descending."""
    sf = la.squarefree_part(p)
    if len(sf) == 1:
        return ()
    with mpmath.workdps(dps):
        coeffs = [mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator) for c in sf]
        try:
            roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=120)
        except mpmath.libmp.NoConvergence:
            roots = mpmath.polyroots(coeffs, maxsteps=1000, extraprec=400)
        return tuple(sorted((float(abs(r)) for r in roots), reverse=True))


def spectral_radius(m, tol=1e-9, exact_dim_limit=EXACT_DIM_LIMIT, max_squarings=60):
    """Spectral radius with an exact-charpoly path for small exact matrices
    and a Gelfand repeated-squaring path otherwise."""
    n = len(m)
    if n == 0:
        return SpectralReport(0.0, "exact-charpoly", 0, 0.0)
    if _exactable(m) and n <= exact_dim_limit:
        value, residual = poly_max_modulus(la.charpoly(_lift(m)))
        return SpectralReport(value, "exact-charpoly", 0, residual)
    return _gelfand_radius(m, tol, max_squarings)


def _gelfand_radius(m, tol, max_squarings):
    a = np.asarray([[complex(x) for x in row] for row in m])
    if not np.iscomplexobj(a) or np.allclose(a.imag, 0):
        a = a.real.astype(float) if not np.iscomplexobj(a) else a
    scale = np.linalg.norm(a)
    if scale == 0:
        return SpectralReport(0.0, "gelfand", 0, 0.0)
    b = a / scale
    log_scale = math.log(scale)
    prev = None
    est = float(scale)
    residual = math.inf
    for i in range(1, max_squarings + 1):
        b = b @ b
        log_scale *= 2
        norm = np.linalg.norm(b)
        if norm == 0:
            return SpectralReport(0.0, "gelfand", i, 0.0)
        log_scale += math.log(norm)
        b = b / norm
        est = math.exp(log_scale / (1 << i))
        if prev is not None:
            residual = abs(est - prev) / max(est, 1e-300)
            if residual < tol:
                return SpectralReport(est, "gelfand", i, residual)
        prev = est
    raise NonConvergence(
        f"Gelfand estimate did not stabilize within {max_squarings} squarings",
        report=SpectralReport(est, "gelfand", max_squarings, residual))


def _conj_transpose(a):
    return a.conj().T if np.iscomplexobj(a) else a.T


def singular_extremes(m, exact_dim_limit=EXACT_DIM_LIMIT):
    """(sigma_min, sigma_max); sigma_min is 0 for singular input.

    Exact-entry matrices go through the charpoly of M M^T; float matrices go
    straight to an SVD (near-multiple singular values make the lifted exact
    polynomial badly conditioned for root isolation).
    """
    n = len(m)
    if n == 0:
        return (0.0, 0.0)
    if _genuinely_exact(m) and n <= exact_dim_limit:
        mm = _lift(m)
        gram = la.mat_mul(mm, la.transpose(mm))
        smax, _ = poly_max_modulus(la.charpoly(gram))
        if la.rank(mm) < n:
            return (0.0, math.sqrt(smax))
        inv_sp, _ = poly_max_modulus(la.charpoly(la.inv(gram)))
        return (inv_sp ** -0.5, math.sqrt(smax))
    a = np.asarray([[complex(x) for x in row] for row in m])
    s = np.linalg.svd(a, compute_uv=False)
    smin = float(s[-1])
    if smin < 1e-13 * max(float(s[0]), 1.0):
        smin = 0.0
    return (smin, float(s[0]))


@dataclass(frozen=True)
class YamamotoReport:
    estimates: tuple     # ((m, estimate), ...)
    radius: float
    final_gap: float


def yamamoto_sequence(m, m_values, radius=None):
    """sigma_max(M^m)^(1/m) along the given exponents.

    Powers are built by normalized binary squaring; the logged scale factor
    keeps 2^4096-scale magnitudes inside float range without changing the
    extracted root.
    """
    m_values = list(m_values)
    if any(v <= 0 for v in m_values) or sorted(m_values) != m_values:
        raise ValueError("m_values must be positive and increasing")
    a = np.asarray([[complex(x) for x in row] for row in m])
    if np.allclose(a.imag, 0):
        a = a.real.astype(float)
    estimates = []
    for mv in m_values:
        log_sigma = _log_sigma_max_power(a, mv)
        estimates.append((mv, math.exp(log_sigma / mv) if log_sigma > -math.inf else 0.0))
    if radius is None:
        radius = spectral_radius(m).value
    gap = abs(estimates[-1][1] - radius) if estimates else math.nan
    return YamamotoReport(tuple(estimates), radius, gap)


def _log_sigma_max_power(a, t):
    """log sigma_max(a^t) via scale-logged binary powering."""
    result = None   # (matrix, log_scale)
    base = a
    base_log = 0.0
    while t:
        if t & 1:
            if result is None:
                result = (base.copy(), base_log)
            else:
                prod = result[0] @ base
                norm = np.linalg.norm(prod)
                if norm == 0:
                    return -math.inf
                result = (prod / norm, result[1] + base_log + math.log(norm))
        t >>= 1
        if t:
            sq = base @ base
            norm = np.linalg.norm(sq)
            if norm == 0:
                return -math.inf
            base = sq / norm
            base_log = 2 * base_log + math.log(norm)
    mat_, logs = result
    smax = float(np.linalg.svd(mat_, compute_uv=False)[0])
    if smax == 0:
        return -math.inf
    return logs + math.log(smax)


def log_norm_power(m, t):
    """log ||M^t||_F with the same scale-logged powering."""
    a = np.asarray([[complex(x) for x in row] for row in m])
    if np.allclose(a.imag, 0):
        a = a.real.astype(float)
    result = None
    base = a
    base_log = 0.0
    while t:
        if t & 1:
            if result is None:
                result = (base.copy(), base_log)
            else:
                prod = result[0] @ base
                norm = np.linalg.norm(prod)
                if norm == 0:
                    return -math.inf
                result = (prod / norm, result[1] + base_log + math.log(norm))
        t >>= 1
        if t:
            sq = base @ base
            norm = np.linalg.norm(sq)
            if norm == 0:
                return -math.inf
            base = sq / norm
            base_log = 2 * base_log + math.log(norm)
    mat_, logs = result
    fn = float(np.linalg.norm(mat_))
    return logs + math.log(fn) if fn > 0 else -math.inf


def jordan_profile(m, eigenvalue, tol=1e-9):
    """Jordan block sizes at an eigenvalue, from the rank sequence of powers
    of (M - lambda I); conjugate-partition counts recover the sizes."""
    n = len(m)
    exact = _exactable(m) and isinstance(eigenvalue, (int, Fraction))
    if exact:
        lam = Fraction(eigenvalue)
        shifted = la.mat_sub(_lift(m), la.mat_scale(lam, la.identity(n)))
        ranks = [n]
        power = la.identity(n)
        while True:
            power = la.mat_mul(power, shifted)
            r = la.rank(power)
            ranks.append(r)
            if r == ranks[-2]:
                break
        if ranks[1] == n:
            raise NotAnEigenvalue(f"{eigenvalue} is not an eigenvalue")
    else:
        a = np.asarray([[complex(x) for x in row] for row in m])
        lam = complex(eigenvalue)
        shifted = a - lam * np.eye(n)
        scale = max(float(np.linalg.norm(shifted)), 1.0)
        if _numerical_rank(shifted, tol * scale) == n:
            raise NotAnEigenvalue(f"{eigenvalue} is not an eigenvalue within tolerance")
        ranks = [n]
        power = np.eye(n, dtype=shifted.dtype)
        while True:
            power = power @ shifted
            norm = float(np.linalg.norm(power))
            if norm > 0:
                power = power / norm
            r = _numerical_rank(power, tol)
            ranks.append(r)
            if r == ranks[-2]:
                break
    nullities = [n - r for r in ranks]
    counts_ge = [nullities[p] - nullities[p - 1] for p in range(1, len(nullities))]
    sizes = []
    for p in range(1, len(counts_ge) + 1):
        exactly = counts_ge[p - 1] - (counts_ge[p] if p < len(counts_ge) else 0)
        sizes.extend([p] * exactly)
    sizes = tuple(sorted(sizes, reverse=True))
    return JordanReport(eigenvalue=eigenvalue, block_sizes=sizes, largest=max(sizes))


def _numerical_rank(a, tol):
    s = np.linalg.svd(a, compute_uv=False)
    if len(s) == 0:
        return 0
    cutoff = max(tol, 1e-11 * float(s[0]))
    return int(np.sum(s > cutoff))


@dataclass(frozen=True)
class GrowthFit:
    rho: float
    b: int
    residual: float
    method: str        # "least-squares" | "binomial-refined"
    ls_rho: float
    ls_b: int


def growth_fit(samples, min_s=8, residual_cap=1.0, refine=True):
    """Fit ||M^s|| ~ s^(b-1) rho^s from (s, ||M^s||_F) samples.

    A plain least-squares fit of log-norm against [s, log s, 1] pins down the
    integer b; the growth base is then refined by repeating the fit with the
    exact binomial coefficient C(s, b-1) in place of its s^(b-1) asymptote,
    selecting the smallest b whose refined model reproduces the samples.
    """
    pts = [(int(s), float(v)) for s, v in samples]
    pts = [(s, v) for s, v in pts if abs(s) >= min_s and v > 0]
    if len(pts) < 8:
        raise ValueError("need at least 8 samples with |s| >= min_s and positive norm")
    s_arr = np.array([abs(s) for s, _ in pts], dtype=float)
    y = np.array([math.log(v) for _, v in pts])
    design = np.column_stack([s_arr, np.log(s_arr), np.ones_like(s_arr)])
    coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    ls_log_rho, beta, _ = coef
    ls_rho = math.exp(ls_log_rho)
    ls_b = max(1, int(round(beta)) + 1)
    ls_residual = float(np.sqrt(np.mean((design @ coef - y) ** 2)))

    if refine:
        found = _binomial_model_select(s_arr, y, ls_rho)
        if found is not None:
            rho, b, res = found
            return GrowthFit(rho, b, res, "binomial-refined", ls_rho, ls_b)
    if ls_residual > residual_cap:
        raise IllConditionedFit(
            f"log-space fit residual {ls_residual:.3g} exceeds cap {residual_cap}")
    return GrowthFit(ls_rho, ls_b, ls_residual, "least-squares", ls_rho, ls_b)


def _binomial_model_select(s_arr, y, rho0, rel_tol=1e-8):
    """Smallest b for which ||M^s||^2 = sum_d w_d C(s,d)^2 rho^(2(s-d)) fits
    the samples to machine accuracy, with rho optimized per candidate."""
    s_int = s_arr.astype(int)
    b_cap = min(len(s_arr) - 2, int(s_arr.min()), 12)
    best = None
    for b in range(1, max(b_cap, 1) + 1):
        res, rho = _refine_rho(s_int, y, rho0, b)
        if res < rel_tol:
            return (rho, b, res)
        if best is None or res < best[2]:
            best = (rho, b, res)
    return None


def _refine_rho(s_int, y, rho0, b):
    def residual(log_rho):
        # relative residual of the weighted binomial model at this base
        z = 2.0 * (y - s_int * log_rho)           # log of norm^2 / rho^(2s)
        zmax = z.max()
        zs = np.exp(z - zmax)
        cols = []
        for d in range(b):
            cols.append(np.array([math.comb(s, d) ** 2 for s in s_int], dtype=float)
                        * math.exp(-2 * d * log_rho - zmax))
        design = np.column_stack(cols)
        scale = 1.0 / zs
        w, _, _, _ = np.linalg.lstsq(design * scale[:, None], np.ones_like(zs),
                                     rcond=None)
        fit = design @ w
        return float(np.sqrt(np.mean(((fit - zs) / zs) ** 2)))

    lo, hi = math.log(rho0 * 0.9), math.log(rho0 * 1.1)
    grid = np.linspace(lo, hi, 41)
    vals = [residual(g) for g in grid]
    i = int(np.argmin(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    phi = (math.sqrt(5) - 1) / 2
    a, c = lo, hi
    x1 = c - phi * (c - a)
    x2 = a + phi * (c - a)
    f1, f2 = residual(x1), residual(x2)
    for _ in range(80):
        if f1 < f2:
            c, x2, f2 = x2, x1, f1
            x1 = c - phi * (c - a)
            f1 = residual(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + phi * (c - a)
            f2 = residual(x2)
        if c - a < 1e-14:
            break
    log_rho = (a + c) / 2
    return residual(log_rho), math.exp(log_rho)
