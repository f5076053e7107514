"""Seeded instance generators shared by the verify suites and the test bench.

Everything here is deterministic in the seed.  Generators that must satisfy
hypotheses do so by construction and re-verify exactly before returning.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from . import envelope as env_mod
from . import linalg as la
from .constructions import (
    ModelBundle,
    abelian_model,
    blowup_model,
    hilb2_model,
    point_model,
    product_model,
    projective_model,
    random_semisimple_model,
)
from .model import (
    GradedMap,
    NumericalStructure,
    make_correspondence,
    make_space,
)


def _rand_fraction(rng, bound=1000, allow_zero=True):
    num = rng.randint(0 if allow_zero else 1, bound)
    den = rng.randint(1, bound)
    return Fraction(num, den)


# -- envelope instances ---------------------------------------------------------

def prop1_instance(rng, n_max=6, bound=1000):
    """(a, b) satisfying both conditions by construction: a random, b drawn
    exactly between its floor and the a-envelope."""
    n = rng.randint(1, n_max)
    a = [_rand_fraction(rng, bound) for _ in range(n + 1)]
    if all(x == 0 for x in a):
        a[rng.randrange(n + 1)] = _rand_fraction(rng, bound, allow_zero=False)
    env = env_mod.upper_log_envelope([(2 * j, a[j]) for j in range(n + 1)],
                                     domain=(0, 2 * n))
    b = []
    for k in range(2 * n + 1):
        ceiling = env.evaluate(Fraction(k))
        floor = a[k // 2] if k % 2 == 0 else Fraction(0)
        mode = rng.random()
        if mode < 0.35:
            cand = env_mod.rational_below(ceiling)
        elif mode < 0.55:
            cand = floor
        else:
            top = env_mod.rational_below(ceiling)
            cand = floor + (top - floor) * Fraction(rng.randint(0, 16), 16)
        cand = max(cand, floor)
        if env_mod.value_compare(cand, ceiling) > 0:
            cand = floor
        b.append(cand)
    report = env_mod.check_conditions(a, b)
    assert report.cond1 and report.cond2
    return a, b


def prop1_violation_instance(rng, n_max=6, bound=1000):
    """A valid instance with one b_k bumped exactly above the a-envelope."""
    a, b = prop1_instance(rng, n_max, bound)
    n = len(a) - 1
    env = env_mod.upper_log_envelope([(2 * j, a[j]) for j in range(n + 1)],
                                     domain=(0, 2 * n))
    k = rng.randrange(2 * n + 1)
    ceiling = env.evaluate(Fraction(k))
    handle = env_mod._as_handle(ceiling)
    if handle.is_zero():
        bumped = Fraction(1 + rng.randint(0, bound), 1 + rng.randint(0, 7))
    else:
        approx = Fraction(handle.to_float()).limit_denominator(10 ** 9)
        bumped = approx * Fraction(9, 8)
        while handle.compare(bumped) >= 0:
            bumped *= Fraction(9, 8)
    b = list(b)
    b[k] = bumped
    return a, b, k


# -- random spaces and correspondences --------------------------------------------

def _random_invertible(rng, d, entry_bound=3):
    while True:
        m = la.mat([[Fraction(rng.randint(-entry_bound, entry_bound))
                     for _ in range(d)] for _ in range(d)])
        if d == 0 or la.rank(m) == d:
            return m


def _random_symmetric_invertible(rng, d, entry_bound=3):
    while True:
        m = [[Fraction(rng.randint(-entry_bound, entry_bound)) for _ in range(d)]
             for _ in range(d)]
        for i in range(d):
            for j in range(i):
                m[j][i] = m[i][j]
        m = la.mat(m)
        if d == 0 or la.rank(m) == d:
            return m


def random_space(rng, total_cap=12, n_max=3, identity_pairings=False):
    """Random exact space with nondegenerate transpose-compatible pairings."""
    n = rng.randint(1, n_max)
    while True:
        dims = [0] * (2 * n + 1)
        dims[0] = dims[2 * n] = 1
        budget = total_cap - 2
        for k in range(1, n):
            d = rng.randint(0, max(0, budget // 2))
            dims[k] = dims[2 * n - k] = d
            budget -= 2 * d
        dims[n] = rng.randint(0 if budget else 0, max(budget, 0))
        if sum(dims) <= total_cap:
            break
    if identity_pairings:
        return make_space(n, dims)
    pairings = [None] * (2 * n + 1)
    for k in range(n):
        p = _random_invertible(rng, dims[k])
        pairings[k] = p
        pairings[2 * n - k] = la.transpose(p)
    pairings[n] = _random_symmetric_invertible(rng, dims[n])
    return make_space(n, dims, pairings=pairings)


def random_correspondence(rng, space, entry_bound=4):
    comps = []
    for k in range(2 * space.n + 1):
        rows, cols = space.dims[2 * space.n - k], space.dims[k]
        comps.append([[Fraction(rng.randint(-entry_bound, entry_bound), rng.randint(1, 3))
                       for _ in range(cols)] for _ in range(rows)])
    return make_correspondence(space, comps)


def random_graded_map(rng, space, entry_bound=4):
    blocks = []
    for d in space.dims:
        blocks.append([[Fraction(rng.randint(-entry_bound, entry_bound))
                        for _ in range(d)] for _ in range(d)])
    return GradedMap.from_blocks(space, blocks)


# -- Weil data and the endomorphism corpus ----------------------------------------

def random_weil_quadratic(rng, q):
    """x^2 - a x + q with a^2 < 4q: strictly complex conjugate roots."""
    top = int(math.isqrt(4 * q - 1))
    a = rng.randint(-top, top)
    return (Fraction(1), Fraction(-a), Fraction(q))


def random_weil_frobenius(rng, g, q):
    """Block-diagonal degree-1 Frobenius: g strictly-complex Weil blocks,
    with repeats allowed so the commutant stays interesting."""
    polys = []
    for _ in range(g):
        if polys and rng.random() < 0.3:
            polys.append(rng.choice(polys))
        else:
            polys.append(random_weil_quadratic(rng, q))
    blocks = [la.companion(p) for p in polys]
    return la.block_diag(blocks), polys


def random_commuting_endo(rng, polys, q, entry_cap=5, tries=40):
    """Integer endomorphism of the degree-1 piece commuting with the
    block-diagonal Frobenius, entries bounded by entry_cap.

    Per-block degree-1 polynomials in the Frobenius block; when two adjacent
    blocks are equal, an occasional swap-style 2x2 block over the commutant
    is planted instead.
    """
    g = len(polys)
    for _ in range(tries):
        blocks = []
        used_swap = False
        i = 0
        while i < g:
            w = la.companion(polys[i])
            if (not used_swap and i + 1 < g and polys[i] == polys[i + 1]
                    and rng.random() < 0.4):
                c0, c1 = rng.randint(0, 2), rng.randint(1, 2)
                z = la.zeros(2, 2)
                diag = la.mat_scale(Fraction(c0), la.identity(2))
                off = la.mat_scale(Fraction(c1), la.identity(2))
                top = tuple(tuple(diag[r]) + tuple(off[r]) for r in range(2))
                bot = tuple(tuple(off[r]) + tuple(diag[r]) for r in range(2))
                blocks.append(la.mat(top + bot))
                used_swap = True
                i += 2
                continue
            c0 = rng.randint(-entry_cap, entry_cap)
            c1 = rng.choice((-1, 0, 1))
            cand = la.mat_add(la.mat_scale(Fraction(c0), la.identity(2)),
                              la.mat_scale(Fraction(c1), w))
            blocks.append(cand)
            i += 1
        endo = la.block_diag(blocks)
        if all(x == 0 for row in endo for x in row):
            continue
        if max(abs(x) for row in endo for x in row) > entry_cap:
            continue
        return endo
    return la.identity(2 * g)


def abelian_corpus(seed, count, q_choices=(2, 3, 5), g_weights=(5, 3, 2)):
    """Seeded exterior-algebra bundles with planted commuting endomorphisms."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        g = rng.choices((1, 2, 3), weights=g_weights)[0]
        q = rng.choice(q_choices)
        m1, polys = random_weil_frobenius(rng, g, q)
        endo = random_commuting_endo(rng, polys, q)
        out.append(abelian_model(g, q, frobenius_h1=m1, endo_h1=endo))
    return out


def blowup_hilb2_corpus(seed, count):
    """Seeded blowup and Hilbert-square bundles over small semisimple bases."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        q = rng.choice((2, 3, 5))
        kind = rng.random()
        if kind < 0.45:
            base = rng.choice((
                lambda: projective_model(2, q),
                lambda: product_model(projective_model(1, q), projective_model(1, q)),
                lambda: product_model(projective_model(1, q),
                                      abelian_model(1, q, frobenius_h1=random_weil_frobenius(rng, 1, q)[0])),
            ))()
            out.append(blowup_model(base, point_model(q), base.space.n))
        elif kind < 0.7:
            ell = abelian_model(1, q, frobenius_h1=random_weil_frobenius(rng, 1, q)[0])
            base = product_model(ell, projective_model(1, q))
            center = rng.choice((point_model(q), None))
            if center is None:
                out.append(blowup_model(product_model(base, projective_model(1, q)),
                                        projective_model(1, q), 2))
            else:
                out.append(blowup_model(base, center, 2))
        elif kind < 0.9:
            out.append(hilb2_model(projective_model(rng.choice((1, 2)), q)))
        else:
            ell = abelian_model(1, q, frobenius_h1=random_weil_frobenius(rng, 1, q)[0])
            out.append(hilb2_model(ell))
    return out


def conjecture_d_false_model():
    """Planted counter-model: the degree-1 numerical quotient kills the
    dominant eigenvector, so the even-degree comparison fails."""
    space = make_space(2, (1, 0, 2, 0, 1))
    f = GradedMap.from_blocks(space, [((1,),), (), ((4, 0), (0, 1)), (), ((1,),)])
    ns = NumericalStructure(
        space,
        ndims=(1, 1, 1),
        quotients=(la.identity(1), ((Fraction(0), Fraction(1)),), la.identity(1)),
        conjecture_d=False,
    )
    return f, ns


# -- float matrix pairs -------------------------------------------------------------

def random_float_matrix(rng, d, scale=2.0):
    return tuple(tuple(rng.uniform(-scale, scale) for _ in range(d)) for _ in range(d))


def norm_sandwich_pairs(seed, count, dim_cap=8):
    rng = random.Random(seed)
    for _ in range(count):
        d = rng.randint(1, dim_cap)
        yield random_float_matrix(rng, d), random_float_matrix(rng, d)


def scaled_unitary(rng, d, scale=None):
    """scale * orthogonal, via a float QR factorization."""
    import numpy as np

    if scale is None:
        scale = rng.uniform(0.5, 3.0)
    gauss = np.array([[rng.gauss(0, 1) for _ in range(d)] for _ in range(d)])
    qmat, rmat = np.linalg.qr(gauss)
    qmat = qmat @ np.diag(np.sign(np.diag(rmat)))
    return tuple(tuple(float(scale * x) for x in row) for row in qmat)


def planted_jordan_matrix(rng, partition, eigenvalue, entry_bound=3):
    """Similarity conjugate of the Jordan matrix with the given partition."""
    blocks = []
    for size in partition:
        block = [[Fraction(0)] * size for _ in range(size)]
        for i in range(size):
            block[i][i] = Fraction(eigenvalue)
            if i + 1 < size:
                block[i][i + 1] = Fraction(1)
        blocks.append(la.mat(block))
    jordan = la.block_diag(blocks)
    d = len(jordan)
    sim = _random_invertible(rng, d, entry_bound)
    return la.mat_mul(la.mat_mul(sim, jordan), la.inv(sim)), jordan


def all_partitions(total):
    """All partitions of every m <= total, as descending tuples."""
    out = []
    for m in range(1, total + 1):
        out.extend(_partitions_of(m))
    return out


def _partitions_of(m, cap=None):
    cap = cap or m
    if m == 0:
        return [()]
    out = []
    for first in range(min(m, cap), 0, -1):
        for rest in _partitions_of(m - first, first):
            out.append((first,) + rest)
    return out
