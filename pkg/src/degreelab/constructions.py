"""Generators of structured model bundles: exterior-algebra models with a
Frobenius of prescribed eigenvalue moduli, tensor products, blowups, length-2
Hilbert-square invariants, and seeded random semisimple models.

Everything is exact-rational; eigenvalue-modulus constraints are enforced by
construction (exterior powers of validated degree-1 data, orthogonal
conjugations of rotation blocks) and re-checked where cheap.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg as la
from .errors import BadCodimension, NonCommuting, NotWeil, SpaceMismatch
from .model import (
    GradedMap,
    GradedSpace,
    NumericalStructure,
    identity_numerical,
    make_space,
)
from .twist import FrobeniusModel


@dataclass(frozen=True)
class ModelBundle:
    space: GradedSpace
    numerical: NumericalStructure
    frobenius: FrobeniusModel | None
    endos: dict = field(default_factory=dict)      # name -> GradedMap
    over_fq: tuple = ()                            # endo names defined over F_q
    semisimple: bool = False
    conjecture_d: bool = True
    provenance: dict = field(default_factory=dict)

    def validate(self):
        """Exact bundle invariants: descent and Frobenius commutation."""
        from .model import numerical_pushdown

        for name, endo in self.endos.items():
            numerical_pushdown(self.numerical, endo)
        if self.frobenius is not None:
            numerical_pushdown(self.numerical, self.frobenius.map)
            for name in self.over_fq:
                endo = self.endos[name]
                left = self.frobenius.map.compose(endo)
                right = endo.compose(self.frobenius.map)
                for k, (lb, rb) in enumerate(zip(left.blocks, right.blocks)):
                    if lb and not la.mat_eq(lb, rb):
                        raise NonCommuting(
                            f"endo {name!r} does not commute with Frobenius at degree {k}")
        return self


# -- Weil modulus validation -----------------------------------------------------

def _reciprocal_ok(p, q, g):
    # c_{2g-i} == q^(g-i) c_i for the monic coefficient list (leading first)
    for i in range(g + 1):
        if p[2 * g - i] != p[i] * Fraction(q) ** (g - i):
            return False
    return True


def _vieta_reduce(p, q, g):
    """p(x)/x^g as a polynomial in y = x + q/x (degree g, leading-first)."""
    # z_k(y) = x^k + q^k x^{-k}: z_0 = 2, z_1 = y, z_{k+1} = y z_k - q z_{k-1}
    z = [(Fraction(2),), (Fraction(1), Fraction(0))]
    for _ in range(2, g + 1):
        nxt = la.poly_mul((Fraction(1), Fraction(0)), z[-1])
        scaled = tuple(Fraction(q) * c for c in z[-2])
        nxt = _poly_sub(nxt, scaled)
        z.append(nxt)
    acc = (p[g],)
    for i in range(g):
        acc = _poly_add(acc, tuple(p[i] * c for c in z[g - i]))
    return la.poly_trim(acc)


def _poly_add(a, b):
    n = max(len(a), len(b))
    a = (Fraction(0),) * (n - len(a)) + tuple(a)
    b = (Fraction(0),) * (n - len(b)) + tuple(b)
    return tuple(x + y for x, y in zip(a, b))


def _poly_sub(a, b):
    return _poly_add(a, tuple(-c for c in b))


def _sign_at_sqrt(poly, q, sign):
    """Exact sign of a rational polynomial at sign * 2 * sqrt(q).

    Splits x^deg = (2 sign)^deg q^(deg//2) (sqrt(q) for odd deg) into the
    rational part and the sqrt(q)-multiple, then compares squares.
    """
    even = Fraction(0)
    odd = Fraction(0)
    n = len(poly) - 1
    for i, c in enumerate(poly):
        deg = n - i
        base = Fraction((2 * sign) ** deg)
        if deg % 2 == 0:
            even += c * base * Fraction(q) ** (deg // 2)
        else:
            odd += c * base * Fraction(q) ** ((deg - 1) // 2)
    if even == 0 and odd == 0:
        return 0
    if even >= 0 and odd >= 0:
        return 1
    if even <= 0 and odd <= 0:
        return -1
    lhs, rhs = even * even, odd * odd * Fraction(q)
    if lhs == rhs:
        return 0
    if lhs > rhs:
        return 1 if even > 0 else -1
    return 1 if odd > 0 else -1


def _sturm_chain(p):
    chain = [la.poly_monic(p), la.poly_monic(la.poly_deriv(p))]
    while len(chain[-1]) > 1:
        _, rem = la.poly_divmod(chain[-2], chain[-1])
        rem = la.poly_trim(rem)
        if len(rem) == 1 and rem[0] == 0:
            break
        chain.append(la.poly_monic(tuple(-c for c in rem)))
    return chain


def _sign_changes(signs):
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def weil_modulus_check(poly, q, strict=False):
    """All roots of the monic rational polynomial have modulus sqrt(q)?

    Exact: boundary roots +/-sqrt(q) are deflated through x^2 - q, the rest
    is reduced through y = x + q/x and its image must have all real roots
    strictly inside [-2 sqrt(q), 2 sqrt(q)] (Sturm count with exact signs at
    the irrational endpoints).  strict=True rejects boundary roots.
    """
    p = la.poly_monic(tuple(Fraction(c) for c in poly))
    if (len(p) - 1) % 2 != 0:
        return False
    boundary = 0
    factor = (Fraction(1), Fraction(0), Fraction(-q))
    while len(p) > 1:
        quo, rem = la.poly_divmod(p, factor)
        if len(rem) == 1 and rem[0] == 0:
            p = la.poly_monic(quo)
            boundary += 1
        else:
            break
    if strict and boundary:
        return False
    g = (len(p) - 1) // 2
    if g == 0:
        return True
    if not _reciprocal_ok(p, q, g):
        return False
    reduced = _vieta_reduce(p, q, g)
    if len(reduced) - 1 != g:
        return False
    sf = la.squarefree_part(reduced)
    chain = _sturm_chain(sf)
    lo_signs = [_sign_at_sqrt(c, q, -1) for c in chain]
    hi_signs = [_sign_at_sqrt(c, q, +1) for c in chain]
    if lo_signs[0] == 0 or hi_signs[0] == 0:
        return False        # y-root at the endpoint: a +/-sqrt(q) root survived
    inside = _sign_changes(lo_signs) - _sign_changes(hi_signs)
    return inside == len(sf) - 1


# -- abelian-variety-like exterior algebra models ---------------------------------

def _subset_index(n, k):
    return {s: i for i, s in enumerate(itertools.combinations(range(n), k))}


def _complement_pairing(two_g, k):
    """Sign-free wedge pairing: [S, T] = 1 iff T is the complement of S."""
    rows = list(itertools.combinations(range(two_g), k))
    cols_index = _subset_index(two_g, two_g - k)
    out = []
    for s in rows:
        comp = tuple(sorted(set(range(two_g)) - set(s)))
        row = [Fraction(0)] * len(cols_index)
        row[cols_index[comp]] = Fraction(1)
        out.append(tuple(row))
    return la.mat(out)


def abelian_model(g, q, weil_poly=None, frobenius_h1=None, endo_h1=None):
    """Exterior-algebra model: degree k is the k-th exterior power of a 2g
    dimensional degree-1 piece carrying a Frobenius with eigenvalue moduli
    sqrt(q), plus an optional commuting integer endomorphism."""
    if (weil_poly is None) == (frobenius_h1 is None):
        raise NotWeil("give exactly one of weil_poly or frobenius_h1")
    if weil_poly is not None:
        p = la.poly_monic(tuple(Fraction(c) for c in weil_poly))
        if len(p) - 1 != 2 * g:
            raise NotWeil(f"polynomial degree {len(p) - 1}, want {2 * g}")
        m1 = la.companion(p)
    else:
        m1 = la.to_fraction(frobenius_h1)
        if la.shape(m1) != (2 * g, 2 * g):
            raise NotWeil(f"degree-1 block must be {2 * g} x {2 * g}")
        p = la.charpoly(m1)
    if not weil_modulus_check(p, q):
        raise NotWeil(f"roots of {p} do not all have modulus sqrt({q})")

    e1 = None
    if endo_h1 is not None:
        e1 = la.to_fraction(endo_h1)
        if la.shape(e1) != (2 * g, 2 * g):
            raise NonCommuting(f"endo block must be {2 * g} x {2 * g}")
        if not la.mat_eq(la.mat_mul(e1, m1), la.mat_mul(m1, e1)):
            raise NonCommuting("endo does not commute with the Frobenius block")

    dims = tuple(math.comb(2 * g, k) for k in range(2 * g + 1))
    pairings = tuple(_complement_pairing(2 * g, k) for k in range(2 * g + 1))
    space = make_space(g, dims, pairings=pairings)
    frob_map = GradedMap(space, tuple(la.exterior_power(m1, k) for k in range(2 * g + 1)))
    frobenius = FrobeniusModel(q=q, map=frob_map)
    endos = {}
    over_fq = ()
    if e1 is not None:
        endos["endo"] = GradedMap(space, tuple(
            la.exterior_power(e1, k) for k in range(2 * g + 1)))
        over_fq = ("endo",)
    semisimple = la.is_squarefree(la.minimal_polynomial(m1))
    return ModelBundle(
        space=space,
        numerical=identity_numerical(space),
        frobenius=frobenius,
        endos=endos,
        over_fq=over_fq,
        semisimple=semisimple,
        provenance={"kind": "abelian", "g": g, "q": q,
                    "charpoly": [str(c) for c in p]},
    ).validate()


# -- Kunneth products ---------------------------------------------------------------

def _kunneth_layout(dx, dy, k):
    """Summands (i, k-i) with their offsets in the degree-k piece."""
    layout = []
    offset = 0
    for i in range(0, k + 1):
        j = k - i
        if i < len(dx) and j < len(dy) and dx[i] and dy[j]:
            layout.append((i, j, offset, dx[i] * dy[j]))
            offset += dx[i] * dy[j]
    return layout, offset


def _place_block(total_rows, total_cols, placements):
    out = [[Fraction(0)] * total_cols for _ in range(total_rows)]
    for r0, c0, block in placements:
        for i, row in enumerate(block):
            for j, x in enumerate(row):
                out[r0 + i][c0 + j] = x
    return la.mat(out)


def _tensor_map_blocks(xb, yb, mx, my, dims):
    nz = len(dims) - 1
    blocks = []
    for k in range(nz + 1):
        layout, total = _kunneth_layout(xb.space.dims, yb.space.dims, k)
        if total == 0:
            blocks.append(())
            continue
        placements = [(off, off, la.kron(mx.blocks[i], my.blocks[j]))
                      for i, j, off, _ in layout]
        blocks.append(_place_block(total, total, placements))
    return blocks


def product_model(xb, yb):
    """Tensor-product bundle: dims by convolution, maps by Kunneth blocks."""
    dx, dy = xb.space.dims, yb.space.dims
    nz = xb.space.n + yb.space.n
    dims = []
    for k in range(2 * nz + 1):
        _, total = _kunneth_layout(dx, dy, k)
        dims.append(total)
    dims = tuple(dims)

    pairings = []
    for k in range(2 * nz + 1):
        layout_k, rows = _kunneth_layout(dx, dy, k)
        layout_c, cols = _kunneth_layout(dx, dy, 2 * nz - k)
        if rows == 0 or cols == 0:
            pairings.append(())
            continue
        offsets_c = {(i, j): off for i, j, off, _ in layout_c}
        placements = []
        for i, j, off, _ in layout_k:
            partner = (2 * xb.space.n - i, 2 * yb.space.n - j)
            placements.append((off, offsets_c[partner],
                               la.kron(xb.space.pairings[i], yb.space.pairings[j])))
        pairings.append(_place_block(rows, cols, placements))

    ample = None
    powers = []
    for jj in range(nz + 1):
        layout, total = _kunneth_layout(dx, dy, 2 * jj)
        vec = [Fraction(0)] * total
        for i, j, off, _ in layout:
            if i % 2 or j % 2:
                continue
            a, b = i // 2, j // 2
            hx = xb.space.ample_powers[a] if a <= xb.space.n else ()
            hy = yb.space.ample_powers[b] if b <= yb.space.n else ()
            if not hx or not hy:
                continue
            coeff = Fraction(math.comb(jj, a))
            for ai, xv in enumerate(hx):
                for bi, yv in enumerate(hy):
                    vec[off + ai * len(hy) + bi] += coeff * xv * yv
        powers.append(tuple(vec))
    if len(powers) > 1 and powers[1]:
        ample = powers[1]
    space = make_space(nz, dims, pairings=pairings, ample=ample, ample_powers=powers)

    # numerical: even (X) x even (Y) summands through the factor quotients
    ndims = []
    quotients = []
    for j in range(nz + 1):
        layout, total = _kunneth_layout(dx, dy, 2 * j)
        rows_parts = []
        e_j = 0
        for a in range(j + 1):
            b = j - a
            if a > xb.space.n or b > yb.space.n:
                continue
            ex, ey = xb.numerical.ndims[a], yb.numerical.ndims[b]
            if ex and ey and dx[2 * a] and dy[2 * b]:
                rows_parts.append((a, b, ex * ey))
                e_j += ex * ey
        ndims.append(e_j)
        if e_j == 0:
            quotients.append(())
            continue
        offsets = {(i, jj): off for i, jj, off, _ in layout}
        placements = []
        r0 = 0
        for a, b, rows_count in rows_parts:
            block = la.kron(xb.numerical.quotients[a], yb.numerical.quotients[b])
            placements.append((r0, offsets[(2 * a, 2 * b)], block))
            r0 += rows_count
        quotients.append(_place_block(e_j, total, placements))
    numerical = NumericalStructure(space, tuple(ndims), tuple(quotients),
                                   conjecture_d=xb.conjecture_d and yb.conjecture_d)

    frobenius = None
    if xb.frobenius and yb.frobenius and xb.frobenius.q == yb.frobenius.q:
        fr_blocks = _tensor_map_blocks(xb, yb, xb.frobenius.map, yb.frobenius.map, dims)
        frobenius = FrobeniusModel(q=xb.frobenius.q,
                                   map=GradedMap(space, tuple(fr_blocks)))

    endos = {}
    over_fq = []
    names = set(xb.endos) | set(yb.endos)
    for name in sorted(names):
        mx = xb.endos.get(name, GradedMap.identity(xb.space))
        my = yb.endos.get(name, GradedMap.identity(yb.space))
        endos[name] = GradedMap(space, tuple(_tensor_map_blocks(xb, yb, mx, my, dims)))
        marked_x = name not in xb.endos or name in xb.over_fq
        marked_y = name not in yb.endos or name in yb.over_fq
        if marked_x and marked_y and frobenius is not None:
            over_fq.append(name)

    return ModelBundle(
        space=space,
        numerical=numerical,
        frobenius=frobenius,
        endos=endos,
        over_fq=tuple(over_fq),
        semisimple=xb.semisimple and yb.semisimple,
        conjecture_d=xb.conjecture_d and yb.conjecture_d,
        provenance={"kind": "product",
                    "left": xb.provenance, "right": yb.provenance},
    ).validate()


# -- blowups -----------------------------------------------------------------------

def _blowup_layout(dx, da, n, r, k):
    """X-part then exceptional summands j = 1..r-1 holding degree k-2j of A."""
    layout = [("X", None, 0, dx[k] if 0 <= k < len(dx) else 0)]
    offset = layout[0][3]
    for j in range(1, r):
        deg = k - 2 * j
        d = da[deg] if 0 <= deg < len(da) else 0
        if d:
            layout.append(("E", j, offset, d))
            offset += d
    return [entry for entry in layout if entry[3]], offset


def blowup_model(xb, ab, r):
    """Blowup along a center model of codimension r: the degree-k piece gains
    one copy of degree k-2j of the center for each j = 1..r-1, with the
    Frobenius twisted by q^j on the j-th summand."""
    if r < 1:
        raise BadCodimension(f"codimension must be >= 1, got {r}")
    n = xb.space.n
    if ab.space.n != n - r:
        raise BadCodimension(
            f"center half-dimension {ab.space.n} incompatible with codimension {r}")
    dx, da = xb.space.dims, ab.space.dims
    dims = []
    for k in range(2 * n + 1):
        _, total = _blowup_layout(dx, da, n, r, k)
        dims.append(total)
    dims = tuple(dims)

    pairings = []
    for k in range(2 * n + 1):
        layout_k, rows = _blowup_layout(dx, da, n, r, k)
        layout_c, cols = _blowup_layout(dx, da, n, r, 2 * n - k)
        if rows == 0 or cols == 0:
            pairings.append(())
            continue
        offsets_c = {(tag, j): off for tag, j, off, _ in layout_c}
        placements = []
        for tag, j, off, _ in layout_k:
            if tag == "X":
                placements.append((off, offsets_c[("X", None)], xb.space.pairings[k]))
            else:
                placements.append((off, offsets_c[("E", r - j)],
                                   ab.space.pairings[k - 2 * j]))
        pairings.append(_place_block(rows, cols, placements))

    def embed_vector(vec, k):
        layout_k, total = _blowup_layout(dx, da, n, r, k)
        out = [Fraction(0)] * total
        for tag, j, off, d in layout_k:
            if tag == "X":
                for i, x in enumerate(vec):
                    out[off + i] = x
        return tuple(out)

    powers = tuple(embed_vector(xb.space.ample_powers[j], 2 * j)
                   if xb.space.ample_powers[j] else ()
                   for j in range(n + 1))
    ample = powers[1] if n >= 1 and powers[1] else None
    space = make_space(n, dims, pairings=pairings, ample=ample, ample_powers=powers)

    if xb.frobenius is None or ab.frobenius is None or xb.frobenius.q != ab.frobenius.q:
        raise SpaceMismatch("blowup needs matching Frobenius data on both bundles")
    q = xb.frobenius.q
    fr_blocks = []
    for k in range(2 * n + 1):
        layout_k, total = _blowup_layout(dx, da, n, r, k)
        if total == 0:
            fr_blocks.append(())
            continue
        placements = []
        for tag, j, off, _ in layout_k:
            if tag == "X":
                placements.append((off, off, xb.frobenius.map.blocks[k]))
            else:
                placements.append((off, off, la.mat_scale(Fraction(q) ** j,
                                                          ab.frobenius.map.blocks[k - 2 * j])))
        fr_blocks.append(_place_block(total, total, placements))
    frobenius = FrobeniusModel(q=q, map=GradedMap(space, tuple(fr_blocks)))

    ndims = []
    quotients = []
    for m in range(n + 1):
        k = 2 * m
        layout_k, total = _blowup_layout(dx, da, n, r, k)
        parts = []
        e_m = 0
        for tag, j, off, _ in layout_k:
            if tag == "X":
                e = xb.numerical.ndims[m]
                if e:
                    parts.append((off, xb.numerical.quotients[m], e))
                    e_m += e
            else:
                a_deg = m - j
                e = ab.numerical.ndims[a_deg] if 0 <= a_deg <= ab.space.n else 0
                if e:
                    parts.append((off, ab.numerical.quotients[a_deg], e))
                    e_m += e
        ndims.append(e_m)
        if e_m == 0:
            quotients.append(())
            continue
        placements = []
        r0 = 0
        for off, block, e in parts:
            placements.append((r0, off, block))
            r0 += e
        quotients.append(_place_block(e_m, total, placements))
    numerical = NumericalStructure(space, tuple(ndims), tuple(quotients),
                                   conjecture_d=xb.conjecture_d and ab.conjecture_d)

    endos = {"frobenius_square": frobenius.map.power(2)}
    caveat = {}
    if any(dims[k] for k in range(1, 2 * n + 1, 2)):
        caveat["odd_cohomology"] = "sign-free model; odd-degree summands carry no Koszul signs"
    return ModelBundle(
        space=space,
        numerical=numerical,
        frobenius=frobenius,
        endos=endos,
        over_fq=("frobenius_square",),
        semisimple=xb.semisimple and ab.semisimple,
        conjecture_d=xb.conjecture_d and ab.conjecture_d,
        provenance={"kind": "blowup", "codimension": r,
                    "base": xb.provenance, "center": ab.provenance, **caveat},
    ).validate()


# -- Hilbert squares ------------------------------------------------------------------

def _swap_matrix(xb, k, dims_z, layout_fn):
    """Kunneth factor swap on the product part, identity on exceptional parts."""
    layout, total = layout_fn(k)
    out = [[Fraction(0)] * total for _ in range(total)]
    dx = xb.space.dims
    for tag, j, off, d in layout:
        if tag == "E":
            for i in range(d):
                out[off + i][off + i] = Fraction(1)
            continue
        # product part of degree k: summands (i, k-i) in ascending i
        sub_layout, _ = _kunneth_layout(dx, dx, k)
        offsets = {(i, jj): o for i, jj, o, _ in sub_layout}
        for i, jj, o, _ in sub_layout:
            for a in range(dx[i]):
                for b in range(dx[jj]):
                    src = off + o + a * dx[jj] + b
                    dst = off + offsets[(jj, i)] + b * dx[i] + a
                    out[dst][src] = Fraction(1)
    return la.mat(out)


def hilb2_model(xb):
    """Invariants of the factor-swap involution on the diagonal blowup of the
    self-product; the swap fixes every exceptional summand."""
    n = xb.space.n
    zb = blowup_model(product_model(xb, xb), xb, n)
    dz = zb.space.dims

    def layout_fn(k):
        return _blowup_layout(tuple(_kunneth_layout(xb.space.dims, xb.space.dims, kk)[1]
                                    for kk in range(4 * n + 1)),
                              xb.space.dims, 2 * n, n, k)

    swaps = []
    inclusions = []
    for k in range(2 * zb.space.n + 1):
        sigma = _swap_matrix(xb, k, dz, layout_fn)
        swaps.append(sigma)
        cols = []
        d = dz[k]
        seen = set()
        for i in range(d):
            img = next((r for r in range(d) if sigma[r][i] != 0), None)
            if img is None or i in seen:
                continue
            if img == i:
                col = [Fraction(0)] * d
                col[i] = Fraction(1)
                cols.append(col)
                seen.add(i)
            elif img > i:
                col = [Fraction(0)] * d
                col[i] = Fraction(1)
                col[img] = Fraction(1)
                cols.append(col)
                seen.update((i, img))
        inclusions.append(la.transpose(la.mat(cols)) if cols else ())

    def restrict_map(m):
        blocks = []
        for k, iota in enumerate(inclusions):
            if not iota:
                blocks.append(())
                continue
            proj = la.mat_mul(la.inv(la.mat_mul(la.transpose(iota), iota)),
                              la.transpose(iota))
            mk = la.mat_mul(m.blocks[k], iota)
            restricted = la.mat_mul(proj, mk)
            if not la.mat_eq(la.mat_mul(iota, restricted), mk):
                raise SpaceMismatch(f"map does not preserve the invariants at degree {k}")
            blocks.append(restricted)
        return blocks

    dims = tuple(la.shape(iota)[1] if iota else 0 for iota in inclusions)
    pairings = []
    for k in range(2 * zb.space.n + 1):
        iota_k, iota_c = inclusions[k], inclusions[2 * zb.space.n - k]
        if not iota_k or not iota_c:
            pairings.append(())
            continue
        pairings.append(la.mat_mul(la.mat_mul(la.transpose(iota_k),
                                              zb.space.pairings[k]), iota_c))

    def restrict_vector(vec, k):
        iota = inclusions[k]
        if not iota or not vec:
            return ()
        gram = la.mat_mul(la.transpose(iota), iota)
        coords = la.mat_vec(la.mat_mul(la.inv(gram), la.transpose(iota)), vec)
        back = la.mat_vec(iota, coords)
        if tuple(back) != tuple(vec):
            raise SpaceMismatch(f"ample power at degree {k} is not swap-invariant")
        return tuple(coords)

    powers = tuple(restrict_vector(zb.space.ample_powers[j], 2 * j)
                   for j in range(zb.space.n + 1))
    ample = powers[1] if powers[1] else None
    space = make_space(zb.space.n, dims, pairings=pairings, ample=ample,
                       ample_powers=powers)

    frobenius = FrobeniusModel(q=zb.frobenius.q,
                               map=GradedMap(space, tuple(restrict_map(zb.frobenius.map))))

    ndims = []
    quotients = []
    for j in range(zb.space.n + 1):
        iota = inclusions[2 * j]
        qz = zb.numerical.quotients[j]
        if not iota or not qz:
            ndims.append(0)
            quotients.append(())
            continue
        reduced = la.row_space_basis(la.mat_mul(qz, iota))
        ndims.append(la.shape(reduced)[0])
        quotients.append(reduced)
    numerical = NumericalStructure(space, tuple(ndims), tuple(quotients),
                                   conjecture_d=zb.conjecture_d)

    endos = {"frobenius_square": frobenius.map.power(2)}
    caveat = {}
    if any(xb.space.dims[k] for k in range(1, 2 * n + 1, 2)):
        caveat["odd_cohomology"] = "sign-free swap invariants; odd classes carry no signs"
    return ModelBundle(
        space=space,
        numerical=numerical,
        frobenius=frobenius,
        endos=endos,
        over_fq=("frobenius_square",),
        semisimple=zb.semisimple,
        conjecture_d=zb.conjecture_d,
        provenance={"kind": "hilb2", "base": xb.provenance, **caveat},
    ).validate()


def involution_trace_dims(xb):
    """Independent invariant-dimension count: (dim + trace of the swap) / 2."""
    n = xb.space.n
    zb = blowup_model(product_model(xb, xb), xb, n)

    def layout_fn(k):
        return _blowup_layout(tuple(_kunneth_layout(xb.space.dims, xb.space.dims, kk)[1]
                                    for kk in range(4 * n + 1)),
                              xb.space.dims, 2 * n, n, k)

    out = []
    for k in range(2 * zb.space.n + 1):
        sigma = _swap_matrix(xb, k, zb.space.dims, layout_fn)
        tr = sum(sigma[i][i] for i in range(len(sigma)))
        out.append((zb.space.dims[k] + int(tr)) // 2)
    return tuple(out)


# -- projective-space-like and random models ------------------------------------------

def projective_model(n, q):
    """Multigraded point-count model of projective n-space: one class in each
    even degree, Frobenius q^j on degree 2j."""
    dims = tuple(1 if k % 2 == 0 else 0 for k in range(2 * n + 1))
    space = make_space(n, dims)
    blocks = tuple(((Fraction(q) ** (k // 2),),) if k % 2 == 0 else ()
                   for k in range(2 * n + 1))
    frobenius = FrobeniusModel(q=q, map=GradedMap(space, blocks))
    return ModelBundle(
        space=space,
        numerical=identity_numerical(space),
        frobenius=frobenius,
        endos={},
        semisimple=True,
        provenance={"kind": "projective", "n": n, "q": q},
    ).validate()


def point_model(q):
    return projective_model(0, q)


def _pythagorean_rotation(rng):
    while True:
        a, b = rng.randint(1, 9), rng.randint(1, 9)
        if a != b:
            break
    c = Fraction(a * a - b * b, a * a + b * b)
    s = Fraction(2 * a * b, a * a + b * b)
    return c, s


def random_rational_orthogonal(dim, rng, sweeps=2):
    """Exact orthogonal matrix: product of Pythagorean Givens rotations and a
    signed permutation."""
    out = [list(row) for row in la.identity(dim)]
    for _ in range(sweeps * max(dim - 1, 0)):
        i, j = rng.sample(range(dim), 2) if dim >= 2 else (0, 0)
        if i == j:
            continue
        c, s = _pythagorean_rotation(rng)
        for col in range(dim):
            xi, xj = out[i][col], out[j][col]
            out[i][col] = c * xi - s * xj
            out[j][col] = s * xi + c * xj
    perm = list(range(dim))
    rng.shuffle(perm)
    signs = [rng.choice((Fraction(1), Fraction(-1))) for _ in range(dim)]
    return la.mat(tuple(tuple(signs[i] * out[perm[i]][col] for col in range(dim))
                        for i in range(dim)))


def random_semisimple_model(n, dims, base, seed):
    """Seeded bundle whose degree-k block has all eigenvalue moduli base^(k/2).

    Even degrees are integer multiples of orthogonal-conjugated rotations;
    odd degrees are direct sums of 2x2 blocks [[0, -base^k], [1, 0]] (so odd
    dims must be even), conjugated orthogonally.  Each degree carries the
    rational Gram matrix of its adapted inner product.
    """
    rng = random.Random(seed)
    dims = tuple(int(d) for d in dims)
    for k in range(len(dims)):
        if k % 2 == 1 and dims[k] % 2 == 1:
            raise NotWeil(
                f"odd degree {k} needs even dimension for modulus base^(k/2), got {dims[k]}")
    space = make_space(n, dims)
    blocks = []
    grams = []
    for k, d in enumerate(dims):
        if d == 0:
            blocks.append(())
            grams.append(None)
            continue
        qmat = random_rational_orthogonal(d, rng)
        if k % 2 == 0:
            scale = Fraction(base) ** (k // 2)
            rot_blocks = []
            left = d
            while left >= 2:
                c, s = _pythagorean_rotation(rng)
                rot_blocks.append(((c, -s), (s, c)))
                left -= 2
            if left:
                rot_blocks.append(((rng.choice((Fraction(1), Fraction(-1))),),))
            rot = la.block_diag(rot_blocks)
            core = la.mat_scale(scale, rot)
            gram_core = la.identity(d)
        else:
            c = Fraction(base) ** k
            cell = ((Fraction(0), -c), (Fraction(1), Fraction(0)))
            gcell = ((Fraction(1) / c, Fraction(0)), (Fraction(0), Fraction(1)))
            core = la.block_diag([cell] * (d // 2))
            gram_core = la.block_diag([gcell] * (d // 2))
        block = la.mat_mul(la.mat_mul(qmat, core), la.transpose(qmat))
        gram = la.mat_mul(la.mat_mul(qmat, gram_core), la.transpose(qmat))
        blocks.append(block)
        grams.append(gram)
    frob_map = GradedMap(space, tuple(blocks))
    frobenius = FrobeniusModel(q=base, map=frob_map, gram=tuple(grams))
    return ModelBundle(
        space=space,
        numerical=identity_numerical(space),
        frobenius=frobenius,
        endos={"frobenius_square": frob_map.power(2)},
        over_fq=("frobenius_square",),
        semisimple=True,
        provenance={"kind": "random-semisimple", "n": n, "dims": list(dims),
                    "base": base, "seed": seed},
    ).validate()
