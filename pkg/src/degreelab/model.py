"""Graded linear models: spaces with duality pairings, maps, correspondences.

A space models the total cohomology of a smooth projective n-fold: degrees
0..2n with dims symmetric around n, a nondegenerate pairing P_k between
degree k and degree 2n-k (transpose-compatible, no sign conventions), and a
distinguished "ample" line of power vectors used for degree profiles.

A correspondence class stores, for each degree k, a coefficient matrix for
an element of H^{2n-k} (x) H^k.  Its induced action on degree k is
M_k = u_k^T P_k^T, fixed so that the diagonal class acts as the identity in
every degree and the transpose acts as the pairing-adjoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg as la
from .errors import (
    DegreeOutOfRange,
    DimensionAsymmetry,
    MissingAmple,
    NoFactorization,
    NotEffective,
    SingularPairing,
    SpaceMismatch,
)


@dataclass(frozen=True)
class ScalarField:
    tag: str = "exact-rational"
    tolerance: float = 1e-9

    @property
    def exact(self):
        return self.tag == "exact-rational"


EXACT = ScalarField()
FLOAT = ScalarField(tag="complex-float")


@dataclass(frozen=True)
class GradedSpace:
    n: int
    dims: tuple
    pairings: tuple          # pairings[k]: d_k x d_{2n-k}
    ample: tuple | None      # vector in degree 2, or None when d_2 == 0
    ample_powers: tuple | None  # vectors h^j in degree 2j, j = 0..n
    field: ScalarField = EXACT

    def degree_count(self):
        return 2 * self.n + 1

    def dim(self, k):
        return self.dims[k]

    def check_degree(self, k):
        if not 0 <= k <= 2 * self.n:
            raise DegreeOutOfRange(f"degree {k} outside 0..{2 * self.n}")

    def pair(self, k, x, y):
        """<x, y> for x in degree k, y in degree 2n-k."""
        self.check_degree(k)
        return la.dot(la.vec_mat(x, self.pairings[k]), y)

    def pairing_inverses(self):
        return tuple(la.inv(p) if p else () for p in self.pairings)

    def same_as(self, other):
        return self.n == other.n and self.dims == other.dims


def make_space(n, dims, pairings=None, ample=None, ample_powers=None, field=EXACT):
    """Validated graded space; identity pairings and first-basis-vector ample
    powers are filled in when not supplied."""
    dims = tuple(int(d) for d in dims)
    if len(dims) != 2 * n + 1:
        raise DimensionAsymmetry(f"expected {2 * n + 1} dims, got {len(dims)}")
    for k in range(2 * n + 1):
        if dims[k] != dims[2 * n - k]:
            raise DimensionAsymmetry(
                f"dims[{k}]={dims[k]} != dims[{2 * n - k}]={dims[2 * n - k]}")
        if dims[k] < 0:
            raise DimensionAsymmetry(f"dims[{k}] negative")
    if dims[0] < 1:
        raise DimensionAsymmetry("degree-0 dimension must be at least 1")

    coerce = Fraction if field.exact else float
    if pairings is None:
        pairings = tuple(la.identity(dims[k]) for k in range(2 * n + 1))
    else:
        pairings = tuple(la.mat([[coerce(x) for x in row] for row in p]) if p else ()
                         for p in pairings)
        for k, p in enumerate(pairings):
            want = (dims[k], dims[2 * n - k])
            if want == (0, 0):
                continue
            if la.shape(p) != want:
                raise SingularPairing(f"pairing {k} has shape {la.shape(p)}, want {want}")
            if la.rank(p) < dims[k]:
                raise SingularPairing(f"pairing {k} is rank-deficient")
        for k in range(2 * n + 1):
            if dims[k] and not la.mat_eq(pairings[2 * n - k], la.transpose(pairings[k])):
                raise SingularPairing(f"pairing {2 * n - k} is not the transpose of pairing {k}")

    if ample is None and n >= 1 and dims[2] > 0:
        ample = tuple(coerce(1) if i == 0 else coerce(0) for i in range(dims[2]))
    elif ample is not None:
        ample = tuple(coerce(x) for x in ample)
        if len(ample) != dims[2]:
            raise SingularPairing(f"ample vector length {len(ample)} != d_2 = {dims[2]}")
        if dims[2] > 0 and all(x == 0 for x in ample):
            raise SingularPairing("ample vector must be nonzero when d_2 > 0")

    if ample_powers is None:
        powers = []
        for j in range(n + 1):
            d = dims[2 * j]
            if d == 0:
                powers.append(())
            elif j == 1 and ample is not None:
                powers.append(ample)
            else:
                powers.append(tuple(coerce(1) if i == 0 else coerce(0) for i in range(d)))
        ample_powers = tuple(powers)
    else:
        ample_powers = tuple(tuple(coerce(x) for x in v) for v in ample_powers)
        if len(ample_powers) != n + 1:
            raise SingularPairing(f"need {n + 1} ample powers, got {len(ample_powers)}")
        for j, v in enumerate(ample_powers):
            if len(v) != dims[2 * j]:
                raise SingularPairing(f"ample power {j} has length {len(v)}, want {dims[2 * j]}")

    return GradedSpace(n=n, dims=dims, pairings=pairings, ample=ample,
                       ample_powers=ample_powers, field=field)


@dataclass(frozen=True)
class GradedMap:
    space: GradedSpace
    blocks: tuple   # blocks[k]: d_k x d_k

    def __post_init__(self):
        if len(self.blocks) != self.space.degree_count():
            raise SpaceMismatch("block count does not match the space")
        for k, b in enumerate(self.blocks):
            d = self.space.dims[k]
            if (d, d) != (la.shape(b) if d else (0, 0)):
                if d == 0 and la.shape(b) in ((0, 0),):
                    continue
                raise SpaceMismatch(f"block {k} has shape {la.shape(b)}, want ({d}, {d})")

    def block(self, k):
        self.space.check_degree(k)
        return self.blocks[k]

    def compose(self, other):
        """self after other, per degree."""
        if not self.space.same_as(other.space):
            raise SpaceMismatch("maps on different spaces")
        return GradedMap(self.space, tuple(
            la.mat_mul(a, b) for a, b in zip(self.blocks, other.blocks)))

    def add(self, other):
        return GradedMap(self.space, tuple(
            la.mat_add(a, b) for a, b in zip(self.blocks, other.blocks)))

    def scale(self, c):
        return GradedMap(self.space, tuple(la.mat_scale(c, b) for b in self.blocks))

    def power(self, t):
        return GradedMap(self.space, tuple(la.mat_pow(b, t) if b else b for b in self.blocks))

    def conjugate(self, basis_blocks):
        """B^{-1} M B per degree, for a change of basis."""
        out = []
        for b, s in zip(self.blocks, basis_blocks):
            out.append(la.mat_mul(la.mat_mul(la.inv(s), b), s) if b else b)
        return GradedMap(self.space, tuple(out))

    @classmethod
    def identity(cls, space):
        return cls(space, tuple(la.identity(d) for d in space.dims))

    @classmethod
    def from_blocks(cls, space, blocks):
        coerce = Fraction if space.field.exact else float
        return cls(space, tuple(
            la.mat([[coerce(x) for x in row] for row in b]) if space.dims[k] else ()
            for k, b in enumerate(blocks)))


def graded_map_eq(a, b):
    return all(la.mat_eq(x, y) if x or y else True for x, y in zip(a.blocks, b.blocks))


@dataclass(frozen=True)
class CorrespondenceClass:
    space: GradedSpace
    components: tuple   # components[k]: d_{2n-k} x d_k coefficient matrix
    effective: bool = False

    def __post_init__(self):
        n2 = 2 * self.space.n
        if len(self.components) != n2 + 1:
            raise SpaceMismatch("component count does not match the space")
        for k, u in enumerate(self.components):
            want = (self.space.dims[n2 - k], self.space.dims[k])
            got = la.shape(u) if u else (0, 0)
            if want != got and want != (0, 0):
                raise SpaceMismatch(f"component {k} has shape {got}, want {want}")
        if self.effective:
            profile = degree_profile(self)
            if any(d < 0 for d in profile):
                raise NotEffective(f"negative degree profile {profile}")

    def component(self, k):
        self.space.check_degree(k)
        return self.components[k]


def make_correspondence(space, components, effective=False):
    coerce = Fraction if space.field.exact else float
    n2 = 2 * space.n
    comps = []
    for k in range(n2 + 1):
        if space.dims[k] == 0 or space.dims[n2 - k] == 0:
            comps.append(())
        else:
            comps.append(la.mat([[coerce(x) for x in row] for row in components[k]]))
    return CorrespondenceClass(space, tuple(comps), effective=effective)


def diagonal_class(space):
    """The class acting as the identity in every degree: component k is P_k^{-1}."""
    comps = []
    for k in range(2 * space.n + 1):
        comps.append(la.inv(space.pairings[k]) if space.dims[k] else ())
    return CorrespondenceClass(space, tuple(comps))


def correspondence_action(u):
    """Induced per-degree map; contraction of each component against the pairing."""
    space = u.space
    blocks = []
    for k in range(2 * space.n + 1):
        if space.dims[k] == 0:
            blocks.append(())
            continue
        blocks.append(la.mat_mul(la.transpose(u.components[k]),
                                 la.transpose(space.pairings[k])))
    return GradedMap(space, tuple(blocks))


def graph_class(m):
    """The unique correspondence whose action is the given graded map."""
    space = m.space
    comps = []
    for k in range(2 * space.n + 1):
        if space.dims[k] == 0:
            comps.append(())
            continue
        # M = u^T P^T  =>  u = P^{-1} M^T
        comps.append(la.mat_mul(la.inv(space.pairings[k]), la.transpose(m.blocks[k])))
    return CorrespondenceClass(space, tuple(comps))


def transpose(u):
    """Swap the two legs: component k becomes the transpose of component 2n-k."""
    n2 = 2 * u.space.n
    comps = tuple(la.transpose(u.components[n2 - k]) if u.components[n2 - k] else ()
                  for k in range(n2 + 1))
    return CorrespondenceClass(u.space, comps)


def compose(u, v):
    """Contraction through the pairing; action(compose(u, v)) = action(v) o action(u)."""
    if not u.space.same_as(v.space):
        raise SpaceMismatch("correspondences on different spaces")
    space = u.space
    comps = []
    for k in range(2 * space.n + 1):
        if space.dims[k] == 0:
            comps.append(())
            continue
        comps.append(la.mat_mul(la.mat_mul(u.components[k], space.pairings[k]),
                                v.components[k]))
    return CorrespondenceClass(space, tuple(comps))


def scale_class(u, c):
    return CorrespondenceClass(u.space, tuple(
        la.mat_scale(c, comp) if comp else () for comp in u.components))


def trace_component(u, k):
    """Trace of the degree-k action; equals the slot pairing against the diagonal."""
    u.space.check_degree(k)
    if u.space.dims[k] == 0:
        return Fraction(0) if u.space.field.exact else 0.0
    m = la.mat_mul(la.transpose(u.components[k]), la.transpose(u.space.pairings[k]))
    return sum(m[i][i] for i in range(len(m)))


def class_pairing(u, v, k):
    """Slot-k pairing of two classes: Tr(action_k(u) . action_k(v))."""
    space = u.space
    space.check_degree(k)
    if space.dims[k] == 0:
        return Fraction(0) if space.field.exact else 0.0
    pt = la.transpose(space.pairings[k])
    m = la.mat_mul(la.mat_mul(la.transpose(u.components[k]), pt),
                   la.mat_mul(la.transpose(v.components[k]), pt))
    return sum(m[i][i] for i in range(len(m)))


def product_pushforward(phi, psi, f):
    """Pushforward of f along the product of two correspondences.

    Returns psi o f o phi^T, so the induced action is
    action(phi^T) . action(f) . action(psi).
    """
    for other in (psi, f):
        if not phi.space.same_as(other.space):
            raise SpaceMismatch("correspondences on different spaces")
    return compose(compose(psi, f), transpose(phi))


def degree_profile(u):
    """deg_j(u) = <action(u) h^j, h^{n-j}> for the stored ample powers."""
    space = u.space
    if space.ample_powers is None:
        raise MissingAmple("space carries no ample power vectors")
    action = correspondence_action(u)
    out = []
    for j in range(space.n + 1):
        hj = space.ample_powers[j]
        hc = space.ample_powers[space.n - j]
        if not hj or not hc:
            out.append(Fraction(0) if space.field.exact else 0.0)
            continue
        out.append(space.pair(2 * j, la.mat_vec(action.blocks[2 * j], hj), hc))
    return tuple(out)


@dataclass(frozen=True)
class NumericalStructure:
    space: GradedSpace
    ndims: tuple            # e_0..e_n
    quotients: tuple        # quotients[j]: e_j x d_{2j}, full row rank
    conjecture_d: bool = True

    def __post_init__(self):
        if len(self.ndims) != self.space.n + 1:
            raise SpaceMismatch("need n+1 numerical dimensions")
        for j, q in enumerate(self.quotients):
            e, d = self.ndims[j], self.space.dims[2 * j]
            if e > d:
                raise SpaceMismatch(f"numerical rank {e} exceeds d_{2 * j} = {d}")
            if e == 0:
                continue
            if la.shape(q) != (e, d):
                raise SpaceMismatch(f"quotient {j} has shape {la.shape(q)}, want ({e}, {d})")
            if la.rank(q) < e:
                raise SpaceMismatch(f"quotient {j} is not of full row rank")


def identity_numerical(space):
    """Even-degree identity quotients: N^j is all of degree 2j."""
    return NumericalStructure(
        space,
        ndims=tuple(space.dims[2 * j] for j in range(space.n + 1)),
        quotients=tuple(la.identity(space.dims[2 * j]) for j in range(space.n + 1)),
    )


def numerical_pushdown(ns, f):
    """Induced maps on the numerical quotients; exact compatibility required."""
    if not ns.space.same_as(f.space):
        raise SpaceMismatch("numerical structure and map on different spaces")
    out = []
    for j in range(ns.space.n + 1):
        e = ns.ndims[j]
        if e == 0:
            out.append(())
            continue
        q = ns.quotients[j]
        qf = la.mat_mul(q, f.blocks[2 * j])
        qqt = la.mat_mul(q, la.transpose(q))
        g = la.mat_mul(la.mat_mul(qf, la.transpose(q)), la.inv(qqt))
        if not la.mat_eq(la.mat_mul(g, q), qf):
            raise NoFactorization(
                f"map does not descend through quotient {j}: kernel not invariant")
        out.append(g)
    return tuple(out)
