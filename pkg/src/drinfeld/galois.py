"""Empirical Galois images: Frobenius matrices on reduced torsion.

At a good prime l (not (T)) the Frobenius substitution acts on the T-torsion
of the reduced module as x -> x^|F_l|. Two routes produce its matrix:

* root route: factor data is obtained directly by computing the kernel of
  the linearized torsion polynomial inside the splitting field GF(q^(m d)),
  choosing the canonical basis (first roots in enumeration order extending
  an independent set) and writing the power map in that basis. Every sample
  is verified against the root-action oracle. Available whenever the
  splitting field fits the integer-encoding envelope.

* quotient route: in the twisted quotient N = L{tau}/L{tau} phi_T, left
  multiplication by tau^m is L-linear; its matrix P satisfies B^(Q) = P^T B
  for the evaluation pairing B(alpha, u) = u(alpha), so the Frobenius on the
  torsion is conjugate to P over the algebraic closure. The sample is the
  rational canonical form of P pulled back to F_q. This stays inside
  GF(q^m) and covers primes whose splitting fields are out of envelope.

Both routes give the same conjugacy class; tests cross-check them.

Accumulation joins sample classes into a matrix group. A new sample whose
class is already represented is skipped; otherwise, when the ambient group
is small enough to search, the conjugate realizing the smallest join is
chosen (deterministically). Sampling only ever certifies subgroups, so a
negative verdict is reported as "not full within budget", never as
non-surjectivity.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .errors import EnvelopeError
from .gf import MAX_FIELD_SIZE, Extension, FieldCtx, extension_field
from .matgroup import (
    MatrixGroup,
    MatrixGroupEvidence,
    action_irreducible,
    charpoly,
    conjugacy_label,
    det,
    det_subgroup_order,
    gl_order,
    identity,
    invariant_factors,
    mat_inv,
    mat_mul,
    matrix_order,
    mt2_from_parts,
    mt2_identity,
    mt2_is_scalar,
    mt2_mul,
    mt2_reduce,
    nonscalar_identity_mod_T,
    rational_canonical_form,
    verdict_full_gl,
)
from .modules import DrinfeldModule, ReducedModule, reduced_module, reduction_at
from .polyring import Poly, PrimeIdeal, prime_T, primes_up_to

JOIN_SEARCH_LIMIT = 2048   # exhaustive conjugate search below this |GL_n(F_q)|
MOD_T2_Q_LIMIT = 5         # torsion degree q^4 <= 625 at this scale


@dataclass
class FrobeniusSample:
    prime: PrimeIdeal
    matrix: tuple                 # over F_q (level 1) or pairs mod T^2 (level 2)
    splitting_degree: int
    char_poly: Poly               # of the mod-T action; basis independent
    det_value: int                # mod-T determinant, basis independent
    route: str                    # "roots" or "quotient"

    def to_dict(self) -> dict:
        return {
            "prime": str(self.prime),
            "matrix": [list(r) for r in self.matrix],
            "splittingDegree": self.splitting_degree,
            "charPoly": list(self.char_poly.coeffs),
            "det": self.det_value,
            "route": self.route,
        }


# ---------------------------------------------------------------------------
# Quotient (twisted algebra) route
# ---------------------------------------------------------------------------

def _frobenius_quotient_matrix(rm: ReducedModule) -> tuple:
    """Matrix over L of tau^m acting on L{tau}/L{tau} phi_T by left
    multiplication, in the basis (1, tau, ..., tau^(r-1)).

    tau acts semilinearly: theta(w) has coordinates Theta * w^(q), so the
    m-th power is the twisted product Theta Theta^(q) ... Theta^(q^(m-1)),
    which is L-linear because q^m-powering fixes L.
    """
    L = rm.residue_field
    q = rm.module.q
    r = rm.module.rank
    lead_inv = L.inv(rm.coeffs[-1])
    low = (rm.rho,) + rm.coeffs[:-1]
    theta = [[0] * r for _ in range(r)]
    for i in range(r - 1):
        theta[i + 1][i] = 1
    for i in range(r):
        theta[i][r - 1] = L.neg(L.mul(lead_inv, low[i]))
    theta = tuple(tuple(row) for row in theta)
    P = theta
    twisted = theta
    for _ in range(rm.prime.degree - 1):
        twisted = tuple(tuple(L.pow(c, q) for c in row) for row in twisted)
        P = mat_mul(L, P, twisted)
    return P


def _pull_back_poly(ext: Extension, f: Poly) -> Poly:
    base = ext.base
    out = []
    for c in f.coeffs:
        c0 = ext.section(c)
        if c0 is None:
            raise RuntimeError("invariant factor has a coefficient outside F_q")
        out.append(c0)
    return Poly(base, out)


def _sample_via_quotient(rm: ReducedModule) -> FrobeniusSample:
    L = rm.residue_field
    base = rm.module.ctx
    P = _frobenius_quotient_matrix(rm)
    factors = [_pull_back_poly(rm.ext, f) for f in invariant_factors(L, P)]
    X = rational_canonical_form(base, factors)
    d = matrix_order(base, X, cap=base.p * (base.q**rm.module.rank))
    return FrobeniusSample(
        prime=rm.prime,
        matrix=X,
        splitting_degree=d,
        char_poly=charpoly(base, X),
        det_value=det(base, X),
        route="quotient",
    )


# ---------------------------------------------------------------------------
# Root route
# ---------------------------------------------------------------------------

def _fp_kernel(p: int, columns: list[list[int]], n: int) -> list[list[int]]:
    """Kernel basis of the F_p-linear map with the given image columns."""
    rows = [[columns[j][i] for j in range(len(columns))] for i in range(n)]
    ncols = len(columns)
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, n) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * ncols
        vec[fc] = 1
        for rr, pc in enumerate(pivots):
            vec[pc] = (-rows[rr][fc]) % p
        basis.append(vec)
    return basis


class _TorsionSpace:
    """Roots of a linearized polynomial inside an explicit splitting field."""

    def __init__(self, rm: ReducedModule, pairs: list[tuple[int, int]],
                 degree: int):
        # pairs live over L; lift everything into E = GF(q^(m*degree))
        L = rm.residue_field
        self.rm = rm
        self.ext_LE = extension_field(L, degree)
        self.E = self.ext_LE.field
        self.pairs = [(i, self.ext_LE.embed(c)) for i, c in pairs]
        base = rm.module.ctx
        self.gamma = self.ext_LE.embed(rm.ext.embed(base.gen))  # F_q generator
        self.k = base.k
        self.q = base.q

    def apply(self, x: int) -> int:
        E = self.E
        acc = 0
        power = x
        prev = 0
        for i, c in self.pairs:
            while prev < i:
                power = E.pow(power, self.q)
                prev += 1
            if c:
                acc = E.add(acc, E.mul(c, power))
        return acc

    def roots(self) -> list[int]:
        E = self.E
        p = E.p
        n = E.k
        cols = []
        for j in range(n):
            img = self.apply(p**j if j else 1)
            cols.append(list(E.coords(img)))
        kernel = _fp_kernel(p, cols, n)
        roots = []
        for mask in range(p ** len(kernel)):
            acc = [0] * n
            t = mask
            for vec in kernel:
                c = t % p
                t //= p
                if c:
                    acc = [(a + c * b) % p for a, b in zip(acc, vec)]
            roots.append(E.encode(acc))
        return sorted(roots)

    def fq_scalars(self) -> list[int]:
        """Images in E of the elements of F_q (the scalar action phi_c)."""
        base = self.rm.module.ctx
        g = self.gamma
        out = []
        for c in base.elements():
            acc = 0
            for s, digit in enumerate(base.coords(c)):
                if digit:
                    acc = self.E.add(
                        acc, self.E.mul(digit % self.E.p, self.E.pow(g, s)))
            out.append(acc)
        return out


def _greedy_fq_basis(ts: _TorsionSpace, roots: list[int], rank: int,
                     order_seed: Optional[int]) -> list[int]:
    """First roots in enumeration order extending an F_q-independent set."""
    E = ts.E
    p = E.p
    n = E.k
    scalars = ts.fq_scalars()
    candidates = [x for x in roots if x]
    if order_seed is not None:
        random.Random(order_seed).shuffle(candidates)
    span_rows: list[list[int]] = []

    def try_extend(vecs) -> bool:
        rows = [list(r) for r in span_rows]
        added = False
        for v in vecs:
            coords = list(E.coords(v))
            for row in rows:
                piv = next((i for i, c in enumerate(row) if c), None)
                if piv is not None and coords[piv]:
                    f = coords[piv] * pow(row[piv], p - 2, p) % p
                    coords = [(a - f * b) % p for a, b in zip(coords, row)]
            if any(coords):
                rows.append(coords)
                added = True
        if added:
            span_rows[:] = rows
        return added

    basis = []
    for x in candidates:
        multiples = [E.mul(s, x) for s in scalars if s]
        before = len(span_rows)
        if try_extend(multiples) and len(span_rows) == before + ts.k:
            basis.append(x)
        if len(basis) == rank:
            return basis
        # roll back partial extensions that did not add a full F_q-line
        if len(span_rows) != len(basis) * ts.k:
            del span_rows[len(basis) * ts.k:]
    raise RuntimeError("failed to extract an F_q-basis of the torsion space")


def _fq_coordinates(ts: _TorsionSpace, basis: list[int], y: int) -> tuple:
    """Write y as sum c_i b_i with c_i in F_q, via an F_p linear solve."""
    E = ts.E
    p = E.p
    n = E.k
    base = ts.rm.module.ctx
    cols = []
    gens = []
    for b in basis:
        for s in range(ts.k):
            scaled = E.mul(E.pow(ts.gamma, s), b) if s else b
            cols.append(list(E.coords(scaled)))
            gens.append((b, s))
    aug = [[cols[j][i] for j in range(len(cols))] + [E.coords(y)[i]]
           for i in range(n)]
    ncols = len(cols)
    r = 0
    pivots = []
    for c in range(ncols):
        piv = next((i for i in range(r, n) if aug[i][c] % p), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][c], p - 2, p)
        aug[r] = [x * inv % p for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] % p:
                f = aug[i][c]
                aug[i] = [(x - f * z) % p for x, z in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, n):
        if aug[i][ncols] % p:
            raise RuntimeError("element outside the torsion span")
    sol = [0] * ncols
    for rr, pc in enumerate(pivots):
        sol[pc] = aug[rr][ncols]
    out = []
    for i in range(len(basis)):
        digits = sol[i * ts.k:(i + 1) * ts.k]
        out.append(base.encode(digits))
    return tuple(out)


def _sample_via_roots(rm: ReducedModule, degree: int,
                      order_seed: Optional[int]) -> FrobeniusSample:
    base = rm.module.ctx
    rank = rm.module.rank
    pairs = list(enumerate(rm.phi_T_bar().coeffs))
    ts = _TorsionSpace(rm, pairs, degree)
    roots = ts.roots()
    if len(roots) != base.q**rank:
        raise RuntimeError(
            f"expected {base.q**rank} torsion roots, found {len(roots)}")
    basis = _greedy_fq_basis(ts, roots, rank, order_seed)
    Q = rm.residue_field.q
    cols = [_fq_coordinates(ts, basis, ts.E.pow(b, Q)) for b in basis]
    X = tuple(tuple(cols[j][i] for j in range(rank)) for i in range(rank))
    # root-action oracle: the matrix reproduces the power map on every root
    for x in roots:
        coords = _fq_coordinates(ts, basis, x)
        img = 0
        for i in range(rank):
            ci = _dot_column(base, X, coords, i)
            if ci:
                img = ts.E.add(img, _scalar_mul(ts, ci, basis[i]))
        if img != ts.E.pow(x, Q):
            raise RuntimeError("root-action oracle failed")
    return FrobeniusSample(
        prime=rm.prime,
        matrix=X,
        splitting_degree=degree,
        char_poly=charpoly(base, X),
        det_value=det(base, X),
        route="roots",
    )


def _dot_column(base: FieldCtx, X: tuple, coords: tuple, i: int) -> int:
    acc = 0
    for j, c in enumerate(coords):
        if c and X[i][j]:
            acc = base.add(acc, base.mul(X[i][j], c))
    return acc


def _scalar_mul(ts: _TorsionSpace, c: int, x: int) -> int:
    base = ts.rm.module.ctx
    acc = 0
    for s, digit in enumerate(base.coords(c)):
        if digit:
            term = ts.E.mul(ts.E.pow(ts.gamma, s), x) if s else x
            acc = ts.E.add(acc, ts.E.mul(digit % ts.E.p, term))
    return acc


# ---------------------------------------------------------------------------
# Public sampling operations
# ---------------------------------------------------------------------------

def frobenius_matrix_mod_T(m: DrinfeldModule, l: PrimeIdeal,
                           order_seed: Optional[int] = None,
                           force_route: Optional[str] = None
                           ) -> FrobeniusSample:
    """Frobenius matrix on the reduced T-torsion at a good prime l != (T)."""
    if l == prime_T(m.ctx):
        raise ValueError("sampling at (T) itself is not defined")
    rm = reduced_module(m, l)  # raises on bad reduction
    quotient = _sample_via_quotient(rm)
    d = quotient.splitting_degree
    route = force_route
    if route is None:
        fits = rm.residue_field.q ** d <= MAX_FIELD_SIZE
        route = "roots" if fits else "quotient"
    if route == "quotient":
        return quotient
    sample = _sample_via_roots(rm, d, order_seed)
    if sample.char_poly != quotient.char_poly:
        raise RuntimeError("route cross-check failed: differing charpolys")
    return sample


@dataclass
class ModT2Sample:
    sample: FrobeniusSample       # .matrix holds pairs (a0, a1) = a0 + a1*T
    induced_mod_T: tuple          # matrix on the T-torsion in the lifted basis

    @property
    def matrix(self) -> tuple:
        return self.sample.matrix


def frobenius_matrix_mod_T2(m: DrinfeldModule, l: PrimeIdeal) -> ModT2Sample:
    """Frobenius on the T^2-torsion as an element of GL_2(A/(T^2)).

    The basis (e_1, e_2) is chosen so that phi_T maps it onto the canonical
    T-torsion basis, making reduction mod T literally drop the T-parts.
    Rank 2 and q <= 5 only (torsion degree q^4 <= 625); primes whose
    splitting field exceeds the envelope raise EnvelopeError.
    """
    if m.rank != 2:
        raise ValueError("mod-T^2 sampling is implemented for rank 2")
    if m.q > MOD_T2_Q_LIMIT:
        raise EnvelopeError(
            f"mod-T^2 sampling limited to q <= {MOD_T2_Q_LIMIT}")
    if l == prime_T(m.ctx):
        raise ValueError("sampling at (T) itself is not defined")
    rm = reduced_module(m, l)
    base = m.ctx
    L = rm.residue_field
    ring_pairs = list(enumerate(rm.phi_T_bar().coeffs))
    # phi_{T^2} = phi_T(phi_T) over L: twisted square of the reduced phi_T
    bar = rm.phi_T_bar()
    bar2 = bar * bar
    pairs2 = list(enumerate(bar2.coeffs))
    d2 = _mod_t2_splitting_degree(rm, bar2)
    if L.q**d2 > MAX_FIELD_SIZE:
        raise EnvelopeError(
            f"mod-T^2 splitting field GF({L.q}^{d2}) exceeds the envelope")
    ts2 = _TorsionSpace(rm, pairs2, d2)
    roots2 = ts2.roots()
    if len(roots2) != base.q**4:
        raise RuntimeError("wrong number of T^2-torsion roots")
    # T-torsion inside the big field
    ts1_pairs = [(i, ts2.ext_LE.embed(c)) for i, c in ring_pairs]
    apply_T = lambda x: _apply_pairs(ts2, ts1_pairs, x)
    roots1 = sorted(x for x in roots2 if apply_T(x) == 0)
    if len(roots1) != base.q**2:
        raise RuntimeError("wrong number of T-torsion roots")
    basis1 = _greedy_fq_basis_from(ts2, roots1, 2)
    lifts = []
    for b in basis1:
        e = next(x for x in roots2 if apply_T(x) == b)
        lifts.append(e)
    Q = L.q
    cols = [_mod_t2_coordinates(ts2, lifts, apply_T, ts2.E.pow(e, Q))
            for e in lifts]
    X2 = tuple(tuple(cols[j][i] for j in range(2)) for i in range(2))
    induced = tuple(tuple(cols[j][i][0] for j in range(2)) for i in range(2))
    X_mod_T = mt2_reduce(X2)
    if X_mod_T != induced:
        raise RuntimeError("mod-T compatibility failed")
    det0 = det(base, X_mod_T)
    sample = FrobeniusSample(
        prime=rm.prime,
        matrix=X2,
        splitting_degree=d2,
        char_poly=charpoly(base, X_mod_T),
        det_value=det0,
        route="roots",
    )
    return ModT2Sample(sample=sample, induced_mod_T=induced)


def _apply_pairs(ts: _TorsionSpace, pairs, x: int) -> int:
    E = ts.E
    acc = 0
    power = x
    prev = 0
    for i, c in pairs:
        while prev < i:
            power = E.pow(power, ts.q)
            prev += 1
        if c:
            acc = E.add(acc, E.mul(c, power))
    return acc


def _greedy_fq_basis_from(ts: _TorsionSpace, roots: list[int], rank: int):
    return _greedy_fq_basis(ts, roots, rank, None)


def _mod_t2_splitting_degree(rm: ReducedModule, bar2) -> int:
    """Order of tau^m on L{tau}/L{tau} phi_{T^2} (dimension 2r over L)."""
    L = rm.residue_field
    q = rm.module.q
    n = len(bar2.coeffs) - 1
    lead_inv = L.inv(bar2.coeffs[-1])
    theta = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        theta[i + 1][i] = 1
    for i in range(n):
        theta[i][n - 1] = L.neg(L.mul(lead_inv, bar2.coeffs[i]))
    theta = tuple(tuple(r) for r in theta)
    P = theta
    twisted = theta
    for _ in range(rm.prime.degree - 1):
        twisted = tuple(tuple(L.pow(c, q) for c in row) for row in twisted)
        P = mat_mul(L, P, twisted)
    return matrix_order(L, P, cap=4 * (L.q**n))


def _mod_t2_coordinates(ts: _TorsionSpace, lifts, apply_T, y: int) -> list:
    """Coordinates of y over A/(T^2) in the lifted basis: entries (a, b)
    with y = sum (a_i + b_i T) e_i, T acting through phi_T."""
    base = ts.rm.module.ctx
    basis_vectors = []
    tags = []
    for i, e in enumerate(lifts):
        for s in range(ts.k):
            basis_vectors.append(_scalar_mul(ts, base.encode(
                [0] * s + [1]), e) if s else e)
            tags.append((i, s, 0))
    for i, e in enumerate(lifts):
        te = apply_T(e)
        for s in range(ts.k):
            basis_vectors.append(_scalar_mul(ts, base.encode(
                [0] * s + [1]), te) if s else te)
            tags.append((i, s, 1))
    E = ts.E
    p = E.p
    n = E.k
    aug = [[list(E.coords(v))[i] for v in basis_vectors] + [E.coords(y)[i]]
           for i in range(n)]
    ncols = len(basis_vectors)
    r = 0
    pivots = []
    for c in range(ncols):
        piv = next((i for i in range(r, n) if aug[i][c] % p), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][c], p - 2, p)
        aug[r] = [x * inv % p for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] % p:
                f = aug[i][c]
                aug[i] = [(x - f * z) % p for x, z in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, n):
        if aug[i][ncols] % p:
            raise RuntimeError("element outside the T^2-torsion span")
    sol = [0] * ncols
    for rr, pc in enumerate(pivots):
        sol[pc] = aug[rr][ncols]
    coords = []
    for i in range(len(lifts)):
        a_digits = [0] * ts.k
        b_digits = [0] * ts.k
        for c, (ii, s, part) in enumerate(tags):
            if ii != i or not sol[c]:
                continue
            if part == 0:
                a_digits[s] = sol[c]
            else:
                b_digits[s] = sol[c]
        coords.append((base.encode(a_digits), base.encode(b_digits)))
    return coords


# ---------------------------------------------------------------------------
# Accumulation
# ---------------------------------------------------------------------------

class _GLConjugates:
    """All invertible matrices for small ambient groups, cached per context."""

    _cache: dict = {}

    @classmethod
    def get(cls, ctx: FieldCtx, n: int) -> list[tuple]:
        key = (ctx.p, ctx.k, n)
        if key not in cls._cache:
            out = []
            q = ctx.q
            for idx in range(q ** (n * n)):
                t = idx
                M = []
                for _ in range(n):
                    row = []
                    for _ in range(n):
                        row.append(t % q)
                        t //= q
                    M.append(tuple(row))
                M = tuple(M)
                if det(ctx, M) != 0:
                    out.append(M)
            cls._cache[key] = out
        return cls._cache[key]


class ImageAccumulator:
    """Joins Frobenius sample classes into a subgroup of GL_n(F_q).

    A sample whose conjugacy class is already represented in the group adds
    no certified information and is skipped. Otherwise, when the ambient
    general linear group is small enough to search exhaustively, the
    conjugate of the sample producing the smallest join is taken (ties
    broken by matrix encoding); the accumulated group is then the smallest
    greedy realization of the observed classes, which keeps the negative
    controls honest. For large ambients the sample joins as computed.
    """

    def __init__(self, ctx: FieldCtx, n: int):
        self.ctx = ctx
        self.n = n
        self.ambient = gl_order(n, ctx.q)
        self.search = self.ambient <= JOIN_SEARCH_LIMIT
        self.group = MatrixGroup(ctx, n, [])
        self.trail: list[tuple[tuple, str]] = []
        self.dets: set[int] = set()
        self._order = 1

    @property
    def order(self) -> int:
        return self._order

    def full(self) -> bool:
        return self._order == self.ambient

    def add(self, M: tuple, source: str) -> bool:
        self.dets.add(det(self.ctx, M))
        if self.group.contains(M):
            return False
        if not self.search:
            self.group = self.group.with_generator(M)
            self.trail.append((M, source))
            self._order = self.group.order()
            return True
        label = conjugacy_label(self.ctx, M)
        if self._order <= JOIN_SEARCH_LIMIT:
            for g in self.group.elements(cap=JOIN_SEARCH_LIMIT + 1):
                if conjugacy_label(self.ctx, g) == label:
                    return False  # class already represented
        best = None
        seen = set()
        for x in _GLConjugates.get(self.ctx, self.n):
            cand = mat_mul(self.ctx, mat_inv(self.ctx, x),
                           mat_mul(self.ctx, M, x))
            if cand in seen:
                continue
            seen.add(cand)
            G2 = self.group.with_generator(cand)
            o = G2.order()
            if best is None or o < best[0] or (o == best[0] and cand < best[1]):
                best = (o, cand, G2)
        _, cand, G2 = best
        self.group = G2
        self.trail.append((cand, source))
        self._order = G2.order()
        return True

    def evidence(self) -> MatrixGroupEvidence:
        gens = tuple(g for g, _ in self.trail)
        return MatrixGroupEvidence(
            ctx=self.ctx,
            n=self.n,
            generators=gens,
            sources=tuple(s for _, s in self.trail),
            order=self._order,
            det_image_order=det_subgroup_order(self.ctx, self.dets),
            irreducible=(action_irreducible(self.ctx, gens, self.n)
                         if gens else False),
            contains_full_gl=self.full(),
        )


@dataclass
class ImageReport:
    """Outcome of a Frobenius sweep at one torsion level."""

    module: DrinfeldModule
    level: int
    evidence: MatrixGroupEvidence
    samples: list[FrobeniusSample]
    primes_used: int
    stopping_prime: Optional[str]
    skipped: list[str] = field(default_factory=list)
    full: bool = False
    verdict: Optional[bool] = None
    verdict_reasons: list[str] = field(default_factory=list)
    witness: Optional[tuple] = None

    def to_dict(self) -> dict:
        out = {
            "module": {"rank": self.module.rank,
                       "q": self.module.q,
                       "g": [list(gi.coeffs) for gi in self.module.g]},
            "level": self.level,
            "primesUsed": self.primes_used,
            "stoppingPrime": self.stopping_prime,
            "skipped": self.skipped,
            "fullGL": self.full,
            "verdict": self.verdict,
            "verdictReasons": self.verdict_reasons,
            "samples": [s.to_dict() for s in self.samples],
        }
        out.update(self.evidence.to_dict())
        if self.witness is not None:
            out["unipotentWitness"] = [
                [list(pair) for pair in row] for row in self.witness]
        return out


def good_primes(m: DrinfeldModule, max_deg: int):
    t = prime_T(m.ctx)
    for l in primes_up_to(m.ctx, max_deg, exclude={t}):
        if reduction_at(m, l).good:
            yield l


def accumulate_image(m: DrinfeldModule, max_primes: int = 200,
                     max_deg: int = 3) -> ImageReport:
    """Sweep good primes in canonical order, accumulating mod-T Frobenius
    matrices until the image over F_q is certified full (early stop) or the
    budget runs out."""
    acc = ImageAccumulator(m.ctx, m.rank)
    samples: list[FrobeniusSample] = []
    skipped: list[str] = []
    used = 0
    stopping = None
    for l in good_primes(m, max_deg):
        if used >= max_primes:
            break
        used += 1
        try:
            s = frobenius_matrix_mod_T(m, l)
        except EnvelopeError as e:
            skipped.append(f"{l!s}: {e}")
            continue
        samples.append(s)
        acc.add(s.matrix, str(l))
        if acc.full():
            stopping = str(l)
            break
    ev = acc.evidence()
    report = ImageReport(
        module=m, level=1, evidence=ev, samples=samples,
        primes_used=used, stopping_prime=stopping, skipped=skipped,
        full=acc.full(),
    )
    if m.rank in (2, 3):
        verdict, reasons = verdict_full_gl(ev, m.q, m.rank)
        report.verdict = verdict
        report.verdict_reasons = reasons
        if not verdict:
            report.verdict_reasons.append("not full within budget")
    return report


def accumulate_image_mod_T2(m: DrinfeldModule, max_primes: int = 200,
                            max_deg: int = 3) -> ImageReport:
    """Sweep good primes accumulating mod-T^2 samples (rank 2, q <= 5) and
    search the generated group for a non-scalar element congruent to the
    identity mod T. Out-of-envelope primes are skipped and recorded."""
    if m.rank != 2:
        raise ValueError("mod-T^2 sweep is implemented for rank 2")
    if m.q > MOD_T2_Q_LIMIT:
        raise EnvelopeError(
            f"mod-T^2 sampling limited to q <= {MOD_T2_Q_LIMIT}")
    gens: list[tuple] = []
    sources: list[str] = []
    samples: list[FrobeniusSample] = []
    skipped: list[str] = []
    used = 0
    witness = None
    stopping = None
    elements: set = {mt2_identity(2)}
    dets: set[int] = set()
    for l in good_primes(m, max_deg):
        if used >= max_primes:
            break
        used += 1
        try:
            s2 = frobenius_matrix_mod_T2(m, l)
        except EnvelopeError as e:
            skipped.append(f"{l!s}: {e}")
            continue
        samples.append(s2.sample)
        M = s2.sample.matrix
        dets.add(s2.sample.det_value)
        if M in elements:
            continue
        gens.append(M)
        sources.append(str(l))
        elements = _closure_mt2(m.ctx, gens)
        witness = _kernel_witness(m.ctx, elements)
        if witness is not None:
            stopping = str(l)
            break
    ev = MatrixGroupEvidence(
        ctx=m.ctx, n=2,
        generators=tuple(gens), sources=tuple(sources),
        order=len(elements),
        det_image_order=det_subgroup_order(m.ctx, dets),
        irreducible=(action_irreducible(
            m.ctx, [mt2_reduce(g) for g in gens], 2) if gens else False),
        contains_full_gl=len(elements) == gl_order(2, m.q) * m.q**4,
        unipotent_witness=witness,
    )
    return ImageReport(
        module=m, level=2, evidence=ev, samples=samples,
        primes_used=used, stopping_prime=stopping, skipped=skipped,
        full=ev.contains_full_gl, witness=witness,
    )


def _closure_mt2(ctx, gens):
    from .matgroup import _bfs_closure

    return _bfs_closure(ctx, 2, gens, mt2_mul, 2**24, one=mt2_identity(2))


def _kernel_witness(ctx, elements) -> Optional[tuple]:
    I = identity(2)
    witnesses = [g for g in elements
                 if mt2_reduce(g) == I and not mt2_is_scalar(g)]
    return min(witnesses) if witnesses else None


# ---------------------------------------------------------------------------
# Exact class statistics (Chebotarev sanity)
# ---------------------------------------------------------------------------

def irreducible_charpoly_fraction(q: int, r: int) -> Fraction:
    """Exact proportion of elements of GL_r(F_q) with irreducible
    characteristic polynomial: such elements are regular with centralizer
    F_{q^r}^x, one class per irreducible polynomial of degree r."""
    if r not in (2, 3):
        raise ValueError("implemented for r in {2, 3}")
    # number of monic irreducibles of degree r over F_q (Gauss)
    if r == 2:
        n_irr = (q * q - q) // 2
    else:
        n_irr = (q**3 - q) // 3
    return Fraction(n_irr, q**r - 1)
