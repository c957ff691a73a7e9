"""Finite versus infinite type certificates.

The decision pipeline combines four routes, ordered so that cheap and
checkable certificates come first: a degenerate algebra is infinite
outright (a central degree -1 witness is attached); a rational element
y with rank ad y = 1 certifies infinite type constructively; a vanishing
prolongation layer certifies finite type; and when neither rational
search nor iteration settles it, the quadratic ideal of 2x2 minors of
the generic adjoint matrix decides the existence of a rank 1 point over
the algebraic closure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd as _gcd
from typing import List, Optional, Sequence, Tuple

from .algebra import (
    GNLA,
    ad_matrix,
    bracket,
    center,
    change_basis,
    layer,
    quotient,
    validate,
)
from .constructions import Cochain2
from .groebner import CapExceeded, Polynomial, PolynomialIdeal, only_trivial_zero
from .linalg import (
    Matrix,
    Subspace,
    Vector,
    is_zero_vector,
    kernel_basis,
    solve,
    vector,
)
from .prolongation import (
    GradedMap,
    MatrixSubspace,
    classify_by_iteration,
    leibniz_failures,
)


class WitnessInvalid(Exception):
    """The supplied element does not have a rank 1 adjoint."""


@dataclass(frozen=True)
class TypeVerdict:
    """Outcome of the classification pipeline.

    kind is one of finite, infinite, degenerate_infinite, inconclusive.
    For an infinite verdict, certificate says whether the witness is a
    rational vector (stored in witness, full coordinates) or an
    existence statement over the algebraic closure.
    """
    kind: str
    total_dim: Optional[int] = None
    layer_dims: Optional[Tuple[int, ...]] = None
    witness: Optional[Vector] = None
    certificate: Optional[str] = None
    note: Optional[str] = None
    cap_exceeded: bool = False


def minor_ideal(a: GNLA) -> PolynomialIdeal:
    """The ideal of 2x2 minors of ad(sum y_i e_i), e_i the degree -1 basis.

    Its nontrivial zeros over the closure are exactly the rank 1
    directions, so for a nondegenerate algebra the zero set decides the
    type.  All generators are homogeneous quadratics in y_1..y_n.
    """
    pos1 = a.layer_positions(1)
    nvars = len(pos1)
    variables = tuple("y%d" % (i + 1) for i in range(nvars))
    n = a.dim

    def entry(row: int, col: int) -> Polynomial:
        terms = {}
        for v_idx, p in enumerate(pos1):
            c = a.pair_bracket(p, col)[row]
            if c != 0:
                exp = [0] * nvars
                exp[v_idx] = 1
                terms[tuple(exp)] = c
        return Polynomial(variables, terms)

    entries = [[entry(r, c) for c in range(n)] for r in range(n)]
    nonzero_rows = [r for r in range(n) if any(not e.is_zero() for e in entries[r])]
    nonzero_cols = [c for c in range(n) if any(not entries[r][c].is_zero() for r in range(n))]
    seen = set()
    gens: List[Polynomial] = []
    for r1, r2 in itertools.combinations(nonzero_rows, 2):
        for c1, c2 in itertools.combinations(nonzero_cols, 2):
            m = (entries[r1][c1] * entries[r2][c2]
                 - entries[r1][c2] * entries[r2][c1])
            if m.is_zero():
                continue
            m = _sign_normalized(m)
            key = m.key()
            if key in seen:
                continue
            seen.add(key)
            gens.append(m)
    if not gens:
        # keep the ambient variables visible: the zero ideal in n >= 1
        # variables vanishes everywhere, so only_trivial_zero says False
        gens = [Polynomial.zero(variables)]
    return PolynomialIdeal(gens)


def _sign_normalized(p: Polynomial) -> Polynomial:
    if p.is_zero():
        return p
    if p.leading()[1] < 0:
        return -p
    return p


def _rational_ladder(height: int) -> List[Fraction]:
    out = []
    for d in range(1, height + 1):
        for n in range(1, height + 1):
            if _gcd(n, d) == 1:
                out.append(Fraction(n, d))
                out.append(Fraction(-n, d))
    return out


def rank1_witness(a: GNLA, height_bound: int = 3) -> Optional[Vector]:
    """Search for a rational y in the degree -1 layer with rank ad y = 1.

    Candidates are the basis vectors (last declared first, which matches
    the catalog conventions), then e_p + q e_q over basis pairs with the
    rational q of bounded height.  The enumeration is deterministic; a
    None answer is not a proof of absence.
    """
    pos1 = list(reversed(a.layer_positions(1)))
    n = a.dim
    for p in pos1:
        y = a.basis_vector(p)
        if ad_matrix(a, y).rank == 1:
            return y
    ladder = _rational_ladder(height_bound)
    for i, p in enumerate(pos1):
        for q in pos1[i + 1:]:
            base = a.basis_vector(p)
            other = a.basis_vector(q)
            for t in ladder:
                y = tuple(x + t * z for x, z in zip(base, other))
                if ad_matrix(a, y).rank == 1:
                    return y
    return None


def rank1_in_span(mats: Sequence[Matrix],
                  height_bound: int = 2,
                  combo_budget: int = 30000) -> Optional[Vector]:
    """Search the span of the given matrices for a rank 1 element.

    Tries single basis matrices, then pairs with small rational weights,
    then all {-1,0,1} combinations while the budget allows.  Returns the
    coefficient vector or None (not a proof of absence).
    """
    t = len(mats)
    for i, m in enumerate(mats):
        if m.rank() == 1:
            coeffs = [Fraction(0)] * t
            coeffs[i] = Fraction(1)
            return tuple(coeffs)
    ladder = _rational_ladder(height_bound)
    for i in range(t):
        for j in range(i + 1, t):
            for q in ladder:
                m = mats[i] + mats[j].scale(q)
                if m.rank() == 1:
                    coeffs = [Fraction(0)] * t
                    coeffs[i] = Fraction(1)
                    coeffs[j] = q
                    return tuple(coeffs)
    if t and 3 ** t <= combo_budget:
        for signs in itertools.product((-1, 0, 1), repeat=t):
            if all(s == 0 for s in signs) or next(
                    s for s in signs if s != 0) < 0:
                continue
            m = Matrix.zero(mats[0].nrows, mats[0].ncols)
            for s, mat in zip(signs, mats):
                if s:
                    m = m + (mat if s > 0 else -mat)
            if m.rank() == 1:
                return tuple(Fraction(s) for s in signs)
    return None


def spencer_subspace_check(a_space: MatrixSubspace) -> bool:
    """Whether the span contains a rank 1 matrix over the closure.

    A rational rank 1 combination found by direct search settles the
    question immediately; otherwise the 2x2 minors of a generic
    combination are formed and the answer is the negation of their
    only_trivial_zero test (the basis is independent, so a nonzero
    coefficient vector cannot give the zero matrix).
    """
    if a_space.dim == 0:
        return False
    if rank1_in_span(a_space.basis) is not None:
        return True
    t = a_space.dim
    side = a_space.side
    variables = tuple("c%d" % (k + 1) for k in range(t))

    def entry(i: int, j: int) -> Polynomial:
        terms = {}
        for k, m in enumerate(a_space.basis):
            c = m[i, j]
            if c != 0:
                exp = [0] * t
                exp[k] = 1
                terms[tuple(exp)] = c
        return Polynomial(variables, terms)

    entries = [[entry(i, j) for j in range(side)] for i in range(side)]
    seen = set()
    gens = []
    for r1, r2 in itertools.combinations(range(side), 2):
        for c1, c2 in itertools.combinations(range(side), 2):
            m = (entries[r1][c1] * entries[r2][c2]
                 - entries[r1][c2] * entries[r2][c1])
            if m.is_zero():
                continue
            m = _sign_normalized(m)
            if m.key() in seen:
                continue
            seen.add(m.key())
            gens.append(m)
    if not gens:
        # every 2x2 minor of the generic combination vanishes, so any
        # nonzero combination already has rank at most 1
        return True
    return not only_trivial_zero(PolynomialIdeal(gens))


def rank1_derivation_from_witness(a: GNLA, y: Sequence) -> GradedMap:
    """The explicit rank 1 degree 0 derivation attached to a witness.

    With W = ker ad y and x a degree -1 basis vector moved by y, the map
    sends x to y, kills W and kills every deeper layer.  Raises
    WitnessInvalid unless rank ad y = 1.
    """
    y = vector(y)
    ad_y = ad_matrix(a, y)
    if ad_y.rank != 1:
        raise WitnessInvalid("rank ad y is %d, not 1" % ad_y.rank)
    rep = validate(a)
    if not rep.checks["nondegenerate"]:
        raise WitnessInvalid("the algebra is degenerate")
    pos1 = a.layer_positions(1)
    x_pos = None
    for p in pos1:
        if not is_zero_vector(bracket(a, a.basis_vector(p), y)):
            x_pos = p
            break
    if x_pos is None:
        raise WitnessInvalid("no degree -1 basis vector moves the witness")
    w_full = kernel_basis(ad_y.matrix)
    w_deg1 = w_full.intersect(layer(a, 1))
    n1 = len(pos1)
    rows = [a.layer_coordinates(1, w) for w in w_deg1.basis]
    rows.append(a.layer_coordinates(1, a.basis_vector(x_pos)))
    rhs = [Fraction(0)] * w_deg1.dim + [Fraction(1)]
    xi = solve(Matrix(rows), rhs)
    if xi is None:
        raise WitnessInvalid("kernel and transversal do not span")
    y1 = a.layer_coordinates(1, y)
    block1 = Matrix([[y1[r] * xi[c] for c in range(n1)] for r in range(n1)])
    blocks = {1: block1}
    for i in range(2, a.depth + 1):
        ni = a.layer_dim(i)
        blocks[i] = Matrix.zero(ni, ni)
    d = GradedMap(degree=0, blocks=blocks)
    if block1.rank() != 1:
        raise WitnessInvalid("constructed map does not have rank 1")
    bad = leibniz_failures(a, [], d)
    if bad:
        raise WitnessInvalid("constructed map fails Leibniz on %r" % (bad[:3],))
    return d


@dataclass(frozen=True)
class DecompositionResult:
    """Output of decompose_special_extension.

    quotient is the base algebra on the surviving generators; the ideal
    basis spans the commutative graded ideal with one-dimensional
    layers; the cocycle captures the brackets that escape the base, so
    that the extension construction rebuilds the adapted algebra.
    """
    quotient: GNLA
    ideal_basis: Tuple[Vector, ...]
    cocycle: Cochain2
    adapted: GNLA
    witness: Vector
    transversal: Vector


def decompose_special_extension(a: GNLA, y: Sequence) -> DecompositionResult:
    """Split the algebra along a rank 1 witness.

    Starting from y with rank ad y = 1, pick the first degree -1 basis
    vector x moved past y and iterate y_{i+1} = [x, y_i] until zero.
    The span V of the chain is checked to be a commutative ideal killed
    by ker ad y; the algebra is then rewritten in the adapted basis
    (x, chain, completion) and the quotient plus degree 0 cocycle are
    read off.
    """
    y = vector(y)
    ad_y = ad_matrix(a, y)
    if ad_y.rank != 1:
        raise WitnessInvalid("rank ad y is %d, not 1" % ad_y.rank)
    rep = validate(a)
    if not rep.checks["nondegenerate"]:
        raise WitnessInvalid("the algebra is degenerate")
    n = a.dim
    pos1 = a.layer_positions(1)
    x_vec = None
    for p in pos1:
        if not is_zero_vector(bracket(a, a.basis_vector(p), y)):
            x_vec = a.basis_vector(p)
            break
    if x_vec is None:
        raise WitnessInvalid("no degree -1 basis vector moves the witness")

    chain: List[Vector] = [y]
    while True:
        nxt = bracket(a, x_vec, chain[-1])
        if is_zero_vector(nxt):
            break
        chain.append(nxt)
    s = len(chain)
    v_space = Subspace(n, chain)
    if v_space.dim != s:
        raise WitnessInvalid("chain vectors are dependent")
    for j in range(n):
        ej = a.basis_vector(j)
        for yi in chain:
            if not v_space.contains(bracket(a, ej, yi)):
                raise WitnessInvalid("chain span is not an ideal")
    for yi in chain:
        for yj in chain:
            if not is_zero_vector(bracket(a, yi, yj)):
                raise WitnessInvalid("chain span is not commutative")
    w_full = kernel_basis(ad_y.matrix)
    for w in w_full.basis:
        for yi in chain:
            if not is_zero_vector(bracket(a, w, yi)):
                raise WitnessInvalid("kernel of ad y does not centralize the chain")

    # complete the chain to an adapted basis: x, the chain, then degree
    # -1 directions of ker ad y and the original deeper basis vectors
    z_vectors: List[Vector] = []
    acc = Subspace(n, [x_vec] + chain)
    w_deg1 = w_full.intersect(layer(a, 1))
    for cand in w_deg1.basis:
        grown = Subspace(n, list(acc.basis) + list(z_vectors) + [cand])
        if grown.dim > acc.dim + len(z_vectors):
            z_vectors.append(cand)
    for i in range(2, a.depth + 1):
        for p in a.layer_positions(i):
            cand = a.basis_vector(p)
            grown = Subspace(n, list(acc.basis) + list(z_vectors) + [cand])
            if grown.dim > acc.dim + len(z_vectors):
                z_vectors.append(cand)
    if 1 + s + len(z_vectors) != n:
        raise WitnessInvalid("adapted basis does not span")

    labels = (["X"] + ["Y%d" % (i + 1) for i in range(s)]
              + ["Z%d" % (i + 1) for i in range(len(z_vectors))])
    adapted = change_basis(a, [x_vec] + chain + z_vectors, labels,
                           name=a.name + "_adapted")

    reps = [x_vec] + z_vectors
    rep_labels = ["X"] + ["Z%d" % (i + 1) for i in range(len(z_vectors))]
    base = quotient(a, v_space, reps, rep_labels, name=a.name + "_base")

    decomp = Matrix.from_columns(reps + chain)
    cocycle_values = {}
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            w = solve(decomp, bracket(a, reps[i], reps[j]))
            val = tuple(w[len(reps):])
            if not is_zero_vector(val):
                cocycle_values[(i, j)] = val
    cocycle = Cochain2.from_dict(s, cocycle_values)

    return DecompositionResult(
        quotient=base,
        ideal_basis=tuple(chain),
        cocycle=cocycle,
        adapted=adapted,
        witness=y,
        transversal=x_vec)


def classify(a: GNLA, max_degree: int = 10, height_bound: int = 3,
             degree_cap: int = 12) -> TypeVerdict:
    """Decide finite or infinite type, or report an honest inconclusive.

    Pipeline: degenerate short-circuit, rational rank 1 witness search,
    prolongation iteration, then the minor ideal over the closure.  A
    Groebner cap abort surfaces as inconclusive with the reason noted.
    """
    rep = validate(a)
    if not rep.structural_ok:
        raise ValueError("algebra does not validate: %r" % (rep.failures[:3],))

    if not rep.checks["nondegenerate"]:
        central = center(a).intersect(layer(a, 1))
        return TypeVerdict(kind="degenerate_infinite",
                           witness=central.basis[0],
                           certificate="central_witness")

    w = rank1_witness(a, height_bound=height_bound)
    if w is not None:
        return TypeVerdict(kind="infinite", witness=w,
                           certificate="rational_witness")

    it = classify_by_iteration(a, max_degree=max_degree)
    if it.kind == "finite":
        return TypeVerdict(kind="finite", total_dim=it.total_dim,
                           layer_dims=it.layer_dims)

    ideal = minor_ideal(a)
    ideal.degree_cap = degree_cap
    try:
        trivial = only_trivial_zero(ideal)
    except CapExceeded as exc:
        return TypeVerdict(kind="inconclusive", layer_dims=it.layer_dims,
                           note="groebner degree cap exceeded at degree %d"
                                % exc.degree,
                           cap_exceeded=True)
    if not trivial:
        return TypeVerdict(kind="infinite", certificate="closure",
                           layer_dims=it.layer_dims)
    return TypeVerdict(
        kind="inconclusive", layer_dims=it.layer_dims,
        note="minor ideal certifies finite type over the closure, but no "
             "prolongation layer vanished within the iteration budget")
