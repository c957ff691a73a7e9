import random
from fractions import Fraction

import pytest

from gnla import (
    Matrix,
    MatrixSubspace,
    catalog,
    classify_by_iteration,
    der0,
    h0,
    h0_as_graded_map,
    leibniz_failures,
    prolong_layer,
)


def contact_layer_oracle(k):
    """Monomial count #{(a,b,c) >= 0 : a + b + 2c = k + 2}."""
    return sum(1 for a in range(k + 3) for b in range(k + 3)
               for c in range(k + 3) if a + b + 2 * c == k + 2)


def test_prolong_layer_argument_checks():
    a = catalog("heisenberg", dim=3)
    with pytest.raises(ValueError):
        prolong_layer(a, -1, [])
    with pytest.raises(ValueError):
        prolong_layer(a, 1, [])


def test_heisenberg3_layer_dims_match_monomial_count():
    a = catalog("heisenberg", dim=3)
    layers = []
    for k in range(5):
        lay = prolong_layer(a, k, layers)
        layers.append(lay)
        assert lay.dim == contact_layer_oracle(k)


def test_der0_heisenberg3_is_csp2():
    # sp(2) plus the grading direction
    a = catalog("heisenberg", dim=3)
    assert len(der0(a)) == 4


def test_der0_free_two_step_is_gl3():
    a = catalog("free2step3")
    assert len(der0(a)) == 9


def test_der0_satisfies_leibniz():
    for name, params in [("heisenberg", {"dim": 3}), ("goursat", {"n": 4}),
                         ("free2step3", {}), ("nontrivial6", {}),
                         ("kgen", {"k": 5})]:
        a = catalog(name, **params)
        for g in der0(a):
            assert leibniz_failures(a, [], g) == [], (name, g)


def test_higher_layers_satisfy_leibniz():
    a = catalog("goursat", n=3)
    layers = []
    for k in range(3):
        lay = prolong_layer(a, k, layers)
        for g in lay.maps:
            assert leibniz_failures(a, layers, g) == []
        layers.append(lay)


def test_random_combinations_satisfy_leibniz():
    """Leibniz is linear, so random combinations of layer maps pass too."""
    rng = random.Random(41)
    a = catalog("heisenberg", dim=3)
    layers = [prolong_layer(a, 0, [])]
    layers.append(prolong_layer(a, 1, layers))
    for lay in layers:
        for _ in range(5):
            coeffs = [Fraction(rng.randint(-3, 3)) for _ in lay.maps]
            blocks = {}
            for i in lay.maps[0].blocks:
                acc = None
                for c, g in zip(coeffs, lay.maps):
                    term = g.blocks[i].scale(c)
                    acc = term if acc is None else acc + term
                blocks[i] = acc
            combo = type(lay.maps[0])(degree=lay.degree, blocks=blocks)
            assert leibniz_failures(a, layers[:lay.degree], combo) == []


def test_h0_heisenberg_is_symplectic():
    """Maps killing the center form sp(n1) inside End of the first layer."""
    a3 = catalog("heisenberg", dim=3)
    a5 = catalog("heisenberg", dim=5)
    assert h0(a3).dim == 3
    assert h0(a5).dim == 10


def test_h0_free_two_step_is_zero():
    # no nonzero A has A x wedge y + x wedge A y = 0 for all pairs
    assert h0(catalog("free2step3")).dim == 0


def test_h0_elements_are_derivations():
    for name, params in [("heisenberg", {"dim": 3}), ("goursat", {"n": 5}),
                         ("mixedjet", {"k": 2})]:
        a = catalog(name, **params)
        for b in h0(a).basis:
            gm = h0_as_graded_map(a, b)
            assert leibniz_failures(a, [], gm) == []


def test_h0_lies_inside_der0_first_blocks():
    a = catalog("goursat", n=4)
    first_blocks = MatrixSubspace.from_matrices(
        a.layer_dim(1), [g.block(1) for g in der0(a)])
    for b in h0(a).basis:
        assert first_blocks.contains(b)


def test_matrix_subspace_basics():
    m1 = Matrix([[1, 0], [0, 0]])
    m2 = Matrix([[0, 1], [0, 0]])
    s = MatrixSubspace.from_matrices(2, [m1, m2, m1 + m2])
    assert s.dim == 2
    assert s.contains(Matrix([[2, -3], [0, 0]]))
    assert not s.contains(Matrix([[0, 0], [1, 0]]))
    with pytest.raises(ValueError):
        MatrixSubspace.from_matrices(3, [m1])


def test_iteration_finite_free_two_step():
    v = classify_by_iteration(catalog("free2step3"), max_degree=5)
    assert v.kind == "finite"
    assert v.layer_dims == (9, 3, 3, 0)
    assert v.total_dim == 21


def test_iteration_finite_kgen5():
    v = classify_by_iteration(catalog("kgen", k=5), max_degree=4)
    assert v.kind == "finite"
    assert v.layer_dims == (4, 0)
    assert v.total_dim == 12


def test_iteration_inconclusive_on_chain():
    # rank one witness models never terminate; budget runs out honestly
    v = classify_by_iteration(catalog("goursat", n=4), max_degree=3)
    assert v.kind == "inconclusive"
    assert v.total_dim is None
    assert v.layer_dims == (3, 4, 5, 7)
    assert len(v.layers) == 4


def test_zero_layer_stops_iteration():
    v = classify_by_iteration(catalog("free2step3"), max_degree=10)
    assert v.layer_dims[-1] == 0
    assert len(v.layer_dims) == 4
