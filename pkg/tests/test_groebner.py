import random
from fractions import Fraction
from itertools import combinations

import pytest

from gnla import (
    CapExceeded,
    Polynomial,
    PolynomialIdeal,
    buchberger,
    grevlex_key,
    normal_form,
    only_trivial_zero,
)

VARS = ("x", "y", "z", "w")


def poly(terms, variables=VARS):
    """terms: {exponent tuple: coefficient} over the given variables."""
    return Polynomial(variables, {e: Fraction(c) for e, c in terms.items()})


def random_quadratic(rng, nvars):
    variables = VARS[:nvars]
    terms = {}
    for e in combinations_with_repetition(nvars):
        if rng.random() < 0.4:
            c = rng.randint(-3, 3)
            if c:
                terms[e] = Fraction(c)
    if not terms:
        e = (2,) + (0,) * (nvars - 1)
        terms[e] = Fraction(1)
    return Polynomial(variables, terms)


def combinations_with_repetition(nvars):
    """All quadratic exponent tuples in nvars variables."""
    out = []
    for i in range(nvars):
        for j in range(i, nvars):
            e = [0] * nvars
            e[i] += 1
            e[j] += 1
            out.append(tuple(e))
    return out


def rational_points(nvars, height):
    """All rational tuples with numerators and denominators up to height."""
    from fractions import Fraction as F
    values = {F(0)}
    for d in range(1, height + 1):
        for n in range(-height, height + 1):
            values.add(F(n, d))
    values = sorted(values)

    def rec(k):
        if k == 0:
            yield ()
            return
        for rest in rec(k - 1):
            for v in values:
                yield rest + (v,)
    return rec(nvars)


def test_polynomial_basics():
    x = Polynomial.variable(VARS, 0)
    y = Polynomial.variable(VARS, 1)
    p = x * x + 2 * y
    assert p.evaluate((3, 5, 0, 0)) == 19
    assert p.total_degree() == 2
    assert not p.is_homogeneous()
    assert (x * y).is_homogeneous()
    assert Polynomial.zero(VARS).is_zero()
    assert Polynomial.constant(VARS, 7).is_constant()
    assert (p - p).is_zero()
    assert (-p + p).is_zero()


def test_polynomial_ring_axioms_random():
    rng = random.Random(43)
    for _ in range(15):
        f = random_quadratic(rng, 3)
        g = random_quadratic(rng, 3)
        h = random_quadratic(rng, 3)
        assert f * g == g * f
        assert f * (g + h) == f * g + f * h
        pt = tuple(Fraction(rng.randint(-2, 2)) for _ in range(3))
        assert (f * g).evaluate(pt) == f.evaluate(pt) * g.evaluate(pt)


def test_grevlex_order_on_two_variables():
    """Within one total degree the order refines by the last exponents."""
    x2 = (2, 0)
    xy = (1, 1)
    y2 = (0, 2)
    x = (1, 0)
    keys = [grevlex_key(e) for e in (x2, xy, y2, x)]
    assert keys[0] > keys[1] > keys[2] > keys[3]


def test_leading_term():
    p = poly({(1, 1, 0, 0): 5, (0, 0, 2, 0): 1, (1, 0, 0, 0): -2})
    exp, coeff = p.leading()
    assert exp == (1, 1, 0, 0)
    assert coeff == 5


def test_normal_form_properties():
    x = Polynomial.variable(("x", "y"), 0)
    y = Polynomial.variable(("x", "y"), 1)
    basis = [x * x - y, y * y]
    f = x * x * x * x
    r = normal_form(f, basis)
    # x^4 = (x^2)^2 -> y^2 -> 0
    assert r.is_zero()
    g = x * x * y
    assert normal_form(g, basis) == normal_form(normal_form(g, basis), basis)


def test_buchberger_known_basis():
    x = Polynomial.variable(("x", "y"), 0)
    y = Polynomial.variable(("x", "y"), 1)
    gb = buchberger([x * x + y * y, x * x - y * y])
    # forces x^2 and y^2 individually
    leadings = sorted(g.leading()[0] for g in gb)
    assert leadings == [(0, 2), (2, 0)]


def test_buchberger_rejects_mixed_variables():
    with pytest.raises(ValueError):
        buchberger([Polynomial.variable(("x",), 0),
                    Polynomial.variable(("x", "y"), 0)])


def test_buchberger_membership_properties():
    """Generators and S-polynomials all reduce to zero, random ideals."""
    rng = random.Random(47)
    for _ in range(20):
        nvars = rng.randint(1, 4)
        gens = [random_quadratic(rng, nvars)
                for _ in range(rng.randint(1, 3))]
        gb = buchberger(gens, degree_cap=14)
        for g in gens:
            assert normal_form(g, gb).is_zero()
        for i in range(len(gb)):
            for j in range(i + 1, len(gb)):
                fe = gb[i].leading()[0]
                ge = gb[j].leading()[0]
                lcm = tuple(max(a, b) for a, b in zip(fe, ge))
                m1 = poly({tuple(l - a for l, a in zip(lcm, fe)): 1},
                          gb[i].variables) * gb[i]
                m2 = poly({tuple(l - b for l, b in zip(lcm, ge)): 1},
                          gb[j].variables) * gb[j]
                s = m1.leading()[1] ** -1 * m1 - m2.leading()[1] ** -1 * m2
                assert normal_form(s, gb).is_zero()
        # reduced: no leading term divides another
        for i in range(len(gb)):
            for j in range(len(gb)):
                if i == j:
                    continue
                fe = gb[i].leading()[0]
                ge = gb[j].leading()[0]
                assert not all(a <= b for a, b in zip(fe, ge))


def test_cap_exceeded():
    x = Polynomial.variable(("x", "y"), 0)
    y = Polynomial.variable(("x", "y"), 1)
    with pytest.raises(CapExceeded) as exc:
        buchberger([x * x * x - x * y * y, x * y * y * y], degree_cap=4)
    assert exc.value.degree > 4


def test_ideal_contains():
    x = Polynomial.variable(("x", "y"), 0)
    y = Polynomial.variable(("x", "y"), 1)
    ideal = PolynomialIdeal([x * x - y * y, x * y])
    assert ideal.contains(x * x * x)
    assert not ideal.contains(x)
    assert ideal.variables == ("x", "y")


def test_only_trivial_zero_known_cases():
    variables = ("x", "y", "z")
    xs = [Polynomial.variable(variables, i) for i in range(3)]
    assert only_trivial_zero(PolynomialIdeal(xs))
    # zero ideal in at least one variable vanishes everywhere
    assert not only_trivial_zero(
        PolynomialIdeal([Polynomial.zero(variables)]))
    # a sum of two squares factors over the closure
    x, y = [Polynomial.variable(("x", "y"), i) for i in range(2)]
    assert not only_trivial_zero(PolynomialIdeal([x * x + y * y]))
    assert only_trivial_zero(PolynomialIdeal([x * x + y * y, x * x - y * y]))


def test_only_trivial_zero_requires_homogeneous():
    x = Polynomial.variable(("x",), 0)
    one = Polynomial.constant(("x",), 1)
    with pytest.raises(ValueError):
        only_trivial_zero(PolynomialIdeal([x + one]))


def test_only_trivial_zero_against_point_search():
    """Whenever a small rational zero exists the verdict must be False."""
    rng = random.Random(53)
    checked = 0
    for _ in range(25):
        nvars = rng.randint(1, 3)
        variables = VARS[:nvars]
        gens = []
        for _ in range(rng.randint(1, 2)):
            terms = {}
            for e in combinations_with_repetition(nvars):
                c = rng.randint(-2, 2)
                if c:
                    terms[e] = Fraction(c)
            if terms:
                gens.append(Polynomial(variables, terms))
        if not gens:
            continue
        try:
            otz = only_trivial_zero(PolynomialIdeal(gens, degree_cap=16))
        except CapExceeded:
            continue
        found = None
        for pt in rational_points(nvars, 2):
            if any(c != 0 for c in pt) and all(
                    g.evaluate(pt) == 0 for g in gens):
                found = pt
                break
        if found is not None:
            checked += 1
            assert not otz, (gens, found)
    assert checked > 0
