import pytest

from nilcohom.cxstruct import AlmostComplexStructure, hodge_table
from nilcohom.exact import Subspace, build_field
from nilcohom.exact.fields import QuadraticField, substitute_parameter
from nilcohom.liealg import QStructure, parse_structure_equations

H7_TEXT = "(0,0,0,12,13,23)"
F_BASIS = [[0, 0, 1, 0, 0, 0], [0, 0, 0, 1, 0, 0],
           [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]]
F0_BASIS = [[0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]]


@pytest.fixture(scope="session")
def h7():
    return parse_structure_equations(H7_TEXT)


@pytest.fixture(scope="session")
def j0(h7):
    return AlmostComplexStructure.standard(h7)


@pytest.fixture(scope="session")
def h7_hodge(j0):
    return hodge_table(j0)


@pytest.fixture(scope="session")
def abelian6():
    return parse_structure_equations("(0,0,0,0,0,0)")


@pytest.fixture(scope="session")
def kodaira_thurston():
    return parse_structure_equations("(0,0,0,12)")


def example_lattice_generators(field):
    """The worked lattice: sqrt2-scaled generators times one formal
    parameter a; ``field`` is the tower Q(sqrt2)(a)."""
    r2 = field.coerce(QuadraticField(2).gen())
    a = field.gen()
    zero, one = field.zero(), field.one()
    return [
        (r2, zero, zero, zero, zero, zero),
        (zero, r2, zero, zero, zero, zero),
        (r2 * a, zero, r2, zero, zero, zero),
        (zero, zero, zero, one, zero, zero),
        (zero, zero, zero, zero, one, zero),
        (zero, zero, zero, a, zero, -one),
    ]


@pytest.fixture(scope="session")
def formal_field():
    return build_field(2, "a")


@pytest.fixture(scope="session")
def example_case(h7, formal_field):
    """(algebra over Q(sqrt2)(a), lattice, f, f0) with formal a."""
    K = formal_field
    g = h7.extend_field(K)
    L = QStructure(g, example_lattice_generators(K))
    f = Subspace(K, 6, F_BASIS)
    f0 = Subspace(K, 6, F0_BASIS)
    return g, L, f, f0


def substituted_case(h7, value):
    """Same data with a := value, an element of Q(sqrt2)."""
    K = build_field(2, "a")
    K2 = QuadraticField(2)
    g = h7.extend_field(K2)
    gens = [tuple(substitute_parameter(x, K, K2, K2.coerce(value)) for x in v)
            for v in example_lattice_generators(K)]
    L = QStructure(g, gens)
    f = Subspace(K2, 6, F_BASIS)
    f0 = Subspace(K2, 6, F0_BASIS)
    return g, L, f, f0
