import pytest

from lpsurf.lp_core import LPSeed
from lpsurf.poly import Polynomial, VariableContext, is_irreducible
from lpsurf.surface import MarkedSurface


@pytest.fixture
def abc_ctx():
    return VariableContext(("a", "b", "c"))


@pytest.fixture
def example_norm_seed():
    """The normalization example seed, middle entry read literally as a+c."""
    return LPSeed.initial(("a", "b", "c"), (), ("b+1", "a+c", "(b+1)^2 + a^2*b"))


@pytest.fixture
def mutation_example_seed():
    """The worked mutation example's seed with middle entry a*c + 1.

    This is the reading under which the substitution a <- 1/d yields c/d + 1
    and the target seed ({d,b,c}, {b+1, c+d, d^2+b}) mutates back to this
    seed, as the involution property requires.
    """
    return LPSeed.initial(("a", "b", "c"), (), ("b+1", "a*c+1", "(b+1)^2 + a^2*b"))


@pytest.fixture
def hexagon():
    return MarkedSurface(0, 0, (6,))


@pytest.fixture
def mobius2():
    return MarkedSurface(0, 1, (2,))


@pytest.fixture
def mobius3():
    return MarkedSurface(0, 1, (3,))


@pytest.fixture
def mobius4():
    return MarkedSurface(0, 1, (4,))


@pytest.fixture
def annulus22():
    return MarkedSurface(0, 0, (2, 2))


def random_polynomial(rng, ctx, max_terms=3, max_degree=2, max_coeff=2, avoid=None):
    """Random nonzero ordinary polynomial avoiding one variable index."""
    nvars = ctx.nvars
    while True:
        d = {}
        for _ in range(rng.randint(1, max_terms)):
            e = [0] * nvars
            budget = rng.randint(0, max_degree)
            for _ in range(budget):
                i = rng.randrange(nvars)
                if avoid is not None and i == avoid:
                    continue
                e[i] += 1
            d[tuple(e)] = rng.choice([c for c in range(-max_coeff, max_coeff + 1) if c])
        p = Polynomial.from_dict(ctx, d)
        if not p.is_zero:
            return p.canonical_sign()


def random_valid_seed(rng, n=3, n_frozen=1, max_degree=2):
    """A random valid LP seed: irreducible F_i avoiding x_i, not a cluster variable."""
    cluster = tuple(f"x{i+1}" for i in range(n))
    frozen = tuple(f"t{i+1}" for i in range(n_frozen))
    ctx = VariableContext(cluster, frozen)
    polys = []
    for i in range(n):
        for _ in range(300):
            p = random_polynomial(rng, ctx, max_degree=max_degree, avoid=i)
            if p.is_unit or p.is_zero or p.involves(i):
                continue
            if len(p.terms) == 1 and p.total_degree() == 1 and i < n:
                continue  # skip bare variables: cluster variables are not allowed
            try:
                if is_irreducible(p):
                    polys.append(p)
                    break
            except Exception:
                continue
        else:
            raise RuntimeError("could not sample an irreducible polynomial")
    return LPSeed.initial(cluster, frozen, polys)
