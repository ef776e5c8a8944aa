import pytest
from hypothesis import settings, strategies as st

from treepoly.analysis import reconstruct_from_polynomial
from treepoly.poly import ONE, parse_poly
from treepoly.trees import RootedTree

settings.register_profile("default", deadline=None)
settings.load_profile("default")

# P-polynomials of four 9-vertex trees, listed without the
# constant term 1 contributed by the empty subforest.
COUNTEREXAMPLE_P = {
    "a_twin_1": "2x^3y + 2x^5y + x^5y^2 + 3x^6y^2 + 2x^7y^2 + x^7y^3 + 3x^8y^3 + x^9y^4",
    "a_twin_2": "2x^3y + x^4y + x^4y^2 + x^5y + 3x^6y^2 + 2x^7y^2 + x^7y^3 + 3x^8y^3 + x^9y^4",
    "p_twin_1": "x^3y + x^4y + x^6y + x^6y^2 + x^7y^2 + x^8y^2 + x^9y^3",
    "p_twin_2": "x^3y + x^4y + x^5y + x^5y^2 + x^7y^2 + x^8y^2 + x^9y^3",
}


def counterexample_P(name: str):
    return parse_poly(COUNTEREXAMPLE_P[name]) + ONE


@pytest.fixture(scope="session")
def counterexamples():
    out = {}
    for name in COUNTEREXAMPLE_P:
        found = reconstruct_from_polynomial("P", counterexample_P(name))
        assert len(found) == 1, (name, found)
        out[name] = found[0]
    return out


def _build(shape) -> RootedTree:
    return RootedTree(_build(c) for c in shape)


def _text(shape) -> str:
    return "(" + "".join(_text(c) for c in shape) + ")"


# nested lists: a vertex is the list of its children
tree_shapes = st.recursive(
    st.just([]),
    lambda kids: st.lists(kids, max_size=4),
    max_leaves=14,
)

trees = tree_shapes.map(_build)
