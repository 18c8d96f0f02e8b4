import pytest

from qconn.bitopology import AlexandrovTopology, BitopSpace


@pytest.fixture
def indiscrete_split_space() -> BitopSpace:
    """Three points; forward topology indiscrete, backward splits {0,1}
    from {2}.  Inseparable as a whole yet join-disconnected."""
    points = ("0", "1", "2")
    return BitopSpace(
        forward=AlexandrovTopology(points=points, nbhd=(0b111, 0b111, 0b111)),
        backward=AlexandrovTopology(points=points, nbhd=(0b011, 0b011, 0b100)),
    )


@pytest.fixture
def cycle_split_space() -> BitopSpace:
    """Three points a, b, c with N+(a)={a,b}, N+(b)={b}, N+(c)={a,b,c},
    N-(a)={a}, N-(b)={b}, N-(c)={b,c}: the combined digraph is a cycle
    but the join topology splits {a} from {b,c}."""
    points = ("a", "b", "c")
    return BitopSpace(
        forward=AlexandrovTopology(points=points, nbhd=(0b011, 0b010, 0b111)),
        backward=AlexandrovTopology(points=points, nbhd=(0b001, 0b010, 0b110)),
    )
