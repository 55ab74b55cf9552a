import random

from hypothesis import strategies as st

from gaussinv.lab import random_diagram


@st.composite
def diagrams(draw, max_arrows=7):
    n = draw(st.integers(0, max_arrows))
    return random_diagram(random.Random(draw(st.integers(0, 2**32))), n)

