import pytest

from bnsl.instances import parse_nonzero

# 4-variable worked example: optimum 7 via b <- {a,c}, c <- {a}, d <- {b,c}
EXAMPLE4 = """\
4
a 3
1 1 b
1 1 c
2 2 b c
b 3
1 1 a
1 1 c
3 2 a c
c 2
3 1 a
2 1 b
d 1
1 2 b c
"""


@pytest.fixture
def example4():
    return parse_nonzero(EXAMPLE4)


@pytest.fixture
def example4_text():
    return EXAMPLE4
