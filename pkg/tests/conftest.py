import pytest

from semieuclid import census as C
from semieuclid.qarith import Algebra, Involution
from semieuclid.orders import validate_order

# criterion number -> (verdict, detail), filled in by test_acceptance
ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        verdict, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {verdict}  {detail}")


@pytest.fixture(scope="session")
def H():
    return Algebra.quaternion(-1, -1)


@pytest.fixture(scope="session")
def lipschitz(H):
    one, i, j, k = H.basis()
    return validate_order([one, i, j, k])


@pytest.fixture(scope="session")
def hurwitz(H):
    one, i, j, k = H.basis()
    return validate_order([one, i, j, (one + i + j + k) / 2])


@pytest.fixture(scope="session")
def quadratic():
    """Map name -> order for the planar examples."""
    def make(d, half):
        K = Algebra.quadratic(d)
        second = (K.one + K.i) / 2 if half else K.i
        return validate_order([K.one, second])
    return {
        "Z[i]": make(1, False),
        "Z[sqrt-2]": make(2, False),
        "Z[sqrt-3]": make(3, False),
        "Z[omega]": make(3, True),
        "Z[(1+sqrt-7)/2]": make(7, True),
        "Z[(1+sqrt-11)/2]": make(11, True),
        "Z[(1+sqrt-15)/2]": make(15, True),
        "Z[sqrt-5]": make(5, False),
    }


@pytest.fixture(scope="session")
def dagger_lipschitz():
    H2 = Algebra.quaternion(-1, -2)
    one, i, j, k = H2.basis()
    return validate_order([one, i, j, k], Involution.orthogonal(H2))


@pytest.fixture(scope="session")
def census_records():
    return {d: C.run_census(d) for d in (3, 4, 5)}
