import pytest

from mlat import groups
from mlat.core import commutator_star_of_group, trivial_star_of_group
from mlat.corpus import load_corpus


def triv(table, name):
    mul, names = table
    return trivial_star_of_group(mul, name=name, names=names)


def comm_star(table, name):
    mul, names = table
    G, report = commutator_star_of_group(mul, name=name, names=names)
    assert report.valid
    return G


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture(scope="session")
def small():
    """A handful of named algebras used across modules."""
    return {
        "c1": triv(groups.abelian(), "c1"),
        "c2": triv(groups.cyclic(2), "c2"),
        "c3": triv(groups.cyclic(3), "c3"),
        "c4": triv(groups.cyclic(4), "c4"),
        "c6": triv(groups.cyclic(6), "c6"),
        "c8": triv(groups.cyclic(8), "c8"),
        "v4": triv(groups.klein_four(), "v4"),
        "s3": triv(groups.symmetric(3), "s3"),
        "s3c": comm_star(groups.symmetric(3), "s3c"),
        "d4": triv(groups.dihedral(4), "d4"),
        "d4c": comm_star(groups.dihedral(4), "d4c"),
        "q8": triv(groups.quaternion(), "q8"),
        "q8c": comm_star(groups.quaternion(), "q8c"),
    }


ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, text = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {text}")
