import functools

import pytest

from mengerkit.algebra import algebra_from_functions
from mengerkit.generators import enumerate_abstract, enumerate_function_algebras
from mengerkit.nfun import PartialFunctionTable, projector


def fn(text, m=2, n=2):
    return PartialFunctionTable.from_string(text, m, n)


I1 = projector(2, 2, 1)
I2 = projector(2, 2, 2)
C0 = fn("0000")
C1 = fn("1111")
XOR = fn("0110")


@functools.lru_cache(maxsize=None)
def function_algebras():
    """(algebra, images) for every closed set of full binary functions on {0,1} with projectors."""
    return tuple(algebra_from_functions(fs) for fs in enumerate_function_algebras(2, 2))


@functools.lru_cache(maxsize=None)
def abstract_algebras(max_size=3, n=2):
    return tuple(a for s in range(1, max_size + 1) for a in enumerate_abstract(n, s))


@pytest.fixture
def g2():
    alg, images = algebra_from_functions([I1, I2])
    return alg, images


_CRITERIA: dict[int, tuple[bool, float, str]] = {}


def record_criterion(number: int, passed: bool, seconds: float, detail: str = "") -> None:
    _CRITERIA[number] = (passed, seconds, detail)
    print(f"criterion {number}: {'PASS' if passed else 'FAIL'} ({seconds:.1f} s) {detail}".rstrip())


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        passed, seconds, detail = _CRITERIA[k]
        line = f"criterion {k}: {'PASS' if passed else 'FAIL'} ({seconds:.1f} s) {detail}"
        terminalreporter.write_line(line.rstrip())
