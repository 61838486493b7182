import itertools

import pytest
from hypothesis import strategies as st

from mahonian_lab.exact_core import BivarPoly


def small_polys(max_deg=4, max_coeff=50):
    """Random BivarPoly with degrees <= max_deg."""
    return st.integers(0, max_deg).flatmap(
        lambda dp: st.integers(0, max_deg).flatmap(
            lambda dq: st.lists(
                st.lists(st.integers(-max_coeff, max_coeff), min_size=dq + 1, max_size=dq + 1),
                min_size=dp + 1, max_size=dp + 1,
            )
        )
    ).map(BivarPoly)


def naive_inv(w):
    return sum(1 for i, j in itertools.combinations(range(len(w)), 2) if w[i] > w[j])


def naive_maj(w):
    return sum(i for i in range(1, len(w)) if w[i - 1] > w[i])


def naive_joint(n):
    """{(inv, maj): count} over S_n by direct enumeration."""
    out = {}
    for w in itertools.permutations(range(1, n + 1)):
        key = (naive_inv(w), naive_maj(w))
        out[key] = out.get(key, 0) + 1
    return out


@pytest.fixture
def cache_dir(tmp_path):
    return tmp_path / "cache"


# acceptance outcomes, keyed by criterion number, printed after the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, label = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {label}")
