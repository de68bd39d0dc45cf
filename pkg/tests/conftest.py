from __future__ import annotations

import os
from fractions import Fraction
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from hadakern.matrix import HermitianMatrix, Matrix  # noqa: E402
from hadakern.scalars import GAUSSIAN, RATIONAL, GaussianRational  # noqa: E402

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        ok, text = ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {text}")


small_int = st.integers(min_value=-3, max_value=3)
small_rational = st.builds(Fraction, small_int, st.integers(1, 3))
gaussian = st.builds(GaussianRational, small_rational, small_rational)
sparse_gaussian = st.sampled_from(
    [GaussianRational(x, y) for x, y in [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (2, 0), (1, 1)]]
)


@st.composite
def hermitian(draw, max_n=5, entries=gaussian):
    n = draw(st.integers(1, max_n))
    rows = [[GAUSSIAN.zero] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = GaussianRational(draw(entries).re)
        for j in range(i + 1, n):
            z = draw(entries)
            rows[i][j] = z
            rows[j][i] = z.conjugate()
    return HermitianMatrix(rows, GAUSSIAN)


@st.composite
def psd(draw, max_n=5, entries=gaussian):
    n = draw(st.integers(1, max_n))
    r = draw(st.integers(1, n))
    V = Matrix([[draw(entries) for _ in range(r)] for _ in range(n)], GAUSSIAN)
    return HermitianMatrix._trusted(V @ V.conj_transpose())


@st.composite
def rational_matrix(draw, max_rows=5, max_cols=5):
    m = draw(st.integers(1, max_rows))
    n = draw(st.integers(1, max_cols))
    return Matrix([[draw(small_rational) for _ in range(n)] for _ in range(m)], RATIONAL)
