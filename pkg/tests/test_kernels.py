"""Numba kernels against the pure-numpy fallback on identical inputs."""

import subprocess
import sys

import numpy as np
import pytest

from majlab import kernels


def _reference_popcount(codes):
    return np.bitwise_count(codes).astype(np.int64)


def test_popcount_full_range():
    codes = kernels.all_colorings(16)
    assert (kernels.popcount(codes) == _reference_popcount(codes)).all()


def test_answer_codes_against_python(subtests=None):
    rng = np.random.default_rng(0)
    for _ in range(40):
        n = int(rng.integers(2, 20))
        codes = rng.integers(0, 1 << n, size=200, dtype=np.uint32)
        size = int(rng.integers(2, n + 1))
        balls = rng.choice(np.arange(1, n + 1), size=size, replace=False)
        qm = kernels.query_mask(balls)
        gm = kernels.gm_answer_codes(codes, qm, size)
        cm = kernels.cm_answer_codes(codes, qm, size)
        for c, g, m in zip(codes.tolist(), gm.tolist(), cm.tolist()):
            inter = bin(c & int(qm)).count("1")
            assert g == (1 if inter in (0, size) else 0)
            assert m == min(inter, size - inter)


def test_worst_split_matches_direct_count():
    rng = np.random.default_rng(1)
    n = 10
    codes = np.unique(rng.integers(0, 1 << n, size=300, dtype=np.uint32))
    queries = [(1, 2, 3), (2, 5, 9), (4, 6, 7)]
    qmasks = [kernels.query_mask(q) for q in queries]
    sizes = [3, 3, 3]
    for model in ("gm", "cm"):
        got = kernels.worst_split_sizes(codes, qmasks, sizes, model)
        for i, q in enumerate(queries):
            if model == "gm":
                ans = kernels.gm_answer_codes(codes, qmasks[i], 3)
                want = max(np.count_nonzero(ans == v) for v in (0, 1))
            else:
                ans = kernels.cm_answer_codes(codes, qmasks[i], 3)
                want = max(np.count_nonzero(ans == v) for v in (0, 1))
            assert got[i] == want


def test_numpy_backend_matches_numba():
    """Run the same workload under MAJLAB_BACKEND=numpy in a subprocess."""
    code = r"""
import numpy as np
from majlab import kernels
assert kernels.backend() == "%s"
codes = kernels.all_colorings(14)
qm = kernels.query_mask([1, 5, 9, 13])
print(int(kernels.popcount(codes).sum()))
print(int(kernels.gm_answer_codes(codes, qm, 4).sum()))
print(int(kernels.cm_answer_codes(codes, qm, 4).sum()))
print(kernels.proper_two_coloring(
    [kernels.query_mask([1, 2, 3]), kernels.query_mask([2, 3, 4])], [3, 3], 4))
print(kernels.worst_split_sizes(
    codes, [qm, kernels.query_mask([2, 3])], [4, 2], "gm").tolist())
"""
    outs = {}
    for backend in ("numba", "numpy"):
        proc = subprocess.run(
            [sys.executable, "-c", code % backend],
            capture_output=True, text=True,
            env={"MAJLAB_BACKEND": backend, "PATH": "/usr/bin:/bin"},
        )
        assert proc.returncode == 0, proc.stderr
        outs[backend] = proc.stdout
    assert outs["numba"] == outs["numpy"]


def test_proper_coloring_early_exit_and_failure():
    tri = [kernels.query_mask(e) for e in ((1, 2), (1, 3), (2, 3))]
    assert kernels.proper_two_coloring(tri, [2, 2, 2], 3) == -1
    one = [kernels.query_mask((1, 2, 3))]
    found = kernels.proper_two_coloring(one, [3], 3)
    assert found >= 0
    assert bin(found).count("1") not in (0, 3)
