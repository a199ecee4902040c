"""Exact and modular rank backends"""

import numpy as np
import pytest

from quartica.config import EngineConfig
from quartica.linalg import (
    ExactBackend,
    ModularBackend,
    SparseMatrix,
    choose_backend,
    choose_prime,
    determinant,
    modular_root,
    rref_mod,
    solve_square,
)


def _matrix(nf, dense):
    rows = [{j: nf(v) for j, v in enumerate(row) if v} for row in dense]
    return SparseMatrix(nf, len(dense), len(dense[0]), rows)


DENSE = [
    [1, 2, 3, 4],
    [2, 4, 6, 8],
    [0, 1, 1, 0],
    [1, 3, 4, 4],
]


def test_exact_rank_and_kernel(qq):
    m = _matrix(qq, DENSE)
    backend = ExactBackend(qq)
    assert backend.rank(m) == 2
    rank, kernel = backend.kernel(m)
    assert rank == 2
    assert backend.kernel_dim(kernel) == 2
    for v in kernel:
        for row in DENSE:
            assert sum(qq(row[j]) * x for j, x in v.items()) == 0


def test_modular_rank_matches_exact(qq):
    prime, root = choose_prime(qq, seed=7)
    backend = ModularBackend(qq, prime, root)
    m = _matrix(qq, DENSE)
    assert backend.rank(m) == 2
    rank, kernel = backend.kernel(m)
    assert rank == 2
    assert kernel.shape == (2, 4)
    product = (np.array(DENSE, dtype=np.int64) @ kernel.T) % prime
    assert not product.any()


def test_modular_rank_over_number_field(klein_nf):
    e = klein_nf.gen()
    dense = [[e, klein_nf.one()], [e * e, e]]
    m = SparseMatrix(klein_nf, 2, 2, [{0: r[0], 1: r[1]} for r in dense])
    prime, root = choose_prime(klein_nf, seed=11)
    assert ModularBackend(klein_nf, prime, root).rank(m) == 1
    assert ExactBackend(klein_nf).rank(m) == 1


def test_modular_root(klein_nf, qq):
    assert modular_root(klein_nf, 11) == 4 or modular_root(klein_nf, 11) == 6
    assert modular_root(qq, 101) == 0
    # x^2 + x + 2 is irreducible mod 3
    assert modular_root(klein_nf, 3) is None


def test_choose_prime_is_seeded(klein_nf):
    assert choose_prime(klein_nf, seed=5) == choose_prime(klein_nf, seed=5)
    p, r = choose_prime(klein_nf, seed=5)
    assert 2 ** 30 <= p < 2 ** 31
    assert (r * r + r + 2) % p == 0


def test_rref_mod_small():
    reduced, pivots = rref_mod(np.array([[2, 4], [1, 2]]), 7)
    assert pivots == [0]
    assert reduced.tolist() == [[1, 2]]


def test_empty_matrix_rank(qq):
    m = SparseMatrix(qq, 0, 3, [])
    prime, root = choose_prime(qq, seed=1)
    assert ModularBackend(qq, prime, root).rank(m) == 0
    assert ExactBackend(qq).rank(m) == 0


def test_choose_backend_by_size(qq):
    cfg = EngineConfig(rank_method="auto", exact_cells=100, threads=1, seed=3)
    assert isinstance(choose_backend(qq, 50, cfg), ExactBackend)
    assert isinstance(choose_backend(qq, 500, cfg), ModularBackend)
    forced = EngineConfig(rank_method="exact", exact_cells=100, threads=1, seed=3)
    assert isinstance(choose_backend(qq, 500, forced), ExactBackend)


def test_rank_method_rejects_unknown():
    with pytest.raises(ValueError):
        EngineConfig(rank_method="gauss", threads=1)


def test_determinant_and_solve(klein_nf):
    e = klein_nf.gen()
    one = klein_nf.one()
    a = [[e, one], [one, e]]
    assert determinant(a, klein_nf.zero(), one) == e * e - 1
    x = solve_square(a, [e + 1, e + 1])
    assert x == [one, one]
    singular = [[one, one], [one, one]]
    assert determinant(singular, klein_nf.zero(), one) == 0
    assert solve_square(singular, [one, one]) is None


def test_extend_returns_rows_that_raise_rank(qq):
    rows = _matrix(qq, DENSE).rows
    basis = {}
    kept = ExactBackend.extend(basis, rows)
    assert kept == [rows[0], rows[2]]
    assert len(basis) == 2
    assert ExactBackend.extend(basis, [rows[3], {}]) == []


def test_shifted_span_and_reduce_rows(qq):
    prime, root = choose_prime(qq, seed=9)
    backend = ModularBackend(qq, prime, root)
    vectors = [{0: qq(1), 1: qq(-1)}, {0: qq(2), 1: qq(-2)}]
    reduced = backend.reduce_rows(vectors, 2)
    assert reduced.tolist() == [[1, prime - 1], [2, prime - 2]]
    span = backend.shifted_span(reduced, [[0, 1], [1, 2]], width=3)
    assert span.shape == (2, 3)
    assert backend.shifted_rank(reduced, [[0, 1], [1, 2]]) == 2
    assert backend.shifted_span(np.zeros((0, 2), dtype=np.int64), [[0, 1]], width=2).shape == (0, 2)
