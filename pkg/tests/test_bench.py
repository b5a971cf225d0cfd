import pytest

from degbound.bench import bench_dp, bench_join, random_join_instance, time_call


def test_random_join_instance_is_deterministic():
    a = random_join_instance(3, 2, 1, seed=4)
    b = random_join_instance(3, 2, 1, seed=4)
    assert a.left == b.left and a.right == b.right


def test_sampled_tables_respect_size():
    inst = random_join_instance(5, 2, 2, seed=1, entries=100, color_vectors=2)
    assert 0 < len(inst.left) <= 100


def test_bench_rows_agree():
    assert all(r["agree"] for r in bench_join([0, 1, 2], 2, 2, 1, entries=40))
    assert all(r["agree"] for r in bench_dp([1, 2], 2, 1, 1))


def test_time_call_needs_repetitions():
    with pytest.raises(ValueError):
        time_call(lambda: None, 0)
