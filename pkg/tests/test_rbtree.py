import random

from hypothesis import given
from hypothesis import strategies as st

from rbtree_oracle import check_tree, program
from rcir import corpus
from rcir.analysis import analyze_reuse_guards
from rcir.interp import eval_pure, eval_rc
from rcir.pipeline import full_pipeline


def run(variant, keys):
    value, stats = eval_rc(full_pipeline(program(variant, keys)))
    return value, stats


def t_nodes(stats) -> int:
    return sum(n for (c, shape), n in stats.alloc_sites.items() if shape == "C2/4")


@given(st.integers(1, 24).flatmap(lambda n: st.permutations(list(range(n)))))
def test_random_insertion_orders(keys):
    chained, cs = run("chained", keys)
    naive, ns = run("naive", keys)
    assert check_tree(chained) == sorted(keys)
    assert chained == naive == eval_pure(program("chained", keys))
    assert t_nodes(cs) == len(keys)
    assert cs.allocs_in("ins", "C2/4") == len(keys)
    assert t_nodes(ns) >= t_nodes(cs)


def test_duplicate_keys_allocate_nothing():
    keys = [3, 1, 3, 2, 1]
    value, stats = run("chained", keys)
    assert check_tree(value) == [1, 2, 3]
    assert t_nodes(stats) == 3


def test_all_rebalancing_cases_reached():
    rng = random.Random(0)
    touched = set()
    for _ in range(40):
        keys = list(range(rng.randint(3, 20)))
        rng.shuffle(keys)
        _, stats = run("chained", keys)
        touched |= {c for c, (u, f) in stats.reuse_sites.items() if u + f}
    assert {"ins", "balance1", "balance1b", "balance1c", "balance2", "balance2b", "balance2c"} <= touched


def test_chained_has_fewer_unguarded_ctors():
    chained = analyze_reuse_guards(full_pipeline(corpus.load("rbtree_chained")))
    naive = analyze_reuse_guards(full_pipeline(corpus.load("rbtree_naive")))
    tree_fns = ("ins", "balance1", "balance1b", "balance1c", "balance2", "balance2b", "balance2c")
    count = lambda r: sum(r.unguarded(c, min_arity=1) for c in tree_fns)  # noqa: E731
    assert count(chained) < count(naive)
    # only the leaf case of ins builds a node from scratch
    assert count(chained) == 1
    (leaf,) = [e for e in chained.entries if e.fn in tree_fns and e.arity >= 1]
    assert leaf.fn == "ins" and leaf.arity == 4
