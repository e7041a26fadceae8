import pickle

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brandtrank.semigroup import (
    AssociativityError,
    DomainError,
    ElementSet,
    FiniteSemigroup,
    InvalidElementError,
    Witness,
    closure,
    idempotents,
    is_band,
    is_decomposable,
    is_generating,
    is_independent,
    is_prime_subset,
    iter_bits,
    read_cache,
    write_cache,
)

from oracles import naive_closure, naive_independent, small_transformation_semigroups

APLUS2_ORDER = 29


def right_zero(m):
    return FiniteSemigroup([[b for b in range(m)] for _ in range(m)])


def cyclic_group(m):
    return FiniteSemigroup([[(a + b) % m for b in range(m)] for a in range(m)])


subsets29 = st.sets(st.integers(0, APLUS2_ORDER - 1), max_size=12)


def test_rejects_non_square_and_out_of_range():
    with pytest.raises(DomainError):
        FiniteSemigroup([[0, 0]])
    with pytest.raises(InvalidElementError):
        FiniteSemigroup([[1]])
    with pytest.raises(DomainError):
        FiniteSemigroup([[0]], labels=["a", "b"])


def test_associativity_is_checked():
    # x*y = x+1 (mod 2) is not associative
    with pytest.raises(AssociativityError):
        FiniteSemigroup([[1, 1], [0, 0]])
    S = FiniteSemigroup([[1, 1], [0, 0]], check_associativity=False)
    assert not S.is_associative()
    assert S.associativity_violation() is not None


def test_table_is_read_only(aplus2):
    with pytest.raises(ValueError):
        aplus2.table[0, 0] = 1


def test_iter_bits():
    assert list(iter_bits(0b101001)) == [0, 3, 5]
    assert list(iter_bits(0)) == []


def test_closure_examples():
    Z = cyclic_group(6)
    assert closure(Z, [2]) == {0, 2, 4}
    assert closure(Z, [1]) == set(range(6))
    assert closure(Z, []) == set()
    assert is_generating(Z, [5])
    R = right_zero(4)
    assert closure(R, [1, 2]) == {1, 2}
    assert is_independent(R, range(4))


def test_is_generating_with_two_cosets():
    Z = cyclic_group(6)
    assert is_generating(Z, [2, 3])
    assert not is_generating(Z, [2, 4])


def test_independence_examples(aplus2):
    assert is_independent(aplus2, [])
    assert is_independent(aplus2, [5])
    a = next(i for i in range(aplus2.size) if aplus2.product(i, i) != i)
    assert not is_independent(aplus2, [a, aplus2.product(a, a)])


def test_idempotents_and_bands():
    R = right_zero(3)
    assert is_band(R)
    assert idempotents(cyclic_group(4)) == {0}
    assert not is_band(cyclic_group(4))


def test_prime_subset_definition():
    Z = cyclic_group(4)
    # complement {0, 2} is a subgroup
    assert is_prime_subset(Z, [1, 3])
    assert not is_prime_subset(Z, [0])
    with pytest.raises(DomainError):
        is_prime_subset(Z, [])


def test_decomposable():
    R = right_zero(3)
    # in a right-zero semigroup a = b*a needs the right factor to be a itself
    assert not any(is_decomposable(R, a) for a in range(3))
    assert all(is_decomposable(cyclic_group(3), a) for a in range(3))
    with pytest.raises(InvalidElementError):
        is_decomposable(R, 3)


def test_element_set_operations(aplus2):
    A = aplus2.subset([1, 2, 3])
    B = aplus2.subset([3, 4])
    assert (A | B) == {1, 2, 3, 4}
    assert (A & B) == {3}
    assert (A - B) == {1, 2}
    assert len(A.complement()) == aplus2.size - 3
    assert 3 in A and 4 not in A and "x" not in A
    assert A.labels() == [aplus2.labels[i] for i in (1, 2, 3)]
    with pytest.raises(InvalidElementError):
        ElementSet(aplus2, 1 << aplus2.size)
    with pytest.raises(InvalidElementError):
        aplus2.subset([aplus2.size])
    with pytest.raises(TypeError):
        aplus2.mask_of(3)


def test_witness_kinds(aplus2):
    with pytest.raises(DomainError):
        Witness("nonsense", aplus2.subset([]))
    assert Witness("generating-set", aplus2.all_elements()).check()
    assert not Witness("proper-subsemigroup", aplus2.all_elements()).check()


def test_cache_round_trip(tmp_path, aplus2):
    path = tmp_path / "a.sgp"
    data = write_cache(aplus2, path)
    assert data[:4] == b"SGP1"
    assert int.from_bytes(data[4:8], "little") == 29
    assert len(data) >= 8 + 4 * 29 * 29
    back = read_cache(path)
    assert back.labels == aplus2.labels
    assert np.array_equal(back.table, aplus2.table)
    assert write_cache(back, tmp_path / "b.sgp") == data


def test_cache_rejects_garbage(tmp_path):
    p = tmp_path / "bad.sgp"
    p.write_bytes(b"XXXX")
    with pytest.raises(DomainError):
        read_cache(p)
    p.write_bytes(b"SGP1" + (5).to_bytes(4, "little") + b"\0" * 8)
    with pytest.raises(DomainError):
        read_cache(p)


def test_pickle_drops_caches(aplus2):
    aplus2.multiplier  # noqa: B018 - populate the cache
    back = pickle.loads(pickle.dumps(aplus2))
    assert back.closure_mask(1 << 5) == aplus2.closure_mask(1 << 5)


# ---------------------------------------------------------------- oracles


@pytest.mark.parametrize("S", small_transformation_semigroups(max_order=20)[:40], ids=lambda S: f"T{S.size}")
def test_closure_matches_naive_fixpoint(S):
    rng = np.random.default_rng(S.size)
    table = S.table.tolist()
    for _ in range(30):
        u = set(np.flatnonzero(rng.random(S.size) < 0.25).tolist())
        assert closure(S, u) == naive_closure(table, u)
        assert is_independent(S, u) == naive_independent(table, u)


def test_closure_matches_naive_on_aplus2_exhaustive_pairs(aplus2):
    table = aplus2.table.tolist()
    for a in range(aplus2.size):
        for b in range(a, aplus2.size):
            assert closure(aplus2, [a, b]) == naive_closure(table, {a, b})


# ------------------------------------------------------------- properties


@settings(max_examples=150, deadline=None)
@given(u=subsets29, v=subsets29)
def test_closure_is_extensive_monotone_idempotent(aplus2, u, v):
    cu = closure(aplus2, u)
    assert set(u) <= set(cu)
    assert closure(aplus2, cu) == cu
    assert set(cu) <= set(closure(aplus2, u | v))
    assert aplus2.is_closed_mask(cu.mask)


@settings(max_examples=150, deadline=None)
@given(u=subsets29, data=st.data())
def test_independence_is_hereditary(aplus2, u, data):
    if not is_independent(aplus2, u):
        return
    sub = data.draw(st.sets(st.sampled_from(sorted(u))) if u else st.just(set()))
    assert is_independent(aplus2, sub)


@settings(max_examples=150, deadline=None)
@given(u=st.sets(st.integers(0, APLUS2_ORDER - 1), min_size=1, max_size=28))
def test_prime_subset_duality(aplus2, u):
    rest = set(range(aplus2.size)) - u
    table = aplus2.table.tolist()
    closed = naive_closure(table, rest) == rest
    assert is_prime_subset(aplus2, u) == closed


def test_prime_subset_duality_exhaustive():
    for S in small_transformation_semigroups(max_order=8)[:15]:
        for mask in range(1, S.full_mask + 1):
            u = ElementSet.from_mask(S, mask)
            assert is_prime_subset(S, u) == S.is_closed_mask(S.full_mask & ~mask)


@pytest.mark.parametrize("fixture", ["aplus1", "aplus2", "aff2", "aff3"])
def test_decomposable_iff_singleton_not_prime(fixture, request):
    S = request.getfixturevalue(fixture)
    for a in range(S.size):
        assert is_decomposable(S, a) == (not is_prime_subset(S, [a]))


@settings(max_examples=60, deadline=None)
@given(a=st.integers(0, 28), b=st.integers(0, 28), c=st.integers(0, 28))
def test_associativity_sampled(aplus2, a, b, c):
    p = aplus2.product
    assert p(p(a, b), c) == p(a, p(b, c))


# ------------------------------------------------------- worked examples


def test_brandt_two_generated_by_two_triples():
    from brandtrank.brandt import BrandtTriple, Permutation, build_brandt, symmetric_group

    G = symmetric_group(2)
    B = build_brandt(G, 2)
    gens = [B.index(BrandtTriple(1, G.index(Permutation((2, 1))), 2)), B.index(BrandtTriple(2, G.identity, 1))]
    assert len(closure(B, gens)) == 9


def test_constant_generates_only_itself(aplus2):
    c = aplus2.labels.index("const:1,1")
    assert closure(aplus2, [c]) == {c}


def test_non_constants_do_not_generate(aplus2):
    rest = [i for i, lab in enumerate(aplus2.labels) if not lab.startswith("const:")]
    assert not is_generating(aplus2, rest)
    assert is_generating(aplus2, range(aplus2.size))


def test_bands_among_examples(aplus1, aplus2):
    assert is_band(aplus1) and not is_band(aplus2)
    assert idempotents(aplus1) == {0, 1, 2}
    assert is_band(right_zero(2))
    idem = set(idempotents(aplus2).labels())
    for f in aplus2.elements:
        if type(f).__name__ == "SingletonSupport":
            assert (str(f) in idem) == ((f.k, f.l) == (f.p, f.q))


def test_prime_examples(aplus2, aplus3):
    assert is_prime_subset(aplus2, [aplus2.labels.index("ns:1,2;[1,2]"), aplus2.labels.index("ns:1,2;[2,1]")])
    assert is_prime_subset(aplus3, [i for i, lab in enumerate(aplus3.labels) if lab.startswith("const:")])
    assert not is_prime_subset(aplus2, [aplus2.labels.index("zero")])


def test_decomposable_examples(aplus1, aplus2, aplus3):
    assert all(is_decomposable(aplus2, a) for a in range(aplus2.size))
    assert not is_decomposable(aplus1, aplus1.labels.index("ns:1,1;[1]"))
    assert is_decomposable(aplus3, aplus3.labels.index("zero"))
