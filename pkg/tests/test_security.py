import itertools
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

import oracles
from icsec.errors import ValidationError
from icsec.gf import GF, field_new
from icsec.icsi import IcsiInstance, load_instance
from icsec.indexcode import IndexCode, is_valid, kappa_q
from icsec.lincode import LinearCode, all_vectors, code_distance, vandermonde_mds
from icsec.matlin import MatGF, support
from icsec.security import (
    MessageSpace,
    block_security_profile,
    completely_insecure_check,
    consistent_count,
    entropy_oracle,
    guaranteed_block,
    has_no_information,
    icsri_valid,
    kappa_star,
    restricted_distances,
    uniform_for_all_messages,
)


@st.composite
def encoders(draw, fields=((2, 1), (3, 1)), max_n=5, max_N=3):
    """``n x N`` matrices with a nonzero column space."""
    p, m = draw(st.sampled_from(fields))
    F = field_new(p, m)
    n = draw(st.integers(2, max_n))
    N = draw(st.integers(1, max_N))
    data = draw(st.lists(st.integers(0, F.q - 1), min_size=n * N, max_size=n * N))
    L = MatGF(F, np.array(data).reshape(n, N))
    assume(L.a.any())
    return L


def pairs(n, max_known=None):
    """Every disjoint ``(X_A, B)`` with ``B`` nonempty."""
    idx = range(n)
    for a in range(n if max_known is None else max_known + 1):
        for known in itertools.combinations(idx, a):
            rest = [j for j in idx if j not in known]
            for b in range(1, len(rest) + 1):
                for block in itertools.combinations(rest, b):
                    yield known, block


class TestNoInformation:
    def test_hamming7_weak(self, h7_L):
        assert has_no_information(h7_L, {0}, {1})

    def test_hamming7_leak(self, h7_L):
        # (1,0,0,0,0,1,1) is a codeword, found by enumerating all 16
        words = LinearCode(h7_L.T).codewords().tolist()
        assert [1, 0, 0, 0, 0, 1, 1] in words
        assert not has_no_information(h7_L, {0, 5}, {6})

    def test_identity_leaks(self):
        assert not has_no_information(MatGF.identity(GF(3), 4), set(), {2})

    def test_rejects_overlap(self, h7_L):
        with pytest.raises(ValidationError):
            has_no_information(h7_L, {0}, {0, 1})
        with pytest.raises(ValidationError):
            has_no_information(h7_L, {0}, set())

    def test_pure_oracle_on_hamming7(self, h7_L):
        # independent loop-based verifier on a spread of pairs
        L = h7_L.tolist()
        for known, block in [((), (0, 1)), ((0,), (1,)), ((0, 5), (6,)), ((2, 4), (5,)), ((), (3,)), ((1,), (2, 6))]:
            assert oracles.no_information(L, 2, known, block) == has_no_information(h7_L, known, block)


class TestEntropyOracle:
    def test_agrees_on_hamming7(self, h7_L):
        space = MessageSpace(h7_L)
        for known, block in pairs(7, max_known=2):
            if len(block) > 2:
                continue
            assert space.uniform(known, block) == has_no_information(h7_L, known, block)

    def test_identity_never_uniform(self):
        L = MatGF.identity(GF(2), 3)
        for known, block in pairs(3):
            assert not uniform_for_all_messages(L, known, block)

    def test_hamming7_pairs_hidden_from_outsider(self, h7_L):
        for block in itertools.combinations(range(7), 2):
            assert uniform_for_all_messages(h7_L, (), block)

    def test_counts_are_exact(self, h7_L):
        x = np.array([1, 0, 1, 1, 0, 0, 1])
        res = entropy_oracle(h7_L, (), (0, 1), x)
        assert res.uniform
        assert res.counts == {(0, 0): 2, (0, 1): 2, (1, 0): 2, (1, 1): 2}
        brute = oracles.conditional_counts(h7_L.tolist(), 2, (), (0, 1), tuple(x))
        assert dict(brute) == res.counts

    def test_single_message_matches_all_messages(self, h7_L):
        for known, block in [((0, 5), (6,)), ((), (0, 1, 2))]:
            per_x = all(entropy_oracle(h7_L, known, block, x).uniform for x in all_vectors(2, 7))
            assert per_x == uniform_for_all_messages(h7_L, known, block)

    @settings(max_examples=80, deadline=None)
    @given(encoders(max_n=5))
    def test_equivalence_random(self, L):
        space = MessageSpace(L)
        for known, block in pairs(L.rows):
            assert space.uniform(known, block) == has_no_information(L, known, block)

    @settings(max_examples=25, deadline=None)
    @given(encoders(max_n=3, max_N=2))
    def test_equivalence_pure_oracle(self, L):
        q = L.field.q
        for known, block in pairs(L.rows):
            assert oracles.no_information(L.tolist(), q, known, block) == has_no_information(L, known, block)


class TestDistanceGuarantees:
    @settings(max_examples=80, deadline=None)
    @given(encoders(max_n=6, max_N=4))
    def test_block_security_below_distance(self, L):
        d, _ = code_distance(L.field, L.T)
        n = L.rows
        for t in range(0, d - 1):
            b = d - 1 - t
            if b > n - t:
                continue
            for known in itertools.combinations(range(n), t):
                rest = [j for j in range(n) if j not in known]
                for block in itertools.combinations(rest, b):
                    assert has_no_information(L, known, block)

    @settings(max_examples=80, deadline=None)
    @given(encoders(max_n=6, max_N=4))
    def test_codeword_attack(self, L):
        for c in LinearCode(L.T).codewords()[1:]:
            supp = sorted(support(c))
            assert not has_no_information(L, supp[:-1], {supp[-1]})

    @settings(max_examples=80, deadline=None)
    @given(encoders(max_n=5, max_N=3))
    def test_list_size(self, L):
        d, _ = code_distance(L.field, L.T)
        n, N, q = L.rows, L.cols, L.field.q
        # the count q^(n-t-N) presumes independent columns
        assume(LinearCode(L.T).k == N)
        rng = np.random.default_rng(0)
        for t in range(0, min(d, n)):
            for known in itertools.combinations(range(n), t):
                x = rng.integers(0, q, size=n)
                assert consistent_count(L, known, x) == q ** (n - t - N)

    @settings(max_examples=80, deadline=None)
    @given(encoders(max_n=6, max_N=4))
    def test_complete_insecurity_above_dual_distance(self, L):
        _, dd = code_distance(L.field, L.T)
        n = L.rows
        for t in range(max(n - dd + 1, 0), n + 1):
            for known in itertools.combinations(range(n), t):
                assert completely_insecure_check(L, known).complete

    @settings(max_examples=40, deadline=None)
    @given(encoders(max_n=5, max_N=3))
    def test_restricted_guarantees_per_view(self, L):
        for mu in range(1, L.cols + 1):
            d_mu, dd_mu = restricted_distances(L, mu)
            n = L.rows
            for W in itertools.combinations(range(L.cols), mu):
                LW = L.col_sub(W)
                for t in range(0, d_mu - 1):
                    for known in itertools.combinations(range(n), t):
                        rest = [j for j in range(n) if j not in known]
                        for block in itertools.combinations(rest, min(d_mu - 1 - t, len(rest))):
                            assert has_no_information(LW, known, block)
                for known in itertools.combinations(range(n), max(n - dd_mu + 1, 0)):
                    assert completely_insecure_check(LW, known).complete


class TestInsecurity:
    def test_hamming7_strength_four(self, h7_L):
        for known in itertools.combinations(range(7), 4):
            assert completely_insecure_check(h7_L, known)

    def test_hamming7_single_known(self, h7_L):
        res = completely_insecure_check(h7_L, {0})
        assert not res.complete and res.recovered == []

    def test_recipes_recover(self, h7_L):
        known = (0, 1, 2, 3)
        res = completely_insecure_check(h7_L, known)
        for x in all_vectors(2, 7)[::5]:
            s = x @ h7_L
            for j, beta in res.recipes.items():
                c = beta @ h7_L.T
                # c = e_j + (part on X_A): x_j = s.beta - x.(c - e_j)
                rest = c.copy()
                rest[j] = 0
                assert (int(s @ beta) - int(x @ rest)) % 2 == x[j]

    @settings(max_examples=60, deadline=None)
    @given(encoders(max_n=5, max_N=3), st.data())
    def test_all_but_one_known(self, L, data):
        n = L.rows
        j = data.draw(st.integers(0, n - 1))
        known = [k for k in range(n) if k != j]
        words = LinearCode(L.T).codewords()
        assert completely_insecure_check(L, known).complete == bool(words[:, j].any())


class TestProfile:
    def test_hamming7(self, h7_L):
        r = block_security_profile(h7_L)
        assert (r.d, r.d_dual) == (3, 4)
        assert r.guaranteed_block[0] == 2 and r.guaranteed_block[1] == 1
        assert r.weakly_secure_up_to == 1
        assert r.insecure_from == 4
        m = {s.strength: s for s in r.measured}
        assert m[0].block == 2 and m[1].block == 1 and m[2].block == 0
        assert all(m[t].completely_insecure for t in range(4, 7))
        assert not m[3].completely_insecure
        assert r.list_size_exponent == {0: 3, 1: 2, 2: 1}
        assert {a.weight for a in r.attacks} == {3, 4, 7}
        for a in r.attacks:
            assert not has_no_information(h7_L, a.known, {a.target})
            assert len(a.known) == a.weight - 1

    def test_mds_thresholds_coincide(self):
        for F, k, n in [(GF(5), 2, 4), (GF(7), 3, 6), (GF(2), 1, 3)]:
            G = vandermonde_mds(F, k, n) if F.q > 2 else MatGF(F, [[1, 1, 1]])
            r = block_security_profile(G.T)
            assert r.insecure_from == r.d - 1

    def test_identity(self):
        r = block_security_profile(MatGF.identity(GF(2), 4))
        assert r.d == 1
        assert all(b == 0 for b in r.guaranteed_block.values())
        assert r.insecure_from == 0

    def test_guaranteed_block(self):
        assert [guaranteed_block(4, t) for t in range(5)] == [3, 2, 1, 0, 0]

    def test_sampling_is_seeded_and_marked(self, h7_L):
        a = block_security_profile(h7_L, pair_budget=200, seed=5)
        b = block_security_profile(h7_L, pair_budget=200, seed=5)
        assert a.to_dict() == b.to_dict()
        assert any(s.sampled for s in a.measured)
        assert a.to_dict()["budgets"]["pairs"] == 200

    def test_serializes(self, h7_L):
        doc = block_security_profile(h7_L).to_dict()
        assert doc["attacks"][0]["known"] == [3, 5]
        assert doc["guaranteed_block"]["0"] == 2


class TestRestrictedDistances:
    def test_full_view(self, h7_L):
        assert restricted_distances(h7_L, 4) == (3, 4)

    def test_single_column(self, h7_L):
        weights = [int(np.count_nonzero(h7_L.column(j))) for j in range(4)]
        assert sorted(weights) == [3, 3, 3, 4]
        assert restricted_distances(h7_L, 1)[0] == 3

    def test_zero_view_rejected(self, h7_L):
        with pytest.raises(ValidationError):
            restricted_distances(h7_L, 0)

    def test_zero_column_convention(self):
        L = MatGF(GF(2), [[1, 0], [1, 0], [0, 0]])
        assert restricted_distances(L, 1) == (2, 1)


class TestIcsri:
    def test_fixture(self, fixtures_dir, h7_L):
        inst = load_instance(fixtures_dir / "hamming7_restricted.json")
        assert icsri_valid(IndexCode(inst, h7_L))

    def test_infeasible(self, fixtures_dir):
        inst = load_instance(fixtures_dir / "two_message_infeasible.json")
        kappa, L = kappa_star(inst)
        assert math.isinf(kappa) and L is None

    def test_infeasible_by_exhaustion(self, fixtures_dir):
        # every 2 x N binary matrix with N <= 3 is either invalid or leaks x_1 to receiver 2
        inst = load_instance(fixtures_dir / "two_message_infeasible.json")
        for N in range(1, 4):
            for flat in all_vectors(2, 2 * N):
                code = IndexCode(inst, MatGF(GF(2), flat.reshape(2, N)))
                assert not icsri_valid(code)

    def test_empty_restrictions(self, h7_inst, h7_L):
        inst = h7_inst.with_restricted([()] * 7)
        assert icsri_valid(IndexCode(inst, h7_L)) == bool(is_valid(IndexCode(h7_inst, h7_L)))
        assert kappa_star(inst)[0] == kappa_q(h7_inst).kappa

    def test_restriction_violated(self, fixtures_dir):
        inst = load_instance(fixtures_dir / "hamming7_restricted.json")
        assert not icsri_valid(IndexCode(inst, MatGF.identity(GF(2), 7)))

    def test_kappa_star_witness(self, fixtures_dir):
        inst = load_instance(fixtures_dir / "hamming7_restricted.json")
        kappa, L = kappa_star(inst)
        assert kappa == L.cols
        assert icsri_valid(IndexCode(inst, L))
        assert kappa >= kappa_q(inst).kappa


def _kappa_star_brute(inst: IcsiInstance):
    """Enumerate every choice of ``u^(i)``; keep spans with no forbidden word."""
    q, n = inst.q, inst.n
    options = []
    for i in range(inst.m):
        side = inst.side(i)
        opts = []
        for vals in oracles.vectors(q, len(side)):
            row = [0] * n
            row[inst.demands[i]] = 1
            for j, v in zip(side, vals):
                row[j] = v
            opts.append(tuple(row))
        options.append(opts)
    best = math.inf
    for rows in itertools.product(*options):
        words = oracles.span(list(rows), q, n)
        forbidden = any(
            w[j] == 1 and all(w[k] == 0 for k in range(n) if k != j and k not in x)
            for x, z in zip(inst.side_info, inst.restricted) for j in z for w in words
        )
        if not forbidden:
            best = min(best, oracles.rank(list(rows), q, n))
    return best


@st.composite
def restricted_instances(draw):
    n = draw(st.integers(2, 3))
    m = draw(st.integers(1, 3))
    side, dem, res = [], [], []
    for _ in range(m):
        f = draw(st.integers(0, n - 1))
        x = draw(st.sets(st.integers(0, n - 1).filter(lambda j, f=f: j != f)))
        z = draw(st.sets(st.integers(0, n - 1).filter(lambda j, f=f, x=x: j != f and j not in x)))
        side.append(frozenset(x))
        dem.append(f)
        res.append(frozenset(z))
    return IcsiInstance(GF(2), n, tuple(side), tuple(dem), tuple(res))


@settings(max_examples=80, deadline=None)
@given(restricted_instances())
def test_kappa_star_matches_enumeration(inst):
    kappa, L = kappa_star(inst)
    assert kappa == _kappa_star_brute(inst)
    if L is not None:
        assert icsri_valid(IndexCode(inst, L))
