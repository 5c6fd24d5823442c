import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import complete_side_instance
from icsec.errors import (
    ConstructionError,
    DecodeFailure,
    DimensionMismatch,
    FieldTooSmall,
    RepeatedAlpha,
    UndemandedMessage,
    ValidationError,
)
from icsec.gf import GF, field_new
from icsec.icsi import IcsiInstance
from icsec.indexcode import IndexCode, decode, is_delta_error_correcting, is_valid, kappa_q, side_values
from icsec.lincode import LinearCode, all_vectors, is_mds
from icsec.matlin import MatGF, rank
from icsec.strongsec import (
    RandomizedIndexCode,
    check_length_bounds,
    construct_a,
    decode_randomized,
    delete_columns,
    draw_randomness,
    encode_randomized,
    find_leak,
    random_symbol_recipes,
    search_short_secure_codes,
    verify_strong_security,
)


@pytest.fixture(scope="module")
def c4_a():
    return construct_a(complete_side_instance(5), mu=1, delta=1)


def _leak_free_by_loops(code: RandomizedIndexCode, mu: int, t: int) -> bool:
    """Loop-based count of ``x`` outside ``X_A`` per view class."""
    q, n, L = code.field.q, code.n, code.L.tolist()
    for w in range(mu + 1):
        for W in itertools.combinations(range(code.N), w):
            LW = [[row[c] for c in W] for row in L]
            for A in itertools.combinations(range(n), t):
                hidden = [j for j in range(n) if j not in A]
                classes, pairs = Counter(), Counter()
                for v in oracles.vectors(q, n + code.eta):
                    key = (oracles.vec_mat(v, LW, q) if W else (), tuple(v[j] for j in A))
                    classes[key] += 1
                    pairs[key, tuple(v[j] for j in hidden)] += 1
                for (key, _), c in pairs.items():
                    if c * q ** len(hidden) != classes[key]:
                        return False
                if len(pairs) != len(classes) * q ** len(hidden):
                    return False
    return True


class TestConstructionA:
    def test_complete4_layout(self, c4_a):
        assert (c4_a.N, c4_a.eta) == (4, 1)
        assert c4_a.L.shape == (5, 4)
        assert c4_a.L.tolist()[:4] == [[1, 1, 1, 1]] * 4
        assert c4_a.L.tolist()[4] == [1, 2, 3, 4]

    def test_matrix_is_nested_mds(self, c4_a):
        kappa, mu = 1, 1
        meta = c4_a.construction
        assert meta["kappa"] == kappa and meta["mu"] == mu and meta["alphas"] == [1, 2, 3, 4]
        inner, M, outer = c4_a._coset_parts
        assert outer.min_distance() == 2 * 1 + 1
        assert is_mds(M) and is_mds(M.row_sub([1]))

    def test_no_randomness_no_errors(self, h7_inst):
        L0 = kappa_q(h7_inst).L
        code = construct_a(load_instance_gf(h7_inst, 5), 0, 0, L0=MatGF(GF(5), L0.a))
        assert code.eta == 0 and code.N == 4
        P = code._coset_parts[1]
        assert rank(P) == 4
        # same row space of L0 up to an invertible change of columns
        assert LinearCode(code.L.T) == LinearCode(MatGF(GF(5), L0.a).T)

    def test_field_too_small(self, c4_inst):
        with pytest.raises(FieldTooSmall):
            construct_a(c4_inst, 1, 1)

    def test_exactly_large_enough(self):
        # q = N + 1 is the smallest admissible field
        inst = IcsiInstance(field_new(2, 2), 4, complete_side_instance(2).side_info, (0, 1, 2, 3))
        code = construct_a(inst, 2, 0)
        assert code.N == 3 and code.field.q == code.N + 1
        with pytest.raises(FieldTooSmall):
            construct_a(inst, 3, 0)

    def test_bad_alphas(self):
        with pytest.raises(RepeatedAlpha):
            construct_a(complete_side_instance(7), 1, 1, alphas=[1, 2, 2, 3])

    def test_negative_parameters(self):
        with pytest.raises(ValidationError):
            construct_a(complete_side_instance(5), -1, 0)

    def test_nothing_to_send(self):
        inst = IcsiInstance(GF(5), 2, (frozenset({1}), frozenset({0})), (0, 1))
        L0 = MatGF.zeros(GF(5), 2, 0)
        with pytest.raises(ConstructionError):
            construct_a(inst, 0, 1, L0=L0)

    @pytest.mark.parametrize("mu,delta", [(0, 0), (1, 0), (0, 1), (2, 1), (1, 2)])
    def test_properties(self, mu, delta):
        inst = complete_side_instance(11, 3)
        code = construct_a(inst, mu, delta)
        assert code.N == 1 + mu + 2 * delta and code.eta == mu
        det = code.as_index_code()
        assert is_valid(det)
        assert is_delta_error_correcting(det, delta)
        assert verify_strong_security(code, mu, 0)
        assert verify_strong_security(code, mu, 1)


def load_instance_gf(inst, q):
    return IcsiInstance(GF(q), inst.n, inst.side_info, inst.demands)


class TestEncoding:
    def test_g_zero_without_randomness(self):
        inst = complete_side_instance(7)
        code = construct_a(inst, 0, 1)
        x = np.array([1, 2, 3, 4])
        L0 = MatGF(GF(7), code.construction["L0"])
        P = code._coset_parts[1].row_sub([0])
        assert encode_randomized(code, x).tolist() == (x @ (L0 @ P)).tolist()

    def test_coset_identity(self, c4_a):
        inner, M, _ = c4_a._coset_parts
        rng = np.random.default_rng(1)
        for _ in range(50):
            x = rng.integers(0, 5, size=4)
            g = rng.integers(0, 5, size=1)
            lhs = encode_randomized(c4_a, x, g)
            rhs = np.concatenate([x @ inner.L, g]) @ M
            assert lhs.tolist() == rhs.tolist()

    def test_unit_message(self, c4_a):
        # (1,0,0,0 | 0) picks the first row of L0 @ P, the all-ones row
        assert encode_randomized(c4_a, [1, 0, 0, 0], [0]).tolist() == [1, 1, 1, 1]

    def test_seeded_randomness(self, c4_a):
        a = encode_randomized(c4_a, [1, 2, 3, 4], seed=9)
        b = encode_randomized(c4_a, [1, 2, 3, 4], seed=9)
        assert a.tolist() == b.tolist()
        assert draw_randomness(GF(5), 3, 4).tolist() == draw_randomness(GF(5), 3, 4).tolist()

    def test_dimension_checks(self, c4_a):
        with pytest.raises(DimensionMismatch):
            encode_randomized(c4_a, [1, 2, 3])
        with pytest.raises(DimensionMismatch):
            encode_randomized(c4_a, [1, 2, 3, 4], [1, 2])


class TestDecoding:
    def test_zero_errors_match_deterministic(self, c4_a):
        inner = c4_a._coset_parts[0]
        inst = c4_a.inst
        for v in all_vectors(5, 5)[::13]:
            x, g = v[:4], v[4:]
            y = encode_randomized(c4_a, x, g)
            for i in range(4):
                xs = side_values(inst, i, x)
                assert decode_randomized(c4_a, i, y, xs, 1) == decode(inner, i, x @ inner.L, xs) == x[i]

    def test_single_errors_sampled(self, c4_a):
        rng = np.random.default_rng(2)
        for _ in range(200):
            v = rng.integers(0, 5, size=5)
            y = encode_randomized(c4_a, v[:4], v[4:])
            pos, e = rng.integers(4), rng.integers(1, 5)
            y[pos] = (y[pos] + e) % 5
            for i in range(4):
                assert decode_randomized(c4_a, i, y, side_values(c4_a.inst, i, v), 1) == v[i]

    def test_two_errors_break_the_contract(self, c4_a):
        # some two-error pattern must either fail or decode wrongly
        inst = c4_a.inst
        bad = 0
        for v in all_vectors(5, 5)[::31]:
            y0 = encode_randomized(c4_a, v[:4], v[4:])
            for p1, p2 in itertools.combinations(range(4), 2):
                y = y0.copy()
                y[p1] = (y[p1] + 1) % 5
                y[p2] = (y[p2] + 2) % 5
                for i in range(4):
                    try:
                        ok = decode_randomized(c4_a, i, y, side_values(inst, i, v), 1) == v[i]
                    except DecodeFailure:
                        ok = False
                    bad += not ok
        assert bad > 0

    def test_generic_fallback(self):
        inst = complete_side_instance(2, 3)
        # repetition of the sum, plus one random symbol added to nothing
        L = MatGF(GF(2), [[1, 1, 1], [1, 1, 1], [1, 1, 1], [0, 0, 0]])
        code = RandomizedIndexCode(inst, 1, L)
        for v in all_vectors(2, 4):
            y = encode_randomized(code, v[:3], v[3:])
            y[1] ^= 1
            for i in range(3):
                assert decode_randomized(code, i, y, side_values(inst, i, v), 1) == v[i]


class TestStrongSecurity:
    def test_construction_a(self, c4_a):
        assert verify_strong_security(c4_a, 1, 1)
        assert find_leak(c4_a, 1, 1) is None

    def test_loop_oracle_agrees(self):
        code = construct_a(complete_side_instance(5, 3), 1, 0)
        for t in range(3):
            assert _leak_free_by_loops(code, 1, t) == verify_strong_security(code, 1, t)

    def test_deterministic_code_leaks(self, h7_code):
        rc = RandomizedIndexCode(h7_code.inst, 0, h7_code.L)
        assert not verify_strong_security(rc, 1, 0)
        W, A = find_leak(rc, 1, 0)
        assert len(W) == 1 and A == ()

    def test_nothing_eavesdropped(self, h7_code, c4_code):
        for code in (h7_code, c4_code):
            rc = RandomizedIndexCode(code.inst, 0, code.L)
            assert verify_strong_security(rc, 0, 0)

    def test_too_much_eavesdropping_leaks(self, c4_a):
        assert not verify_strong_security(c4_a, 2, 0)

    def test_parameter_checks(self, c4_a):
        with pytest.raises(ValidationError):
            verify_strong_security(c4_a, 5, 0)
        with pytest.raises(ValidationError):
            verify_strong_security(c4_a, 1, 5)

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_random_codes_match_loops(self, data):
        n = data.draw(st.integers(1, 3))
        eta = data.draw(st.integers(0, 2))
        N = data.draw(st.integers(1, 3))
        q = data.draw(st.sampled_from([2, 3]))
        entries = data.draw(st.lists(st.integers(0, q - 1), min_size=(n + eta) * N, max_size=(n + eta) * N))
        inst = IcsiInstance(GF(q), n, (frozenset(),) * n, tuple(range(n)))
        code = RandomizedIndexCode(inst, eta, MatGF(GF(q), np.array(entries).reshape(n + eta, N)))
        mu = data.draw(st.integers(0, N))
        t = data.draw(st.integers(0, n))
        assert verify_strong_security(code, mu, t) == _leak_free_by_loops(code, mu, t)

    def test_randomness_recovery(self, c4_a):
        recipes = random_symbol_recipes(c4_a)
        assert len(recipes) == 1 and recipes[0] is not None
        for v in all_vectors(5, 5)[::17]:
            y = encode_randomized(c4_a, v[:4], v[4:])
            c = recipes[0] @ c4_a.L.T
            # c = e_5 + (part on the messages)
            rest = c.copy()
            rest[4] = 0
            assert (int(y @ recipes[0]) - int(v @ rest)) % 5 == v[4]

    @pytest.mark.parametrize("mu,delta", [(1, 0), (1, 1), (2, 1)])
    def test_randomness_recovery_construction(self, mu, delta):
        code = construct_a(complete_side_instance(11, 3), mu, delta)
        assert all(r is not None for r in random_symbol_recipes(code))


class TestColumnDeletion:
    @pytest.mark.parametrize("q,n,delta", [(5, 3, 1), (7, 4, 1), (11, 3, 2)])
    def test_deleting_2delta_columns_keeps_validity(self, q, n, delta):
        inst = complete_side_instance(q, n)
        code = construct_a(inst, 0, delta)
        det = code.as_index_code()
        assert is_delta_error_correcting(det, delta)
        for cols in itertools.combinations(range(code.N), 2 * delta):
            assert is_valid(IndexCode(det.inst, delete_columns(code.L, cols)), cross_check=False)

    def test_hamming7_with_repetition(self, h7_inst, h7_L):
        # doubling a valid code gives d >= 2, so single deletions keep validity
        L = MatGF(GF(2), np.hstack([h7_L.a, h7_L.a, h7_L.a]))
        code = IndexCode(h7_inst, L)
        assert is_delta_error_correcting(code, 1)
        for cols in itertools.combinations(range(L.cols), 2):
            assert is_valid(IndexCode(h7_inst, delete_columns(L, cols)), cross_check=False)


class TestLengthBounds:
    def test_construction_a_optimal(self, c4_a):
        rep = check_length_bounds(c4_a, 1, 1, 1)
        assert rep.optimal and not rep.contradiction
        assert rep.N == rep.kappa + 1 + 2 == 4
        assert rep.strongly_secure and rep.error_correcting and rep.valid

    def test_reduces_to_kappa(self, h7_code):
        rc = RandomizedIndexCode(h7_code.inst, 0, h7_code.L)
        rep = check_length_bounds(rc, 0, 0, 0)
        assert rep.required_length == rep.kappa == 4 and rep.optimal

    def test_needs_all_messages_demanded(self):
        inst = IcsiInstance(GF(2), 2, (frozenset(),), (0,))
        rc = RandomizedIndexCode(inst, 0, MatGF(GF(2), [[1], [0]]))
        with pytest.raises(UndemandedMessage):
            check_length_bounds(rc, 0, 0, 0)

    def test_no_short_secure_code(self):
        res = search_short_secure_codes(GF(2), 2, mu=1, t=0, max_eta=2)
        assert res.instances == 4 and res.candidates > 0
        assert res.counterexamples == []

    def test_no_short_secure_error_correcting_code(self):
        res = search_short_secure_codes(GF(2), 2, mu=1, t=0, delta=1, max_eta=1)
        assert res.counterexamples == []

    def test_search_finds_codes_at_the_bound(self):
        # sanity: allowing length kappa + mu exposes secure codes, so the search is not vacuous
        inst = complete_side_instance(2, 2)
        found = []
        for flat in all_vectors(2, 3 * 2):
            L = MatGF(GF(2), flat.reshape(3, 2))
            rc = RandomizedIndexCode(inst, 1, L)
            if is_valid(rc.as_index_code(), cross_check=False) and verify_strong_security(rc, 1, 0):
                found.append(L)
        assert found
        for L in found:
            assert not check_length_bounds(RandomizedIndexCode(inst, 1, L), 1, 0, 0).contradiction
