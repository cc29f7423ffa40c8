import math

import pytest

from unieq import (
    BudgetExceededError,
    DependencyCertificate,
    GaussianRational,
    Matrix,
    ProblemInstance,
    TraceCertificate,
    Verdict,
    algebra_closure,
    build_congruence_K,
    decision_letters,
    eval_word,
    floor_length_bound,
    identity,
    make_yes_instance,
    multi_word_screener,
    perturb_to_no,
    random_unitary,
    simultaneously_unitarily_similar,
    solve_general,
    specht_brute,
    unitarily_congruent,
    unitarily_similar,
    verify_witness,
)

from conftest import congruent_pair, exact_unitary, rand_matrix, rat_matrix, similar_pair

GR = GaussianRational
J = Matrix.from_complex([[0, 1], [0, 0]])
J2 = Matrix.from_complex([[0, 2], [0, 0]])


class TestSpechtBrute:
    def test_reflexive(self, rng):
        x = rand_matrix(rng, 3)
        v = specht_brute(x, x, 6)
        assert v.equivalent and v.certificate is None

    def test_jordan_mismatch_certificate(self):
        v = specht_brute(J, J2, 6, prescale=False)
        assert not v.equivalent
        cert = v.certificate
        assert str(cert.word) == "s t"
        assert cert.trace_left == pytest.approx(1.0)
        assert cert.trace_right == pytest.approx(4.0)

    def test_prescaled_certificate_still_least_word(self):
        v = specht_brute(J, J2, 6)
        assert str(v.certificate.word) == "s t"
        assert v.scale == pytest.approx(0.5)

    def test_generated_witness_instance(self):
        a, b = similar_pair(3, seed=41)
        v = specht_brute(a, b, 8, tol=1e-8)
        assert v.equivalent

    def test_budget_refusal(self, rng):
        with pytest.raises(BudgetExceededError):
            specht_brute(rand_matrix(rng, 8), rand_matrix(rng, 8), 36, budget=10**6)

    def test_threads_deterministic(self, rng):
        for _ in range(5):
            x, y = rand_matrix(rng, 2), rand_matrix(rng, 2)
            v1 = specht_brute(x, y, 8, threads=1)
            v4 = specht_brute(x, y, 8, threads=4)
            assert v1.equivalent == v4.equivalent
            if not v1.equivalent:
                assert str(v1.certificate.word) == str(v4.certificate.word)

    def test_size_mismatch(self, rng):
        with pytest.raises(ValueError):
            specht_brute(rand_matrix(rng, 2), rand_matrix(rng, 3), 4)

    def test_exact_mode_equality(self, rng):
        a = rat_matrix(rng, 2)
        v = specht_brute(a, a, 5)
        assert v.equivalent and v.tolerance is None
        b = rat_matrix(rng, 2)
        w = specht_brute(a, b, 5)
        if not w.equivalent:
            assert isinstance(w.certificate, TraceCertificate)


class TestAlgebraClosure:
    def test_identity_pair(self):
        v = algebra_closure(identity(3), identity(3))
        assert v.equivalent and v.dimension == 1

    def test_jordan_mismatch(self):
        v = algebra_closure(J, J2)
        assert not v.equivalent
        assert isinstance(
            v.certificate, (TraceCertificate, DependencyCertificate)
        )

    def test_agreement_with_brute_on_random_2x2(self, rng):
        disagreements = 0
        for i in range(100):
            if i < 50:
                x, y = similar_pair(2, seed=9_000 + i)
            else:
                x, y = rand_matrix(rng, 2), rand_matrix(rng, 2)
            vb = specht_brute(x, y, 12)
            vc = algebra_closure(x, y)
            if vb.equivalent != vc.equivalent:
                disagreements += 1
        assert disagreements == 0

    def test_dimension_bounded(self, rng):
        x, y = rand_matrix(rng, 3), rand_matrix(rng, 3)
        v = algebra_closure(x, y)
        assert v.dimension <= 9 + 1

    def test_exact_closure(self, rng):
        a = rat_matrix(rng, 2)
        u = exact_unitary(2, 1)
        b = u.adjoint() @ a @ u  # a = u b u*
        v = algebra_closure(a, b)
        assert v.equivalent and v.tolerance is None


class TestUnitarilySimilar:
    def test_1x1(self):
        a = Matrix.from_complex([[2 + 1j]])
        assert unitarily_similar(a, a).equivalent
        b = Matrix.from_complex([[2 - 1j]])
        assert not unitarily_similar(a, b).equivalent

    def test_jordan_vs_transpose_with_witness(self):
        b = J.transpose()
        v = unitarily_similar(J, b)
        assert v.equivalent
        w = Matrix.from_complex([[0, 1], [1, 0]])
        assert (J - w @ b @ w.adjoint()).norm_fro() <= 1e-14
        assert (w @ w.adjoint() - identity(2)).norm_fro() <= 1e-14

    def test_unipotent_mismatch(self):
        a = Matrix.from_complex([[1, 1], [0, 1]])
        b = Matrix.from_complex([[1, 2], [0, 1]])
        v = unitarily_similar(a, b, prescale=False)
        assert not v.equivalent
        assert str(v.certificate.word) == "s t"
        assert v.certificate.trace_left == pytest.approx(3.0)
        assert v.certificate.trace_right == pytest.approx(6.0)

    def test_engine_tags(self, rng):
        assert unitarily_similar(rand_matrix(rng, 2), rand_matrix(rng, 2)).engine == "fastpath_n2"
        assert unitarily_similar(rand_matrix(rng, 3), rand_matrix(rng, 3)).engine == "fastpath_n3"
        assert unitarily_similar(rand_matrix(rng, 4), rand_matrix(rng, 4)).engine == "closure"
        assert (
            unitarily_similar(rand_matrix(rng, 2), rand_matrix(rng, 2), engine="brute").engine
            == "brute"
        )

    def test_brute_uses_full_bound(self):
        a, b = similar_pair(2, seed=77)
        v = unitarily_similar(a, b, engine="brute")
        assert v.equivalent
        assert floor_length_bound(2) == 4

    def test_fastpath_agrees_with_closure(self, rng):
        for n in (2, 3):
            for i in range(40):
                if i % 2:
                    x, y = similar_pair(n, seed=i * 13 + n)
                else:
                    x, y = rand_matrix(rng, n), rand_matrix(rng, n)
                fast = unitarily_similar(x, y)
                slow = unitarily_similar(x, y, engine="closure")
                assert fast.equivalent == slow.equivalent

    def test_invariance_under_unitary_rotation(self, rng):
        for i in range(10):
            x, y = rand_matrix(rng, 3), rand_matrix(rng, 3)
            expected = unitarily_similar(x, y).equivalent
            v = random_unitary(3, 500 + i)
            w = random_unitary(3, 900 + i)
            x2 = v @ x @ v.adjoint()
            y2 = w @ y @ w.adjoint()
            assert unitarily_similar(x2, y2).equivalent == expected


class TestSimultaneous:
    def test_single_pair_agrees(self, rng):
        for i in range(50):
            if i % 2:
                x, y = similar_pair(2, seed=3_000 + i)
            else:
                x, y = rand_matrix(rng, 2), rand_matrix(rng, 2)
            single = unitarily_similar(x, y)
            multi = simultaneously_unitarily_similar([(x, y)])
            assert single.equivalent == multi.equivalent

    def test_pair_with_adjoint_pair(self):
        a, b = similar_pair(3, seed=123)
        v = simultaneously_unitarily_similar([(a, b), (a.adjoint(), b.adjoint())])
        assert v.equivalent

    def test_screener_certificate_names_second_pair(self, rng):
        x = rand_matrix(rng, 2)
        y, z = rand_matrix(rng, 2), rand_matrix(rng, 2)
        hit = multi_word_screener([(x, x), (y, z)], 4)
        assert hit is not None and not hit.equivalent
        letters_used = {letter for letter, _ in hit.certificate.word.runs}
        assert letters_used <= {2, 3}  # only the second pair's letters

    def test_screener_never_equivalent(self):
        a, b = similar_pair(2, seed=8)
        assert multi_word_screener([(a, b)], 6) is None

    def test_gadget_brute_route_agrees(self, rng):
        for i in range(6):
            if i % 2:
                pairs = [similar_pair(1, seed=60 + i), similar_pair(1, seed=80 + i)]
                a1, b1 = pairs[0]
                a2, b2 = pairs[1]
                # same witness only when seeds match, so rebuild honestly
                u = random_unitary(1, 999 + i)
                b1, b2 = rand_matrix(rng, 1), rand_matrix(rng, 1)
                a1 = u @ b1 @ u.adjoint()
                a2 = u @ b2 @ u.adjoint()
            else:
                a1, b1 = rand_matrix(rng, 1), rand_matrix(rng, 1)
                a2, b2 = rand_matrix(rng, 1), rand_matrix(rng, 1)
            pairs = [(a1, b1), (a2, b2)]
            vc = simultaneously_unitarily_similar(pairs)
            vb = simultaneously_unitarily_similar(pairs, engine="brute")
            assert vc.equivalent == vb.equivalent

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            simultaneously_unitarily_similar([])


class TestUnitarilyCongruent:
    def test_1x1_phase(self):
        a = Matrix.from_complex([[2.0]])
        b = Matrix.from_complex([[2.0j]])
        assert unitarily_congruent(a, b).equivalent
        c = Matrix.from_complex([[3.0]])
        assert not unitarily_congruent(a, c).equivalent

    def test_rank_mismatch(self):
        a = Matrix.from_complex([[1, 0], [0, 0]])
        b = Matrix.from_complex([[2, 0], [0, 0]])
        v = unitarily_congruent(a, b)
        assert not v.equivalent

    def test_symmetric_unitary_congruent_to_identity(self):
        flip = Matrix.from_complex([[0, 1], [1, 0]])
        # hand Takagi witness: flip = Q diag(1,-1) Q^T = (Q diag(1,i)) (Q diag(1,i))^T
        q = Matrix.from_complex(
            [[1 / math.sqrt(2), 1 / math.sqrt(2)], [1 / math.sqrt(2), -1 / math.sqrt(2)]]
        )
        u = q @ Matrix.from_complex([[1, 0], [0, 1j]])
        assert (flip - u @ u.transpose()).norm_fro() <= 1e-14
        assert (u @ u.adjoint() - identity(2)).norm_fro() <= 1e-14
        assert unitarily_congruent(flip, identity(2)).equivalent

    def test_congruent_random_pairs(self):
        for i in range(5):
            a, b, _ = congruent_pair(3, seed=700 + i)
            assert unitarily_congruent(a, b).equivalent

    def test_k_gadget_route_agrees(self, rng):
        for i in range(8):
            if i % 2:
                a, b, _ = congruent_pair(2, seed=40 + i)
            else:
                a, b = rand_matrix(rng, 2), rand_matrix(rng, 2)
            vt = unitarily_congruent(a, b)
            vk = unitarily_congruent(a, b, use_k_gadget=True)
            assert vt.equivalent == vk.equivalent
            assert vk.route.startswith("congruence:K")

    def test_exponent_cap_complete_on_k_gadgets(self, rng):
        for i in range(6):
            if i % 2:
                a, b, _ = congruent_pair(2, seed=50 + i)
            else:
                a, b = rand_matrix(rng, 2), rand_matrix(rng, 2)
            ka, kb = build_congruence_K(a), build_congruence_K(b)
            capped = specht_brute(ka, kb, 8, max_exponent=3)
            uncapped = specht_brute(ka, kb, 8)
            assert capped.equivalent == uncapped.equivalent


class TestSolveGeneral:
    def test_yes_instance(self):
        g = make_yes_instance(2, 1, 1, 0, 0, seed=7)
        assert verify_witness(g.inst, g.witness)
        v = solve_general(g.inst)
        assert v.equivalent

    def test_perturbed_instance(self):
        g = make_yes_instance(2, 1, 1, 0, 0, seed=7)
        p = perturb_to_no(g, 0.1, seed=71)
        v = solve_general(p.inst)
        assert not v.equivalent
        scale, lx, ly = decision_letters(p.inst)
        assert v.certificate.recheck(lx, ly, 1e-8)

    def test_scalar_congruence_family(self):
        a = Matrix.from_complex([[1.0]])
        b = Matrix.from_complex([[2.0]])
        inst = ProblemInstance(1, S2=[(a, b)])
        assert not solve_general(inst).equivalent
        b2 = Matrix.from_complex([[1.0j]])
        inst2 = ProblemInstance(1, S2=[(a, b2)])
        assert solve_general(inst2).equivalent

    def test_pure_s1_route(self):
        g = make_yes_instance(3, 2, 0, 0, 0, seed=17)
        v = solve_general(g.inst)
        assert v.equivalent and v.route.startswith("general:s1")

    def test_gadget_route_label(self):
        g = make_yes_instance(2, 0, 1, 0, 0, seed=18)
        v = solve_general(g.inst)
        assert v.route.startswith("general:gadget")

    def test_k_route_flag(self):
        g = make_yes_instance(1, 0, 1, 0, 1, seed=19)
        v = solve_general(g.inst, use_k_gadget=True)
        assert v.equivalent and "congruence:K" in v.route

    def test_empty_instance(self):
        with pytest.raises(ValueError):
            solve_general(ProblemInstance(2))

    def test_exact_mode(self, rng):
        u = exact_unitary(2, 1)
        b = rat_matrix(rng, 2)
        a = u @ b @ u.transpose()
        inst = ProblemInstance(2, S2=[(a, b)])
        v = solve_general(inst)
        assert v.equivalent and v.tolerance is None
        bad = ProblemInstance(2, S2=[(rat_matrix(rng, 2), b)])
        w = solve_general(bad)
        assert not w.equivalent and w.tolerance is None


class TestVerifyWitness:
    def test_constructed_witness(self):
        g = make_yes_instance(2, 1, 1, 1, 1, seed=3)
        assert verify_witness(g.inst, g.witness)

    def test_wrong_witness_rejected(self):
        hits = 0
        for seed in range(50):
            g = make_yes_instance(2, 1, 0, 1, 0, seed=seed)
            other = random_unitary(2, 10_000 + seed)
            if verify_witness(g.inst, other):
                hits += 1
        assert hits == 0

    def test_non_unitary_rejected(self):
        g = make_yes_instance(2, 1, 0, 0, 0, seed=4)
        assert not verify_witness(g.inst, identity(2).scale(2.0))

    def test_size_mismatch(self):
        g = make_yes_instance(2, 1, 0, 0, 0, seed=4)
        with pytest.raises(ValueError):
            verify_witness(g.inst, identity(3))


class TestVerdictContract:
    def test_certificate_invariant(self):
        with pytest.raises(ValueError):
            Verdict(True, "closure", certificate=TraceCertificate(None, 0, 0))
        with pytest.raises(ValueError):
            Verdict(False, "closure")

    def test_trace_certificate_self_check(self):
        v = specht_brute(J, J2, 6)
        lx = [J.scale(0.5), J.scale(0.5).adjoint()]
        ly = [J2.scale(0.5), J2.scale(0.5).adjoint()]
        assert v.certificate.recheck(lx, ly, 1e-8)

    def test_dependency_certificate_self_check(self):
        g = make_yes_instance(2, 0, 1, 1, 0, seed=21)
        p = perturb_to_no(g, 0.1, seed=22)
        v = solve_general(p.inst)
        assert not v.equivalent
        if isinstance(v.certificate, DependencyCertificate):
            scale, lx, ly = decision_letters(p.inst)
            assert v.certificate.recheck(lx, ly, 1e-8)

    def test_json_shape(self):
        v = specht_brute(J, J2, 6)
        doc = v.to_json()
        assert doc["result"] == "NotEquivalent"
        assert doc["engine"] == "brute"
        assert doc["certificate"]["kind"] == "trace"
        assert "tolerance" in doc and "scale" in doc and "elapsed_s" in doc

    def test_exact_json_has_no_tolerance(self, rng):
        a = rat_matrix(rng, 2)
        v = specht_brute(a, a, 4)
        assert "tolerance" not in v.to_json()
