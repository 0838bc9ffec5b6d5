import numpy as np
import pytest

from ofbank import (DomainError, FilterBank, algorithm1_bank, algorithm2_bank,
                    build_Hp, exact_rank, load_certificate, necessary_length,
                    save_certificate, sufficient_length, verify_certificate)
from ofbank.constructions import COL_RANK_CERT, ROW_RANK_CERT

from conftest import delta_bank


class TestAlgorithm1:
    def test_worked_bank(self, worked_row_bank):
        cert = algorithm1_bank(6, 3, 7, 6)
        assert cert is not None
        assert cert.kind == ROW_RANK_CERT
        assert cert.assignments == ((0,), (6,), (1,), (4,), (2,), (5,))
        np.testing.assert_array_equal(cert.bank.taps, worked_row_bank.taps)

    def test_worked_matrix_layout(self):
        # the witness places its ones exactly where the worked 10x12
        # figure shows them
        cert = algorithm1_bank(6, 3, 7, 6)
        got = build_Hp(cert.bank, 6, 2).entries
        expect = np.zeros((10, 12))
        ones = [(0, 0), (1, 1), (2, 2), (3, 3),
                (4, 4), (5, 5), (5, 6), (6, 7),
                (7, 8), (8, 9), (8, 10), (9, 11)]
        for r, c in ones:
            expect[r, c] = 1.0
        np.testing.assert_array_equal(got, expect)

    def test_single_tap_per_channel(self):
        cert = algorithm1_bank(9, 3, 14, sufficient_length(9, 3, 14))
        assert all(len(a) <= 1 for a in cert.assignments)
        assert np.all(cert.bank.taps.sum(axis=1) <= 1)

    def test_succeeds_at_sufficient_length(self):
        for D in (1, 2, 3, 4):
            for C in (2 * D, 2 * D + 1, 3 * D):
                for m_h in (D, D + 1, 2 * D + 3, 17):
                    m_v = sufficient_length(C, D, m_h)
                    cert = algorithm1_bank(C, D, m_h, m_v)
                    assert cert is not None, (C, D, m_h, m_v)
                    rep = verify_certificate(cert)
                    assert rep.ok, (C, D, m_h, m_v, rep.failures())

    def test_not_subsampled_family(self):
        for C in range(2, 9):
            for m_h in (2, 9, 17, 32):
                m_v = sufficient_length(C, 1, m_h)
                cert = algorithm1_bank(C, 1, m_h, m_v)
                assert cert is not None
                assert verify_certificate(cert).ok

    def test_can_fail_below_sufficient_length(self):
        # far below the sufficient length the columns run out
        assert algorithm1_bank(6, 3, 30, 3) is None

    def test_preconditions(self):
        with pytest.raises(DomainError):
            algorithm1_bank(5, 3, 9, 6)   # oversampling below two
        with pytest.raises(DomainError):
            algorithm1_bank(6, 3, 9, 2)   # synthesis below subsampling


class TestAlgorithm2:
    def test_worked_bank(self, worked_col_bank):
        cert = algorithm2_bank(6, 3, 13, 8, 10)
        assert cert is not None
        assert cert.kind == COL_RANK_CERT
        assert cert.assignments == ((6,), (12,), (1,), (7,), (2,), (8, 0))
        np.testing.assert_array_equal(cert.bank.taps, worked_col_bank.taps)
        assert cert.phase == 2 and cert.n0 == 10

    def test_worked_matrix_layout(self, worked_col_bank):
        got = build_Hp(worked_col_bank, 8, 2).entries
        expect = np.zeros((16, 12))
        ones = [(0, 10), (1, 11), (2, 0), (3, 1), (4, 2), (5, 3),
                (6, 4), (7, 5), (8, 6), (9, 7),
                (11, 8), (12, 9), (13, 10), (14, 11)]
        for r, c in ones:
            expect[r, c] = 1.0
        np.testing.assert_array_equal(got, expect)
        # the doubly-assigned channel owns the column with two ones,
        # which shares a row with the target at row 13
        assert got[:, 10].sum() == 2.0

    def test_verifies_augmented_full_column_rank(self):
        cert = algorithm2_bank(6, 3, 13, 8, 10)
        rep = verify_certificate(cert)
        assert rep.ok
        assert rep.checks[0].rank == 13  # 12 columns + independent target

    def test_bare_target_row_needs_no_extra_assignment(self):
        # delay 2 targets row 0, inside the all-zero top band
        cert = algorithm2_bank(6, 3, 13, 8, 2)
        assert cert is not None
        assert all(len(a) == 1 for a in cert.assignments)
        assert verify_certificate(cert).ok

    def test_succeeds_just_below_necessary_length(self):
        for D in (1, 2, 3):
            for C in (2 * D, 2 * D + 1, 3 * D + 1):
                for m_h in (2 * D + 1, 11, 17):
                    m_v = necessary_length(C, D, m_h) - 1
                    if m_v < D:
                        continue
                    p0 = m_v % D
                    bound = m_h // D + m_v // D - 2
                    if p0 > 0 and bound < 1:
                        continue  # no admissible delay representable there
                    cert = algorithm2_bank(C, D, m_h, m_v, p0)
                    assert cert is not None, (C, D, m_h, m_v)
                    rep = verify_certificate(cert)
                    assert rep.ok, (C, D, m_h, m_v, rep.failures())

    def test_rejects_lengths_at_or_above_necessary(self):
        with pytest.raises(DomainError):
            algorithm2_bank(6, 3, 13, 9, 6)

    def test_rejects_bad_delay(self):
        with pytest.raises(DomainError):
            algorithm2_bank(6, 3, 13, 8, 13)  # outside the admissible range


class TestExactRank:
    def test_small_known_ranks(self):
        assert exact_rank(np.eye(4)) == 4
        assert exact_rank(np.zeros((3, 5))) == 0
        assert exact_rank([[1, 2], [2, 4]]) == 1
        assert exact_rank([[1, 0, 1], [0, 1, 1], [1, 1, 2]]) == 2

    def test_matches_float_rank_on_random_ints(self, rng):
        for _ in range(25):
            M = rng.integers(-3, 4, size=(6, 9))
            assert exact_rank(M) == np.linalg.matrix_rank(M.astype(float))

    def test_rejects_non_integral(self):
        with pytest.raises(DomainError):
            exact_rank([[0.5]])


class TestVerify:
    def test_detects_perturbed_witness(self, worked_row_bank):
        cert = algorithm1_bank(6, 3, 7, 6)
        # zeroing one assigned tap removes the only one in some row
        broken = delta_bank([[0], [6], [1], [4], [2], []], m=7, D=3)
        bad = type(cert)(bank=broken, kind=cert.kind, m_v=6, phase=cert.phase,
                         n0=None, assignments=cert.assignments[:5] + ((),))
        rep = verify_certificate(bad)
        assert not rep.ok
        assert rep.failures()
        shortfall = [c for c in rep.checks if not c.ok][0]
        assert shortfall.rank < shortfall.expected

    def test_generic_banks_match_certificate_rank(self, rng):
        # random taps at the sufficient length give full row rank
        # essentially always
        C, D, m_h = 6, 3, 7
        m_v = sufficient_length(C, D, m_h)
        hits = 0
        for _ in range(200):
            bank = FilterBank.analysis(rng.uniform(-1, 1, (C, m_h)), D)
            H = build_Hp(bank, m_v, 2).entries
            hits += np.linalg.matrix_rank(H) == H.shape[0]
        assert hits >= 199

    def test_round_trip_serialization(self, tmp_path):
        cert = algorithm2_bank(6, 3, 13, 8, 10)
        path = tmp_path / "cert.fb"
        save_certificate(cert, path)
        assert path.exists() and path.with_suffix(".fb.json").exists()
        again = load_certificate(path)
        assert again.kind == cert.kind
        assert again.assignments == cert.assignments
        assert again.m_v == cert.m_v and again.n0 == cert.n0
        np.testing.assert_array_equal(again.bank.taps, cert.bank.taps)
