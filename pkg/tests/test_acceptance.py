"""Acceptance suite: one test per criterion, each printing a PASS line
with its measured quantities (run with -s or -rA to see them).

Criterion 6 fills the full 200-trial Monte-Carlo grid once (module-scoped
fixture); criterion 10 reuses it.
"""

import numpy as np
import pytest

from ofbank import (FilterBank, algorithm1_bank, algorithm2_bank, build_Hp,
                    counting_length, delay_range, design_synthesis,
                    distortion, gaps, kappa, length_report, necessary_length,
                    polyphase_predict, pr_feasible, simulate,
                    sufficient_length, verify_certificate)
from ofbank.experiments import run_distortion_sweep, run_feasibility_mc

GRID_D, GRID_MH = 3, 30
GRID_C = tuple(range(6, 25))
GRID_MV = tuple(range(3, 31))
GRID_TRIALS = 200


def _ok(num: int, msg: str) -> None:
    print(f"ACCEPTANCE {num}: PASS - {msg}")


@pytest.fixture(scope="module")
def mc_grid():
    return run_feasibility_mc(GRID_C, GRID_D, GRID_MH, GRID_MV,
                              trials=GRID_TRIALS, seed=0, workers=2)


def test_criterion_1_exact_length_values():
    assert sufficient_length(6, 3, 7) == 6
    assert necessary_length(6, 3, 13) == 9
    _ok(1, "sufficient(6,3,7)=6, necessary(6,3,13)=9")


def test_criterion_2_matrix_shapes(rng):
    H1 = build_Hp(FilterBank.analysis(rng.standard_normal((6, 7)), 3), 6, 2)
    H2 = build_Hp(FilterBank.analysis(rng.standard_normal((6, 13)), 3), 8, 2)
    assert H1.entries.shape == (10, 12)
    assert H2.entries.shape == (16, 12)
    _ok(2, "phase-2 systems are 10x12 and 16x12")


def test_criterion_3_kappa_anchor():
    """Transcribed anchor: the delay-6 target of the phase-2 system for
    (C=6, D=3, m_h=13, m_v=8) at row 13.

    The time-domain oracle certifies a different mapping: row 13 is the
    delay-10 target, while delay 6 targets row 7 (see the delay-semantics
    tests; synthesis banks designed from row-13-at-delay-6 targets do not
    reconstruct, those from the certified mapping do).  The anchor is
    asserted as transcribed and therefore fails; the certified mapping is
    asserted alongside to document the resolution.
    """
    assert kappa(2, 10, 13, 8, 3) == 13  # certified: row 13 <-> delay 10
    assert kappa(2, 6, 13, 8, 3) == 13, (
        "transcribed anchor kappa(2, 6) = 13 conflicts with the "
        "oracle-certified delay semantics (kappa(2, 6) = 7); reconstruction "
        "tests (criteria 7 and 8) pin the certified mapping"
    )
    _ok(3, "kappa(2,6)=13")


def test_criterion_4_certificates():
    row_cert = algorithm1_bank(6, 3, 7, 6)
    assert row_cert is not None
    row_rep = verify_certificate(row_cert)
    assert row_rep.ok, row_rep.failures()
    assert all(c.rank == c.shape[0] for c in row_rep.checks)

    col_cert = algorithm2_bank(6, 3, 13, 8, 10)  # row-13 target
    assert col_cert is not None
    assert col_cert.assignments == ((6,), (12,), (1,), (7,), (2,), (8, 0))
    col_rep = verify_certificate(col_cert)
    assert col_rep.ok, col_rep.failures()
    assert col_rep.checks[0].rank == 13  # 12 columns plus independent target
    _ok(4, "row witness full row rank at every phase; augmented column "
           "witness rank 13 (target independent), both by exact elimination")


def test_criterion_5_chain_and_gap_bounds():
    cells = 0
    for D in range(2, 7):
        for C in range(2 * D, 33):
            for m_h in range(D + 1, 65):
                rep = length_report(C, D, m_h)
                assert rep.chain_holds(), (C, D, m_h)
                cert = gaps(C, D, m_h)
                assert all(cert.strict), (C, D, m_h, cert)
                if C % D == 0:
                    assert rep.mv_S == rep.mv_C, (C, D, m_h)
                cells += 1
    _ok(5, f"ordering chain, strict gap bounds, and integer-oversampling "
           f"collapse over {cells} grid cells")


def test_criterion_6_phase_diagram(mc_grid):
    checked_full = checked_zero = 0
    for i, C in enumerate(GRID_C):
        mv_S = sufficient_length(C, GRID_D, GRID_MH)
        mv_C = counting_length(C, GRID_D, GRID_MH)
        for j, m_v in enumerate(GRID_MV):
            n = int(mc_grid.counts[i, j])
            if m_v >= mv_S:
                assert n == GRID_TRIALS, (C, m_v, n)
                checked_full += 1
            if m_v < mv_C:
                assert n == 0, (C, m_v, n)
                checked_zero += 1
    _ok(6, f"{GRID_TRIALS}/{GRID_TRIALS} success in all {checked_full} cells "
           f"at or above the sufficient length; 0/{GRID_TRIALS} in all "
           f"{checked_zero} cells below the counting length")


def test_criterion_7_distortion_knee():
    # fixed representative bank (seed 6); knee at the counting length 21
    header, rows = run_distortion_sweep(7, 3, 30, range(3, 31), seed=6)
    by_mv = {r[0]: r for r in rows}
    for m_v in range(21, 31):
        assert by_mv[m_v][2] <= 1e-6 and by_mv[m_v][3] <= 1e-6, (m_v, by_mv[m_v])
    assert by_mv[20][2] > 10.0 and by_mv[20][3] > 10.0, by_mv[20]
    assert by_mv[18][2] > 30.0 and by_mv[18][3] > 30.0, by_mv[18]
    _ok(7, f"zero distortion for m_v >= 21; "
           f"{by_mv[20][2]:.1f}%/{by_mv[20][3]:.1f}% at m_v=20; "
           f"{by_mv[18][2]:.1f}%/{by_mv[18][3]:.1f}% at m_v=18")


def test_criterion_8_oracle_equivalence():
    rng = np.random.default_rng(88)
    worst = 0.0
    for i in range(100):
        D = 1 + i % 4
        C = int(rng.integers(1, 7))
        m_h = int(rng.integers(D, D + 10))
        m_v = int(rng.integers(D, D + 10))
        a = FilterBank.analysis(rng.standard_normal((C, m_h)), D)
        s = FilterBank.synthesis(rng.standard_normal((C, m_v)), D)
        x = rng.standard_normal(int(rng.integers(1, 60)))
        xh = simulate(a, s, x)
        pred = polyphase_predict(a, s, x, out_len=len(xh))
        scale = max(1.0, float(np.max(np.abs(xh))))
        rel = float(np.max(np.abs(xh - pred))) / scale
        worst = max(worst, rel)
        assert rel <= 1e-10, (D, C, m_h, m_v, rel)

    worst_rec = 0.0
    for D in (1, 2, 3, 4):
        for t in range(5):
            C = 2 * D + int(rng.integers(0, 3))
            m_h = 2 * D + 1 + int(rng.integers(0, 9))
            bank = FilterBank.analysis(rng.uniform(-5, 5, (C, m_h)), D)
            m_v = sufficient_length(C, D, m_h)
            n0 = D  # admissible (m_h > 2D) and representable at every phase
            design = design_synthesis(bank, m_v, n0)
            assert design.feasible
            x = rng.standard_normal(100)
            rel = distortion(bank, design.bank, x, n0).percent / 100.0
            worst_rec = max(worst_rec, rel)
            assert rel <= 1e-8, (D, C, m_h, rel)
    _ok(8, f"100 simulate-vs-phase-system matches (worst rel {worst:.2e}); "
           f"20 designed reconstructions (worst rel {worst_rec:.2e})")


def test_criterion_9_scale_invariance():
    rng = np.random.default_rng(99)
    compared = 0
    for C in range(6, 25, 3):
        for trial in range(3):
            taps = rng.uniform(-np.sqrt(300), np.sqrt(300), (C, GRID_MH))
            bank = FilterBank.analysis(taps, GRID_D)
            for m_v in range(3, 31, 3):
                delays = delay_range(GRID_MH, m_v, GRID_D)[::GRID_D]
                verdicts = [pr_feasible(bank, m_v, n0).feasible for n0 in delays]
                for scale in (37.0, 1e-4, -0.625):
                    scaled = bank.scaled(scale)
                    same = [pr_feasible(scaled, m_v, n0).feasible for n0 in delays]
                    assert same == verdicts, (C, m_v, scale)
                    compared += len(delays)
    _ok(9, f"{compared} per-delay verdicts identical under three nonzero scalings")


def test_criterion_10_conjecture_probe(mc_grid):
    findings = []
    for C, boundary in mc_grid.boundaries():
        mv_N = necessary_length(C, GRID_D, GRID_MH)
        mv_C = counting_length(C, GRID_D, GRID_MH)
        mv_S = sufficient_length(C, GRID_D, GRID_MH)
        assert boundary is not None, C
        assert mv_N <= boundary <= mv_S, (C, boundary)
        if boundary != mv_C:
            findings.append((C, boundary, mv_C))
    if findings:
        print(f"ACCEPTANCE 10: conjecture deviations (C, empirical, counting): "
              f"{findings}")
    else:
        print("ACCEPTANCE 10: empirical minimal feasible length equals the "
              "counting length in every column (conjecture unrefuted)")
    _ok(10, f"boundaries inside [necessary, sufficient] for all {len(GRID_C)} "
            f"columns; {len(findings)} deviation(s) from the counting length")
