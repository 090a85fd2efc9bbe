"""Sweeps, bare curves, crossing detection, steering/negativity diagnostics,
the M/D certificate, the three-vertex model, and CSV emission."""

import math

import numpy as np
import pytest

from xxanneal.analysis import (
    AnalysisError,
    bare_curve_functions,
    bare_curves,
    default_grid,
    detect_anticrossing,
    gap_function,
    iterate_demo,
    localization,
    md_block_form,
    min_gap,
    negativity,
    negativity_instance,
    spectrum_trace,
    sweep,
    v3_model,
    write_bare_csv,
    write_csv,
    write_localization_csv,
    write_negativity_csv,
    write_spectrum_csv,
    write_v3_csv,
)
from xxanneal.hamiltonians import sector_eigenvalues
from xxanneal.instances import make_composite, make_gdis, make_gshare
from xxanneal.linalg import DenseOperator
from xxanneal.schedule import default_config, iteration_config, main_params

V3_CFG = default_config(1, gamma2=1.0, jxx=0.6)


def test_default_grid():
    g = default_grid()
    assert len(g) == 401 and g[0] == 0.0 and g[-1] == 1.0


def two_level(t):
    return np.array([[t - 0.5, -0.05], [-0.05, 0.5 - t]])


def test_sweep_tracks_ground_through_avoided_crossing():
    grid = np.linspace(0.0, 1.0, 21)
    trace = sweep(two_level, grid, k=2)
    assert trace.levels.shape == (21, 2)
    assert (trace.levels[:, 1] >= trace.levels[:, 0]).all()
    # tracked vectors never flip orientation between neighbouring points
    for a, b in zip(trace.vectors, trace.vectors[1:]):
        assert float(a @ b) > 0.9


def test_sweep_parallel_matches_serial(monkeypatch):
    grid = np.linspace(0.0, 1.0, 13)
    serial = sweep(two_level, grid, k=2)
    monkeypatch.setenv("ANNEAL_THREADS", "2")
    par = sweep(two_level, grid, k=2)
    assert np.array_equal(serial.levels, par.levels)
    for a, b in zip(serial.vectors, par.vectors):
        assert np.array_equal(a, b)


def test_sweep_rejects_bad_k():
    with pytest.raises(ValueError):
        sweep(two_level, [0.0, 1.0], k=0)


def test_spectrum_trace_matches_sector_values():
    inst = make_gshare(2, [3, 3], 1, jzz=3.0)
    cfg = default_config(2)
    grid = np.linspace(0.0, 1.0, 5)
    trace = spectrum_trace(inst, cfg, grid, k=3)
    for i, t in enumerate(grid):
        x, jxx = main_params(cfg, t)
        assert trace.levels[i] == pytest.approx(
            sector_eigenvalues(inst, x, jxx, k=3), abs=1e-12)


def test_gap_function_positive():
    inst = make_gshare(2, [3, 3], 1, jzz=3.0)
    gap = gap_function(inst, default_config(2))
    assert gap(0.3) > 0.0


def test_min_gap_refines_location():
    t_true = 0.312345

    def g(t):
        return 0.01 + (t - t_true) ** 2

    gap, t_at = min_gap(g, 0.0, 1.0, n=101)
    assert abs(t_at - t_true) <= 1.5e-3  # refined step = 1e-3 at n=101
    assert gap == pytest.approx(0.01, abs=3e-6)
    coarse_gap, coarse_t = min_gap(g, 0.0, 1.0, n=101, refine=False)
    assert coarse_gap >= gap
    assert abs(coarse_t - t_true) <= 0.01


def beta0(w, x):
    return -0.5 * (w + math.hypot(w, x))


def test_bare_curves_closed_form_endpoints():
    inst = make_gshare(3, [9, 9, 9], 2, jzz=3.0)
    cfg = default_config(3)  # gamma2=3, gamma1=6, J_xx = 4
    trace = bare_curves(inst, cfg, [0.0, 1.0])
    assert trace.tags == ("bare-LM", "bare-GM", "AS0")
    # t=0: x=6, jxx=4; w_eff = 1 - 2*4 = -7, per-clique field sqrt(9)*6
    lm0 = 3 * beta0(-7.0, 18.0)
    gm0 = 5 * beta0(1.0, 6.0)
    as00 = -3 * (1.0 + 1.0) + 2 * beta0(1.0 - 3.0 * (3.0 / 9.0), 6.0)
    assert trace.levels[0] == pytest.approx([lm0, gm0, as00], abs=1e-12)
    # t=1: x=0, jxx=0: branch energies are the classical set weights
    assert trace.levels[1] == pytest.approx([-3.0, -5.0, -3.0], abs=1e-12)


def test_bare_functions_agree_with_curves():
    inst = make_gdis(2, [4, 4], 3, jzz=3.0)
    cfg = default_config(2)
    grid = np.linspace(0.0, 1.0, 7)
    trace = bare_curves(inst, cfg, grid)
    lm, gm, as0 = bare_curve_functions(inst, cfg)
    for i, t in enumerate(grid):
        assert (lm(t), gm(t), as0(t)) == pytest.approx(tuple(trace.levels[i]))


# ---------------------------------------------------------------------------
# crossing detection


def test_detect_crossing_bisects_the_root():
    t_true = 0.4321115
    reports = detect_anticrossing(
        lambda t: t - t_true, lambda t: 0.0,
        lambda t: 0.002 + abs(t - t_true), gap_threshold=0.01)
    assert len(reports) == 1
    rep = reports[0]
    assert rep.t_star == pytest.approx(t_true, abs=1e-6)
    assert rep.gap_min == pytest.approx(0.002, abs=1e-4)
    assert rep.t_gap_min == pytest.approx(t_true, abs=1e-3)
    assert rep.classification == "tunneling"
    assert rep.small_gap


def test_detect_crossing_classifications():
    args = (lambda t: t - 0.5, lambda t: 0.0, lambda t: 1.0)
    rep = detect_anticrossing(*args, gap_threshold=0.1,
                              blocks_tags=("C", "Q"))[0]
    assert rep.classification == "block-level"
    assert not rep.small_gap
    rep = detect_anticrossing(*args, gap_threshold=0.1,
                              blocks_tags=("C", "Q"),
                              mixture_overlap=lambda t: (0.5, 0.5))[0]
    assert rep.classification == "interference-involved"
    rep = detect_anticrossing(*args, gap_threshold=0.1,
                              blocks_tags=("C", "Q"),
                              mixture_overlap=lambda t: (0.95, 0.05))[0]
    assert rep.classification == "block-level"


def test_detect_no_crossing_reports_global_minimum():
    reports = detect_anticrossing(
        lambda t: 1.0 + t, lambda t: 0.0,
        lambda t: 0.5 + (t - 0.7) ** 2, gap_threshold=0.1)
    assert len(reports) == 1
    rep = reports[0]
    assert rep.t_star is None
    assert rep.classification == "none"
    assert rep.t_gap_min == pytest.approx(0.7, abs=0.01)
    assert not rep.small_gap


def test_detect_multiple_crossings():
    reports = detect_anticrossing(
        lambda t: (t - 0.25) * (t - 0.75), lambda t: 0.0,
        lambda t: 1.0, gap_threshold=0.1)
    assert [r.t_star for r in reports] == pytest.approx([0.25, 0.75], abs=1e-6)


def test_detect_accepts_arrays_over_grid():
    grid = np.linspace(0.0, 1.0, 201)
    reports = detect_anticrossing(
        grid - 0.4321115, np.zeros_like(grid), np.full_like(grid, 0.3),
        gap_threshold=0.1, grid=grid)
    assert reports[0].t_star == pytest.approx(0.4321115, abs=1e-3)
    with pytest.raises(ValueError, match="grid"):
        detect_anticrossing(grid - 0.5, np.zeros_like(grid),
                            np.ones_like(grid), gap_threshold=0.1)


def test_detect_restricted_window():
    # same sign throughout [0.6, 1.0]: the stage-2 window sees no crossing
    reports = detect_anticrossing(
        lambda t: t - 0.3, lambda t: 0.0, lambda t: 1.0,
        gap_threshold=0.1, t_lo=0.6, t_hi=1.0)
    assert reports[0].t_star is None


# ---------------------------------------------------------------------------
# steering localization


def test_localization_invariants():
    inst = make_gdis(2, [2, 2], 2, jzz=3.0)
    grid = np.linspace(0.0, 1.0, 11)
    loc = localization(inst, default_config(2), grid)
    assert loc.weights.shape == (11, 3)
    assert loc.weights.sum(axis=1) == pytest.approx(np.ones(11), abs=1e-9)
    assert (loc.weights >= -1e-12).all()
    assert loc.cum[:, -1] == pytest.approx(np.ones(11), abs=1e-9)
    assert (np.diff(loc.cum, axis=1) >= -1e-12).all()
    for row in loc.order:
        assert sorted(row) == [0, 1, 2]
    assert (loc.wl0 <= loc.weights[:, 0] + 1e-12).all()  # wl0 refines l=0


def test_localization_rejects_nonuniform():
    with pytest.raises(ValueError, match="uniform"):
        localization(make_gdis(2, [2, 3], 1, jzz=3.0), default_config(2),
                     [0.0, 1.0])
    with pytest.raises(ValueError, match="depth"):
        localization(make_gdis(2, [2, 2], 1, jzz=3.0), default_config(2),
                     [0.0], depth=9)


# ---------------------------------------------------------------------------
# negativity


def test_negativity_zero_for_stoquastic_provider():
    def provider(t):
        return np.array([[0.0, -1.0], [-1.0, t]])

    pairs = negativity(provider, np.linspace(0.0, 1.0, 9))
    assert all(f <= 1e-12 for _t, f in pairs)


def test_negativity_detects_sign_mixing():
    def provider(t):
        return np.array([[0.0, 0.4], [0.4, 2.0]])

    vals, vecs = np.linalg.eigh(provider(0.0))
    v = vecs[:, 0] if vecs[:, 0].sum() > 0 else -vecs[:, 0]
    expected = float((v[v < 0] ** 2).sum())
    pairs = negativity(provider, [0.0])
    assert pairs[0][1] == pytest.approx(expected, abs=1e-12)
    assert expected > 1e-3


def test_negativity_instance_sign_onset_in_stage_two():
    inst = make_gshare(1, [9], 1, jzz=3.0)
    grid = np.linspace(0.0, 1.0, 41)
    pairs = negativity_instance(inst, V3_CFG, grid)
    fr = np.array([f for _t, f in pairs])
    assert fr[grid <= 0.5].max() <= 1e-12
    assert fr.max() >= 1e-4


def test_negativity_instance_stays_zero_without_xx_driver():
    inst = make_gshare(1, [9], 1, jzz=3.0)
    cfg = default_config(1, gamma2=1.0, jxx=0.0)
    pairs = negativity_instance(inst, cfg, np.linspace(0.0, 1.0, 21))
    assert max(f for _t, f in pairs) <= 1e-12


# ---------------------------------------------------------------------------
# M/D certificate


def test_md_block_form_certificate():
    inst = make_gshare(2, [3, 3], 1, jzz=3.0)
    cfg = default_config(2)
    form = md_block_form(inst, cfg, t=0.75)
    assert form.h_m.shape == form.h_d.shape == form.v.shape == (3, 3)
    assert form.assembled == pytest.approx(form.assembled.T)
    # all M labels: R bit set, digits in {0, s}; D labels: flipped to {0, a}
    for lab in form.m_labels:
        assert lab.endswith("1") and set(lab[:-1]) <= {"0", "s"}
    for lab in form.d_labels:
        assert lab.endswith("1") and set(lab[:-1]) <= {"0", "a"}
    assert form.u_m.min() >= -1e-10
    assert form.u_d.max() <= 1e-12
    e_m = float(np.linalg.eigvalsh(form.h_m)[0])
    # closed form of the certificate energy: <u|H|u> = e_M - u_M^T V H_D^-1 V^T u_M
    u = np.concatenate([form.u_m, form.u_d])
    e_u = float(u @ form.assembled @ u)
    assert e_u == pytest.approx(e_m + float(form.u_m @ form.v @ form.u_d),
                                abs=1e-10)
    assert e_u < e_m - 1e-12
    # the opposite-sign admixture pushes the true ground energy below the
    # M block, and the ground state keeps the M/D sign split
    evals, evecs = np.linalg.eigh(form.assembled)
    assert evals[0] < e_m - 1e-12
    psi = evecs[:, 0]
    if psi[: len(form.u_m)].sum() < 0:
        psi = -psi
    assert psi[: len(form.u_m)].min() >= -1e-10
    assert psi[len(form.u_m):].max() <= 1e-10


def test_md_block_form_accepts_supplied_vector():
    inst = make_gshare(2, [3, 3], 1, jzz=3.0)
    cfg = default_config(2)
    form = md_block_form(inst, cfg, t=0.75, u_m=np.ones(3))
    assert form.u_d.max() <= 1e-12
    with pytest.raises(ValueError, match="nonnegative"):
        md_block_form(inst, cfg, t=0.75, u_m=np.array([1.0, -1.0, 1.0]))


def test_md_block_form_rejects_wrong_structure():
    cfg = default_config(2)
    with pytest.raises(ValueError, match="shared"):
        md_block_form(make_gdis(2, [3, 3], 1, jzz=3.0), cfg, t=0.75)
    with pytest.raises(ValueError, match="R vertex"):
        md_block_form(make_gshare(2, [3, 3], 0, jzz=3.0), cfg, t=0.75)


# ---------------------------------------------------------------------------
# three-vertex model


def test_v3_model_alpha_positive_beta_flips():
    grid = np.linspace(0.0, 1.0, 41)
    b = v3_model(9, 1.0, 3.0, V3_CFG, grid)
    assert b.alpha.min() > 0.0
    stage2 = grid >= 0.5
    assert b.beta[stage2].max() > 0.0
    assert b.beta[stage2].min() < -1e-3
    # normalized six-state amplitudes: |signed probabilities| sum to one
    assert np.abs(b.signed_prob_comp).sum(axis=1) == pytest.approx(
        np.ones(len(grid)), abs=1e-9)
    assert np.abs(b.signed_prob_ang).sum(axis=1) == pytest.approx(
        np.ones(len(grid)), abs=1e-9)


def test_v3_model_end_state_is_the_heavy_set():
    grid = np.linspace(0.0, 1.0, 11)
    b = v3_model(9, 1.0, 3.0, V3_CFG, grid)
    # at t=1 the tracked six-state ground is exactly the 0a1b1r basis vector
    assert b.signed_prob_comp[-1] == pytest.approx(
        np.array([0, 0, 1, 0, 0, 0]), abs=1e-9)
    assert b.beta[-1] == pytest.approx(0.0, abs=1e-9)
    assert b.alpha[-1] == pytest.approx(1.0, abs=1e-9)


def test_v3_model_rotation_identity_and_effective_blocks():
    grid = np.linspace(0.0, 1.0, 9)
    n_c = 9
    b = v3_model(n_c, 1.0, 3.0, V3_CFG, grid)
    ra, rb = math.sqrt(8.0 / 9.0), math.sqrt(1.0 / 9.0)
    u = np.zeros((6, 6))
    u[0, 0], u[2, 0] = ra, rb
    u[1, 1], u[3, 1] = ra, rb
    u[4, 2], u[5, 3] = 1.0, 1.0
    u[0, 4], u[2, 4] = -rb, ra
    u[1, 5], u[3, 5] = -rb, ra
    for i in range(len(grid)):
        assert np.abs(b.h_full_ang[i] - u.T @ b.h_full_comp[i] @ u).max() <= 1e-12
        assert b.h_eff_ang[i] == pytest.approx(
            b.h_full_ang[i][np.ix_([0, 2, 4], [0, 2, 4])])
        assert b.h_eff_comp[i] == pytest.approx(
            b.h_full_comp[i][np.ix_([2, 0], [2, 0])])
        # psi_eff is a unit vector and (alpha, beta) is a rotation of its
        # (cr, qr) components
        psi = b.psi_eff[i]
        assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-10)
        assert b.alpha[i] ** 2 + b.beta[i] ** 2 == pytest.approx(
            psi[0] ** 2 + psi[2] ** 2, abs=1e-10)


def test_v3_model_rejects_tiny_clique():
    with pytest.raises(ValueError):
        v3_model(1, 1.0, 3.0, V3_CFG, [0.0])


# ---------------------------------------------------------------------------
# iterative demonstration


def test_iterate_demo_dissolves_one_crossing_per_driver():
    comp = make_composite([(9, 9, 9), (9, 9, 9)], m_r=7, jzz=3.0)
    icfg = iteration_config([3, 3], [9, 9])
    grid = np.linspace(0.0, 1.0, 101)
    results = iterate_demo(comp, icfg, grid)
    assert [r.crossings for r in results] == [2, 1, 0]
    assert [r.drivers for r in results] == [(), (0,), (0, 1)]
    gm = results[0].trace.levels[:, -1]
    for r in results[1:]:
        assert np.array_equal(r.trace.levels[:, -1], gm)
    assert results[0].trace.tags == ("bare-LM1", "bare-LM2", "bare-GM")


def test_iterate_demo_rejects_mismatched_config():
    comp = make_composite([(9, 9, 9)], m_r=7, jzz=3.0)
    with pytest.raises(ValueError, match="family count"):
        iterate_demo(comp, iteration_config([3, 3], [9, 9]), [0.0, 1.0])


# ---------------------------------------------------------------------------
# CSV emission


def test_write_csv_is_byte_deterministic(tmp_path):
    rows = [[0.0, 1.0 / 3.0], [0.1, math.pi]]
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(p1, ["t", "v"], rows)
    write_csv(p2, ["t", "v"], rows)
    assert p1.read_bytes() == p2.read_bytes()
    lines = p1.read_text().splitlines()
    assert lines[0] == "t,v"
    assert float(lines[2].split(",")[1]) == math.pi  # 17 digits round-trip


def test_spectrum_and_bare_csv_headers(tmp_path):
    inst = make_gshare(2, [3, 3], 1, jzz=3.0)
    cfg = default_config(2)
    grid = np.linspace(0.0, 1.0, 3)
    trace = spectrum_trace(inst, cfg, grid, k=3)
    path = tmp_path / "spectrum.csv"
    write_spectrum_csv(path, trace)
    assert path.read_text().splitlines()[0] == "t,E0,E1,E2"
    bare = bare_curves(inst, cfg, grid)
    bpath = tmp_path / "bare.csv"
    write_bare_csv(bpath, bare)
    assert bpath.read_text().splitlines()[0] == "t,bare-LM,bare-GM,AS0"
    with pytest.raises(ValueError, match="tagged"):
        write_bare_csv(tmp_path / "x.csv", trace)


def test_localization_and_negativity_csv(tmp_path):
    inst = make_gdis(2, [2, 2], 2, jzz=3.0)
    loc = localization(inst, default_config(2), np.linspace(0.0, 1.0, 3))
    lpath = tmp_path / "loc.csv"
    write_localization_csv(lpath, loc)
    assert lpath.read_text().splitlines()[0] == "t,wL0,wR_cum_1,wR_cum_2,wR_cum_3"
    npath = tmp_path / "neg.csv"
    write_negativity_csv(npath, [(0.0, 0.0), (1.0, 0.25)])
    text = npath.read_text().splitlines()
    assert text[0] == "t,fraction" and text[2] == "1,0.25"


def test_v3_csv_header(tmp_path):
    b = v3_model(9, 1.0, 3.0, V3_CFG, np.linspace(0.0, 1.0, 3))
    path = tmp_path / "v3.csv"
    write_v3_csv(path, b)
    header = path.read_text().splitlines()[0].split(",")
    assert header[:3] == ["t", "alpha", "beta"]
    assert header[3] == "sp_comp_1a0b1r"
    assert header[-1] == "sp_ang_q0r"
    assert len(header) == 15
