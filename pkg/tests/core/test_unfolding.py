import math

import numpy as np
import pytest

from wcusp_waves.core.unfolding import (
    Branch,
    DiagramKind,
    bistable_w_intervals,
    classify_diagram,
    cubic_roots,
    eval_F,
    eval_ghy,
    eval_gwcusp,
    find_pitchfork,
    find_transcritical,
    fixed_points,
    fold_w_values,
    hausdorff_gaps,
    homogeneous_rest_roots,
    label_slice,
    nullcline_fixed_points,
    rest_frame,
    slice_coefficients,
    solve_cubic,
)
from wcusp_waves.models import UnfoldingParams
from wcusp_waves.shared.errors import DomainError, WrongRootCount

THIRD = 1 / 3
K = 2 / 27


def test_pointwise_evaluation():
    p = UnfoldingParams(lam=1.0, alpha=2.0, beta=3.0, gamma=4.0)
    assert eval_gwcusp(0.0, p) == -3.0
    assert eval_gwcusp(1.0, p) == -1 - 1 - 2 + 3 + 4
    assert eval_ghy(1.0, 2.0, 3.0) == 4.0


def test_eval_F_is_g_with_flipped_gamma():
    """F(u; γ) = g(u, λ+u, α, β, −γ) for any γ, and F = g(u, λ+u, ...) at γ = 0."""
    rng = np.random.default_rng(0)
    u = rng.uniform(-2, 2, 50)
    p = UnfoldingParams(lam=0.3, alpha=-0.1, beta=0.4, gamma=0.25)
    substituted = p._replace(lam=p.lam + u, gamma=-p.gamma)
    np.testing.assert_allclose(eval_F(u, p), eval_gwcusp(u, substituted), atol=1e-14)

    p0 = p._replace(gamma=0.0)
    np.testing.assert_allclose(eval_F(u, p0), eval_gwcusp(u, p0._replace(lam=p0.lam + u)))


def test_slice_coefficients():
    p = UnfoldingParams(lam=0.5, alpha=-0.2, beta=0.3, gamma=0.1)
    p_lin, q = slice_coefficients(p, w=0.25, z=0.1)
    assert p_lin == pytest.approx(0.3 + 0.1 * 0.75)
    assert q == pytest.approx(0.75**2 - 0.2 + 0.1)


def test_cubic_roots():
    """Distinct real roots come back ascending and NaN-padded, vectorised."""
    roots = cubic_roots(np.array([-6.0, 0.0]), np.array([11.0, -3.0]), np.array([-6.0, 2.0]))
    assert roots.shape == (2, 3)
    np.testing.assert_allclose(roots[0], [1.0, 2.0, 3.0], atol=1e-12)
    # (x − 1)²(x + 2): the double root is reported once
    np.testing.assert_allclose(roots[1, :2], [-2.0, 1.0], atol=1e-7)
    assert np.isnan(roots[1, 2])

    single = cubic_roots(0.0, 1.0, 0.0)
    assert single[0] == pytest.approx(0.0, abs=1e-12)
    assert np.all(np.isnan(single[1:]))


def test_cubic_roots_are_polished():
    # widely spread roots: 1e-3, 7 and −250
    coefficients = np.poly([1e-3, 7.0, -250.0])
    roots = cubic_roots(*coefficients[1:])
    np.testing.assert_allclose(roots, [-250.0, 1e-3, 7.0], rtol=1e-12)
    residual = np.abs(np.polyval(coefficients, roots))
    scale = np.polyval(np.abs(coefficients), np.abs(roots))
    assert np.all(residual <= 1e-14 * scale)


def test_solve_cubic():
    p = UnfoldingParams(lam=0.0, alpha=0.0, beta=1.0, gamma=0.0)
    slice_ = solve_cubic(0.0, 0.0, p)
    assert slice_.roots == pytest.approx((-1.0, 0.0, 1.0), abs=1e-12)
    assert slice_.branch_labels == (Branch.DOWN, Branch.MID, Branch.UP)
    assert slice_.multiplicities == (1, 1, 1)
    assert slice_.bistable and not slice_.fold
    assert slice_.root_on(Branch.UP) == pytest.approx(1.0)
    with pytest.raises(WrongRootCount):
        slice_.root_on(Branch.DOWN_PLUS)

    far = solve_cubic(5.0, 0.0, p)
    assert len(far.roots) == 1 and far.roots[0] < 0


def test_find_pitchfork_at_one_third():
    pf = find_pitchfork(THIRD)
    assert pf.lam == pytest.approx(THIRD, abs=1e-10)
    assert pf.alpha == pytest.approx(-K, abs=1e-10)
    assert pf.gamma == pytest.approx(0.0, abs=1e-10)
    assert pf.u == pytest.approx(-THIRD, abs=1e-10)


def test_find_pitchfork_continues_in_beta():
    beta = 0.43333333333333335
    pf = find_pitchfork(beta)
    assert pf.u == pytest.approx(-0.37852954000378447, abs=1e-9)
    assert pf.lam == pytest.approx(0.40419168898510727, abs=1e-9)
    assert pf.alpha == pytest.approx(-0.10913346292653567, abs=1e-9)
    assert pf.gamma == pytest.approx(0.13558862001135341, abs=1e-9)
    # eliminating γ and λ leaves 9u³ + u + 2β = 0 with γ = −3u − 1, λ = (3u² − u)/2
    assert 9 * pf.u**3 + pf.u + 2 * beta == pytest.approx(0.0, abs=1e-9)
    assert pf.gamma == pytest.approx(-3 * pf.u - 1, abs=1e-9)
    assert pf.lam == pytest.approx((3 * pf.u**2 - pf.u) / 2, abs=1e-9)


def test_find_transcritical():
    assert find_transcritical(THIRD) == pytest.approx(-K, abs=1e-15)
    assert find_transcritical(0.75) == pytest.approx(-2 * 0.25**1.5)
    with pytest.raises(DomainError):
        find_transcritical(0.0)


def test_classify_mirrored_hysteresis(mirrored_params):
    p = mirrored_params
    diagram = classify_diagram(p)
    assert diagram.class_id is DiagramKind.MIRRORED_HYSTERESIS
    assert diagram.fold_count == 4

    outer, inner = math.sqrt(K - p.alpha), math.sqrt(-K - p.alpha)
    expected = sorted(s * r - p.lam for s in (-1, 1) for r in (outer, inner))
    np.testing.assert_allclose(diagram.fold_w_values, expected, atol=1e-8)
    np.testing.assert_allclose(fold_w_values(p), expected, atol=1e-8)

    lobes = bistable_w_intervals(p)
    assert len(lobes) == 2
    np.testing.assert_allclose(lobes[0], expected[:2], atol=1e-8)
    np.testing.assert_allclose(lobes[1], expected[2:], atol=1e-8)


def test_classify_class3_and_degenerate(mirrored_params):
    class3 = classify_diagram(mirrored_params._replace(alpha=-0.05))
    assert class3.class_id is DiagramKind.CLASS3
    assert class3.fold_count == 2

    pitchfork = UnfoldingParams(lam=THIRD, alpha=-K, beta=THIRD, gamma=0.0)
    assert classify_diagram(pitchfork).class_id is DiagramKind.TRANSCRITICAL_DEGENERATE

    on_variety = mirrored_params._replace(alpha=find_transcritical(THIRD))
    assert classify_diagram(on_variety).class_id is DiagramKind.TRANSCRITICAL_DEGENERATE


def test_classify_restricted_range(mirrored_params):
    """Folds outside `w_range` are ignored."""
    diagram = classify_diagram(mirrored_params, w_range=(-0.5, 0.5))
    assert diagram.fold_count == 3
    assert diagram.class_id is DiagramKind.OTHER


def test_label_slice(mirrored_params):
    p = mirrored_params
    diagram = classify_diagram(p)

    def labels(w):
        return label_slice(solve_cubic(w, 0.0, p), diagram).branch_labels

    assert labels(-0.55) == (Branch.DOWN_MINUS, Branch.MID_MINUS, Branch.UP)
    assert labels(-0.1) == (Branch.DOWN_PLUS, Branch.MID_PLUS, Branch.UP)
    assert labels(-0.32) == (Branch.UP,)
    assert labels(-1.0) == (Branch.DOWN_MINUS,)
    assert labels(0.5) == (Branch.DOWN_PLUS,)


def test_fixed_points():
    p = UnfoldingParams(lam=0.0, alpha=0.0, beta=2.0, gamma=0.0)
    fps = fixed_points(p)
    assert fps.roots == pytest.approx((-2.0, 0.0, 1.0), abs=1e-12)
    assert fps.classification == ("rest", "middle", "right")
    assert fps.u_rest == pytest.approx(-2.0)
    assert fps.flags.three_roots
    assert fps.flags.up_jump_positive
    assert not fps.flags.down_jump_exceeds_up
    assert not fps.flags.rest_bound
    assert not fps.flags.passed


def test_fixed_points_at_traveling_witness(fig8_params):
    fps = fixed_points(fig8_params)
    assert len(fps.roots) == 3
    assert fps.u_rest == pytest.approx(-0.47326, abs=1e-4)
    assert fps.flags.passed


def test_rest_frame(fig8_pde_params):
    p = fig8_pde_params
    shifted, u_rest = rest_frame(p)
    assert u_rest == pytest.approx(-0.47326, abs=1e-4)
    assert u_rest in homogeneous_rest_roots(p)
    assert shifted.alpha == pytest.approx(p.alpha + u_rest)
    # rest is a fast-slow equilibrium of the shifted family at z = 0
    assert min(abs(r - u_rest) for r in nullcline_fixed_points(shifted)) < 1e-9
    assert classify_diagram(shifted).class_id is DiagramKind.MIRRORED_HYSTERESIS


def test_hausdorff_gaps(fig8_params):
    symmetric = UnfoldingParams(lam=0.0, alpha=0.0, beta=1.0, gamma=0.0)
    gaps = hausdorff_gaps(symmetric, 0.0)
    assert (gaps.L1, gaps.L2, gaps.a) == pytest.approx((1.0, 1.0, 0.5), abs=1e-12)

    witness = hausdorff_gaps(fig8_params, fixed_points(fig8_params).u_rest)
    assert witness.L2 < witness.L1
    assert witness.a == pytest.approx(0.2716, abs=1e-3)

    with pytest.raises(WrongRootCount):
        hausdorff_gaps(symmetric, 5.0)
