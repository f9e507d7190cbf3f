from fractions import Fraction

import pytest

from equigraph.algebra import point
from equigraph.dynamics import (
    KMatching,
    Ray,
    assignment_from_targets,
    bridge_k_bound,
    check_nested_rays,
    compute_S,
    cost,
    extract_matching,
    improve,
    kmatching_from_assignment,
    phi,
    phi_pairs,
    random_kmatching,
    ray,
    run_dynamics,
    standard_matching,
)
from equigraph.errors import (
    EmptySError,
    InvalidKError,
    IterationCapError,
    NotAMatchingError,
    PreconditionViolatedError,
    SNotEmptyError,
)
from equigraph.graph import Side
from equigraph.group import GroupElement, IDENTITY

from oracles import facing_pairs_bruteforce


def _swapped(k=3, dev=None):
    dev = {0: 3, 2: 1} if dev is None else dev
    lo = min(min(dev), min(dev.values()) - 1)
    hi = max(max(dev) + 1, max(dev.values()))
    m = KMatching(k, {0: (lo, hi)}, {0: dev})
    m.validate()
    return m


# ----------------------------------------------------------------------
# construction and validation


def test_k_must_be_odd_positive():
    for bad in (0, -3, 2, 4):
        with pytest.raises(InvalidKError):
            KMatching(bad, {0: (0, -1)}, {0: {}})


def test_windows_and_deviations_must_cover_same_paths():
    with pytest.raises(ValueError):
        KMatching(3, {0: (0, -1)}, {0: {}, 1: {}})


def test_validate_rejects_structural_defects():
    cases = [
        (7, {0: (1, 4)}, {0: {2: 5}}, "not canonical"),
        (7, {0: (0, 3)}, {0: {1: 2}}, "parity"),
        (7, {0: (0, 3)}, {0: {0: 1}}, "standard pair"),
        (7, {0: (0, 3)}, {0: {0: 5}}, "leaves window"),
        (3, {0: (0, 7)}, {0: {0: 7, 6: 1}}, "exceeds K"),
        (7, {0: (0, 5)}, {0: {0: 3, 4: 3}}, "not injective"),
        (7, {0: (0, 3)}, {0: {0: 3}}, "bijection"),
    ]
    for k, windows, deviations, fragment in cases:
        m = KMatching(k, windows, deviations)
        with pytest.raises(ValueError, match=fragment):
            m.validate()


def test_partner_and_pairs_accessors():
    m = _swapped()
    assert m.partner(0, 0) == 3
    assert m.partner(0, 2) == 1
    assert m.partner(0, 3) == 0
    assert m.partner(0, 1) == 2
    assert m.partner(0, 100) == 101  # standard beyond the window
    assert m.partner(0, 101) == 100
    assert m.pairs(0) == {0: 3, 2: 1}
    assert m.window(0) == (0, 3)
    assert not m.is_standard
    assert m.system.path_ids == frozenset({0})


def test_standard_matching_shape():
    m = standard_matching(5, (0, 7))
    m.validate()
    assert m.is_standard
    assert m.cost() == 0
    assert m.path_ids == [0, 7]
    assert m.partner(7, 42) == 43


# ----------------------------------------------------------------------
# rays, phi, facing pairs


def test_ray_contains():
    r = Ray((0, 4), 1)
    assert r.contains(4) and r.contains(10)
    assert not r.contains(2)
    left = Ray((0, 4), -1)
    assert left.contains(4) and left.contains(-100)
    assert not left.contains(6)


def test_ray_of_matching():
    m = _swapped()
    assert ray(m, (0, 0)) == Ray((0, 0), 1)
    assert ray(m, (0, 2)) == Ray((0, 2), -1)
    assert ray(m, (0, 50)) == Ray((0, 50), 1)


def test_phi_facing_and_not():
    m = _swapped()
    assert phi(m, (0, 0), (0, 2))
    assert phi(m, (0, 2), (0, 0))
    assert not phi(m, (0, 2), (0, 4))
    assert not phi(m, (0, 0), (0, 4))  # distance 4, not 2
    with pytest.raises(PreconditionViolatedError):
        phi(m, (0, 0), (1, 2))
    with pytest.raises(PreconditionViolatedError):
        phi(m, (0, 0), (0, 1))


def test_phi_pairs_worked_example():
    m = _swapped()
    assert phi_pairs(m) == [((0, 0), (0, 2))]
    assert compute_S(m) == {(0, 0), (0, 2)}
    assert cost(m) == 2


def test_phi_pairs_match_bruteforce_oracle():
    for seed in range(20):
        m = random_kmatching(15, 5, seed)
        assert compute_S(m) == facing_pairs_bruteforce(m)
    for seed in range(10):
        m = random_kmatching(30, 3, seed + 100)
        assert compute_S(m) == facing_pairs_bruteforce(m)


def test_phi_pairs_multi_path_deterministic():
    m = KMatching(
        3,
        {0: (0, 3), 1: (4, 7)},
        {0: {0: 3, 2: 1}, 1: {4: 7, 6: 5}},
    )
    m.validate()
    assert phi_pairs(m) == [((0, 0), (0, 2)), ((1, 4), (1, 6))]


# ----------------------------------------------------------------------
# improvement rounds


def test_improve_worked_example():
    m = _swapped()
    out = improve(m)
    assert out.is_standard
    assert out.cost() == 0


def test_improve_requires_facing_pairs():
    with pytest.raises(EmptySError):
        improve(standard_matching(3))


def test_improve_multi_path_in_one_round():
    m = KMatching(
        3,
        {0: (0, 3), 1: (4, 7)},
        {0: {0: 3, 2: 1}, 1: {4: 7, 6: 5}},
    )
    m.validate()
    out = improve(m)
    assert out.is_standard and out.cost() == 0


def test_improve_invariants_on_random_instances():
    for seed in range(15):
        m = random_kmatching(40, 5, seed)
        while True:
            pairs = phi_pairs(m)
            if not pairs:
                break
            nxt = improve(m)
            nxt.validate()
            assert nxt.cost() <= m.cost() - 2 * len(pairs)
            for pid in nxt.path_ids:
                old_lo, old_hi = m.window(pid)
                lo, hi = nxt.window(pid)
                assert lo >= old_lo and hi <= old_hi  # windows never grow
            m = nxt
        assert m.is_standard


def test_three_deviation_example_takes_two_rounds():
    m = KMatching(5, {0: (0, 5)}, {0: {0: 5, 2: 1, 4: 3}})
    m.validate()
    final, trace = run_dynamics(m)
    assert final.is_standard
    assert trace.initial_cost == 4
    assert trace.final_cost == 0
    assert trace.iterations == 2
    assert trace.sum_s == 4
    assert trace.records[0].rewired == (((0, 0), (0, 2)),)
    assert trace.records[1].rewired == (((0, 2), (0, 4)),)
    assert trace.records[0].cost == 4 and trace.records[1].cost == 2


def test_run_dynamics_on_standard_is_a_noop():
    final, trace = run_dynamics(standard_matching(3))
    assert final.is_standard
    assert trace.iterations == 0
    assert trace.initial_cost == 0 and trace.final_cost == 0


def test_run_dynamics_iteration_cap():
    m = _swapped()
    with pytest.raises(IterationCapError):
        run_dynamics(m, max_iters=0)


def test_run_dynamics_golden_regressions():
    m = random_kmatching(50, 5, 1)
    final, trace = run_dynamics(m)
    assert (trace.initial_cost, trace.iterations, trace.sum_s) == (56, 5, 48)
    assert final.is_standard
    m = random_kmatching(200, 7, 42)
    final, trace = run_dynamics(m)
    assert (trace.initial_cost, trace.iterations, trace.sum_s) == (456, 7, 370)
    assert final.is_standard


def test_convergence_bounds_hold():
    for seed in range(10):
        m = random_kmatching(60, 7, seed)
        c0 = m.cost()
        final, trace = run_dynamics(m)
        assert trace.iterations <= c0
        assert trace.sum_s <= c0
        assert check_nested_rays(final)
        assert final.is_standard


# ----------------------------------------------------------------------
# convergence predicates and extraction


def test_check_nested_rays():
    assert check_nested_rays(standard_matching(3))
    assert not check_nested_rays(_swapped())


def test_extract_matching_requires_convergence():
    with pytest.raises(SNotEmptyError):
        extract_matching(_swapped())


def test_extract_matching_yields_unit_matching():
    final, _ = run_dynamics(random_kmatching(30, 5, 9))
    out = extract_matching(final)
    assert out.k == 1
    assert out.is_standard
    assert out.cost() == 0
    lo, hi = final.window(0)
    for a in range(lo if lo % 2 == 0 else lo + 1, hi, 2):
        assert out.partner(0, a) == a + 1


# ----------------------------------------------------------------------
# instance generation


def test_random_kmatching_is_valid_and_deterministic():
    a = random_kmatching(25, 5, 3)
    b = random_kmatching(25, 5, 3)
    assert a.deviations == b.deviations
    assert a.cost() > 0
    a.validate()
    c = random_kmatching(25, 5, 4)
    assert c.deviations != a.deviations


def test_random_kmatching_edge_cases():
    assert random_kmatching(20, 5, 0, swaps=0).is_standard
    assert random_kmatching(20, 1, 0).cost() == 0  # K=1 admits no swap
    with pytest.raises(InvalidKError):
        random_kmatching(20, 4, 0)
    with pytest.raises(ValueError):
        random_kmatching(3, 5, 0)


def test_random_kmatching_respects_window_and_k():
    m = random_kmatching(30, 7, 11)
    lo, hi = m.window(0)
    assert lo >= 0 and hi <= 59
    for a, t in m.deviations[0].items():
        assert abs(a - t) <= 7


# ----------------------------------------------------------------------
# bridging explored components into matchings


def test_bridge_k_bound_values():
    assert bridge_k_bound(0) == 1
    assert bridge_k_bound(1) == 3
    assert bridge_k_bound(4) == 9
    with pytest.raises(ValueError):
        bridge_k_bound(-1)


def test_assignment_roundtrip_standard(graph):
    v = graph.vertex(Side.I, point(Fraction(1, 2)))
    view = graph.explore_component(v, 64)
    targets = {a: a + 1 for a in (-4, -2, 0, 2, 4)}
    pieces = assignment_from_targets(view, targets)
    m = kmatching_from_assignment(view, pieces)
    assert m.is_standard
    assert m.cost() == 0


def test_assignment_with_swaps_runs_to_standard(graph):
    v = graph.vertex(Side.I, point(Fraction(1, 2)))
    view = graph.explore_component(v, 64)
    targets = {-4: -1, -2: -3, 0: 3, 2: 1}
    pieces = assignment_from_targets(view, targets)
    m = kmatching_from_assignment(view, pieces)
    assert m.cost() > 0
    assert m.k == bridge_k_bound(max(abs(el.b) for _, _, el in pieces))
    final, trace = run_dynamics(m)
    assert final.is_standard
    assert trace.iterations <= trace.initial_cost


def test_assignment_pieces_coalesce(ctx):
    # a synthetic chain whose edges all carry the same label collapses
    # consecutive standard targets into a single piece
    from test_graph import _chain_graph

    g, vertices = _chain_graph(ctx, 8)
    view = g.explore_component(vertices[0], 100)
    pieces = assignment_from_targets(view, {0: 1, 2: 3, 4: 5})
    assert pieces == [(0, 4, IDENTITY)]


def test_assignment_pieces_do_not_coalesce_across_elements(graph):
    v = graph.vertex(Side.I, point(Fraction(1, 2)))
    view = graph.explore_component(v, 64)
    pieces = assignment_from_targets(view, {0: 1, 2: 3})
    assert len(pieces) == 2
    assert pieces[0][2] != pieces[1][2]


def test_kmatching_from_assignment_rejects_bad_pieces(graph):
    v = graph.vertex(Side.I, point(Fraction(1, 2)))
    view = graph.explore_component(v, 64)
    good = assignment_from_targets(view, {0: 1, 2: 3})
    with pytest.raises(NotAMatchingError, match="overlap"):
        kmatching_from_assignment(view, good + [(0, 0, good[0][2])])
    with pytest.raises(NotAMatchingError, match="outside"):
        kmatching_from_assignment(view, [(-200, -200, IDENTITY)])
    with pytest.raises(NotAMatchingError, match="not a J-vertex"):
        kmatching_from_assignment(view, [(0, 0, GroupElement(1, 3, 0))])
    dup = assignment_from_targets(view, {0: 1}) + assignment_from_targets(
        view, {2: 1}
    )
    with pytest.raises(NotAMatchingError, match="share a target"):
        kmatching_from_assignment(view, dup)


def test_kmatching_from_assignment_needs_i_origin(graph):
    j = graph.vertex(Side.J, point(Fraction(1, 2)))
    view = graph.explore_component(j, 8)
    with pytest.raises(ValueError, match="I-vertex"):
        kmatching_from_assignment(view, [])
