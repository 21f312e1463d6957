"""
Tests for the baseline planner: geometry, relay graph, repulsion, planning and control.

The property suites check the closed forms and the graph search against
brute-force oracles.
"""

import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from relay_bench.baseline import (
    RECEIVER,
    SENDER,
    BaselineController,
    act,
    build_graph,
    candidate_frame,
    clusters,
    envelope,
    handover_point,
    handover_range,
    lambda_solve,
    path_cost,
    plan,
    repulse,
    retrieval_point,
    shortest_relay,
)
from relay_bench.errors import DomainError, PlanError
from relay_bench.game import (
    NO_BUDGET,
    SCENARIOS,
    GameState,
    ScenarioParams,
    play,
    propagate_initial,
    reset,
    t_max,
)


@pytest.fixture
def params() -> ScenarioParams:
    return ScenarioParams.for_scenario("iso-nojam")


def make_state(positions, R):
    positions = np.asarray(positions, dtype=float)
    K = positions.shape[0]
    return GameState(
        positions=positions,
        orientations=np.zeros(K),
        carrying=np.zeros(K, dtype=bool),
        jammer=np.zeros(2),
        jammer_step=np.zeros(2),
        R=R,
    )


def _objective(p, p_k, p_r):
    return float(np.linalg.norm(p - p_k) + np.linalg.norm(p_r - p))


class TestHandoverRange:
    """Tests for the agent link reach used by the planner."""

    def test_isotropic(self, params: ScenarioParams):
        """Isotropic agents hand over at r_com."""
        assert handover_range(params) == 1.0

    def test_directional(self):
        """Directional reach is sqrt(2) r_com with the safety factor."""
        reach = handover_range(ScenarioParams.for_scenario("dir-nojam"))
        assert reach == pytest.approx(math.sqrt(2.0) * 0.999)


class TestRetrievalPoint:
    """Tests for the one-agent retrieval point."""

    def test_inside_ball(self):
        """An agent already in range retrieves where it stands."""
        p = retrieval_point((0.3, 0.4), (0.0, 0.0), (3.0, 0.0), 1.0)
        assert p.tolist() == [0.3, 0.4]

    def test_behind_receiver_line(self):
        """Behind the receiver the boundary minimizer is the near pole."""
        p = retrieval_point((2.2, 0.0), (0.0, 0.0), (2.0, 0.0), 1.0)
        assert p.tolist() == pytest.approx([1.0, 0.0])

    def test_segment_entry(self):
        """The segment entry point wins when the segment crosses the ball."""
        p = retrieval_point((-3.0, 0.0), (0.0, 0.0), (4.0, 0.0), 1.0)
        assert p.tolist() == pytest.approx([-1.0, 0.0])

    @settings(max_examples=200, deadline=None)
    @given(
        x=st.floats(min_value=-6.0, max_value=6.0),
        y=st.floats(min_value=-6.0, max_value=6.0),
        R=st.floats(min_value=1.0, max_value=9.0),
    )
    def test_no_better_point_on_circle(self, x, y, R):
        """No sampled circle point beats the retrieval point."""
        p_k = np.array([x, y])
        assume(np.linalg.norm(p_k) > 1.0 + 1e-6)
        p_r = np.array([R, 0.0])
        best = retrieval_point(p_k, (0.0, 0.0), p_r, 1.0)
        assert np.linalg.norm(best) <= 1.0 + 1e-9
        angles = np.linspace(-math.pi, math.pi, 20001)
        circle = np.column_stack([np.cos(angles), np.sin(angles)])
        grid_best = float(np.min(np.linalg.norm(circle - p_k, axis=1) + np.linalg.norm(p_r - circle, axis=1)))
        assert _objective(best, p_k, p_r) <= grid_best + 1e-6


class TestLambda:
    """Tests for the relay point offset."""

    def test_uncovered_branch(self):
        """Lambda on the uncovered branch."""
        assert lambda_solve(2.0, 1.0, 0.5, 2, 1.0) == pytest.approx(1.0)

    def test_covered_branch(self):
        """Lambda on the covered branch."""
        assert lambda_solve(2.0, 1.0, 0.5, 1, 1.0) == pytest.approx(0.9375)

    def test_precondition(self):
        """Test that a target inside the envelope is rejected."""
        with pytest.raises(DomainError) as exc:
            lambda_solve(0.5, 1.0, 0.5, 1, 1.0)
        assert exc.value.code == "BASE_LAMBDA_PRECONDITION"

    @settings(max_examples=2000)
    @given(
        a=st.floats(min_value=0.0, max_value=20.0),
        c=st.floats(min_value=0.0, max_value=10.0),
        d=st.floats(min_value=0.0, max_value=20.0),
        index=st.integers(min_value=1, max_value=10),
        r=st.sampled_from([1.0, math.sqrt(2.0) * 0.999]),
    )
    def test_matches_bisection(self, a, c, d, index, r):
        """The lambda root agrees with plain bisection."""
        assume(a > envelope(c, d, index, r) + 1e-9)

        def residual(lam):
            return (a - lam) - envelope(c, math.hypot(d, lam), index, r)

        lam = lambda_solve(a, c, d, index, r)
        assert 0.0 < lam <= a
        assert abs(residual(lam)) <= 1e-9 * max(1.0, a)
        reference = brentq(residual, 0.0, a, xtol=1e-14)
        assert lam == pytest.approx(reference, abs=1e-8 * max(1.0, a))


class TestRelayGraph:
    """Tests for graph construction and the deterministic Dijkstra."""

    @settings(max_examples=1000, deadline=None)
    @given(
        seed=st.integers(min_value=0, max_value=2**32 - 1),
        agents=st.integers(min_value=1, max_value=6),
        directional=st.booleans(),
    )
    def test_matches_exhaustive_enumeration(self, seed, agents, directional):
        """Dijkstra finds the cheapest of all simple relay paths."""
        params = ScenarioParams(directional=directional)
        rng = np.random.default_rng(seed)
        state = reset(params, agents, rng)
        retriever = int(rng.integers(agents))
        graph = build_graph(candidate_frame(state.positions, retriever, state.receiver, params))
        path, cost = shortest_relay(graph, retriever)
        brute = min(path_cost(graph, p) for p in nx.all_simple_paths(graph, retriever, RECEIVER))
        assert cost == brute
        assert path_cost(graph, path) == cost
        assert path[0] == retriever and path[1] == SENDER and path[-1] == RECEIVER

    def test_ties_prefer_lower_agent_index(self):
        """Equal-cost paths resolve toward the lower agent index."""
        graph = nx.DiGraph(agents=3)
        graph.add_edge(0, SENDER, weight=1.0)
        graph.add_edge(SENDER, 2, weight=0.0)
        graph.add_edge(2, RECEIVER, weight=0.0)
        graph.add_edge(SENDER, 1, weight=0.0)
        graph.add_edge(1, RECEIVER, weight=0.0)
        path, cost = shortest_relay(graph, 0)
        assert path == [0, SENDER, 1, RECEIVER]
        assert cost == 1.0

    def test_unreachable(self):
        """An unreachable receiver gives no path and infinite cost."""
        graph = nx.DiGraph(agents=1)
        graph.add_node(0)
        graph.add_node(RECEIVER)
        path, cost = shortest_relay(graph, 0)
        assert path == []
        assert cost == math.inf

    def test_edge_families(self, params: ScenarioParams):
        """Retrieval, relay and delivery edges carry their travel costs."""
        frame = candidate_frame(np.array([[0.5, 0.0], [1.5, 0.0]]), 0, (2.0, 0.0), params)
        graph = build_graph(frame)
        assert graph[0][SENDER]["weight"] == 0.0
        assert graph[SENDER][RECEIVER]["weight"] == pytest.approx(1.5)
        assert graph[SENDER][1]["weight"] == pytest.approx(0.0)
        assert graph[1][RECEIVER]["weight"] == 0.0


class TestRepulsion:
    """Tests for spreading clustered relay points."""

    def test_clusters_use_strict_spacing(self):
        """Points exactly r_com apart do not cluster."""
        points = {0: np.array([0.0, 0.0]), 1: np.array([1.0, 0.0]), 2: np.array([1.5, 0.0])}
        assert clusters(points, 1.0) == [(0,), (1, 2)]

    def test_colocated_agents_spread_apart(self, params: ScenarioParams):
        """Agents at one spot get distinct relay points."""
        positions = np.array([[-3.0, 0.0], [2.0, 0.0], [2.0, 0.0]])
        frame = candidate_frame(positions, 0, (4.0, 0.0), params)
        assert frame.retrieval.tolist() == pytest.approx([-1.0, 0.0])
        assert frame.travel == pytest.approx(2.0)
        points = repulse(frame, [0, 1, 2], params.r_com)
        assert points[0].tolist() == pytest.approx([-1.0, 0.0])
        assert points[1].tolist() == pytest.approx([1.5, 0.0], abs=1e-9)
        assert points[2].tolist() == pytest.approx([2.5, 0.0], abs=1e-9)
        assert np.linalg.norm(points[2] - points[1]) == pytest.approx(1.0, abs=1e-9)

    def test_budget_is_respected(self, params: ScenarioParams):
        """Repulsion keeps every point within its envelope."""
        positions = np.array([[-3.0, 0.0], [2.0, 0.0], [2.0, 0.0]])
        frame = candidate_frame(positions, 0, (4.0, 0.0), params)
        points = repulse(frame, [0, 1, 2], params.r_com)
        for agent in (1, 2):
            assert frame.slack(agent, points[agent]) >= -1e-12


class TestPlan:
    """Tests for the relay planner."""

    def test_single_agent(self, params: ScenarioParams):
        """A lone agent carries the message itself."""
        relay_plan = plan(make_state([[1.0, 1.5]], R=2.0), params)
        assert relay_plan.chain == (0,)
        assert relay_plan.retriever == 0
        assert relay_plan.passive == ()

    def test_dense_chain_costs_nothing(self, params: ScenarioParams):
        """A chain already in place needs no motion."""
        relay_plan = plan(make_state([[0.5, 0.0], [1.5, 0.0]], R=2.0), params)
        assert relay_plan.chain == (0, 1)
        assert relay_plan.total_carry_distance == pytest.approx(0.0)

    def test_far_agent_is_passive(self, params: ScenarioParams):
        """Agents off the best path stay passive."""
        relay_plan = plan(make_state([[0.5, 0.0], [-3.0, 5.0]], R=2.0), params)
        assert relay_plan.chain == (0,)
        assert relay_plan.passive == (1,)
        assert relay_plan.total_carry_distance == pytest.approx(1.5)

    def test_serializes(self, params: ScenarioParams):
        """Plans serialize chain and waypoints."""
        data = plan(make_state([[0.5, 0.0], [1.5, 0.0]], R=2.0), params).to_dict()
        assert data["chain"] == [0, 1]
        assert set(data["waypoints"]) == {"0", "1"}

    def test_handover_point(self):
        """Handover stops r_com short of the next hop."""
        point = handover_point(np.array([0.0, 0.0]), np.array([3.0, 0.0]), 1.0)
        assert point.tolist() == pytest.approx([2.0, 0.0])
        inside = handover_point(np.array([2.5, 0.0]), np.array([3.0, 0.0]), 1.0)
        assert inside.tolist() == [2.5, 0.0]


class TestController:
    """Tests for plan execution."""

    def test_act_without_plan(self, params: ScenarioParams):
        """Acting without a plan is an error."""
        with pytest.raises(PlanError) as exc:
            act(make_state([[1.0, 1.0]], R=2.0), None, params)
        assert exc.value.code == "BASE_NO_PLAN"

    def test_controller_plans_lazily(self, params: ScenarioParams):
        """Test that the controller plans on its first call."""
        controller = BaselineController(params)
        joint = controller(make_state([[1.0, 1.5]], R=2.0), 0)
        assert controller.plan is not None
        assert len(joint) == 1

    @pytest.mark.parametrize("scenario", sorted(SCENARIOS))
    @pytest.mark.parametrize("agents", [1, 2, 3])
    def test_delivers_within_horizon(self, scenario: str, agents: int):
        """The baseline delivers within the c_time = 1.5 horizon."""
        params = ScenarioParams.for_scenario(scenario)
        horizon = t_max(agents, params, 1.5)
        for seed in range(10):
            initial = reset(params, agents, np.random.default_rng(seed))
            controller = BaselineController(params)
            controller.reset(initial)
            rollout = play(initial, controller, params, NO_BUDGET, horizon)
            assert rollout.delivered, f"{scenario} K={agents} seed={seed}"

    def test_passive_agents_stay_still(self, params: ScenarioParams):
        """Passive agents never move."""
        initial = propagate_initial(make_state([[0.5, 0.0], [-3.0, 5.0]], R=2.0), params)
        controller = BaselineController(params)
        controller.reset(initial)
        rollout = play(initial, controller, params, NO_BUDGET, 50, record=True)
        assert rollout.delivered
        assert all(np.array_equal(t.joint.displacements()[1], [0.0, 0.0]) for t in rollout.transitions)


@pytest.mark.acceptance
class TestBaselineGuarantee:
    """The baseline delivers in every scenario for up to nine agents."""

    @pytest.mark.parametrize("scenario", sorted(SCENARIOS))
    @pytest.mark.parametrize("agents", [1, 3, 5, 7, 9])
    def test_success_rate_is_one(self, scenario: str, agents: int):
        """Every one of 1000 seeded episodes is delivered."""
        params = ScenarioParams.for_scenario(scenario)
        horizon = t_max(agents, params, 1.5)
        failures = []
        for seed in range(1000):
            initial = reset(params, agents, np.random.default_rng(seed))
            controller = BaselineController(params)
            controller.reset(initial)
            if not play(initial, controller, params, NO_BUDGET, horizon).delivered:
                failures.append(seed)
        assert failures == []


def test_exhaustive_paths_cover_small_graph(params: ScenarioParams):
    frame = candidate_frame(np.array([[0.5, 0.0], [1.5, 0.0], [1.0, 1.0]]), 0, (2.0, 0.0), params)
    graph = build_graph(frame)
    paths = list(nx.all_simple_paths(graph, 0, RECEIVER))
    # direct, and every ordering of the relay subset {1, 2}
    assert len(paths) == 1 + 2 + 2
    assert all(p[:2] == [0, SENDER] for p in paths)
    assert {tuple(p[2:-1]) for p in paths} == {(), (1,), (2,), (1, 2), (2, 1)}
    assert all(len(set(p)) == len(p) for p in paths)
