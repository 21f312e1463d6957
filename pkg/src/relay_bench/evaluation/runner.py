"""Seeded episode rollouts, batch evaluation and paired comparison."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np
import pandas as pd

from ..errors import ComparisonError, ConfigError, ProtocolError
from ..game import Budget, ScenarioParams, play, reset, t_max
from ..policy import Policy, PolicySpec
from .records import FAILURE_PROTOCOL, EpisodeRecord
from .seeds import episode_seed

logger = logging.getLogger(__name__)

PAIR_KEYS = ["episode_id", "seed", "K", "scenario"]


def run_episode(
    policy: Policy,
    seed: int,
    agents: int,
    params: ScenarioParams,
    budget: Budget,
    c_time: float,
    *,
    episode_id: int = 0,
    record: bool = False,
) -> EpisodeRecord:
    """
    Play one episode from the initial state drawn with ``seed``.

    A wire-protocol failure of an external policy ends the episode as
    unsuccessful with failure code ``protocol``; V and D_tot are NaN.
    """
    rng = np.random.default_rng(seed)
    initial = reset(params, agents, rng)
    horizon = t_max(agents, params, c_time)

    try:
        policy.start(initial)
        rollout = play(
            initial,
            policy.act,
            params,
            budget,
            horizon,
            mode=policy.mode,
            record=record,
        )
    except ProtocolError as e:
        logger.warning("Episode %d (seed %d) aborted: %s", episode_id, seed, e)
        return EpisodeRecord(
            episode_id=episode_id,
            seed=seed,
            K=agents,
            scenario=params.scenario,
            R=initial.R,
            success=False,
            V=math.nan,
            T_del=None,
            D_tot=math.nan,
            policy=policy.name,
            failure=FAILURE_PROTOCOL,
            message=str(e),
        )

    plan = getattr(policy, "plan", None)
    episode = EpisodeRecord(
        episode_id=episode_id,
        seed=seed,
        K=agents,
        scenario=params.scenario,
        R=initial.R,
        success=rollout.delivered,
        V=rollout.value,
        T_del=rollout.delivered_at,
        D_tot=rollout.distance,
        policy=policy.name,
        clipped=rollout.clipped,
        plan=plan.to_dict() if record and plan is not None else None,
        trajectory=rollout.transitions if record else None,
        final_state=rollout.final if record else None,
    )
    logger.debug(
        "Episode %d seed=%d: success=%s V=%.6f T_del=%s D_tot=%.4f clipped=%d",
        episode_id,
        seed,
        episode.success,
        episode.V,
        episode.T_del,
        episode.D_tot,
        episode.clipped,
    )
    return episode


def _run_chunk(
    indices: Sequence[int],
    *,
    spec: PolicySpec,
    master_seed: int,
    agents: int,
    params: ScenarioParams,
    budget: Budget,
    c_time: float,
    record: bool,
) -> list[EpisodeRecord]:
    policy = spec.build(agents, params)
    try:
        return [
            run_episode(
                policy,
                episode_seed(master_seed, i),
                agents,
                params,
                budget,
                c_time,
                episode_id=i,
                record=record,
            )
            for i in indices
        ]
    finally:
        policy.close()


def evaluate(
    spec: PolicySpec,
    n_episodes: int,
    master_seed: int,
    agents: int,
    params: ScenarioParams,
    budget: Budget,
    c_time: float,
    *,
    workers: int = 1,
    record: bool = False,
) -> list[EpisodeRecord]:
    """
    Run ``n_episodes`` seeded episodes for one (scenario, K) cell.

    Episode i uses ``episode_seed(master_seed, i)``. Each worker builds its
    own policy instance; records come back sorted by episode id whatever
    the worker count.

    Raises:
        ConfigError: If ``n_episodes`` or ``c_time`` is out of range.
    """
    if n_episodes < 1:
        raise ConfigError("n_episodes must be >= 1", code="CFG_EPISODES", field="episodes")
    if not c_time > 0:
        raise ConfigError("c_time must be positive", code="CFG_C_TIME", field="c_time")

    logger.info(
        "Evaluating %s on %s with K=%d over %d episode(s)",
        spec.name,
        params.scenario,
        agents,
        n_episodes,
    )
    run = partial(
        _run_chunk,
        spec=spec,
        master_seed=master_seed,
        agents=agents,
        params=params,
        budget=budget,
        c_time=c_time,
        record=record,
    )
    workers = max(1, min(workers, n_episodes))
    if workers > 1:
        chunks = [list(range(w, n_episodes, workers)) for w in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = [r for chunk in pool.map(run, chunks) for r in chunk]
    else:
        records = run(range(n_episodes))

    records.sort(key=lambda r: r.episode_id)
    failures = sum(1 for r in records if r.failure is not None)
    if failures:
        logger.warning("%d of %d episode(s) failed by protocol", failures, n_episodes)
    return records


def compare(frame_a: pd.DataFrame, frame_b: pd.DataFrame) -> pd.DataFrame:
    """
    Pair two results tables episode by episode.

    Returns:
        Frame with the pairing keys and columns V_a, V_b, T_a, T_b, D_a, D_b.

    Raises:
        ComparisonError: If the runs do not cover the same episodes.
    """
    keys_a = frame_a[PAIR_KEYS].reset_index(drop=True)
    keys_b = frame_b[PAIR_KEYS].reset_index(drop=True)
    if len(keys_a) != len(keys_b):
        raise ComparisonError(
            f"Runs have different episode counts ({len(keys_a)} vs {len(keys_b)})",
            code="EVAL_COMPARE_MISMATCH",
            hint="Evaluate both policies with the same --seed, --episodes, --agents and --scenario",
        )
    ordered_a = frame_a.sort_values("episode_id", kind="stable").reset_index(drop=True)
    ordered_b = frame_b.sort_values("episode_id", kind="stable").reset_index(drop=True)
    mismatch = (ordered_a[PAIR_KEYS].astype(str) != ordered_b[PAIR_KEYS].astype(str)).any(axis=1)
    if mismatch.any():
        first = int(mismatch.to_numpy().argmax())
        raise ComparisonError(
            f"Episode {int(ordered_a.loc[first, 'episode_id'])} differs in seed, K or scenario",
            code="EVAL_COMPARE_MISMATCH",
            hint="Evaluate both policies with the same --seed, --episodes, --agents and --scenario",
        )

    paired = ordered_a[PAIR_KEYS].copy()
    paired["V_a"] = ordered_a["V"].to_numpy(dtype=float)
    paired["V_b"] = ordered_b["V"].to_numpy(dtype=float)
    paired["T_a"] = ordered_a["T_del"].astype("Float64").to_numpy(dtype=float, na_value=np.nan)
    paired["T_b"] = ordered_b["T_del"].astype("Float64").to_numpy(dtype=float, na_value=np.nan)
    paired["D_a"] = ordered_a["D_tot"].to_numpy(dtype=float)
    paired["D_b"] = ordered_b["D_tot"].to_numpy(dtype=float)
    return paired
