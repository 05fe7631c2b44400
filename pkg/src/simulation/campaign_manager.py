import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence

import numpy as np

from models import CampaignConfig, GenerationTrace, SimStats
from src.codec import DecoderState, Encoder, Generation, generate_coding_vector
from src.exceptions import EncodingError, SimulationCapError
from src.field.factory import FieldFactory
from .tsnc import DensityAdvisor, default_ladder, tsnc_next_density

logger = logging.getLogger(__name__)


class CampaignManager:
    """Runs independent generations over a lossy link and aggregates their statistics"""

    def __init__(self, config: CampaignConfig, advisor: Optional[DensityAdvisor] = None):
        self.config = config.validate()
        self.field = FieldFactory.create_field(config.q)
        self.ladder = tuple(sorted(config.ladder)) if config.ladder else default_ladder(config.k)
        self.advisor = advisor or DensityAdvisor(config.k, config.q)

    def choose_density(self, r: int, c: int) -> int:
        if self.config.policy == 'fixed':
            return self.config.w
        return tsnc_next_density(self.advisor, r, c, self.ladder, self.config.tsnc_threshold)

    def run_generation(self, rng: np.random.Generator) -> GenerationTrace:
        """Transmit until the decoder reaches rank k"""
        cfg = self.config
        k = cfg.k
        state = DecoderState(k, self.field)
        encoder = None
        if cfg.payload_length > 0:
            generation = Generation.random(k, cfg.payload_length, self.field, rng)
            encoder = Encoder(generation, self.field, rng)

        cap = cfg.max_transmissions_factor * k
        total = 0
        rank_transmissions = [0] * k
        densities = [0] * k
        visited = []
        op_count_at_rank = []
        while state.rank < k:
            if total >= cap:
                raise SimulationCapError(
                    f"generation not decoded after {cap} transmissions (k={k}, rank={state.rank})"
                )
            r = state.rank
            w = self.choose_density(r, state.c)
            densities[r] = w
            if encoder is not None:
                vector, payload = encoder.next_packet(w)
            else:
                vector, payload = generate_coding_vector(k, w, self.field, rng), None
            total += 1
            rank_transmissions[r] += 1
            if cfg.loss_rate and rng.random() < cfg.loss_rate:
                continue
            outcome = state.ingest(vector, payload)
            if outcome.innovative:
                visited.append((outcome.rank_after, outcome.covered_after))
                op_count_at_rank.append(state.op_count)

        if encoder is not None:
            recovered = state.decode()
            if any(not np.array_equal(a, b) for a, b in zip(recovered, encoder.generation.packets)):
                raise EncodingError("decoded payloads differ from the source generation")

        return GenerationTrace(
            total_transmissions=total,
            rank_transmissions=rank_transmissions,
            visited=visited,
            op_count=state.op_count,
            op_count_at_rank=op_count_at_rank,
            densities=densities,
        )

    def run_runs(self, seeds: Sequence[np.random.SeedSequence]) -> List[GenerationTrace]:
        return [self.run_generation(np.random.default_rng(s)) for s in seeds]

    def run_campaign(self) -> SimStats:
        cfg = self.config
        seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.runs)
        logger.info("Running %d generations (k=%d, policy=%s, w=%s, q=%d, loss=%.3f)",
                    cfg.runs, cfg.k, cfg.policy, cfg.w, cfg.q, cfg.loss_rate)
        if cfg.threads > 1 and cfg.runs > 1:
            chunks = [list(chunk) for chunk in np.array_split(np.arange(cfg.runs), cfg.threads) if len(chunk)]
            tasks = [(cfg.to_dict(), [seeds[i] for i in chunk], self.advisor) for chunk in chunks]
            with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
                traces = [t for part in pool.map(_run_chunk, tasks) for t in part]
        else:
            traces = self.run_runs(seeds)
        return self.aggregate(traces)

    def aggregate(self, traces: List[GenerationTrace]) -> SimStats:
        cfg = self.config
        k = cfg.k
        runs = len(traces)
        totals = np.array([t.total_transmissions for t in traces], dtype=float)
        mean = math.fsum(totals) / runs
        stddev = float(np.std(totals, ddof=1)) if runs > 1 else 0.0

        xi_curve = []
        for eps in range(cfg.epsilon_max + 1):
            n = k + eps
            xi_curve.append((eps, n, float(np.count_nonzero(totals <= n)) / runs))

        spent = np.sum([t.rank_transmissions for t in traces], axis=0)
        delta_curve = [(r, runs / float(spent[r])) for r in range(1, k)]
        ops = np.array([t.op_count_at_rank for t in traces], dtype=float)
        op_count_curve = [(r, math.fsum(ops[:, r - 1]) / runs) for r in range(1, k + 1)]
        dens = np.array([t.densities for t in traces], dtype=float)
        density_curve = [(r, math.fsum(dens[:, r]) / runs) for r in range(k)]

        config = cfg.to_dict()
        config['ladder'] = list(self.ladder) if cfg.policy == 'tsnc' else None
        return SimStats(
            runs=runs,
            mean=mean,
            stddev=stddev,
            stderr=stddev / math.sqrt(runs),
            mean_op_count=math.fsum(t.op_count for t in traces) / runs,
            xi_curve=xi_curve,
            delta_curve=delta_curve,
            op_count_curve=op_count_curve,
            density_curve=density_curve,
            config=config,
        )


def _run_chunk(task):
    config_data, seeds, advisor = task
    data = dict(config_data)
    if data.get('ladder') is not None:
        data['ladder'] = tuple(data['ladder'])
    data['threads'] = 1
    return CampaignManager(CampaignConfig(**data), advisor).run_runs(seeds)


def run_generation(config: CampaignConfig, rng: np.random.Generator) -> GenerationTrace:
    return CampaignManager(config).run_generation(rng)


def run_campaign(config: CampaignConfig) -> SimStats:
    return CampaignManager(config).run_campaign()
