# Monte-Carlo experiment orchestration: paired sweeps over K or R_T across
# strategy combinations, aggregation, and CSV emission.
from __future__ import annotations

import zlib
from dataclasses import dataclass, field

import numpy as np

from . import allocation, metrics, twopath
from .chain import run_chain
from .config import ConfigError, NetworkConfig
from .geometry import draw_channels, place_network
from .linalg import complex_normal

PATH_MODES = ("sp", "tp")
COMPRESSIONS = ("eiu", "scnm", "wsinm", "infinite")

CSV_HEADER = "sweep,path_mode,allocation,compression,mean_sum_se,stderr,trials,seed"


class ExperimentError(RuntimeError):
    pass


@dataclass(frozen=True)
class Strategy:
    path_mode: str
    allocation: str
    compression: str

    def __post_init__(self):
        if self.path_mode not in PATH_MODES:
            raise ConfigError(f"unknown path mode {self.path_mode!r}")
        if self.allocation not in allocation.SCHEMES:
            raise ConfigError(f"unknown allocation scheme {self.allocation!r}")
        if self.compression not in COMPRESSIONS:
            raise ConfigError(f"unknown compression strategy {self.compression!r}")

    @classmethod
    def parse(cls, text: str) -> "Strategy":
        """Parse 'sp-ef-wsinm' style triples."""
        parts = text.strip().lower().split("-")
        if len(parts) != 3:
            raise ConfigError(f"strategy must be path-allocation-compression, got {text!r}")
        return cls(*parts)

    def label(self) -> str:
        return f"{self.path_mode}-{self.allocation}-{self.compression}"


@dataclass(frozen=True)
class ExperimentSpec:
    base: NetworkConfig
    sweep: str                 # "users" | "rate"
    values: tuple
    strategies: tuple
    trials: int
    seed: int

    def __post_init__(self):
        if self.sweep not in ("users", "rate"):
            raise ConfigError(f"sweep axis must be 'users' or 'rate', got {self.sweep!r}")
        if not self.values:
            raise ConfigError("sweep values must be non-empty")
        if not self.strategies:
            raise ConfigError("strategy list must be non-empty")
        if self.trials < 1:
            raise ConfigError("trials must be positive")


@dataclass
class ResultRow:
    sweep_value: float
    strategy: Strategy
    mean_sum_se: float
    stderr: float
    trials: int
    seed: int
    per_trial: np.ndarray = field(default=None, repr=False)  # not emitted to CSV


def _strategy_rng(seed: int, trial: int, strategy: Strategy) -> np.random.Generator:
    sid = zlib.crc32(strategy.label().encode())
    return np.random.default_rng(np.random.SeedSequence((seed, trial, sid)))


def _rates_for(strategy: Strategy, R_T: float, L_chain: int) -> np.ndarray:
    if strategy.compression == "infinite":
        return np.full(L_chain, np.inf)
    return allocation.schedule(strategy.allocation, R_T, L_chain).rates


def simulate_trial(cfg: NetworkConfig, strategy: Strategy, H: list, y: list,
                   rng: np.random.Generator) -> float:
    """Sum SE of one strategy on one realized drop."""
    if strategy.path_mode == "sp":
        rates = _rates_for(strategy, cfg.R_T, cfg.L)
        st = run_chain(cfg.p, cfg.sigma2, H, y, strategy.compression, rates, rng)
        sinr = metrics.sinr_chain(H, st.V, st.A, st.Qhist[:-1], st.Qhist[-1],
                                  cfg.p, cfg.sigma2)
    else:
        idx1, idx2 = twopath.split_paths(cfg.L)
        summaries = []
        for idx in (idx1, idx2):
            budget = allocation.path_budget(cfg.R_T, cfg.L, len(idx))
            rates = _rates_for(strategy, budget, len(idx))
            Hr = [H[i] for i in idx]
            yr = [y[i] for i in idx]
            st = run_chain(cfg.p, cfg.sigma2, Hr, yr, strategy.compression, rates, rng)
            summaries.append(twopath.summarize_path(st, Hr, cfg.sigma2))
        fused = twopath.fuse(summaries[0], summaries[1], cfg.p)
        sinr = twopath.sinr_fused(fused, cfg.p)
    return metrics.se_from_sinr(sinr, cfg.tau_u, cfg.tau_c).sum_se


def _draw_drop(cfg: NetworkConfig, rng: np.random.Generator):
    layout = place_network(cfg, rng)
    chans = draw_channels(cfg, layout, rng)
    s = np.sqrt(cfg.p) * complex_normal(rng, cfg.K)
    y = []
    for Hl in chans.H:
        n = np.sqrt(cfg.sigma2) * complex_normal(rng, cfg.N)
        y.append(Hl @ s + n)
    return chans.H, y


def run_experiment(spec: ExperimentSpec, max_failure_frac: float = 0.01) -> list:
    """Run all (sweep point x strategy) cells with paired per-trial drops.

    Within a trial every strategy sees the same layout, channels and thermal
    noise; only the compression / allocation pipeline differs. Solver
    failures are tolerated up to max_failure_frac of trials per cell.
    """
    rows = []
    for val in spec.values:
        if spec.sweep == "users":
            cfg = spec.base.replace(K=int(val))
        else:
            cfg = spec.base.replace(R_T=float(val))
        sums = {s: np.full(spec.trials, np.nan) for s in spec.strategies}
        failures = {s: 0 for s in spec.strategies}
        for t in range(spec.trials):
            rng = np.random.default_rng(np.random.SeedSequence((spec.seed, t)))
            H, y = _draw_drop(cfg, rng)
            for strat in spec.strategies:
                try:
                    sums[strat][t] = simulate_trial(
                        cfg, strat, H, y, _strategy_rng(spec.seed, t, strat))
                except Exception:
                    failures[strat] += 1
        for strat in spec.strategies:
            nfail = failures[strat]
            if nfail > max_failure_frac * spec.trials:
                raise ExperimentError(
                    f"{nfail}/{spec.trials} trials failed for {strat.label()} "
                    f"at sweep value {val}")
            vals = sums[strat][~np.isnan(sums[strat])]
            stderr = float(vals.std(ddof=1) / np.sqrt(len(vals))) if len(vals) > 1 else 0.0
            rows.append(ResultRow(sweep_value=float(val), strategy=strat,
                                  mean_sum_se=float(vals.mean()), stderr=stderr,
                                  trials=len(vals), seed=spec.seed,
                                  per_trial=sums[strat]))
    return rows


def emit_csv(rows: list, path: str) -> None:
    """Write result rows as UTF-8 CSV with LF line endings, 17 sig digits."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(CSV_HEADER + "\n")
        for r in rows:
            f.write(",".join([
                f"{r.sweep_value:.17g}",
                r.strategy.path_mode,
                r.strategy.allocation,
                r.strategy.compression,
                f"{r.mean_sum_se:.17g}",
                f"{r.stderr:.17g}",
                str(r.trials),
                str(r.seed),
            ]) + "\n")


def parse_csv(path: str) -> list:
    """Round-trip reader for the CSV emitted above."""
    rows = []
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().strip()
        if header != CSV_HEADER:
            raise ExperimentError(f"unexpected CSV header {header!r}")
        for line in f:
            sweep, pm, alloc, compr, mean, err, trials, seed = line.strip().split(",")
            rows.append(ResultRow(sweep_value=float(sweep),
                                  strategy=Strategy(pm, alloc, compr),
                                  mean_sum_se=float(mean), stderr=float(err),
                                  trials=int(trials), seed=int(seed)))
    return rows
