"""Batch simulation, condition-level aggregation, active-node statistics,
and the wall-clock benchmark harness."""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

from .dynamics import SimulationState, set_stimulus, step
from .dynamics import run as run_trial
from .errors import ConfigError, ParseError
from .fitting import pearson
from .lexicon import Lexicon, LexiconEntry
from .network import Network, Pool, build_network
from .params import Parameters
from .reference import DenseEngine
from .tasks import TaskOutcome, make_monitor

TASKS = ("LD", "NAME", "WT")

STIMULUS_COLUMNS = ("stimulus", "source_lang", "target_lang", "task", "condition", "rt_ms")


@dataclass(frozen=True)
class StimulusRecord:
    stimulus: str
    source_lang: str
    target_lang: str | None = None
    task: str = "LD"
    condition: str | None = None
    rt_ms: float | None = None

    def validate(self, row: int | None = None) -> None:
        where = f" (row {row})" if row is not None else ""
        if not self.stimulus:
            raise ParseError(f"empty stimulus{where}")
        if self.task not in TASKS:
            raise ParseError(f"unknown task {self.task!r}{where}; expected one of {TASKS}")
        if self.rt_ms is not None and not (math.isfinite(self.rt_ms) and self.rt_ms > 0):
            raise ParseError(f"rt_ms must be > 0 when present{where}")


def parse_stimuli(source: str | IO[str] | Iterable[str],
                  default_task: str | None = None,
                  default_source: str | None = None,
                  default_target: str | None = None) -> list[StimulusRecord]:
    """Parse the stimulus CSV (header required, optional columns may be empty).

    Per-row values win over the defaults, which fill empty cells.
    """
    if isinstance(source, str):
        lines: Iterable[str] = source.splitlines()
    elif hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        lines = source
    lines = [ln for ln in lines if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    if reader.fieldnames is None:
        return []
    unknown = set(reader.fieldnames) - set(STIMULUS_COLUMNS)
    if unknown:
        raise ParseError(f"unknown stimulus columns: {sorted(unknown)}")
    records = []
    for row_no, row in enumerate(reader, start=2):
        get = lambda key: (row.get(key) or "").strip()
        rt_raw = get("rt_ms")
        try:
            rt = float(rt_raw) if rt_raw else None
        except ValueError:
            raise ParseError(f"row {row_no}: non-numeric rt_ms {rt_raw!r}") from None
        record = StimulusRecord(
            stimulus=get("stimulus"),
            source_lang=get("source_lang") or (default_source or ""),
            target_lang=get("target_lang") or default_target,
            task=get("task") or (default_task or "LD"),
            condition=get("condition") or None,
            rt_ms=rt,
        )
        record.validate(row_no)
        records.append(record)
    return records


@dataclass
class BatchRow:
    record: StimulusRecord
    outcome: TaskOutcome | None
    error: str | None = None


def run_batch(lexicon: Lexicon | Network, records: Sequence[StimulusRecord],
              params: Parameters | None = None, engine: str = "final",
              jobs: int = 1, dense_max_entries: int | None = None) -> list[BatchRow]:
    """One outcome per stimulus record, in input order.

    Per-row task errors are recorded and the batch continues. Rows are
    independent trials over the shared network, so ``jobs`` only controls
    parallelism; results are deterministic either way.
    """
    network = lexicon if isinstance(lexicon, Network) else build_network(lexicon, params or Parameters())
    params = params or network.params
    if engine == "final":
        runner = lambda stim, monitor: run_trial(network, stim, monitor, params, trace=None)
    elif engine == "dense":
        dense = DenseEngine(network, max_entries=dense_max_entries) \
            if dense_max_entries is not None else DenseEngine(network)
        runner = lambda stim, monitor: dense.run(stim, monitor, params, trace=None)
    else:
        raise ConfigError(f"unknown engine {engine!r}; expected final or dense")

    def one(record: StimulusRecord) -> BatchRow:
        try:
            monitor = make_monitor(record.task, record.source_lang,
                                   record.target_lang, params)
            _trace, outcome = runner(record.stimulus, monitor)
            return BatchRow(record, outcome)
        except (ConfigError, ValueError) as exc:
            return BatchRow(record, None, error=str(exc))

    if jobs <= 1:
        return [one(r) for r in records]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(one, records))


def outcome_rows(rows: Sequence[BatchRow]) -> list[list]:
    """Outcome table in the fixed CSV column order."""
    out = [["stimulus", "task", "source_lang", "target_lang", "response_kind",
            "response_symbol", "cycles", "rt_pred", "n_rejected"]]
    for row in rows:
        r = row.record
        if row.outcome is None:
            out.append([r.stimulus, r.task, r.source_lang, r.target_lang or "",
                        "error", row.error or "", "", "", ""])
            continue
        o = row.outcome
        out.append([r.stimulus, r.task, r.source_lang, r.target_lang or "",
                    o.response_kind, o.response_symbol or "",
                    o.cycles, repr(o.rt_pred), o.n_rejected])
    return out


# -- active-node statistics ------------------------------------------------

STAT_POOLS = (Pool.ORTHO, Pool.PHONO, Pool.SEM)


@dataclass
class GammaStats:
    gamma: float
    # mean active-node counts over stimuli, one dict per cycle
    per_cycle: list[dict[str, float]]

    @property
    def final(self) -> dict[str, float]:
        return self.per_cycle[-1]


def active_node_stats(lexicon: Lexicon | Network, stimuli: Sequence[str],
                      gammas: Sequence[float], params: Parameters | None = None) -> list[GammaStats]:
    """Mean active-set sizes by pool for each inhibition setting.

    Runs every stimulus to max_cycles without early stopping, with OO and PP
    gamma tied to the swept value.
    """
    network = lexicon if isinstance(lexicon, Network) else build_network(lexicon, params or Parameters())
    base = params or network.params
    results = []
    for gamma in gammas:
        if gamma > 0:
            raise ConfigError("inhibition sweep values must be <= 0")
        p = base.updated(OO_gamma=gamma, PP_gamma=gamma)
        sums = [dict.fromkeys([pool.value for pool in STAT_POOLS], 0.0)
                for _ in range(p.max_cycles)]
        for stimulus in stimuli:
            state = SimulationState(network, trace=None)
            set_stimulus(state, network, stimulus)
            for cycle in range(p.max_cycles):
                step(state, network, p)
                for pool in STAT_POOLS:
                    sums[cycle][pool.value] += len(state.active_by_pool[pool])
        n = max(1, len(stimuli))
        per_cycle = []
        for cycle_sums in sums:
            means = {name: total / n for name, total in cycle_sums.items()}
            means["overall"] = math.fsum(means.values())
            per_cycle.append(means)
        results.append(GammaStats(gamma=gamma, per_cycle=per_cycle))
    return results


def stats_rows(stats: Sequence[GammaStats]) -> list[list]:
    out = [["gamma", "cycle", "ortho", "phono", "sem", "overall"]]
    for gs in stats:
        for cycle, means in enumerate(gs.per_cycle, start=1):
            out.append([repr(gs.gamma), cycle, repr(means["ortho"]), repr(means["phono"]),
                        repr(means["sem"]), repr(means["overall"])])
    return out


# -- condition-level aggregation --------------------------------------------

@dataclass
class ConditionReport:
    condition: str
    n_responded: int
    n_timeout: int
    mean_rt: float | None
    mean_cycles: float | None
    pearson_r: float | None


def _safe_pearson(xs: list[float], ys: list[float]) -> float | None:
    if len(xs) < 2:
        return None
    try:
        return pearson(xs, ys)
    except ValueError:
        return None


def _mean(values: list[float]) -> float | None:
    return math.fsum(values) / len(values) if values else None


def condition_report(rows: Sequence[BatchRow]) -> list[ConditionReport]:
    """Per-condition means and correlations, plus overall by-item and
    by-condition rows. Non-responses are excluded pairwise; undefined
    correlations are reported as absent, never as zero."""
    by_condition: dict[str, list[BatchRow]] = {}
    for row in rows:
        by_condition.setdefault(row.record.condition or "", []).append(row)

    reports = []
    condition_means: list[tuple[float, float]] = []
    for condition in sorted(by_condition):
        group = by_condition[condition]
        responded = [r for r in group if r.outcome is not None and r.outcome.responded]
        cycles = [float(r.outcome.cycles) for r in responded]
        rts = [r.record.rt_ms for r in responded if r.record.rt_ms is not None]
        paired = [(float(r.outcome.cycles), r.record.rt_ms)
                  for r in responded if r.record.rt_ms is not None]
        report = ConditionReport(
            condition=condition,
            n_responded=len(responded),
            n_timeout=len(group) - len(responded),
            mean_rt=_mean(rts),
            mean_cycles=_mean(cycles),
            pearson_r=_safe_pearson([c for c, _ in paired], [rt for _, rt in paired]),
        )
        reports.append(report)
        if report.mean_cycles is not None and report.mean_rt is not None:
            condition_means.append((report.mean_cycles, report.mean_rt))

    responded = [r for r in rows if r.outcome is not None and r.outcome.responded]
    paired = [(float(r.outcome.cycles), r.record.rt_ms)
              for r in responded if r.record.rt_ms is not None]
    reports.append(ConditionReport(
        condition="overall_by_item",
        n_responded=len(responded),
        n_timeout=len(rows) - len(responded),
        mean_rt=_mean([rt for _, rt in paired]),
        mean_cycles=_mean([float(r.outcome.cycles) for r in responded]),
        pearson_r=_safe_pearson([c for c, _ in paired], [rt for _, rt in paired]),
    ))
    reports.append(ConditionReport(
        condition="overall_by_condition",
        n_responded=len(condition_means),
        n_timeout=0,
        mean_rt=_mean([rt for _, rt in condition_means]),
        mean_cycles=_mean([c for c, _ in condition_means]),
        pearson_r=_safe_pearson([c for c, _ in condition_means],
                                [rt for _, rt in condition_means]),
    ))
    return reports


def report_rows(reports: Sequence[ConditionReport]) -> list[list]:
    out = [["condition", "n_responded", "n_timeout", "mean_rt", "mean_cycles", "pearson_r"]]
    for r in reports:
        out.append([r.condition, r.n_responded, r.n_timeout,
                    "" if r.mean_rt is None else repr(r.mean_rt),
                    "" if r.mean_cycles is None else repr(r.mean_cycles),
                    "" if r.pearson_r is None else repr(r.pearson_r)])
    return out


# -- benchmark harness -------------------------------------------------------

@dataclass
class BenchmarkResult:
    engine: str
    n_stimuli: int
    repeats: int
    build_seconds: float
    batch_seconds: list[float] = field(default_factory=list)
    null_seconds: float = 0.0
    work_active_updates: int = 0
    work_touched_updates: int = 0

    @property
    def batch_mean(self) -> float:
        return math.fsum(self.batch_seconds) / len(self.batch_seconds)

    @property
    def per_stimulus(self) -> float:
        if self.n_stimuli == 0:
            return 0.0
        return (self.batch_mean - self.null_seconds) / self.n_stimuli

    def rows(self) -> list[list]:
        header = ["engine", "n_stimuli", "repeats", "build_s", "batch_mean_s",
                  "batch_min_s", "batch_max_s", "per_stimulus_s",
                  "work_active_updates", "work_touched_updates"]
        return [header, [self.engine, self.n_stimuli, self.repeats,
                         repr(self.build_seconds), repr(self.batch_mean),
                         repr(min(self.batch_seconds)), repr(max(self.batch_seconds)),
                         repr(self.per_stimulus),
                         self.work_active_updates, self.work_touched_updates]]


def benchmark(lexicon: Lexicon, stimuli: Sequence[str], engine: str = "final",
              params: Parameters | None = None, repeats: int = 3,
              dense_max_entries: int | None = None,
              monitor_task: str | None = None) -> BenchmarkResult:
    """Wall-clock timings for a stimulus batch, model build reported apart.

    Each stimulus runs to max_cycles (no task early-stopping) unless
    ``monitor_task`` asks for a task monitor; the deterministic work
    counters come from the final repeat.
    """
    if repeats < 1:
        raise ConfigError("repeats must be >= 1")
    params = params or Parameters()
    t0 = time.perf_counter()
    network = build_network(lexicon, params)
    if engine == "dense":
        dense = DenseEngine(network, max_entries=dense_max_entries) \
            if dense_max_entries is not None else DenseEngine(network)
    elif engine != "final":
        raise ConfigError(f"unknown engine {engine!r}")
    build_seconds = time.perf_counter() - t0

    from .reference import _dense_step

    def run_once(batch: Sequence[str]) -> tuple[float, int, int]:
        active = touched = 0
        t_start = time.perf_counter()
        for stimulus in batch:
            state = SimulationState(network, trace=None)
            set_stimulus(state, network, stimulus)
            if monitor_task is not None:
                monitor = make_monitor(monitor_task, network.languages[0],
                                       network.languages[1], params)
            else:
                monitor = None
            outcome = None
            while state.cycle < params.max_cycles and outcome is None:
                if engine == "dense":
                    _dense_step(state, dense.dense, params)
                else:
                    step(state, network, params)
                if monitor is not None:
                    outcome = monitor.observe(state, network)
            active += state.counters["active_node_updates"]
            touched += state.counters["touched_updates"]
        return time.perf_counter() - t_start, active, touched

    null_times = []
    batch_times = []
    active = touched = 0
    for _ in range(repeats):
        null_times.append(run_once([])[0])
        seconds, active, touched = run_once(stimuli)
        batch_times.append(seconds)
    return BenchmarkResult(engine=engine, n_stimuli=len(stimuli), repeats=repeats,
                           build_seconds=build_seconds, batch_seconds=batch_times,
                           null_seconds=math.fsum(null_times) / len(null_times),
                           work_active_updates=active, work_touched_updates=touched)


# -- synthetic inputs --------------------------------------------------------

def synthetic_lexicon(n_pairs: int, language_a: str = "NL", language_b: str = "EN") -> Lexicon:
    """Deterministic generated lexicon with dense orthographic neighbourhoods.

    Language-A words are base-5 codes over one alphabet (so many pairs are
    one-letter neighbours); language-B words use a disjoint alphabet.
    """
    def encode(i: int, alphabet: str, length: int = 5) -> str:
        digits = []
        for _ in range(length):
            digits.append(alphabet[i % len(alphabet)])
            i //= len(alphabet)
        return "".join(reversed(digits))

    entries = []
    for i in range(n_pairs):
        freq_a = 1.0 + (i % 97) * 3.7
        freq_b = 0.5 + ((i * 7) % 89) * 2.3
        entries.append(LexiconEntry(
            ortho_a=encode(i, "BDGKL"), freq_a=freq_a,
            phono_a=encode(i, "bdgkl"),
            ortho_b=encode(i, "MNPRT"), freq_b=freq_b,
            phono_b=encode(i, "mnprt")))
    return Lexicon(entries=entries, language_a=language_a, language_b=language_b)
