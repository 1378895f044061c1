"""Task/decision monitors layered on the cycle engine.

Lexical decision and naming are single-threshold monitors. Word translation
is the two-stage procedure: orthographic candidates crossing the input
threshold are scanned, most active first, until one matches the source
language; phonological candidates crossing the output threshold wait in a
shortlist and, upon reaching the criterion, are accepted only when both
their language matches the target and their concept matches the input
node's. Rejection is permanent for the trial.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dynamics import SimulationState, run
from .errors import ConfigError
from .network import Network, Pool
from .params import Parameters


@dataclass
class ShortlistEntry:
    node_id: int
    entry_activation: float
    entry_cycle: int
    status: str = "pending"  # pending | rejected | accepted
    reason: str | None = None
    decided_cycle: int | None = None


class Shortlist:
    """Waiting room of candidate nodes; rejected candidates never re-enter."""

    def __init__(self):
        self.entries: list[ShortlistEntry] = []
        self._index: dict[int, ShortlistEntry] = {}

    def admit(self, node_id: int, activation: float, cycle: int) -> None:
        if node_id not in self._index:
            entry = ShortlistEntry(node_id, activation, cycle)
            self.entries.append(entry)
            self._index[node_id] = entry

    def pending(self) -> list[ShortlistEntry]:
        return [e for e in self.entries if e.status == "pending"]

    def get(self, node_id: int) -> ShortlistEntry | None:
        return self._index.get(node_id)

    @staticmethod
    def reject(entry: ShortlistEntry, reason: str, cycle: int) -> None:
        entry.status = "rejected"
        entry.reason = reason
        entry.decided_cycle = cycle

    @staticmethod
    def accept(entry: ShortlistEntry, cycle: int) -> None:
        entry.status = "accepted"
        entry.decided_cycle = cycle


@dataclass
class Rejection:
    node_id: int
    symbol: str
    language: str | None
    concept: int | None
    reason: str
    cycle: int


@dataclass
class Diagnostics:
    input_node: int | None = None
    input_symbol: str | None = None
    input_cycle: int | None = None
    input_rejections: list[Rejection] = field(default_factory=list)
    output_rejections: list[Rejection] = field(default_factory=list)
    input_shortlist: list[ShortlistEntry] = field(default_factory=list)
    output_shortlist: list[ShortlistEntry] = field(default_factory=list)
    failure: str | None = None


@dataclass
class TaskOutcome:
    task: str
    response_kind: str  # yes | no | symbol | none
    response_symbol: str | None
    cycles: int
    rt_pred: float
    node_id: int | None = None
    diagnostics: Diagnostics = field(default_factory=Diagnostics)

    @property
    def responded(self) -> bool:
        return self.response_kind in ("yes", "symbol")

    @property
    def n_rejected(self) -> int:
        return len(self.diagnostics.output_rejections)


def _rt(cycles: int, params: Parameters) -> float:
    return cycles * params.timestep_multiplier + params.timestep_adder


def _check_language(network: Network, language: str) -> None:
    if language not in network.languages:
        raise ConfigError(f"unknown language tag {language!r}; "
                          f"network has {network.languages}")


def _winner(state: SimulationState, network: Network, pool: Pool,
            language: str, threshold: float) -> int | None:
    """Most active node of the pool/language at or above threshold.

    Ties break toward higher activation, then lower node id.
    """
    act = state.activation
    best: int | None = None
    for node_id in network.pool_ids[pool]:
        if network.nodes[node_id].language != language:
            continue
        a = act[node_id]
        if a >= threshold and (best is None or a > act[best]):
            best = node_id
    return best


class NullMonitor:
    """Never decides; useful for plain trace runs and active-node statistics."""

    task = "NONE"

    def observe(self, state, network):
        return None

    def timeout(self, state, network):
        params = network.params
        return TaskOutcome(task=self.task, response_kind="none", response_symbol=None,
                           cycles=state.cycle, rt_pred=_rt(state.cycle, params))


class LexicalDecisionMonitor:
    task = "LD"

    def __init__(self, target_language: str, params: Parameters):
        self.target_language = target_language
        self.params = params
        self._checked = False

    def observe(self, state, network) -> TaskOutcome | None:
        if not self._checked:
            _check_language(network, self.target_language)
            self._checked = True
        winner = _winner(state, network, Pool.ORTHO, self.target_language,
                         self.params.criterion_value)
        if winner is None:
            return None
        return TaskOutcome(task=self.task, response_kind="yes", response_symbol=None,
                           cycles=state.cycle, rt_pred=_rt(state.cycle, self.params),
                           node_id=winner)

    def timeout(self, state, network) -> TaskOutcome:
        return TaskOutcome(task=self.task, response_kind="no", response_symbol=None,
                           cycles=state.cycle, rt_pred=_rt(state.cycle, self.params))


class NamingMonitor:
    task = "NAME"

    def __init__(self, target_language: str, params: Parameters):
        self.target_language = target_language
        self.params = params
        self._checked = False

    def observe(self, state, network) -> TaskOutcome | None:
        if not self._checked:
            _check_language(network, self.target_language)
            self._checked = True
        winner = _winner(state, network, Pool.PHONO, self.target_language,
                         self.params.criterion_value)
        if winner is None:
            return None
        return TaskOutcome(task=self.task, response_kind="symbol",
                           response_symbol=network.nodes[winner].symbol,
                           cycles=state.cycle, rt_pred=_rt(state.cycle, self.params),
                           node_id=winner)

    def timeout(self, state, network) -> TaskOutcome:
        return TaskOutcome(task=self.task, response_kind="none", response_symbol=None,
                           cycles=state.cycle, rt_pred=_rt(state.cycle, self.params))


class WordTranslationMonitor:
    task = "WT"

    def __init__(self, source_language: str, target_language: str, params: Parameters):
        if source_language == target_language:
            raise ConfigError("word translation requires source != target language")
        self.source_language = source_language
        self.target_language = target_language
        self.params = params
        self.input_list = Shortlist()
        self.output_list = Shortlist()
        self.diagnostics = Diagnostics()
        self._checked = False

    # -- stage 1: fix the input reading ------------------------------------

    def _identify_input(self, state, network) -> None:
        act = state.activation
        threshold = self.params.shortlist_input_threshold
        for o_id in network.pool_ids[Pool.ORTHO]:
            if act[o_id] >= threshold:
                self.input_list.admit(o_id, act[o_id], state.cycle)
        # scan the live list, most activated first, until the source language appears
        ordered = sorted(self.input_list.pending(),
                         key=lambda e: (-act[e.node_id], e.node_id))
        for entry in ordered:
            node = network.nodes[entry.node_id]
            if node.language == self.source_language:
                Shortlist.accept(entry, state.cycle)
                self.diagnostics.input_node = node.id
                self.diagnostics.input_symbol = node.symbol
                self.diagnostics.input_cycle = state.cycle
                return
            Shortlist.reject(entry, "language", state.cycle)
            self.diagnostics.input_rejections.append(Rejection(
                node.id, node.symbol, node.language, node.concept,
                "language", state.cycle))

    # -- stage 2: accept an output candidate -------------------------------

    def _select_output(self, state, network) -> TaskOutcome | None:
        act = state.activation
        for p_id in network.pool_ids[Pool.PHONO]:
            if act[p_id] >= self.params.shortlist_output_threshold:
                self.output_list.admit(p_id, act[p_id], state.cycle)
        if self.diagnostics.input_node is None:
            return None  # semantic check impossible until the input is fixed
        input_concept = network.nodes[self.diagnostics.input_node].concept
        ready = [e for e in self.output_list.pending()
                 if act[e.node_id] >= self.params.criterion_value]
        ready.sort(key=lambda e: (-act[e.node_id], e.node_id))
        for entry in ready:
            node = network.nodes[entry.node_id]
            if node.language != self.target_language:
                reason = "language"
            elif node.concept != input_concept:
                reason = "concept"
            else:
                Shortlist.accept(entry, state.cycle)
                return TaskOutcome(
                    task=self.task, response_kind="symbol",
                    response_symbol=node.symbol, cycles=state.cycle,
                    rt_pred=_rt(state.cycle, self.params), node_id=node.id,
                    diagnostics=self._finish_diagnostics())
            Shortlist.reject(entry, reason, state.cycle)
            self.diagnostics.output_rejections.append(Rejection(
                node.id, node.symbol, node.language, node.concept,
                reason, state.cycle))
        return None

    def _finish_diagnostics(self) -> Diagnostics:
        self.diagnostics.input_shortlist = self.input_list.entries
        self.diagnostics.output_shortlist = self.output_list.entries
        return self.diagnostics

    def observe(self, state, network) -> TaskOutcome | None:
        if not self._checked:
            _check_language(network, self.source_language)
            _check_language(network, self.target_language)
            self._checked = True
        if self.diagnostics.input_node is None:
            self._identify_input(state, network)
        return self._select_output(state, network)

    def timeout(self, state, network) -> TaskOutcome:
        diagnostics = self._finish_diagnostics()
        diagnostics.failure = ("no_input_identified" if diagnostics.input_node is None
                               else "no_output_accepted")
        return TaskOutcome(task=self.task, response_kind="none", response_symbol=None,
                           cycles=state.cycle, rt_pred=_rt(state.cycle, self.params),
                           diagnostics=diagnostics)


def make_monitor(task: str, source_language: str | None, target_language: str | None,
                 params: Parameters):
    """Monitor factory used by batch runs; one fresh monitor per trial."""
    if task == "LD":
        if not source_language:
            raise ConfigError("LD requires a source language")
        return LexicalDecisionMonitor(source_language, params)
    if task == "NAME":
        language = target_language or source_language
        if not language:
            raise ConfigError("NAME requires a language")
        return NamingMonitor(language, params)
    if task == "WT":
        if not source_language or not target_language:
            raise ConfigError("WT requires source and target languages")
        return WordTranslationMonitor(source_language, target_language, params)
    raise ConfigError(f"unknown task {task!r}; expected LD, NAME, or WT")


def lexical_decision(network: Network, stimulus: str, target_language: str,
                     params: Parameters | None = None) -> TaskOutcome:
    params = params or network.params
    _check_language(network, target_language)
    monitor = LexicalDecisionMonitor(target_language, params)
    _trace, outcome = run(network, stimulus, monitor, params)
    return outcome


def naming(network: Network, stimulus: str, target_language: str,
           params: Parameters | None = None) -> TaskOutcome:
    params = params or network.params
    _check_language(network, target_language)
    monitor = NamingMonitor(target_language, params)
    _trace, outcome = run(network, stimulus, monitor, params)
    return outcome


def word_translation(network: Network, stimulus: str, source_language: str,
                     target_language: str, params: Parameters | None = None) -> TaskOutcome:
    params = params or network.params
    _check_language(network, source_language)
    _check_language(network, target_language)
    monitor = WordTranslationMonitor(source_language, target_language, params)
    _trace, outcome = run(network, stimulus, monitor, params)
    return outcome
