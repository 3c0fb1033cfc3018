"""
Módulo com os comandos da CLI: compilar, avaliar, verificar contra os
oráculos e comparar a eficiência com a linha de base em duas fases.

Cada comando imprime a saída em linhas UTF-8 e devolve o código de saída.
"""
import json
import logging
from concurrent.futures import Executor, ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

from config import (
    AUTOMATON_KINDS, CHECK_WORKERS, DEFAULT_KIND, DEFAULT_MAX_DEPTH, DEFAULT_PRUNING,
    DEFAULT_STRATEGY, LOG_FORMAT, LOG_LEVEL, NO_MATCH_LABEL, PRUNING_LEVELS, UNIVERSE_CAP,
)
from app.infra.file_store import FileStore
from app.models.automata import Automaton, StateKind
from app.models.models import ConsistencyPartition, EvalTrace, IndexedPattern, RunReport, TermReport
from app.modules.anpma import Dominance, compare_efficiency, construct_anpma, two_phase_baseline
from app.modules.apma import check_well_formed, construct_apma, evaluate
from app.modules.ca import construct_ca, remove_redundant
from app.modules.strategy import get_strategy
from app.modules.terms import (
    Term, TermStore, UndefinedPositionError, is_consistent_naive, is_ground, is_linear,
    match_naive, rename, subterm_at,
)
from app.modules.textio import PatternFile, export_dot, parse_pattern_file, parse_terms, print_term
from app.modules.universe import build_universe

# Configuração de logging
logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT)
logger = logging.getLogger('cli')


class CliError(Exception):
    """Exceção personalizada para erros dos comandos da CLI."""
    pass


class NonGroundTermError(CliError):
    """Exceção para termos de entrada com variáveis."""
    pass


Oracle = Callable[[Term], Optional[FrozenSet[Hashable]]]


@dataclass
class Configuration:
    """Um autômato a verificar e o oráculo que define o resultado esperado."""
    name: str
    automaton: Automaton
    oracle: Oracle


@dataclass
class Counterexample:
    """Termo em que um autômato discorda do oráculo."""
    configuration: str
    term: Term
    expected: FrozenSet[Hashable]
    actual: FrozenSet[Hashable]

    def __str__(self) -> str:
        return (
            f"{self.configuration}: {print_term(self.term)}: "
            f"esperado {format_result(self.expected)}, obtido {format_result(self.actual)}"
        )


def format_result(result: Iterable[Hashable]) -> str:
    """Rótulos ordenados separados por espaço, ou "(none)" para o conjunto vazio."""
    labels = sorted(str(index) for index in result)
    return " ".join(labels) if labels else NO_MATCH_LABEL


def load_pattern_file(path: str, file_store: Optional[FileStore] = None,
                      store: Optional[TermStore] = None) -> PatternFile:
    """Lê e interpreta um arquivo de padrões."""
    file_store = file_store or FileStore()
    return parse_pattern_file(file_store.read_text(path), store)


def _check_choice(name: str, value: str, allowed: Sequence[str]) -> None:
    if value not in allowed:
        raise CliError(f"{name} inválido: {value}. Opções: {', '.join(allowed)}")


def partitions_of(patterns: Iterable[IndexedPattern]) -> List[Tuple[Hashable, ConsistencyPartition]]:
    """Partições de consistência indexadas, na ordem dos padrões."""
    return [(r.index, r.partition) for r in (rename(p) for p in patterns)]


def build_automaton(pattern_file: PatternFile, kind: str = DEFAULT_KIND,
                    strategy: str = DEFAULT_STRATEGY, pruning: str = DEFAULT_PRUNING,
                    nonredundant: Optional[bool] = None) -> Automaton:
    """
    Constrói o autômato pedido para os padrões do arquivo.

    Para apma, a poda não se aplica (nonredundant é falso salvo pedido
    explícito). Para ca, as partições vêm do renomeamento dos padrões e, com
    poda diferente de none, os estados redundantes são removidos.

    Raises:
        CliError: Para tipos ou níveis de poda desconhecidos.
        NonLinearPatternError: Para kind=apma com padrões não lineares.
    """
    _check_choice("Tipo de autômato", kind, AUTOMATON_KINDS)
    _check_choice("Nível de poda", pruning, PRUNING_LEVELS)
    selected = get_strategy(strategy, pattern_file.script)
    if kind == "apma":
        return construct_apma(pattern_file.patterns, selected, nonredundant=bool(nonredundant),
                              signature=pattern_file.signature)
    if kind == "ca":
        ca = construct_ca(partitions_of(pattern_file.patterns), selected)
        return ca if pruning == "none" else remove_redundant(ca)
    return construct_anpma(pattern_file.patterns, selected, pruning, nonredundant,
                           signature=pattern_file.signature)


@contextmanager
def _executor(workers: int) -> Iterator[Optional[Executor]]:
    if workers <= 1:
        yield None
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        yield pool


def _map(executor: Optional[Executor], fn: Callable, items: Sequence) -> List:
    if executor is None:
        return [fn(item) for item in items]
    return list(executor.map(fn, items))


def cmd_compile(pattern_path: str, kind: str = DEFAULT_KIND, strategy: str = DEFAULT_STRATEGY,
                pruning: str = DEFAULT_PRUNING, dot_path: Optional[str] = None,
                nonredundant: Optional[bool] = None,
                file_store: Optional[FileStore] = None) -> int:
    """
    Compila o arquivo de padrões e imprime o tamanho do autômato.

    Args:
        pattern_path: Caminho do arquivo de padrões.
        kind: apma, ca ou anpma.
        strategy: Nome da estratégia ("scripted" usa o cabeçalho script:).
        pruning: none, basic ou aggressive.
        dot_path: Se dado, grava o DOT do autômato nesse caminho.
        nonredundant: Força (ou desliga) a restrição de trabalho sem estados redundantes.
        file_store: Serviço de arquivos.

    Returns:
        int: Código de saída (0).
    """
    file_store = file_store or FileStore()
    pattern_file = load_pattern_file(pattern_path, file_store)
    automaton = build_automaton(pattern_file, kind, strategy, pruning, nonredundant)
    print(f"kind: {automaton.kind_name}")
    print(f"states: {automaton.state_count}")
    print(f"breadth: {automaton.breadth}")
    print(f"max depth: {automaton.max_depth}")
    if automaton.count(StateKind.CONSISTENCY):
        print(f"consistency states: {automaton.count(StateKind.CONSISTENCY)}")
    if dot_path:
        file_store.write_text(dot_path, export_dot(automaton))
        print(f"dot: {dot_path}")
    return 0


def _format_steps(automaton: Automaton, trace: EvalTrace) -> List[str]:
    lines = []
    for step in trace.steps:
        state = automaton.state(step.state)
        action = f" -> {step.action}" if step.action is not None else ""
        lines.append(f"{step.state} {state.describe()}{action}")
    return lines


def term_report(automaton: Automaton, t: Term) -> TermReport:
    """Avalia o autômato sobre t e resume o traço."""
    result, trace = evaluate(automaton, t)
    return TermReport(
        term=print_term(t),
        result=sorted(str(index) for index in result),
        trace_length=trace.length,
        comparisons=trace.comparisons,
        inspections=trace.inspections,
        steps=_format_steps(automaton, trace),
    )


def cmd_match(pattern_path: str, terms_path: str, kind: str = DEFAULT_KIND,
              strategy: str = DEFAULT_STRATEGY, pruning: str = DEFAULT_PRUNING,
              trace: bool = False, as_json: bool = False,
              file_store: Optional[FileStore] = None) -> int:
    """
    Avalia o autômato sobre cada termo do arquivo de termos.

    Imprime uma linha por termo com os rótulos casados e o comprimento do
    traço; com trace=True, também a sequência de estados e ações.

    Raises:
        NonGroundTermError: Se algum termo de entrada tiver variáveis.
        CliError: Se um CA compara uma posição que não existe no termo.
    """
    file_store = file_store or FileStore()
    pattern_file = load_pattern_file(pattern_path, file_store)
    terms = parse_terms(pattern_file.signature, file_store.read_text(terms_path))
    for t in terms:
        if not is_ground(t):
            logger.error(f"Termo de entrada com variáveis: {t}")
            raise NonGroundTermError(f"O termo {print_term(t)} não é fechado")
    automaton = build_automaton(pattern_file, kind, strategy, pruning)
    report = RunReport(automaton.kind_name, automaton.state_count, automaton.breadth,
                       automaton.max_depth)
    for t in terms:
        try:
            report.terms.append(term_report(automaton, t))
        except UndefinedPositionError as e:
            raise CliError(f"Erro ao avaliar {print_term(t)}: {str(e)}")

    if as_json:
        print(json.dumps(report.to_dict(), ensure_ascii=False, indent=2))
        return 0
    for item in report.terms:
        print(f"{item.term}: {format_result(item.result)} (trace {item.trace_length})")
        if trace:
            for line in item.steps:
                print(f"  {line}")
    return 0


def _ca_oracle(partitions: Sequence[Tuple[Hashable, ConsistencyPartition]]) -> Oracle:
    """Partições consistentes com t, ou None se alguma posição não existe em t."""
    positions = set()
    for _, partition in partitions:
        positions |= partition.positions()

    def oracle(t: Term) -> Optional[FrozenSet[Hashable]]:
        if any(subterm_at(t, p) is None for p in positions):
            return None
        return frozenset(i for i, partition in partitions if is_consistent_naive(t, partition))

    return oracle


def check_configurations(pattern_file: PatternFile, strategies: Sequence[str],
                         prunings: Sequence[str]) -> List[Configuration]:
    """
    Autômatos verificados por cmd_check.

    Para cada estratégia: um ANPMA por nível de poda, um APMA (literal e sem
    estados redundantes) para o subconjunto linear, e um CA (literal e sem
    estados redundantes) para as partições.
    """
    patterns = pattern_file.patterns
    signature = pattern_file.signature
    linear = [p for p in patterns if is_linear(p.pattern)]
    partitions = partitions_of(patterns)
    anpma_oracle = lambda t: match_naive(patterns, t)
    apma_oracle = lambda t: match_naive(linear, t)
    ca_oracle = _ca_oracle(partitions)

    configurations = []
    for name in strategies:
        strategy = get_strategy(name, pattern_file.script)
        for pruning in prunings:
            _check_choice("Nível de poda", pruning, PRUNING_LEVELS)
            configurations.append(Configuration(
                f"anpma/{name}/{pruning}",
                construct_anpma(patterns, strategy, pruning, signature=signature),
                anpma_oracle,
            ))
        if linear:
            for nonredundant in (False, True):
                suffix = "nonredundant" if nonredundant else "literal"
                configurations.append(Configuration(
                    f"apma/{name}/{suffix}",
                    construct_apma(linear, strategy, nonredundant, signature=signature),
                    apma_oracle,
                ))
        if any(partition.pairs() for _, partition in partitions):
            ca = construct_ca(partitions, strategy)
            configurations.append(Configuration(f"ca/{name}/literal", ca, ca_oracle))
            configurations.append(Configuration(f"ca/{name}/pruned", remove_redundant(ca), ca_oracle))
    return configurations


def find_counterexample(configuration: Configuration, universe: Sequence[Term],
                        executor: Optional[Executor] = None) -> Optional[Counterexample]:
    """
    Primeiro termo do universo (na ordem do universo) em que o autômato
    discorda do oráculo.
    """
    def check(t: Term) -> Optional[Counterexample]:
        expected = configuration.oracle(t)
        if expected is None:
            return None
        actual, _ = evaluate(configuration.automaton, t)
        if actual != expected:
            return Counterexample(configuration.name, t, expected, actual)
        return None

    for outcome in _map(executor, check, universe):
        if outcome is not None:
            return outcome
    return None


def cmd_check(pattern_path: str, strategies: Sequence[str] = (DEFAULT_STRATEGY,),
              prunings: Sequence[str] = PRUNING_LEVELS, max_depth: int = DEFAULT_MAX_DEPTH,
              symbols: Optional[Sequence[str]] = None, cap: int = UNIVERSE_CAP,
              seed: Optional[int] = None, workers: int = CHECK_WORKERS,
              file_store: Optional[FileStore] = None) -> int:
    """
    Verifica cada configuração de autômato contra os oráculos ingênuos.

    Returns:
        int: 0 se todas as configurações passam; 1 no primeiro contraexemplo
        ou violação de boa formação.

    Raises:
        UniverseTooLargeError: Se o universo exceder o limite.
    """
    pattern_file = load_pattern_file(pattern_path, file_store)
    universe = build_universe(pattern_file.signature, max_depth, symbols, cap, seed)
    configurations = check_configurations(pattern_file, strategies, prunings)
    with _executor(workers) as executor:
        for configuration in configurations:
            violations = check_well_formed(configuration.automaton)
            if violations:
                print(f"malformed: {configuration.name}: {violations[0]}")
                return 1
            counterexample = find_counterexample(configuration, universe, executor)
            if counterexample is not None:
                logger.error(f"Contraexemplo encontrado: {counterexample}")
                print(f"counterexample: {counterexample}")
                return 1
            logger.info(f"{configuration.name}: {len(universe)} termos verificados")
    print(f"pass: {len(configurations)} configurações, {len(universe)} termos")
    return 0


@dataclass
class _Bucket:
    terms: int = 0
    baseline_total: int = 0
    baseline_max: int = 0
    pruned_total: int = 0
    pruned_max: int = 0

    def add(self, baseline: int, pruned: int) -> None:
        self.terms += 1
        self.baseline_total += baseline
        self.baseline_max = max(self.baseline_max, baseline)
        self.pruned_total += pruned
        self.pruned_max = max(self.pruned_max, pruned)


VERDICTS = {
    Dominance.M1_DOMINATES: "pruned dominates baseline",
    Dominance.M2_DOMINATES: "baseline dominates pruned",
    Dominance.EQUAL: "equal",
    Dominance.INCOMPARABLE: "incomparable",
}


def bench_buckets(baseline: Automaton, pruned: Automaton, patterns: Sequence[IndexedPattern],
                  universe: Sequence[Term],
                  executor: Optional[Executor] = None) -> Dict[str, _Bucket]:
    """Estatísticas dos traços agrupadas pelo conjunto de padrões casados."""
    def lengths(t: Term) -> Tuple[str, int, int]:
        _, baseline_trace = evaluate(baseline, t)
        _, pruned_trace = evaluate(pruned, t)
        return format_result(match_naive(patterns, t)), baseline_trace.length, pruned_trace.length

    buckets: Dict[str, _Bucket] = {}
    for key, baseline_length, pruned_length in _map(executor, lengths, universe):
        buckets.setdefault(key, _Bucket()).add(baseline_length, pruned_length)
    return buckets


def cmd_bench(pattern_path: str, strategy: str = DEFAULT_STRATEGY, pruning: str = DEFAULT_PRUNING,
              max_depth: int = DEFAULT_MAX_DEPTH, symbols: Optional[Sequence[str]] = None,
              cap: int = UNIVERSE_CAP, seed: Optional[int] = None, workers: int = CHECK_WORKERS,
              file_store: Optional[FileStore] = None) -> int:
    """
    Compara o ANPMA em duas fases com o ANPMA intercalado e podado.

    Imprime, por grupo de termos (conjunto casado), a média e o máximo dos
    traços das duas configurações, os tamanhos dos autômatos e o veredito
    de dominância com um termo testemunha.

    Raises:
        CorrectnessViolationError: Se os dois autômatos discordam em algum termo.
    """
    pattern_file = load_pattern_file(pattern_path, file_store)
    universe = build_universe(pattern_file.signature, max_depth, symbols, cap, seed)
    baseline = two_phase_baseline(pattern_file.patterns, pattern_file.signature)
    _check_choice("Nível de poda", pruning, PRUNING_LEVELS)
    pruned = construct_anpma(pattern_file.patterns, get_strategy(strategy, pattern_file.script),
                             pruning, signature=pattern_file.signature)
    with _executor(workers) as executor:
        buckets = bench_buckets(baseline, pruned, pattern_file.patterns, universe, executor)
    verdict = compare_efficiency(pruned, baseline, universe)

    print(f"{'bucket':<20} {'terms':>6} {'base mean':>10} {'base max':>9} "
          f"{'pruned mean':>12} {'pruned max':>11}")
    for key in sorted(buckets):
        b = buckets[key]
        print(f"{key:<20} {b.terms:>6} {b.baseline_total / b.terms:>10.2f} {b.baseline_max:>9} "
              f"{b.pruned_total / b.terms:>12.2f} {b.pruned_max:>11}")
    print(f"states: baseline {baseline.state_count}, pruned {pruned.state_count}")
    print(f"breadth: baseline {baseline.breadth}, pruned {pruned.breadth}")
    print(f"max depth: baseline {baseline.max_depth}, pruned {pruned.max_depth}")
    witness = f" (witness: {print_term(verdict.witnesses[0])})" if verdict.witnesses else ""
    print(f"verdict: {VERDICTS[verdict.kind]}{witness}")
    return 0
