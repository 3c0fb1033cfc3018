"""
Funções de seleção usadas pelas construções de APMA, CA e ANPMA.

Uma estratégia recebe os conjuntos de trabalho (posições em workF e pares em
workC), os padrões e partições ainda vivos e o prefixo atual, e devolve um
único elemento de workF ⊎ workC. Empates são sempre resolvidos pela ordem
lexicográfica das posições (e depois dos pares canônicos).
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Optional, Sequence, Tuple

from config import LOG_FORMAT, LOG_LEVEL
from app.models.models import Choice, ConsistencyPartition, Position, PositionPair, format_position
from app.modules.terms import Term, symbol_at

# Configuração de logging
logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT)
logger = logging.getLogger('strategy')


class StrategyError(Exception):
    """Exceção personalizada para erros de estratégia."""
    pass


class StrategyContractError(StrategyError):
    """Exceção para escolhas fora dos conjuntos de trabalho."""
    pass


class ScriptExhaustedError(StrategyError):
    """Exceção para roteiros sem nenhum item aplicável."""
    pass


class UnknownStrategyError(StrategyError):
    """Exceção para nomes de estratégia desconhecidos."""
    pass


@dataclass(frozen=True)
class SelectionContext:
    """Entrada de uma estratégia."""
    work_f: FrozenSet[Position] = frozenset()
    work_c: FrozenSet[PositionPair] = frozenset()
    live_patterns: Tuple[Term, ...] = ()
    live_partitions: Tuple[ConsistencyPartition, ...] = ()
    prefix: Optional[Term] = None


@dataclass(frozen=True)
class Strategy:
    """Função de seleção nomeada."""
    name: str
    choose: Callable[[SelectionContext], Choice]


def select(strategy: Strategy, context: SelectionContext) -> Choice:
    """
    Aplica a estratégia e valida o contrato de pertinência.

    Args:
        strategy: Estratégia a ser aplicada.
        context: Conjuntos de trabalho e estado da construção.

    Returns:
        Choice: Posição de workF ou par de workC.

    Raises:
        StrategyError: Se os dois conjuntos de trabalho estiverem vazios.
        StrategyContractError: Se a escolha não pertence aos conjuntos.
    """
    if not context.work_f and not context.work_c:
        raise StrategyError("Seleção pedida com conjuntos de trabalho vazios")
    choice = strategy.choose(context)
    if isinstance(choice, PositionPair):
        valid = choice in context.work_c
    else:
        valid = choice in context.work_f
    if not valid:
        logger.error(f"Estratégia {strategy.name} escolheu {_describe(choice)} fora do trabalho")
        raise StrategyContractError(
            f"Estratégia {strategy.name} devolveu {_describe(choice)}, que não está em workF ⊎ workC"
        )
    return choice


def _describe(choice: Choice) -> str:
    if isinstance(choice, PositionPair):
        return str(choice)
    return format_position(choice)


def _index_positions(context: SelectionContext) -> Sequence[Position]:
    """Posições em que todo padrão vivo tem um símbolo de função."""
    return [
        p for p in context.work_f
        if all(symbol_at(pattern, p) is not None for pattern in context.live_patterns)
    ]


def _branching(context: SelectionContext, p: Position) -> int:
    symbols = {symbol_at(pattern, p) for pattern in context.live_patterns}
    symbols.discard(None)
    return len(symbols)


def _shrink(context: SelectionContext, pair: PositionPair) -> int:
    """Quantos padrões vivos seriam descartados se o par fosse diferente."""
    return sum(1 for partition in context.live_partitions if partition.contains_pair(pair))


def left_to_right(context: SelectionContext) -> Choice:
    if context.work_f:
        return min(context.work_f)
    return min(context.work_c)


def max_branching(context: SelectionContext) -> Choice:
    if context.work_f:
        return min(context.work_f, key=lambda p: (-_branching(context, p), p))
    return min(context.work_c)


def index_first(context: SelectionContext) -> Choice:
    indexes = _index_positions(context)
    if indexes:
        return min(indexes)
    return left_to_right(context)


def consistency_eager(context: SelectionContext) -> Choice:
    if context.work_c:
        return min(context.work_c)
    return min(context.work_f)


def adaptive(context: SelectionContext) -> Choice:
    """Posições índice, depois o par que mais reduz os padrões vivos, depois a menor posição."""
    indexes = _index_positions(context)
    if indexes:
        return min(indexes)
    if context.work_c:
        return min(context.work_c, key=lambda pair: (-_shrink(context, pair), pair))
    return min(context.work_f)


def scripted(choices: Sequence[Choice], name: str = "scripted") -> Strategy:
    """
    Estratégia de roteiro fixo: devolve o primeiro item do roteiro que está
    disponível no trabalho atual.

    O roteiro é uma lista de preferência, não uma fila: nada é consumido
    durante a construção. A mesma lista é consultada em todos os estados, e
    cada ramo escolhe o item mais cedo que ainda está em workF ⊎ workC. Como
    itens já inspecionados ou resolvidos saem do trabalho, ao longo de um
    caminho o efeito é o de percorrer o roteiro em ordem.

    Args:
        choices: Posições e pares em ordem de preferência.
        name: Nome exibido nos logs.

    Returns:
        Strategy: A estratégia de roteiro.
    """
    items = tuple(c if isinstance(c, PositionPair) else tuple(c) for c in choices)

    def choose(context: SelectionContext) -> Choice:
        for item in items:
            if isinstance(item, PositionPair):
                if item in context.work_c:
                    return item
            elif item in context.work_f:
                return item
        available = sorted(_describe(c) for c in list(context.work_f) + list(context.work_c))
        raise ScriptExhaustedError(
            f"Roteiro {name} não cobre nenhum item disponível: {', '.join(available)}"
        )

    return Strategy(name, choose)


def builtin_strategies() -> Dict[str, Strategy]:
    """
    Catálogo das estratégias embutidas.

    Returns:
        Dict[str, Strategy]: Estratégias por nome (o roteiro fixo é criado
        com scripted()).
    """
    return {
        "default": Strategy("default", adaptive),
        "left-to-right": Strategy("left-to-right", left_to_right),
        "max-branching": Strategy("max-branching", max_branching),
        "index-first": Strategy("index-first", index_first),
        "consistency-eager": Strategy("consistency-eager", consistency_eager),
    }


def get_strategy(name: str, script: Optional[Sequence[Choice]] = None) -> Strategy:
    """
    Busca uma estratégia pelo nome.

    Raises:
        UnknownStrategyError: Para nomes fora do catálogo, ou "scripted" sem roteiro.
    """
    if name == "scripted":
        if not script:
            raise UnknownStrategyError("Estratégia scripted exige um roteiro (cabeçalho script:)")
        return scripted(script)
    catalog = builtin_strategies()
    if name not in catalog:
        raise UnknownStrategyError(
            f"Estratégia desconhecida: {name}. Opções: {', '.join(sorted(catalog))}, scripted"
        )
    return catalog[name]
