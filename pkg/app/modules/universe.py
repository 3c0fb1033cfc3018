"""
Universos finitos de termos fechados usados na verificação contra os oráculos
e na comparação de eficiência.

A profundidade de uma constante é 1. O modo exaustivo enumera todos os termos
até a profundidade máxima em ordem canônica (por profundidade exata, depois
pela ordem dos símbolos e dos argumentos); o modo amostrado sorteia termos com
uma semente fixa.
"""
import itertools
import logging
import random
from typing import Iterable, List, Optional, Sequence

from config import LOG_FORMAT, LOG_LEVEL, UNIVERSE_CAP
from app.models.models import Signature, Symbol
from app.modules.terms import DEFAULT_STORE, Term, TermStore

# Configuração de logging
logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT)
logger = logging.getLogger('universe')


class UniverseError(Exception):
    """Exceção personalizada para erros na construção de universos de termos."""
    pass


class UniverseTooLargeError(UniverseError):
    """Exceção para universos maiores que o limite configurado."""
    pass


def select_symbols(signature: Signature, names: Optional[Iterable[str]] = None) -> List[Symbol]:
    """
    Seleciona um subconjunto da assinatura, preservando a ordem de declaração.

    Raises:
        UniverseError: Para nomes não declarados.
    """
    if names is None:
        return list(signature)
    wanted = [name.strip() for name in names if name.strip()]
    unknown = [name for name in wanted if name not in signature]
    if unknown:
        raise UniverseError(f"Símbolos não declarados: {', '.join(unknown)}")
    return [symbol for symbol in signature if symbol.name in wanted]


def count_ground(symbols: Sequence[Symbol], max_depth: int) -> int:
    """Número de termos fechados de profundidade <= max_depth, sem enumerá-los."""
    total = 0
    for _ in range(max_depth):
        total = sum(total ** symbol.arity for symbol in symbols)
    return total


def enumerate_ground(symbols: Sequence[Symbol], max_depth: int, cap: int = UNIVERSE_CAP,
                     store: Optional[TermStore] = None) -> List[Term]:
    """
    Enumera todos os termos fechados até a profundidade dada.

    Args:
        symbols: Símbolos permitidos.
        max_depth: Profundidade máxima (constantes têm profundidade 1).
        cap: Limite de termos; o tamanho é verificado antes de construir.
        store: Tabela de internação (padrão: DEFAULT_STORE).

    Returns:
        List[Term]: Termos em ordem canônica.

    Raises:
        UniverseTooLargeError: Se o universo tiver mais de `cap` termos.
    """
    size = count_ground(symbols, max_depth)
    if size > cap:
        logger.error(f"Universo com {size} termos excede o limite {cap}")
        raise UniverseTooLargeError(
            f"Universo de profundidade {max_depth} tem {size} termos (limite {cap}); "
            f"use --cap ou --seed"
        )
    store = store or DEFAULT_STORE
    everything: List[Term] = []
    previous_level: List[Term] = []
    for depth in range(1, max_depth + 1):
        fresh = set(previous_level)
        level: List[Term] = []
        for symbol in symbols:
            if symbol.arity == 0:
                if depth == 1:
                    level.append(store.application(symbol))
                continue
            for children in itertools.product(everything, repeat=symbol.arity):
                if any(child in fresh for child in children):
                    level.append(store.application(symbol, children))
        everything.extend(level)
        previous_level = level
    logger.info(f"Universo exaustivo: {len(everything)} termos de profundidade <= {max_depth}")
    return everything


def sample_ground(symbols: Sequence[Symbol], max_depth: int, count: int, seed: int,
                  store: Optional[TermStore] = None) -> List[Term]:
    """
    Sorteia termos fechados de profundidade <= max_depth (com repetição).

    A mesma semente produz sempre a mesma amostra.

    Raises:
        UniverseError: Se não houver constantes entre os símbolos.
    """
    constants = [s for s in symbols if s.arity == 0]
    if not constants:
        raise UniverseError("Não há constantes para construir termos fechados")
    store = store or DEFAULT_STORE
    rng = random.Random(seed)

    def draw(depth: int) -> Term:
        symbol = rng.choice(constants if depth <= 1 else list(symbols))
        return store.application(symbol, [draw(depth - 1) for _ in range(symbol.arity)])

    sample = [draw(max_depth) for _ in range(count)]
    logger.info(f"Universo amostrado: {count} termos (semente {seed})")
    return sample


def build_universe(signature: Signature, max_depth: int, symbols: Optional[Iterable[str]] = None,
                   cap: int = UNIVERSE_CAP, seed: Optional[int] = None,
                   store: Optional[TermStore] = None) -> List[Term]:
    """
    Universo exaustivo ou, com semente, uma amostra de `cap` termos.

    Args:
        signature: Assinatura dos padrões.
        max_depth: Profundidade máxima.
        symbols: Nomes dos símbolos permitidos (padrão: toda a assinatura).
        cap: Limite do modo exaustivo ou tamanho da amostra.
        seed: Semente do modo amostrado.
        store: Tabela de internação.

    Returns:
        List[Term]: Termos do universo.
    """
    if max_depth < 1:
        raise UniverseError(f"Profundidade máxima inválida: {max_depth}")
    chosen = select_symbols(signature, symbols)
    if seed is not None:
        return sample_ground(chosen, max_depth, cap, seed, store)
    return enumerate_ground(chosen, max_depth, cap, store)
