"""
Módulo de termos de primeira ordem com compartilhamento máximo.

Todos os termos são criados através de um TermStore (hash-consing), de modo que
dois termos são estruturalmente iguais se e somente se são o mesmo objeto.
Além da construção, o módulo contém as operações sobre posições, o casamento
de padrões, os oráculos ingênuos e o renomeamento de padrões não lineares.
"""
import logging
import threading
from enum import Enum
from typing import Dict, FrozenSet, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from config import LOG_FORMAT, LOG_LEVEL
from app.models.models import (
    ConsistencyPartition, IndexedPattern, Neq, Position, RenamedPattern, Signature, Symbol,
    ancestors, format_position,
)

# Configuração de logging
logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT)
logger = logging.getLogger('terms')


class TermError(Exception):
    """Exceção personalizada para erros de construção e consulta de termos."""
    pass


class ArityMismatchError(TermError):
    """Exceção para aplicações com número errado de argumentos."""
    pass


class UnknownSymbolError(TermError):
    """Exceção para símbolos não declarados em modo estrito."""
    pass


class UndefinedPositionError(TermError):
    """Exceção para posições que não existem no termo."""
    pass


class InvalidPatternError(TermError):
    """Exceção para padrões cuja cabeça não é um símbolo de função."""
    pass


class SentinelMisuseError(TermError):
    """Exceção para o sentinela ≠ fora de um prefixo."""
    pass


class TermKind(Enum):
    VARIABLE = "variable"
    POSITION_VARIABLE = "position-variable"
    APPLICATION = "application"
    NEQ = "neq"


class Term:
    """
    Termo internado. Instâncias só são criadas pelo TermStore.

    A igualdade é a identidade do objeto, o que equivale à igualdade
    estrutural graças ao compartilhamento máximo.
    """
    __slots__ = ("kind", "symbol", "name", "position", "children", "uid", "store")

    def __init__(self, kind: TermKind, uid: int, store: "TermStore",
                 symbol: Optional[Symbol] = None, name: Optional[str] = None,
                 position: Optional[Position] = None, children: Tuple["Term", ...] = ()):
        self.kind = kind
        self.uid = uid
        self.store = store
        self.symbol = symbol
        self.name = name
        self.position = position
        self.children = children

    @property
    def is_variable(self) -> bool:
        """Variáveis comuns e variáveis de posição □_p."""
        return self.kind is TermKind.VARIABLE or self.kind is TermKind.POSITION_VARIABLE

    @property
    def is_application(self) -> bool:
        return self.kind is TermKind.APPLICATION

    @property
    def is_neq(self) -> bool:
        return self.kind is TermKind.NEQ

    def __str__(self) -> str:
        if self.kind is TermKind.VARIABLE:
            return self.name
        if self.kind is TermKind.POSITION_VARIABLE:
            return "□" + format_position(self.position)
        if self.kind is TermKind.NEQ:
            return "≠"
        if not self.children:
            return self.symbol.name
        return f"{self.symbol.name}({', '.join(str(c) for c in self.children)})"

    def __repr__(self) -> str:
        return f"Term({self})"


class TermStore:
    """
    Tabela de internação de termos.

    A deduplicação é atômica: a busca e a inserção acontecem sob o mesmo lock,
    então chamadas concorrentes nunca criam duas cópias do mesmo termo.
    """

    def __init__(self):
        self._table: Dict[tuple, Term] = {}
        self._lock = threading.Lock()

    def _intern(self, key: tuple, **fields) -> Term:
        with self._lock:
            term = self._table.get(key)
            if term is None:
                term = Term(uid=len(self._table), store=self, **fields)
                self._table[key] = term
            return term

    def variable(self, name: str) -> Term:
        return self._intern((TermKind.VARIABLE, name), kind=TermKind.VARIABLE, name=name)

    def position_variable(self, position: Position) -> Term:
        position = tuple(position)
        return self._intern((TermKind.POSITION_VARIABLE, position),
                            kind=TermKind.POSITION_VARIABLE, position=position)

    def neq(self) -> Term:
        return self._intern((TermKind.NEQ,), kind=TermKind.NEQ)

    def application(self, symbol: Symbol, children: Sequence[Term] = ()) -> Term:
        """
        Interna a aplicação symbol(children).

        Args:
            symbol: Símbolo de função.
            children: Argumentos já internados neste store.

        Returns:
            Term: O termo único com esta estrutura.

        Raises:
            ArityMismatchError: Se o número de argumentos difere da aridade.
            TermError: Se algum argumento pertence a outro store.
        """
        children = tuple(children)
        if len(children) != symbol.arity:
            raise ArityMismatchError(
                f"{symbol.name} espera {symbol.arity} argumento(s), recebeu {len(children)}"
            )
        for child in children:
            if child.store is not self:
                raise TermError(f"Argumento {child} pertence a outro TermStore")
        key = (TermKind.APPLICATION, symbol.name, symbol.arity, tuple(c.uid for c in children))
        return self._intern(key, kind=TermKind.APPLICATION, symbol=symbol, children=children)

    def __len__(self) -> int:
        return len(self._table)


DEFAULT_STORE = TermStore()

# Forma de um termo antes da internação: identificador ou (nome, argumentos)
TermShape = Union[str, Term, Tuple[str, Sequence["TermShape"]]]

# Substituição testemunha: variável -> termo
Substitution = Dict[Term, Term]


def intern(signature: Signature, node: TermShape, strict: bool = False,
           store: Optional[TermStore] = None) -> Term:
    """
    Interna a forma de termo dada, respeitando a assinatura.

    Identificadores declarados são símbolos; os demais, usados sem argumentos,
    são variáveis. Em modo não estrito, um nome não declarado aplicado a
    argumentos vira um símbolo com a aridade observada.

    Args:
        signature: Assinatura usada para classificar os identificadores.
        node: Forma do termo (string, Term ou tupla (nome, filhos)).
        strict: Se True, rejeita símbolos não declarados.
        store: Tabela de internação (padrão: DEFAULT_STORE).

    Returns:
        Term: O termo internado.

    Raises:
        ArityMismatchError: Se alguma aplicação não respeita a aridade.
        UnknownSymbolError: Em modo estrito, para símbolos não declarados.
    """
    store = store or DEFAULT_STORE
    if isinstance(node, Term):
        return node
    if isinstance(node, str):
        symbol = signature.lookup(node)
        if symbol is None:
            return store.variable(node)
        return store.application(symbol, ())
    name, children = node
    symbol = signature.lookup(name)
    if symbol is None:
        if strict:
            raise UnknownSymbolError(f"Símbolo não declarado: {name}")
        symbol = Symbol(name, len(children))
    return store.application(symbol, [intern(signature, c, strict, store) for c in children])


def subterm_at(t: Term, p: Position) -> Optional[Term]:
    """
    Retorna t[p], ou None quando a posição não existe em t.

    Args:
        t: Termo consultado.
        p: Posição (índices a partir de 1).

    Returns:
        Optional[Term]: O subtermo na posição, ou None se indefinido.
    """
    current = t
    for index in p:
        if not current.is_application or not 1 <= index <= len(current.children):
            return None
        current = current.children[index - 1]
    return current


def replace_at(t: Term, p: Position, u: Term) -> Term:
    """
    Retorna t[p/u]: t com o subtermo na posição p substituído por u.

    Raises:
        UndefinedPositionError: Se t[p] não estiver definido.
    """
    if not p:
        return u
    if subterm_at(t, p) is None:
        raise UndefinedPositionError(
            f"Posição {format_position(p)} indefinida em {t}"
        )
    index = p[0]
    children = list(t.children)
    children[index - 1] = replace_at(children[index - 1], p[1:], u)
    return t.store.application(t.symbol, children)


def walk(t: Term) -> Iterator[Tuple[Position, Term]]:
    """Percorre todos os pares (posição, subtermo) em pré-ordem."""
    stack: List[Tuple[Position, Term]] = [((), t)]
    while stack:
        position, current = stack.pop()
        yield position, current
        for index in range(len(current.children), 0, -1):
            stack.append((position + (index,), current.children[index - 1]))


def fringe(t: Term) -> FrozenSet[Position]:
    """Conjunto das posições de t que contêm variáveis."""
    return frozenset(p for p, sub in walk(t) if sub.is_variable)


def is_ground(t: Term) -> bool:
    return all(sub.is_application for _, sub in walk(t))


def is_linear(t: Term) -> bool:
    """Retorna True se nenhuma variável ocorre mais de uma vez."""
    seen = set()
    for _, sub in walk(t):
        if sub.is_variable:
            if sub in seen:
                return False
            seen.add(sub)
    return True


def is_position_annotated(t: Term) -> bool:
    """Retorna True se toda variável de t é a variável de posição □_p da sua posição."""
    return all(
        sub.kind is TermKind.POSITION_VARIABLE and sub.position == p
        for p, sub in walk(t) if sub.is_variable
    )


def term_depth(t: Term) -> int:
    """Profundidade do termo; constantes e variáveis têm profundidade 1."""
    return 1 + max((term_depth(c) for c in t.children), default=0)


def symbol_at(t: Term, p: Position) -> Optional[Symbol]:
    """Símbolo de função na posição p, ou None se for variável, ≠ ou indefinido."""
    sub = subterm_at(t, p)
    if sub is None or not sub.is_application:
        return None
    return sub.symbol


def has_variable_at_or_above(t: Term, p: Position) -> bool:
    """Retorna True se t tem uma variável em alguma posição p' ⊑ p."""
    for prefix in ancestors(p):
        sub = subterm_at(t, prefix)
        if sub is None:
            return False
        if sub.is_variable:
            return True
    return False


def extend_prefix(prefix: Term, p: Position, label: Union[Symbol, Neq]) -> Term:
    """
    Substitui □_p no prefixo por symbol(□_p.1, ..., □_p.n) ou pelo sentinela ≠.
    """
    store = prefix.store
    if isinstance(label, Neq):
        return replace_at(prefix, p, store.neq())
    children = [store.position_variable(p + (i,)) for i in range(1, label.arity + 1)]
    return replace_at(prefix, p, store.application(label, children))


def make_pattern(index: Hashable, pattern: Term) -> IndexedPattern:
    """
    Cria um padrão indexado validando a forma f(t1, ..., tn).

    Raises:
        InvalidPatternError: Se a cabeça não for um símbolo de função.
        SentinelMisuseError: Se o padrão contiver o sentinela ≠.
    """
    if not pattern.is_application:
        raise InvalidPatternError(f"Padrão {index} não tem símbolo de função na raiz: {pattern}")
    if any(sub.is_neq for _, sub in walk(pattern)):
        raise SentinelMisuseError(f"Padrão {index} contém o sentinela ≠")
    return IndexedPattern(index, pattern)


def matches(pattern: Term, t: Term) -> Optional[Substitution]:
    """
    Casa o padrão com o termo.

    Args:
        pattern: Padrão (linear ou não).
        t: Termo fechado.

    Returns:
        Optional[Substitution]: Substituição σ com pattern^σ = t, ou None.
    """
    sigma: Substitution = {}
    stack = [(pattern, t)]
    while stack:
        p, u = stack.pop()
        if p.is_neq:
            raise SentinelMisuseError("O sentinela ≠ não pode ocorrer em padrões")
        if p.is_variable:
            bound = sigma.get(p)
            if bound is None:
                sigma[p] = u
            elif bound is not u:
                return None
        elif not u.is_application or u.symbol != p.symbol:
            return None
        else:
            stack.extend(zip(p.children, u.children))
    return sigma


def apply_substitution(t: Term, sigma: Substitution) -> Term:
    """Aplica σ a t."""
    if t.is_variable:
        return sigma.get(t, t)
    if not t.children:
        return t
    return t.store.application(t.symbol, [apply_substitution(c, sigma) for c in t.children])


def match_naive(patterns: Iterable[IndexedPattern], t: Term) -> FrozenSet[Hashable]:
    """Oráculo: índices de todos os padrões que casam com t."""
    return frozenset(p.index for p in patterns if matches(p.pattern, t) is not None)


def equal_modulo_vars(t: Term, u: Term) -> bool:
    """Igualdade módulo variáveis: quaisquer duas variáveis são identificadas."""
    stack = [(t, u)]
    while stack:
        a, b = stack.pop()
        if a.is_variable and b.is_variable:
            continue
        if a.is_neq and b.is_neq:
            continue
        if not (a.is_application and b.is_application) or a.symbol != b.symbol:
            return False
        stack.extend(zip(a.children, b.children))
    return True


def rename(p: IndexedPattern) -> RenamedPattern:
    """
    Renomeia as variáveis do padrão para variáveis de posição.

    Cada ocorrência de variável vira □_q na sua posição q; as posições de uma
    mesma variável original formam uma classe da partição de consistência.

    Args:
        p: Padrão indexado (possivelmente não linear).

    Returns:
        RenamedPattern: Padrão linear anotado, partição e o mesmo índice.
    """
    occurrences: Dict[Term, List[Position]] = {}
    for position, sub in walk(p.pattern):
        if sub.is_variable:
            occurrences.setdefault(sub, []).append(position)
    linear = _annotate(p.pattern, ())
    partition = ConsistencyPartition.of(occurrences.values())
    return RenamedPattern(p.index, linear, partition)


def _annotate(t: Term, position: Position) -> Term:
    if t.is_variable:
        return t.store.position_variable(position)
    if not t.children:
        return t
    return t.store.application(
        t.symbol, [_annotate(c, position + (i,)) for i, c in enumerate(t.children, start=1)]
    )


class ComparisonCounter:
    """Contador de comparações de subtermos."""

    def __init__(self):
        self.count = 0

    def increment(self) -> None:
        self.count += 1


def is_consistent_naive(t: Term, partition: ConsistencyPartition,
                        counter: Optional[ComparisonCounter] = None) -> bool:
    """
    Verifica se t é consistente com a partição.

    Cada classe C custa |C| - 1 comparações (todas contra o primeiro elemento);
    a verificação para na primeira desigualdade.

    Raises:
        UndefinedPositionError: Se alguma posição da partição não existe em t.
    """
    classes = [sorted(cls) for cls in partition.sorted_classes()]
    for cls in classes:
        for q in cls:
            if subterm_at(t, q) is None:
                raise UndefinedPositionError(f"Posição {format_position(q)} indefinida em {t}")
    for cls in classes:
        first = subterm_at(t, cls[0])
        for q in cls[1:]:
            if counter is not None:
                counter.increment()
            if subterm_at(t, q) is not first:
                return False
    return True


def unifies_with_prefix(pattern: Term, prefix: Term) -> bool:
    """
    Verifica se existe um termo casado tanto pelo padrão quanto pelo prefixo.

    Variáveis (de posição ou não) são curingas; ≠ no prefixo conflita com
    qualquer símbolo do padrão naquela posição.
    """
    stack = [(pattern, prefix)]
    while stack:
        p, q = stack.pop()
        if p.is_neq:
            raise SentinelMisuseError("O sentinela ≠ não pode ocorrer em padrões")
        if p.is_variable or q.is_variable:
            continue
        if q.is_neq or p.symbol != q.symbol:
            return False
        stack.extend(zip(p.children, q.children))
    return True
