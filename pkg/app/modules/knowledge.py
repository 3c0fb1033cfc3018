"""
Conhecimento de igualdade entre subtermos acumulado ao longo de um caminho.

E guarda os pares comparados como iguais e N os comparados como diferentes.
As consultas derivam fatos adicionais a partir de:

- transitividade de E (union-find) e congruência: se t[p] = t[q] então
  t[p.r] = t[q.r];
- N composto com E: se t[u] != t[v], u ~ p e v ~ q então t[p] != t[q];
- desigualdade de subtermo: um termo nunca é igual a um subtermo próprio;
- o que o prefixo já revelou sobre os subtermos (símbolos conhecidos).
"""
import collections
from typing import Callable, FrozenSet, Generic, Iterable, Set, TypeVar

from app.models.models import Position, PositionPair, is_strict_prefix
from app.modules.terms import Term, TermKind, extend_prefix, subterm_at, walk

T = TypeVar("T")


class DisjointSet(Generic[T]):
    """Union-find com compressão de caminho e união por posto."""

    def __init__(self):
        self.parent = {}
        self.rank = {}

    def make_set(self, e: T) -> None:
        if e in self.parent:
            return
        self.parent[e] = e
        self.rank[e] = 0

    def find(self, e: T) -> T:
        self.make_set(e)
        root = e
        while self.parent[root] != root:
            root = self.parent[root]
        # compressão de caminho
        while self.parent[e] != root:
            self.parent[e], e = root, self.parent[e]
        return root

    def union(self, x: T, y: T) -> None:
        x_root = self.find(x)
        y_root = self.find(y)
        if x_root == y_root:
            return
        if self.rank[x_root] < self.rank[y_root]:
            x_root, y_root = y_root, x_root
        self.parent[y_root] = x_root
        if self.rank[x_root] == self.rank[y_root]:
            self.rank[x_root] += 1

    def __contains__(self, e: T) -> bool:
        return e in self.parent

    def sets(self) -> FrozenSet[FrozenSet[T]]:
        sets = collections.defaultdict(set)
        for e in self.parent:
            sets[self.find(e)].add(e)
        return frozenset(frozenset(s) for s in sets.values())


class EqualityKnowledge:
    """
    Pares conhecidos iguais (E) e diferentes (N), com o fecho derivado.

    Instâncias são imutáveis; assume_equal/assume_unequal devolvem novas.
    """

    def __init__(self, equal: Iterable[PositionPair] = (), unequal: Iterable[PositionPair] = ()):
        self.equal: FrozenSet[PositionPair] = frozenset(equal)
        self.unequal: FrozenSet[PositionPair] = frozenset(unequal)
        self._classes = DisjointSet()
        for pair in sorted(self.equal):
            self._classes.union(pair.first, pair.second)
        self._members = collections.defaultdict(set)
        for cls in self._classes.sets():
            for position in cls:
                self._members[position] = cls
        self._max_length = max((len(p) for pair in self.equal for p in pair), default=0)
        self._cache = {}

    def assume_equal(self, pair: PositionPair) -> "EqualityKnowledge":
        return EqualityKnowledge(self.equal | {pair}, self.unequal)

    def assume_unequal(self, pair: PositionPair) -> "EqualityKnowledge":
        return EqualityKnowledge(self.equal, self.unequal | {pair})

    def equivalents(self, p: Position) -> FrozenSet[Position]:
        """
        Posições cujo subtermo é igual a t[p] em todo termo que satisfaz E.

        Fecha E por transitividade e por congruência (descendentes de
        posições iguais também são iguais).
        """
        p = tuple(p)
        if p in self._cache:
            return self._cache[p]
        bound = len(p) + self._max_length
        result: Set[Position] = {p}
        frontier = [p]
        while frontier:
            x = frontier.pop()
            for cut in range(len(x) + 1):
                head, rest = x[:cut], x[cut:]
                for twin in self._members.get(head, ()):
                    y = twin + rest
                    if len(y) <= bound and y not in result:
                        result.add(y)
                        frontier.append(y)
        self._cache[p] = frozenset(result)
        return self._cache[p]

    def known_equal(self, p: Position, q: Position) -> bool:
        return tuple(q) in self.equivalents(p)

    def known_unequal(self, p: Position, q: Position) -> bool:
        """Desigualdade derivada de N∘E ou da regra de subtermo."""
        left = self.equivalents(p)
        right = self.equivalents(q)
        for pair in self.unequal:
            if (pair.first in left and pair.second in right) or \
                    (pair.second in left and pair.first in right):
                return True
        for u in left:
            for v in right:
                if is_strict_prefix(u, v) or is_strict_prefix(v, u):
                    return True
        return False

    def is_contradictory(self) -> bool:
        """Retorna True se algum par de N é derivável como igual."""
        return any(self.known_equal(pair.first, pair.second) for pair in self.unequal) or \
            any(self.known_unequal(pair.first, pair.second) for pair in self.equal)

    def __repr__(self) -> str:
        equal = ", ".join(str(p) for p in sorted(self.equal))
        unequal = ", ".join(str(p) for p in sorted(self.unequal))
        return f"EqualityKnowledge(E=[{equal}], N=[{unequal}])"


def prefix_forces_equal(prefix: Term, p: Position, q: Position) -> bool:
    """Os dois subtermos já são completamente conhecidos e idênticos."""
    left, right = subterm_at(prefix, p), subterm_at(prefix, q)
    if left is None or right is None or left is not right:
        return False
    return all(sub.is_application for _, sub in walk(left))


def prefix_forces_unequal(prefix: Term, p: Position, q: Position) -> bool:
    """Os subtermos conhecidos têm símbolos diferentes em alguma posição relativa."""
    left, right = subterm_at(prefix, p), subterm_at(prefix, q)
    if left is None or right is None:
        return False
    stack = [(left, right)]
    while stack:
        a, b = stack.pop()
        if not (a.is_application and b.is_application):
            continue
        if a.symbol != b.symbol:
            return True
        stack.extend(zip(a.children, b.children))
    return False


def effective_prefix(prefix: Term, knowledge: EqualityKnowledge,
                     relevant: Callable[[Position], bool]) -> Term:
    """
    Completa o prefixo com os símbolos conhecidos em posições iguais.

    Se t[x] = t[y] e o símbolo em y já foi observado, o mesmo símbolo vale
    em x. Só posições aceitas por `relevant` são preenchidas.

    Args:
        prefix: Prefixo observado no caminho.
        knowledge: Pares iguais/diferentes conhecidos.
        relevant: Filtro das posições que vale a pena completar.

    Returns:
        Term: Prefixo efetivo (igual ao original quando E é vazio).
    """
    if not knowledge.equal:
        return prefix
    current = prefix
    changed = True
    while changed:
        changed = False
        for x, sub in walk(current):
            if sub.kind is not TermKind.POSITION_VARIABLE or not relevant(x):
                continue
            for y in sorted(knowledge.equivalents(x)):
                twin = subterm_at(current, y)
                if y != x and twin is not None and twin.is_application:
                    current = extend_prefix(current, x, twin.symbol)
                    changed = True
                    break
            if changed:
                break
    return current
