"""
Formatos textuais: assinaturas, termos, padrões rotulados, arquivos de padrões
e exportação de autômatos em DOT.

Formato de um arquivo de padrões:

    # comentário
    sym f/3
    sym a/0
    script: e, 2, 1, 3
    l1: f(a, b, x)

Identificadores não declarados usados sem argumentos são variáveis. Posições
são escritas como índices separados por ponto; a raiz é "e".
"""
import logging
import re
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from config import LOG_FORMAT, LOG_LEVEL, POSITION_ROOT_LABEL
from app.models.automata import Automaton, StateKind
from app.models.models import Choice, IndexedPattern, Position, PositionPair, Signature
from app.modules.terms import DEFAULT_STORE, Term, TermShape, TermStore, intern, make_pattern

# Configuração de logging
logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT)
logger = logging.getLogger('textio')


class TextIOError(Exception):
    """Exceção personalizada para erros de leitura dos formatos textuais."""
    pass


class ParseError(TextIOError):
    """Exceção para erros de sintaxe; a mensagem indica linha e coluna."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        if line:
            message = f"linha {line}, coluna {column}: {message}"
        super().__init__(message)


class DuplicateLabelError(TextIOError):
    """Exceção para rótulos de padrão repetidos."""
    pass


class SymbolAsVariableError(TextIOError):
    """Exceção para símbolos de aridade positiva usados sem argumentos."""
    pass


IDENTIFIER = re.compile(r"[A-Za-z0-9_']+")
SYM_LINE = re.compile(r"^sym\s+(?P<name>\S+?)\s*/\s*(?P<arity>\S+)$")
LABEL_LINE = re.compile(r"^(?P<label>[^\s:]+)\s*:\s*(?P<body>.*)$")
SCRIPT_ITEM = re.compile(r"\{[^}]*\}|[^\s,]+")


@dataclass
class PatternFile:
    """Conteúdo de um arquivo de padrões."""
    signature: Signature
    patterns: List[IndexedPattern] = field(default_factory=list)
    script: Optional[List[Choice]] = None


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _lines(text: str) -> Iterator[Tuple[int, str]]:
    """Linhas não vazias, sem comentários, com o número da linha (a partir de 1)."""
    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if line:
            yield number, line


def _declare(signature: Signature, line: str, number: int) -> None:
    match = SYM_LINE.match(line)
    if not match:
        raise ParseError(f"declaração inválida: {line!r} (esperado 'sym nome/aridade')", number, 1)
    name, arity = match.group("name"), match.group("arity")
    if not IDENTIFIER.fullmatch(name):
        raise ParseError(f"nome de símbolo inválido: {name!r}", number, line.index(name) + 1)
    if not arity.isdigit():
        raise ParseError(f"aridade inválida para {name}: {arity!r}", number, line.rindex(arity) + 1)
    signature.declare(name, int(arity))


def parse_signature(text: str) -> Signature:
    """
    Lê declarações `sym f/3`, uma por linha.

    Args:
        text: Texto com declarações, comentários (#) e linhas em branco.

    Returns:
        Signature: Assinatura na ordem de declaração.

    Raises:
        ParseError: Para linhas que não são declarações ou aridades malformadas.
        DuplicateSymbolError: Para símbolos declarados duas vezes.
    """
    signature = Signature()
    for number, line in _lines(text):
        _declare(signature, line, number)
    logger.debug(f"Assinatura lida com {len(signature)} símbolo(s)")
    return signature


class _TermParser:
    """Analisador descendente recursivo para a sintaxe prefixa f(a, g(x))."""

    def __init__(self, text: str, line: int = 0):
        self.text = text
        self.line = line
        self.pos = 0

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.pos + 1)

    def skip_spaces(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_spaces()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def identifier(self) -> str:
        self.skip_spaces()
        match = IDENTIFIER.match(self.text, self.pos)
        if not match:
            found = self.peek() or "fim da entrada"
            raise self.error(f"esperado identificador, encontrado '{found}'")
        self.pos = match.end()
        return match.group(0)

    def term(self) -> TermShape:
        name = self.identifier()
        if self.peek() != "(":
            return name
        self.pos += 1
        children = []
        if self.peek() == ")":
            self.pos += 1
            return name, children
        while True:
            children.append(self.term())
            if self.peek() == ",":
                self.pos += 1
                continue
            if self.peek() == ")":
                self.pos += 1
                return name, children
            if not self.peek():
                raise self.error("parêntese não fechado")
            raise self.error(f"esperado ',' ou ')', encontrado '{self.peek()}'")

    def parse(self) -> TermShape:
        shape = self.term()
        if self.peek():
            if self.peek() == ")":
                raise self.error("parêntese fechado sem abertura")
            raise self.error(f"texto extra após o termo: '{self.text[self.pos:].strip()}'")
        return shape


def _check_bare_symbols(signature: Signature, shape: TermShape) -> None:
    stack = [shape]
    while stack:
        node = stack.pop()
        if isinstance(node, str):
            symbol = signature.lookup(node)
            if symbol is not None and symbol.arity > 0:
                raise SymbolAsVariableError(
                    f"Símbolo {node}/{symbol.arity} usado sem argumentos (não pode ser variável)"
                )
            continue
        stack.extend(node[1])


def parse_term(signature: Signature, text: str, store: Optional[TermStore] = None,
               line: int = 0) -> Term:
    """
    Lê um termo na sintaxe prefixa e o interna.

    Args:
        signature: Assinatura que classifica os identificadores.
        text: Texto do termo, por exemplo "f(a, g(x))".
        store: Tabela de internação (padrão: DEFAULT_STORE).
        line: Número da linha, usado apenas nas mensagens de erro.

    Returns:
        Term: O termo internado.

    Raises:
        ParseError: Para erros de sintaxe (incluindo parênteses desbalanceados).
        SymbolAsVariableError: Se um símbolo declarado de aridade > 0 aparece sozinho.
        ArityMismatchError: Se uma aplicação não respeita a aridade declarada.
        UnknownSymbolError: Se um nome não declarado é aplicado a argumentos.
    """
    shape = _TermParser(text, line).parse()
    _check_bare_symbols(signature, shape)
    return intern(signature, shape, strict=True, store=store or DEFAULT_STORE)


def print_term(t: Term) -> str:
    """Escreve o termo na mesma sintaxe aceita por parse_term."""
    return str(t)


def parse_patterns(signature: Signature, text: str,
                   store: Optional[TermStore] = None) -> List[IndexedPattern]:
    """
    Lê linhas `rótulo: termo`; os rótulos viram os índices dos padrões.

    Returns:
        List[IndexedPattern]: Padrões na ordem do texto.

    Raises:
        ParseError: Para linhas sem rótulo ou termos malformados.
        DuplicateLabelError: Para rótulos repetidos.
        InvalidPatternError: Para padrões cuja cabeça é uma variável.
    """
    return _parse_labelled(signature, list(_lines(text)), store)


def _parse_labelled(signature: Signature, lines: List[Tuple[int, str]],
                    store: Optional[TermStore]) -> List[IndexedPattern]:
    patterns: List[IndexedPattern] = []
    seen: Dict[str, int] = {}
    for number, line in lines:
        match = LABEL_LINE.match(line)
        if not match:
            raise ParseError(f"esperado 'rótulo: termo', encontrado {line!r}", number, 1)
        label = match.group("label")
        if label in seen:
            logger.error(f"Rótulo {label} repetido nas linhas {seen[label]} e {number}")
            raise DuplicateLabelError(f"Rótulo {label} repetido (linhas {seen[label]} e {number})")
        seen[label] = number
        term = parse_term(signature, match.group("body"), store, number)
        patterns.append(make_pattern(label, term))
    return patterns


def parse_terms(signature: Signature, text: str, store: Optional[TermStore] = None) -> List[Term]:
    """Lê um termo por linha (comentários com # e linhas em branco são ignorados)."""
    return [parse_term(signature, line, store, number) for number, line in _lines(text)]


def parse_position(text: str) -> Position:
    """
    Lê uma posição: "e" para a raiz ou índices positivos separados por ponto.

    Raises:
        ParseError: Para posições malformadas.
    """
    text = text.strip()
    if text == POSITION_ROOT_LABEL:
        return ()
    parts = text.split(".")
    if not all(part.isdigit() and int(part) > 0 for part in parts):
        raise ParseError(f"posição inválida: {text!r}")
    return tuple(int(part) for part in parts)


def parse_script(text: str) -> List[Choice]:
    """
    Lê o roteiro de uma estratégia fixa: posições e pares {p,q} separados por vírgula.

    Raises:
        ParseError: Para itens malformados.
    """
    script: List[Choice] = []
    for item in SCRIPT_ITEM.findall(text):
        if item.startswith("{"):
            inner = [part for part in item[1:-1].split(",") if part.strip()]
            if len(inner) != 2:
                raise ParseError(f"par inválido no roteiro: {item}")
            p, q = (parse_position(part) for part in inner)
            if p == q:
                raise ParseError(f"par com posições iguais no roteiro: {item}")
            script.append(PositionPair.of(p, q))
        else:
            script.append(parse_position(item))
    return script


def parse_pattern_file(text: str, store: Optional[TermStore] = None) -> PatternFile:
    """
    Lê um arquivo de padrões completo.

    As declarações `sym` podem aparecer em qualquer ordem em relação aos
    padrões; o cabeçalho opcional `script:` define o roteiro da estratégia
    fixa.

    Args:
        text: Conteúdo do arquivo.
        store: Tabela de internação dos padrões.

    Returns:
        PatternFile: Assinatura, padrões e roteiro.
    """
    signature = Signature()
    script = None
    labelled = []
    for number, line in _lines(text):
        if line.startswith("sym ") or line == "sym":
            _declare(signature, line, number)
            continue
        match = LABEL_LINE.match(line)
        if match and match.group("label") == "script":
            if script is not None:
                raise ParseError("cabeçalho script: repetido", number, 1)
            script = parse_script(match.group("body"))
            continue
        labelled.append((number, line))
    patterns = _parse_labelled(signature, labelled, store)
    logger.info(f"Arquivo de padrões lido: {len(signature)} símbolo(s), {len(patterns)} padrão(ões)")
    return PatternFile(signature, patterns, script)


def _gvquote(s: str) -> str:
    return '"{}"'.format(s.replace("\\", "\\\\").replace('"', r'\"'))


def export_dot(automaton: Automaton) -> str:
    """
    Exporta o autômato em DOT.

    Estados de casamento e finais são caixas (finais com cantos arredondados);
    estados de consistência são elipses. Os identificadores dos nós são os
    identificadores dos estados, emitidos em profundidade a partir da raiz.

    Args:
        automaton: APMA, CA ou ANPMA.

    Returns:
        str: Texto DOT, idêntico para a mesma entrada.
    """
    lines = [f"digraph {automaton.kind_name} {{"]
    order = list(automaton.walk())
    for state_id in order:
        state = automaton.state(state_id)
        if state.kind is StateKind.CONSISTENCY:
            attrs = "shape=ellipse"
        elif state.kind is StateKind.FINAL:
            attrs = "shape=box, style=rounded"
        else:
            attrs = "shape=box"
        lines.append(f"  {state_id} [{attrs}, label={_gvquote(state.describe())}];")
    for state_id in order:
        for label, target in automaton.edges(state_id).items():
            lines.append(f"  {state_id} -> {target} [label={_gvquote(str(label))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
