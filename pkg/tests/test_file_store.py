"""
Testes do FileStore.
"""
import os

import pytest

from app.infra.file_store import FileStore, FileStoreError


def test_write_and_read(tmp_path):
    """Testa a gravação com criação de diretórios e a leitura relativa ao diretório base."""
    store = FileStore(str(tmp_path))
    full_path = store.write_text("dot/out.dot", "digraph anpma {\n}\n")
    assert full_path == os.path.join(str(tmp_path), "dot", "out.dot")
    assert store.exists("dot/out.dot")
    assert store.read_text("dot/out.dot") == "digraph anpma {\n}\n"
    assert store.read_text(full_path) == "digraph anpma {\n}\n"


def test_missing_file(tmp_path):
    """Testa o erro para arquivos inexistentes."""
    store = FileStore(str(tmp_path))
    assert not store.exists("nada.pat")
    with pytest.raises(FileStoreError, match="Arquivo não encontrado"):
        store.read_text("nada.pat")


def test_write_failure(tmp_path, mocker):
    """Testa que falhas do sistema de arquivos viram FileStoreError."""
    mocker.patch("builtins.open", side_effect=PermissionError("acesso negado"))
    store = FileStore(str(tmp_path))
    with pytest.raises(FileStoreError, match="Erro ao gravar"):
        store.write_text("out.dot", "digraph {}")


def test_undecodable_file(tmp_path):
    """Testa arquivos que não estão em UTF-8."""
    (tmp_path / "latin.pat").write_bytes("sym ação/0".encode("latin-1"))
    with pytest.raises(FileStoreError, match="Erro ao ler"):
        FileStore(str(tmp_path)).read_text("latin.pat")
