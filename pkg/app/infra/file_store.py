"""
Serviço de leitura e escrita dos arquivos de padrões, de termos e de DOT.
"""
import logging
import os
from typing import Optional

from config import LOG_FORMAT, LOG_LEVEL

# Configuração de logging
logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT)
logger = logging.getLogger('file_store')


class FileStoreError(Exception):
    """Exceção personalizada para erros de acesso a arquivos."""
    pass


class FileStore:
    """
    Acesso a arquivos de texto em UTF-8, relativo a um diretório base.

    Caminhos absolutos são usados como estão.
    """

    def __init__(self, base_dir: Optional[str] = None):
        """
        Inicializa o serviço.

        Args:
            base_dir: Diretório base dos caminhos relativos (padrão: diretório atual).
        """
        self.base_dir = base_dir or os.getcwd()

    def _resolve(self, path: str) -> str:
        return path if os.path.isabs(path) else os.path.join(self.base_dir, path)

    def exists(self, path: str) -> bool:
        return os.path.isfile(self._resolve(path))

    def read_text(self, path: str) -> str:
        """
        Lê o conteúdo de um arquivo.

        Raises:
            FileStoreError: Se o arquivo não existe ou não pode ser lido.
        """
        full_path = self._resolve(path)
        try:
            with open(full_path, "r", encoding="utf-8") as f:
                content = f.read()
            logger.debug(f"Lido {full_path} ({len(content)} caracteres)")
            return content
        except FileNotFoundError:
            logger.error(f"Arquivo não encontrado: {full_path}")
            raise FileStoreError(f"Arquivo não encontrado: {path}")
        except (OSError, UnicodeDecodeError) as e:
            logger.error(f"Erro ao ler {full_path}: {str(e)}")
            raise FileStoreError(f"Erro ao ler {path}: {str(e)}")

    def write_text(self, path: str, content: str) -> str:
        """
        Grava o conteúdo, criando os diretórios intermediários.

        Returns:
            str: Caminho completo do arquivo gravado.

        Raises:
            FileStoreError: Se o arquivo não pode ser gravado.
        """
        full_path = self._resolve(path)
        try:
            directory = os.path.dirname(full_path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(full_path, "w", encoding="utf-8") as f:
                f.write(content)
            logger.info(f"Arquivo gravado: {full_path}")
            return full_path
        except OSError as e:
            logger.error(f"Erro ao gravar {full_path}: {str(e)}")
            raise FileStoreError(f"Erro ao gravar {path}: {str(e)}")
