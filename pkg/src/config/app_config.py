"""
アプリケーション全体の設定を管理するモジュール
"""
import os
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from dotenv import load_dotenv

# .envファイルから環境変数を読み込む
load_dotenv()

DEFAULT_CONFIG_PATH = Path(__file__).parent.parent.parent / 'config' / 'checker_config.yaml'


class AppConfig:
    """アプリケーション設定を管理するクラス"""

    def __init__(self, config_path: Optional[str] = None, init_logging: bool = True):
        """
        アプリケーション設定の初期化

        Args:
            config_path: YAML設定ファイルのパス（省略時は NCHATL_CONFIG または既定値）
            init_logging: ロギングを初期化するかどうか
        """
        self.config_path = Path(config_path or os.getenv('NCHATL_CONFIG', str(DEFAULT_CONFIG_PATH)))

        # ログレベルの設定
        self.log_level = os.getenv('LOG_LEVEL', 'INFO').upper()
        self.debug_mode = os.getenv('APP_DEBUG', 'False').lower() == 'true'

        settings = self._load_settings()
        self.exhaustive_check_threshold = int(os.getenv(
            'NCHATL_EXHAUSTIVE_THRESHOLD',
            settings.get('validation', {}).get('exhaustive_check_threshold', 10_000)))
        self.enforce_chunk_size = int(settings.get('semantics', {}).get('enforce_chunk_size', 1_000_000))

        oracle = settings.get('oracle', {})
        self.expand_budget = int(os.getenv('NCHATL_EXPAND_BUDGET', oracle.get('expand_budget', 1_000_000)))
        self.oracle_instances = int(oracle.get('instances', 500))
        self.oracle_seed = int(os.getenv('NCHATL_SEED', oracle.get('seed', 2024)))

        bench = settings.get('bench', {})
        self.bench_sizes: List[int] = [int(n) for n in bench.get('sizes', [100, 1000, 10_000])]
        self.bench_repetitions = int(bench.get('repetitions', 1))

        if init_logging:
            self._initialize_logging()

    def _load_settings(self) -> Dict[str, Any]:
        """YAML設定ファイルを読み込む（存在しない場合は既定値を使う）"""
        if not self.config_path.exists():
            return {}
        with open(self.config_path, 'r', encoding='utf-8') as f:
            return yaml.safe_load(f) or {}

    def _initialize_logging(self):
        """ロギングの初期化（標準出力は結果表示に使うため標準エラーに出力）"""
        level = logging.DEBUG if self.debug_mode else getattr(logging, self.log_level, logging.INFO)
        logging.basicConfig(
            level=level,
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )
