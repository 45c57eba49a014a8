"""
協調問題の規模を変えた統合テスト

n = 10^2 から 10^4 まで、規範に従う提携を含む例題の検査時間を計測する。
"""
import sys
import os
import time
import unittest
import logging

# プロジェクトルートへのパスを追加
current_dir = os.path.dirname(os.path.abspath(__file__))
project_root = os.path.dirname(os.path.dirname(current_dir))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from src.cli.main import run_bench
from src.data_manager.coordination_family import START_STATE, coordination_model, coordination_scenarios
from src.formula.parser import parse_for_model
from src.profiles.profile_sets import clear_cache, profile_set_size
from src.semantics.model_checker import NchatlModelChecker

TIME_LIMIT_SECONDS = 10.0


class TestCoordinationScaling(unittest.TestCase):
    """協調問題のスケーリングテストクラス"""

    @classmethod
    def setUpClass(cls):
        """テストクラスの初期化"""
        logging.basicConfig(level=logging.INFO)
        cls.logger = logging.getLogger(__name__)

    def setUp(self):
        """各テストケースの前処理"""
        clear_cache()

    def _time_single_norm(self, n):
        model = coordination_model(n)
        scenario = next(s for s in coordination_scenarios(n) if s.label == 'single_norm')
        checker = NchatlModelChecker(model, scenario.norm)
        formula = parse_for_model(scenario.formula, model)
        started = time.perf_counter()
        verdict = checker.check_at(START_STATE, formula, scenario.compliance)
        elapsed = time.perf_counter() - started
        self.logger.info(f"n={n}: {elapsed * 1000:.1f} ms")
        return verdict, elapsed

    def test_single_norm_at_ten_thousand_agents(self):
        """n = 10^4 でも制限時間内に真と判定されること"""
        verdict, elapsed = self._time_single_norm(10_000)
        self.assertTrue(verdict)
        self.assertLess(elapsed, TIME_LIMIT_SECONDS)

    def test_growth_is_polynomial(self):
        """n を 100 倍にしても時間の伸びが 10^4 倍未満であること"""
        _, small = self._time_single_norm(100)
        _, large = self._time_single_norm(10_000)
        # 小さい側は計測の揺れが大きいので下限を設ける
        self.assertLess(large / max(small, 1e-3), 10_000)

    def test_doubling_n_grows_time_polynomially(self):
        """n を 2 倍にしたときの時間の比が 50 未満であること"""
        _, half = self._time_single_norm(5_000)
        _, full = self._time_single_norm(10_000)
        self.assertLess(full / max(half, 1e-3), 50)

    def test_profile_set_size_is_linear_with_two_actions(self):
        """行動2つではプロファイル集合の大きさは n + 1"""
        for n in (100, 1_000, 10_000):
            self.assertEqual(profile_set_size(coordination_model(n), START_STATE, n), n + 1)

    def test_bench_verdicts_match_expected(self):
        """計測表の判定がすべて期待どおりであること"""
        table = run_bench([100, 1_000])
        self.assertEqual(len(table), 10)
        self.assertTrue((table['verdict'] == table['expected']).all())


if __name__ == '__main__':
    unittest.main()
