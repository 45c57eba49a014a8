"""
NCHATL モデル検査器のコマンドライン

    python -m src.cli.main check --model M.json [--norm N.json] --formula "..." [--state q0]
    python -m src.cli.main validate --model M.json [--norm N.json]
    python -m src.cli.main expand (--model M.json | --n 3) [--output OUT.json]
    python -m src.cli.main oracle [--seed 2024] [--instances 500]
    python -m src.cli.main bench [--n 100,1000,10000]

終了コード: 0 正常/真, 1 問い合わせ状態で偽, 2 解析エラー, 3 検証エラー, 4 予算超過
"""
import argparse
import json
import logging
import os
import sys
import time
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

# プロジェクトルートへのパスを追加
project_root = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from src.config.app_config import AppConfig
from src.data_manager.coordination_family import START_STATE, coordination_model, coordination_scenarios
from src.data_manager.model_loader import load_model, load_norm, load_queries, save_json
from src.formula.parser import parse_for_model
from src.formula.printer import print_formula
from src.models.coalition import format_coalition, parse_coalition_spec
from src.models.errors import BudgetExceededError, NchatlError
from src.models.normative_system import NormativeSystem
from src.models.rcgs_model import Rcgs1Model
from src.models.validation import ValidationReport, validate_model, validate_norm
from src.oracle.explicit_cgs import expand, explicit_to_dict
from src.oracle.suite import run_oracle_suite
from src.profiles.profile_sets import LegalRule, clear_cache, profile_set_size
from src.semantics.model_checker import NchatlModelChecker

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_PARSE_ERROR = 2
EXIT_VALIDATION_ERROR = 3
EXIT_BUDGET = 4


class ValidationFailed(Exception):
    """入力モデル・規範体系が検証を通らなかった"""

    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__(f"{len(report.violations)} validation violation(s)")


def _emit(args: argparse.Namespace, text: str, document: Any) -> None:
    if args.format == 'structured':
        print(json.dumps(document, ensure_ascii=False, indent=2))
    else:
        print(text)


def _parse_sizes(text: Optional[str]) -> List[int]:
    if not text:
        return []
    try:
        return [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid agent counts: {text!r}") from None


def _load_inputs(args: argparse.Namespace, config: AppConfig) -> tuple:
    """モデルと規範体系を読み込み、検証に失敗したら ValidationFailed を送出する"""
    model = load_model(args.model)
    norm = load_norm(args.norm) if args.norm else NormativeSystem.empty()
    report = validate_model(model, config.exhaustive_check_threshold)
    if report.ok:
        report.extend(validate_norm(model, norm))
    if not report.ok:
        raise ValidationFailed(report)
    return model, norm


def _family_model(args: argparse.Namespace) -> Rcgs1Model:
    if args.model:
        return load_model(args.model)
    sizes = _parse_sizes(args.n)
    if len(sizes) != 1:
        raise argparse.ArgumentTypeError("specify --model or a single --n")
    return coordination_model(sizes[0])


# --- サブコマンド ---

def cmd_check(args: argparse.Namespace, config: AppConfig) -> int:
    """式が成り立つ状態を表示する（--state があればその状態での真偽も）"""
    model, norm = _load_inputs(args, config)
    compliance = parse_coalition_spec(args.comply, model.agent_count)
    if args.formula:
        texts = [args.formula]
    elif args.queries:
        texts = load_queries(args.queries)
    else:
        raise argparse.ArgumentTypeError("specify --formula or --queries")
    if args.state is not None:
        model.state_id(args.state)

    checker = NchatlModelChecker(model, norm, chunk_size=config.enforce_chunk_size)
    results: List[Dict[str, Any]] = []
    for text in texts:
        formula = parse_for_model(text, model)
        started = time.perf_counter()
        states = checker.mcheck(formula, compliance)
        elapsed = (time.perf_counter() - started) * 1000
        verdict = None if args.state is None else args.state in states
        logger.info(f"検査が完了しました: {text}（{elapsed:.1f} ms, {len(states)} 状態）")
        results.append({
            'formula': print_formula(formula),
            'compliance': format_coalition(compliance),
            'states': states.to_list(),
            'verdict': verdict,
            'wall_time_ms': round(elapsed, 3),
        })

    lines = []
    for result in results:
        lines.append(f"formula: {result['formula']}")
        lines.append(f"compliance: {result['compliance']}")
        lines.append(f"states: {', '.join(result['states'])}")
        if result['verdict'] is not None:
            lines.append(f"{args.state}: {'true' if result['verdict'] else 'false'}")
    document = results[0] if len(results) == 1 else {'results': results}
    _emit(args, '\n'.join(lines), document)
    return EXIT_FALSE if any(r['verdict'] is False for r in results) else EXIT_OK


def cmd_validate(args: argparse.Namespace, config: AppConfig) -> int:
    """モデル（と規範体系）を検証して違反を一覧表示する"""
    model = load_model(args.model)
    report = validate_model(model, config.exhaustive_check_threshold)
    if args.norm and report.ok:
        report.extend(validate_norm(model, load_norm(args.norm)))
    text = 'OK' if report.ok else '\n'.join(f"{v.kind}: {v.message}" for v in report.violations)
    _emit(args, text, report.to_dict())
    return EXIT_OK if report.ok else EXIT_VALIDATION_ERROR


def cmd_expand(args: argparse.Namespace, config: AppConfig) -> int:
    """明示的な並行ゲーム構造を JSON 文書として出力する"""
    model = _family_model(args)
    budget = args.budget if args.budget is not None else config.expand_budget
    document = explicit_to_dict(expand(model, budget))
    if args.output:
        save_json(document, args.output)
        print(f"wrote {args.output}")
    else:
        print(json.dumps(document, ensure_ascii=False, indent=2))
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace, config: AppConfig) -> int:
    """乱数インスタンスで高速な経路と総当たりを照合する"""
    rule = LegalRule.LITERAL if args.literal_legalfor else LegalRule.PROSE
    report = run_oracle_suite(
        instances=args.instances if args.instances is not None else config.oracle_instances,
        seed=args.seed if args.seed is not None else config.oracle_seed,
        budget=args.budget if args.budget is not None else config.expand_budget,
        legal_rule=rule,
    )
    lines = [report.summary()]
    for name, checked in report.checked.items():
        lines.append(f"  {name}: {report.passed[name]}/{checked}")
    if not report.ok:
        lines.append('counterexample:')
        lines.append(json.dumps(report.to_dict()['counterexample'], ensure_ascii=False, indent=2))
    _emit(args, '\n'.join(lines), report.to_dict())
    return EXIT_OK if report.ok else EXIT_FALSE


def run_bench(sizes: Sequence[int], repetitions: int = 1, chunk_size: int = 1_000_000) -> pd.DataFrame:
    """
    協調問題の例題を n ごとに検査して時間を測る

    Returns:
        pd.DataFrame: n, scenario, formula, profile_set_size, verdict, expected, wall_time_ms
    """
    rows = []
    for n in sizes:
        model = coordination_model(n)
        for scenario in coordination_scenarios(n):
            formula = parse_for_model(scenario.formula, model)
            timings = []
            verdict = None
            for _ in range(max(1, repetitions)):
                clear_cache()
                checker = NchatlModelChecker(model, scenario.norm, chunk_size=chunk_size)
                started = time.perf_counter()
                verdict = checker.check_at(START_STATE, formula, scenario.compliance)
                timings.append((time.perf_counter() - started) * 1000)
            rows.append({
                'n': n,
                'scenario': scenario.label,
                'formula': scenario.formula,
                'profile_set_size': profile_set_size(model, START_STATE, n),
                'verdict': verdict,
                'expected': scenario.expected,
                'wall_time_ms': round(min(timings), 3),
            })
            logger.info(f"計測: n={n} {scenario.label} {min(timings):.1f} ms")
    return pd.DataFrame(rows, columns=['n', 'scenario', 'formula', 'profile_set_size',
                                       'verdict', 'expected', 'wall_time_ms'])


def cmd_bench(args: argparse.Namespace, config: AppConfig) -> int:
    """n を変えて検査時間の表を出力する"""
    sizes = _parse_sizes(args.n) or config.bench_sizes
    repetitions = args.repetitions if args.repetitions is not None else config.bench_repetitions
    table = run_bench(sizes, repetitions, config.enforce_chunk_size)
    _emit(args, table.to_string(index=False), {'rows': table.to_dict(orient='records')})
    mismatched = table[table['verdict'] != table['expected']]
    if not mismatched.empty:
        logger.warning(f"期待と異なる判定が {len(mismatched)} 件ありました")
        return EXIT_FALSE
    return EXIT_OK


COMMANDS = {
    'check': cmd_check,
    'validate': cmd_validate,
    'expand': cmd_expand,
    'oracle': cmd_oracle,
    'bench': cmd_bench,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='nchatl', description='NCHATL model checker for 1-RCGS')
    parser.add_argument('--config', help='YAML config file')
    sub = parser.add_subparsers(dest='command', required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument('--format', choices=('text', 'structured'), default='text')

    check = sub.add_parser('check', help='compute the states satisfying a formula')
    check.add_argument('--model', required=True)
    check.add_argument('--norm')
    check.add_argument('--comply', default='none', help="agent list/ranges, 'all' or 'none'")
    check.add_argument('--formula')
    check.add_argument('--queries')
    check.add_argument('--state')
    common(check)

    validate = sub.add_parser('validate', help='validate a model and norm')
    validate.add_argument('--model', required=True)
    validate.add_argument('--norm')
    common(validate)

    expand_cmd = sub.add_parser('expand', help='expand into an explicit concurrent game structure')
    expand_cmd.add_argument('--model')
    expand_cmd.add_argument('--n', help='agent count of the built-in coordination model')
    expand_cmd.add_argument('--budget', type=int)
    expand_cmd.add_argument('--output')

    oracle = sub.add_parser('oracle', help='cross-check the fast path against brute force')
    oracle.add_argument('--seed', type=int)
    oracle.add_argument('--instances', type=int)
    oracle.add_argument('--budget', type=int)
    oracle.add_argument('--literal-legalfor', action='store_true',
                        help='count agents whose forbidden set meets E (for testing the oracle)')
    common(oracle)

    bench = sub.add_parser('bench', help='time the coordination scenarios for several n')
    bench.add_argument('--n', help='comma separated agent counts (multiples of 10)')
    bench.add_argument('--repetitions', type=int)
    common(bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """コマンドラインのエントリポイント（終了コードを返す）"""
    parser = build_parser()
    args = parser.parse_args(argv)
    config = AppConfig(config_path=args.config)
    try:
        return COMMANDS[args.command](args, config)
    except ValidationFailed as e:
        for violation in e.report.violations:
            print(f"{violation.kind}: {violation.message}", file=sys.stderr)
        logger.warning(f"検証エラー: {e}")
        return EXIT_VALIDATION_ERROR
    except BudgetExceededError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (NchatlError, argparse.ArgumentTypeError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        logger.error(f"入力エラー: {e}")
        return EXIT_PARSE_ERROR


if __name__ == "__main__":
    sys.exit(main())
