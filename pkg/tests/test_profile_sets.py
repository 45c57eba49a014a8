"""
プロファイル集合のテストモジュール

以下の機能について検証を行います：
1. 部分プロファイルの列挙と個数 C(k+m-1, m-1)
2. 合法人数とホール条件（5人・行動3つの例）
3. 規範に従うプロファイル集合と総当たりの一致
4. 規範・規範遵守提携に対する単調性
5. プロファイルの順序と和
"""

import sys
from itertools import combinations
from math import comb
from pathlib import Path

import numpy as np
import pytest

# プロジェクトルートからの相対パスを設定
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.models.errors import ProfileMismatchError
from src.models.normative_system import NormativeSystem
from src.oracle.brute_force import brute_compliant_profiles
from src.oracle.random_instances import hall_scenario_instance, random_instance
from src.profiles.compositions import composition_count, composition_matrix
from src.profiles.profile import Profile
from src.profiles.profile_sets import LegalRule, compliant_profiles, hall_condition, legal_count, \
    partial_profiles, profile_leq, profile_set_size, profile_sum

SCENARIO_PROFILES = {(2, 0, 1), (1, 1, 1), (1, 0, 2), (0, 1, 2), (0, 0, 3)}


def _counts(profiles):
    return {p.counts for p in profiles}


def test_partial_profiles_examples():
    scenario = hall_scenario_instance()
    model = scenario.model
    assert _counts(partial_profiles(model, 'q0', 1)) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    assert [p.counts for p in partial_profiles(model, 'q0', 0)] == [(0, 0, 0)]
    with pytest.raises(ValueError):
        partial_profiles(model, 'q0', 6)


def test_partial_profile_counts_match_binomial():
    """m ∈ 1..4, k ∈ 0..20 で個数が C(k+m-1, m-1) に一致すること"""
    for m in range(1, 5):
        for k in range(0, 21):
            matrix = composition_matrix(m, k)
            expected = comb(k + m - 1, m - 1)
            assert matrix.shape == (expected, m)
            assert composition_count(m, k) == expected
            assert (matrix.sum(axis=1) == k).all()
            # 辞書式昇順で重複なし
            assert len({tuple(row) for row in matrix.tolist()}) == expected
            assert matrix.tolist() == sorted(matrix.tolist())
    print("部分プロファイル個数テスト: 成功")


def test_profile_set_size():
    scenario = hall_scenario_instance()
    assert profile_set_size(scenario.model, 'q0', 5) == comb(7, 2)


def test_legal_count_scenario():
    scenario = hall_scenario_instance()
    args = (scenario.model, scenario.norm, 'q0')
    bound = frozenset({3, 4})
    assert legal_count(*args, {1}, bound) == 1
    assert legal_count(*args, {2}, bound) == 0
    assert legal_count(*args, set(), bound) == 0
    assert legal_count(*args, {3}, bound) == 2
    # 字面どおりの数え方では禁止集合と交わる人数になる
    assert legal_count(*args, {1}, bound, LegalRule.LITERAL) == 1
    assert legal_count(*args, {3}, bound, LegalRule.LITERAL) == 0


def test_hall_condition_scenario():
    scenario = hall_scenario_instance()
    args = (scenario.model, scenario.norm, 'q0')
    bound = frozenset({3, 4})
    assert hall_condition(*args, (1, 0, 1), bound)
    assert not hall_condition(*args, (2, 0, 0), bound)
    assert hall_condition(*args, (0, 0, 2), bound)
    assert not hall_condition(*args, (0, 2, 0), bound)
    assert hall_condition(scenario.model, NormativeSystem.empty(), 'q0', (2, 0, 0), bound)
    print("ホール条件テスト: 成功")


def test_compliant_profiles_scenario():
    """5人・行動3つの例で5件のプロファイルになり、総当たりと一致すること"""
    scenario = hall_scenario_instance()
    result = compliant_profiles(scenario.model, scenario.norm, scenario.compliance, 'q0', scenario.coalition)
    assert _counts(result) == SCENARIO_PROFILES
    assert len(result) == 5
    assert result.to_list() == sorted(result.to_list())
    brute = brute_compliant_profiles(scenario.model, scenario.norm, scenario.compliance, 'q0',
                                     scenario.coalition)
    assert result.as_set() == brute
    assert (2, 0, 1) in result
    assert (2, 1, 0) not in result
    print("規範に従うプロファイル集合テスト: 成功")


def test_literal_rule_differs_on_scenario():
    scenario = hall_scenario_instance()
    literal = compliant_profiles(scenario.model, scenario.norm, scenario.compliance, 'q0',
                                 scenario.coalition, LegalRule.LITERAL)
    assert _counts(literal) != SCENARIO_PROFILES


def test_compliant_profiles_trivial_cases():
    scenario = hall_scenario_instance()
    model = scenario.model
    everything = _counts(partial_profiles(model, 'q0', 3))
    empty = compliant_profiles(model, NormativeSystem.empty(), scenario.compliance, 'q0', scenario.coalition)
    assert _counts(empty) == everything
    disjoint = compliant_profiles(model, scenario.norm, frozenset({1, 2}), 'q0', scenario.coalition)
    assert _counts(disjoint) == everything
    nobody = compliant_profiles(model, scenario.norm, scenario.compliance, 'q0', frozenset())
    assert nobody.to_list() == [[0, 0, 0]]


def test_compliant_profiles_match_brute_force_on_random_instances():
    rng = np.random.default_rng(7)
    for index in range(100):
        instance = random_instance(rng)
        model = instance.model
        for state in model.state_names:
            fast = compliant_profiles(model, instance.norm, instance.compliance, state, instance.coalition)
            brute = brute_compliant_profiles(model, instance.norm, instance.compliance, state, instance.coalition)
            assert fast.as_set() == brute, f"instance {index}, state {state}"
            assert len(fast) > 0
            assert all(sum(p.counts) == len(instance.coalition) for p in fast)


def test_monotonicity_in_norm_and_compliance():
    """規範を強めても、規範に従う提携を広げても集合は小さくなるだけであること"""
    rng = np.random.default_rng(11)
    for _ in range(50):
        instance = random_instance(rng)
        model = instance.model
        # 各項目にもう一つ禁止を足した（合法性は保つ）規範
        entries = []
        for state, agent, actions in instance.norm.entries():
            m = model.action_count(state)
            extra = next((a for a in range(1, m + 1) if a not in actions), None)
            stronger = set(actions) | ({extra} if extra is not None and len(actions) + 1 < m else set())
            entries.append((state, [agent], stronger))
        stronger_norm = NormativeSystem.from_entries(entries)
        wider = instance.compliance | frozenset(model.agents)
        for state in model.state_names:
            base = compliant_profiles(model, instance.norm, instance.compliance, state, instance.coalition).as_set()
            strict = compliant_profiles(model, stronger_norm, instance.compliance, state, instance.coalition).as_set()
            narrowed = compliant_profiles(model, instance.norm, wider, state, instance.coalition).as_set()
            assert strict <= base
            assert narrowed <= base


def test_hall_condition_subsets_by_hand():
    """すべての E を手で調べた結果と一致すること"""
    scenario = hall_scenario_instance()
    legal = {3: {1, 3}, 4: {3}}
    for profile in partial_profiles(scenario.model, 'q0', 2):
        expected = True
        for size in range(1, 4):
            for subset in combinations(range(1, 4), size):
                capacity = sum(1 for agent in legal if legal[agent] & set(subset))
                if sum(profile.count(a) for a in subset) > capacity:
                    expected = False
        assert hall_condition(scenario.model, scenario.norm, 'q0', profile, {3, 4}) == expected


def test_profile_order_and_sum():
    assert profile_leq(Profile.of((1, 0, 1)), Profile.of((2, 0, 1)))
    assert not profile_leq(Profile.of((1, 1, 0)), Profile.of((2, 0, 1)))
    f = Profile.of((3, 1))
    assert profile_leq(f, f)
    assert profile_sum(Profile.of((1, 0, 1)), Profile.of((1, 0, 0))) == Profile.of((2, 0, 1))
    assert profile_sum(f, Profile.of((0, 0))) == f
    assert profile_sum(Profile.of((0, 1)), Profile.of((1, 1))).counts == (1, 2)
    assert profile_sum(Profile.of((0, 1)), Profile.of((1, 1))).owner_size == 3
    with pytest.raises(ProfileMismatchError):
        profile_leq(Profile.of((1, 0)), Profile.of((1, 0, 0)))
    with pytest.raises(ProfileMismatchError):
        profile_sum(Profile.of((1,)), Profile.of((1, 0)))
