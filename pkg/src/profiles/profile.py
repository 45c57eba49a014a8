"""
プロファイル型と座標ごとの順序・和
"""
from dataclasses import dataclass
from typing import Iterable, Tuple

from src.models.errors import ProfileMismatchError


@dataclass(frozen=True)
class Profile:
    """行動 1..m ごとの人数ベクトル（和は所有する提携の人数）"""
    counts: Tuple[int, ...]
    owner_size: int

    def __post_init__(self):
        if any(c < 0 for c in self.counts):
            raise ValueError(f"profile counts must be non-negative: {self.counts}")
        if sum(self.counts) != self.owner_size:
            raise ValueError(f"profile {self.counts} does not sum to {self.owner_size}")

    @classmethod
    def of(cls, counts: Iterable[int]) -> 'Profile':
        """人数ベクトルからプロファイルを作る（所有提携の人数は和から決まる）"""
        values = tuple(int(c) for c in counts)
        return cls(counts=values, owner_size=sum(values))

    def count(self, action: int) -> int:
        """行動 action（1始まり）を選んだ人数"""
        return self.counts[action - 1]

    def __len__(self) -> int:
        return len(self.counts)

    def __str__(self) -> str:
        return '(' + ','.join(str(c) for c in self.counts) + ')'


def _check_same_length(f: Profile, g: Profile) -> None:
    if len(f) != len(g):
        raise ProfileMismatchError(
            f"profiles {f} and {g} have different lengths (different states?)")


def profile_leq(f: Profile, g: Profile) -> bool:
    """座標ごとに F(i) <= G(i) なら True"""
    _check_same_length(f, g)
    return all(a <= b for a, b in zip(f.counts, g.counts))


def profile_sum(f: Profile, g: Profile) -> Profile:
    """座標ごとの和（所有提携の人数も足し合わせる）"""
    _check_same_length(f, g)
    return Profile(counts=tuple(a + b for a, b in zip(f.counts, g.counts)),
                   owner_size=f.owner_size + g.owner_size)
