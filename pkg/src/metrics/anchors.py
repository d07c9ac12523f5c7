"""
Anchor places and anchor-signature uniqueness.

Home is the most visited cell in the night mask (22:00-06:00, bins 44-47
and 0-11 of the same day index), work the most visited cell in office
hours (09:00-17:00, bins 18-33). Extras are the remaining cells ranked by
total visits. Every ranking breaks ties by (x, y) ascending.
"""

from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.exceptions import ValidationError
from src.temporal.profiles import HOME_BINS, WORK_BINS
from src.traces.grid import Cell
from src.traces.store import BINS_PER_DAY, TraceSet
from src.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class AnchorSignature:
    """(home, work, extra_1..extra_r) of one user; absent anchors are None."""

    user: int
    home: Optional[Cell]
    work: Optional[Cell]
    extras: Tuple[Cell, ...] = ()

    @property
    def complete(self) -> bool:
        return self.home is not None and self.work is not None

    def key(self, r: int) -> Tuple[Optional[Cell], ...]:
        return (self.home, self.work, *self.extras[:r])


def _mask(bins: np.ndarray, selected: Sequence[int]) -> np.ndarray:
    lookup = np.zeros(BINS_PER_DAY, dtype=bool)
    lookup[list(selected)] = True
    return lookup[bins]


def _top_cell(xs: np.ndarray, ys: np.ndarray) -> Optional[Cell]:
    if xs.size == 0:
        return None
    cells, counts = np.unique(np.stack([xs, ys], axis=1), axis=0, return_counts=True)
    # np.unique sorts rows by (x, y), so argmax picks the smallest tied cell
    best = int(np.argmax(counts))
    return int(cells[best, 0]), int(cells[best, 1])


def infer_anchors(ts: TraceSet, user: int, r: int = 0) -> AnchorSignature:
    """
    Home, work and the top-r extra anchors of one user.

    Args:
        ts: Trajectories
        user: User id
        r: Number of extra anchors

    Raises:
        ValidationError: If user is unknown or r < 0
    """
    if r < 0:
        raise ValidationError("must be >= 0", field="r")
    t = ts.trajectory(user)
    home_mask = _mask(t.bins, HOME_BINS)
    work_mask = _mask(t.bins, WORK_BINS)
    home = _top_cell(t.xs[home_mask], t.ys[home_mask])
    work = _top_cell(t.xs[work_mask], t.ys[work_mask])

    cells, counts = np.unique(np.stack([t.xs, t.ys], axis=1), axis=0, return_counts=True)
    ranked = [(int(cells[i, 0]), int(cells[i, 1])) for i in np.argsort(-counts, kind="stable")]
    extras = tuple(c for c in ranked if c != home and c != work)[:r]
    return AnchorSignature(user=user, home=home, work=work, extras=extras)


def _decode(keys: pd.Series, height: int) -> List[Optional[Cell]]:
    return [None if pd.isna(k) else (int(k) // height, int(k) % height) for k in keys]


def infer_all_anchors(ts: TraceSet, r: int = 0) -> Dict[int, AnchorSignature]:
    """
    Anchor signatures of every user via grouped counts.

    Gives the same signatures as calling infer_anchors per user.
    """
    if r < 0:
        raise ValidationError("must be >= 0", field="r")
    height = ts.grid.height
    frame = pd.DataFrame({"uid": ts.users, "key": ts.grid.lex_key(ts.xs, ts.ys)})
    frame["home"] = _mask(ts.bins, HOME_BINS)
    frame["work"] = _mask(ts.bins, WORK_BINS)

    def top(selected: pd.DataFrame) -> pd.Series:
        counts = selected.groupby(["uid", "key"]).size().reset_index(name="n")
        counts = counts.sort_values(["uid", "n", "key"], ascending=[True, False, True])
        return counts.drop_duplicates("uid").set_index("uid")["key"]

    users = pd.Index(ts.user_ids, name="uid")
    homes = top(frame[frame["home"]]).reindex(users)
    works = top(frame[frame["work"]]).reindex(users)

    totals = frame.groupby(["uid", "key"]).size().reset_index(name="n")
    totals = totals.assign(
        home=homes.reindex(totals["uid"]).to_numpy(), work=works.reindex(totals["uid"]).to_numpy()
    )
    totals = totals[(totals["key"] != totals["home"]) & (totals["key"] != totals["work"])]
    totals = totals.sort_values(["uid", "n", "key"], ascending=[True, False, True])
    extras = totals.groupby("uid").head(r).groupby("uid")["key"].agg(list) if r else None

    signatures: Dict[int, AnchorSignature] = {}
    for uid, home, work in zip(users, _decode(homes, height), _decode(works, height)):
        extra_keys = extras.get(uid, []) if extras is not None else []
        signatures[int(uid)] = AnchorSignature(
            user=int(uid),
            home=home,
            work=work,
            extras=tuple((int(k) // height, int(k) % height) for k in extra_keys),
        )
    return signatures


@dataclass(frozen=True)
class AnchorUniqueness:
    """
    Anchor-signature uniqueness over users with both home and work.

    Attributes:
        users: Eligible user ids, ascending
        k_hw: Size of each eligible user's home-work group
        ua_hw: Share of eligible users with k_hw = 1
        unique_by_r: Pr[k_{A_r} = 1] per extras count r
        pair_histogram: Pair multiplicity -> number of distinct home-work pairs
        share_k_hw_le_5: Share of eligible users with k_hw <= 5
        share_shared_pairs_le_3: Among pairs shared by >= 2 users, the share
            shared by at most 3; None when no pair is shared
        excluded_users: Users lacking a home or work anchor
    """

    users: np.ndarray
    k_hw: np.ndarray
    ua_hw: float
    unique_by_r: Dict[int, float]
    pair_histogram: Dict[int, int]
    share_k_hw_le_5: float
    share_shared_pairs_le_3: Optional[float]
    excluded_users: int


def _group_sizes(keys: List[tuple]) -> np.ndarray:
    sizes = Counter(keys)
    return np.array([sizes[k] for k in keys], dtype=np.int64)


def anchor_uniqueness(ts: TraceSet, rs: Sequence[int] = (0, 1, 2, 3, 4)) -> AnchorUniqueness:
    """
    Group users by exact anchor signatures and measure uniqueness.

    Raises:
        ValidationError: If no user has both a home and a work anchor
    """
    max_r = max(rs) if rs else 0
    signatures = [s for s in infer_all_anchors(ts, max_r).values() if s.complete]
    excluded = ts.n_users - len(signatures)
    if not signatures:
        raise ValidationError("no user has both a home and a work anchor", field="traces")

    k_hw = _group_sizes([s.key(0) for s in signatures])
    unique_by_r = {
        int(r): float(np.mean(_group_sizes([s.key(r) for s in signatures]) == 1)) for r in rs
    }

    multiplicities = np.array(list(Counter(s.key(0) for s in signatures).values()))
    sizes, counts = np.unique(multiplicities, return_counts=True)
    histogram = {int(k): int(v) for k, v in zip(sizes, counts)}
    shared = multiplicities[multiplicities >= 2]
    share_pairs = float(np.mean(shared <= 3)) if shared.size else None

    result = AnchorUniqueness(
        users=np.array([s.user for s in signatures], dtype=np.int64),
        k_hw=k_hw,
        ua_hw=float(np.mean(k_hw == 1)),
        unique_by_r=unique_by_r,
        pair_histogram=histogram,
        share_k_hw_le_5=float(np.mean(k_hw <= 5)),
        share_shared_pairs_le_3=share_pairs,
        excluded_users=excluded,
    )
    logger.info(
        "anchor_uniqueness_computed",
        users=len(signatures),
        excluded_users=excluded,
        ua_hw=round(result.ua_hw, 4),
    )
    return result
