"""
Uniqueness of users' sensitive-place signatures.

A user's signature is the set of their q most visited sensitive cells
(ties by (x, y) ascending). Users with fewer than q distinct sensitive
cells are not eligible.
"""

from collections import Counter
from dataclasses import dataclass
from typing import Dict, FrozenSet, Optional

import numpy as np
import pandas as pd

from src.exceptions import ValidationError
from src.traces.catalogs import PoiCatalog
from src.traces.grid import Cell
from src.traces.store import TraceSet
from src.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class SensitiveUniqueness:
    """
    Attributes:
        q: Signature size
        eligible_users: Users with >= q distinct sensitive cells
        applicable: False when no user is eligible
        probability: Pr[k_sens = 1] among eligible users, None if not applicable
        signatures: Sensitive signature per eligible user
    """

    q: int
    eligible_users: int
    applicable: bool
    probability: Optional[float]
    signatures: Dict[int, FrozenSet[Cell]]

    def as_row(self) -> Dict[str, object]:
        return {
            "q": self.q,
            "eligible_users": self.eligible_users,
            "applicable": self.applicable,
            "pr_k_sens_eq_1": self.probability,
        }


def sensitive_uniqueness(ts: TraceSet, pois: PoiCatalog, q: int) -> SensitiveUniqueness:
    """
    Share of eligible users whose top-q sensitive cells are unique.

    Args:
        ts: Trajectories
        pois: POI catalog with sensitivity keywords
        q: Signature size

    Raises:
        ValidationError: If q < 1 or the catalog has no sensitive cell
    """
    if q < 1:
        raise ValidationError("must be >= 1", field="q")
    sensitive = pois.sensitive_cells()
    if not sensitive:
        raise ValidationError("the POI catalog contains no sensitive cell", field="pois")

    grid = ts.grid
    in_grid = [c for c in sensitive if grid.contains(*c)]
    mask_lookup = np.zeros(grid.n_cells, dtype=bool)
    for x, y in in_grid:
        mask_lookup[y * grid.width + x] = True
    mask = mask_lookup[ts.cell_indices]

    frame = pd.DataFrame(
        {"uid": ts.users[mask], "key": grid.lex_key(ts.xs[mask], ts.ys[mask])}
    )
    counts = frame.groupby(["uid", "key"]).size().reset_index(name="n")
    counts = counts.sort_values(["uid", "n", "key"], ascending=[True, False, True])
    distinct = counts.groupby("uid")["key"].transform("size")
    top = counts[distinct >= q].groupby("uid").head(q)

    signatures: Dict[int, FrozenSet[Cell]] = {
        int(uid): frozenset((int(k) // grid.height, int(k) % grid.height) for k in keys)
        for uid, keys in top.groupby("uid")["key"]
    }

    if not signatures:
        logger.warning("sensitive_uniqueness_not_applicable", q=q)
        return SensitiveUniqueness(
            q=q, eligible_users=0, applicable=False, probability=None, signatures={}
        )

    sizes = Counter(signatures.values())
    unique = sum(1 for s in signatures.values() if sizes[s] == 1)
    probability = unique / len(signatures)
    logger.info(
        "sensitive_uniqueness_computed",
        q=q,
        eligible_users=len(signatures),
        probability=round(probability, 4),
    )
    return SensitiveUniqueness(
        q=q,
        eligible_users=len(signatures),
        applicable=True,
        probability=probability,
        signatures=signatures,
    )
