"""Published Woods-Saxon Klein-Gordon binding energies.

Comparison data only. Nothing here is fed back into a computation.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict


class PublishedState(BaseModel):
    model_config = ConfigDict(frozen=True)

    A: int
    R0_fm: float
    V0_MeV: float
    n: int
    l: int
    Eb_MeV: float


PUBLISHED_TABLE = (
    PublishedState(A=40, R0_fm=4.3946, V0_MeV=45.70, n=0, l=1, Eb_MeV=-107.8777),
    PublishedState(A=56, R0_fm=4.9162, V0_MeV=47.78, n=0, l=1, Eb_MeV=-127.5238),
    PublishedState(A=56, R0_fm=4.9162, V0_MeV=47.78, n=0, l=2, Eb_MeV=-17.5985),
    PublishedState(A=66, R0_fm=5.1930, V0_MeV=49.08, n=0, l=2, Eb_MeV=-50.3359),
    PublishedState(A=92, R0_fm=5.8010, V0_MeV=52.46, n=0, l=2, Eb_MeV=-101.8967),
    PublishedState(A=140, R0_fm=6.6724, V0_MeV=58.70, n=0, l=3, Eb_MeV=-92.5327),
    PublishedState(A=208, R0_fm=7.6136, V0_MeV=67.54, n=0, l=4, Eb_MeV=-105.0865),
    PublishedState(A=208, R0_fm=7.6136, V0_MeV=67.54, n=0, l=5, Eb_MeV=-33.6014),
)


def published_binding(A: int, n: int, l: int) -> float | None:
    for row in PUBLISHED_TABLE:
        if (row.A, row.n, row.l) == (A, n, l):
            return row.Eb_MeV
    return None


def monotone_in_l(rows=PUBLISHED_TABLE) -> bool:
    """True when, at fixed (A, n), binding energy increases with l."""
    groups: dict[tuple[int, int], list[PublishedState]] = {}
    for row in rows:
        groups.setdefault((row.A, row.n), []).append(row)
    for members in groups.values():
        ordered = sorted(members, key=lambda r: r.l)
        if any(b.Eb_MeV <= a.Eb_MeV for a, b in zip(ordered, ordered[1:])):
            return False
    return True
