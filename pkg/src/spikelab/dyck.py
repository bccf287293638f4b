"""Dyck paths, marked-instant statistics, and edge-path gluing.

Trace powers of a sample covariance matrix expand over closed walks on a
bipartite graph whose bottom line indexes matrix rows and whose top line
indexes columns.  Walks in which every oriented edge occurs an even number
of times map to Dyck paths: reading the walk edge by edge, an odd-numbered
occurrence of an edge is an up step, an even-numbered occurrence a down
step.  This module provides exact counts of Dyck paths refined by the
parity of marked instants and by returns to zero, together with the
gluing procedure that contracts a walk through a distinguished bottom
vertex (the spike, labelled 1) into a shorter walk rooted at that vertex.

Conventions.  A marked instant is the right endpoint of an up step, so a
path of half-length n has o + e = n marked instants split by parity.
``path_stats`` reports strictly interior returns (0 < t < 2n), while
``count_with_returns`` counts all returns in (0, 2n]; the closing return
of a nonempty path is included in the latter, hence m_total = r_interior + 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .errors import DomainError, StructureError

#: Label of the spiked bottom vertex.
SPIKE_VERTEX = 1


# ---------------------------------------------------------------------------
# Dyck paths
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DyckPath:
    """Lattice path with +1/-1 steps, nonnegative partial sums, total zero."""

    steps: tuple[int, ...]

    def __post_init__(self) -> None:
        height = 0
        for step in self.steps:
            if step not in (-1, 1):
                raise StructureError(f"invalid step {step!r}")
            height += step
            if height < 0:
                raise StructureError("partial sum dips below zero")
        if height != 0:
            raise StructureError("path does not return to zero")

    @classmethod
    def from_word(cls, word: str) -> "DyckPath":
        """Build a path from a string over the alphabet {U, D}."""
        table = {"U": 1, "D": -1}
        try:
            return cls(tuple(table[c] for c in word))
        except KeyError as exc:
            raise StructureError(f"invalid letter {exc.args[0]!r}") from None

    @property
    def half_length(self) -> int:
        return len(self.steps) // 2

    def heights(self) -> tuple[int, ...]:
        """Partial sums x(0), x(1), ..., x(2n)."""
        out = [0]
        for step in self.steps:
            out.append(out[-1] + step)
        return tuple(out)


@dataclass(frozen=True)
class DyckStats:
    """Marked-instant and return statistics of a Dyck path.

    odd_marked / even_marked count up-step right endpoints at odd / even
    instants; interior_returns counts zeros of the trajectory strictly
    inside (0, 2n).  The origin is never marked.
    """

    half_length: int
    odd_marked: int
    even_marked: int
    interior_returns: int
    max_level: int

    @property
    def total_returns(self) -> int:
        """Returns in (0, 2n]; the terminal return counts for n >= 1."""
        return self.interior_returns + (1 if self.half_length else 0)


def path_stats(path: DyckPath) -> DyckStats:
    """Compute (o, e, r, max level) statistics of a Dyck path in one scan."""
    odd = even = interior = peak = 0
    height = 0
    last = len(path.steps)
    for t, step in enumerate(path.steps, start=1):
        height += step
        if step == 1:
            peak = max(peak, height)
            if t % 2:
                odd += 1
            else:
                even += 1
        elif height == 0 and t < last:
            interior += 1
    return DyckStats(len(path.steps) // 2, odd, even, interior, peak)


def narayana(n: int, k: int) -> int:
    """Number of Dyck paths of half-length n with k odd marked instants.

    The classical triangle C(n, k) * C(n, k - 1) / n, exact for
    arbitrary-precision n.
    """
    if not 1 <= k <= n:
        raise DomainError(f"narayana needs 1 <= k <= n, got n={n}, k={k}")
    return comb(n, k) * comb(n, k - 1) // n


@dataclass(frozen=True)
class PathCountTable:
    """Exact refined counts for all Dyck paths of one half-length.

    ``by_marked[k]`` counts paths with k odd marked instants and
    ``by_marked_returns[(k, m)]`` refines by m returns in (0, 2n].
    All entries are arbitrary-precision integers.
    """

    half_length: int
    by_marked: dict[int, int]
    by_marked_returns: dict[tuple[int, int], int]


@lru_cache(maxsize=None)
def path_count_table(n: int) -> PathCountTable:
    """Dynamic program over (height, odd marked so far, returns so far)."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    states: dict[tuple[int, int, int], int] = {(0, 0, 0): 1}
    for t in range(1, 2 * n + 1):
        nxt: dict[tuple[int, int, int], int] = {}
        odd_instant = t % 2
        for (h, k, m), cnt in states.items():
            if h + 1 <= 2 * n - t:  # room to come back down
                key = (h + 1, k + odd_instant, m)
                nxt[key] = nxt.get(key, 0) + cnt
            if h > 0:
                key = (h - 1, k, m + (1 if h == 1 else 0))
                nxt[key] = nxt.get(key, 0) + cnt
        states = nxt
    by_marked: dict[int, int] = {}
    by_marked_returns: dict[tuple[int, int], int] = {}
    for (h, k, m), cnt in states.items():
        if h:
            continue
        by_marked[k] = by_marked.get(k, 0) + cnt
        by_marked_returns[(k, m)] = by_marked_returns.get((k, m), 0) + cnt
    return PathCountTable(n, by_marked, by_marked_returns)


def count_with_returns(n: int, k: int, m: int) -> int:
    """Dyck paths of half-length n, k odd marked instants, m returns.

    Returns are counted in (0, 2n], so every nonempty path has m >= 1
    and summing over (k, m) recovers the Catalan number.
    """
    if not (1 <= k <= n and 1 <= m <= n):
        raise DomainError(
            f"count_with_returns needs 1 <= k, m <= n, got n={n}, k={k}, m={m}"
        )
    return path_count_table(n).by_marked_returns.get((k, m), 0)


# ---------------------------------------------------------------------------
# Edge paths
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EdgePath:
    """Closed bipartite walk (j_1, i_0)(j_1, i_1)(j_2, i_1) ... (j_s, i_0).

    ``bottoms`` lists i_0 .. i_{s-1} (row labels, visited at even walk
    instants) and ``tops`` lists j_1 .. j_s (column labels).  The oriented
    edge at position 2q is (tops[q] | bottoms[q]) and at position 2q + 1 is
    (tops[q] | bottoms[q + 1 mod s]); even positions are traversed upward,
    odd positions downward.
    """

    bottoms: tuple[int, ...]
    tops: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.bottoms) != len(self.tops) or not self.bottoms:
            raise StructureError("need equally many bottoms and tops")
        if any(v < 1 for v in self.bottoms) or any(v < 1 for v in self.tops):
            raise StructureError("vertex labels are 1-based positive integers")

    @property
    def half_length(self) -> int:
        return len(self.tops)

    def edge_sequence(self) -> tuple[tuple[int, int], ...]:
        """Oriented edges (top, bottom) in walk order, length 2 * half_length."""
        s = self.half_length
        out = []
        for q in range(s):
            out.append((self.tops[q], self.bottoms[q]))
            out.append((self.tops[q], self.bottoms[(q + 1) % s]))
        return tuple(out)

    def is_even(self) -> bool:
        """True when every oriented edge occurs an even number of times."""
        counts: dict[tuple[int, int], int] = {}
        for edge in self.edge_sequence():
            counts[edge] = counts.get(edge, 0) + 1
        return all(c % 2 == 0 for c in counts.values())

    def trajectory(self) -> DyckPath:
        """Dyck path of the walk: odd occurrences rise, even ones fall.

        Only defined for even paths; otherwise the result would not
        return to zero and construction raises ``StructureError``.
        """
        seen: dict[tuple[int, int], int] = {}
        steps = []
        for edge in self.edge_sequence():
            seen[edge] = seen.get(edge, 0) + 1
            steps.append(1 if seen[edge] % 2 else -1)
        return DyckPath(tuple(steps))


def one_edges(path: EdgePath, vertex: int = SPIKE_VERTEX) -> tuple[int, ...]:
    """Positions (0-based, in walk order) of edges whose bottom is ``vertex``.

    Only the bottom label matters: an edge touching the value 1 on the top
    line is not a 1-edge.
    """
    return tuple(
        t for t, (_, bottom) in enumerate(path.edge_sequence()) if bottom == vertex
    )


@dataclass(frozen=True)
class GlueResult:
    """Outcome of the gluing procedure.

    glued: contracted walk rooted at the spike vertex,
    s: number of spike visits (pairs of 1-edges) in the input,
    l: number of clusters glued independently,
    m: returns to zero of the glued trajectory, counted in (0, 2n'].
    """

    glued: EdgePath
    s: int
    l: int
    m: int


def _cluster_arrangement(
    segments: dict[int, list[tuple[int, int]]], members: list[int]
) -> list[tuple[int, bool]]:
    """Order a cluster's subpaths into one chain sharing junction edges.

    Consecutive subpaths must share their junction 1-edge; a subpath may be
    read reversed.  The chain starts with the lowest-numbered subpath read
    forward.  Among admissible continuations the lexicographically smallest
    (subpath number, direction) is chosen, with backtracking so a full
    chain is always found when one exists (it does: spike evenness makes
    every junction vertex of even degree).
    """
    first = members[0]
    order = sorted(members[1:])

    def extend(
        chain: list[tuple[int, bool]], used: set[int], tail: tuple[int, int]
    ) -> list[tuple[int, bool]] | None:
        if len(used) == len(members):
            return chain
        for idx in order:
            if idx in used:
                continue
            seg = segments[idx]
            for rev in (False, True):
                head = seg[-1] if rev else seg[0]
                if head != tail:
                    continue
                new_tail = seg[0] if rev else seg[-1]
                found = extend(chain + [(idx, rev)], used | {idx}, new_tail)
                if found is not None:
                    return found
        return None

    chain = extend([(first, False)], {first}, segments[first][-1])
    if chain is None:
        raise StructureError("cluster admits no junction-consistent chain")
    return chain


def glue(path: EdgePath) -> GlueResult:
    """Contract an even walk through the spike vertex to a rooted walk.

    The walk is cut at its spike visits into subpaths, each beginning and
    ending with a 1-edge.  Subpaths whose boundary 1-edges share top
    vertices form clusters; within a cluster the subpaths are chained by
    erasing matched pairs of equal 1-edges (reading a subpath reversed
    when its far endpoint carries the junction edge).  The chained
    clusters are concatenated in order of first appearance, yielding a
    walk of half-length s_N - (s - l) whose origin is the spike vertex.
    """
    if not path.is_even():
        raise StructureError("gluing requires an even edge path")
    edges = list(path.edge_sequence())
    n2 = len(edges)
    positions = [t for t, (_, b) in enumerate(edges) if b == SPIKE_VERTEX]
    if not positions:
        raise StructureError("gluing requires at least one spike visit")
    departures = [t for t in positions if t % 2 == 0]
    arrivals = [t for t in positions if t % 2 == 1]
    s = len(departures)
    if len(arrivals) != s:
        raise StructureError("unbalanced spike edges")  # cannot happen on a closed walk

    # Subpath q runs cyclically from a departure to the next arrival.  The
    # subpath containing walk position 0 is numbered first.
    starts = sorted(departures)
    if path.bottoms[0] != SPIKE_VERTEX:
        # wrap subpath begins at the last departure
        starts = starts[-1:] + starts[:-1]
    segments: dict[int, list[tuple[int, int]]] = {}
    for number, d in enumerate(starts):
        nxt = [a for a in arrivals if a > d]
        end = nxt[0] if nxt else arrivals[0] + n2
        segments[number] = [edges[t % n2] for t in range(d, end + 1)]

    # Clusters: union-find on the top vertices of boundary 1-edges.
    parent: dict[int, int] = {}

    def find(v: int) -> int:
        while parent.setdefault(v, v) != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for seg in segments.values():
        a, b = find(seg[0][0]), find(seg[-1][0])
        if a != b:
            parent[a] = b
    clusters: dict[int, list[int]] = {}
    for number, seg in segments.items():
        clusters.setdefault(find(seg[0][0]), []).append(number)
    ordered = sorted(clusters.values(), key=min)
    for members in ordered:
        members.sort()

    glued_edges: list[tuple[int, int]] = []
    for members in ordered:
        chain = _cluster_arrangement(segments, members)
        merged: list[tuple[int, int]] = []
        for idx, rev in chain:
            seg = segments[idx][::-1] if rev else list(segments[idx])
            merged = seg if not merged else merged[:-1] + seg[1:]
        if merged[0] != merged[-1]:
            raise StructureError("cluster bookends disagree")  # even counts forbid this
        glued_edges.extend(merged)

    bottoms = [SPIKE_VERTEX]
    tops = []
    for t in range(0, len(glued_edges), 2):
        up, down = glued_edges[t], glued_edges[t + 1]
        if up[0] != down[0] or up[1] != bottoms[-1]:
            raise StructureError("glued walk lost adjacency")  # sanity guard
        tops.append(up[0])
        bottoms.append(down[1])
    if bottoms.pop() != SPIKE_VERTEX:
        raise StructureError("glued walk does not close at the spike")
    glued = EdgePath(tuple(bottoms), tuple(tops))

    l = len(ordered)
    heights = glued.trajectory().heights()
    m = sum(1 for t in range(1, len(heights)) if heights[t] == 0)
    return GlueResult(glued, s, l, m)


def preimage_bound(s: int, l: int, s1: int, s_n: int) -> int:
    """Upper bound s1 * C(s, l) * (2 s_n)^(s - l) on glue preimages.

    s spike visits glued into l clusters, first-return half-length s1,
    original half-length s_n.  Counts the choices of reinsertion instants,
    chain orders and directions, and origin needed to undo the gluing.
    """
    if not (1 <= l <= s <= s_n and s1 >= 1):
        raise DomainError("need 1 <= l <= s <= s_n and s1 >= 1")
    return s1 * comb(s, l) * (2 * s_n) ** (s - l)
