"""The canonical conditional expectation onto the span of vertex projections.

On a weakly reduced word the expectation is a rational multiple of the source
vertex projection.  The recursion: free-group-style cleanup first (``e* e``
drops, ``e* f`` in one cell kills, ``e e*`` drops for singleton cells); a word
whose free label is nontrivial has expectation zero; otherwise every ``e e*``
occurrence is expanded simultaneously through
``S_e S_e* = (1/|X|) P_v + (S_e S_e* - (1/|X|) P_v)``
and the term keeping every kernel factor is dropped (products of kernel
elements from consecutively distinct cells have expectation zero).  All
remaining terms are strictly shorter, so the recursion terminates.

Expanding one occurrence at a time is not sound: the cross terms between
occurrences need not vanish, which is why the subset expansion below runs over
all occurrences at once.

For an ordinary (trivially separated) row-finite graph the expectation has the
closed form ``n_mu P_{s(mu)}`` with ``n_mu`` the inverse product of the
out-degrees along the path; :func:`phi_ordinary` computes that directly and
serves as an independent oracle for the recursive implementation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from . import scalars
from .algebra import (
    AlgebraElement,
    AlgebraError,
    LeavittContext,
    NormalWord,
    from_word,
    vertex_element,
    zero,
)
from .graphs import GraphError, GraphPath, SeparatedGraph, SignedEdge


def weakly_reduce(graph: SeparatedGraph, steps: Sequence[SignedEdge]) -> Optional[tuple]:
    """Normalize with the choice-independent rules only; ``None`` means zero.

    Drops ``e* e`` always, drops ``e e*`` when the cell of ``e`` is a
    singleton, and kills ``e* f`` for distinct edges of one cell.  The result
    is a weakly reduced word (or the empty tuple for a vertex).
    """
    work = list(steps)
    i = 0
    while i + 1 < len(work):
        a, b = work[i], work[i + 1]
        if a.star and not b.star and graph.cell_of(a.edge) == graph.cell_of(b.edge):
            if a.edge != b.edge:
                return None
            del work[i : i + 2]
            i = max(i - 1, 0)
            continue
        if not a.star and b.star and a.edge == b.edge:
            v, k = graph.cell_of(a.edge)
            if len(graph.cell_edges(v, k)) == 1:
                del work[i : i + 2]
                i = max(i - 1, 0)
                continue
        i += 1
    return tuple(work)


def _free_label_is_trivial(steps: Sequence[SignedEdge]) -> bool:
    stack = []
    for s in steps:
        sign = -1 if s.star else 1
        if stack and stack[-1] == (s.edge, -sign):
            stack.pop()
        else:
            stack.append((s.edge, sign))
    return not stack


def _pair_occurrences(steps: tuple) -> list:
    return [
        i
        for i in range(len(steps) - 1)
        if not steps[i].star and steps[i + 1].star and steps[i].edge == steps[i + 1].edge
    ]


def _n_value(ctx: LeavittContext, steps: tuple) -> Fraction:
    """The rational N with P(S_w) = N * P_{s(w)} for a composable word w."""
    reduced = weakly_reduce(ctx.graph, steps)
    if reduced is None:
        return Fraction(0)
    return _n_reduced(ctx, reduced)


def _n_reduced(ctx: LeavittContext, steps: tuple) -> Fraction:
    if not steps:
        return Fraction(1)
    cached = ctx.expect_cache.get(steps)
    if cached is not None:
        return cached
    if not _free_label_is_trivial(steps):
        ctx.expect_cache[steps] = Fraction(0)
        return Fraction(0)
    occurrences = _pair_occurrences(steps)
    t = len(occurrences)
    if t == 0:
        # alternating product of cell-kernel pieces: expectation zero
        ctx.expect_cache[steps] = Fraction(0)
        return Fraction(0)
    sizes = []
    for i in occurrences:
        v, k = ctx.cell_of(steps[i].edge)
        sizes.append(len(ctx.cell_edges(v, k)))
    total = Fraction(0)
    # proper subsets of the occurrence set: kept occurrences stay as e e*,
    # the others are deleted; sign (-1)^(deleted+1), weight 1/|X| per deletion
    for mask in range((1 << t) - 1):
        deleted = [j for j in range(t) if not (mask >> j) & 1]
        weight = Fraction(1)
        for j in deleted:
            weight /= sizes[j]
        drop = set()
        for j in deleted:
            drop.add(occurrences[j])
            drop.add(occurrences[j] + 1)
        shorter = tuple(s for idx, s in enumerate(steps) if idx not in drop)
        sign = 1 if len(deleted) % 2 == 1 else -1
        total += sign * weight * _n_value(ctx, shorter)
    ctx.expect_cache[steps] = total
    return total


def expect(x: AlgebraElement) -> AlgebraElement:
    """The conditional expectation, extended linearly over basis words.

    The result is supported on vertex projections, with coefficients in Q(i)
    whose rational parts come from the N values (imaginary parts only enter
    through the input coefficients).
    """
    ctx = x.ctx
    acc = {}
    for word, coeff in x.terms.items():
        if word.is_vertex:
            key = word
            value = coeff
        else:
            n = _n_value(ctx, word.steps)
            if not n:
                continue
            key = NormalWord.of_vertex(ctx.graph.source(word.steps[0]))
            value = coeff * n
        acc[key] = acc.get(key, scalars.ZERO) + value
    return AlgebraElement(ctx, acc)


def is_vertex_supported(x: AlgebraElement) -> bool:
    return all(w.is_vertex for w in x.terms)


# -- the ordinary-graph oracle ---------------------------------------------------


def _require_ordinary(graph: SeparatedGraph) -> None:
    for v in graph.vertices:
        if len(graph.cells(v)) > 1:
            raise AlgebraError(
                f"graph is not trivially separated: vertex {v!r} has several cells"
            )


def n_mu(graph: SeparatedGraph, mu: GraphPath) -> Fraction:
    """The inverse product of out-degrees along a forward path (1 if empty)."""
    if not mu.is_forward():
        raise GraphError("malformed path: n_mu is defined on forward paths")
    value = Fraction(1)
    for step in mu.steps:
        value /= len(graph.out_edges(graph.source(step)))
    return value


def phi_ordinary(ctx: LeavittContext, mu: GraphPath, nu: GraphPath) -> AlgebraElement:
    """The closed-form expectation of S_mu S_nu* on a trivially separated graph."""
    graph = ctx.graph
    _require_ordinary(graph)
    for path in (mu, nu):
        if not path.is_forward():
            raise GraphError("malformed path: phi_ordinary takes forward paths")
        for a, b in zip(path.steps, path.steps[1:]):
            if graph.range(a) != graph.source(b):
                raise GraphError("malformed path: steps do not compose")
    if mu.range(graph) != nu.range(graph):
        raise GraphError("malformed paths: ranges differ")
    if mu.steps != nu.steps or mu.source(graph) != nu.source(graph):
        return zero(ctx)
    return vertex_element(ctx, mu.source(graph)).scale(n_mu(graph, mu))


def cell_subgraph(graph: SeparatedGraph, v: str, index: int) -> SeparatedGraph:
    """The trivially separated subgraph on one cell (all vertices kept)."""
    cell = graph.cell_edges(v, index)
    edges = [graph.edge(eid) for eid in cell]
    return SeparatedGraph(graph.vertices, edges, {v: [list(cell)]})


def beta_element(ctx: LeavittContext, edge_id: str) -> AlgebraElement:
    """The kernel element S_e S_e* - (1/|X|) P_v of the cell expectation."""
    v, k = ctx.cell_of(edge_id)
    size = len(ctx.cell_edges(v, k))
    word = NormalWord.of_steps((SignedEdge(edge_id), SignedEdge(edge_id, True)))
    return from_word(ctx, word) - vertex_element(ctx, v).scale(Fraction(1, size))
