# services/complex_service.py
from itertools import combinations, permutations
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

import networkx as nx
import structlog

from config import get_settings
from models.complex import (BlockComponent, BlockStructure, Clique, CliqueDecomposition, ClosednessResult,
                            ClosedWitness, Facet, ForestReport, IntersectionGraph, PairCheck,
                            SimplicialComplex)
from models.errors import ResourceLimitError, StructuralError

logger = structlog.get_logger()


def _maximal_cliques(edges: Set[FrozenSet[int]], size: int) -> Set[FrozenSet[int]]:
    """Maximal vertex sets all of whose `size`-subsets are edges of a uniform hypergraph"""
    vertices = sorted(set().union(*edges))
    found: Set[FrozenSet[int]] = set()

    def compatible(current: FrozenSet[int], v: int) -> bool:
        return all(frozenset(S) | {v} in edges for S in combinations(sorted(current), size - 1))

    def extend(current: FrozenSet[int], candidates: Set[int], excluded: Set[int]):
        if not candidates and not excluded:
            found.add(current)
            return
        for v in sorted(candidates):
            grown = current | {v}
            candidates.discard(v)
            extend(grown,
                   {w for w in candidates if compatible(grown, w)},
                   {w for w in excluded if compatible(grown, w)})
            excluded.add(v)

    for edge in sorted(edges, key=sorted):
        extend(edge, {v for v in vertices if v not in edge and compatible(edge, v)}, set())
    return found


def _closed_witness(clique_facets: Sequence[Sequence[Facet]], rows: int) -> Optional[ClosedWitness]:
    m = rows
    for i, j in permutations(range(len(clique_facets)), 2):
        for B in clique_facets[i]:
            t = len(B)
            for C in clique_facets[j]:
                s = len(C)
                if t > s:
                    continue
                for k in range(1, t + 1):
                    for l in range(max(1, k - m + s), min(s, m - t + k) + 1):
                        if B[k - 1] == C[l - 1]:
                            return ClosedWitness(tuple(B), tuple(C), k, l)
    return None


def _vertex_sets(components) -> List[Tuple[int, ...]]:
    return [tuple(c.vertices) for c in components]


class ComplexService:
    """Combinatorics of simplicial complexes"""

    @staticmethod
    def clique_decomposition(complex_: SimplicialComplex) -> CliqueDecomposition:
        by_size: Dict[int, Set[FrozenSet[int]]] = {}
        for F in complex_.facets:
            by_size.setdefault(len(F), set()).add(frozenset(F))
        cliques = [
            Clique(tuple(sorted(W)), size - 1)
            for size, edges in by_size.items()
            for W in _maximal_cliques(edges, size)
        ]
        cliques.sort(key=lambda c: (c.vertices[0], len(c.vertices), c.vertices, c.dim))
        logger.debug("🔺 [COMPLEX] Cliques found", facets=len(complex_.facets), cliques=len(cliques))
        return CliqueDecomposition(tuple(cliques))

    @staticmethod
    def is_closed(complex_: SimplicialComplex,
                  decomposition: Optional[CliqueDecomposition] = None) -> ClosednessResult:
        decomposition = decomposition or ComplexService.clique_decomposition(complex_)
        witness = _closed_witness([c.facets() for c in decomposition], complex_.rows)
        return ClosednessResult(witness is None, witness)

    @staticmethod
    def find_closed_labeling(complex_: SimplicialComplex, limit: Optional[int] = None) -> Optional[Dict[int, int]]:
        """First permutation of the vertex labels, in lexicographic order, making the complex closed"""
        limit = limit or get_settings().perm_limit
        vertices = complex_.vertices
        if len(vertices) > limit:
            raise ResourceLimitError(
                f"{len(vertices)} vertices exceed the brute-force bound {limit}; supply a labeling by hand",
                limit="perm_limit", value=limit,
            )
        cliques = [c.facets() for c in ComplexService.clique_decomposition(complex_)]
        for image in permutations(vertices):
            mapping = dict(zip(vertices, image))
            relabeled = [[tuple(sorted(mapping[v] for v in F)) for F in facets] for facets in cliques]
            if _closed_witness(relabeled, complex_.rows) is None:
                logger.info("🏷️ [COMPLEX] Closed labeling found", mapping=mapping)
                return mapping
        return None

    @staticmethod
    def block_structure(complex_: SimplicialComplex) -> BlockStructure:
        m = complex_.rows
        for F in complex_.facets:
            if len(F) != m:
                raise StructuralError("Block adjacent complexes have every facet of size m",
                                      facet=list(F), rows=m)
        cliques = sorted(ComplexService.clique_decomposition(complex_),
                         key=lambda c: (c.vertices[0], c.vertices[-1]))

        groups: List[List[Clique]] = [[cliques[0]]]
        for clique in cliques[1:]:
            if len(set(groups[-1][-1].vertices) & set(clique.vertices)) == m - 1:
                groups[-1].append(clique)
            else:
                groups.append([clique])

        components: List[BlockComponent] = []
        for group in groups:
            vertices = tuple(sorted({v for c in group for v in c.vertices}))
            where = {v: pos for pos, v in enumerate(vertices, start=1)}
            blocks = []
            for c in group:
                start, end = where[c.vertices[0]], where[c.vertices[-1]]
                if end - start + 1 != len(c.vertices):
                    raise StructuralError("Sub-block is not a segment of the component's vertex list",
                                          block=list(c.vertices))
                blocks.append((start, end))
            for (s1, e1), (s2, e2) in zip(blocks, blocks[1:]):
                if not (s1 < s2 and e1 < e2 and e1 - s2 + 1 == m - 1):
                    raise StructuralError("Consecutive sub-blocks must overlap in m-1 vertices",
                                          blocks=[[s1, e1], [s2, e2]], overlap=max(0, e1 - s2 + 1))
            overlap = 0
            if components:
                previous = components[-1].vertices
                shared = sorted(set(previous) & set(vertices))
                overlap = len(shared)
                if not 0 < overlap < m:
                    raise StructuralError(f"Consecutive components overlap in {overlap} vertices; need 0 < t < {m}",
                                          overlap=overlap)
                if tuple(shared) != previous[-overlap:] or tuple(shared) != vertices[:overlap]:
                    raise StructuralError("Component overlap is not a suffix/prefix segment",
                                          overlap=overlap, shared=shared)
            components.append(BlockComponent(vertices, tuple(blocks), overlap))

        for a, b in combinations(range(len(components)), 2):
            if b > a + 1 and set(components[a].vertices) & set(components[b].vertices):
                shared = sorted(set(components[a].vertices) & set(components[b].vertices))
                raise StructuralError("Non-consecutive components intersect", components=[a + 1, b + 1],
                                      overlap=len(shared))
        logger.debug("🧱 [COMPLEX] Block structure", components=len(components))
        return BlockStructure(m, tuple(components))

    @staticmethod
    def forest_components(complex_: SimplicialComplex) -> List[SimplicialComplex]:
        """Group cliques chained by overlaps of at least two vertices (one when m = 2)"""
        cliques = list(ComplexService.clique_decomposition(complex_))
        needed = 1 if complex_.rows == 2 else 2
        graph = nx.Graph()
        graph.add_nodes_from(range(len(cliques)))
        for a, b in combinations(range(len(cliques)), 2):
            if len(set(cliques[a].vertices) & set(cliques[b].vertices)) >= needed:
                graph.add_edge(a, b)
        groups = []
        for nodes in nx.connected_components(graph):
            facets = {F for idx in nodes for F in cliques[idx].facets()}
            groups.append(SimplicialComplex.from_facets(complex_.rows, facets))
        groups.sort(key=lambda g: (g.vertices[-1], g.vertices[0]))
        return groups

    @staticmethod
    def intersection_graph(components: Sequence) -> IntersectionGraph:
        if not components:
            raise StructuralError("Intersection graph needs at least one component")
        vertex_sets = _vertex_sets(components)
        graph = nx.Graph()
        graph.add_nodes_from(range(1, len(vertex_sets) + 1))
        shared = {}
        for i, j in combinations(range(len(vertex_sets)), 2):
            common = tuple(sorted(set(vertex_sets[i]) & set(vertex_sets[j])))
            if common:
                graph.add_edge(i + 1, j + 1)
                shared[(i + 1, j + 1)] = common
        connected = nx.is_connected(graph)
        cactus = connected and all(
            graph.subgraph(block).number_of_edges() == len(block)
            for block in nx.biconnected_components(graph) if len(block) > 2
        )
        return IntersectionGraph(
            size=len(vertex_sets),
            edges=tuple(sorted(tuple(sorted(e)) for e in graph.edges())),
            shared=shared,
            is_forest=nx.is_forest(graph),
            is_cactus=cactus,
            is_connected=connected,
        )

    @staticmethod
    def check_forest_conditions(complex_: SimplicialComplex, components: Sequence) -> ForestReport:
        m = complex_.rows
        vertex_sets = _vertex_sets(components)
        r = len(vertex_sets)

        failing_triples = tuple(
            (i + 1, j + 1, k + 1) for i, j, k in combinations(range(r), 3)
            if set(vertex_sets[i]) & set(vertex_sets[j]) & set(vertex_sets[k])
        )

        pairs = []
        for i, j in combinations(range(r), 2):
            shared = tuple(sorted(set(vertex_sets[i]) & set(vertex_sets[j])))
            if not shared:
                continue
            satisfied = tuple(
                hit for first, second in ((i, j), (j, i))
                for hit in _condition_c(vertex_sets[first], vertex_sets[second], set(shared), m,
                                        (first + 1, second + 1))
            )
            pairs.append(PairCheck((i + 1, j + 1), shared, len(shared) <= 1, bool(satisfied), satisfied))

        report = ForestReport(
            cond_a=not failing_triples,
            cond_b=all(p.cond_b for p in pairs),
            cond_c=all(p.cond_c for p in pairs),
            pairs=tuple(pairs),
            failing_triples=failing_triples,
        )
        if not report.passed:
            logger.info("🌲 [COMPLEX] Forest conditions fail", failing_pairs=[list(p.pair) for p in report.failing_pairs()],
                        failing_triples=[list(t) for t in failing_triples])
        return report


def _condition_c(first: Tuple[int, ...], second: Tuple[int, ...], shared: set, m: int,
                 orientation: Tuple[int, int]) -> List[dict]:
    """Both alternatives of condition (c) for every 0 <= t <= m-3, in positions of the sorted vertex lists"""
    hits = []
    size_i, size_j = len(first), len(second)
    for t in range(0, m - 2):
        # {u_i + t} with [v_j + t - (m-3), v_j]
        if t + 1 <= size_i:
            lower = max(1, size_j + t - (m - 3))
            window = set(second[lower - 1:size_j])
            if shared <= {first[t]} & window:
                hits.append({"orientation": list(orientation), "alternative": "start", "t": t})
        # {v_i - t} with [u_j, u_j + m - t - 3]
        if size_i - t >= 1:
            upper = min(size_j, 1 + m - t - 3)
            window = set(second[:upper]) if upper >= 1 else set()
            if shared <= {first[size_i - t - 1]} & window:
                hits.append({"orientation": list(orientation), "alternative": "end", "t": t})
    return hits
