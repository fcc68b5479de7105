"""Free ranks of H_1 and H_2 in the resonant case via reduced complexes.

The reduced graph drops the cells whose twisted boundary degenerates:

* edges with both endpoints resonant, and resonant edges, are deleted;
* a resonant vertex whose link meets a non-resonant vertex is deleted
  (taking its incident edges with it); isolated resonant vertices stay.

The free rank of H_1 is then the number of components minus one.

For H_2, the quotient 2-complex starts from the 2-skeleton of the flag
complex and

* removes 2-cells {u,v,w} with {u,v} resonant and w weight-zero, or all
  three vertices weight-zero;
* removes 1-cells that are resonant (as edges, or via both endpoints)
  when their link meets a non-resonant vertex -- any 2-cell losing a face
  this way goes with it;
* finally identifies the endpoints of each surviving resonant 1-cell,
  which may create loops and parallel cells, so the result is a CW
  complex with integer boundary matrices rather than a simplicial one.

The free rank of H_2 is the first reduced Betti number of that complex.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .flag import build_flag_complex
from .graphs import (Character, LabeledGraph, ZeroCharacterError,
                     connected_components, resonance_sets)
from .scalars import FieldSpec


@dataclass
class ReducedGraph:
    graph: LabeledGraph          # the reduced graph
    character: Character         # restriction of the input character
    removed_edges: list          # (edge, reason)
    removed_vertices: list       # (vertex, reason)

    def removal_log(self) -> list[str]:
        log = [f"vertex {v}: {why}" for v, why in self.removed_vertices]
        log += [f"edge {u}-{v}: {why}" for (u, v), why in self.removed_edges]
        return log


def build_gamma1(g: LabeledGraph, c: Character, fspec: FieldSpec) -> ReducedGraph:
    res = resonance_sets(g, c, fspec)
    vr = res.resonant_vertices
    removed_edges = []
    removed_vertices = []
    for (u, v) in g.edge_list:
        if u in vr and v in vr:
            removed_edges.append(((u, v), "both endpoints resonant"))
        elif (u, v) in res.resonant_edges:
            removed_edges.append(((u, v), "resonant edge"))
    gone_edges = {e for e, _ in removed_edges}
    for v in g.vertices:
        if v in vr and any(w not in vr for w in g.neighbors(v)):
            removed_vertices.append((v, "resonant vertex with non-resonant neighbor"))
    gone_vertices = {v for v, _ in removed_vertices}
    for (u, v) in g.edge_list:
        if (u, v) not in gone_edges and (u in gone_vertices or v in gone_vertices):
            removed_edges.append(((u, v), "endpoint deleted"))
            gone_edges.add((u, v))
    vertices = [v for v in g.vertices if v not in gone_vertices]
    edges = [(u, v, g.ell(u, v)) for (u, v) in g.edge_list if (u, v) not in gone_edges]
    reduced = LabeledGraph(vertices, edges)
    return ReducedGraph(reduced, c.restrict(reduced), removed_edges, removed_vertices)


def h1_free_rank(g: LabeledGraph, c: Character, fspec: FieldSpec) -> int:
    if c.is_zero:
        raise ZeroCharacterError("free ranks need a nonzero character")
    reduced = build_gamma1(g, c, fspec)
    return len(connected_components(reduced.graph)) - 1


@dataclass
class QuotientComplex:
    vertex_class: dict                 # vertex -> class id
    cells0: list                       # class ids
    cells1: list                       # surviving edges (u, v)
    cells2: list                       # surviving triangles (a, b, c)
    d1: list = field(default_factory=list)  # integer matrix cells0 x cells1
    d2: list = field(default_factory=list)  # integer matrix cells1 x cells2
    removal_log: list = field(default_factory=list)
    identifications: list = field(default_factory=list)


def build_f2(g: LabeledGraph, c: Character, fspec: FieldSpec) -> QuotientComplex:
    if c.is_zero:
        raise ZeroCharacterError("free ranks need a nonzero character")
    res = resonance_sets(g, c, fspec)
    vr = res.resonant_vertices
    fc = build_flag_complex(g)
    triangles = list(fc.simplices_of(2))
    edges = list(fc.simplices_of(1))
    log = []

    def edge_resonant(u, v):
        return (u, v) in res.resonant_edges or (u in vr and v in vr)

    removed_tris = set()
    for tri in triangles:
        pairs = [(tri[0], tri[1], tri[2]), (tri[0], tri[2], tri[1]), (tri[1], tri[2], tri[0])]
        if all(v in vr for v in tri):
            removed_tris.add(tri)
            log.append(f"2-cell {tri}: all vertices resonant")
        elif any((u, v) in res.resonant_edges and w in vr for (u, v, w) in pairs):
            removed_tris.add(tri)
            log.append(f"2-cell {tri}: resonant edge with resonant opposite vertex")

    removed_edges = set()
    for (u, v) in edges:
        if not edge_resonant(u, v):
            continue
        link = [w for w in g.vertices
                if w not in (u, v) and g.sort_vertices((u, v, w)) in fc]
        if any(w not in vr for w in link):
            removed_edges.add((u, v))
            log.append(f"1-cell {(u, v)}: resonant with non-resonant link")
    for tri in triangles:
        if tri in removed_tris:
            continue
        faces = [(tri[0], tri[1]), (tri[0], tri[2]), (tri[1], tri[2])]
        if any(f in removed_edges for f in faces):
            removed_tris.add(tri)
            log.append(f"2-cell {tri}: lost a face")

    kept_edges = [e for e in edges if e not in removed_edges]
    kept_tris = [t for t in triangles if t not in removed_tris]

    # identify endpoints of the surviving resonant 1-cells
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    identifications = []
    for (u, v) in kept_edges:
        if edge_resonant(u, v):
            identifications.append((u, v))
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
    classes = sorted({find(v) for v in g.vertices}, key=g.index)
    class_pos = {cl: i for i, cl in enumerate(classes)}
    vertex_class = {v: class_pos[find(v)] for v in g.vertices}

    d1 = [[0] * len(kept_edges) for _ in classes]
    for j, (u, v) in enumerate(kept_edges):
        d1[vertex_class[v]][j] += 1
        d1[vertex_class[u]][j] -= 1
    edge_pos = {e: j for j, e in enumerate(kept_edges)}
    d2 = [[0] * len(kept_tris) for _ in kept_edges]
    for j, tri in enumerate(kept_tris):
        for i in range(3):
            face = tri[:i] + tri[i + 1:]
            d2[edge_pos[face]][j] += 1 if i % 2 == 0 else -1
    return QuotientComplex(vertex_class, list(range(len(classes))), kept_edges,
                           kept_tris, d1, d2, log, identifications)


def h2_free_rank(g: LabeledGraph, c: Character, fspec: FieldSpec) -> int:
    """dim of the first reduced homology of the quotient 2-complex over K."""
    qc = build_f2(g, c, fspec)
    f = fspec.scalars()
    d1 = [[f.from_int(x) for x in row] for row in qc.d1]
    d2 = [[f.from_int(x) for x in row] for row in qc.d2]
    r1 = linalg.rank(f, d1)
    r2 = linalg.rank(f, d2)
    return (len(qc.cells1) - r1) - r2
