"""Incidence model for normal simple polyhedra.

A simple polyhedron is stored as three cross-referencing tables:

* sheets  -- the surface pieces (components of the complement of the branch),
             each with orientability, genus/crosscap count and boundary
             circuits written as cyclic sequences of wing traversals;
* arcs    -- the branch pieces between vertices (or whole branch circles),
             of boundary kind (one wing, an interval collar) or triple kind
             (three wings, a Y-shaped collar);
* vertices -- transverse double points of the branch, where two strands
             cross and the twelve local wing-ends are matched by a fixed
             continuation table.

Wing slots: a boundary arc has the single slot 0, a triple arc has slots
0, 1, 2.  A wing traversal (arc, slot, direction) is one full run of a
sheet boundary along that wing; direction +1 runs from end 0 to end 1 of
the arc.  For orientable sheets the traversal directions of all circuits
are coherent with one chosen orientation of the sheet; flipping every
direction of one sheet, or reorienting one arc, yields an equivalent
polyhedron (a gauge change).

At a vertex the four incident arc-ends sit in the cyclic order
[a1, b1, a2, b2] where (a1, a2) and (b1, b2) are the two strands.  Each
arc-end designates one of its three slots as free (the wing that passes
straight through) and binds the other two to the quadrants on its two
sides.  The continuation table is: free wings continue to the free wing
of the opposite end of the same strand; quadrant wings turn the corner
onto the partner wing of the same quadrant.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import InvalidPolyhedron, NotNormal

BOUNDARY = "boundary"
TRIPLE = "triple"

TRIVIAL = "trivial"
SWAP = "swap"

FREE = "free"
LQ = "lq"
RQ = "rq"


def slot_count(kind):
    return 1 if kind == BOUNDARY else 3


@dataclass(frozen=True)
class WingTraversal:
    arc: str
    slot: int
    direction: int  # +1: end0 -> end1, -1: end1 -> end0

    def reversed(self):
        return WingTraversal(self.arc, self.slot, -self.direction)


@dataclass(frozen=True)
class SheetSpec:
    id: str
    orientable: bool
    genus: int  # orientable genus, or crosscap count when non-orientable
    circuits: tuple  # tuple of circuits; each circuit a tuple of WingTraversal

    @property
    def euler(self):
        b = len(self.circuits)
        if self.orientable:
            return 2 - 2 * self.genus - b
        return 2 - self.genus - b


@dataclass(frozen=True)
class BranchArc:
    id: str
    kind: str  # BOUNDARY or TRIPLE
    # None for a closed circle, else ((vertex_id, port), (vertex_id, port))
    endpoints: tuple | None = None
    monodromy: str = TRIVIAL

    @property
    def closed(self):
        return self.endpoints is None


@dataclass(frozen=True)
class EndRoles:
    free: int
    lq: int  # bound to the quadrant counterclockwise of this ray
    rq: int  # bound to the quadrant clockwise of this ray

    def role_of(self, slot):
        if slot == self.free:
            return FREE
        if slot == self.lq:
            return LQ
        if slot == self.rq:
            return RQ
        return None

    def as_tuple(self):
        return (self.free, self.lq, self.rq)


@dataclass(frozen=True)
class VertexSpec:
    id: str
    # four (arc_id, end_index) refs in cyclic order [a1, b1, a2, b2];
    # strands are (ends[0], ends[2]) and (ends[1], ends[3])
    ends: tuple
    roles: tuple  # four EndRoles, parallel to ends

    @property
    def strands(self):
        return ((self.ends[0], self.ends[2]), (self.ends[1], self.ends[3]))


@dataclass(frozen=True)
class Violation:
    code: str
    subject: str
    detail: str = ""

    def __str__(self):
        return f"{self.code}({self.subject}){': ' + self.detail if self.detail else ''}"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple = ()

    @staticmethod
    def passed():
        return ValidationReport(True, ())

    @staticmethod
    def failed(violations):
        return ValidationReport(False, tuple(violations))

    def __str__(self):
        if self.ok:
            return "ok"
        return "invalid: " + "; ".join(str(v) for v in self.violations)


@dataclass(frozen=True)
class SimplePolyhedron:
    sheets: tuple
    arcs: tuple
    vertices: tuple
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "_sheet_by_id", {s.id: s for s in self.sheets})
        object.__setattr__(self, "_arc_by_id", {a.id: a for a in self.arcs})
        object.__setattr__(self, "_vertex_by_id", {v.id: v for v in self.vertices})

    def sheet(self, sid):
        return self._sheet_by_id[sid]

    def arc(self, aid):
        return self._arc_by_id[aid]

    def vertex(self, vid):
        return self._vertex_by_id[vid]

    def with_name(self, name):
        return replace(self, name=name)


# ---------------------------------------------------------------------------
# continuation machinery
# ---------------------------------------------------------------------------

def continue_at_vertex(vertex, port_in, slot_in):
    """Match a wing-end arriving at `port_in` to the wing-end it leaves by.

    Returns (port_out, slot_out).  The matching is an involution on the
    twelve (port, slot) pairs of the vertex.
    """
    roles_in = vertex.roles[port_in]
    role = roles_in.role_of(slot_in)
    if role is None:
        raise ValueError(f"slot {slot_in} not present at vertex {vertex.id} port {port_in}")
    if role == FREE:
        port_out = (port_in + 2) % 4
        return port_out, vertex.roles[port_out].free
    if role == LQ:
        port_out = (port_in + 1) % 4
        return port_out, vertex.roles[port_out].rq
    port_out = (port_in - 1) % 4
    return port_out, vertex.roles[port_out].lq


def monodromy_perm(arc):
    if arc.monodromy == SWAP:
        return {0: 0, 1: 2, 2: 1}
    return {0: 0, 1: 1, 2: 2}


def next_traversal(poly, trav):
    """The traversal forced after `trav` by the continuation rules."""
    arc = poly.arc(trav.arc)
    if arc.closed:
        perm = monodromy_perm(arc)
        return WingTraversal(arc.id, perm[trav.slot], trav.direction)
    end_index = 1 if trav.direction > 0 else 0
    vid, port = arc.endpoints[end_index]
    vertex = poly.vertex(vid)
    port_out, slot_out = continue_at_vertex(vertex, port, trav.slot)
    arc_out, end_out = vertex.ends[port_out]
    direction = 1 if end_out == 0 else -1
    return WingTraversal(arc_out, slot_out, direction)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def validate_polyhedron(poly):
    """Structural validation; all failures are reported, never raised."""
    v = []

    ids = [s.id for s in poly.sheets] + [a.id for a in poly.arcs] + [w.id for w in poly.vertices]
    seen = set()
    for i in ids:
        if i in seen:
            v.append(Violation("DuplicateId", i))
        seen.add(i)

    for sheet in poly.sheets:
        if sheet.genus < 0:
            v.append(Violation("NegativeGenus", sheet.id))
        if not sheet.orientable and sheet.genus < 1:
            v.append(Violation("NonOrientableGenus", sheet.id,
                               "crosscap count must be at least 1"))

    for arc in poly.arcs:
        if arc.kind not in (BOUNDARY, TRIPLE):
            v.append(Violation("ArcKind", arc.id, arc.kind))
            continue
        if arc.kind == BOUNDARY and not arc.closed:
            v.append(Violation("BoundaryArcOpen", arc.id,
                               "boundary arcs are whole circles"))
        if arc.monodromy == SWAP and (arc.kind != TRIPLE or not arc.closed):
            v.append(Violation("SwapPlacement", arc.id,
                               "swap monodromy only on closed triple circles"))
        if arc.monodromy not in (TRIVIAL, SWAP):
            v.append(Violation("Monodromy", arc.id, arc.monodromy))
        if not arc.closed:
            for end_index, ref in enumerate(arc.endpoints):
                vid, port = ref
                if vid not in poly._vertex_by_id:
                    v.append(Violation("UnknownVertex", arc.id, vid))
                    continue
                vertex = poly.vertex(vid)
                if not (0 <= port < 4):
                    v.append(Violation("PortRange", arc.id, str(port)))
                elif vertex.ends[port] != (arc.id, end_index):
                    v.append(Violation("StrandMismatch", arc.id,
                                       f"end {end_index} vs {vid}:{port}"))

    port_claims = {}
    for vertex in poly.vertices:
        if len(vertex.ends) != 4 or len(vertex.roles) != 4:
            v.append(Violation("VertexShape", vertex.id))
            continue
        for port, (aid, end_index) in enumerate(vertex.ends):
            if aid not in poly._arc_by_id:
                v.append(Violation("UnknownArc", vertex.id, aid))
                continue
            arc = poly.arc(aid)
            if arc.kind != TRIPLE:
                v.append(Violation("VertexEndKind", vertex.id,
                                   f"{aid} is not triple"))
            if arc.closed:
                v.append(Violation("StrandMismatch", vertex.id,
                                   f"{aid} is closed but listed at a vertex"))
            elif arc.endpoints[end_index] != (vertex.id, port):
                v.append(Violation("StrandMismatch", vertex.id,
                                   f"port {port} vs {aid} end {end_index}"))
            key = (aid, end_index)
            if key in port_claims:
                v.append(Violation("ArcEndReused", vertex.id, f"{aid}:{end_index}"))
            port_claims[key] = (vertex.id, port)
        for port, roles in enumerate(vertex.roles):
            if sorted(roles.as_tuple()) != [0, 1, 2]:
                v.append(Violation("VertexRoles", vertex.id, f"port {port}"))

    if v:
        return ValidationReport.failed(v)

    # flag bookkeeping: every wing slot claimed by exactly one traversal
    claims = {}
    for sheet in poly.sheets:
        for ci, circuit in enumerate(sheet.circuits):
            if not circuit:
                v.append(Violation("EmptyCircuit", sheet.id, f"circuit {ci}"))
                continue
            for pos, trav in enumerate(circuit):
                if trav.arc not in poly._arc_by_id:
                    v.append(Violation("CircuitRef", sheet.id, f"unknown arc {trav.arc}"))
                    continue
                arc = poly.arc(trav.arc)
                if not (0 <= trav.slot < slot_count(arc.kind)):
                    v.append(Violation("CircuitRef", sheet.id,
                                       f"arc {trav.arc} slot {trav.slot}"))
                    continue
                if trav.direction not in (1, -1):
                    v.append(Violation("CircuitRef", sheet.id, "direction"))
                    continue
                key = (trav.arc, trav.slot)
                if key in claims:
                    v.append(Violation("SlotDoubleFilled", trav.arc, f"slot {trav.slot}"))
                claims[key] = (sheet.id, ci, pos)

    for arc in poly.arcs:
        missing = [s for s in range(slot_count(arc.kind)) if (arc.id, s) not in claims]
        if missing:
            code = "TripleArcDegree" if arc.kind == TRIPLE else "BoundaryArcDegree"
            v.append(Violation(code, arc.id,
                               f"{slot_count(arc.kind) - len(missing)} of "
                               f"{slot_count(arc.kind)} slots filled"))

    if v:
        return ValidationReport.failed(v)

    # circuit continuity under the continuation table
    for sheet in poly.sheets:
        for ci, circuit in enumerate(sheet.circuits):
            for pos, trav in enumerate(circuit):
                expected = next_traversal(poly, trav)
                actual = circuit[(pos + 1) % len(circuit)]
                if actual != expected:
                    v.append(Violation("CircuitContinuity", sheet.id,
                                       f"circuit {ci} after {trav.arc}:{trav.slot}"))

    if v:
        return ValidationReport.failed(v)
    return ValidationReport.passed()


def require_valid(poly):
    report = validate_polyhedron(poly)
    if not report.ok:
        raise InvalidPolyhedron(report)
    return poly


def is_normal(poly):
    """True when every branch collar bundle is trivial."""
    require_valid(poly)
    return all(arc.monodromy == TRIVIAL for arc in poly.arcs)


def require_normal(poly):
    if not is_normal(poly):
        raise NotNormal(f"{poly.name or 'polyhedron'} has swap monodromy")
    return poly


# ---------------------------------------------------------------------------
# derived structure
# ---------------------------------------------------------------------------

class UnionFind:
    def __init__(self):
        self._parent = {}

    def find(self, x):
        parent = self._parent
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != x:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self._parent[ra] = rb


def strand_circles(poly):
    """The immersed branch circles: arcs joined straight-through at vertices.

    Returns a sorted list of sorted arc-id tuples.  Each circle is the image
    of one component of the singular set of any realizing map.
    """
    uf = UnionFind()
    for arc in poly.arcs:
        uf.find(arc.id)
    for vertex in poly.vertices:
        for first, second in vertex.strands:
            uf.union(first[0], second[0])
    groups = {}
    for arc in poly.arcs:
        groups.setdefault(uf.find(arc.id), []).append(arc.id)
    return sorted(tuple(sorted(g)) for g in groups.values())


def strand_key(poly, arc_id):
    """Stable identifier of the strand circle containing `arc_id`."""
    for circle in strand_circles(poly):
        if arc_id in circle:
            return circle[0]
    raise KeyError(arc_id)


def branch_components(poly):
    """Topological components of the branch (arcs plus vertices)."""
    uf = UnionFind()
    for arc in poly.arcs:
        uf.find(arc.id)
        if not arc.closed:
            for vid, _ in arc.endpoints:
                uf.union(arc.id, "v:" + vid)
    groups = {}
    for arc in poly.arcs:
        groups.setdefault(uf.find(arc.id), []).append(arc.id)
    return sorted(tuple(sorted(g)) for g in groups.values())


def euler_characteristic(poly):
    """Sum of sheet characteristics plus the branch graph characteristic.

    Closed branch circles contribute 0; an open arc contributes -1 and a
    vertex +1, which is the cell count of the branch as a graph.
    """
    require_valid(poly)
    total = sum(sheet.euler for sheet in poly.sheets)
    open_arcs = sum(1 for arc in poly.arcs if not arc.closed)
    return total + len(poly.vertices) - open_arcs


def wing_flags(poly):
    """Map (arc_id, slot) -> (sheet_id, circuit_index, position)."""
    flags = {}
    for sheet in poly.sheets:
        for ci, circuit in enumerate(sheet.circuits):
            for pos, trav in enumerate(circuit):
                flags[(trav.arc, trav.slot)] = (sheet.id, ci, pos)
    return flags


def arc_wings(poly, arc_id):
    """The traversals occupying the slots of one arc, keyed by slot."""
    out = {}
    for sheet in poly.sheets:
        for ci, circuit in enumerate(sheet.circuits):
            for pos, trav in enumerate(circuit):
                if trav.arc == arc_id:
                    out[trav.slot] = (sheet.id, ci, pos, trav.direction)
    return out
