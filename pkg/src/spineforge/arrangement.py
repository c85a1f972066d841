"""Immersed plane curve arrangements as combinatorial planar maps.

An arrangement stores crossings (4-valent, two transverse strands), directed
edges grouped into cyclically ordered curves, and faces given by explicit
contour walks.  Contours list directed edge-sides with the face on the left
of the walking direction; the corner rule at a crossing is "arrive on ray i,
leave on ray i+1" with the four rays in counterclockwise order.

Coordinates are never stored.  Gallery builders may attach decorative
drawing hints to curves and faces; they carry no semantics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import UnionFind, ValidationReport, Violation
from .errors import InvalidArrangement, PlanError


@dataclass(frozen=True)
class Crossing:
    id: str
    # four (edge_id, end_index) rays in counterclockwise cyclic order;
    # strands are (order[0], order[2]) and (order[1], order[3])
    order: tuple


@dataclass(frozen=True)
class ArrEdge:
    id: str
    curve: str
    # None for a closed one-edge curve, else ((xid, pos), (xid, pos));
    # pos is the index of this (edge, end) in the crossing's order tuple
    ends: tuple | None
    left: str
    right: str

    @property
    def closed(self):
        return self.ends is None


@dataclass(frozen=True)
class Curve:
    id: str
    source: tuple  # ("branch", strand_key) or ("aux", label)
    edges: tuple   # cyclic, directed along the curve
    draw: tuple | None = None  # decorative (cx, cy, r), no semantics


@dataclass(frozen=True)
class Face:
    id: str
    # tuple of contours; each contour a tuple of (edge_id, direction)
    contours: tuple
    unbounded: bool = False
    label: str = ""
    draw: tuple | None = None  # decorative label anchor (x, y)


@dataclass(frozen=True)
class CurveArrangement:
    crossings: tuple
    edges: tuple
    curves: tuple
    faces: tuple

    def __post_init__(self):
        object.__setattr__(self, "_crossing_by_id", {c.id: c for c in self.crossings})
        object.__setattr__(self, "_edge_by_id", {e.id: e for e in self.edges})
        object.__setattr__(self, "_curve_by_id", {c.id: c for c in self.curves})
        object.__setattr__(self, "_face_by_id", {f.id: f for f in self.faces})

    def crossing(self, xid):
        return self._crossing_by_id[xid]

    def edge(self, eid):
        return self._edge_by_id[eid]

    def curve(self, cid):
        return self._curve_by_id[cid]

    def face(self, fid):
        return self._face_by_id[fid]

    @property
    def unbounded_face(self):
        for f in self.faces:
            if f.unbounded:
                return f
        raise InvalidArrangement(ValidationReport.failed(
            [Violation("NoUnboundedFace", "arrangement")]))


def empty_arrangement():
    return CurveArrangement(
        crossings=(), edges=(), curves=(),
        faces=(Face("f_out", contours=(), unbounded=True, label="outside"),))


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def _side_face(edge, direction):
    return edge.left if direction > 0 else edge.right


def _walk_step(arr, eid, direction):
    """Continue a face-on-left contour walk past the end of (eid, direction).

    Rays at a crossing are stored in counterclockwise order, so walking with
    the face on the left turns from the arrival ray to its clockwise
    neighbor."""
    edge = arr.edge(eid)
    if edge.closed:
        return eid, direction
    end_index = 1 if direction > 0 else 0
    xid, pos = edge.ends[end_index]
    crossing = arr.crossing(xid)
    out_edge, out_end = crossing.order[(pos - 1) % 4]
    out_dir = 1 if out_end == 0 else -1
    return out_edge, out_dir


def validate_arrangement(arr):
    v = []
    ids = ([c.id for c in arr.crossings] + [e.id for e in arr.edges]
           + [c.id for c in arr.curves] + [f.id for f in arr.faces])
    seen = set()
    for i in ids:
        if i in seen:
            v.append(Violation("DuplicateId", i))
        seen.add(i)

    for crossing in arr.crossings:
        if len(crossing.order) != 4:
            v.append(Violation("NotFourValent", crossing.id))
            continue
        if len(set(crossing.order)) != 4:
            v.append(Violation("NotFourValent", crossing.id, "repeated ray"))
        for pos, (eid, end) in enumerate(crossing.order):
            if eid not in arr._edge_by_id:
                v.append(Violation("DanglingEdge", crossing.id, eid))
                continue
            edge = arr.edge(eid)
            if edge.closed or edge.ends[end] != (crossing.id, pos):
                v.append(Violation("DanglingEdge", crossing.id,
                                   f"{eid}:{end} backref"))

    for edge in arr.edges:
        if edge.curve not in arr._curve_by_id:
            v.append(Violation("UnknownCurve", edge.id, edge.curve))
        for fid in (edge.left, edge.right):
            if fid not in arr._face_by_id:
                v.append(Violation("UnknownFace", edge.id, fid))
        if edge.ends is not None:
            for xid, pos in edge.ends:
                if xid not in arr._crossing_by_id:
                    v.append(Violation("DanglingEdge", edge.id, xid))

    if v:
        return ValidationReport.failed(v)

    for curve in arr.curves:
        if not curve.edges:
            v.append(Violation("EmptyCurve", curve.id))
            continue
        for eid in curve.edges:
            edge = arr.edge(eid)
            if edge.curve != curve.id:
                v.append(Violation("CurveMembership", curve.id, eid))
        if len(curve.edges) == 1 and arr.edge(curve.edges[0]).closed:
            continue
        for i, eid in enumerate(curve.edges):
            edge = arr.edge(eid)
            nxt = arr.edge(curve.edges[(i + 1) % len(curve.edges)])
            if edge.closed or nxt.closed:
                v.append(Violation("CurveChain", curve.id, eid))
                continue
            xid, pos = edge.ends[1]
            crossing = arr.crossing(xid)
            mate_edge, mate_end = crossing.order[(pos + 2) % 4]
            if mate_edge != nxt.id or mate_end != 0:
                v.append(Violation("CurveChain", curve.id,
                                   f"{eid} -> {nxt.id} not a strand at {xid}"))

    # 2 strands per crossing means each strand joins consecutive curve edges;
    # checked above via CurveChain for every consecutive pair.

    side_claims = {}
    for face in arr.faces:
        for contour in face.contours:
            if not contour:
                v.append(Violation("EmptyContour", face.id))
                continue
            for eid, direction in contour:
                if eid not in arr._edge_by_id:
                    v.append(Violation("UnknownEdgeSide", face.id, eid))
                    continue
                key = (eid, direction)
                if key in side_claims:
                    v.append(Violation("SideDoubleClaimed", face.id, f"{eid}:{direction}"))
                side_claims[key] = face.id
                if _side_face(arr.edge(eid), direction) != face.id:
                    v.append(Violation("SideFaceMismatch", face.id, f"{eid}:{direction}"))
            for i, (eid, direction) in enumerate(contour):
                nxt = contour[(i + 1) % len(contour)]
                if _walk_step(arr, eid, direction) != nxt:
                    v.append(Violation("ContourWalk", face.id, f"after {eid}:{direction}"))

    for edge in arr.edges:
        for direction in (1, -1):
            if (edge.id, direction) not in side_claims:
                v.append(Violation("SideUnclaimed", edge.id, str(direction)))

    if sum(1 for f in arr.faces if f.unbounded) != 1:
        v.append(Violation("UnboundedCount", "arrangement"))

    if v:
        return ValidationReport.failed(v)

    # Euler formula, component aware: closed one-edge curves get an
    # auxiliary vertex so each contributes V=1, E=1.
    closed_curves = sum(1 for c in arr.curves
                        if len(c.edges) == 1 and arr.edge(c.edges[0]).closed)
    vertices = len(arr.crossings) + closed_curves
    uf = UnionFind()
    for curve in arr.curves:
        uf.find(curve.id)
    for crossing in arr.crossings:
        curves_here = {arr.edge(eid).curve for eid, _ in crossing.order}
        curves_here = sorted(curves_here)
        for a, b in zip(curves_here, curves_here[1:]):
            uf.union(a, b)
    components = len({uf.find(c.id) for c in arr.curves}) if arr.curves else 0
    faces = len(arr.faces)
    if arr.curves:
        if vertices - len(arr.edges) + faces != 1 + components:
            v.append(Violation("EulerFormula", "arrangement",
                               f"V-E+F = {vertices - len(arr.edges) + faces}, "
                               f"components = {components}"))
    elif faces != 1:
        v.append(Violation("EulerFormula", "arrangement", "empty map needs one face"))

    if v:
        return ValidationReport.failed(v)
    return ValidationReport.passed()


def require_valid_arrangement(arr):
    report = validate_arrangement(arr)
    if not report.ok:
        raise InvalidArrangement(report)
    return arr


# ---------------------------------------------------------------------------
# winding numbers
# ---------------------------------------------------------------------------

def winding_numbers(arr, oriented_curves):
    """Winding of a family of oriented curves around every face.

    `oriented_curves` maps curve_id -> +1/-1 (sign relative to the stored
    direction).  Faces not separated by the family share a value; the
    unbounded face is 0.
    """
    values = {arr.unbounded_face.id: 0}
    queue = [arr.unbounded_face.id]
    while queue:
        fid = queue.pop()
        base = values[fid]
        for edge in arr.edges:
            sign = oriented_curves.get(edge.curve, 0)
            if edge.left == fid:
                nxt, delta = edge.right, -sign
            elif edge.right == fid:
                nxt, delta = edge.left, sign
            else:
                continue
            target = base + delta
            if nxt in values:
                if values[nxt] != target:
                    raise InvalidArrangement(ValidationReport.failed(
                        [Violation("WindingInconsistent", nxt)]))
            else:
                values[nxt] = target
                queue.append(nxt)
    for face in arr.faces:
        values.setdefault(face.id, 0)
    return values


# ---------------------------------------------------------------------------
# insertion (used by surgeries)
# ---------------------------------------------------------------------------

@dataclass
class RouteCross:
    edge: str
    position: Fraction


@dataclass
class RouteFaceRun:
    face: str
    holes: str | None = None  # "left" | "right": side taking untouched contours


class ArrangementBuilder:
    """Mutable companion of CurveArrangement for curve insertion."""

    def __init__(self, arr):
        self.crossings = {c.id: list(c.order) for c in arr.crossings}
        self.edges = {e.id: {"curve": e.curve, "ends": e.ends,
                             "left": e.left, "right": e.right} for e in arr.edges}
        self.curves = {c.id: {"source": c.source, "edges": list(c.edges),
                              "draw": c.draw} for c in arr.curves}
        self.faces = {f.id: {"contours": [list(c) for c in f.contours],
                             "unbounded": f.unbounded, "label": f.label,
                             "draw": f.draw} for f in arr.faces}
        self._counter = 0

    def fresh(self, prefix):
        while True:
            self._counter += 1
            candidate = f"{prefix}{self._counter}"
            if (candidate not in self.edges and candidate not in self.faces
                    and candidate not in self.crossings and candidate not in self.curves):
                return candidate

    # -- circles without crossings ------------------------------------

    def insert_circle(self, curve_id, host_face, orient, source,
                      label="", draw=None):
        """Insert a closed curve inside `host_face`; returns the inner face id.

        orient +1 encloses its interior on the curve's left, -1 on its right.
        """
        if curve_id in self.curves:
            raise PlanError("DuplicateImage", curve_id)
        edge_id = self.fresh("e_")
        inner_id = self.fresh("f_")
        if orient > 0:
            left, right = inner_id, host_face
            inner_side, host_side = 1, -1
        else:
            left, right = host_face, inner_id
            inner_side, host_side = -1, 1
        self.edges[edge_id] = {"curve": curve_id, "ends": None,
                               "left": left, "right": right}
        self.curves[curve_id] = {"source": source, "edges": [edge_id], "draw": draw}
        self.faces[inner_id] = {"contours": [[(edge_id, inner_side)]],
                                "unbounded": False, "label": label, "draw": None}
        self.faces[host_face]["contours"].append([(edge_id, host_side)])
        return inner_id

    # -- routes with crossings ------------------------------------------

    def _split_edge(self, eid, positions):
        """Split directed edge `eid` at sorted positions; returns segment ids
        and the fresh crossing ids in order along the edge.

        An edge with endpoints splits into n+1 segments; a closed edge
        splits into n segments cyclically, segment i running from the
        crossing at positions[i] to the one at positions[i+1]."""
        info = self.edges.pop(eid)
        closed = info["ends"] is None
        n = len(positions)
        n_segs = n if closed else n + 1
        segs = []
        for i in range(n_segs):
            seg = self.fresh("e_")
            segs.append(seg)
            self.edges[seg] = {"curve": info["curve"], "ends": [None, None],
                               "left": info["left"], "right": info["right"]}
        xids = [self.fresh("x_") for _ in range(n)]
        for xid in xids:
            # ray positions 0 (incoming segment) and 2 (outgoing) reserved
            # now; the route rays 1 and 3 are filled by the caller
            self.crossings[xid] = [None, None, None, None]
        if closed:
            for i, xid in enumerate(xids):
                seg_in = segs[(i - 1) % n]
                seg_out = segs[i]
                self.crossings[xid][0] = (seg_in, 1)
                self.crossings[xid][2] = (seg_out, 0)
                self.edges[seg_in]["ends"][1] = (xid, 0)
                self.edges[seg_out]["ends"][0] = (xid, 2)
        else:
            first_end, last_end = info["ends"]
            self.edges[segs[0]]["ends"][0] = first_end
            self.edges[segs[-1]]["ends"][1] = last_end
            for i, xid in enumerate(xids):
                self.crossings[xid][0] = (segs[i], 1)
                self.crossings[xid][2] = (segs[i + 1], 0)
                self.edges[segs[i]]["ends"][1] = (xid, 0)
                self.edges[segs[i + 1]]["ends"][0] = (xid, 2)
            if first_end is not None:
                xid, pos = first_end
                self.crossings[xid][pos] = (segs[0], 0)
            if last_end is not None:
                xid, pos = last_end
                self.crossings[xid][pos] = (segs[-1], 1)
        for seg in segs:
            self.edges[seg]["ends"] = tuple(self.edges[seg]["ends"])
        # replace in curve edge list
        curve_edges = self.curves[info["curve"]]["edges"]
        at = curve_edges.index(eid)
        curve_edges[at:at + 1] = segs
        # update contours containing the old edge
        for face in self.faces.values():
            for contour in face["contours"]:
                out = []
                for ceid, direction in contour:
                    if ceid != eid:
                        out.append((ceid, direction))
                    elif direction > 0:
                        out.extend((s, 1) for s in segs)
                    else:
                        out.extend((s, -1) for s in reversed(segs))
                contour[:] = out
        return segs, xids

    def insert_route(self, curve_id, crossing_points, face_runs, source,
                     draw=None):
        """Insert a closed oriented route crossing existing edges.

        crossing_points: list of RouteCross; face_runs: list of RouteFaceRun,
        face_runs[i] is the run after crossing_points[i].  Returns the list
        of new crossing ids, parallel to crossing_points.
        """
        if curve_id in self.curves:
            raise PlanError("DuplicateImage", curve_id)
        k = len(crossing_points)
        if k == 0 or len(face_runs) != k:
            raise PlanError("RouteShape", curve_id)

        by_edge = {}
        for i, cp in enumerate(crossing_points):
            by_edge.setdefault(cp.edge, []).append((cp.position, i))
        positions_seen = {}
        for eid, items in by_edge.items():
            ps = [p for p, _ in items]
            if len(set(ps)) != len(ps):
                raise PlanError("RouteShape", f"repeated position on {eid}")
            positions_seen[eid] = sorted(items)

        route_edge_ids = [self.fresh("e_") for _ in range(k)]
        new_crossing_of = [None] * k

        for eid, items in positions_seen.items():
            segs, xids = self._split_edge(eid, [p for p, _ in items])
            for (_, idx), xid in zip(items, xids):
                new_crossing_of[idx] = xid

        # fill route rays: crossing i joins route edge i-1 (incoming) and i
        # (outgoing); ray side depends on which face the route comes from
        for i in range(k):
            xid = new_crossing_of[i]
            seg_in, _ = self.crossings[xid][0]
            left, right = self.edges[seg_in]["left"], self.edges[seg_in]["right"]
            prev_face = face_runs[(i - 1) % k].face
            next_face = face_runs[i].face
            base_of = {}
            for fid in (left, right):
                base_of[fid] = fid
            from_face = self._resolve_side(prev_face, (left, right))
            to_face = self._resolve_side(next_face, (left, right))
            if from_face == to_face:
                raise PlanError("NonTransverse",
                                f"route {curve_id} does not cross {seg_in}")
            r_in = (route_edge_ids[(i - 1) % k], 1)
            r_out = (route_edge_ids[i], 0)
            if from_face == left:
                # crossing left -> right: ccw rays (e_in, r_out, e_out, r_in)
                self.crossings[xid][1] = r_out
                self.crossings[xid][3] = r_in
            else:
                self.crossings[xid][1] = r_in
                self.crossings[xid][3] = r_out

        for i, reid in enumerate(route_edge_ids):
            xa = new_crossing_of[i]
            xb = new_crossing_of[(i + 1) % k]
            pos_a = self.crossings[xa].index((reid, 0))
            pos_b = self.crossings[xb].index((reid, 1))
            self.edges[reid] = {"curve": curve_id,
                                "ends": ((xa, pos_a), (xb, pos_b)),
                                "left": None, "right": None}
        self.curves[curve_id] = {"source": source, "edges": list(route_edge_ids),
                                 "draw": draw}

        self._resplit_faces(route_edge_ids, face_runs)
        return new_crossing_of

    def _resolve_side(self, declared_face, sides):
        """Map a declared (possibly already split) face onto an edge side."""
        if declared_face in sides:
            return declared_face
        # after splits the declared id may be stale; match via split records
        for fid in sides:
            if self._face_origin(fid) == declared_face:
                return fid
        raise PlanError("RouteFaceMismatch",
                        f"face {declared_face} not adjacent to crossed edge")

    def _face_origin(self, fid):
        origins = getattr(self, "_origins", {})
        while fid in origins:
            fid = origins[fid]
        return fid

    def _resplit_faces(self, route_edge_ids, face_runs):
        """Retrace contours around the new route and reassemble faces."""
        route_set = set(route_edge_ids)
        touched_faces = set()
        for reid in route_edge_ids:
            # the faces the route runs through, via its crossings' seg edges
            xa, _ = self.edges[reid]["ends"][0]
            for eid, _ in self.crossings[xa]:
                if eid not in route_set:
                    touched_faces.add(self.edges[eid]["left"])
                    touched_faces.add(self.edges[eid]["right"])
        holes_decl = {}
        for run in face_runs:
            origin = self._face_origin(run.face)
            if run.holes is not None:
                holes_decl.setdefault(origin, run.holes)

        # trace all contour cycles incident to touched faces
        def walk(eid, direction):
            cycle = []
            cur = (eid, direction)
            while True:
                cycle.append(cur)
                nxt = self._builder_walk_step(*cur)
                if nxt == (eid, direction):
                    return cycle
                cur = nxt

        # directed sides belonging to touched faces (old assignment) or routes
        pending = set()
        for eid, info in self.edges.items():
            if eid in route_set:
                pending.add((eid, 1))
                pending.add((eid, -1))
            else:
                if info["left"] in touched_faces:
                    pending.add((eid, 1))
                if info["right"] in touched_faces:
                    pending.add((eid, -1))

        cycles = []
        while pending:
            eid, direction = min(pending)
            cycle = walk(eid, direction)
            for item in cycle:
                pending.discard(item)
            cycles.append(cycle)

        # group cycles by the original face they bound
        groups = {}
        for cycle in cycles:
            votes = set()
            for eid, direction in cycle:
                if eid in route_set:
                    continue
                info = self.edges[eid]
                votes.add(info["left"] if direction > 0 else info["right"])
            if len(votes) != 1:
                raise PlanError("RouteShape", f"ambiguous face for cycle: {sorted(votes)}")
            groups.setdefault(votes.pop(), []).append(cycle)

        if not hasattr(self, "_origins"):
            self._origins = {}

        for fid, face_cycles in groups.items():
            face = self.faces.pop(fid)
            route_cycles = [c for c in face_cycles
                            if any(eid in route_set for eid, _ in c)]
            hole_cycles = [c for c in face_cycles
                           if not any(eid in route_set for eid, _ in c)]

            if len(route_cycles) <= 1:
                # nothing split off (route merged contours, or face only
                # touched through shared crossings); face keeps its identity
                contours = [[tuple(x) for x in c] for c in route_cycles + hole_cycles]
                self.faces[fid] = {"contours": contours,
                                   "unbounded": face["unbounded"],
                                   "label": face["label"], "draw": face["draw"]}
                for cycle in route_cycles:
                    self._set_route_sides(cycle, fid, route_set)
                continue

            if face["unbounded"]:
                raise PlanError("UnsupportedRoute", "chord through the unbounded face")
            if hole_cycles and len(route_cycles) != 2:
                raise PlanError("UnsupportedRoute",
                                "multiple chords through a face with holes")
            if hole_cycles and holes_decl.get(self._face_origin(fid)) is None:
                raise PlanError("UnsupportedRoute",
                                f"face {fid} split with undeclared hole side")

            new_ids = []
            for cycle in sorted(route_cycles, key=min):
                new_id = self.fresh("f_")
                self._origins[new_id] = self._face_origin(fid)
                self.faces[new_id] = {"contours": [[tuple(x) for x in cycle]],
                                      "unbounded": False,
                                      "label": face["label"], "draw": face["draw"]}
                new_ids.append(new_id)
                self._set_route_sides(cycle, new_id, route_set)
            if hole_cycles:
                side = holes_decl.get(self._face_origin(fid))
                target = self._piece_on_side(new_ids, route_set, side)
                for cycle in hole_cycles:
                    self.faces[target]["contours"].append([tuple(x) for x in cycle])
                    for eid, direction in cycle:
                        info = self.edges[eid]
                        if direction > 0:
                            info["left"] = target
                        else:
                            info["right"] = target

    def _piece_on_side(self, new_ids, route_set, side):
        for fid in new_ids:
            for contour in self.faces[fid]["contours"]:
                for eid, direction in contour:
                    if eid in route_set:
                        if side == "left" and direction > 0:
                            return fid
                        if side == "right" and direction < 0:
                            return fid
        raise PlanError("UnsupportedRoute", "hole side does not touch the route")

    def _set_route_sides(self, cycle, face_id, route_set):
        for eid, direction in cycle:
            info = self.edges[eid]
            if direction > 0:
                info["left"] = face_id
            else:
                info["right"] = face_id

    def _builder_walk_step(self, eid, direction):
        info = self.edges[eid]
        if info["ends"] is None:
            return eid, direction
        end_index = 1 if direction > 0 else 0
        xid, pos = info["ends"][end_index]
        out_edge, out_end = self.crossings[xid][(pos - 1) % 4]
        return out_edge, (1 if out_end == 0 else -1)

    # -- retagging and freezing -----------------------------------------

    def retag_curve(self, curve_id, source):
        self.curves[curve_id]["source"] = source

    def face_ids_from(self, origin_fid):
        """Current face ids descending from an original face id."""
        out = [fid for fid in self.faces
               if self._face_origin(fid) == origin_fid]
        return out or ([origin_fid] if origin_fid in self.faces else [])

    def freeze(self):
        crossings = tuple(Crossing(xid, tuple(order))
                          for xid, order in sorted(self.crossings.items()))
        edges = tuple(ArrEdge(eid, info["curve"],
                              info["ends"] if info["ends"] is None else tuple(info["ends"]),
                              info["left"], info["right"])
                      for eid, info in sorted(self.edges.items()))
        curves = tuple(Curve(cid, info["source"], tuple(info["edges"]), info.get("draw"))
                       for cid, info in sorted(self.curves.items()))
        faces = tuple(Face(fid, tuple(tuple(c) for c in info["contours"]),
                           info["unbounded"], info["label"], info.get("draw"))
                      for fid, info in sorted(self.faces.items()))
        return CurveArrangement(crossings, edges, curves, faces)
