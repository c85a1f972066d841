"""Surface attachment along embedded circles, and disk normalization.

A surgery plan names disjoint circles embedded in the polyhedron, each as a
cyclic itinerary of sheet segments and transverse branch crossings, plus a
connected patch surface glued along all of them.  Attaching the patch cuts
every visited sheet along its segments, turns each circle into new triple
branch (one arc per segment), turns each branch crossing into a new vertex
whose free wings are the uncut old wing and the patch, and adds the patch
as one new sheet.  Fiber counts grow by the winding number of the oriented
image curves, which is the covering multiplicity of the immersed patch.

Supported itineraries: circles without crossings bound disks inside a
single sheet; circles with crossings run through disk sheets (any number
of chords) or through orientable non-disk sheets (a single chord with a
declared genus/circuit split).  Anything else is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .arrangement import ArrangementBuilder, RouteCross, RouteFaceRun
from .bornmap import BornMap, StrandAssignment, require_valid_born_map, validate_born_map
from .core import (TRIPLE, TRIVIAL, BranchArc, EndRoles, SheetSpec,
                   SimplePolyhedron, ValidationReport, VertexSpec, Violation,
                   WingTraversal, arc_wings, strand_circles)
from .errors import (ContainmentViolated, NoEmptyRegion, PatchNotOrientable,
                     PlanError, UnsupportedItinerary, WitnessMismatch)


@dataclass(frozen=True)
class PlanSegment:
    sheet: str
    # declared split for a single chord through a non-disk sheet: genus and
    # whole-circuit indices carried by the piece crossing the chord backward
    side_genus: int | None = None
    side_circuits: tuple | None = None


@dataclass(frozen=True)
class PlanEvent:
    arc: str
    position: Fraction
    slot_in: int
    slot_out: int


@dataclass(frozen=True)
class ImageCircle:
    face: str
    inside: str | None = None  # id of the plan circle this image nests in
    orient: int = 1            # +1: enclosed region on the curve's left
    label: str = ""
    draw: tuple | None = None


@dataclass(frozen=True)
class ImageRoute:
    crossings: tuple  # (edge_id, Fraction), parallel to the circle's events
    runs: tuple       # (face_id, holes_side_or_None), runs[i] after crossing i


@dataclass(frozen=True)
class PlanCircle:
    id: str
    segments: tuple
    events: tuple
    image: object
    patch_dir: int = 1


@dataclass(frozen=True)
class SurfacePatch:
    orientable: bool
    genus: int
    boundaries: int
    id: str = "patch"

    @property
    def euler(self):
        if self.orientable:
            return 2 - 2 * self.genus - self.boundaries
        return 2 - self.genus - self.boundaries


@dataclass(frozen=True)
class DiskRegion:
    circle: str
    faces: tuple


@dataclass(frozen=True)
class RelocationWitness:
    # (circle_id, parent_circle_or_None, orient) nesting inside the target disk
    nesting: tuple
    surface_orientable: bool
    surface_genus: int
    surface_boundaries: int


@dataclass(frozen=True)
class SurgeryPlan:
    base: BornMap
    circles: tuple
    patch: SurfacePatch
    disks: tuple = ()
    witness: RelocationWitness | None = None
    name: str = ""


def _is_disk(sheet):
    return sheet.orientable and sheet.genus == 0 and len(sheet.circuits) == 1


def _strand_of_arc(poly):
    out = {}
    for circle in strand_circles(poly):
        for arc_id in circle:
            out[arc_id] = circle[0]
    return out


# ---------------------------------------------------------------------------
# hypothesis checking
# ---------------------------------------------------------------------------

def check_attachment_hypotheses(plan):
    v = []
    base_report = validate_born_map(plan.base)
    if not base_report.ok:
        return ValidationReport.failed(
            [Violation("BaseInvalid", plan.name or "plan")]
            + list(base_report.violations))
    poly = plan.base.polyhedron
    arr = plan.base.arrangement

    if plan.patch.boundaries != len(plan.circles):
        v.append(Violation("BoundaryMismatch", plan.patch.id,
                           f"{plan.patch.boundaries} boundaries for "
                           f"{len(plan.circles)} circles"))
    if plan.patch.genus < 0 or plan.patch.boundaries < 1:
        v.append(Violation("PatchShape", plan.patch.id))

    ids = [c.id for c in plan.circles]
    if len(set(ids)) != len(ids):
        v.append(Violation("CircleIds", plan.name or "plan"))

    strand_of = _strand_of_arc(poly)
    arcs_used = {}
    chord_sheets = {}
    interior_sheets = {}
    for circle in plan.circles:
        k = len(circle.events)
        if k == 0:
            if len(circle.segments) != 1 or not isinstance(circle.image, ImageCircle):
                v.append(Violation("ItineraryShape", circle.id))
                continue
            seg = circle.segments[0]
            if seg.sheet not in {s.id for s in poly.sheets}:
                v.append(Violation("UnknownSheet", circle.id, seg.sheet))
                continue
            interior_sheets.setdefault(seg.sheet, []).append(circle.id)
            host = circle.image.face
            if circle.image.inside is None and host not in {f.id for f in arr.faces}:
                v.append(Violation("UnknownFace", circle.id, host))
            continue
        if len(circle.segments) != k or not isinstance(circle.image, ImageRoute):
            v.append(Violation("ItineraryShape", circle.id))
            continue
        if len(circle.image.crossings) != k or len(circle.image.runs) != k:
            v.append(Violation("ImageCorrespondence", circle.id,
                               "route shape does not match the events"))
            continue
        for i, event in enumerate(circle.events):
            if event.arc not in {a.id for a in poly.arcs}:
                v.append(Violation("UnknownArc", circle.id, event.arc))
                continue
            arc = poly.arc(event.arc)
            if arc.kind != TRIPLE:
                v.append(Violation("NonTransverse", circle.id,
                                   f"{event.arc} is not a triple arc"))
                continue
            if event.slot_in == event.slot_out:
                v.append(Violation("NonTransverse", circle.id,
                                   f"{event.arc} touched, not crossed"))
                continue
            if not (0 < event.position < 1):
                v.append(Violation("EventPosition", circle.id, event.arc))
            wings = arc_wings(poly, event.arc)
            sheet_in = wings[event.slot_in][0]
            sheet_out = wings[event.slot_out][0]
            if sheet_in != circle.segments[i].sheet:
                v.append(Violation("ItineraryMismatch", circle.id,
                                   f"event {i}: wing {event.slot_in} lies in "
                                   f"{sheet_in}"))
            if sheet_out != circle.segments[(i + 1) % k].sheet:
                v.append(Violation("ItineraryMismatch", circle.id,
                                   f"event {i}: wing {event.slot_out} lies in "
                                   f"{sheet_out}"))
            assignment = plan.base.assignments[strand_of[event.arc]]
            side_in = assignment.wing_side(event.arc, event.slot_in)
            side_out = assignment.wing_side(event.arc, event.slot_out)
            if side_in == side_out:
                v.append(Violation("NonTransverse", circle.id,
                                   f"event {i}: both wings on side {side_in}"))
            arcs_used.setdefault(event.arc, set()).add(circle.id)
            crossing = circle.image.crossings[i]
            edge = arr._edge_by_id.get(crossing[0])
            if edge is None:
                v.append(Violation("ImageCorrespondence", circle.id,
                                   f"unknown edge {crossing[0]}"))
                continue
            if edge.curve != assignment.curve:
                v.append(Violation("ImageCorrespondence", circle.id,
                                   f"event {i}: edge {crossing[0]} is not on the "
                                   f"image of {event.arc}"))
                continue
            face_before = circle.image.runs[(i - 1) % k][0]
            face_after = circle.image.runs[i][0]
            want_before = edge.left if side_in == "L" else edge.right
            want_after = edge.left if side_out == "L" else edge.right
            if face_before != want_before or face_after != want_after:
                v.append(Violation("RouteFaceMismatch", circle.id,
                                   f"event {i}"))
        for face_id, _ in circle.image.runs:
            count = plan.base.fiber_counts.get(face_id)
            if count is not None and count < 1:
                v.append(Violation("RouteOverEmptyFace", circle.id, face_id))
        for i, seg in enumerate(circle.segments):
            chord_sheets.setdefault(seg.sheet, []).append((circle.id, i, seg))

    for arc_id, circle_ids in arcs_used.items():
        if len(circle_ids) > 1:
            v.append(Violation("UnsupportedItinerary", arc_id,
                               "two circles cross the same arc"))
    positions = {}
    for circle in plan.circles:
        for event in circle.events:
            key = (event.arc, event.position)
            if key in positions:
                v.append(Violation("EventPosition", circle.id,
                                   f"repeated position on {event.arc}"))
            positions[key] = circle.id

    sheet_ids = {s.id for s in poly.sheets}
    for sheet_id, chords in chord_sheets.items():
        if sheet_id not in sheet_ids:
            v.append(Violation("UnknownSheet", sheet_id))
            continue
        if sheet_id in interior_sheets:
            v.append(Violation("UnsupportedItinerary", sheet_id,
                               "chords and interior circles in one sheet"))
        sheet = poly.sheet(sheet_id)
        if _is_disk(sheet):
            continue
        if not sheet.orientable:
            v.append(Violation("UnsupportedItinerary", sheet_id,
                               "chord through a non-orientable sheet"))
        elif len(chords) > 1:
            v.append(Violation("UnsupportedItinerary", sheet_id,
                               "multiple chords through a non-disk sheet"))
        else:
            _, _, seg = chords[0]
            if seg.side_genus is not None:
                if not (0 <= seg.side_genus <= sheet.genus):
                    v.append(Violation("ItineraryShape", sheet_id, "side genus"))
                if seg.side_circuits is not None and any(
                        not (0 <= ci < len(sheet.circuits))
                        for ci in seg.side_circuits):
                    v.append(Violation("ItineraryShape", sheet_id, "side circuits"))

    if v:
        return ValidationReport.failed(v)
    return ValidationReport.passed()


def _require_attachable(plan):
    report = check_attachment_hypotheses(plan)
    if not report.ok:
        first = report.violations[0]
        raise PlanError(first.code, str(first))
    return plan


# ---------------------------------------------------------------------------
# arc splitting
# ---------------------------------------------------------------------------

class _ArcSplits:
    """Sub-arc layout of every arc crossed by plan events."""

    def __init__(self, poly, plan):
        self.poly = poly
        self.events = {}      # arc_id -> [(position, circle_id, event_index)]
        self.sub_arcs = {}    # arc_id -> [sub_arc_id, ...] in arc direction
        self.vertex_of = {}   # (circle_id, event_index) -> vertex_id
        self.event_at = {}    # arc_id -> [(position, vertex_id, circle, idx)]
        for circle in plan.circles:
            for i, event in enumerate(circle.events):
                self.events.setdefault(event.arc, []).append(
                    (event.position, circle.id, i))
        for arc_id, items in self.events.items():
            items.sort()
            arc = poly.arc(arc_id)
            m = len(items)
            n_subs = m if arc.closed else m + 1
            subs = [f"{arc_id}.{j}" for j in range(n_subs)]
            self.sub_arcs[arc_id] = subs
            marks = []
            for j, (pos, cid, ei) in enumerate(items):
                vid = f"v_{cid}_{ei}"
                self.vertex_of[(cid, ei)] = vid
                marks.append((pos, vid, cid, ei))
            self.event_at[arc_id] = marks

    def walk(self, arc_id, direction):
        """Atoms along a full traversal: sub-arc ids and vertex marks between."""
        subs = self.sub_arcs.get(arc_id)
        if subs is None:
            return None
        arc = self.poly.arc(arc_id)
        marks = self.event_at[arc_id]
        atoms = []
        if arc.closed:
            # sub j leaves the vertex of mark j and arrives at mark j+1
            m = len(marks)
            for j in range(m):
                atoms.append(("sub", subs[j]))
                atoms.append(("vertex", marks[(j + 1) % m]))
        else:
            for j, sub in enumerate(subs):
                atoms.append(("sub", sub))
                if j < len(marks):
                    atoms.append(("vertex", marks[j]))
        if direction < 0:
            atoms = list(reversed(atoms))
        return atoms

    def left_right_subs(self, arc_id, event_pos):
        """Sub-arcs arriving at / leaving the given event along arc direction."""
        marks = self.event_at[arc_id]
        subs = self.sub_arcs[arc_id]
        arc = self.poly.arc(arc_id)
        j = next(i for i, (pos, *_rest) in enumerate(marks) if pos == event_pos)
        if arc.closed:
            m = len(marks)
            return subs[(j - 1) % m], subs[j]
        return subs[j], subs[j + 1]


def _rewrite_traversal(splits, trav):
    """Expand a traversal of a split arc into sub-traversals; uncut wings
    pass every new vertex as its free wing."""
    atoms = splits.walk(trav.arc, trav.direction)
    if atoms is None:
        return [trav]
    return [WingTraversal(sub, trav.slot, trav.direction)
            for kind, sub in atoms if kind == "sub"]


# ---------------------------------------------------------------------------
# sheet cutting
# ---------------------------------------------------------------------------

@dataclass
class _Chord:
    circle: str
    index: int             # segment index within the circle
    sheet: str
    t_arc: str
    # endpoints: (arc, position, slot, original-direction flag of that wing)
    p: tuple
    q: tuple
    p_vertex: str
    q_vertex: str
    side_genus: int | None
    side_circuits: tuple | None
    minus_piece: str | None = None
    plus_piece: str | None = None


def _expand_circuit(splits, circuit, marks_by_wing):
    """Circuit atoms: ('trav', WingTraversal) and ('mark', chord, end)."""
    atoms = []
    for trav in circuit:
        walk = splits.walk(trav.arc, trav.direction)
        if walk is None:
            atoms.append(("trav", trav))
            continue
        wing_marks = marks_by_wing.get((trav.arc, trav.slot), [])
        vertex_to_mark = {vid: (chord, end) for vid, chord, end in wing_marks}
        for kind, payload in walk:
            if kind == "sub":
                atoms.append(("trav", WingTraversal(payload, trav.slot,
                                                    trav.direction)))
            else:
                _pos, vid, _cid, _ei = payload
                if vid in vertex_to_mark:
                    chord, end = vertex_to_mark[vid]
                    atoms.append(("mark", chord, end))
    return atoms


def _cut_sheet(poly, splits, sheet, chords):
    """Cut one sheet along its chords; returns (pieces, per-chord sides).

    pieces: list of (piece_id, circuits, genus) -- all orientable.
    """
    marks_by_wing = {}
    for chord in chords:
        p_arc, _p_pos, p_slot, _ = chord.p
        q_arc, _q_pos, q_slot, _ = chord.q
        marks_by_wing.setdefault((p_arc, p_slot), []).append(
            (chord.p_vertex, chord, "p"))
        marks_by_wing.setdefault((q_arc, q_slot), []).append(
            (chord.q_vertex, chord, "q"))

    circuits_atoms = [_expand_circuit(splits, c, marks_by_wing)
                      for c in sheet.circuits]

    # locate every mark: (circuit index, atom index)
    mark_pos = {}
    for ci, atoms in enumerate(circuits_atoms):
        for ai, atom in enumerate(atoms):
            if atom[0] == "mark":
                mark_pos[(atom[1].circle, atom[1].index, atom[2])] = (ci, ai)

    used = set()
    cycles = []          # (items, circuit_indices_touched)
    cycle_of_chordside = {}

    for ci, atoms in enumerate(circuits_atoms):
        for ai, atom in enumerate(atoms):
            if atom[0] != "trav" or (ci, ai) in used:
                continue
            items = []
            touched = set()
            cur = (ci, ai)
            while cur not in used:
                used.add(cur)
                cci, cai = cur
                touched.add(cci)
                current = circuits_atoms[cci][cai]
                if current[0] == "trav":
                    items.append(current[1])
                    cur = (cci, (cai + 1) % len(circuits_atoms[cci]))
                    continue
                chord, end = current[1], current[2]
                if end == "q":
                    items.append(WingTraversal(chord.t_arc, 1, -1))
                    cycle_of_chordside[(chord.circle, chord.index, "minus")] = len(cycles)
                    mate = mark_pos[(chord.circle, chord.index, "p")]
                else:
                    items.append(WingTraversal(chord.t_arc, 2, 1))
                    cycle_of_chordside[(chord.circle, chord.index, "plus")] = len(cycles)
                    mate = mark_pos[(chord.circle, chord.index, "q")]
                mci, mai = mate
                touched.add(mci)
                cur = (mci, (mai + 1) % len(circuits_atoms[mci]))
            cycles.append((tuple(items), touched))

    untouched = [ci for ci, atoms in enumerate(circuits_atoms)
                 if not any(a[0] == "mark" for a in atoms)]

    if _is_disk(sheet):
        pieces = []
        for k, (items, _touched) in enumerate(cycles):
            pieces.append((f"{sheet.id}.p{k}", (items,), 0))
        piece_ids = [p[0] for p in pieces]
        cycle_piece = {i: piece_ids[i] for i in range(len(cycles))}
    else:
        # exactly one chord (validated); one or two cycles
        chord = chords[0]
        if len(cycles) == 1:
            piece_id = f"{sheet.id}.p0"
            circuits = (cycles[0][0],) + tuple(
                _plain_circuit(circuits_atoms[ci]) for ci in untouched)
            pieces = [(piece_id, circuits, sheet.genus)]
            cycle_piece = {0: piece_id}
        else:
            side_genus = chord.side_genus or 0
            side_set = set(chord.side_circuits or ())
            minus_cycle = cycle_of_chordside[(chord.circle, chord.index, "minus")]
            plus_cycle = cycle_of_chordside[(chord.circle, chord.index, "plus")]
            minus_id = f"{sheet.id}.p0"
            plus_id = f"{sheet.id}.p1"
            minus_circuits = (cycles[minus_cycle][0],) + tuple(
                _plain_circuit(circuits_atoms[ci]) for ci in untouched
                if ci in side_set)
            plus_circuits = (cycles[plus_cycle][0],) + tuple(
                _plain_circuit(circuits_atoms[ci]) for ci in untouched
                if ci not in side_set)
            pieces = [(minus_id, minus_circuits, side_genus),
                      (plus_id, plus_circuits, sheet.genus - side_genus)]
            cycle_piece = {minus_cycle: minus_id, plus_cycle: plus_id}

    for chord in chords:
        chord.minus_piece = cycle_piece[
            cycle_of_chordside[(chord.circle, chord.index, "minus")]]
        chord.plus_piece = cycle_piece[
            cycle_of_chordside[(chord.circle, chord.index, "plus")]]
    return pieces


def _plain_circuit(atoms):
    return tuple(a[1] for a in atoms if a[0] == "trav")


# ---------------------------------------------------------------------------
# the main operation
# ---------------------------------------------------------------------------

def attach_surface(plan):
    """Attach the plan's patch along its circles; returns the new BornMap."""
    _require_attachable(plan)
    base = plan.base
    poly = base.polyhedron

    existing_ids = ({s.id for s in poly.sheets} | {a.id for a in poly.arcs}
                    | {w.id for w in poly.vertices})
    for circle in plan.circles:
        fresh = {f"t_{circle.id}", f"d_{circle.id}"} | {
            f"t_{circle.id}.{i}" for i in range(len(circle.events))}
        if fresh & existing_ids:
            raise PlanError("IdCollision",
                            f"circle id {circle.id} collides with existing names")

    splits = _ArcSplits(poly, plan)

    # --- chords, keyed by sheet -------------------------------------------
    chords_by_sheet = {}
    wings_by_arc = {a.id: arc_wings(poly, a.id) for a in poly.arcs}
    for circle in plan.circles:
        k = len(circle.events)
        for i in range(k):
            prev_event = circle.events[(i - 1) % k]
            event = circle.events[i]
            seg = circle.segments[i]
            d_p = wings_by_arc[prev_event.arc][prev_event.slot_out][3]
            d_q = wings_by_arc[event.arc][event.slot_in][3]
            chord = _Chord(
                circle=circle.id, index=i, sheet=seg.sheet,
                t_arc=f"t_{circle.id}.{i}",
                p=(prev_event.arc, prev_event.position, prev_event.slot_out, d_p),
                q=(event.arc, event.position, event.slot_in, d_q),
                p_vertex=splits.vertex_of[(circle.id, (i - 1) % k)],
                q_vertex=splits.vertex_of[(circle.id, i)],
                side_genus=seg.side_genus, side_circuits=seg.side_circuits)
            chords_by_sheet.setdefault(seg.sheet, []).append(chord)

    interior_by_sheet = {}
    for circle in plan.circles:
        if not circle.events:
            interior_by_sheet.setdefault(circle.segments[0].sheet, []).append(circle)

    # --- build new sheets ---------------------------------------------------
    new_sheets = []
    all_chords = [c for cs in chords_by_sheet.values() for c in cs]
    for sheet in poly.sheets:
        if sheet.id in chords_by_sheet:
            for pid, circuits, genus in _cut_sheet(poly, splits, sheet,
                                                   chords_by_sheet[sheet.id]):
                new_sheets.append(SheetSpec(pid, True, genus, tuple(circuits)))
            continue
        circuits = tuple(
            tuple(t for trav in circuit for t in _rewrite_traversal(splits, trav))
            for circuit in sheet.circuits)
        if sheet.id in interior_by_sheet:
            rest_circuits = list(circuits)
            for circle in interior_by_sheet[sheet.id]:
                t_arc = f"t_{circle.id}"
                rest_circuits.append((WingTraversal(t_arc, 2, -1),))
                new_sheets.append(SheetSpec(
                    f"d_{circle.id}", True, 0,
                    ((WingTraversal(t_arc, 1, 1),),)))
            new_sheets.append(replace(sheet, circuits=tuple(rest_circuits)))
        else:
            new_sheets.append(replace(sheet, circuits=circuits))

    # patch sheet
    patch_id = plan.patch.id
    existing = {s.id for s in new_sheets}
    while patch_id in existing:
        patch_id += "_"
    patch_circuits = []
    for circle in plan.circles:
        k = len(circle.events)
        if k == 0:
            patch_circuits.append(
                (WingTraversal(f"t_{circle.id}", 0, circle.patch_dir),))
        elif circle.patch_dir > 0:
            patch_circuits.append(tuple(
                WingTraversal(f"t_{circle.id}.{i}", 0, 1) for i in range(k)))
        else:
            patch_circuits.append(tuple(
                WingTraversal(f"t_{circle.id}.{i}", 0, -1)
                for i in reversed(range(k))))
    new_sheets.append(SheetSpec(patch_id, plan.patch.orientable,
                                plan.patch.genus, tuple(patch_circuits)))

    # --- build new arcs and vertices ---------------------------------------
    new_arcs = []
    for arc in poly.arcs:
        subs = splits.sub_arcs.get(arc.id)
        if subs is None:
            new_arcs.append(arc)
            continue
        marks = splits.event_at[arc.id]
        if arc.closed:
            m = len(marks)
            for j, sub in enumerate(subs):
                start_v = marks[j][1]
                end_v = marks[(j + 1) % m][1]
                new_arcs.append(BranchArc(sub, arc.kind,
                                          ((start_v, 2), (end_v, 0)), TRIVIAL))
        else:
            for j, sub in enumerate(subs):
                start = arc.endpoints[0] if j == 0 else (marks[j - 1][1], 2)
                end = arc.endpoints[1] if j == len(subs) - 1 else (marks[j][1], 0)
                new_arcs.append(BranchArc(sub, arc.kind, (start, end), TRIVIAL))

    chord_by_key = {(c.circle, c.index): c for c in all_chords}
    for circle in plan.circles:
        k = len(circle.events)
        if k == 0:
            new_arcs.append(BranchArc(f"t_{circle.id}", TRIPLE, None, TRIVIAL))
            continue
        for i in range(k):
            vid_start = splits.vertex_of[(circle.id, (i - 1) % k)]
            vid_end = splits.vertex_of[(circle.id, i)]
            new_arcs.append(BranchArc(f"t_{circle.id}.{i}", TRIPLE,
                                      ((vid_start, 3), (vid_end, 1)), TRIVIAL))

    new_vertices = []
    for vertex in poly.vertices:
        # remap ends naming split arcs onto the outermost sub-arcs
        fixed = []
        for port, (aid, end_index) in enumerate(vertex.ends):
            subs = splits.sub_arcs.get(aid)
            if subs is None:
                fixed.append((aid, end_index))
            else:
                fixed.append((subs[0], 0) if end_index == 0 else (subs[-1], 1))
        new_vertices.append(replace(vertex, ends=tuple(fixed)))

    def slot_on_t(chord, piece_id):
        if piece_id == chord.minus_piece:
            return 1
        return 2

    for circle in plan.circles:
        k = len(circle.events)
        for i in range(k):
            event = circle.events[i]
            vid = splits.vertex_of[(circle.id, i)]
            a_left, a_right = splits.left_right_subs(event.arc, event.position)
            t_prev = f"t_{circle.id}.{i}"
            t_next = f"t_{circle.id}.{(i + 1) % k}"
            ends = ((a_left, 1), (t_prev, 1), (a_right, 0), (t_next, 0))
            free_a = next(s for s in (0, 1, 2)
                          if s not in (event.slot_in, event.slot_out))
            chord_in = chord_by_key[(circle.id, i)]
            chord_out = chord_by_key[(circle.id, (i + 1) % k)]
            d_in = chord_in.q[3]
            d_out = chord_out.p[3]
            # pieces flanking the incoming chord near its q end
            q_left = chord_in.minus_piece if d_in > 0 else chord_in.plus_piece
            q_right = chord_in.plus_piece if d_in > 0 else chord_in.minus_piece
            # pieces flanking the outgoing chord near its p end
            p_left = chord_out.plus_piece if d_out > 0 else chord_out.minus_piece
            p_right = chord_out.minus_piece if d_out > 0 else chord_out.plus_piece
            roles = (
                EndRoles(free=free_a, lq=event.slot_in, rq=event.slot_out),
                EndRoles(free=0, lq=slot_on_t(chord_in, q_right),
                         rq=slot_on_t(chord_in, q_left)),
                EndRoles(free=free_a, lq=event.slot_out, rq=event.slot_in),
                EndRoles(free=0, lq=slot_on_t(chord_out, p_left),
                         rq=slot_on_t(chord_out, p_right)),
            )
            new_vertices.append(VertexSpec(vid, ends, roles))

    new_poly = SimplePolyhedron(tuple(new_sheets), tuple(new_arcs),
                                tuple(new_vertices),
                                name=f"{poly.name}+{plan.name or 'patch'}")

    # --- arrangement, counts, assignments -----------------------------------
    builder = ArrangementBuilder(base.arrangement)
    count_of = dict(base.fiber_counts)
    new_vertex_crossings = dict(base.vertex_crossings)

    ordered = []
    by_id = {c.id: c for c in plan.circles}
    def depth(circle):
        d, cur = 0, circle
        while isinstance(cur.image, ImageCircle) and cur.image.inside:
            cur = by_id[cur.image.inside]
            d += 1
        return d
    for circle in sorted(plan.circles,
                         key=lambda c: (depth(c), c.id)):
        ordered.append(circle)

    inner_face_of = {}
    for circle in ordered:
        curve_id = f"im_{circle.id}"
        if isinstance(circle.image, ImageCircle):
            host = (inner_face_of[circle.image.inside]
                    if circle.image.inside else circle.image.face)
            inner = builder.insert_circle(curve_id, host, circle.image.orient,
                                          source=("aux", f"image:{circle.id}"),
                                          label=circle.image.label,
                                          draw=circle.image.draw)
            inner_face_of[circle.id] = inner
            count_of[inner] = count_of[host]
        else:
            crossings = [RouteCross(eid, pos) for eid, pos in circle.image.crossings]
            runs = [RouteFaceRun(fid, holes) for fid, holes in circle.image.runs]
            xids = builder.insert_route(curve_id, crossings, runs,
                                        source=("aux", f"image:{circle.id}"))
            for i, xid in enumerate(xids):
                new_vertex_crossings[splits.vertex_of[(circle.id, i)]] = xid

    new_arr = builder.freeze()
    # counts for faces created by route splitting: inherit the origin face
    for face in new_arr.faces:
        if face.id not in count_of:
            origin = builder._face_origin(face.id)
            count_of[face.id] = count_of[origin]

    from .arrangement import winding_numbers
    coverage = winding_numbers(new_arr, {f"im_{c.id}": 1 for c in plan.circles})
    if any(w < 0 for w in coverage.values()):
        raise PlanError("PatchCoverageNegative",
                        "image orientations cover a region negatively")
    new_counts = {f.id: count_of[f.id] + coverage[f.id] for f in new_arr.faces}

    # retag image curves as branch and rebuild assignments
    new_strand_of = _strand_of_arc(new_poly)
    sub_parent = {}
    for arc_id, subs in splits.sub_arcs.items():
        for sub in subs:
            sub_parent[sub] = arc_id
    old_strand_of = _strand_of_arc(poly)

    new_t_arcs = {}
    for circle in plan.circles:
        k = len(circle.events)
        if k == 0:
            new_t_arcs[f"t_{circle.id}"] = circle.id
        else:
            for i in range(k):
                new_t_arcs[f"t_{circle.id}.{i}"] = circle.id

    new_assignments = {}
    for strand in strand_circles(new_poly):
        key = strand[0]
        member = strand[0]
        if member in new_t_arcs:
            circle = by_id[new_t_arcs[member]]
            curve_id = f"im_{circle.id}"
            builder2_sides = []
            for arc_id in strand:
                chord = _chord_for_t_arc(all_chords, arc_id)
                if chord is None:  # interior circle
                    orient = circle.image.orient
                    disk_side = "L" if orient > 0 else "R"
                    rest_side = "R" if orient > 0 else "L"
                    builder2_sides += [((arc_id, 0), "L"),
                                       ((arc_id, 1), disk_side),
                                       ((arc_id, 2), rest_side)]
                else:
                    builder2_sides += [((arc_id, 0), "L"),
                                       ((arc_id, 1), "R"),
                                       ((arc_id, 2), "L")]
            new_assignments[key] = StrandAssignment(
                curve=curve_id, direction=1, heavy="L",
                wing_sides=tuple(builder2_sides))
            continue
        parent0 = sub_parent.get(member, member)
        old_key = old_strand_of[parent0]
        old = base.assignments[old_key]
        sides = []
        for arc_id in strand:
            parent = sub_parent.get(arc_id, arc_id)
            arc = new_poly.arc(arc_id)
            n_slots = 3 if arc.kind == TRIPLE else 1
            for slot in range(n_slots):
                sides.append(((arc_id, slot), old.wing_side(parent, slot)))
        new_assignments[key] = StrandAssignment(
            curve=old.curve, direction=old.direction, heavy=old.heavy,
            wing_sides=tuple(sides))

    final_builder = ArrangementBuilder(new_arr)
    for key, assignment in new_assignments.items():
        final_builder.retag_curve(assignment.curve, ("branch", key))
    final_arr = final_builder.freeze()

    result = BornMap(polyhedron=new_poly, arrangement=final_arr,
                     assignments=new_assignments, fiber_counts=new_counts,
                     vertex_crossings=new_vertex_crossings,
                     name=f"{base.name or 'map'}+{plan.name or 'patch'}")
    report = validate_born_map(result)
    if not report.ok:
        raise PlanError("CrossingRule",
                        "surgery output failed validation: "
                        + "; ".join(str(x) for x in report.violations[:6]))
    return result


def _chord_for_t_arc(chords, arc_id):
    for chord in chords:
        if chord.t_arc == arc_id:
            return chord
    return None


# ---------------------------------------------------------------------------
# disk normalization and the orientable-patch pipeline
# ---------------------------------------------------------------------------

def _zero_faces(born):
    return [f.id for f in born.arrangement.faces
            if born.fiber_counts.get(f.id, 0) == 0]


def normalized_plan(plan):
    """The plan with every circle image relocated into one count-0 face."""
    zero = _zero_faces(plan.base)
    if not zero:
        raise NoEmptyRegion("every face carries at least one fiber component")
    require_valid_born_map(plan.base)

    if any(circle.events for circle in plan.circles):
        raise UnsupportedItinerary("relocation requires crossing-free circles")

    if plan.witness is None:
        raise WitnessMismatch("no relocation witness supplied")
    witness_ids = [cid for cid, _, _ in plan.witness.nesting]
    if sorted(witness_ids) != sorted(c.id for c in plan.circles):
        raise WitnessMismatch("witness circles do not match the plan")
    if plan.witness.surface_boundaries != plan.patch.boundaries or \
            plan.witness.surface_orientable != plan.patch.orientable or \
            plan.witness.surface_genus != plan.patch.genus:
        raise WitnessMismatch("witness surface does not match the patch")

    # already relocated: every top-level image sits in an empty face
    counts = plan.base.fiber_counts
    by_id = {c.id: c for c in plan.circles}

    def host_face(circle):
        while circle.image.inside is not None:
            circle = by_id[circle.image.inside]
        return circle.image.face

    if all(counts[host_face(c)] == 0 for c in plan.circles):
        return plan

    regions = {d.circle: set(d.faces) for d in plan.disks}
    if sorted(regions) != sorted(c.id for c in plan.circles):
        raise ContainmentViolated("need one disk region per circle")
    face_ids = {f.id for f in plan.base.arrangement.faces}
    for circle in plan.circles:
        faces = regions[circle.id]
        if not faces <= face_ids:
            raise ContainmentViolated(f"unknown faces for {circle.id}")
        # nested images cannot sit inside disjoint disks
        if circle.image.inside is not None:
            raise ContainmentViolated(
                f"image of {circle.id} nests inside another circle")
        if circle.image.face not in faces:
            raise ContainmentViolated(
                f"image of {circle.id} not inside its disk region")

    target = sorted(zero)[0]
    parent_of = {cid: parent for cid, parent, _ in plan.witness.nesting}
    orient_of = {cid: orient for cid, _, orient in plan.witness.nesting}
    new_circles = tuple(
        replace(circle, image=ImageCircle(
            face=target, inside=parent_of[circle.id],
            orient=orient_of[circle.id],
            label=circle.image.label, draw=None))
        for circle in plan.circles)
    return replace(plan, circles=new_circles)


def normalize_into_disk(plan):
    """Realize the relocated circle family as auxiliary curves; the
    polyhedron and all persisting fiber counts are unchanged."""
    moved = normalized_plan(plan)
    base = plan.base
    existing_curves = {c.id for c in base.arrangement.curves}
    builder = ArrangementBuilder(base.arrangement)
    counts = dict(base.fiber_counts)
    inner_face_of = {}
    by_id = {c.id: c for c in moved.circles}

    def depth(circle):
        d, cur = 0, circle
        while cur.image.inside:
            cur = by_id[cur.image.inside]
            d += 1
        return d

    changed = False
    for circle in sorted(moved.circles, key=lambda c: (depth(c), c.id)):
        curve_id = f"im_{circle.id}"
        if curve_id in existing_curves:
            continue
        host = (inner_face_of[circle.image.inside]
                if circle.image.inside else circle.image.face)
        inner = builder.insert_circle(curve_id, host, circle.image.orient,
                                      source=("aux", f"image:{circle.id}"),
                                      label=circle.image.label,
                                      draw=circle.image.draw)
        inner_face_of[circle.id] = inner
        counts[inner] = counts[host]
        changed = True

    if not changed:
        return base
    arr = builder.freeze()
    return BornMap(polyhedron=base.polyhedron, arrangement=arr,
                   assignments=base.assignments, fiber_counts=counts,
                   vertex_crossings=base.vertex_crossings,
                   name=f"{base.name or 'map'}~relocated")


def relocate_and_attach(plan):
    """Normalize into a disk, then attach an orientable patch."""
    if not plan.patch.orientable:
        raise PatchNotOrientable("the relocation pipeline requires an "
                                 "orientable patch")
    moved = normalized_plan(plan)
    return attach_surface(moved)
