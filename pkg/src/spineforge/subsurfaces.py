"""Closed subsurface search and orientability of selections.

A closed subsurface of a simple polyhedron is a union of whole sheets such
that every triple arc carries exactly 0 or 2 wings of selected sheets and
no selected sheet touches a boundary arc.  For valid polyhedra the vertex
continuation table makes such a selection automatically closed at vertices,
so the search reduces to the per-arc degree constraint plus connectivity.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import BOUNDARY, TRIPLE, UnionFind, require_valid
from .errors import SelectionNotClosed, SelectionNotConnected


@dataclass(frozen=True)
class SurfaceSelection:
    sheets: frozenset
    # arc_id -> tuple of selected slots (length 0 entries omitted)
    arc_slots: dict
    orientable: bool
    euler: int

    @property
    def genus_or_crosscaps(self):
        if self.orientable:
            return (2 - self.euler) // 2
        return 2 - self.euler

    def key(self):
        return tuple(sorted(self.sheets))


@dataclass(frozen=True)
class SelectionSearch:
    selections: tuple
    examined: int
    truncated: bool


def _arc_slot_table(poly):
    """arc_id -> list of (slot, sheet_id, direction)."""
    table = {arc.id: [] for arc in poly.arcs}
    for sheet in poly.sheets:
        for circuit in sheet.circuits:
            for trav in circuit:
                table[trav.arc].append((trav.slot, sheet.id, trav.direction))
    return table


def _selection_arc_slots(poly, sheets, table=None):
    table = table or _arc_slot_table(poly)
    out = {}
    for arc in poly.arcs:
        chosen = tuple(sorted(s for s, sid, _ in table[arc.id] if sid in sheets))
        if chosen:
            out[arc.id] = chosen
    return out


def selection_is_closed(poly, sheets, table=None):
    """Degree check: 2 selected wings on used triple arcs, none on boundary."""
    table = table or _arc_slot_table(poly)
    for arc in poly.arcs:
        n = sum(1 for _, sid, _ in table[arc.id] if sid in sheets)
        if arc.kind == BOUNDARY and n != 0:
            return False
        if arc.kind == TRIPLE and n not in (0, 2):
            return False
    return True


def _selection_connected(poly, sheets, table):
    if not sheets:
        return False
    uf = UnionFind()
    for sid in sheets:
        uf.find(sid)
    for arc in poly.arcs:
        chosen = [sid for _, sid, _ in table[arc.id] if sid in sheets]
        for first, second in zip(chosen, chosen[1:]):
            uf.union(first, second)
    roots = {uf.find(sid) for sid in sheets}
    return len(roots) == 1


def selection_euler(poly, sheets):
    """Characteristic of the subsurface carried by the selected sheets."""
    table = _arc_slot_table(poly)
    used_arcs = [a for a in poly.arcs
                 if sum(1 for _, sid, _ in table[a.id] if sid in sheets) == 2]
    used_open = [a for a in used_arcs if not a.closed]
    used_vertices = {vid for a in used_open for vid, _ in a.endpoints}
    total = sum(poly.sheet(sid).euler for sid in sheets)
    return total + len(used_vertices) - len(used_open)


def selection_orientable(poly, sheets):
    """Parity union-find over selected sheets; opposite induced directions
    along each shared arc are the compatible case."""
    if any(not poly.sheet(sid).orientable for sid in sheets):
        return False
    table = _arc_slot_table(poly)
    # parity union-find: node -> (parent, parity to parent)
    parent = {sid: sid for sid in sheets}
    parity = {sid: 0 for sid in sheets}

    def find(x):
        if parent[x] == x:
            return x, 0
        root, p = find(parent[x])
        parent[x] = root
        parity[x] ^= p
        return root, parity[x]

    def union(a, b, rel):
        ra, pa = find(a)
        rb, pb = find(b)
        if ra == rb:
            return (pa ^ pb) == rel
        parent[ra] = rb
        parity[ra] = pa ^ pb ^ rel
        return True

    for arc in poly.arcs:
        chosen = [(sid, d) for _, sid, d in table[arc.id] if sid in sheets]
        if len(chosen) != 2:
            continue
        (s1, d1), (s2, d2) = chosen
        if s1 == s2:
            if d1 == d2:
                return False
            continue
        # compatible with equal signs exactly when the written directions
        # already disagree
        rel = 0 if d1 != d2 else 1
        if not union(s1, s2, rel):
            return False
    return True


def make_selection(poly, sheets):
    """Build an annotated SurfaceSelection; raises when not closed/connected."""
    require_valid(poly)
    sheets = frozenset(sheets)
    table = _arc_slot_table(poly)
    if not selection_is_closed(poly, sheets, table):
        raise SelectionNotClosed(f"selection {sorted(sheets)} is not closed")
    if not _selection_connected(poly, sheets, table):
        raise SelectionNotConnected(f"selection {sorted(sheets)} is not connected")
    return SurfaceSelection(
        sheets=sheets,
        arc_slots=_selection_arc_slots(poly, sheets, table),
        orientable=selection_orientable(poly, sheets),
        euler=selection_euler(poly, sheets),
    )


def surface_orientability(poly, selection):
    """Orientable(genus) or NonOrientable(crosscaps) for a closed selection.

    Accepts either a SurfaceSelection or a bare iterable of sheet ids.
    """
    sheets = selection.sheets if isinstance(selection, SurfaceSelection) else frozenset(selection)
    sel = make_selection(poly, sheets)
    if sel.orientable:
        if sel.euler % 2 != 0:
            raise SelectionNotClosed("odd characteristic on an orientable selection")
        return ("orientable", (2 - sel.euler) // 2)
    return ("nonorientable", 2 - sel.euler)


def find_closed_surfaces(poly, bound):
    """All connected closed selections, capped by `bound` examined states."""
    require_valid(poly)
    if bound < 1:
        raise ValueError("bound must be positive")
    table = _arc_slot_table(poly)

    # sheets touching boundary arcs can never be selected
    banned = set()
    for arc in poly.arcs:
        if arc.kind == BOUNDARY:
            for _, sid, _ in table[arc.id]:
                banned.add(sid)
    candidates = [s.id for s in poly.sheets if s.id not in banned]
    candidates.sort()

    neighbors = {sid: set() for sid in candidates}
    for arc in poly.arcs:
        members = {sid for _, sid, _ in table[arc.id] if sid in neighbors}
        for a in members:
            neighbors[a] |= members - {a}

    results = []
    examined = 0
    truncated = False

    def arcs_ok(included, complete_under):
        # complete_under: sheets decided (in or out); others unknown
        for arc in poly.arcs:
            wings = [sid for _, sid, _ in table[arc.id]]
            n_in = sum(1 for sid in wings if sid in included)
            undecided = sum(1 for sid in wings if sid not in complete_under)
            if arc.kind == BOUNDARY and n_in > 0:
                return False
            if arc.kind == TRIPLE:
                if n_in > 2:
                    return False
                if undecided == 0 and n_in not in (0, 2):
                    return False
        return True

    for seed_pos, seed in enumerate(candidates):
        if truncated:
            break
        allowed = set(candidates[seed_pos:])

        def grow(included, excluded):
            nonlocal examined, truncated
            if truncated:
                return
            examined += 1
            if examined > bound:
                truncated = True
                return
            decided = included | excluded
            if not arcs_ok(included, decided):
                return
            # frontier: undecided sheets adjacent to the included set
            frontier = sorted(
                sid
                for inc in included
                for sid in neighbors[inc]
                if sid not in decided and sid in allowed
            )
            if not frontier:
                # every wing sheet of every touched arc is now decided
                if selection_is_closed(poly, included, table):
                    results.append(frozenset(included))
                return
            pick = frontier[0]
            grow(included | {pick}, excluded)
            grow(included, excluded | {pick})

        grow({seed}, set(candidates[:seed_pos]) | banned)

    unique = sorted({r for r in results}, key=lambda s: (len(s), tuple(sorted(s))))
    selections = tuple(make_selection(poly, sheets) for sheets in unique)
    return SelectionSearch(selections=selections, examined=examined, truncated=truncated)
