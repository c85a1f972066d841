"""Equality of polyhedra up to presentation gauge.

Two data sets present the same polyhedron when they differ only by
renaming, by the starting point of a cyclic circuit, by the order in which
circuits of one sheet are listed, or by reversing all circuits of one sheet
(re-choosing its orientation).  Arc identifiers and slot numbering are
compared through an explicit correspondence supplied by the caller.
"""

from __future__ import annotations


def _rotations(circuit):
    n = len(circuit)
    return [tuple(circuit[(i + k) % n] for i in range(n)) for k in range(n)]


def _reverse_circuit(circuit):
    return tuple(t.reversed() for t in reversed(circuit))


def canonical_circuits(sheet):
    """A representative of the sheet's circuits invariant under rotation,
    circuit order, and whole-sheet reversal."""
    def normalize(circuits):
        forms = []
        for circuit in circuits:
            key_of = lambda c: tuple((t.arc, t.slot, t.direction) for t in c)
            best = min(_rotations(circuit), key=key_of)
            forms.append(tuple((t.arc, t.slot, t.direction) for t in best))
        return tuple(sorted(forms))

    plain = normalize(sheet.circuits)
    flipped = normalize([_reverse_circuit(c) for c in sheet.circuits])
    return min(plain, flipped)


def same_up_to_gauge(poly_a, poly_b, sheet_map=None):
    """True when the polyhedra agree after renaming sheets of `poly_a` by
    `sheet_map`, up to per-sheet orientation gauge.  Arcs and vertices must
    agree on the nose."""
    sheet_map = sheet_map or {}

    arcs_a = {a.id: a for a in poly_a.arcs}
    arcs_b = {a.id: a for a in poly_b.arcs}
    if set(arcs_a) != set(arcs_b):
        return False
    for aid, arc in arcs_a.items():
        other = arcs_b[aid]
        if (arc.kind, arc.closed, arc.monodromy) != \
                (other.kind, other.closed, other.monodromy):
            return False
        if arc.endpoints != other.endpoints:
            return False

    verts_a = {v.id: v for v in poly_a.vertices}
    verts_b = {v.id: v for v in poly_b.vertices}
    if set(verts_a) != set(verts_b):
        return False
    for vid, vertex in verts_a.items():
        other = verts_b[vid]
        if vertex.ends != other.ends or vertex.roles != other.roles:
            return False

    sheets_a = {sheet_map.get(s.id, s.id): s for s in poly_a.sheets}
    sheets_b = {s.id: s for s in poly_b.sheets}
    if set(sheets_a) != set(sheets_b):
        return False
    for sid, sheet in sheets_a.items():
        other = sheets_b[sid]
        if (sheet.orientable, sheet.genus) != (other.orientable, other.genus):
            return False
        if canonical_circuits(sheet) != canonical_circuits(other):
            return False
    return True
