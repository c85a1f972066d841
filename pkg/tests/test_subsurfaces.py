import itertools

import pytest

from spineforge.errors import SelectionNotClosed
from spineforge.gallery import (build_base_example, build_closed_sheet,
                                build_surgered_example, build_theta)
from spineforge.subsurfaces import (find_closed_surfaces, make_selection,
                                    surface_orientability)

from randgen import random_round_map


def brute_force_selections(poly):
    """Oracle: enumerate all sheet subsets and keep the connected closed ones."""
    from spineforge.core import UnionFind
    sheets = [s.id for s in poly.sheets]
    table = {}
    for sheet in poly.sheets:
        for circuit in sheet.circuits:
            for trav in circuit:
                table.setdefault(trav.arc, []).append(sheet.id)
    out = []
    for r in range(1, len(sheets) + 1):
        for combo in itertools.combinations(sheets, r):
            chosen = set(combo)
            ok = True
            for arc in poly.arcs:
                n = sum(1 for sid in table.get(arc.id, []) if sid in chosen)
                limit = (0,) if arc.kind == "boundary" else (0, 2)
                if n not in limit:
                    ok = False
                    break
            if not ok:
                continue
            uf = UnionFind()
            for sid in chosen:
                uf.find(sid)
            for arc in poly.arcs:
                members = [sid for sid in table.get(arc.id, []) if sid in chosen]
                for a, b in zip(members, members[1:]):
                    uf.union(a, b)
            if len({uf.find(sid) for sid in chosen}) == 1:
                out.append(frozenset(chosen))
    return sorted(out, key=lambda s: (len(s), tuple(sorted(s))))


def brute_force_orientable(poly, sheets):
    """Oracle: try every +-1 assignment against the opposite-direction rule."""
    sheets = sorted(sheets)
    if any(not poly.sheet(s).orientable for s in sheets):
        return False
    table = {}
    for sid in sheets:
        for circuit in poly.sheet(sid).circuits:
            for trav in circuit:
                table.setdefault(trav.arc, []).append((sid, trav.direction))
    used = {arc: pairs for arc, pairs in table.items() if len(pairs) == 2}
    for signs in itertools.product((1, -1), repeat=len(sheets)):
        sign = dict(zip(sheets, signs))
        if all(sign[a] * da + sign[b] * db == 0
               for (a, da), (b, db) in used.values()):
            return True
    return False


def test_theta_has_three_sphere_selections():
    theta = build_theta()
    search = find_closed_surfaces(theta, 1000)
    assert not search.truncated
    keys = [tuple(sorted(s.sheets)) for s in search.selections]
    assert keys == [("w0", "w1"), ("w0", "w2"), ("w1", "w2")]
    for selection in search.selections:
        assert selection.orientable
        assert selection.euler == 2
        assert surface_orientability(theta, selection) == ("orientable", 0)


def test_closed_sheet_has_single_selection():
    poly = build_closed_sheet(2)
    search = find_closed_surfaces(poly, 1000)
    assert len(search.selections) == 1
    assert search.selections[0].sheets == frozenset({"s"})
    assert surface_orientability(poly, search.selections[0]) == ("orientable", 2)


def test_crosscap_sheet_orientability():
    poly = build_closed_sheet(1, orientable=False)
    assert surface_orientability(poly, {"s"}) == ("nonorientable", 1)


def test_selection_slot_rule():
    surgered = build_surgered_example()
    search = find_closed_surfaces(surgered.polyhedron, 100000)
    for selection in search.selections:
        for arc in surgered.polyhedron.arcs:
            slots = selection.arc_slots.get(arc.id, ())
            assert len(slots) in (0, 2)
            if arc.kind == "boundary":
                assert len(slots) == 0


def test_base_example_selections_are_six_spheres():
    born = build_base_example()
    search = find_closed_surfaces(born.polyhedron, 100000)
    assert len(search.selections) == 6
    assert all(s.orientable and s.euler == 2 for s in search.selections)


def test_surgered_example_contains_klein_bottle():
    born = build_surgered_example()
    search = find_closed_surfaces(born.polyhedron, 100000)
    special = [s for s in search.selections if not s.orientable]
    assert len(special) == 1
    klein = special[0]
    assert klein.euler == 0
    assert surface_orientability(born.polyhedron, klein) == ("nonorientable", 2)
    assert klein.sheets == frozenset(
        {"i_band", "i_floor", "o_band", "o_floor", "tube", "patch"})


def test_open_selection_rejected():
    theta = build_theta()
    with pytest.raises(SelectionNotClosed):
        make_selection(theta, {"w0"})


def test_truncation_reported():
    born = build_base_example()
    search = find_closed_surfaces(born.polyhedron, 3)
    assert search.truncated


def test_swap_circle_selection_is_nonorientable():
    # a wing pair exchanged by the collar monodromy closes into a Klein
    # bottle; the third wing alone cannot close
    from spineforge.core import (SWAP, TRIPLE, BranchArc, SheetSpec,
                                 SimplePolyhedron, WingTraversal)
    arc = BranchArc("c0", TRIPLE, None, SWAP)
    mobius = SheetSpec("m", False, 1,
                       ((WingTraversal("c0", 1, 1), WingTraversal("c0", 2, 1)),))
    disk = SheetSpec("w", True, 0, ((WingTraversal("c0", 0, 1),),))
    poly = SimplePolyhedron((disk, mobius), (arc,), (), name="swap")
    search = find_closed_surfaces(poly, 1000)
    assert [tuple(sorted(s.sheets)) for s in search.selections] == [("m",)]
    selection = search.selections[0]
    assert not selection.orientable
    assert selection.euler == 0
    assert surface_orientability(poly, selection) == ("nonorientable", 2)


def test_search_matches_brute_force(rng):
    cases = [build_theta(), build_base_example().polyhedron,
             build_surgered_example().polyhedron]
    cases += [random_round_map(rng, name=f"s{i}").polyhedron for i in range(20)]
    for poly in cases:
        expected = brute_force_selections(poly)
        search = find_closed_surfaces(poly, 10 ** 6)
        assert not search.truncated
        got = [s.sheets for s in search.selections]
        assert got == expected


def test_orientability_matches_exhaustive_enumeration(rng):
    cases = [build_theta(), build_base_example().polyhedron,
             build_surgered_example().polyhedron]
    cases += [random_round_map(rng, name=f"o{i}").polyhedron for i in range(20)]
    for poly in cases:
        if len(poly.sheets) > 12:
            continue
        for selection in find_closed_surfaces(poly, 10 ** 6).selections:
            assert selection.orientable == brute_force_orientable(
                poly, selection.sheets)
