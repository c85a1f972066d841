from spineforge.arrangement import (ArrEdge, Crossing, Curve,
                                    CurveArrangement, Face, empty_arrangement,
                                    validate_arrangement, winding_numbers)


def two_disjoint_circles():
    edges = (ArrEdge("eA", "A", None, "fa", "f_out"),
             ArrEdge("eB", "B", None, "fb", "f_out"))
    curves = (Curve("A", ("aux", "a"), ("eA",)),
              Curve("B", ("aux", "b"), ("eB",)))
    faces = (Face("fa", ((("eA", 1),),)),
             Face("fb", ((("eB", 1),),)),
             Face("f_out", ((("eA", -1),), (("eB", -1),)), unbounded=True))
    return CurveArrangement((), edges, curves, faces)


def vesica():
    """Two circles crossing twice: faces are two moons, a lens, outside."""
    crossings = (
        Crossing("x1", (("b2", 1), ("a1", 0), ("b1", 0), ("a2", 1))),
        Crossing("x2", (("a2", 0), ("b1", 1), ("a1", 1), ("b2", 0))),
    )
    edges = (
        ArrEdge("a1", "A", (("x1", 1), ("x2", 2)), "fl", "f_out"),
        ArrEdge("a2", "A", (("x2", 0), ("x1", 3)), "fm", "fr"),
        ArrEdge("b1", "B", (("x1", 2), ("x2", 1)), "fm", "fl"),
        ArrEdge("b2", "B", (("x2", 3), ("x1", 0)), "fr", "f_out"),
    )
    curves = (Curve("A", ("aux", "a"), ("a1", "a2")),
              Curve("B", ("aux", "b"), ("b1", "b2")))
    faces = (
        Face("fl", ((("a1", 1), ("b1", -1)),)),
        Face("fm", ((("a2", 1), ("b1", 1)),)),
        Face("fr", ((("a2", -1), ("b2", 1)),)),
        Face("f_out", ((("a1", -1), ("b2", -1)),), unbounded=True),
    )
    return CurveArrangement(crossings, edges, curves, faces)


def figure_eight():
    crossings = (
        Crossing("x", (("e2", 0), ("e1", 0), ("e1", 1), ("e2", 1))),
    )
    edges = (
        ArrEdge("e1", "C", (("x", 1), ("x", 2)), "f_left", "f_out"),
        ArrEdge("e2", "C", (("x", 0), ("x", 3)), "f_out", "f_right"),
    )
    curves = (Curve("C", ("aux", "c"), ("e1", "e2")),)
    faces = (
        Face("f_left", ((("e1", 1),),)),
        Face("f_right", ((("e2", -1),),)),
        Face("f_out", ((("e1", -1), ("e2", 1)),), unbounded=True),
    )
    return CurveArrangement(crossings, edges, curves, faces)


def test_two_disjoint_circles_valid():
    arr = two_disjoint_circles()
    assert validate_arrangement(arr).ok
    assert len(arr.faces) == 3


def test_vesica_valid():
    arr = vesica()
    assert validate_arrangement(arr).ok
    assert len(arr.faces) == 4
    assert len(arr.crossings) == 2


def test_figure_eight_valid():
    arr = figure_eight()
    assert validate_arrangement(arr).ok
    assert len(arr.faces) == 3
    assert len(arr.crossings) == 1


def test_empty_arrangement_valid():
    assert validate_arrangement(empty_arrangement()).ok


def test_non_four_valent_crossing_rejected():
    arr = vesica()
    broken = CurveArrangement(
        (Crossing("x1", arr.crossing("x1").order[:3]),) + arr.crossings[1:],
        arr.edges, arr.curves, arr.faces)
    report = validate_arrangement(broken)
    assert not report.ok
    assert any(v.code == "NotFourValent" for v in report.violations)


def test_dangling_edge_rejected():
    arr = two_disjoint_circles()
    broken = CurveArrangement(
        arr.crossings,
        (ArrEdge("eA", "A", (("nowhere", 0), ("nowhere", 1)), "fa", "f_out"),
         arr.edges[1]),
        arr.curves, arr.faces)
    report = validate_arrangement(broken)
    assert not report.ok
    assert any(v.code == "DanglingEdge" for v in report.violations)


def test_euler_failure_rejected():
    # an extra face breaks the plane count
    arr = two_disjoint_circles()
    broken = CurveArrangement(
        arr.crossings, arr.edges, arr.curves,
        arr.faces + (Face("ghost", ()),))
    report = validate_arrangement(broken)
    assert not report.ok
    codes = {v.code for v in report.violations}
    assert "EulerFormula" in codes or "EmptyContour" in codes


def test_winding_numbers_on_vesica():
    arr = vesica()
    winding = winding_numbers(arr, {"A": 1, "B": 1})
    assert winding["f_out"] == 0
    assert winding["fl"] == 1
    assert winding["fr"] == 1
    assert winding["fm"] == 2


def test_winding_numbers_on_figure_eight():
    arr = figure_eight()
    winding = winding_numbers(arr, {"C": 1})
    assert winding["f_out"] == 0
    assert winding["f_left"] == 1
    assert winding["f_right"] == -1
