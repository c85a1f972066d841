"""Combinatorial engine for normal simple polyhedra carrying plane maps:
validation, characteristic and mod-2 homology, surface-attachment surgery,
and graph-based embeddability obstructions."""

from .core import (BOUNDARY, SWAP, TRIPLE, TRIVIAL, BranchArc, EndRoles,
                   SheetSpec, SimplePolyhedron, ValidationReport, VertexSpec,
                   WingTraversal, euler_characteristic, is_normal,
                   strand_circles, validate_polyhedron)
from .homology import cellulate, z2_homology
from .subsurfaces import (SurfaceSelection, find_closed_surfaces,
                          make_selection, surface_orientability)
from .arrangement import (ArrEdge, Crossing, Curve, CurveArrangement, Face,
                          validate_arrangement, winding_numbers)
from .bornmap import (BornMap, RealizabilityCertificate, StrandAssignment,
                      realizability_certificate, region_counts,
                      validate_born_map)
from .surgery import (DiskRegion, ImageCircle, ImageRoute, PlanCircle,
                      PlanEvent, PlanSegment, RelocationWitness, SurfacePatch,
                      SurgeryPlan, relocate_and_attach, attach_surface,
                      check_attachment_hypotheses, normalize_into_disk)
from .obstruction import (DiskInP, EmbeddingWitness, IncidenceGraph,
                          ObstructionReport, TargetManifold, build_graph,
                          disk_obstruction_report, heegaard_target, maximal_graph,
                          orient_sheets, s3_obstruction)
from .gallery import (RoundCircle, RoundSpec, build_base_example,
                      build_closed_sheet, build_sphere_fixture,
                      build_surgered_example, build_theta, klein_plan,
                      round_reeb)

__all__ = [name for name in dir() if not name.startswith("_")]
