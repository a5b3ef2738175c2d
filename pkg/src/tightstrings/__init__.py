"""String complexes of finite gap and metric spaces.

A *string* is a set of points that can be ordered so that the triangle
inequality is tight all along the order.  Strings form a simplicial
complex; relaxing tightness by epsilon gives a filtration with a
persistence barcode.
"""
from .complex import (HomologyResult, StringComplex, build_complex, connected_components, endpoint_subcomplex,
                      euler_characteristic, homology)
from .construct import (RealizationParams, Triangulation2D, barycentric_subdivision, realize,
                        sphere_four_points, surface_library, verify_realization)
from .gapspace import (GapSpace, ValidationReport, circle_arc_metric, collinear_points, digraph_gaps, is_metric,
                       polygon_points, two_parallel_lines, uniform_metric, validate)
from .kernels import BACKEND
from .persistence import Barcode, Filtration, barcode, betti_curve, build_filtration
from .strings import (OrderedString, StringSet, birth, direct_orders, endpoints, enumerate_eps_strings, excess,
                      is_eps_string, is_string, oracle_enumerate)

__version__ = "0.1.0"
