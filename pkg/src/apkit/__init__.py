"""apkit: almost periodicity in gauge spaces.

Groups, points and gauges live in :mod:`apkit.group`, :mod:`apkit.points`
and :mod:`apkit.gauges`; an :class:`Instance` ties them together.  The
detectors (almost-period sets, relative density, eps-nets, the three-way
classification) are in :mod:`apkit.detectors`, derived structures (invariant
metric, mixed gauge, hull group) in :mod:`apkit.constructions`, and the
exhaustive finite baseline in :mod:`apkit.oracle`.
"""
__version__ = "0.1.0"

from .errors import ApkitError, DataError, ResourceError, UsageError, WindowError
from .group import FineLattice, FiniteCyclic, Group, LatticeWindow, parse_group, window_coords
from .points import Field, PointMeasure, PointSet, SampledFunction
from .testfns import Hat, Indicator
from .gauges import (AutocorrelationGauge, MeasureNormGauge, ProductGauge, StepanovGauge, SupGauge,
                     VagueGauge, make_gauge)
from .space import (DISCRETE, EXACT_INVARIANT, FAIL, INCONCLUSIVE, PASS, WINDOWED, Instance,
                    check_invariance, equicontinuity_check, gauge_axiom_violations)
from .detectors import (almost_periods, classify, finite_relative_density, greedy_eps_net,
                        net_cover_bridge, mixed_containment, density_cover_bridge, relative_density)
from .constructions import (build_hull_group, invariant_metric_eval, invariant_metric_matrix,
                            mixed_gauge_eval, period_subgroup)

__all__ = [
    "ApkitError", "AutocorrelationGauge", "DISCRETE", "DataError", "EXACT_INVARIANT", "FAIL",
    "Field", "FineLattice", "FiniteCyclic", "Group", "Hat", "INCONCLUSIVE", "Indicator",
    "Instance", "LatticeWindow", "MeasureNormGauge", "PASS", "PointMeasure", "PointSet",
    "ProductGauge", "ResourceError", "SampledFunction", "StepanovGauge", "SupGauge",
    "UsageError", "VagueGauge", "WINDOWED", "WindowError", "almost_periods",
    "build_hull_group", "check_invariance", "classify", "equicontinuity_check",
    "finite_relative_density", "gauge_axiom_violations", "greedy_eps_net",
    "invariant_metric_eval", "invariant_metric_matrix", "net_cover_bridge", "make_gauge",
    "mixed_containment", "mixed_gauge_eval", "parse_group", "period_subgroup", "density_cover_bridge",
    "relative_density", "window_coords",
]
