"""
Domain value types.

Every type validates its invariants on construction; the services can rely
on them without re-checking.
"""

from treefit.models.distance_matrix import DistanceMatrix, MetricReport, Quadruple
from treefit.models.fit import AdamState, EpochRecord, FitConfig, FitResult, ObjectiveValue
from treefit.models.graph import FeatureMatrix, Graph, SbmSpec
from treefit.models.report import AggregateStats, ConfigEcho, DeltaReport, EvalReport, RootResult, RunReport
from treefit.models.smoothing import BatchSet, GradientMatrix, SmoothingParams
from treefit.models.tree import Dendrogram, TreeStructure

__all__ = [
    "AdamState",
    "AggregateStats",
    "BatchSet",
    "ConfigEcho",
    "DeltaReport",
    "Dendrogram",
    "DistanceMatrix",
    "EpochRecord",
    "EvalReport",
    "FeatureMatrix",
    "FitConfig",
    "FitResult",
    "GradientMatrix",
    "Graph",
    "MetricReport",
    "ObjectiveValue",
    "Quadruple",
    "RootResult",
    "RunReport",
    "SbmSpec",
    "SmoothingParams",
    "TreeStructure",
]
