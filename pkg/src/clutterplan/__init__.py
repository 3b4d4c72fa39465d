"""Target retrieval among movable obstacles on a cluttered shelf.

Builds a traversability graph over the known objects, relocates the objects
on a min-hop path to the target, and searches for occluded targets by
revealed volume. Baseline planners and an experiment harness are included.
"""

from .geometry import ConfigurationError, Disc, ObjectSpec, SceneError, Workspace
from .harness import InstanceConfig, RunMetrics, generate_instance, run_batch, run_episode
from .motion import AlwaysSucceed, Disc2D, RandomFirstFault, ScriptedFault
from .occlusion import CameraModel
from .planner import DONE, FAIL, base_planner, reloc_path, reloc_planner
from .tgraph import ROBOT, TGraph, gen_graph
from .world import WorldState

__all__ = [
    "AlwaysSucceed",
    "CameraModel",
    "ConfigurationError",
    "DONE",
    "Disc",
    "Disc2D",
    "FAIL",
    "InstanceConfig",
    "ObjectSpec",
    "ROBOT",
    "RandomFirstFault",
    "RunMetrics",
    "SceneError",
    "ScriptedFault",
    "TGraph",
    "Workspace",
    "WorldState",
    "base_planner",
    "gen_graph",
    "generate_instance",
    "reloc_path",
    "reloc_planner",
    "run_batch",
    "run_episode",
]

__version__ = "0.1.0"
