"""Wireless-positioning confidence regions as visual-tracker search regions.

The library predicts and samples RSS measurements, computes the information
matrix and its covariance bound at any floor position, builds plug-in
elliptical confidence regions around least-squares position estimates, and
projects those regions into calibrated cameras as per-frame search boxes.
Monte Carlo studies, a planner HTTP service, and a CLI sit on top.
"""

from .camera import (
    CameraModel,
    PixelBox,
    camera_from_json,
    camera_to_json,
    convex_hull,
    project,
    project_region,
    unproject,
)
from .crb import (
    ConfidenceEllipse,
    Fim2,
    best_rmse,
    chi2_quantile,
    confidence_ellipse,
    crb,
    ellipse_from_json,
    ellipse_to_json,
    fim,
)
from .errors import (
    BehindCamera,
    CrbGateError,
    DegenerateDistance,
    DegenerateWaypoints,
    DomainError,
    EmptyCurve,
    InsufficientAnchors,
    LengthMismatch,
    NonFiniteDensity,
    RegionOutsideImage,
    SingularFim,
    StaleRevision,
    StreamOrderViolation,
    UnknownAnchor,
    UnknownScene,
    ValidationError,
)
from .estimator import (
    EstimatorConfig,
    PositionEstimate,
    initial_guesses,
    residuals,
    solve,
)
from .gate import (
    FrameResult,
    SearchRegion,
    gate_frame,
    gate_stream,
    result_from_json,
    result_to_json,
)
from .metrics import GtBox, auc, iou, recall_rate, success_curve
from .scene import (
    Scene,
    default_scene,
    default_targets,
    overhead_camera,
    perimeter_anchors,
    scene_from_json,
    scene_to_json,
)
from .simulate import (
    HeatmapGrid,
    ProbeResult,
    SigmaRow,
    SimReport,
    crb_heatmap,
    gen_trajectory,
    probe_point,
    run_coverage,
    run_mse,
)
from .store import SceneRecord, SceneStore
from .wireless import (
    Anchor,
    EmpiricalNoise,
    GaussianNoise,
    MeasurementFrame,
    NoiseModel,
    TargetState,
    jacobian,
    noise_information,
    predict_all,
    predict_rss,
    sample_measurements,
)

__version__ = "0.1.0"
