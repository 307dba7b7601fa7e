"""segcarve: segment-aware sphere clipping and rendering for labeled volumes.

Headless pipeline over co-registered intensity volumes and label maps:
per-sphere/per-segment clipping, opacity anti-aliasing, Sobel normals,
ray-cast rendering with depth and first-hit segment buffers, plus
view-similarity metrics, Plackett-Luce rank aggregation, an interactive
carving session model, a CLI and a stateless HTTP render service.
"""

from .core import (
    ClipMask,
    ClippingSphere,
    OpacityTransferFunction,
    OpacityVolume,
    Pose,
    compute_opacity_volume,
    eval_transfer,
    is_clipped,
)
from .errors import SegcarveError
from .filters import AaParams, NormalVolume, antialias_opacity, compute_normals
from .io import (
    MISS_LABEL,
    ColorTable,
    FrameSet,
    IntensityVolume,
    LabelMap,
    parse_color_table,
    parse_nrrd,
    read_frameset,
    write_frameset,
    write_nrrd,
)
from .metrics import (
    RankingData,
    WorthVector,
    global_rank,
    mae_first_segment,
    parse_rankings,
    plackett_luce_fit,
    rank_metric_regression,
    rmse_depth,
)
from .phantom import PhantomSpec, phantom_color_table, phantom_generate, phantom_scene
from .render import generate_ray, generate_rays, intersect_aabb, march_rays, render
from .scene import (
    CameraSpec,
    PoseSpec,
    RenderSpec,
    Scene,
    ShadingSpec,
    SphereSpec,
    parse_scene,
    serialize_scene,
)
from .session import (
    CarveSession,
    PickResult,
    fix_active_sphere,
    new_session,
    pick_pixel,
    pick_segment,
    remove_last_sphere,
    reset_mask,
    set_active_sphere,
    snapshot,
    toggle_label,
)

__version__ = "0.1.0"
