"""netcap: a capacity workbench for small dense networks.

Architect a network (toggle links, add skip connections, pick input
features), train it on synthetic or uploaded binary-labeled data, and watch
the measurements move: memory-equivalent capacity, the dataset's expected
capacity demand, the generalization ratio, and a class-balance bias flag.
"""

from netcap.datasets import (
    Dataset,
    FeatureView,
    RawPoint,
    apply_features,
    generate,
    parse_csv,
    serialize_csv,
    split,
)
from netcap.errors import (
    DivergenceError,
    EmptyDatasetError,
    InputShapeError,
    NetcapError,
    ParseError,
    SchemaError,
    UndefinedCapacityError,
    ValidationError,
)
from netcap.measurements import (
    DemandTrace,
    LayerCapacity,
    MeasurementReport,
    bias_indicator,
    capacity_demand,
    class_balance,
    generalization_ratio,
    measurement_report,
    mec,
    mec_trace,
)
from netcap.network import (
    EvalReport,
    NetworkState,
    Params,
    Trainer,
    TrainingConfig,
    evaluate,
    forward,
    init_params,
    reconcile_params,
    train_step,
)
from netcap.records import export_record, import_record, record_to_json
from netcap.runner import MetricsFrame, RunResult, build_frame, prepare_data, run_experiment
from netcap.topology import (
    ACTIVATIONS,
    FEATURES,
    AddLayer,
    AddSkipEdge,
    Edit,
    RemoveEdge,
    RemoveLayer,
    SetActivation,
    SetFeatures,
    SetWidth,
    ToggleEdge,
    Topology,
    apply_edit,
)

__version__ = "0.1.0"
