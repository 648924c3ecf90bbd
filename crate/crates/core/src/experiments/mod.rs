//! Parameter selection, figure-class sweeps and their CSV datasets.

mod dataset;
mod presets;
mod selection;
mod sweep;

pub use dataset::{
    fmt_f64, fmt_short, from_long_table, to_long_table, CsvTable, SpectrumDataset, SweepAxis, FORMAT_TAG,
};
pub use presets::{
    fourier_dataset, preset_sweep, reproduce, series_name, spectrum_artifacts, selected_params,
    worldline_dataset, Artifact, OutputFormat, SM_REFERENCE_ABAR, SELECTED_ABAR, SELECTED_AUA_A, SELECTED_FD,
    SELECTED_SA_ALPHA,
};
pub use selection::{select_common, select_parameters, selection_at, Selection, SelectionCriteria, SelectionTable};
pub use sweep::{
    run_sweep, AccelTarget, BiasPolicy, FigureId, Grid, GridScale, PointSetup, Series, SweepSpec, TrajectorySpec,
    DEFAULT_POINTS,
};
