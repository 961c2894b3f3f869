//! Command-line front end for `sectorplan`: scenario files, single runs,
//! paired benchmark campaigns and SVG output.

pub mod campaign;
pub mod commands;
pub mod error;
pub mod records;
pub mod result_file;
pub mod settings;
pub mod svg;

pub use campaign::{run_campaign, summarize, CampaignSpec, CellSpec, SummaryRow};
pub use commands::{Cli, Outcome};
pub use error::CliError;
pub use records::{to_csv, MetricsRecord, CSV_HEADER};
pub use result_file::ResultFile;
pub use settings::{PlannerSettings, PlannerTuning};
pub use svg::{render_svg, SvgOptions};
