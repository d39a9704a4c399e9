//! Real and complex roots of integer polynomials, and the coincidence
//! scans over pairs of cyclotomic indices.

mod aberth;
pub mod cache;
pub mod complex;
pub mod isolate;
pub mod record;
pub mod scan;
pub mod sturm;

pub use cache::{load_cache, run_cached};
pub use complex::{complex_roots, ComplexRoot};
pub use isolate::{isolate_real_roots, refine_interval, refine_root, IsolatingInterval, RefinedRoot};
pub use record::{CoincidenceRecord, RootFlag, RootKind, RootRecord};
pub use scan::{
    certified_real_record, complex_record, pairs_up_to, quarter_lift_check, range_certificate, real_coincidence_roots,
    real_record, scan_complex, scan_complex_cached, scan_real, scan_real_cached, ComplexScanReport,
    QuarterLift, RangeCertificate, RealScanReport,
};
pub use sturm::{sturm_count, Bound, SturmSequence};
