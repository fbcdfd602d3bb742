//! Fixtures shared by the benchmarks.

use gsdf_core::search::row_files;
use gsdf_core::{GsParamSet, RowFile, SymmetryType};

/// Filtered row files for the first parameter set of order `v` admitting `ty`.
pub fn fixture(v: u32, ty: SymmetryType) -> (GsParamSet, [RowFile; 4]) {
    let p = ty.param_sets(v).expect("odd order")[0];
    let files = row_files(&p, ty, true).expect("admitted type");
    (p, files)
}
