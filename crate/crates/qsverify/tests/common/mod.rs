use std::path::PathBuf;
use std::sync::OnceLock;

use qsverify::DataSet;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn data() -> &'static DataSet {
    static DS: OnceLock<DataSet> = OnceLock::new();
    DS.get_or_init(|| DataSet::load(data_dir()).expect("shipped data loads"))
}
