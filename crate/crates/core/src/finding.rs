use serde::Serialize;

/// One detected smell instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Finding {
    pub file: String,
    pub line: u32,
    pub rule_id: String,
    pub col: u32,
    pub message: String,
}
