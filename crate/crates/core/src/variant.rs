use serde::{Deserialize, Serialize};

/// Selects between a literal transcription of a closed-form expression and the
/// version reconciled against the Fock-space oracle.
///
/// Only `Corrected` is used by the analytic engines by default; `Literal` is
/// kept so the validation report can show where and by how much the two differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaVariant {
    #[default]
    Corrected,
    Literal,
}
