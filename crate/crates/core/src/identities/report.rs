use std::collections::BTreeMap;

use rug::Float;
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::analytic::{decimal, log2, Lattice, ThetaValue};

/// Outcome of one numerical identity check: `pass ⟺ residual < 2^tol_log2`.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub identity: String,
    pub field: u32,
    pub parameters: BTreeMap<String, String>,
    pub lhs: ThetaValue,
    pub rhs: ThetaValue,
    pub residual: Float,
    pub tol_log2: i32,
    pub precision_bits: u32,
    pub pass: bool,
}

impl IdentityReport {
    pub fn new(
        identity: &str,
        lat: &Lattice,
        parameters: BTreeMap<String, String>,
        lhs: ThetaValue,
        rhs: ThetaValue,
    ) -> Self {
        let residual = lhs.residual(&rhs);
        let prec = lat.prec();
        let pass = residual < prec.tol();
        IdentityReport {
            identity: identity.to_string(),
            field: lat.field().d(),
            parameters,
            lhs,
            rhs,
            residual,
            tol_log2: prec.tol_log2(),
            precision_bits: prec.bits(),
            pass,
        }
    }

    pub fn residual_log2(&self) -> f64 {
        log2(&self.residual)
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let params: Vec<String> = self
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!(
            "{} {:<14} d={:<3} residual=2^{:.1} tol=2^{} [{}]",
            if self.pass { "PASS" } else { "FAIL" },
            self.identity,
            self.field,
            self.residual_log2(),
            self.tol_log2,
            params.join(" ")
        )
    }
}

impl Serialize for IdentityReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("IdentityReport", 10)?;
        st.serialize_field("identity", &self.identity)?;
        st.serialize_field("field", &self.field)?;
        st.serialize_field("parameters", &self.parameters)?;
        st.serialize_field("lhs", &self.lhs)?;
        st.serialize_field("rhs", &self.rhs)?;
        st.serialize_field("residual", &decimal(&Float::with_val(64, &self.residual)))?;
        let l = self.residual_log2();
        st.serialize_field("residual_log2", &l.is_finite().then_some(l))?;
        st.serialize_field("tol_log2", &self.tol_log2)?;
        st.serialize_field("precision_bits", &self.precision_bits)?;
        st.serialize_field("pass", &self.pass)?;
        st.end()
    }
}

/// Builds a parameter map from `(key, value)` pairs.
pub fn params<const N: usize>(kv: [(&str, String); N]) -> BTreeMap<String, String> {
    kv.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}
