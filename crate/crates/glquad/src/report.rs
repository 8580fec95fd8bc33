//! Serializable report types with a fixed field order, so JSON output
//! is byte-identical for identical inputs and configuration.

use serde::Serialize;

use crate::field::Field;
use crate::koszul::BettiOutcome;
use crate::poly::PolyRing;
use crate::quotient::{HilbertSeries, RegSeqCertificate};
use crate::strength::{StrengthMethod, StrengthReport};

#[derive(Clone, Debug, Serialize)]
pub struct BettiEntry {
    pub i: usize,
    pub j: usize,
    pub beta: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BettiJson {
    pub field: String,
    pub entries: Vec<BettiEntry>,
    pub truncated: bool,
    pub regularity: i64,
    pub regularity_exact: bool,
    pub artinian_reduced: bool,
}

impl BettiJson {
    pub fn from_outcome(out: &BettiOutcome) -> Self {
        let reg = out.table.regularity();
        BettiJson {
            field: out.field.clone(),
            entries: out
                .table
                .nonzero()
                .map(|(i, j, beta)| BettiEntry { i, j, beta })
                .collect(),
            truncated: out.table.truncated,
            regularity: reg.value,
            regularity_exact: reg.exact,
            artinian_reduced: out.reduced,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateJson {
    pub verdict: String,
    pub codim: usize,
    pub expected: usize,
    pub field: String,
    pub certified: bool,
}

impl CertificateJson {
    pub fn from_certificate(c: &RegSeqCertificate) -> Self {
        CertificateJson {
            verdict: if c.regular { "regular" } else { "not-regular" }.to_string(),
            codim: c.codim,
            expected: c.expected,
            field: c.field.clone(),
            certified: c.certified,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HilbertJson {
    pub nvars: usize,
    /// numerator coefficients over (1 - t)^nvars, index = degree
    pub numerator: Vec<String>,
    /// leading coefficients of the expanded series
    pub coefficients: Vec<String>,
}

impl HilbertJson {
    pub fn from_series(hs: &HilbertSeries, expand_to: usize) -> Self {
        HilbertJson {
            nvars: hs.nvars,
            numerator: hs.numerator.iter().map(|c| c.to_string()).collect(),
            coefficients: (0..=expand_to)
                .map(|d| hs.coefficient(d).to_string())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StrengthJson {
    pub rank: usize,
    pub strength: usize,
    pub method: StrengthMethod,
    pub field: String,
    /// products (g, h) with q = sum g*h, when a decomposition over the
    /// base field was found
    pub witness: Option<Vec<[String; 2]>>,
}

impl StrengthJson {
    pub fn from_report<F: Field>(ring: &PolyRing<F>, r: &StrengthReport<F>) -> Self {
        StrengthJson {
            rank: r.rank,
            strength: r.strength,
            method: r.method,
            field: ring.field.label(),
            witness: r.witness.as_ref().map(|w| {
                w.iter()
                    .map(|(g, h)| [ring.fmt_poly(g), ring.fmt_poly(h)])
                    .collect()
            }),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GroebnerJson {
    pub field: String,
    pub order: String,
    pub size: usize,
    pub generators: Vec<String>,
}

/// Serialize any report compactly; field order follows the struct
/// declaration, so equal values give byte-identical output.
pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::RegSeqCertificate;

    #[test]
    fn deterministic_bytes() {
        let c = RegSeqCertificate {
            regular: true,
            codim: 3,
            expected: 3,
            field: "QQ".into(),
            certified: true,
        };
        let a = to_json(&CertificateJson::from_certificate(&c));
        let b = to_json(&CertificateJson::from_certificate(&c));
        assert_eq!(a, b);
        assert!(a.contains("\"verdict\": \"regular\""));
        // field order is fixed by declaration order
        let vi = a.find("\"verdict\"").unwrap();
        let ci = a.find("\"codim\"").unwrap();
        let fi = a.find("\"field\"").unwrap();
        assert!(vi < ci && ci < fi);
    }
}
