//! On-disk algebra format:
//! `{"dim": N, "basis": [..], "table": [{"i", "j", "products": [{"k", "num", "den"}]}]}`
//! with 0-based indices and decimal-string numerators and denominators.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::rational::Rational;

use super::{AlgebraError, LeibnizAlgebra, TableBuilder};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductJson {
    pub k: usize,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntryJson {
    pub i: usize,
    pub j: usize,
    pub products: Vec<ProductJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub dim: usize,
    pub basis: Vec<String>,
    pub table: Vec<TableEntryJson>,
}

fn parse_coef(i: usize, j: usize, p: &ProductJson) -> Result<Rational, AlgebraError> {
    let bad = |reason: &str| AlgebraError::InvalidNumber { i, j, k: p.k, reason: reason.to_string() };
    let num: BigInt = p.num.trim().parse().map_err(|_| bad("numerator is not an integer"))?;
    let den: BigInt = p.den.trim().parse().map_err(|_| bad("denominator is not an integer"))?;
    Rational::from_bigints(num, den).ok_or_else(|| bad("zero denominator"))
}

impl AlgebraJson {
    pub fn from_algebra(a: &LeibnizAlgebra) -> Self {
        let table = a
            .products()
            .map(|((i, j), prod)| TableEntryJson {
                i,
                j,
                products: prod
                    .iter()
                    .map(|(k, c)| ProductJson { k: *k, num: c.numer().to_string(), den: c.denom().to_string() })
                    .collect(),
            })
            .collect();
        AlgebraJson { dim: a.dim(), basis: a.labels().to_vec(), table }
    }

    /// Validates indices, duplicates and numbers; the Leibniz identity is
    /// checked only when `check_identity` is set.
    pub fn into_algebra(self, check_identity: bool) -> Result<LeibnizAlgebra, AlgebraError> {
        let n = self.dim;
        if self.basis.len() != n {
            return Err(AlgebraError::LabelCount { expected: n, found: self.basis.len() });
        }
        let mut seen = BTreeSet::new();
        let mut t = TableBuilder::new(self.basis);
        for entry in &self.table {
            let (i, j) = (entry.i, entry.j);
            for index in [i, j] {
                if index >= n {
                    return Err(AlgebraError::IndexOutOfRange { index, dim: n });
                }
            }
            if !seen.insert((i, j)) {
                return Err(AlgebraError::DuplicatePair { i, j });
            }
            let mut targets = BTreeMap::new();
            for p in &entry.products {
                if p.k >= n {
                    return Err(AlgebraError::IndexOutOfRange { index: p.k, dim: n });
                }
                if targets.insert(p.k, ()).is_some() {
                    return Err(AlgebraError::DuplicateTarget { i, j, k: p.k });
                }
                t.add(i, j, p.k, parse_coef(i, j, p)?);
            }
        }
        if check_identity {
            t.build()
        } else {
            Ok(t.build_unchecked())
        }
    }
}

impl LeibnizAlgebra {
    pub fn to_json(&self) -> AlgebraJson {
        AlgebraJson::from_algebra(self)
    }

    /// Pretty-printed JSON text with entries sorted by `(i, j)` and targets by `k`.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("plain data serializes")
    }

    /// Parses and validates, including the Leibniz identity.
    pub fn from_json_str(s: &str) -> Result<Self, AlgebraError> {
        Self::from_json_str_with(s, true)
    }

    /// Parses without enforcing the Leibniz identity when `check_identity` is false.
    pub fn from_json_str_with(s: &str, check_identity: bool) -> Result<Self, AlgebraError> {
        let raw: AlgebraJson = serde_json::from_str(s).map_err(|e| AlgebraError::Json {
            message: e.to_string(),
            line: e.line(),
            column: e.column(),
        })?;
        raw.into_algebra(check_identity)
    }
}
