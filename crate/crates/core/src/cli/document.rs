//! On-disk family format.
//!
//! A family file is one JSON object:
//!
//! ```text
//! {
//!   "n": 3,
//!   "p": 3,
//!   "compositions": [
//!     [[0], [1], [2]],
//!     [[0], [2], [1]]
//!   ]
//! }
//! ```
//!
//! Each composition is a list of exactly `p` parts; each part is a strictly
//! ascending list of element indices in `0..n`. Parts must be disjoint and
//! cover `0..n`, and no composition may repeat. Unknown keys are rejected.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::families::{GroundSet, SubsetMask, MAX_GROUND_SIZE};
use crate::meshalkin::{validate_composition, CompositionFamily};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDocument {
    pub n: u32,
    pub p: usize,
    pub compositions: Vec<Vec<Vec<u32>>>,
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed family document: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid header: {0}")]
    Header(String),
    /// `index` is 0-based.
    #[error("composition {index}: {reason}")]
    Composition { index: usize, reason: String },
    #[error(transparent)]
    Family(#[from] Error),
}

impl FamilyDocument {
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Validate every composition and build the family.
    pub fn to_family(&self) -> Result<CompositionFamily, DocumentError> {
        if self.n > MAX_GROUND_SIZE {
            return Err(DocumentError::Header(format!(
                "n = {} exceeds {MAX_GROUND_SIZE}",
                self.n
            )));
        }
        if self.p < 2 {
            return Err(DocumentError::Header(format!(
                "p must be at least 2, got {}",
                self.p
            )));
        }
        let ground = GroundSet::new(self.n)?;
        let mut family = CompositionFamily::empty(ground, self.p);
        for (index, composition) in self.compositions.iter().enumerate() {
            let fail = |reason: String| DocumentError::Composition { index, reason };
            if composition.len() != self.p {
                return Err(fail(format!(
                    "has {} parts, expected {}",
                    composition.len(),
                    self.p
                )));
            }
            let mut parts = Vec::with_capacity(self.p);
            for (k, part) in composition.iter().enumerate() {
                if let Some(&e) = part.iter().find(|&&e| e >= self.n) {
                    return Err(fail(format!(
                        "part {} has index {e} outside 0..{}",
                        k + 1,
                        self.n
                    )));
                }
                if part.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(fail(format!("part {} is not strictly ascending", k + 1)));
                }
                parts.push(
                    SubsetMask::from_elements(part.iter().copied())
                        .map_err(|e| fail(e.to_string()))?,
                );
            }
            let member = validate_composition(parts, ground).map_err(|e| fail(e.to_string()))?;
            if !family.insert(member).map_err(|e| fail(e.to_string()))? {
                return Err(fail("duplicate composition".into()));
            }
        }
        Ok(family)
    }

    /// Document for a family over `{0, ..., n-1}`, members in canonical order.
    pub fn from_family(family: &CompositionFamily) -> Result<Self, DocumentError> {
        let n = family.n();
        if family.ground() != GroundSet::new(n)? {
            return Err(DocumentError::Header(
                "ground set is not {0, ..., n-1}".into(),
            ));
        }
        Ok(FamilyDocument {
            n,
            p: family.parts(),
            compositions: family
                .iter()
                .map(|c| c.parts().iter().map(|s| s.elements().collect()).collect())
                .collect(),
        })
    }

    /// Canonical text: one composition per line, trailing newline.
    pub fn to_canonical_string(&self) -> String {
        let mut out = format!(
            "{{\n  \"n\": {},\n  \"p\": {},\n  \"compositions\": [",
            self.n, self.p
        );
        for (i, composition) in self.compositions.iter().enumerate() {
            out.push_str(if i == 0 { "\n    " } else { ",\n    " });
            out.push('[');
            for (k, part) in composition.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                out.push('[');
                let elements: Vec<String> = part.iter().map(|e| e.to_string()).collect();
                out.push_str(&elements.join(", "));
                out.push(']');
            }
            out.push(']');
        }
        if !self.compositions.is_empty() {
            out.push_str("\n  ");
        }
        out.push_str("]\n}\n");
        out
    }
}

/// Parse and validate a family file.
pub fn read_family(text: &str) -> Result<CompositionFamily, DocumentError> {
    FamilyDocument::parse(text)?.to_family()
}

/// Canonical text of a family.
pub fn write_family(family: &CompositionFamily) -> Result<String, DocumentError> {
    Ok(FamilyDocument::from_family(family)?.to_canonical_string())
}
