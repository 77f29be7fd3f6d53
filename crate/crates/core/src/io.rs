//! JSON document schemas for every input the CLI accepts, plus the textual
//! triple format for matrix debug dumps.
//!
//! Field names are a stable contract; see the README schema section.

use crate::alexander::{AbelianizationMap, BraidWord};
use crate::chain::{EquivariantComplex, GroupRingElement, GroupRingMatrix};
use crate::exactla::{IntMatrix, LaurentMatrix};
use crate::fpgroup::{GroupPresentation, PadicRep};
use crate::iwasawa::ModulePresentation;
use crate::poly::MultiPoly;
use crate::word::Word;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid document: {0}")]
    Invalid(String),
    #[error(transparent)]
    FpGroup(#[from] crate::fpgroup::FpGroupError),
    #[error(transparent)]
    Chain(#[from] crate::chain::ChainError),
    #[error(transparent)]
    Iwasawa(#[from] crate::iwasawa::IwasawaError),
}

/// `[[coeff, [exps]]]` polynomial encoding shared by module and matrix
/// documents.
pub type PolyDoc = Vec<(i64, Vec<i32>)>;

pub fn poly_from_doc(nvars: usize, doc: &PolyDoc) -> Result<MultiPoly<i64>, DocError> {
    for (_, exps) in doc {
        if exps.len() != nvars {
            return Err(DocError::Invalid(format!(
                "exponent vector {:?} does not have {} entries",
                exps, nvars
            )));
        }
    }
    Ok(MultiPoly::from_terms(nvars, doc.iter().cloned()))
}

pub fn poly_to_doc(p: &MultiPoly<i64>) -> PolyDoc {
    p.terms().map(|(e, &c)| (c, e.clone())).collect()
}

// ---------------------------------------------------------------------------
// Tower input: presentation + representation + complex
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RepDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub n: usize,
    pub images: Vec<Vec<Vec<i64>>>,
    pub max_level: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BoundaryEntryDoc {
    pub row: usize,
    pub col: usize,
    pub terms: Vec<(i64, Vec<i32>)>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BoundaryDoc {
    pub k: usize,
    pub entries: Vec<BoundaryEntryDoc>,
}

/// Either an explicit complex or `{"presentation_complex": true}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ComplexDoc {
    Presentation {
        presentation_complex: bool,
    },
    Explicit {
        dims: Vec<usize>,
        boundaries: Vec<BoundaryDoc>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GroupDoc {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<i32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rep: Option<RepDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<ComplexDoc>,
}

impl GroupDoc {
    pub fn presentation(&self) -> Result<GroupPresentation, DocError> {
        let relators = self
            .relators
            .iter()
            .map(|r| Word::new(r.iter().copied()))
            .collect();
        Ok(GroupPresentation::new(self.generators.clone(), relators)?)
    }

    /// Resolve the representation, letting a CLI `--prime` fill in or check
    /// the document's `p`.
    pub fn rep(&self, prime: Option<u64>) -> Result<PadicRep, DocError> {
        let doc = self
            .rep
            .as_ref()
            .ok_or_else(|| DocError::Invalid("document has no rep".into()))?;
        let p = match (doc.p, prime) {
            (Some(a), Some(b)) if a != b => {
                return Err(DocError::Invalid(format!(
                    "document says p = {}, flag says p = {}",
                    a, b
                )))
            }
            (Some(a), _) => a,
            (None, Some(b)) => b,
            (None, None) => {
                return Err(DocError::Invalid(
                    "no prime: set rep.p in the document or pass --prime".into(),
                ))
            }
        };
        Ok(PadicRep {
            p,
            n: doc.n,
            images: doc.images.clone(),
            max_level: doc.max_level,
        })
    }

    pub fn complex(&self, pres: &GroupPresentation) -> Result<EquivariantComplex, DocError> {
        match &self.complex {
            None | Some(ComplexDoc::Presentation {
                presentation_complex: true,
            }) => Ok(EquivariantComplex::presentation_complex(pres)),
            Some(ComplexDoc::Presentation {
                presentation_complex: false,
            }) => Err(DocError::Invalid(
                "presentation_complex must be true or the complex explicit".into(),
            )),
            Some(ComplexDoc::Explicit { dims, boundaries }) => {
                let mut mats = Vec::new();
                for (k, b) in boundaries.iter().enumerate() {
                    if b.k != k + 1 {
                        return Err(DocError::Invalid(format!(
                            "boundary blocks must be sorted with k = 1..; block {} has k = {}",
                            k, b.k
                        )));
                    }
                    if k + 1 >= dims.len() {
                        return Err(DocError::Invalid(format!(
                            "boundary k = {} exceeds the complex dimension",
                            b.k
                        )));
                    }
                    let mut m = GroupRingMatrix::zero(dims[k + 1], dims[k]);
                    for e in &b.entries {
                        if e.row >= dims[k + 1] || e.col >= dims[k] {
                            return Err(DocError::Invalid(format!(
                                "entry ({}, {}) out of range for boundary {}",
                                e.row, e.col, b.k
                            )));
                        }
                        let elem = GroupRingElement::from_terms(
                            e.terms
                                .iter()
                                .map(|(c, w)| (*c, Word::new(w.iter().copied()))),
                        );
                        m.set(e.row, e.col, elem);
                    }
                    mats.push(m);
                }
                Ok(EquivariantComplex::new(dims.clone(), mats)?)
            }
        }
    }

    pub fn from_parts(
        pres: &GroupPresentation,
        rep: Option<&PadicRep>,
        complex: Option<&EquivariantComplex>,
    ) -> GroupDoc {
        GroupDoc {
            generators: pres.generators.clone(),
            relators: pres
                .relators
                .iter()
                .map(|w| w.letters().to_vec())
                .collect(),
            rep: rep.map(|r| RepDoc {
                p: Some(r.p),
                n: r.n,
                images: r.images.clone(),
                max_level: r.max_level,
            }),
            complex: complex.map(|c| ComplexDoc::Explicit {
                dims: c.dims.clone(),
                boundaries: c
                    .boundaries
                    .iter()
                    .enumerate()
                    .map(|(k, b)| BoundaryDoc {
                        k: k + 1,
                        entries: (0..b.rows)
                            .flat_map(|r| (0..b.cols).map(move |c| (r, c)))
                            .filter(|&(r, c)| !b.get(r, c).is_zero())
                            .map(|(r, c)| BoundaryEntryDoc {
                                row: r,
                                col: c,
                                terms: b
                                    .get(r, c)
                                    .terms()
                                    .map(|(w, &coeff)| (coeff, w.letters().to_vec()))
                                    .collect(),
                            })
                            .collect(),
                    })
                    .collect(),
            }),
        }
    }
}

// ---------------------------------------------------------------------------
// Iwasawa module input
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ModuleDoc {
    pub p: u64,
    pub d: usize,
    /// Row-major matrix of polynomials; `cols` counts the target copies.
    pub presentation: Vec<Vec<PolyDoc>>,
    /// Needed when `presentation` is empty (free module).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<usize>,
}

impl ModuleDoc {
    pub fn module(&self) -> Result<ModulePresentation, DocError> {
        let rows = self.presentation.len();
        let cols = match (rows, self.cols) {
            (0, Some(c)) => c,
            (0, None) => {
                return Err(DocError::Invalid(
                    "empty presentation needs an explicit cols".into(),
                ))
            }
            (_, maybe) => {
                let c = self.presentation[0].len();
                if self.presentation.iter().any(|r| r.len() != c) {
                    return Err(DocError::Invalid("ragged presentation matrix".into()));
                }
                if let Some(explicit) = maybe {
                    if explicit != c {
                        return Err(DocError::Invalid(format!(
                            "cols = {} disagrees with row width {}",
                            explicit, c
                        )));
                    }
                }
                c
            }
        };
        let mut entries = Vec::with_capacity(rows * cols);
        for row in &self.presentation {
            for poly in row {
                entries.push(poly_from_doc(self.d, poly)?);
            }
        }
        Ok(ModulePresentation::new(self.p, self.d, rows, cols, entries)?)
    }
}

// ---------------------------------------------------------------------------
// Link input: explicit presentation or braid word
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum LinkDoc {
    Braid {
        braid_word: Vec<i32>,
        strands: usize,
    },
    Presented {
        generators: Vec<String>,
        relators: Vec<Vec<i32>>,
        meridian_images: Vec<Vec<i64>>,
    },
}

impl LinkDoc {
    pub fn resolve(&self) -> Result<(GroupPresentation, AbelianizationMap), DocError> {
        match self {
            LinkDoc::Braid {
                braid_word,
                strands,
            } => {
                let closure = crate::alexander::braid_closure(&BraidWord {
                    strands: *strands,
                    letters: braid_word.clone(),
                })
                .map_err(|e| DocError::Invalid(e.to_string()))?;
                Ok((closure.presentation, closure.abelianization))
            }
            LinkDoc::Presented {
                generators,
                relators,
                meridian_images,
            } => {
                let pres = GroupPresentation::new(
                    generators.clone(),
                    relators.iter().map(|r| Word::new(r.iter().copied())).collect(),
                )?;
                let rank = meridian_images
                    .first()
                    .map(|v| v.len())
                    .ok_or_else(|| DocError::Invalid("meridian_images is empty".into()))?;
                let ab = AbelianizationMap {
                    rank,
                    images: meridian_images.clone(),
                };
                ab.validate(&pres)
                    .map_err(|e| DocError::Invalid(e.to_string()))?;
                Ok((pres, ab))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Matrix input for the rank subcommand
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triples: Option<Vec<(usize, usize, i64)>>,
    /// Laurent entries; requires `num_vars`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_vars: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub laurent_entries: Option<Vec<Vec<PolyDoc>>>,
}

impl MatrixDoc {
    pub fn int_matrix(&self) -> Result<IntMatrix, DocError> {
        if let Some(entries) = &self.entries {
            if entries.len() != self.rows || entries.iter().any(|r| r.len() != self.cols) {
                return Err(DocError::Invalid("entries shape mismatch".into()));
            }
            return Ok(IntMatrix::from_rows(entries));
        }
        if let Some(triples) = &self.triples {
            let mut m = IntMatrix::zero(self.rows, self.cols);
            for &(r, c, v) in triples {
                if r >= self.rows || c >= self.cols {
                    return Err(DocError::Invalid(format!("triple ({r}, {c}) out of range")));
                }
                m.add_at(r, c, v);
            }
            return Ok(m);
        }
        Err(DocError::Invalid(
            "matrix document needs entries or triples".into(),
        ))
    }

    pub fn laurent_matrix(&self) -> Result<LaurentMatrix, DocError> {
        let nvars = self
            .num_vars
            .ok_or_else(|| DocError::Invalid("laurent matrix needs num_vars".into()))?;
        let entries = self
            .laurent_entries
            .as_ref()
            .ok_or_else(|| DocError::Invalid("laurent matrix needs laurent_entries".into()))?;
        if entries.len() != self.rows || entries.iter().any(|r| r.len() != self.cols) {
            return Err(DocError::Invalid("laurent_entries shape mismatch".into()));
        }
        let mut polys = Vec::with_capacity(self.rows * self.cols);
        for row in entries {
            for doc in row {
                polys.push(poly_from_doc(nvars, doc)?);
            }
        }
        Ok(LaurentMatrix::from_entries(
            nvars, self.rows, self.cols, polys,
        ))
    }
}

/// Textual triple dump: first line `rows cols`, then `row col value` lines,
/// zero entries omitted.
pub fn matrix_to_triples(m: &IntMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows, m.cols);
    for r in 0..m.rows {
        for c in 0..m.cols {
            let v = m.get(r, c);
            if v != 0 {
                out.push_str(&format!("{} {} {}\n", r, c, v));
            }
        }
    }
    out
}

pub fn matrix_from_triples(text: &str) -> Result<IntMatrix, DocError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| DocError::Invalid("empty triple file".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| DocError::Invalid(format!("bad header: {e}")))?;
    if dims.len() != 2 {
        return Err(DocError::Invalid("header must be `rows cols`".into()));
    }
    let mut m = IntMatrix::zero(dims[0], dims[1]);
    for line in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(DocError::Invalid(format!("bad triple line: {line}")));
        }
        let r: usize = parts[0].parse().map_err(|e| DocError::Invalid(format!("{e}")))?;
        let c: usize = parts[1].parse().map_err(|e| DocError::Invalid(format!("{e}")))?;
        let v: i64 = parts[2].parse().map_err(|e| DocError::Invalid(format!("{e}")))?;
        if r >= dims[0] || c >= dims[1] {
            return Err(DocError::Invalid(format!("triple ({r}, {c}) out of range")));
        }
        m.add_at(r, c, v);
    }
    Ok(m)
}
