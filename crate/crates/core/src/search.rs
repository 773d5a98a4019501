//! Exact cosine top-k over stored embeddings, guidance-image selection, and
//! the little-endian `ALGI` index file.
//!
//! File layout: magic `ALGI`, then `u32` version (1), `u32` dim, `u32` count;
//! each record is `u16` id length, the UTF-8 id, `f32` score and `dim` `f32`
//! vector components. Vectors are stored already normalized so a reload
//! reproduces query results bit for bit.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::io::{self, Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAGIC: &[u8; 4] = b"ALGI";
pub const FORMAT_VERSION: u32 = 1;
pub const DEFAULT_K: usize = 10;

const NORM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("index needs at least one record")]
    Empty,
    #[error("record {id:?} has dimension {actual}, expected {expected}")]
    DimensionMismatch {
        id: String,
        expected: usize,
        actual: usize,
    },
    #[error("duplicate record id {0:?}")]
    DuplicateId(String),
    #[error("record {0:?} has a zero or non-finite vector")]
    ZeroVector(String),
    #[error("record {0:?} has a non-finite score")]
    BadScore(String),
    #[error("record ids must be non-empty")]
    EmptyId,
    #[error("record id {0:?} exceeds 65535 bytes")]
    IdTooLong(String),
    #[error("query has dimension {actual}, index has {expected}")]
    QueryDimension { expected: usize, actual: usize },
    #[error("query vector is zero or non-finite")]
    ZeroQuery,
    #[error("k must be at least 1")]
    ZeroK,
    #[error("no results to select from")]
    NoResults,
    #[error("not an index file (bad magic)")]
    BadMagic,
    #[error("unsupported index version {0}")]
    BadVersion(u32),
    #[error("record {0:?} is not unit-normalized")]
    NotNormalized(String),
    #[error("index id is not valid UTF-8")]
    BadUtf8,
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingRecord {
    pub id: String,
    pub score: f32,
    pub vector: Vec<f32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingIndex {
    dim: usize,
    records: Vec<EmbeddingRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryResult {
    pub id: String,
    pub cosine: f64,
    pub score: f32,
}

fn norm(v: &[f32]) -> f64 {
    v.iter()
        .map(|&x| f64::from(x) * f64::from(x))
        .sum::<f64>()
        .sqrt()
}

fn normalized(v: &[f32]) -> Option<Vec<f64>> {
    if v.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let n = norm(v);
    (n > 0.0 && n.is_finite()).then(|| v.iter().map(|&x| f64::from(x) / n).collect())
}

/// Descending cosine, ascending id.
fn rank_order(a: &QueryResult, b: &QueryResult) -> Ordering {
    b.cosine.total_cmp(&a.cosine).then_with(|| a.id.cmp(&b.id))
}

pub fn build_index(records: Vec<EmbeddingRecord>) -> Result<EmbeddingIndex, SearchError> {
    let dim = records.first().ok_or(SearchError::Empty)?.vector.len();
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(records.len());
    for r in records {
        check_identity(&r, dim, &mut seen)?;
        let unit = normalized(&r.vector).ok_or_else(|| SearchError::ZeroVector(r.id.clone()))?;
        let vector: Vec<f32> = unit.iter().map(|&x| x as f32).collect();
        if norm(&vector) == 0.0 {
            return Err(SearchError::ZeroVector(r.id));
        }
        out.push(EmbeddingRecord {
            id: r.id,
            score: r.score,
            vector,
        });
    }
    Ok(EmbeddingIndex { dim, records: out })
}

fn check_identity(
    r: &EmbeddingRecord,
    dim: usize,
    seen: &mut HashSet<String>,
) -> Result<(), SearchError> {
    if r.id.is_empty() {
        return Err(SearchError::EmptyId);
    }
    if r.id.len() > usize::from(u16::MAX) {
        return Err(SearchError::IdTooLong(r.id.clone()));
    }
    if r.vector.len() != dim || dim == 0 {
        return Err(SearchError::DimensionMismatch {
            id: r.id.clone(),
            expected: dim,
            actual: r.vector.len(),
        });
    }
    if !r.score.is_finite() {
        return Err(SearchError::BadScore(r.id.clone()));
    }
    if !seen.insert(r.id.clone()) {
        return Err(SearchError::DuplicateId(r.id.clone()));
    }
    Ok(())
}

impl EmbeddingIndex {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[EmbeddingRecord] {
        &self.records
    }

    pub fn get(&self, id: &str) -> Option<&EmbeddingRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    /// Exact k nearest records by cosine similarity.
    pub fn top_k(&self, query: &[f32], k: usize) -> Result<Vec<QueryResult>, SearchError> {
        if k == 0 {
            return Err(SearchError::ZeroK);
        }
        if query.len() != self.dim {
            return Err(SearchError::QueryDimension {
                expected: self.dim,
                actual: query.len(),
            });
        }
        let q = normalized(query).ok_or(SearchError::ZeroQuery)?;
        let mut results: Vec<QueryResult> = self
            .records
            .iter()
            .map(|r| QueryResult {
                id: r.id.clone(),
                cosine: r
                    .vector
                    .iter()
                    .zip(&q)
                    .map(|(&a, &b)| f64::from(a) * b)
                    .sum::<f64>()
                    .clamp(-1.0, 1.0),
                score: r.score,
            })
            .collect();
        if k < results.len() {
            results.select_nth_unstable_by(k - 1, rank_order);
            results.truncate(k);
        }
        results.sort_by(rank_order);
        Ok(results)
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<(), SearchError> {
        w.write_all(MAGIC)?;
        w.write_all(&FORMAT_VERSION.to_le_bytes())?;
        w.write_all(&(self.dim as u32).to_le_bytes())?;
        w.write_all(&(self.records.len() as u32).to_le_bytes())?;
        for r in &self.records {
            w.write_all(&(r.id.len() as u16).to_le_bytes())?;
            w.write_all(r.id.as_bytes())?;
            w.write_all(&r.score.to_le_bytes())?;
            for x in &r.vector {
                w.write_all(&x.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write_to(&mut buf)
            .expect("writing to a Vec cannot fail");
        buf
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self, SearchError> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(SearchError::BadMagic);
        }
        let version = read_u32(&mut r)?;
        if version != FORMAT_VERSION {
            return Err(SearchError::BadVersion(version));
        }
        let dim = read_u32(&mut r)? as usize;
        let count = read_u32(&mut r)? as usize;
        let mut seen = HashSet::new();
        let mut records = Vec::with_capacity(count.min(1 << 20));
        for _ in 0..count {
            let mut len = [0u8; 2];
            r.read_exact(&mut len)?;
            let mut id = vec![0u8; usize::from(u16::from_le_bytes(len))];
            r.read_exact(&mut id)?;
            let id = String::from_utf8(id).map_err(|_| SearchError::BadUtf8)?;
            let score = f32::from_bits(read_u32(&mut r)?);
            let mut vector = Vec::with_capacity(dim);
            for _ in 0..dim {
                vector.push(f32::from_bits(read_u32(&mut r)?));
            }
            let rec = EmbeddingRecord { id, score, vector };
            check_identity(&rec, dim, &mut seen)?;
            if (norm(&rec.vector) - 1.0).abs() > NORM_TOLERANCE {
                return Err(SearchError::NotNormalized(rec.id));
            }
            records.push(rec);
        }
        if records.is_empty() {
            return Err(SearchError::Empty);
        }
        Ok(Self { dim, records })
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, SearchError> {
        Self::read_from(bytes)
    }
}

fn read_u32<R: Read>(r: &mut R) -> io::Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

/// Highest aesthetic score wins; ties go to the higher cosine, then the
/// smaller id.
pub fn select_guidance(results: &[QueryResult]) -> Result<&QueryResult, SearchError> {
    results
        .iter()
        .min_by(|a, b| {
            b.score
                .total_cmp(&a.score)
                .then_with(|| b.cosine.total_cmp(&a.cosine))
                .then_with(|| a.id.cmp(&b.id))
        })
        .ok_or(SearchError::NoResults)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(id: &str, score: f32, vector: Vec<f32>) -> EmbeddingRecord {
        EmbeddingRecord {
            id: id.into(),
            score,
            vector,
        }
    }

    fn qr(id: &str, cosine: f64, score: f32) -> QueryResult {
        QueryResult {
            id: id.into(),
            cosine,
            score,
        }
    }

    #[test]
    fn single_record_is_normalized() {
        let idx = build_index(vec![rec("a", 1.0, vec![3.0, 4.0])]).unwrap();
        assert_eq!(idx.len(), 1);
        assert!((norm(&idx.records()[0].vector) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn build_errors_name_the_record() {
        let dup = build_index(vec![rec("a", 1.0, vec![1.0]), rec("a", 2.0, vec![2.0])]);
        assert!(matches!(dup, Err(SearchError::DuplicateId(id)) if id == "a"));
        let dims = build_index(vec![
            rec("a", 1.0, vec![1.0]),
            rec("b", 2.0, vec![2.0, 1.0]),
        ]);
        assert!(matches!(dims, Err(SearchError::DimensionMismatch { id, .. }) if id == "b"));
        let zero = build_index(vec![rec("z", 1.0, vec![0.0, 0.0])]);
        assert!(matches!(zero, Err(SearchError::ZeroVector(id)) if id == "z"));
        assert!(matches!(build_index(vec![]), Err(SearchError::Empty)));
    }

    #[test]
    fn exact_match_ranks_first() {
        let idx = build_index(vec![
            rec("a", 1.0, vec![1.0, 0.0, 0.0]),
            rec("b", 1.0, vec![0.0, 1.0, 0.0]),
            rec("c", 1.0, vec![1.0, 1.0, 0.0]),
        ])
        .unwrap();
        let res = idx.top_k(&[0.0, 2.0, 0.0], 2).unwrap();
        assert_eq!(res[0].id, "b");
        assert!((res[0].cosine - 1.0).abs() < 1e-7);
        assert_eq!(res.len(), 2);
    }

    #[test]
    fn orthogonal_query_orders_by_id() {
        let idx = build_index(vec![
            rec("c", 1.0, vec![1.0, 0.0, 0.0]),
            rec("a", 1.0, vec![0.0, 1.0, 0.0]),
            rec("b", 1.0, vec![1.0, 1.0, 0.0]),
        ])
        .unwrap();
        let res = idx.top_k(&[0.0, 0.0, 1.0], 10).unwrap();
        let ids: Vec<&str> = res.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "c"]);
        assert!(res.iter().all(|r| r.cosine == 0.0));
    }

    #[test]
    fn query_errors() {
        let idx = build_index(vec![rec("a", 1.0, vec![1.0, 0.0])]).unwrap();
        assert!(matches!(
            idx.top_k(&[1.0], 1),
            Err(SearchError::QueryDimension { .. })
        ));
        assert!(matches!(
            idx.top_k(&[0.0, 0.0], 1),
            Err(SearchError::ZeroQuery)
        ));
        assert!(matches!(idx.top_k(&[1.0, 0.0], 0), Err(SearchError::ZeroK)));
    }

    #[test]
    fn guidance_selection_rules() {
        let res = [qr("x", 0.9, 5.1), qr("y", 0.8, 7.3), qr("z", 0.7, 6.0)];
        assert_eq!(select_guidance(&res).unwrap().id, "y");
        let tied = [qr("x", 0.5, 6.0), qr("y", 0.8, 6.0)];
        assert_eq!(select_guidance(&tied).unwrap().id, "y");
        let full_tie = [qr("q", 0.5, 6.0), qr("p", 0.5, 6.0)];
        assert_eq!(select_guidance(&full_tie).unwrap().id, "p");
        assert_eq!(select_guidance(&res[..1]).unwrap().id, "x");
        assert!(matches!(select_guidance(&[]), Err(SearchError::NoResults)));
    }

    #[test]
    fn header_layout() {
        let idx = build_index(vec![rec("ab", 2.5, vec![1.0, 0.0])]).unwrap();
        let bytes = idx.to_bytes();
        assert_eq!(&bytes[..4], b"ALGI");
        assert_eq!(&bytes[4..8], &1u32.to_le_bytes());
        assert_eq!(&bytes[8..12], &2u32.to_le_bytes());
        assert_eq!(&bytes[12..16], &1u32.to_le_bytes());
        assert_eq!(&bytes[16..18], &2u16.to_le_bytes());
        assert_eq!(&bytes[18..20], b"ab");
        assert_eq!(&bytes[20..24], &2.5f32.to_le_bytes());
        assert_eq!(bytes.len(), 24 + 8);
    }

    #[test]
    fn corrupt_files_rejected() {
        let idx = build_index(vec![rec("ab", 2.5, vec![1.0, 0.0])]).unwrap();
        let mut bytes = idx.to_bytes();
        assert!(matches!(
            EmbeddingIndex::from_bytes(&bytes[..bytes.len() - 1]),
            Err(SearchError::Io(_))
        ));
        bytes[4] = 2;
        assert!(matches!(
            EmbeddingIndex::from_bytes(&bytes),
            Err(SearchError::BadVersion(2))
        ));
        bytes[0] = b'X';
        assert!(matches!(
            EmbeddingIndex::from_bytes(&bytes),
            Err(SearchError::BadMagic)
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn save_load_is_bit_exact(
            vecs in proptest::collection::vec(proptest::collection::vec(-1.0f32..1.0, 4), 1..20),
            q in proptest::collection::vec(-1.0f32..1.0, 4),
        ) {
            prop_assume!(vecs.iter().all(|v| norm(v) > 1e-3) && norm(&q) > 1e-3);
            let records = vecs
                .into_iter()
                .enumerate()
                .map(|(i, v)| rec(&format!("r{i:03}"), i as f32 * 0.5, v))
                .collect();
            let idx = build_index(records).unwrap();
            let bytes = idx.to_bytes();
            let back = EmbeddingIndex::from_bytes(&bytes).unwrap();
            prop_assert_eq!(&back, &idx);
            prop_assert_eq!(back.to_bytes(), bytes);
            let a = idx.top_k(&q, 5).unwrap();
            let b = back.top_k(&q, 5).unwrap();
            prop_assert_eq!(a.len(), b.len());
            for (x, y) in a.iter().zip(&b) {
                prop_assert_eq!(&x.id, &y.id);
                prop_assert_eq!(x.cosine.to_bits(), y.cosine.to_bits());
            }
        }
    }
}
