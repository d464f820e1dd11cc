//! JSON encodings of the core types.
//!
//! Complex scalars are `[re, im]` pairs; a bare number is read as a real
//! scalar. Matrices are lists of rows. Frames are lists of column vectors.

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c64, CMatrix, CVector, ComplexSubspace, Field, RMatrix, RVector, RealSubspace, Subspace,
    Tolerance, C64,
};
use crate::relations::{LinearRelation, OperatorWithDomain};

/// A complex scalar on the wire.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cx(pub C64);

impl Serialize for Cx {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&self.0.re)?;
        t.serialize_element(&self.0.im)?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for Cx {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct CxVisitor;

        impl<'de> Visitor<'de> for CxVisitor {
            type Value = Cx;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a number or a [re, im] pair")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Cx, E> {
                Ok(Cx(c64(v, 0.0)))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Cx, E> {
                Ok(Cx(c64(v as f64, 0.0)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Cx, E> {
                Ok(Cx(c64(v as f64, 0.0)))
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Cx, A::Error> {
                let re: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let im: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<f64>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Ok(Cx(c64(re, im)))
            }
        }

        d.deserialize_any(CxVisitor)
    }
}

pub type JsonVector = Vec<Cx>;
pub type JsonMatrix = Vec<Vec<Cx>>;

pub fn vector_to_json(v: &CVector) -> JsonVector {
    v.iter().map(|&z| Cx(z)).collect()
}

pub fn vector_from_json(v: &[Cx]) -> Result<CVector> {
    let out = CMatrix::from_iterator(v.len(), 1, v.iter().map(|z| z.0));
    crate::linalg::ensure_finite(&out)?;
    Ok(out.column(0).into_owned())
}

pub fn real_vector_to_json(v: &RVector) -> Vec<f64> {
    v.iter().copied().collect()
}

pub fn matrix_to_json(m: &CMatrix) -> JsonMatrix {
    m.row_iter().map(|r| r.iter().map(|&z| Cx(z)).collect()).collect()
}

/// Row-major matrix. `cols` fixes the width of an empty row list.
pub fn matrix_from_json(rows: &[Vec<Cx>], cols: Option<usize>) -> Result<CMatrix> {
    let width = rows.first().map(Vec::len).or(cols).unwrap_or(0);
    if let Some(c) = cols {
        if c != width {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {width} columns, expected {c}"
            )));
        }
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != width) {
        return Err(Error::DimensionMismatch(format!(
            "row {i} has {} entries, expected {width}",
            r.len()
        )));
    }
    let m = CMatrix::from_fn(rows.len(), width, |i, j| rows[i][j].0);
    crate::linalg::ensure_finite(&m)?;
    Ok(m)
}

pub fn real_matrix_to_json(m: &RMatrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn real_matrix_from_json(rows: &[Vec<f64>], cols: Option<usize>) -> Result<RMatrix> {
    let m = matrix_from_json(
        &rows
            .iter()
            .map(|r| r.iter().map(|&x| Cx(c64(x, 0.0))).collect())
            .collect::<Vec<_>>(),
        cols,
    )?;
    Ok(m.map(|z| z.re))
}

/// Columns of a frame as a list of vectors.
pub fn columns_to_json(frame: &CMatrix) -> Vec<JsonVector> {
    frame
        .column_iter()
        .map(|c| c.iter().map(|&z| Cx(z)).collect())
        .collect()
}

/// Frame with the given column vectors, each of length `ambient`.
pub fn columns_from_json(cols: &[JsonVector], ambient: usize) -> Result<CMatrix> {
    if let Some((j, c)) = cols.iter().enumerate().find(|(_, c)| c.len() != ambient) {
        return Err(Error::DimensionMismatch(format!(
            "frame column {j} has length {}, expected {ambient}",
            c.len()
        )));
    }
    let m = CMatrix::from_fn(ambient, cols.len(), |i, j| cols[j][i].0);
    crate::linalg::ensure_finite(&m)?;
    Ok(m)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SubspaceJson {
    pub ambient_dim: usize,
    pub field: Field,
    pub frame_columns: Vec<JsonVector>,
}

impl SubspaceJson {
    pub fn from_complex(s: &ComplexSubspace) -> Self {
        Self {
            ambient_dim: s.ambient_dim(),
            field: Field::Complex,
            frame_columns: columns_to_json(s.frame()),
        }
    }

    pub fn from_real(s: &RealSubspace) -> Self {
        Self {
            ambient_dim: s.ambient_dim(),
            field: Field::Real,
            frame_columns: columns_to_json(&s.to_complex_frame()),
        }
    }

    /// Span of the listed columns.
    pub fn to_complex(&self, tol: &Tolerance) -> Result<ComplexSubspace> {
        let g = columns_from_json(&self.frame_columns, self.ambient_dim)?;
        Ok(Subspace::span(&g, tol))
    }

    pub fn to_real(&self, tol: &Tolerance) -> Result<RealSubspace> {
        if self.field != Field::Real {
            return Err(Error::InvalidArgument("subspace is declared complex".into()));
        }
        let g = columns_from_json(&self.frame_columns, self.ambient_dim)?;
        if g.iter().any(|z| z.im != 0.0) {
            return Err(Error::InvalidArgument(
                "real subspace with complex frame entries".into(),
            ));
        }
        Ok(Subspace::span(&g.map(|z| z.re), tol))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RelationJson {
    pub n: usize,
    pub frame_columns: Vec<JsonVector>,
}

impl RelationJson {
    pub fn from_relation(r: &LinearRelation) -> Self {
        Self {
            n: r.n(),
            frame_columns: columns_to_json(r.frame()),
        }
    }

    pub fn to_relation(&self, tol: &Tolerance) -> Result<LinearRelation> {
        let g = columns_from_json(&self.frame_columns, 2 * self.n)?;
        LinearRelation::span(self.n, &g, tol)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct OperatorJson {
    /// Orthonormal columns.
    pub domain_frame: Vec<JsonVector>,
    /// Orthonormal columns; defaults to the domain frame.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closure_frame: Option<Vec<JsonVector>>,
    /// `dim closure × dim domain` coefficients.
    pub matrix: JsonMatrix,
    /// Ambient dimension, needed only when the domain is trivial.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_dim: Option<usize>,
}

impl OperatorJson {
    pub fn from_operator(a: &OperatorWithDomain) -> Self {
        Self {
            domain_frame: columns_to_json(a.domain.frame()),
            closure_frame: Some(columns_to_json(a.closure.frame())),
            matrix: matrix_to_json(&a.matrix),
            ambient_dim: Some(a.n()),
        }
    }

    pub fn to_operator(&self, tol: &Tolerance) -> Result<OperatorWithDomain> {
        let n = self
            .ambient_dim
            .or_else(|| self.domain_frame.first().map(Vec::len))
            .ok_or_else(|| Error::InvalidArgument("ambient dimension is undetermined".into()))?;
        let d = Subspace::from_orthonormal(columns_from_json(&self.domain_frame, n)?, tol)?;
        let c = match &self.closure_frame {
            Some(cols) => Subspace::from_orthonormal(columns_from_json(cols, n)?, tol)?,
            None => d.clone(),
        };
        let m = matrix_from_json(&self.matrix, Some(d.dim()))?;
        OperatorWithDomain::new(d, c, m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn scalars_accept_numbers_and_pairs() {
        let v: Vec<Cx> = serde_json::from_str("[1, 2.5, [0, -1]]").unwrap();
        assert_eq!(v[0].0, c64(1.0, 0.0));
        assert_eq!(v[1].0, c64(2.5, 0.0));
        assert_eq!(v[2].0, c64(0.0, -1.0));
        assert!(serde_json::from_str::<Cx>("[1, 2, 3]").is_err());
        assert!(serde_json::from_str::<Cx>("\"x\"").is_err());
        assert_eq!(serde_json::to_string(&Cx(c64(1.0, -2.0))).unwrap(), "[1.0,-2.0]");
    }

    #[test]
    fn matrices_are_row_major() {
        let rows: JsonMatrix = serde_json::from_str("[[1, 2], [3, [0, 1]]]").unwrap();
        let m = matrix_from_json(&rows, None).unwrap();
        assert_eq!(m[(0, 1)], c64(2.0, 0.0));
        assert_eq!(m[(1, 1)], c64(0.0, 1.0));
        let ragged: JsonMatrix = serde_json::from_str("[[1, 2], [3]]").unwrap();
        assert!(matrix_from_json(&ragged, None).is_err());
    }

    #[test]
    fn relation_encoding() {
        let r = RelationJson {
            n: 2,
            frame_columns: serde_json::from_str("[[1, 0, 2, 0]]").unwrap(),
        }
        .to_relation(&tol())
        .unwrap();
        assert_eq!(r.dim(), 1);
        let back = RelationJson::from_relation(&r);
        let again = back.to_relation(&tol()).unwrap();
        assert!(r.approx_eq(&again, &tol()));
    }

    #[test]
    fn operator_encoding() {
        let json = r#"{"domainFrame": [[1, 0]], "matrix": [[3]]}"#;
        let op: OperatorJson = serde_json::from_str(json).unwrap();
        let a = op.to_operator(&tol()).unwrap();
        assert_eq!(a.ambient_matrix()[(0, 0)], c64(3.0, 0.0));
        let bad = r#"{"domainFrame": [[1, 1]], "matrix": [[3]]}"#;
        let op: OperatorJson = serde_json::from_str(bad).unwrap();
        assert!(op.to_operator(&tol()).is_err());
    }

    #[test]
    fn real_subspace_rejects_complex_entries() {
        let s = SubspaceJson {
            ambient_dim: 2,
            field: Field::Real,
            frame_columns: vec![vec![Cx(c64(1.0, 0.0)), Cx(c64(0.0, 1.0))]],
        };
        assert!(s.to_real(&tol()).is_err());
        assert_eq!(s.to_complex(&tol()).unwrap().dim(), 1);
    }
}
