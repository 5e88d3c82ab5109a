//! Wire representation: complex numbers are `[re, im]` pairs and matrices are
//! row-major nested arrays of such pairs.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{ComplexMatrix, Error, Result};

pub type NestedMatrix = Vec<Vec<[f64; 2]>>;

pub fn complex_to_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn pair_to_complex(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

pub fn matrix_to_nested(m: &ComplexMatrix) -> NestedMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| complex_to_pair(m[(i, j)])).collect())
        .collect()
}

pub fn matrix_from_nested(rows: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix> {
    let n_rows = rows.len();
    if n_rows == 0 {
        return Err(Error::DimensionMismatch("matrix has no rows".into()));
    }
    let n_cols = rows[0].len();
    if n_cols == 0 || rows.iter().any(|r| r.len() != n_cols) {
        return Err(Error::DimensionMismatch("ragged or empty matrix rows".into()));
    }
    Ok(ComplexMatrix::from_fn(n_rows, n_cols, |i, j| pair_to_complex(rows[i][j])))
}

/// `#[serde(with = "complex_matrix")]` adapter.
pub mod complex_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &ComplexMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        matrix_to_nested(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<ComplexMatrix, D::Error> {
        let rows = NestedMatrix::deserialize(d)?;
        matrix_from_nested(&rows).map_err(serde::de::Error::custom)
    }
}

/// `#[serde(with = "complex")]` adapter.
pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        complex_to_pair(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Complex64, D::Error> {
        Ok(pair_to_complex(<[f64; 2]>::deserialize(d)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn nested_round_trip(rows in 1usize..4, cols in 1usize..4, seed in proptest::collection::vec(-5.0f64..5.0, 32)) {
            let m = ComplexMatrix::from_fn(rows, cols, |i, j| Complex64::new(seed[2 * (i * cols + j)], seed[2 * (i * cols + j) + 1]));
            let back = matrix_from_nested(&matrix_to_nested(&m)).unwrap();
            prop_assert_eq!(back, m);
        }
    }

    #[test]
    fn rejects_ragged_rows() {
        let rows = vec![vec![[1.0, 0.0], [0.0, 0.0]], vec![[1.0, 0.0]]];
        assert!(matrix_from_nested(&rows).is_err());
    }

    #[test]
    fn layout_is_row_major() {
        let m = ComplexMatrix::from_row_slice(1, 2, &[Complex64::new(1.0, 2.0), Complex64::new(3.0, 4.0)]);
        assert_eq!(matrix_to_nested(&m), vec![vec![[1.0, 2.0], [3.0, 4.0]]]);
    }
}
