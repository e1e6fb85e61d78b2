//! Matrix sources: literal diagonals, seeded generators, and Matrix Market files.

use lanczos_core::lowerbound::HardSpectrum;
use lanczos_core::random::{derive_seed, gaussian_matrix, random_spd, random_symmetric, rng};
use lanczos_core::{DenseMatrix, SymmetricOperator};

use crate::config::{ConfigError, MatrixSource};
use crate::RunError;

/// Stream index of the matrix generator under the master seed.
pub const MATRIX_STREAM: u64 = 0;
/// Stream index of the start vector under the master seed.
pub const VECTOR_STREAM: u64 = 1;

fn bad(message: impl Into<String>) -> RunError {
    RunError::Config(ConfigError::Invalid {
        key: "generator",
        message: message.into(),
    })
}

fn args(spec: &str) -> Result<Vec<f64>, RunError> {
    spec.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| bad(format!("`{v}`: {e}"))))
        .collect()
}

fn dimension(v: f64) -> Result<usize, RunError> {
    if v >= 1.0 && v.fract() == 0.0 && v <= 5000.0 {
        Ok(v as usize)
    } else {
        Err(bad(format!("dimension {v} must be an integer in 1..=5000")))
    }
}

/// Builds a rectangular matrix: `gaussian:m,n`, or any symmetric source.
pub fn load_rectangular(source: &MatrixSource, seed: u64) -> Result<DenseMatrix, RunError> {
    if let MatrixSource::Generator(g) = source {
        if let Some(rest) = g.strip_prefix("gaussian:") {
            let v = args(rest)?;
            if v.len() != 2 {
                return Err(bad("gaussian expects m,n"));
            }
            let mut r = rng(derive_seed(seed, MATRIX_STREAM));
            return Ok(gaussian_matrix(&mut r, dimension(v[0])?, dimension(v[1])?));
        }
    }
    Ok(load_symmetric(source, seed)?.materialize())
}

/// Builds a symmetric operator from the source.
pub fn load_symmetric(source: &MatrixSource, seed: u64) -> Result<SymmetricOperator, RunError> {
    let g = match source {
        MatrixSource::Mtx(path) => return Ok(lanczos_core::linalg::load_matrix_market(path)?),
        MatrixSource::Generator(g) => g.as_str(),
    };
    let (kind, rest) = g
        .split_once(':')
        .ok_or_else(|| bad(format!("`{g}` has no `kind:` prefix")))?;
    let mut r = rng(derive_seed(seed, MATRIX_STREAM));
    match kind {
        "diag" => Ok(SymmetricOperator::diagonal(args(rest)?)?),
        "random-spd" => {
            let v = args(rest)?;
            let kappa = match v.len() {
                1 => 100.0,
                2 => v[1],
                _ => return Err(bad("random-spd expects n[,kappa]")),
            };
            Ok(random_spd(&mut r, dimension(v[0])?, kappa)?)
        }
        "random-sym" => {
            let v = args(rest)?;
            let norm = match v.len() {
                1 => 1.0,
                2 => v[1],
                _ => return Err(bad("random-sym expects n[,norm]")),
            };
            Ok(random_symmetric(&mut r, dimension(v[0])?, norm)?)
        }
        "hard-spectrum" => {
            let v = args(rest)?;
            if v.len() != 2 {
                return Err(bad("hard-spectrum expects kappa,eta"));
            }
            Ok(HardSpectrum::relaxed(v[0], v[1])?.operator())
        }
        "gaussian" => Err(bad("gaussian matrices are rectangular; use them with topsv")),
        other => Err(bad(format!("unknown generator `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_diagonal() {
        let a = load_symmetric(&MatrixSource::Generator("diag:1,2,3".into()), 0).unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.matvec(&[1.0, 1.0, 1.0]).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn generators_are_seeded() {
        let src = MatrixSource::Generator("random-spd:8,10".into());
        let a = load_symmetric(&src, 4).unwrap().materialize();
        let b = load_symmetric(&src, 4).unwrap().materialize();
        let c = load_symmetric(&src, 5).unwrap().materialize();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_bad_specs() {
        for g in [
            "diag",
            "foo:1",
            "random-spd:2.5",
            "random-spd:1,2,3",
            "gaussian:3,3",
            "diag:1,x",
        ] {
            assert!(load_symmetric(&MatrixSource::Generator(g.into()), 0).is_err(), "{g}");
        }
        let m = load_rectangular(&MatrixSource::Generator("gaussian:5,3".into()), 0).unwrap();
        assert_eq!((m.rows(), m.cols()), (5, 3));
    }
}
