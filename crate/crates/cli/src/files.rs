//! JSON file formats for states, symplectic matrices and channels.

use cvres::channels::GaussianChannel;
use cvres::phase_space::{validate_state, Sector, Violation};
use cvres::{GaussianState, ModeTable};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, ErrorKind};

pub const SCHEMA_VERSION: u32 = 1;

/// Quadrature ordering of the vectors and matrices in a file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ordering {
    /// `q₁, p₁, q₂, p₂, …` (used internally).
    Qpqp,
    /// `q₁, q₂, …, p₁, p₂, …`, permuted on load.
    Qqpp,
}

/// Mode layout shared by every file type. `sector_sizes`, when present,
/// gives the number of modes at each frequency and overrides
/// `spatial_modes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    pub omegas: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spatial_modes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sector_sizes: Option<Vec<usize>>,
}

impl Layout {
    pub fn of(modes: &ModeTable) -> Self {
        match modes.spatial_modes() {
            Some(ms) => Layout { omegas: modes.omegas(), spatial_modes: Some(ms), sector_sizes: None },
            None => Layout {
                omegas: modes.omegas(),
                spatial_modes: None,
                sector_sizes: Some(modes.sectors().iter().map(|s| s.size).collect()),
            },
        }
    }

    pub fn table(&self) -> Result<ModeTable, CliError> {
        match (&self.sector_sizes, self.spatial_modes) {
            (Some(sizes), _) => {
                if sizes.len() != self.omegas.len() {
                    return Err(CliError::invalid("sector_sizes and omegas differ in length"));
                }
                let sectors = self.omegas.iter().zip(sizes).map(|(&omega, &size)| Sector { omega, size }).collect();
                Ok(ModeTable::from_sectors(sectors)?)
            }
            (None, Some(ms)) => Ok(ModeTable::new(&self.omegas, ms)?),
            (None, None) => Err(CliError::invalid("file needs spatial_modes or sector_sizes")),
        }
    }
}

fn check_schema(version: u32) -> Result<(), CliError> {
    if version != SCHEMA_VERSION {
        return Err(CliError::invalid(format!("unsupported schema_version {version} (expected {SCHEMA_VERSION})")));
    }
    Ok(())
}

/// Index map from the file ordering to `q₁, p₁, …`: entry `i` is the file
/// position of internal coordinate `i`.
fn permutation(ordering: Ordering, m: usize) -> Vec<usize> {
    match ordering {
        Ordering::Qpqp => (0..2 * m).collect(),
        Ordering::Qqpp => (0..2 * m).map(|i| if i % 2 == 0 { i / 2 } else { m + i / 2 }).collect(),
    }
}

fn read_vector(values: &[f64], what: &str, perm: &[usize]) -> Result<DVector<f64>, CliError> {
    if values.len() != perm.len() {
        return Err(CliError::invalid(format!("{what} has {} entries, expected {}", values.len(), perm.len())));
    }
    Ok(DVector::from_fn(perm.len(), |i, _| values[perm[i]]))
}

fn read_matrix(rows: &[Vec<f64>], what: &str, perm: &[usize]) -> Result<DMatrix<f64>, CliError> {
    let n = perm.len();
    if rows.len() != n {
        return Err(CliError::invalid(format!("{what} has {} rows, expected {n}", rows.len())));
    }
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(CliError::invalid(format!("{what} row {i} has {} entries, expected {n}", row.len())));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[perm[i]][perm[j]]))
}

pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub schema_version: u32,
    #[serde(flatten)]
    pub layout: Layout,
    pub ordering: Ordering,
    pub displacement: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

impl StateFile {
    pub fn from_state(s: &GaussianState, metadata: Option<serde_json::Value>) -> Self {
        StateFile {
            schema_version: SCHEMA_VERSION,
            layout: Layout::of(s.modes()),
            ordering: Ordering::Qpqp,
            displacement: s.displacement().iter().copied().collect(),
            covariance: matrix_rows(s.covariance()),
            metadata,
        }
    }

    /// Parses the moments without physical checks.
    pub fn to_raw_state(&self) -> Result<GaussianState, CliError> {
        check_schema(self.schema_version)?;
        let modes = self.layout.table()?;
        let perm = permutation(self.ordering, modes.num_modes());
        let d = read_vector(&self.displacement, "displacement", &perm)?;
        let v = read_matrix(&self.covariance, "covariance", &perm)?;
        Ok(GaussianState::new(modes, d, v)?)
    }

    /// Parses and validates; violations map to exit code 2 (physicality)
    /// or 1 (asymmetric or non-finite data).
    pub fn to_state(&self, tol: f64) -> Result<GaussianState, CliError> {
        let s = self.to_raw_state()?;
        let verdict = validate_state(s.modes(), s.displacement(), s.covariance(), tol)?;
        if let Some(first) = verdict.violations.first() {
            let kind = if verdict.is_physicality_failure() { ErrorKind::Physicality } else { ErrorKind::InvalidInput };
            let list: Vec<String> = verdict.violations.iter().map(Violation::to_string).collect();
            return Err(CliError::new(kind, format!("invalid state: {first}")).with_detail(serde_json::json!(list)));
        }
        Ok(s)
    }
}

/// A symplectic matrix together with its mode layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymplecticFile {
    pub schema_version: u32,
    #[serde(flatten)]
    pub layout: Layout,
    pub ordering: Ordering,
    pub symplectic: Vec<Vec<f64>>,
}

impl SymplecticFile {
    pub fn to_matrix(&self) -> Result<(ModeTable, DMatrix<f64>), CliError> {
        check_schema(self.schema_version)?;
        let modes = self.layout.table()?;
        let perm = permutation(self.ordering, modes.num_modes());
        let s = read_matrix(&self.symplectic, "symplectic", &perm)?;
        Ok((modes, s))
    }
}

/// Gaussian channel `(T, N, v)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelFile {
    pub schema_version: u32,
    #[serde(flatten)]
    pub layout: Layout,
    pub ordering: Ordering,
    pub t: Vec<Vec<f64>>,
    pub n: Vec<Vec<f64>>,
    pub v: Vec<f64>,
}

impl ChannelFile {
    pub fn from_channel(ch: &GaussianChannel) -> Self {
        ChannelFile {
            schema_version: SCHEMA_VERSION,
            layout: Layout::of(ch.modes()),
            ordering: Ordering::Qpqp,
            t: matrix_rows(ch.t()),
            n: matrix_rows(ch.noise()),
            v: ch.shift().iter().copied().collect(),
        }
    }

    pub fn to_channel(&self) -> Result<GaussianChannel, CliError> {
        check_schema(self.schema_version)?;
        let modes = self.layout.table()?;
        let perm = permutation(self.ordering, modes.num_modes());
        let t = read_matrix(&self.t, "T", &perm)?;
        let n = read_matrix(&self.n, "N", &perm)?;
        let v = read_vector(&self.v, "v", &perm)?;
        Ok(GaussianChannel::new(modes, t, n, v)?)
    }
}
