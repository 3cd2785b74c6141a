use std::ops::Range;

use crate::error::{Error, Result};

/// One frequency sector: `size` spatial modes sharing angular frequency `omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sector {
    pub omega: f64,
    pub size: usize,
}

/// Position of a mode inside the table, both indices zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeLabel {
    pub sector: usize,
    pub spatial: usize,
}

/// Frequency/spatial bookkeeping for an `M`-mode system.
///
/// Modes are stored frequency-major: `(ω₁;1), …, (ω₁;M_s), (ω₂;1), …`. The
/// usual setting has the same number of spatial modes in every sector, but
/// partial traces and tensor products can produce ragged tables, so each
/// sector carries its own size. Frequencies are strictly increasing and
/// positive, in units where `ħ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTable {
    sectors: Vec<Sector>,
    offsets: Vec<usize>,
}

impl ModeTable {
    /// `omegas.len()` frequencies with `spatial_modes` spatial modes each.
    pub fn new(omegas: &[f64], spatial_modes: usize) -> Result<Self> {
        Self::from_sectors(
            omegas
                .iter()
                .map(|&omega| Sector { omega, size: spatial_modes })
                .collect(),
        )
    }

    pub fn from_sectors(sectors: Vec<Sector>) -> Result<Self> {
        if sectors.is_empty() {
            return Err(Error::InvalidModes("at least one frequency is required".into()));
        }
        for (k, s) in sectors.iter().enumerate() {
            if !(s.omega.is_finite() && s.omega > 0.0) {
                return Err(Error::InvalidModes(format!(
                    "frequency {} is not positive and finite",
                    s.omega
                )));
            }
            if s.size == 0 {
                return Err(Error::InvalidModes(format!("sector {k} has no spatial modes")));
            }
            if k > 0 && !(sectors[k - 1].omega < s.omega) {
                return Err(Error::InvalidModes(
                    "frequencies must be strictly increasing".into(),
                ));
            }
        }
        let mut offsets = Vec::with_capacity(sectors.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for s in &sectors {
            acc += s.size;
            offsets.push(acc);
        }
        Ok(Self { sectors, offsets })
    }

    /// A single frequency `ω = 1` with `spatial_modes` modes.
    pub fn single_frequency(spatial_modes: usize) -> Result<Self> {
        Self::new(&[1.0], spatial_modes)
    }

    pub fn num_modes(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Phase-space dimension `2M`.
    pub fn dim(&self) -> usize {
        2 * self.num_modes()
    }

    pub fn num_frequencies(&self) -> usize {
        self.sectors.len()
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn omegas(&self) -> Vec<f64> {
        self.sectors.iter().map(|s| s.omega).collect()
    }

    /// The common number of spatial modes, if every sector has the same size.
    pub fn spatial_modes(&self) -> Option<usize> {
        let first = self.sectors[0].size;
        self.sectors.iter().all(|s| s.size == first).then_some(first)
    }

    pub fn sector_range(&self, sector: usize) -> Range<usize> {
        self.offsets[sector]..self.offsets[sector + 1]
    }

    pub fn label(&self, m: usize) -> Result<ModeLabel> {
        self.check_index(m)?;
        let sector = self.offsets.partition_point(|&o| o <= m) - 1;
        Ok(ModeLabel { sector, spatial: m - self.offsets[sector] })
    }

    pub fn flat_index(&self, label: ModeLabel) -> Result<usize> {
        let s = self.sectors.get(label.sector).ok_or(Error::ModeOutOfRange {
            index: label.sector,
            modes: self.sectors.len(),
        })?;
        if label.spatial >= s.size {
            return Err(Error::ModeOutOfRange { index: label.spatial, modes: s.size });
        }
        Ok(self.offsets[label.sector] + label.spatial)
    }

    /// Sector index of flat mode `m`; panics on an invalid index.
    pub fn sector_of(&self, m: usize) -> usize {
        self.label(m).expect("mode index in range").sector
    }

    pub fn omega_of(&self, m: usize) -> f64 {
        self.sectors[self.sector_of(m)].omega
    }

    pub fn same_frequency(&self, m1: usize, m2: usize) -> bool {
        self.sector_of(m1) == self.sector_of(m2)
    }

    pub fn check_index(&self, m: usize) -> Result<()> {
        if m < self.num_modes() {
            Ok(())
        } else {
            Err(Error::ModeOutOfRange { index: m, modes: self.num_modes() })
        }
    }

    /// Table of the modes in `keep` (sorted, duplicates removed). Sectors left
    /// without modes are dropped.
    pub fn restrict(&self, keep: &[usize]) -> Result<ModeTable> {
        if keep.is_empty() {
            return Err(Error::InvalidArgument("cannot keep an empty set of modes".into()));
        }
        let mut sizes = vec![0usize; self.sectors.len()];
        for &m in keep {
            sizes[self.label(m)?.sector] += 1;
        }
        let sectors = self
            .sectors
            .iter()
            .zip(sizes)
            .filter(|(_, n)| *n > 0)
            .map(|(s, size)| Sector { omega: s.omega, size })
            .collect();
        Self::from_sectors(sectors)
    }

    /// Joint table of two systems, re-sorted frequency-major. Within a shared
    /// frequency the modes of `a` come before those of `b`.
    pub fn merge(a: &ModeTable, b: &ModeTable) -> MergedModes {
        let mut sectors: Vec<Sector> = Vec::new();
        let mut i = 0;
        let mut j = 0;
        let (sa, sb) = (&a.sectors, &b.sectors);
        let mut left = Vec::with_capacity(a.num_modes());
        let mut right = Vec::with_capacity(b.num_modes());
        let mut next = 0usize;
        while i < sa.len() || j < sb.len() {
            let take_a = j >= sb.len() || (i < sa.len() && sa[i].omega <= sb[j].omega);
            let take_b = i >= sa.len() || (j < sb.len() && sb[j].omega <= sa[i].omega);
            let omega = if take_a { sa[i].omega } else { sb[j].omega };
            let mut size = 0;
            if take_a {
                left.extend(next..next + sa[i].size);
                next += sa[i].size;
                size += sa[i].size;
                i += 1;
            }
            if take_b {
                right.extend(next..next + sb[j].size);
                next += sb[j].size;
                size += sb[j].size;
                j += 1;
            }
            sectors.push(Sector { omega, size });
        }
        let table = ModeTable::from_sectors(sectors).expect("merge of valid tables is valid");
        MergedModes { table, left, right }
    }
}

/// Result of [`ModeTable::merge`]: the joint table plus, for each factor, the
/// joint flat index of every one of its modes.
#[derive(Debug, Clone, PartialEq)]
pub struct MergedModes {
    pub table: ModeTable,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_index_round_trip() {
        let t = ModeTable::new(&[1.0, 2.5, 4.0], 3).unwrap();
        assert_eq!(t.num_modes(), 9);
        for m in 0..t.num_modes() {
            let l = t.label(m).unwrap();
            assert_eq!(t.flat_index(l).unwrap(), m);
        }
        assert_eq!(t.label(4).unwrap(), ModeLabel { sector: 1, spatial: 1 });
        assert_eq!(t.omega_of(8), 4.0);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(ModeTable::new(&[2.0, 1.0], 1).is_err());
        assert!(ModeTable::new(&[1.0, 1.0], 1).is_err());
        assert!(ModeTable::new(&[-1.0], 1).is_err());
        assert!(ModeTable::new(&[1.0], 0).is_err());
        assert!(ModeTable::new(&[], 2).is_err());
        assert!(ModeTable::new(&[1.0], 2).unwrap().label(2).is_err());
    }

    #[test]
    fn restrict_drops_empty_sectors() {
        let t = ModeTable::new(&[1.0, 2.0], 2).unwrap();
        let r = t.restrict(&[2, 3]).unwrap();
        assert_eq!(r.omegas(), vec![2.0]);
        assert_eq!(r.spatial_modes(), Some(2));
        let ragged = t.restrict(&[0, 2, 3]).unwrap();
        assert_eq!(ragged.spatial_modes(), None);
        assert_eq!(ragged.num_modes(), 3);
    }

    #[test]
    fn merge_interleaves_frequencies() {
        let a = ModeTable::new(&[1.0, 3.0], 1).unwrap();
        let b = ModeTable::new(&[2.0, 3.0], 1).unwrap();
        let m = ModeTable::merge(&a, &b);
        assert_eq!(m.table.omegas(), vec![1.0, 2.0, 3.0]);
        assert_eq!(m.table.sectors()[2].size, 2);
        assert_eq!(m.left, vec![0, 2]);
        assert_eq!(m.right, vec![1, 3]);
    }
}
