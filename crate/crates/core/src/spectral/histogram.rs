use serde::Serialize;

use crate::error::{Error, Result};

/// Bin layout. Log bins need `0 < lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BinSpec {
    Uniform { lo: f64, hi: f64, bins: usize },
    Log { lo: f64, hi: f64, bins: usize },
}

impl BinSpec {
    pub fn edges(&self) -> Result<Vec<f64>> {
        match *self {
            BinSpec::Uniform { lo, hi, bins } if bins > 0 && lo < hi && lo.is_finite() && hi.is_finite() => {
                Ok((0..=bins).map(|i| lo + (hi - lo) * i as f64 / bins as f64).collect())
            }
            BinSpec::Log { lo, hi, bins } if bins > 0 && lo > 0.0 && lo < hi && hi.is_finite() => {
                let (a, b) = (lo.ln(), hi.ln());
                let mut e: Vec<f64> = (0..=bins).map(|i| (a + (b - a) * i as f64 / bins as f64).exp()).collect();
                e[0] = lo;
                e[bins] = hi;
                Ok(e)
            }
            other => Err(Error::Invalid(format!("unusable bin layout {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Integrates to the in-range fraction of all entries (1 if none fall outside).
    ProbabilityDensity,
    /// Mean number of levels per unit energy per matrix; integrates to `N`
    /// when every level falls inside the range.
    LevelDensity,
}

#[derive(Debug, Clone, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub values: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub normalization: Normalization,
    /// Entries offered, including those outside the range.
    pub total: u64,
    /// Independent groups (matrices) behind a level-density histogram; equals
    /// `total` for a probability density.
    pub groups: usize,
}

fn locate(edges: &[f64], x: f64) -> Option<usize> {
    let last = *edges.last()?;
    if !(x >= edges[0] && x <= last) {
        return None;
    }
    // first edge strictly above x, minus one; x == last lands in the last bin
    let k = edges.partition_point(|&e| e <= x);
    Some(k.saturating_sub(1).min(edges.len() - 2))
}

impl Histogram {
    /// Probability density of `values`, with binomial standard errors.
    pub fn density(values: &[f64], spec: BinSpec) -> Result<Histogram> {
        let edges = spec.edges()?;
        let mut counts = vec![0u64; edges.len() - 1];
        for &x in values {
            if let Some(k) = locate(&edges, x) {
                counts[k] += 1;
            }
        }
        let n = values.len().max(1) as f64;
        let (values_out, errs) = counts
            .iter()
            .zip(edges.windows(2))
            .map(|(&c, w)| {
                let width = w[1] - w[0];
                let p = c as f64 / n;
                (p / width, (p * (1.0 - p) / n).sqrt() / width)
            })
            .unzip();
        Ok(Histogram {
            edges,
            counts,
            values: values_out,
            std_errors: errs,
            normalization: Normalization::ProbabilityDensity,
            total: values.len() as u64,
            groups: values.len(),
        })
    }

    /// Level density pooled over spectra. The standard error of each bin is
    /// the spread of the per-spectrum occupancy, so correlations between
    /// levels of one matrix are accounted for.
    pub fn level_density<S: AsRef<[f64]>>(spectra: &[S], spec: BinSpec) -> Result<Histogram> {
        let edges = spec.edges()?;
        let bins = edges.len() - 1;
        let mut counts = vec![0u64; bins];
        let mut sum_sq = vec![0f64; bins];
        let mut own = vec![0u64; bins];
        let mut total = 0u64;
        for s in spectra {
            own.iter_mut().for_each(|c| *c = 0);
            for &x in s.as_ref() {
                total += 1;
                if let Some(k) = locate(&edges, x) {
                    own[k] += 1;
                }
            }
            for k in 0..bins {
                counts[k] += own[k];
                sum_sq[k] += (own[k] * own[k]) as f64;
            }
        }
        let m = spectra.len().max(1) as f64;
        let (values, errs) = (0..bins)
            .map(|k| {
                let width = edges[k + 1] - edges[k];
                let mean = counts[k] as f64 / m;
                let var = if m > 1.0 { ((sum_sq[k] / m - mean * mean) * m / (m - 1.0)).max(0.0) } else { 0.0 };
                (mean / width, (var / m).sqrt() / width)
            })
            .unzip();
        Ok(Histogram {
            edges,
            counts,
            values,
            std_errors: errs,
            normalization: Normalization::LevelDensity,
            total,
            groups: spectra.len(),
        })
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Geometric bin centers, the natural abscissae of log bins.
    pub fn geometric_centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| (w[0] * w[1]).sqrt()).collect()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn integral(&self) -> f64 {
        self.values.iter().zip(self.widths()).map(|(v, w)| v * w).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probability_density_integrates_to_one() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let h = Histogram::density(&xs, BinSpec::Uniform { lo: 0.0, hi: 1.0, bins: 7 }).unwrap();
        assert!((h.integral() - 1.0).abs() < 1e-12);
        assert_eq!(h.counts.iter().sum::<u64>(), 1000);
    }

    #[test]
    fn level_density_integrates_to_n() {
        let spectra = vec![vec![-1.0, 0.0, 1.0], vec![-0.5, 0.2, 0.9]];
        let h = Histogram::level_density(&spectra, BinSpec::Uniform { lo: -2.0, hi: 2.0, bins: 8 }).unwrap();
        assert!((h.integral() - 3.0).abs() < 1e-12);
        assert_eq!(h.groups, 2);
    }

    #[test]
    fn point_masses() {
        let spectra = vec![vec![-1.0, 0.5, 2.0]; 10];
        let h = Histogram::level_density(&spectra, BinSpec::Uniform { lo: -3.0, hi: 3.0, bins: 12 }).unwrap();
        let occupied: Vec<usize> = (0..h.bins()).filter(|&k| h.counts[k] > 0).collect();
        assert_eq!(occupied.len(), 3);
        for k in occupied {
            assert_eq!(h.counts[k], 10);
            assert_eq!(h.std_errors[k], 0.0);
        }
    }

    #[test]
    fn log_bins_and_edges() {
        let e = BinSpec::Log { lo: 1.0, hi: 1000.0, bins: 3 }.edges().unwrap();
        assert!((e[1] - 10.0).abs() < 1e-12 && (e[2] - 100.0).abs() < 1e-10);
        assert!(BinSpec::Log { lo: 0.0, hi: 1.0, bins: 3 }.edges().is_err());
        assert_eq!(locate(&e, 1000.0), Some(2));
        assert_eq!(locate(&e, 0.5), None);
        assert_eq!(locate(&e, f64::NAN), None);
    }
}
