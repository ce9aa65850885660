use rand::Rng;

use crate::error::{Error, Result};

/// A coordinate chart on ℂ^m with a bounding box per complex coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    dim: usize,
    labels: Vec<String>,
    /// `[re_lo, re_hi, im_lo, im_hi]` for each coordinate.
    bounds: Vec<[f64; 4]>,
}

impl Chart {
    pub fn new(bounds: Vec<[f64; 4]>) -> Result<Self> {
        let dim = bounds.len();
        if !(1..=3).contains(&dim) {
            return Err(Error::Invalid(format!("chart dimension {dim} not in 1..=3")));
        }
        if bounds.iter().any(|b| !(b[1] > b[0] && b[3] > b[2])) {
            return Err(Error::Invalid("chart box has zero volume".into()));
        }
        let labels = (1..=dim).map(|k| format!("z{k}")).collect();
        Ok(Chart { dim, labels, bounds })
    }

    /// The box `[-r, r]²` in every coordinate.
    pub fn cube(dim: usize, r: f64) -> Result<Self> {
        Chart::new(vec![[-r, r, -r, r]; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn real_dim(&self) -> usize {
        2 * self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn bounds(&self) -> &[[f64; 4]] {
        &self.bounds
    }

    pub fn volume(&self) -> f64 {
        self.bounds.iter().map(|b| (b[1] - b[0]) * (b[3] - b[2])).product()
    }

    pub fn contains(&self, p: &[f64; 6]) -> bool {
        self.bounds
            .iter()
            .enumerate()
            .all(|(k, b)| (b[0]..=b[1]).contains(&p[2 * k]) && (b[2]..=b[3]).contains(&p[2 * k + 1]))
    }

    /// A uniformly random point strictly inside the middle 80% of the box.
    pub fn sample_interior(&self, rng: &mut impl Rng) -> [f64; 6] {
        let mut p = [0.0; 6];
        for (k, b) in self.bounds.iter().enumerate() {
            for (i, (lo, hi)) in [(b[0], b[1]), (b[2], b[3])].into_iter().enumerate() {
                let w = hi - lo;
                p[2 * k + i] = lo + w * (0.1 + 0.8 * rng.gen::<f64>());
            }
        }
        p
    }
}
