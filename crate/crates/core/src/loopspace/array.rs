/// Real array of shape `[comps][sites]`, stored row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopArray {
    comps: usize,
    sites: usize,
    data: Vec<f64>,
}

impl LoopArray {
    pub fn zeros(comps: usize, sites: usize) -> Self {
        LoopArray {
            comps,
            sites,
            data: vec![0.0; comps * sites],
        }
    }

    pub fn from_fn(comps: usize, sites: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(comps * sites);
        for i in 0..comps {
            for a in 0..sites {
                data.push(f(i, a));
            }
        }
        LoopArray { comps, sites, data }
    }

    /// Builds from rows; `None` if the rows are ragged.
    pub fn from_rows(rows: &[Vec<f64>]) -> Option<Self> {
        let sites = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != sites) {
            return None;
        }
        Some(LoopArray {
            comps: rows.len(),
            sites,
            data: rows.concat(),
        })
    }

    pub fn comps(&self) -> usize {
        self.comps
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn get(&self, i: usize, a: usize) -> f64 {
        self.data[i * self.sites + a]
    }

    pub fn set(&mut self, i: usize, a: usize, v: f64) {
        self.data[i * self.sites + a] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.sites..(i + 1) * self.sites]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.comps).map(|i| self.row(i).to_vec()).collect()
    }

    /// Values of every component at site `a`.
    pub fn column(&self, a: usize) -> Vec<f64> {
        (0..self.comps).map(|i| self.get(i, a)).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn dot(&self, other: &LoopArray) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, k: f64) -> LoopArray {
        LoopArray {
            comps: self.comps,
            sites: self.sites,
            data: self.data.iter().map(|v| v * k).collect(),
        }
    }

    /// `self + k * other`
    pub fn add_scaled(&self, k: f64, other: &LoopArray) -> LoopArray {
        LoopArray {
            comps: self.comps,
            sites: self.sites,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + k * b)
                .collect(),
        }
    }

    pub(crate) fn first_non_finite(&self) -> Option<(usize, usize)> {
        self.data
            .iter()
            .position(|v| !v.is_finite())
            .map(|k| (k / self.sites, k % self.sites))
    }
}
