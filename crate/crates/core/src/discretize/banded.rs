//! Real banded matrices used to build derivative powers before they are
//! scattered into dense storage.

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Banded {
    n: usize,
    half_width: usize,
    // Row-major, 2*half_width + 1 slots per row; slot k is column i + k - half_width.
    data: Vec<f64>,
}

impl Banded {
    pub fn zeros(n: usize, half_width: usize) -> Self {
        Self {
            n,
            half_width,
            data: vec![0.0; n * (2 * half_width + 1)],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut b = Self::zeros(n, 0);
        b.data.iter_mut().for_each(|v| *v = 1.0);
        b
    }

    /// Toeplitz matrix from a centered stencil, truncated at the edges.
    pub fn from_stencil(n: usize, stencil: &[f64]) -> Self {
        debug_assert!(stencil.len() % 2 == 1);
        let hw = stencil.len() / 2;
        let mut b = Self::zeros(n, hw);
        for i in 0..n {
            for (k, &c) in stencil.iter().enumerate() {
                if let Some(j) = (i + k).checked_sub(hw) {
                    if j < n {
                        b.set(i, j, c);
                    }
                }
            }
        }
        b
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    fn width(&self) -> usize {
        2 * self.half_width + 1
    }

    /// Column range of the band in row `i`.
    pub fn columns(&self, i: usize) -> std::ops::Range<usize> {
        i.saturating_sub(self.half_width)..(i + self.half_width + 1).min(self.n)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i.abs_diff(j) > self.half_width {
            return 0.0;
        }
        self.data[i * self.width() + j + self.half_width - i]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        let w = self.width();
        self.data[i * w + j + self.half_width - i] = v;
    }

    pub fn matmul(&self, rhs: &Banded) -> Banded {
        let hw = (self.half_width + rhs.half_width).min(self.n.saturating_sub(1));
        let mut out = Banded::zeros(self.n, hw);
        for i in 0..self.n {
            for k in self.columns(i) {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in rhs.columns(k) {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}
