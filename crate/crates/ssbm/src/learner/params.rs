//! Model parameters and posterior responsibilities for the block learner.

use rand::Rng;

use crate::error::{Error, Result};

/// Number of edge categories: positive, negative, null.
pub const CATEGORIES: usize = 3;

/// Category index of an adjacency entry: +1 -> 0, -1 -> 1, 0 -> 2.
#[inline]
pub fn category(sign: i8) -> usize {
    match sign {
        1 => 0,
        -1 => 1,
        _ => 2,
    }
}

/// Block-mixture parameters: a membership prior `phi` over `k_max` blocks
/// (annihilated blocks hold an exact 0) and, per block and node, a
/// `(positive, negative, null)` connection probability triple.
///
/// `c` is the per-block parameter count used by the annihilation threshold
/// and the cost penalty; the learner keeps it at twice the number of live
/// blocks.
#[derive(Clone, Debug)]
pub struct ModelParams {
    n: usize,
    k_max: usize,
    phi: Vec<f64>,
    /// Flat `k_max * n * 3` tensor, laid out `[block][node][category]`.
    lambda: Vec<f64>,
    c: f64,
}

impl ModelParams {
    /// Uniform membership prior and random connection triples: each is a
    /// flat Dirichlet draw blended toward the uniform triple,
    /// `(1 - spread)/3 + spread * draw`, clamped to `lambda_floor`.
    ///
    /// `spread = 1` is the plain flat Dirichlet. Small spreads keep the
    /// per-block evidence offsets of the random draws from swamping the
    /// per-node signal, which matters because the annihilation threshold
    /// already bites at the initial mass level `n / k_max`.
    pub fn random_init(
        n: usize,
        k_max: usize,
        lambda_floor: f64,
        spread: f64,
        rng: &mut impl Rng,
    ) -> Self {
        let phi = vec![1.0 / k_max as f64; k_max];
        let mut lambda = vec![0.0; k_max * n * CATEGORIES];
        for triple in lambda.chunks_mut(CATEGORIES) {
            // A flat Dirichlet draw is a normalized triple of Exp(1) samples.
            let mut sum = 0.0;
            for slot in triple.iter_mut() {
                let u: f64 = rng.gen();
                *slot = -(1.0 - u).ln();
                sum += *slot;
            }
            for slot in triple.iter_mut() {
                *slot = ((1.0 - spread) / 3.0 + spread * *slot / sum).max(lambda_floor);
            }
        }
        ModelParams {
            n,
            k_max,
            phi,
            lambda,
            c: 2.0 * k_max as f64,
        }
    }

    /// Builds parameters from explicit pieces, validating shapes, simplex
    /// sums, and non-negativity.
    pub fn from_parts(n: usize, phi: Vec<f64>, lambda: Vec<f64>, c: f64) -> Result<Self> {
        let k_max = phi.len();
        if k_max == 0 {
            return Err(Error::InvalidInput("phi must not be empty".into()));
        }
        if lambda.len() != k_max * n * CATEGORIES {
            return Err(Error::InvalidInput(format!(
                "lambda has {} entries, expected {}",
                lambda.len(),
                k_max * n * CATEGORIES
            )));
        }
        if phi.iter().any(|&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidInput("phi entries must be >= 0".into()));
        }
        let total: f64 = phi.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("phi sums to {total}, expected 1")));
        }
        let params = ModelParams {
            n,
            k_max,
            phi,
            lambda,
            c,
        };
        for k in params.live_blocks() {
            for j in 0..n {
                let t = params.lambda(k, j);
                let sum: f64 = t.iter().sum();
                if (sum - 1.0).abs() > 1e-9 || t.iter().any(|&v| v < 0.0) {
                    return Err(Error::InvalidInput(format!(
                        "lambda[{k}][{j}] = {t:?} is not a probability triple"
                    )));
                }
            }
        }
        Ok(params)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Number of live (nonempty) blocks.
    pub fn k_ne(&self) -> usize {
        self.phi.iter().filter(|&&p| p > 0.0).count()
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Indices of blocks with positive prior mass, ascending.
    pub fn live_blocks(&self) -> Vec<usize> {
        (0..self.k_max).filter(|&k| self.phi[k] > 0.0).collect()
    }

    /// The `(positive, negative, null)` triple for block `k` and node `j`.
    pub fn lambda(&self, k: usize, j: usize) -> [f64; 3] {
        let at = (k * self.n + j) * CATEGORIES;
        [self.lambda[at], self.lambda[at + 1], self.lambda[at + 2]]
    }

    /// Flat `n * 3` slice of block `k`'s connection triples.
    pub fn lambda_block(&self, k: usize) -> &[f64] {
        &self.lambda[k * self.n * CATEGORIES..(k + 1) * self.n * CATEGORIES]
    }

    pub(crate) fn lambda_block_mut(&mut self, k: usize) -> &mut [f64] {
        &mut self.lambda[k * self.n * CATEGORIES..(k + 1) * self.n * CATEGORIES]
    }

    pub(crate) fn set_phi(&mut self, phi: Vec<f64>) {
        debug_assert_eq!(phi.len(), self.k_max);
        self.phi = phi;
    }

    pub(crate) fn set_c(&mut self, c: f64) {
        self.c = c;
    }

    /// Zeroes block `k`'s prior mass and renormalizes the remaining live
    /// entries.
    pub(crate) fn annihilate(&mut self, k: usize) {
        self.phi[k] = 0.0;
        let total: f64 = self.phi.iter().sum();
        for p in self.phi.iter_mut() {
            *p /= total;
        }
    }
}

/// Posterior block-membership matrix: `zeta[i][k]` is the probability that
/// node `i` belongs to block `k`. Rows sum to one; columns of annihilated
/// blocks are identically zero.
#[derive(Clone, Debug)]
pub struct Responsibilities {
    n: usize,
    k_max: usize,
    zeta: Vec<f64>,
}

impl Responsibilities {
    pub fn new_zero(n: usize, k_max: usize) -> Self {
        Responsibilities {
            n,
            k_max,
            zeta: vec![0.0; n * k_max],
        }
    }

    /// Builds from per-node rows, validating that each row sums to one.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidInput("no rows".into()));
        }
        let k_max = rows[0].len();
        let mut zeta = Vec::with_capacity(n * k_max);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k_max {
                return Err(Error::InvalidInput(format!("row {i} has ragged length")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-9 || row.iter().any(|&z| z < 0.0) {
                return Err(Error::InvalidInput(format!(
                    "row {i} is not a probability vector (sum {sum})"
                )));
            }
            zeta.extend_from_slice(row);
        }
        Ok(Responsibilities { n, k_max, zeta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.zeta[i * self.k_max..(i + 1) * self.k_max]
    }

    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.zeta[i * self.k_max..(i + 1) * self.k_max]
    }

    pub fn entry(&self, i: usize, k: usize) -> f64 {
        self.zeta[i * self.k_max + k]
    }

    pub fn column_sum(&self, k: usize) -> f64 {
        (0..self.n).map(|i| self.zeta[i * self.k_max + k]).sum()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.k_max];
        for row in self.zeta.chunks(self.k_max) {
            for (s, &z) in sums.iter_mut().zip(row) {
                *s += z;
            }
        }
        sums
    }

    /// Zeroes the given columns and renormalizes every row over what is
    /// left.
    pub(crate) fn zero_columns_and_renormalize(&mut self, columns: &[usize]) {
        if columns.is_empty() {
            return;
        }
        for row in self.zeta.chunks_mut(self.k_max) {
            for &k in columns {
                row[k] = 0.0;
            }
            let sum: f64 = row.iter().sum();
            if sum > 0.0 {
                for z in row.iter_mut() {
                    *z /= sum;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn category_order_is_pos_neg_null() {
        assert_eq!(category(1), 0);
        assert_eq!(category(-1), 1);
        assert_eq!(category(0), 2);
    }

    #[test]
    fn random_init_is_valid_and_floored() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = ModelParams::random_init(6, 3, 1e-10, 1.0, &mut rng);
        assert_eq!(p.k_ne(), 3);
        assert!((p.phi().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for k in 0..3 {
            for j in 0..6 {
                let t = p.lambda(k, j);
                assert!((t.iter().sum::<f64>() - 1.0).abs() < 1e-9);
                assert!(t.iter().all(|&v| v >= 1e-10));
            }
        }
        assert_eq!(p.c(), 6.0);
    }

    #[test]
    fn from_parts_rejects_bad_shapes() {
        assert!(ModelParams::from_parts(2, vec![0.5, 0.5], vec![0.0; 5], 4.0).is_err());
        assert!(ModelParams::from_parts(2, vec![0.7, 0.7], vec![1.0 / 3.0; 12], 4.0).is_err());
    }

    #[test]
    fn responsibilities_row_and_column_access() {
        let z = Responsibilities::from_rows(&[vec![0.25, 0.75], vec![0.5, 0.5]]).unwrap();
        assert_eq!(z.entry(0, 1), 0.75);
        assert!((z.column_sum(0) - 0.75).abs() < 1e-12);
        assert_eq!(z.column_sums(), vec![0.75, 1.25]);
    }

    #[test]
    fn zeroing_columns_renormalizes_rows() {
        let mut z = Responsibilities::from_rows(&[vec![0.2, 0.3, 0.5], vec![0.6, 0.2, 0.2]]).unwrap();
        z.zero_columns_and_renormalize(&[1]);
        for i in 0..2 {
            assert!((z.row(i).iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert_eq!(z.entry(i, 1), 0.0);
        }
        assert!((z.entry(0, 2) - 0.5 / 0.7).abs() < 1e-12);
    }
}
