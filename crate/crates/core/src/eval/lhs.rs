//! Latin hypercube sampling of map parameters.
//!
//! Each sampled dimension is split into `n` equal-width strata; every stratum
//! receives exactly one draw, and strata are paired across dimensions by
//! independent random permutations.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{table_ranges, Params};

#[derive(Debug, Clone, PartialEq)]
pub struct LhsSpec {
    pub a_t: (f64, f64),
    pub beta: (f64, f64),
    pub e_b: (f64, f64),
    /// `e_n` is drawn as this fraction of the sample's `e_b`.
    pub e_n_fraction: (f64, f64),
    pub minwd: (f64, f64),
    pub eps_ds: (f64, f64),
    pub n: usize,
    pub seed: u64,
    /// Supplies the fields that are not sampled (`n_max`, length bounds,
    /// `epsilon`).
    pub base: Params,
}

impl LhsSpec {
    /// The standard parameter ranges.
    pub fn table(n: usize, seed: u64, base: Params) -> Self {
        LhsSpec {
            a_t: table_ranges::A_T,
            beta: table_ranges::BETA,
            e_b: table_ranges::E_B,
            e_n_fraction: table_ranges::E_N_FRACTION,
            minwd: table_ranges::MINWD,
            eps_ds: table_ranges::EPS_DS,
            n,
            seed,
            base,
        }
    }

    fn ranges(&self) -> [(&'static str, (f64, f64)); 6] {
        [
            ("a_t", self.a_t),
            ("beta", self.beta),
            ("e_b", self.e_b),
            ("e_n_fraction", self.e_n_fraction),
            ("minwd", self.minwd),
            ("eps_ds", self.eps_ds),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("LHS needs at least one sample".into()));
        }
        for (name, (lo, hi)) in self.ranges() {
            if !(lo <= hi) {
                return Err(Error::InvalidArgument(format!(
                    "{name}: lower bound {lo} exceeds upper bound {hi}"
                )));
            }
        }
        Ok(())
    }
}

/// One stratified column of `n` draws in `[lo, hi]`, in random stratum order.
pub fn stratified_column<R: Rng>(rng: &mut R, (lo, hi): (f64, f64), n: usize) -> Vec<f64> {
    let width = (hi - lo) / n as f64;
    let mut strata: Vec<usize> = (0..n).collect();
    strata.shuffle(rng);
    strata
        .into_iter()
        .map(|s| {
            let u: f64 = rng.gen();
            (lo + (s as f64 + u) * width).min(hi)
        })
        .collect()
}

pub fn lhs_sample(spec: &LhsSpec) -> Result<Vec<Params>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let a_t = stratified_column(&mut rng, spec.a_t, n);
    let beta = stratified_column(&mut rng, spec.beta, n);
    let e_b = stratified_column(&mut rng, spec.e_b, n);
    let e_n_fraction = stratified_column(&mut rng, spec.e_n_fraction, n);
    let minwd = stratified_column(&mut rng, spec.minwd, n);
    let eps_ds = stratified_column(&mut rng, spec.eps_ds, n);
    Ok((0..n)
        .map(|i| Params {
            a_t: a_t[i],
            beta: beta[i],
            e_b: e_b[i],
            e_n: e_n_fraction[i] * e_b[i],
            minwd: minwd[i],
            eps_ds: eps_ds[i],
            ..spec.base
        })
        .collect())
}
