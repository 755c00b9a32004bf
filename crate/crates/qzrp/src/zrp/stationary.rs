//! Exact stationary distribution by fraction-free elimination.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::config::{enumerate_configs, ZrpConfig};
use super::rates::zrp_rates;
use crate::error::{Budget, Error, Result};
use crate::exactalg::bareiss_solve;
use crate::shapes::Partition;
use crate::Rational;

/// Site parameters and the global `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZrpParams<F = Rational> {
    pub x: Vec<F>,
    pub t: F,
}

impl<F: Clone> ZrpParams<F> {
    pub fn new(x: Vec<F>, t: F) -> Self {
        ZrpParams { x, t }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }
}

impl ZrpParams<Rational> {
    /// Integer site parameters with `t = num/den`.
    pub fn from_ints(x: &[i64], t_num: i64, t_den: i64) -> Self {
        ZrpParams {
            x: x.iter().map(|&v| Rational::from_integer(v.into())).collect(),
            t: Rational::new(t_num.into(), t_den.into()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.x.iter().any(|v| !v.is_positive()) {
            return Err(Error::Contract("site parameters must be positive".into()));
        }
        if self.t.is_negative() {
            return Err(Error::Contract("t must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn to_f64(&self) -> ZrpParams<f64> {
        use num_traits::ToPrimitive;
        ZrpParams { x: self.x.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect(), t: self.t.to_f64().unwrap_or(f64::NAN) }
    }
}

/// The numeric generator: for each state, its moves as `(target index, rate)`.
pub fn numeric_generator(configs: &[ZrpConfig], params: &ZrpParams) -> Vec<Vec<(usize, Rational)>> {
    let index: BTreeMap<&ZrpConfig, usize> = configs.iter().enumerate().map(|(i, w)| (w, i)).collect();
    configs
        .iter()
        .map(|w| {
            zrp_rates(w)
                .into_iter()
                .map(|m| (index[&m.target], m.rate.eval(&params.x, &params.t)))
                .filter(|(_, r)| !r.is_zero())
                .collect()
        })
        .collect()
}

fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    row.iter().map(|v| (v * Rational::from_integer(l.clone())).to_integer()).collect()
}

/// Solve `πQ = 0`, `Σπ = 1` exactly. Configurations come out in canonical
/// order; the last balance equation is replaced by the normalization row.
pub fn stationary_exact(shape: &Partition, n: usize, params: &ZrpParams, budget: &Budget) -> Result<BTreeMap<ZrpConfig, Rational>> {
    if params.n() != n {
        return Err(Error::Contract(format!("{} site parameters for {n} sites", params.n())));
    }
    params.validate()?;
    let configs = enumerate_configs(shape, n);
    let m = configs.len();
    budget.check("stationary solve (states squared)", (m as u128) * (m as u128))?;
    let gen = numeric_generator(&configs, params);
    // a[j][i] = Q[i][j]
    let mut a = vec![vec![Rational::zero(); m]; m];
    for (i, moves) in gen.iter().enumerate() {
        for (j, r) in moves {
            a[*j][i] += r;
            a[i][i] -= r;
        }
    }
    let mut b = vec![Rational::zero(); m];
    a[m - 1] = vec![Rational::one(); m];
    b[m - 1] = Rational::one();
    let (ai, bi): (Vec<Vec<BigInt>>, Vec<BigInt>) = a
        .iter()
        .zip(&b)
        .map(|(row, rhs)| {
            let mut full = row.clone();
            full.push(rhs.clone());
            let mut ints = clear_denominators(&full);
            let last = ints.pop().expect("nonempty row");
            (ints, last)
        })
        .unzip();
    let (det, y) = bareiss_solve(&ai, &bi).ok_or_else(|| Error::Internal("generator is not irreducible: singular balance system".into()))?;
    let pi: Vec<Rational> = y.into_iter().map(|v| BigRational::new(v, det.clone())).collect();
    if pi.iter().any(|p| !p.is_positive()) {
        return Err(Error::Internal("stationary solve produced a nonpositive probability".into()));
    }
    Ok(configs.into_iter().zip(pi).collect())
}
