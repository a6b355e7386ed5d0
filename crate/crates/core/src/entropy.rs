//! Shannon-side baseline: entropy functionals over discrete distributions,
//! chain-rule and data-processing probes, and Shannon-Fano code
//! construction.
//!
//! Base-2 logarithms throughout; `0 log(1/0)` is 0. Float-mode sums run in
//! index order so reports are reproducible. Dyadic mode carries exact
//! probabilities; when every probability is a power of two (the horse race),
//! entropy and expected code length are exact dyadic rationals.

use crate::bits::DyadicRational;
use crate::codes::{kraft_construct, Code, CodesError, LengthProfile};
use num_traits::ToPrimitive;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

const SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum EntropyError {
    #[error("probabilities must be nonnegative (entry {index} is {value})")]
    NegativeProbability { index: usize, value: f64 },
    #[error("probabilities sum to {sum}, not 1")]
    BadTotal { sum: f64 },
    #[error("exact probabilities sum to {sum}, not 1")]
    BadExactTotal { sum: String },
    #[error("outcome and probability counts differ ({outcomes} vs {probabilities})")]
    LengthMismatch { outcomes: usize, probabilities: usize },
    #[error("distribution is empty")]
    Empty,
    #[error("symbol {0:?} has probability 0; every symbol needs a codeword length")]
    ZeroProbabilitySymbol(String),
    #[error("conditional row {row} sums to {sum}, not 1")]
    BadConditionalRow { row: usize, sum: f64 },
    #[error(transparent)]
    Codes(#[from] CodesError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Probabilities {
    Float(Vec<f64>),
    Dyadic(Vec<DyadicRational>),
}

/// A discrete distribution over named outcomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub outcomes: Vec<String>,
    pub probabilities: Probabilities,
}

impl Distribution {
    pub fn from_floats(outcomes: Vec<String>, probs: Vec<f64>) -> Result<Self, EntropyError> {
        let d = Distribution {
            outcomes,
            probabilities: Probabilities::Float(probs),
        };
        d.validate()?;
        Ok(d)
    }

    pub fn from_dyadics(
        outcomes: Vec<String>,
        probs: Vec<DyadicRational>,
    ) -> Result<Self, EntropyError> {
        let d = Distribution {
            outcomes,
            probabilities: Probabilities::Dyadic(probs),
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), EntropyError> {
        let n = match &self.probabilities {
            Probabilities::Float(p) => p.len(),
            Probabilities::Dyadic(p) => p.len(),
        };
        if n != self.outcomes.len() {
            return Err(EntropyError::LengthMismatch {
                outcomes: self.outcomes.len(),
                probabilities: n,
            });
        }
        if n == 0 {
            return Err(EntropyError::Empty);
        }
        match &self.probabilities {
            Probabilities::Float(p) => {
                for (i, &v) in p.iter().enumerate() {
                    if v < 0.0 || !v.is_finite() {
                        return Err(EntropyError::NegativeProbability { index: i, value: v });
                    }
                }
                let sum: f64 = p.iter().sum();
                if (sum - 1.0).abs() > SUM_TOLERANCE {
                    return Err(EntropyError::BadTotal { sum });
                }
            }
            Probabilities::Dyadic(p) => {
                let mut sum = DyadicRational::zero();
                for v in p {
                    sum += v.clone();
                }
                if sum != DyadicRational::one() {
                    return Err(EntropyError::BadExactTotal {
                        sum: sum.to_binary_string(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn float_probabilities(&self) -> Vec<f64> {
        match &self.probabilities {
            Probabilities::Float(p) => p.clone(),
            Probabilities::Dyadic(p) => p.iter().map(dyadic_to_f64).collect(),
        }
    }
}

fn dyadic_to_f64(d: &DyadicRational) -> f64 {
    let num = d.numerator().to_f64().unwrap_or(f64::INFINITY);
    num / 2f64.powi(d.exponent() as i32)
}

fn plogp_term(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        p * (1.0 / p).log2()
    }
}

/// H(X) in bits.
pub fn entropy(d: &Distribution) -> Result<f64, EntropyError> {
    d.validate()?;
    Ok(d.float_probabilities().iter().copied().map(plogp_term).sum())
}

/// Exact entropy for dyadic distributions whose probabilities are all
/// powers of two: H = sum p * l with p = 2^-l. `None` otherwise.
pub fn entropy_exact(d: &Distribution) -> Option<DyadicRational> {
    let Probabilities::Dyadic(probs) = &d.probabilities else {
        return None;
    };
    let mut h = DyadicRational::zero();
    for p in probs {
        if p.is_zero() {
            continue;
        }
        if !p.is_power_of_two() {
            return None;
        }
        let l = p.exponent(); // p = 2^-l
        for _ in 0..l {
            h += p.clone();
        }
    }
    Some(h)
}

/// Joint distribution over a product of two finite alphabets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    /// p(x, y) indexed as matrix[x][y].
    pub matrix: Vec<Vec<f64>>,
}

impl JointDistribution {
    pub fn new(matrix: Vec<Vec<f64>>) -> Result<Self, EntropyError> {
        let j = JointDistribution { matrix };
        j.validate()?;
        Ok(j)
    }

    pub fn validate(&self) -> Result<(), EntropyError> {
        if self.matrix.is_empty() || self.matrix[0].is_empty() {
            return Err(EntropyError::Empty);
        }
        let cols = self.matrix[0].len();
        let mut sum = 0.0;
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != cols {
                return Err(EntropyError::LengthMismatch {
                    outcomes: cols,
                    probabilities: row.len(),
                });
            }
            for &v in row {
                if v < 0.0 || !v.is_finite() {
                    return Err(EntropyError::NegativeProbability { index: i, value: v });
                }
                sum += v;
            }
        }
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(EntropyError::BadTotal { sum });
        }
        Ok(())
    }

    pub fn marginal_x(&self) -> Vec<f64> {
        self.matrix.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn marginal_y(&self) -> Vec<f64> {
        let cols = self.matrix[0].len();
        (0..cols)
            .map(|y| self.matrix.iter().map(|row| row[y]).sum())
            .collect()
    }
}

/// The six joint/conditional/mutual quantities, each computed from its own
/// definition (conditional entropies from conditional rows, not by
/// subtraction), so the algebraic identities are genuine checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointSummary {
    pub h_xy: f64,
    pub h_x: f64,
    pub h_y: f64,
    pub h_y_given_x: f64,
    pub h_x_given_y: f64,
    pub i_xy: f64,
}

pub fn joint_conditional_mutual(j: &JointDistribution) -> Result<JointSummary, EntropyError> {
    j.validate()?;
    let px = j.marginal_x();
    let py = j.marginal_y();

    let h_xy: f64 = j
        .matrix
        .iter()
        .flat_map(|row| row.iter().copied())
        .map(plogp_term)
        .sum();
    let h_x: f64 = px.iter().copied().map(plogp_term).sum();
    let h_y: f64 = py.iter().copied().map(plogp_term).sum();

    // H(Y|X) = sum_x p(x) H(Y | X = x), from the conditional rows.
    let mut h_y_given_x = 0.0;
    for (x, row) in j.matrix.iter().enumerate() {
        if px[x] <= 0.0 {
            continue;
        }
        let row_h: f64 = row.iter().map(|&v| plogp_term(v / px[x])).sum();
        h_y_given_x += px[x] * row_h;
    }
    let mut h_x_given_y = 0.0;
    for (y, &pyv) in py.iter().enumerate() {
        if pyv <= 0.0 {
            continue;
        }
        let col_h: f64 = j.matrix.iter().map(|row| plogp_term(row[y] / pyv)).sum();
        h_x_given_y += pyv * col_h;
    }

    // I(X;Y) = H(X) - H(X|Y), the defining form.
    let i_xy = h_x - h_x_given_y;
    Ok(JointSummary {
        h_xy,
        h_x,
        h_y,
        h_y_given_x,
        h_x_given_y,
        i_xy,
    })
}

/// Optimal-length prefix code: lengths ceil(log2(1/p)) fed to the Kraft
/// construction (symbols sorted by length, then restored to table order).
pub fn shannon_fano(d: &Distribution) -> Result<Code, EntropyError> {
    d.validate()?;
    let lengths = shannon_fano_lengths(d)?;
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.sort_by_key(|&i| lengths[i]);
    let words = kraft_construct(&LengthProfile::new(
        order.iter().map(|&i| lengths[i]).collect(),
    ))?;
    let mut entries: Vec<(String, crate::bits::BitString)> =
        vec![(String::new(), crate::bits::BitString::empty()); lengths.len()];
    for (w, &i) in words.into_iter().zip(order.iter()) {
        entries[i] = (d.outcomes[i].clone(), w);
    }
    Ok(Code::new(entries))
}

/// ceil(log2(1/p)) per symbol; exact for dyadic probabilities.
pub fn shannon_fano_lengths(d: &Distribution) -> Result<Vec<u64>, EntropyError> {
    match &d.probabilities {
        Probabilities::Dyadic(probs) => probs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                p.leading_one_position()
                    .ok_or_else(|| EntropyError::ZeroProbabilitySymbol(d.outcomes[i].clone()))
            })
            .collect(),
        Probabilities::Float(probs) => probs
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                if p <= 0.0 {
                    return Err(EntropyError::ZeroProbabilitySymbol(d.outcomes[i].clone()));
                }
                let raw = -p.log2();
                // Snap near-integer logs so exact powers of two stay exact.
                let snapped = raw.round();
                let l = if (raw - snapped).abs() < 1e-9 {
                    snapped.max(0.0) as u64
                } else {
                    raw.ceil().max(0.0) as u64
                };
                Ok(l.max(1))
            })
            .collect(),
    }
}

/// Expected codeword length under float probabilities.
pub fn expected_length(d: &Distribution, lengths: &[u64]) -> f64 {
    d.float_probabilities()
        .iter()
        .zip(lengths)
        .map(|(&p, &l)| p * l as f64)
        .sum()
}

/// Exact expected codeword length for dyadic distributions.
pub fn expected_length_exact(d: &Distribution, lengths: &[u64]) -> Option<DyadicRational> {
    let Probabilities::Dyadic(probs) = &d.probabilities else {
        return None;
    };
    let mut total = DyadicRational::zero();
    for (p, &l) in probs.iter().zip(lengths) {
        for _ in 0..l {
            total += p.clone();
        }
    }
    Some(total)
}

/// X -> Y -> Z as stochastic tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovTriple {
    pub p_x: Vec<f64>,
    /// p(y|x) indexed as [x][y].
    pub p_y_given_x: Vec<Vec<f64>>,
    /// p(z|y) indexed as [y][z].
    pub p_z_given_y: Vec<Vec<f64>>,
}

impl MarkovTriple {
    pub fn validate(&self) -> Result<(), EntropyError> {
        if self.p_x.is_empty() {
            return Err(EntropyError::Empty);
        }
        let sum: f64 = self.p_x.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(EntropyError::BadTotal { sum });
        }
        if self.p_y_given_x.len() != self.p_x.len() || self.p_z_given_y.is_empty() {
            return Err(EntropyError::Empty);
        }
        for (i, row) in self.p_y_given_x.iter().chain(self.p_z_given_y.iter()).enumerate() {
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > SUM_TOLERANCE {
                return Err(EntropyError::BadConditionalRow { row: i, sum: s });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DpiProbe {
    pub i_xy: f64,
    pub i_xz: f64,
    pub holds: bool,
}

pub const DPI_TOLERANCE: f64 = 1e-9;

/// Evaluate I(X;Y) and I(X;Z) on the chain X -> Y -> Z.
pub fn dpi_probe(t: &MarkovTriple) -> Result<DpiProbe, EntropyError> {
    t.validate()?;
    let nx = t.p_x.len();
    let ny = t.p_z_given_y.len();
    let nz = t.p_z_given_y[0].len();

    let mut joint_xy = vec![vec![0.0; ny]; nx];
    for x in 0..nx {
        for y in 0..ny {
            joint_xy[x][y] = t.p_x[x] * t.p_y_given_x[x][y];
        }
    }
    let mut joint_xz = vec![vec![0.0; nz]; nx];
    for x in 0..nx {
        for y in 0..ny {
            for z in 0..nz {
                joint_xz[x][z] += t.p_x[x] * t.p_y_given_x[x][y] * t.p_z_given_y[y][z];
            }
        }
    }
    let i_xy = joint_conditional_mutual(&JointDistribution::new(normalize(joint_xy))?)?.i_xy;
    let i_xz = joint_conditional_mutual(&JointDistribution::new(normalize(joint_xz))?)?.i_xy;
    Ok(DpiProbe {
        i_xy,
        i_xz,
        holds: i_xy >= i_xz - DPI_TOLERANCE,
    })
}

// Conditional tables built from validated rows already sum to 1 up to float
// error; renormalize so JointDistribution::validate stays strict.
fn normalize(mut m: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let total: f64 = m.iter().flat_map(|r| r.iter()).sum();
    if total > 0.0 {
        for row in &mut m {
            for v in row {
                *v /= total;
            }
        }
    }
    m
}

/// Uniform sample from the probability simplex (normalized exponentials),
/// rejection-free.
pub fn random_distribution<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut draws: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            -u.ln()
        })
        .collect();
    let total: f64 = draws.iter().sum();
    for v in &mut draws {
        *v /= total;
    }
    draws
}

/// Random joint matrix on the simplex over nx*ny cells.
pub fn random_joint<R: Rng>(rng: &mut R, nx: usize, ny: usize) -> JointDistribution {
    let flat = random_distribution(rng, nx * ny);
    let matrix = flat.chunks(ny).map(|c| c.to_vec()).collect();
    JointDistribution { matrix }
}

/// Random Markov triple with row-stochastic conditionals.
pub fn random_markov_triple<R: Rng>(
    rng: &mut R,
    nx: usize,
    ny: usize,
    nz: usize,
) -> MarkovTriple {
    MarkovTriple {
        p_x: random_distribution(rng, nx),
        p_y_given_x: (0..nx).map(|_| random_distribution(rng, ny)).collect(),
        p_z_given_y: (0..ny).map(|_| random_distribution(rng, nz)).collect(),
    }
}

pub fn horse_race() -> Distribution {
    let probs = [1u64, 2, 3, 4, 6, 6, 6, 6]
        .iter()
        .map(|&l| DyadicRational::pow2_neg(l))
        .collect();
    Distribution::from_dyadics(
        (1..=8).map(|i| format!("h{i}")).collect(),
        probs,
    )
    .expect("horse race probabilities sum to 1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-9;

    #[test]
    fn horse_race_entropy_is_two_bits() {
        let d = horse_race();
        assert!((entropy(&d).unwrap() - 2.0).abs() < TOL);
        assert_eq!(
            entropy_exact(&d).unwrap(),
            DyadicRational::from_parts(2u32.into(), 0)
        );
    }

    #[test]
    fn uniform_and_deterministic_entropy() {
        let u = Distribution::from_floats(
            (0..8).map(|i| i.to_string()).collect(),
            vec![0.125; 8],
        )
        .unwrap();
        assert!((entropy(&u).unwrap() - 3.0).abs() < TOL);

        let det = Distribution::from_floats(
            vec!["a".into(), "b".into(), "c".into()],
            vec![1.0, 0.0, 0.0],
        )
        .unwrap();
        assert_eq!(entropy(&det).unwrap(), 0.0);
    }

    #[test]
    fn invalid_distributions_are_rejected() {
        assert!(Distribution::from_floats(vec!["a".into()], vec![0.9]).is_err());
        assert!(Distribution::from_floats(vec!["a".into()], vec![-1.0, 2.0]).is_err());
        assert!(Distribution::from_floats(vec![], vec![]).is_err());
    }

    #[test]
    fn joint_summary_on_independent_and_copied_bits() {
        let independent = JointDistribution::new(vec![vec![0.25; 2]; 2]).unwrap();
        let s = joint_conditional_mutual(&independent).unwrap();
        assert!((s.h_xy - 2.0).abs() < TOL);
        assert!(s.i_xy.abs() < TOL);

        let copied = JointDistribution::new(vec![vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        let s = joint_conditional_mutual(&copied).unwrap();
        assert!((s.h_xy - 1.0).abs() < TOL);
        assert!(s.h_y_given_x.abs() < TOL);
        assert!((s.i_xy - 1.0).abs() < TOL);
    }

    #[test]
    fn chain_rule_and_symmetry_over_random_joints() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let nx = rng.gen_range(2..=8);
            let ny = rng.gen_range(2..=8);
            let j = random_joint(&mut rng, nx, ny);
            let s = joint_conditional_mutual(&j).unwrap();
            assert!((s.h_xy - s.h_x - s.h_y_given_x).abs() <= TOL);
            assert!((s.h_xy - s.h_y - s.h_x_given_y).abs() <= TOL);
            let i_other_way = s.h_y - s.h_y_given_x;
            assert!((s.i_xy - i_other_way).abs() <= TOL);
            assert!(s.h_x <= (nx as f64).log2() + TOL);
        }
    }

    #[test]
    fn entropy_is_maximized_by_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let n = rng.gen_range(2..=10);
            let p = random_distribution(&mut rng, n);
            let d = Distribution::from_floats(
                (0..n).map(|i| i.to_string()).collect(),
                p,
            )
            .unwrap();
            let h = entropy(&d).unwrap();
            assert!(h >= -TOL);
            assert!(h <= (n as f64).log2() + TOL);
        }
    }

    #[test]
    fn shannon_fano_horse_race() {
        let d = horse_race();
        let lengths = shannon_fano_lengths(&d).unwrap();
        assert_eq!(lengths, vec![1, 2, 3, 4, 6, 6, 6, 6]);
        let el = expected_length_exact(&d, &lengths).unwrap();
        assert_eq!(el, DyadicRational::from_parts(2u32.into(), 0));
        let code = shannon_fano(&d).unwrap();
        assert_eq!(
            crate::codes::classify(&code).unwrap().class,
            crate::codes::CodeClass::Prefix
        );
        // Lengths follow table order.
        let got: Vec<u64> = code.entries().iter().map(|(_, w)| w.len() as u64).collect();
        assert_eq!(got, lengths);
    }

    #[test]
    fn shannon_fano_simple_cases() {
        let u2 = Distribution::from_floats(vec!["a".into(), "b".into()], vec![0.5, 0.5]).unwrap();
        assert_eq!(shannon_fano_lengths(&u2).unwrap(), vec![1, 1]);

        let skew = Distribution::from_floats(vec!["a".into(), "b".into()], vec![0.9, 0.1]).unwrap();
        let lengths = shannon_fano_lengths(&skew).unwrap();
        assert_eq!(lengths, vec![1, 4]);
        let el = expected_length(&skew, &lengths);
        assert!((el - 1.3).abs() < TOL);
        let h = entropy(&skew).unwrap();
        assert!(el < h + 1.0);
    }

    #[test]
    fn shannon_fano_rejects_zero_probability() {
        let d = Distribution {
            outcomes: vec!["a".into(), "b".into()],
            probabilities: Probabilities::Float(vec![1.0, 0.0]),
        };
        assert!(matches!(
            shannon_fano(&d),
            Err(EntropyError::ZeroProbabilitySymbol(_))
        ));
    }

    #[test]
    fn expected_length_beats_entropy_plus_one_on_random_distributions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(2..=10);
            let p = random_distribution(&mut rng, n);
            let d = Distribution::from_floats((0..n).map(|i| i.to_string()).collect(), p).unwrap();
            let lengths = shannon_fano_lengths(&d).unwrap();
            let (_, satisfiable) =
                crate::codes::kraft_sum(&LengthProfile::new(lengths.clone())).unwrap();
            assert!(satisfiable);
            assert!(expected_length(&d, &lengths) < entropy(&d).unwrap() + 1.0 + TOL);
        }
    }

    #[test]
    fn dpi_identity_and_independence_cases() {
        // Z = Y through the identity channel.
        let t = MarkovTriple {
            p_x: vec![0.3, 0.7],
            p_y_given_x: vec![vec![0.9, 0.1], vec![0.2, 0.8]],
            p_z_given_y: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        };
        let r = dpi_probe(&t).unwrap();
        assert!((r.i_xy - r.i_xz).abs() < TOL);
        assert!(r.holds);

        // Z independent of Y.
        let t = MarkovTriple {
            p_x: vec![0.3, 0.7],
            p_y_given_x: vec![vec![0.9, 0.1], vec![0.2, 0.8]],
            p_z_given_y: vec![vec![0.5, 0.5], vec![0.5, 0.5]],
        };
        let r = dpi_probe(&t).unwrap();
        assert!(r.i_xz.abs() < TOL);
        assert!(r.holds);
    }

    #[test]
    fn dpi_holds_over_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..300 {
            let nx = rng.gen_range(2..=5);
            let ny = rng.gen_range(2..=5);
            let nz = rng.gen_range(2..=5);
            let t = random_markov_triple(&mut rng, nx, ny, nz);
            let r = dpi_probe(&t).unwrap();
            assert!(r.holds, "DPI violated: {:?}", r);
        }
    }
}
