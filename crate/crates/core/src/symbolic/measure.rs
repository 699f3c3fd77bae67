//! Shift-invariant measures on subshifts: exact Bernoulli and Markov models
//! and empirical sliding-window frequencies from a finite orbit segment.

use super::{CylinderSet, Word};
use crate::error::{Error, Result};
use crate::util::{neumaier_sum, xlnx};
use serde::{Deserialize, Serialize};

const SUM_TOL: f64 = 1e-12;
const STATIONARY_TOL: f64 = 1e-9;

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MeasureModel {
    Bernoulli {
        weights: Vec<f64>,
    },
    Markov {
        transition: Vec<Vec<f64>>,
        stationary: Vec<f64>,
    },
    /// Sliding-window frequencies over a segment; answers only for words of
    /// length at most `max_len`. The estimator carries an O(max_len / |segment|)
    /// boundary error by construction.
    Empirical {
        segment: Word,
        max_len: usize,
    },
}

impl MeasureModel {
    pub fn bernoulli(weights: Vec<f64>) -> Result<Self> {
        let m = MeasureModel::Bernoulli { weights };
        m.validate()?;
        Ok(m)
    }

    pub fn markov(transition: Vec<Vec<f64>>, stationary: Vec<f64>) -> Result<Self> {
        let m = MeasureModel::Markov {
            transition,
            stationary,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn empirical(segment: Word, max_len: usize) -> Result<Self> {
        let m = MeasureModel::Empirical { segment, max_len };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MeasureModel::Bernoulli { weights } => {
                if weights.is_empty() || weights.iter().any(|&w| !(0.0..=1.0).contains(&w)) {
                    return Err(Error::InvalidInput("bernoulli weights must lie in [0,1]".into()));
                }
                let total = neumaier_sum(weights.iter().copied());
                if (total - 1.0).abs() > SUM_TOL {
                    return Err(Error::InvalidInput(format!(
                        "bernoulli weights sum to {total}, not 1"
                    )));
                }
            }
            MeasureModel::Markov {
                transition,
                stationary,
            } => {
                let k = stationary.len();
                if k == 0 || transition.len() != k || transition.iter().any(|r| r.len() != k) {
                    return Err(Error::InvalidInput("markov dimensions are inconsistent".into()));
                }
                if stationary.iter().any(|&p| !(0.0..=1.0).contains(&p))
                    || transition
                        .iter()
                        .any(|r| r.iter().any(|&p| !(0.0..=1.0).contains(&p)))
                {
                    return Err(Error::InvalidInput("markov entries must lie in [0,1]".into()));
                }
                let total = neumaier_sum(stationary.iter().copied());
                if (total - 1.0).abs() > SUM_TOL {
                    return Err(Error::InvalidInput(format!(
                        "stationary vector sums to {total}, not 1"
                    )));
                }
                for (i, row) in transition.iter().enumerate() {
                    let s = neumaier_sum(row.iter().copied());
                    if (s - 1.0).abs() > SUM_TOL {
                        return Err(Error::InvalidInput(format!(
                            "transition row {i} sums to {s}, not 1"
                        )));
                    }
                }
                for j in 0..k {
                    let image = neumaier_sum((0..k).map(|i| stationary[i] * transition[i][j]));
                    if (image - stationary[j]).abs() > STATIONARY_TOL {
                        return Err(Error::InvalidInput(format!(
                            "stationary vector is not invariant at column {j}"
                        )));
                    }
                }
            }
            MeasureModel::Empirical { segment, max_len } => {
                if *max_len == 0 || *max_len > segment.len() {
                    return Err(Error::InvalidInput(
                        "empirical horizon must satisfy 1 <= max_len <= |segment|".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn alphabet_size(&self) -> usize {
        match self {
            MeasureModel::Bernoulli { weights } => weights.len(),
            MeasureModel::Markov { stationary, .. } => stationary.len(),
            MeasureModel::Empirical { segment, .. } => {
                segment.symbols().iter().copied().max().map_or(1, |m| m as usize + 1)
            }
        }
    }

    /// Measure of the word cylinder. Shift-invariant by construction: the
    /// anchor never enters the computation.
    pub fn word_measure(&self, word: &Word) -> Result<f64> {
        if word.is_empty() {
            return Ok(1.0);
        }
        match self {
            MeasureModel::Bernoulli { weights } => {
                let mut p = 1.0;
                for &s in word.symbols() {
                    p *= weights.get(s as usize).copied().unwrap_or(0.0);
                }
                Ok(p)
            }
            MeasureModel::Markov {
                transition,
                stationary,
            } => {
                let syms = word.symbols();
                let k = stationary.len();
                if syms.iter().any(|&s| s as usize >= k) {
                    return Ok(0.0);
                }
                let mut p = stationary[syms[0] as usize];
                for pair in syms.windows(2) {
                    p *= transition[pair[0] as usize][pair[1] as usize];
                }
                Ok(p)
            }
            MeasureModel::Empirical { segment, max_len } => {
                if word.len() > *max_len {
                    return Err(Error::WordTooLong {
                        len: word.len(),
                        max: *max_len,
                    });
                }
                let windows = segment.len() - word.len() + 1;
                let hits = segment
                    .symbols()
                    .windows(word.len())
                    .filter(|w| *w == word.symbols())
                    .count();
                Ok(hits as f64 / windows as f64)
            }
        }
    }

    pub fn cylinder_measure(&self, cylinder: &CylinderSet) -> Result<f64> {
        self.word_measure(&cylinder.word)
    }

    /// Exact per-symbol entropy rate: `H(weights)` for Bernoulli and
    /// `-sum_i pi_i sum_j P_ij ln P_ij` for Markov.
    pub fn entropy_rate(&self) -> Result<f64> {
        match self {
            MeasureModel::Bernoulli { weights } => {
                Ok(-neumaier_sum(weights.iter().map(|&w| xlnx(w))))
            }
            MeasureModel::Markov {
                transition,
                stationary,
            } => Ok(-neumaier_sum(stationary.iter().zip(transition).flat_map(
                |(&pi, row)| row.iter().map(move |&p| pi * xlnx(p)),
            ))),
            MeasureModel::Empirical { .. } => Err(Error::InvalidInput(
                "no closed-form entropy rate for empirical measures".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_products() {
        let m = MeasureModel::bernoulli(vec![0.5, 0.5]).unwrap();
        assert_eq!(m.word_measure(&Word::parse("01").unwrap()).unwrap(), 0.25);
        assert_eq!(m.word_measure(&Word::empty()).unwrap(), 1.0);
        let depth1: f64 = (0..2)
            .map(|s| m.word_measure(&Word::new(vec![s])).unwrap())
            .sum();
        assert!((depth1 - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn empirical_sliding_windows() {
        let m = MeasureModel::empirical(Word::parse("0101").unwrap(), 2).unwrap();
        let p = m.word_measure(&Word::parse("01").unwrap()).unwrap();
        assert!((p - 2.0 / 3.0).abs() < 1e-15);
        assert!(matches!(
            m.word_measure(&Word::parse("010").unwrap()),
            Err(Error::WordTooLong { .. })
        ));
    }

    #[test]
    fn markov_requires_stationarity() {
        // Uniform stationary vector is not invariant for this chain.
        let bad = MeasureModel::markov(
            vec![vec![0.9, 0.1], vec![0.5, 0.5]],
            vec![0.5, 0.5],
        );
        assert!(bad.is_err());
    }
}
