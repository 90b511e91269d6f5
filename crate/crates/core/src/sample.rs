use crate::error::{Error, Result};

/// An ordered collection of finite observations.
///
/// Order is preserved as given; every routine that needs sorted data sorts a copy.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    values: Vec<f64>,
}

impl SampleSet {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Every observation multiplied by −1 (turns a maximization problem into minimization).
    pub fn negated(&self) -> Self {
        Self { values: self.values.iter().map(|v| -v).collect() }
    }

    pub(crate) fn sorted(&self) -> Vec<f64> {
        // Adding +0.0 folds −0.0 into +0.0 so total ordering agrees with `==`.
        let mut v: Vec<f64> = self.values.iter().map(|x| x + 0.0).collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

impl TryFrom<Vec<f64>> for SampleSet {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl TryFrom<&[f64]> for SampleSet {
    type Error = Error;

    fn try_from(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec())
    }
}

pub(crate) fn check_equal_sizes(a: &SampleSet, b: &SampleSet) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch { a: a.len(), b: b.len() });
    }
    Ok(a.len())
}

/// A run of equal pooled values with its multiplicity in each sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Block {
    pub value: f64,
    pub m_a: usize,
    pub m_b: usize,
}

impl Block {
    pub fn size(&self) -> usize {
        self.m_a + self.m_b
    }
}

/// Merges two ascending runs of `(value, count)` into tie blocks in pooled rank order.
/// Zero counts are skipped; repeated values within one side are combined.
pub(crate) fn merge_runs(a: &[(f64, usize)], b: &[(f64, usize)]) -> Vec<Block> {
    let mut out: Vec<Block> = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut push = |value: f64, m_a: usize, m_b: usize| {
        if m_a + m_b == 0 {
            return;
        }
        match out.last_mut() {
            Some(last) if last.value == value => {
                last.m_a += m_a;
                last.m_b += m_b;
            }
            _ => out.push(Block { value, m_a, m_b }),
        }
    };
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 <= b[j].0);
        if take_a {
            push(a[i].0, a[i].1, 0);
            i += 1;
        } else {
            push(b[j].0, 0, b[j].1);
            j += 1;
        }
    }
    out
}

/// Tie blocks of two sorted samples.
pub(crate) fn pooled_blocks(a_sorted: &[f64], b_sorted: &[f64]) -> Vec<Block> {
    let runs = |v: &[f64]| v.iter().map(|&x| (x, 1)).collect::<Vec<_>>();
    merge_runs(&runs(a_sorted), &runs(b_sorted))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert_eq!(SampleSet::new(vec![]), Err(Error::EmptySample));
        assert_eq!(SampleSet::new(vec![1.0, f64::NAN]), Err(Error::NonFinite { index: 1 }));
        assert_eq!(SampleSet::new(vec![f64::INFINITY]), Err(Error::NonFinite { index: 0 }));
    }

    #[test]
    fn keeps_order() {
        let s = SampleSet::new(vec![3.0, 1.0, 2.0]).unwrap();
        assert_eq!(s.values(), &[3.0, 1.0, 2.0]);
        assert_eq!(s.sorted(), vec![1.0, 2.0, 3.0]);
        assert_eq!(s.negated().values(), &[-3.0, -1.0, -2.0]);
    }

    #[test]
    fn blocks_group_ties_across_samples() {
        let blocks = pooled_blocks(&[1.0, 1.0, 2.0], &[0.5, 1.0, 3.0]);
        let shape: Vec<(f64, usize, usize)> = blocks.iter().map(|b| (b.value, b.m_a, b.m_b)).collect();
        assert_eq!(shape, vec![(0.5, 0, 1), (1.0, 2, 1), (2.0, 1, 0), (3.0, 0, 1)]);
    }

    #[test]
    fn negative_zero_ties_with_zero() {
        let a = SampleSet::new(vec![0.0, -0.0]).unwrap().sorted();
        let b = SampleSet::new(vec![-0.0, 1.0]).unwrap().sorted();
        let blocks = pooled_blocks(&a, &b);
        assert_eq!((blocks[0].m_a, blocks[0].m_b), (2, 1));
    }
}
