//! Filtered vector spaces.
//!
//! A filtration is stored on a finite index window `lo..=hi`. Outside the
//! window it saturates: on the "big" side it equals the outermost step, on the
//! "small" side it equals an explicit `floor` subspace (zero by default).
//! For an increasing filtration the small side is `n < lo`; for a decreasing
//! one it is `n > hi`.

use serde::{Deserialize, Serialize};

use crate::exact::{ExactError, Matrix, Quotient, Scalar, Subspace, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "inc")]
    Increasing,
    #[serde(rename = "dec")]
    Decreasing,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, thiserror::Error)]
pub enum FiltrationError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("filtration is not nested at index {index}")]
    NotNested { index: i64 },
    #[error("filtration is not exhaustive: step {index} is not the whole space")]
    NotExhaustive { index: i64 },
    #[error("filtration has no steps")]
    Empty,
    #[error("filtration directions differ")]
    DirectionMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FilteredSpace {
    ambient: usize,
    direction: Direction,
    lo: i64,
    steps: Vec<Subspace>,
    floor: Subspace,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationReport {
    pub exhaustive: bool,
    pub hausdorff: bool,
    pub bounds: (i64, i64),
    /// An index whose step is not the whole space, when not exhaustive.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhaustive_witness: Option<i64>,
    /// An index beyond the window whose step is still nonzero.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hausdorff_witness: Option<i64>,
}

/// One graded piece with its quotient realization.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub index: i64,
    pub quotient: Quotient,
}

impl GradedPiece {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }
}

impl FilteredSpace {
    /// Steps for indices `lo, lo+1, …`; the floor defaults to zero.
    pub fn new(ambient: usize, direction: Direction, lo: i64, steps: Vec<Subspace>) -> Result<Self, FiltrationError> {
        Self::with_floor(ambient, direction, lo, steps, Subspace::zero(ambient))
    }

    pub fn with_floor(
        ambient: usize,
        direction: Direction,
        lo: i64,
        steps: Vec<Subspace>,
        floor: Subspace,
    ) -> Result<Self, FiltrationError> {
        if steps.is_empty() {
            return Err(FiltrationError::Empty);
        }
        for s in steps.iter().chain([&floor]) {
            if s.ambient() != ambient {
                return Err(ExactError::DimensionMismatch { expected: ambient, found: s.ambient() }.into());
            }
        }
        let f = Self { ambient, direction, lo, steps, floor };
        f.check_nested()?;
        Ok(f)
    }

    /// Builds from possibly sparse `(index, step)` pairs. Between given
    /// indices the step of the nearest given index on the small side is used.
    pub fn from_sparse(
        ambient: usize,
        direction: Direction,
        mut given: Vec<(i64, Subspace)>,
        floor: Subspace,
    ) -> Result<Self, FiltrationError> {
        if given.is_empty() {
            return Err(FiltrationError::Empty);
        }
        given.sort_by_key(|(n, _)| *n);
        for w in given.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(FiltrationError::NotNested { index: w[0].0 });
            }
        }
        let lo = given[0].0;
        let hi = given[given.len() - 1].0;
        let steps = (lo..=hi)
            .map(|n| match direction {
                Direction::Increasing => given.iter().rev().find(|(k, _)| *k <= n).unwrap().1.clone(),
                Direction::Decreasing => given.iter().find(|(k, _)| *k >= n).unwrap().1.clone(),
            })
            .collect();
        Self::with_floor(ambient, direction, lo, steps, floor)
    }

    /// Evaluates `f` on `lo..=hi`.
    pub fn from_fn<F>(
        ambient: usize,
        direction: Direction,
        lo: i64,
        hi: i64,
        floor: Subspace,
        f: F,
    ) -> Result<Self, FiltrationError>
    where
        F: FnMut(i64) -> Subspace,
    {
        let steps = (lo..=hi).map(f).collect();
        Self::with_floor(ambient, direction, lo, steps, floor)
    }

    /// The trivial filtration: `V` from index `index` on (toward the big side), zero beyond.
    pub fn trivial(ambient: usize, direction: Direction, index: i64) -> Self {
        Self::new(ambient, direction, index, vec![Subspace::full(ambient)]).unwrap()
    }

    fn check_nested(&self) -> Result<(), FiltrationError> {
        let (lo, hi) = self.bounds();
        for n in lo - 1..=hi {
            let (small, big) = match self.direction {
                Direction::Increasing => (self.at(n), self.at(n + 1)),
                Direction::Decreasing => (self.at(n + 1), self.at(n)),
            };
            if !big.contains_subspace(small) {
                return Err(FiltrationError::NotNested { index: n });
            }
        }
        Ok(())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn bounds(&self) -> (i64, i64) {
        (self.lo, self.lo + self.steps.len() as i64 - 1)
    }

    pub fn floor(&self) -> &Subspace {
        &self.floor
    }

    pub fn at(&self, n: i64) -> &Subspace {
        let (lo, hi) = self.bounds();
        match self.direction {
            Direction::Increasing if n < lo => &self.floor,
            Direction::Increasing if n > hi => &self.steps[self.steps.len() - 1],
            Direction::Decreasing if n > hi => &self.floor,
            Direction::Decreasing if n < lo => &self.steps[0],
            _ => &self.steps[(n - lo) as usize],
        }
    }

    /// The step on the big side, which equals `V` iff exhaustive.
    pub fn top(&self) -> &Subspace {
        match self.direction {
            Direction::Increasing => &self.steps[self.steps.len() - 1],
            Direction::Decreasing => &self.steps[0],
        }
    }

    pub fn is_exhaustive(&self) -> bool {
        self.top().is_full()
    }

    pub fn is_hausdorff(&self) -> bool {
        self.floor.is_zero()
    }

    pub fn checks(&self) -> FiltrationReport {
        let (lo, hi) = self.bounds();
        let exhaustive = self.is_exhaustive();
        let hausdorff = self.is_hausdorff();
        let (big, small) = match self.direction {
            Direction::Increasing => (hi, lo - 1),
            Direction::Decreasing => (lo, hi + 1),
        };
        FiltrationReport {
            exhaustive,
            hausdorff,
            bounds: (lo, hi),
            exhaustive_witness: (!exhaustive).then_some(big),
            hausdorff_witness: (!hausdorff).then_some(small),
        }
    }

    pub fn require_exhaustive(&self) -> Result<(), FiltrationError> {
        match self.checks().exhaustive_witness {
            Some(index) => Err(FiltrationError::NotExhaustive { index }),
            None => Ok(()),
        }
    }

    /// `gr_n = F_n / F_{n−1}` (increasing) or `gr^n = F^n / F^{n+1}`
    /// (decreasing) for each `n` in the window.
    pub fn graded_pieces(&self) -> Vec<GradedPiece> {
        let (lo, hi) = self.bounds();
        (lo..=hi)
            .map(|n| {
                let (big, small) = match self.direction {
                    Direction::Increasing => (self.at(n), self.at(n - 1)),
                    Direction::Decreasing => (self.at(n), self.at(n + 1)),
                };
                GradedPiece { index: n, quotient: Quotient::new(big, small).expect("filtration is nested") }
            })
            .collect()
    }

    pub fn graded_dims(&self) -> Vec<(i64, usize)> {
        self.graded_pieces().iter().map(|g| (g.index, g.dim())).collect()
    }

    pub fn conj(&self) -> Self {
        self.map_steps(self.ambient, Subspace::conj)
    }

    fn map_steps<F: Fn(&Subspace) -> Subspace>(&self, ambient: usize, f: F) -> Self {
        Self {
            ambient,
            direction: self.direction,
            lo: self.lo,
            steps: self.steps.iter().map(&f).collect(),
            floor: f(&self.floor),
        }
    }

    /// Re-indexes so that the new step `n` is the old step `n + s`.
    pub fn shift(&self, s: i64) -> Self {
        Self { lo: self.lo - s, ..self.clone() }
    }

    /// Drops redundant steps at both ends of the window.
    pub fn trimmed(&self) -> Self {
        let mut steps = self.steps.clone();
        let mut lo = self.lo;
        // increasing: the small side is the front of the window; decreasing: the back
        let small_end_first = self.direction == Direction::Decreasing;
        let floor = self.floor.clone();
        loop {
            let changed = if small_end_first {
                steps.len() > 1 && steps[steps.len() - 1] == floor && {
                    steps.pop();
                    true
                }
            } else {
                steps.len() > 1 && steps[0] == floor && {
                    steps.remove(0);
                    lo += 1;
                    true
                }
            };
            if !changed {
                break;
            }
        }
        loop {
            let changed = if small_end_first {
                steps.len() > 1 && steps[0] == steps[1] && {
                    steps.remove(0);
                    lo += 1;
                    true
                }
            } else {
                let k = steps.len();
                k > 1 && steps[k - 1] == steps[k - 2] && {
                    steps.pop();
                    true
                }
            };
            if !changed {
                break;
            }
        }
        Self { ambient: self.ambient, direction: self.direction, lo, steps, floor }
    }

    /// Index-negated increasing view of a filtration: `G_k = F_k` for an
    /// increasing filtration and `G_k = F^{−k}` for a decreasing one.
    fn as_increasing(&self) -> Self {
        match self.direction {
            Direction::Increasing => self.clone(),
            Direction::Decreasing => {
                let (lo, hi) = self.bounds();
                let steps = (-hi..=-lo).map(|k| self.at(-k).clone()).collect();
                Self { ambient: self.ambient, direction: Direction::Increasing, lo: -hi, steps, floor: self.floor.clone() }
            }
        }
    }

    fn from_increasing(g: Self, direction: Direction) -> Self {
        match direction {
            Direction::Increasing => g,
            Direction::Decreasing => {
                let (lo, hi) = g.bounds();
                let steps = (-hi..=-lo).map(|n| g.at(-n).clone()).collect();
                Self { ambient: g.ambient, direction, lo: -hi, steps, floor: g.floor }
            }
        }
    }

    /// Convolution filtration on `V ⊗ U` (basis index `i * dim U + j`).
    pub fn tensor(&self, o: &FilteredSpace) -> Result<Self, FiltrationError> {
        if self.direction != o.direction {
            return Err(FiltrationError::DirectionMismatch);
        }
        let (a, b) = (self.as_increasing(), o.as_increasing());
        let (lo1, hi1) = a.bounds();
        let (lo2, hi2) = b.bounds();
        let amb = self.ambient * o.ambient;
        let floor = a.floor.tensor(&Subspace::full(o.ambient)).sum(&Subspace::full(self.ambient).tensor(&b.floor))?;
        let floor = floor.intersect(&a.top().tensor(b.top()))?;
        let g = Self::from_fn(amb, Direction::Increasing, lo1 + lo2 - 1, hi1 + hi2, floor, |n| {
            let mut acc = Subspace::zero(amb);
            for k in (lo1 - 1).min(n - hi2)..=hi1.max(n - lo2 + 1) {
                acc = acc.sum(&a.at(k).tensor(b.at(n - k))).unwrap();
            }
            acc
        })?;
        Ok(Self::from_increasing(g, self.direction).trimmed())
    }

    /// Dual filtration on `V^∨` via the bilinear pairing of coordinates:
    /// `W_k(V^∨) = ann W_{−k−1}` and `F^p(V^∨) = ann F^{1−p}`.
    pub fn dual(&self) -> Self {
        let g = self.as_increasing();
        let (lo, hi) = g.bounds();
        let floor = g.top().annihilator();
        let d = Self::from_fn(self.ambient, Direction::Increasing, -hi - 1, -lo, floor, |k| {
            g.at(-k - 1).annihilator()
        })
        .expect("annihilators of a nested filtration are nested");
        // for decreasing F the same formula applies to G_k = F^{−k}
        Self::from_increasing(d, self.direction).trimmed()
    }

    pub fn direct_sum(&self, o: &FilteredSpace) -> Result<Self, FiltrationError> {
        if self.direction != o.direction {
            return Err(FiltrationError::DirectionMismatch);
        }
        let (a, b) = (self.as_increasing(), o.as_increasing());
        let (lo1, hi1) = a.bounds();
        let (lo2, hi2) = b.bounds();
        let g = Self::from_fn(
            self.ambient + o.ambient,
            Direction::Increasing,
            lo1.min(lo2),
            hi1.max(hi2),
            a.floor.direct_sum(&b.floor),
            |n| a.at(n).direct_sum(b.at(n)),
        )?;
        Ok(Self::from_increasing(g, self.direction).trimmed())
    }

    /// Induced filtration `F ∩ S` on a subspace, in the echelon coordinates of `S`.
    pub fn restrict(&self, s: &Subspace) -> Result<Self, FiltrationError> {
        let to_coords = |x: &Subspace| -> Subspace {
            let inter = x.intersect(s).unwrap();
            Subspace::span(s.dim(), inter.basis().iter().map(|v| s.coords(v).unwrap())).unwrap()
        };
        if s.ambient() != self.ambient {
            return Err(ExactError::DimensionMismatch { expected: self.ambient, found: s.ambient() }.into());
        }
        Ok(self.map_steps(s.dim(), to_coords))
    }

    /// Induced filtration `(F ∩ sub + by) / by` on a quotient, in quotient coordinates.
    pub fn on_quotient(&self, q: &Quotient) -> Result<Self, FiltrationError> {
        if q.sub().ambient() != self.ambient {
            return Err(ExactError::DimensionMismatch { expected: self.ambient, found: q.sub().ambient() }.into());
        }
        Ok(self.map_steps(q.dim(), |x| q.project_subspace(&x.intersect(q.sub()).unwrap()).unwrap()))
    }

    /// Image filtration under an injective (or arbitrary) linear map.
    pub fn image(&self, m: &Matrix) -> Result<Self, FiltrationError> {
        if m.cols() != self.ambient {
            return Err(ExactError::DimensionMismatch { expected: self.ambient, found: m.cols() }.into());
        }
        Ok(self.map_steps(m.rows(), |x| x.image(m).unwrap()))
    }

    pub fn to_block(&self) -> FiltrationBlock {
        let (lo, hi) = self.bounds();
        FiltrationBlock {
            direction: self.direction,
            steps: (lo..=hi).map(|n| StepBlock { index: n, basis: self.at(n).basis().to_vec() }).collect(),
            floor: (!self.floor.is_zero()).then(|| self.floor.basis().to_vec()),
        }
    }

    pub fn from_block(ambient: usize, b: &FiltrationBlock) -> Result<Self, FiltrationError> {
        let given = b
            .steps
            .iter()
            .map(|s| Ok((s.index, Subspace::span(ambient, s.basis.clone())?)))
            .collect::<Result<Vec<_>, ExactError>>()?;
        let floor = match &b.floor {
            Some(f) => Subspace::span(ambient, f.clone())?,
            None => Subspace::zero(ambient),
        };
        Self::from_sparse(ambient, b.direction, given, floor)
    }
}

/// File representation of a filtration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationBlock {
    pub direction: Direction,
    pub steps: Vec<StepBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub floor: Option<Vec<Vector>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepBlock {
    pub index: i64,
    pub basis: Vec<Vector>,
}

/// Convenience: span of integer vectors.
pub fn span_i64(ambient: usize, vs: &[&[i64]]) -> Subspace {
    Subspace::span(ambient, vs.iter().map(|v| v.iter().map(|&x| Scalar::int(x)).collect::<Vector>())).unwrap()
}
