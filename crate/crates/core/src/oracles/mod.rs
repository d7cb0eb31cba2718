//! Brute-force checks of the counting lemmas, and invariants that tell two
//! graphs apart.
//!
//! Every lemma is checked twice: once with the variety in the coordinates the
//! proofs use, and once after a random projectivity. Both runs see the same
//! configurations (mapped through the projectivity where that makes sense),
//! so their observations have to agree as well as match the closed forms.

mod distinguish;
mod plane;
mod space;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::ConstructionError;
use crate::gf::Elem;
use crate::projgeom::linalg::{self, Matrix};
use crate::projgeom::{GeomError, HermitianGeometry, Space};
use crate::switching::SwitchError;

pub use distinguish::{
    distinguish, Certificate, CertificateError, DistinguishOptions, DistinguishReport, Invariant, StepOutcome,
    StepReport,
};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Switch(#[from] SwitchError),
    #[error("lemma {lemma} is not checked at q = {q}")]
    UnsupportedQ { lemma: LemmaId, q: u32 },
    #[error("unknown lemma id {0:?}")]
    UnknownLemma(String),
    #[error("no configuration found: {0}")]
    NoConfiguration(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaId {
    Hermcurve1,
    Hermcurve0,
    #[serde(rename = "hermcurve_minus1")]
    HermcurveMinus1,
    Hermcurve2,
    Hermcurve3,
    Hermcurve4,
    Hermcurve5,
    Hermsur,
    Tanplane,
    Secplane,
    Sets12,
    Char,
    CharNew,
}

impl LemmaId {
    pub const ALL: [LemmaId; 13] = [
        LemmaId::Hermcurve1,
        LemmaId::Hermcurve0,
        LemmaId::HermcurveMinus1,
        LemmaId::Hermcurve2,
        LemmaId::Hermcurve3,
        LemmaId::Hermcurve4,
        LemmaId::Hermcurve5,
        LemmaId::Hermsur,
        LemmaId::Tanplane,
        LemmaId::Secplane,
        LemmaId::Sets12,
        LemmaId::Char,
        LemmaId::CharNew,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::Hermcurve1 => "hermcurve1",
            LemmaId::Hermcurve0 => "hermcurve0",
            LemmaId::HermcurveMinus1 => "hermcurve_minus1",
            LemmaId::Hermcurve2 => "hermcurve2",
            LemmaId::Hermcurve3 => "hermcurve3",
            LemmaId::Hermcurve4 => "hermcurve4",
            LemmaId::Hermcurve5 => "hermcurve5",
            LemmaId::Hermsur => "hermsur",
            LemmaId::Tanplane => "tanplane",
            LemmaId::Secplane => "secplane",
            LemmaId::Sets12 => "sets12",
            LemmaId::Char => "char",
            LemmaId::CharNew => "char_new",
        }
    }

    /// Projective dimension the lemma lives in.
    pub fn dimension(self) -> usize {
        match self {
            LemmaId::Hermsur => 3,
            LemmaId::Tanplane | LemmaId::Secplane | LemmaId::Sets12 | LemmaId::Char | LemmaId::CharNew => 4,
            _ => 2,
        }
    }

    pub fn supported_q(self) -> &'static [u32] {
        if self.dimension() == 2 {
            &[2, 3, 4, 5]
        } else {
            &[2, 3]
        }
    }

    /// Configurations per frame when no budget is given.
    pub fn default_budget(self) -> usize {
        match self {
            LemmaId::Hermcurve1 | LemmaId::HermcurveMinus1 => 2000,
            LemmaId::Hermcurve0 | LemmaId::Hermcurve2 | LemmaId::Hermcurve3 => 1000,
            LemmaId::Hermcurve4 | LemmaId::Hermcurve5 | LemmaId::Sets12 => usize::MAX,
            LemmaId::Hermsur => 400,
            LemmaId::Tanplane | LemmaId::Secplane => 4,
            LemmaId::Char => 100,
            LemmaId::CharNew => 40,
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LemmaId {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<LemmaId, OracleError> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        LemmaId::ALL.into_iter().find(|id| id.name() == key).ok_or_else(|| OracleError::UnknownLemma(s.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// configurations per frame; `None` uses the lemma's default
    pub sample_budget: Option<usize>,
    pub seed: u64,
    pub deadline: Option<Instant>,
}

impl Default for VerifyOptions {
    fn default() -> VerifyOptions {
        VerifyOptions { sample_budget: None, seed: 1, deadline: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameKind {
    /// the fixed coordinates the constructions are written in
    Standard,
    /// image of those under a seeded random projectivity
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaStatus {
    Pass,
    Fail,
    /// stopped by the deadline before every configuration was looked at
    Partial,
}

/// Observations of one quantity over all configurations of a frame.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case: String,
    pub expected: u64,
    pub configurations: u64,
    /// observed value -> number of configurations
    pub observed: BTreeMap<u64, u64>,
    /// first configuration whose value differed from `expected`
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<Vec<u32>>,
}

impl CaseReport {
    pub fn pass(&self) -> bool {
        self.observed.keys().all(|&v| v == self.expected)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameReport {
    pub frame: FrameKind,
    /// configurations available
    pub enumerated: u64,
    /// configurations looked at
    pub configurations: u64,
    /// whether `configurations` is a seeded sample of `enumerated`
    pub sampled: bool,
    pub cases: Vec<CaseReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: LemmaId,
    pub q: u32,
    pub seed: u64,
    pub sample_budget: usize,
    pub status: LemmaStatus,
    pub pass: bool,
    /// the two frames made the same observations
    pub frames_agree: bool,
    pub frames: Vec<FrameReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl LemmaReport {
    /// Copy without the wall-clock field, for byte-stable output.
    pub fn without_timing(&self) -> LemmaReport {
        LemmaReport { runtime_ms: None, ..self.clone() }
    }

    /// Observed values of a case in a frame.
    pub fn observed(&self, frame: FrameKind, case: &str) -> Option<&BTreeMap<u64, u64>> {
        self.frames.iter().find(|f| f.frame == frame)?.cases.iter().find(|c| c.case == case).map(|c| &c.observed)
    }
}

/// Checks one lemma by exhaustive counting over sampled configurations.
pub fn verify_lemma(id: LemmaId, q: u32, opts: &VerifyOptions) -> Result<LemmaReport, OracleError> {
    if !id.supported_q().contains(&q) {
        return Err(OracleError::UnsupportedQ { lemma: id, q });
    }
    let start = Instant::now();
    let budget = opts.sample_budget.unwrap_or_else(|| id.default_budget()).max(1);
    let mut run = Run {
        q,
        budget,
        deadline: opts.deadline,
        rng: ChaCha8Rng::seed_from_u64(opts.seed),
        stopped: AtomicBool::new(false),
        notes: Vec::new(),
    };
    let outcome = match id {
        LemmaId::Hermcurve1 => plane::hermcurve1(&mut run)?,
        LemmaId::Hermcurve0 => plane::hermcurve0(&mut run)?,
        LemmaId::HermcurveMinus1 => plane::hermcurve_minus1(&mut run)?,
        LemmaId::Hermcurve2 => plane::hermcurve2(&mut run)?,
        LemmaId::Hermcurve3 => plane::hermcurve3(&mut run)?,
        LemmaId::Hermcurve4 => plane::hermcurve4(&mut run)?,
        LemmaId::Hermcurve5 => plane::hermcurve5(&mut run)?,
        LemmaId::Hermsur => space::hermsur(&mut run)?,
        LemmaId::Tanplane => space::tanplane(&mut run)?,
        LemmaId::Secplane => space::secplane(&mut run)?,
        LemmaId::Sets12 => space::sets12(&mut run)?,
        LemmaId::Char => space::char_values(&mut run)?,
        LemmaId::CharNew => space::char_new(&mut run)?,
    };
    let frames_agree = outcome.agree();
    let stopped = run.stopped.load(Ordering::Relaxed);
    let mismatch = outcome.frames.iter().any(|f| !f.cases.iter().all(CaseReport::pass));
    let complete = outcome.frames.iter().all(|f| f.configurations > 0 && !f.cases.is_empty());
    // a deadline can stop the frames at different points, so disagreement
    // only counts once every frame has data
    let status = if mismatch || (complete && !frames_agree) {
        LemmaStatus::Fail
    } else if stopped {
        LemmaStatus::Partial
    } else if complete {
        LemmaStatus::Pass
    } else {
        LemmaStatus::Fail
    };
    Ok(LemmaReport {
        lemma: id,
        q,
        seed: opts.seed,
        sample_budget: budget,
        status,
        pass: status == LemmaStatus::Pass,
        frames_agree,
        frames: outcome.frames,
        notes: run.notes,
        runtime_ms: Some(start.elapsed().as_millis() as u64),
    })
}

/// One observed quantity for one configuration.
pub(crate) struct Obs {
    pub case: &'static str,
    pub expected: u64,
    pub observed: u64,
}

pub(crate) fn obs(case: &'static str, expected: u64, observed: impl TryInto<u64>) -> Obs {
    Obs { case, expected, observed: observed.try_into().unwrap_or(u64::MAX) }
}

pub(crate) fn flag(case: &'static str, ok: bool) -> Obs {
    Obs { case, expected: 1, observed: ok as u64 }
}

/// Per-lemma state: budget, randomness, deadline.
pub(crate) struct Run {
    pub q: u32,
    pub budget: usize,
    deadline: Option<Instant>,
    pub rng: ChaCha8Rng,
    stopped: AtomicBool,
    pub notes: Vec<String>,
}

impl Run {
    pub fn qq(&self) -> u64 {
        self.q as u64
    }

    pub fn expired(&self) -> bool {
        if self.deadline.is_some_and(|d| Instant::now() > d) {
            self.stopped.store(true, Ordering::Relaxed);
            return true;
        }
        false
    }

    /// At most `budget` items, a seeded sample in original order when there
    /// are more.
    pub fn choose<T>(&mut self, items: Vec<T>) -> Selection<T> {
        let enumerated = items.len() as u64;
        if items.len() <= self.budget {
            return Selection { items, enumerated, sampled: false };
        }
        let mut picks = rand::seq::index::sample(&mut self.rng, items.len(), self.budget).into_vec();
        picks.sort_unstable();
        let mut keep = vec![false; items.len()];
        for i in picks {
            keep[i] = true;
        }
        let items = items.into_iter().zip(keep).filter(|(_, k)| *k).map(|(x, _)| x).collect();
        Selection { items, enumerated, sampled: true }
    }

    /// Runs `observe` on every configuration in parallel, in order.
    pub fn evaluate(
        &self,
        frame: FrameKind,
        sel: &Selection<Vec<u32>>,
        observe: impl Fn(&[u32]) -> Result<Vec<Obs>, OracleError> + Sync,
    ) -> Result<(FrameReport, Trace), OracleError> {
        let results: Vec<Option<Result<Vec<Obs>, OracleError>>> = sel
            .items
            .par_iter()
            .map(|c| if self.expired() { None } else { Some(observe(c)) })
            .collect();
        let mut acc = Accumulator::default();
        let mut trace = Vec::with_capacity(results.len());
        for (config, r) in sel.items.iter().zip(results) {
            let Some(r) = r else { continue };
            let list = r?;
            trace.push(list.iter().map(|o| (o.case, o.observed)).collect());
            acc.add(config, &list);
        }
        Ok((acc.finish(frame, sel.enumerated, trace.len() as u64, sel.sampled), trace))
    }
}

pub(crate) struct Selection<T> {
    pub items: Vec<T>,
    pub enumerated: u64,
    pub sampled: bool,
}

/// Per configuration, the (case, observed) pairs in order.
pub(crate) type Trace = Vec<Vec<(&'static str, u64)>>;

#[derive(Default)]
pub(crate) struct Accumulator {
    cases: BTreeMap<&'static str, CaseReport>,
}

impl Accumulator {
    pub fn add(&mut self, config: &[u32], list: &[Obs]) {
        for o in list {
            let c = self.cases.entry(o.case).or_insert_with(|| CaseReport {
                case: o.case.to_string(),
                expected: o.expected,
                configurations: 0,
                observed: BTreeMap::new(),
                first_mismatch: None,
            });
            c.configurations += 1;
            *c.observed.entry(o.observed).or_insert(0) += 1;
            if (o.observed != o.expected || o.expected != c.expected) && c.first_mismatch.is_none() {
                c.first_mismatch = Some(config.to_vec());
                // a case whose closed form changed between configurations
                // is a bug in the oracle; make it fail visibly
                if o.expected != c.expected {
                    c.observed.insert(u64::MAX, 1);
                }
            }
        }
    }

    pub fn finish(self, frame: FrameKind, enumerated: u64, configurations: u64, sampled: bool) -> FrameReport {
        FrameReport { frame, enumerated, configurations, sampled, cases: self.cases.into_values().collect() }
    }
}

pub(crate) struct Outcome {
    pub frames: Vec<FrameReport>,
    pub traces: Vec<Trace>,
    /// both frames looked at the same configurations in the same order
    pub shared: bool,
}

impl Outcome {
    fn agree(&self) -> bool {
        if self.frames.len() < 2 {
            return true;
        }
        if self.shared {
            return self.traces.windows(2).all(|w| w[0] == w[1]);
        }
        let values = |f: &FrameReport| -> BTreeMap<String, BTreeSet<u64>> {
            f.cases.iter().map(|c| (c.case.clone(), c.observed.keys().copied().collect())).collect()
        };
        self.frames.windows(2).all(|w| values(&w[0]) == values(&w[1]))
    }
}

/// A variety together with the projectivity `x -> x M` that carries the
/// proof coordinates into it.
pub(crate) struct Frame {
    pub kind: FrameKind,
    pub h: HermitianGeometry,
    map: Vec<u32>,
    m_inv: Matrix,
}

impl Frame {
    pub fn standard(space: Arc<Space>, gram: Option<Matrix>) -> Result<Frame, OracleError> {
        let np = space.num_points() as u32;
        let d = space.dim();
        let h = HermitianGeometry::new(space, gram)?;
        Ok(Frame { kind: FrameKind::Standard, h, map: (0..np).collect(), m_inv: linalg::identity(d) })
    }

    pub fn random(standard: &Frame, rng: &mut ChaCha8Rng) -> Result<Frame, OracleError> {
        let space = standard.h.space_arc();
        let f = space.field();
        let d = space.dim();
        let order = f.order();
        let (m, m_inv) = loop {
            let m: Matrix =
                (0..d).map(|_| (0..d).map(|_| Elem(rng.random_range(0..order) as u8)).collect()).collect();
            if let Some(inv) = linalg::invert(f, &m) {
                break (m, inv);
            }
        };
        let map = (0..space.num_points())
            .map(|p| {
                let x = space.point(p);
                let y: Vec<Elem> =
                    (0..d).map(|j| (0..d).fold(Elem::ZERO, |acc, i| f.add(acc, f.mul(x[i], m[i][j])))).collect();
                space.index_of(&y).expect("invertible map") as u32
            })
            .collect();
        let mut frame = Frame { kind: FrameKind::Random, h: HermitianGeometry::new(Arc::clone(&space), None)?, map, m_inv };
        let gram = frame.transform_gram(standard.h.gram());
        frame.h = HermitianGeometry::new(space, Some(gram))?;
        Ok(frame)
    }

    /// Gram matrix of the image of the form with Gram matrix `g`:
    /// `M^-1 g conj(M^-1)^T`.
    pub fn transform_gram(&self, g: &Matrix) -> Matrix {
        let f = self.h.field();
        let right = linalg::transpose(&linalg::conj_matrix(f, &self.m_inv));
        linalg::mat_mul(f, &linalg::mat_mul(f, &self.m_inv, g), &right)
    }

    /// The image of another variety given in proof coordinates.
    pub fn image_of(&self, g: &Matrix) -> Result<HermitianGeometry, OracleError> {
        Ok(HermitianGeometry::new(self.h.space_arc(), Some(self.transform_gram(g)))?)
    }

    #[inline]
    pub fn pt(&self, p: u32) -> usize {
        self.map[p as usize] as usize
    }

    pub fn pts(&self, ps: &[u32]) -> Vec<usize> {
        ps.iter().map(|&p| self.pt(p)).collect()
    }

    pub fn space(&self) -> &Space {
        self.h.space()
    }
}

/// The standard frame and one random frame over a shared space.
pub(crate) fn frame_pair(run: &mut Run, n: usize, gram: Option<Matrix>) -> Result<[Frame; 2], OracleError> {
    let space = Arc::new(Space::new(n, run.q)?);
    let standard = Frame::standard(space, gram)?;
    let random = Frame::random(&standard, &mut run.rng)?;
    Ok([standard, random])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in LemmaId::ALL {
            assert_eq!(id.name().parse::<LemmaId>().unwrap(), id);
            assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{}\"", id.name()));
        }
        assert!("hermcurve9".parse::<LemmaId>().is_err());
    }

    #[test]
    fn random_frame_preserves_the_variety() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let space = Arc::new(Space::new(2, 3).unwrap());
        let standard = Frame::standard(space, None).unwrap();
        let random = Frame::random(&standard, &mut rng).unwrap();
        for p in 0..standard.space().num_points() as u32 {
            assert_eq!(standard.h.is_absolute(p as usize), random.h.is_absolute(random.pt(p)));
        }
    }

    #[test]
    fn unsupported_order_is_refused() {
        let e = verify_lemma(LemmaId::Tanplane, 4, &VerifyOptions::default()).unwrap_err();
        assert!(matches!(e, OracleError::UnsupportedQ { q: 4, .. }));
    }
}
