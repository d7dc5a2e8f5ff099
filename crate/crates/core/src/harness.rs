//! Monte Carlo campaigns and parameter sweeps.
//!
//! All runs are parallel over record index with rayon and collected back in
//! index order, so the output bytes never depend on the worker count.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Qubit;
use crate::measures::{
    bad_closed_forms, bpd_closed_forms, correlation_matrix, werner_concurrence_ceiling,
    wu_closed_forms, wu_steerability_from_c_purity, MeasureReport, REALIZABILITY_TOL,
};
use crate::qstate::{
    apply_channel, bell_like, density_from_pure, random_state_with_rank, random_unitary,
    werner_like, DensityMatrix, KrausChannel, SamplerConfig,
};

/// Slack applied before a bound counts as violated.
pub const BOUND_SLACK: f64 = 1e-9;
/// Sweep records with a larger discrepancy fail.
pub const SWEEP_TOL: f64 = 1e-8;
/// Grid margin keeping θ away from the product states at 0 and π/2.
pub const THETA_MARGIN: f64 = 0.05;

/// Run `f` on a dedicated pool of `workers` threads (0 = rayon default).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
        .install(f)
}

fn write_row(out: &mut impl Write, fields: &[String]) -> io::Result<()> {
    writeln!(out, "{}", fields.join(","))
}

fn num(x: f64) -> String {
    // Display for f64 is the shortest string that round-trips.
    format!("{x}")
}

// ---------------------------------------------------------------------------
// Scatter

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: u64,
    pub rank_k: u8,
    pub purity: f64,
    pub concurrence: f64,
    pub f_value: f64,
    pub steerability: f64,
    pub q_value: f64,
    pub coherence_a: f64,
    pub coherence_b: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub violation_lower: bool,
    pub violation_upper: bool,
}

impl SampleRecord {
    pub fn from_report(index: u64, rank_k: u8, r: &MeasureReport) -> Self {
        Self {
            index,
            rank_k,
            purity: r.purity,
            concurrence: r.concurrence,
            f_value: r.f_value,
            steerability: r.steerability,
            q_value: r.q_value,
            coherence_a: r.coherence_a,
            coherence_b: r.coherence_b,
            lower_bound: r.lower_bound,
            upper_bound: r.upper_bound,
            violation_lower: r.steerability < r.lower_bound - BOUND_SLACK,
            violation_upper: r.steerability > r.upper_bound + BOUND_SLACK,
        }
    }

    pub const CSV_HEADER: &'static str =
        "index,rank_k,purity,C,F,S,Q,D_A,D_B,lower_bound,upper_bound,violation_lower,violation_upper";

    pub fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        write_row(
            out,
            &[
                self.index.to_string(),
                self.rank_k.to_string(),
                num(self.purity),
                num(self.concurrence),
                num(self.f_value),
                num(self.steerability),
                num(self.q_value),
                num(self.coherence_a),
                num(self.coherence_b),
                num(self.lower_bound),
                num(self.upper_bound),
                self.violation_lower.to_string(),
                self.violation_upper.to_string(),
            ],
        )
    }
}

/// One record for draw `index`.
pub fn sample_record(cfg: &SamplerConfig, index: u64) -> Result<SampleRecord> {
    let s = random_state_with_rank(cfg, index)?;
    Ok(SampleRecord::from_report(
        index,
        s.rank,
        &MeasureReport::new(&s.rho),
    ))
}

/// Lazy, sequential record stream.
pub fn scatter_stream(cfg: &SamplerConfig) -> impl Iterator<Item = Result<SampleRecord>> + '_ {
    (0..cfg.count).map(move |i| sample_record(cfg, i))
}

/// All `cfg.count` records in index order.
pub fn run_scatter(cfg: &SamplerConfig) -> Result<Vec<SampleRecord>> {
    cfg.validate()?;
    (0..cfg.count)
        .into_par_iter()
        .map(|i| sample_record(cfg, i))
        .collect()
}

pub fn write_scatter_csv(records: &[SampleRecord], out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "{}", SampleRecord::CSV_HEADER)?;
    records.iter().try_for_each(|r| r.write_csv(out))
}

// ---------------------------------------------------------------------------
// Family sweeps

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Bell-like state through amplitude damping.
    Bad,
    /// Bell-like state through phase damping.
    Bpd,
    /// Werner-like state rotated by a Haar unitary.
    Wu,
}

impl Family {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Bad => "BAD",
            Self::Bpd => "BPD",
            Self::Wu => "WU",
        }
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "ad" | "bad" => Ok(Self::Bad),
            "pd" | "bpd" => Ok(Self::Bpd),
            "wu" => Ok(Self::Wu),
            other => Err(format!("unknown family '{other}' (expected ad, pd or wu)")),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Parameter grid for a family sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSpec {
    /// θ over [0.05, π/2 − 0.05] (or a single fixed θ) times η over [0, 1].
    Channel {
        theta: Option<f64>,
        theta_steps: usize,
        eta_steps: usize,
        target: Qubit,
    },
    /// p over [0, 1] times θ, each point with its own Haar unitary.
    WernerGrid {
        p_steps: usize,
        theta_steps: usize,
        seed: u64,
    },
    /// `count` random (p, θ, U) triples.
    WernerRandom { count: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub family: Family,
    pub theta: f64,
    pub eta_or_p: f64,
    pub unitary_seed: Option<u64>,
    pub c_num: f64,
    pub c_closed: f64,
    pub s_num: f64,
    pub s_closed: f64,
    pub f_num: f64,
    pub f_closed: f64,
    pub purity_num: f64,
    pub purity_closed: f64,
    /// Largest |numerical − closed form| over every compared quantity,
    /// including family-specific extras (T diagonal, alternate S forms).
    pub max_abs_discrepancy: f64,
    /// Eigenvalues of ρρ̃, descending.
    pub lambda: [f64; 4],
    pub correlation: [[f64; 3]; 3],
}

impl SweepRecord {
    pub const CSV_HEADER: &'static str =
        "family,theta,eta_or_p,unitary_seed,C_num,C_closed,S_num,S_closed,\
F_num,F_closed,purity_num,purity_closed,max_abs_discrepancy";

    pub fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        write_row(
            out,
            &[
                self.family.label().to_string(),
                num(self.theta),
                num(self.eta_or_p),
                self.unitary_seed.map(|s| s.to_string()).unwrap_or_default(),
                num(self.c_num),
                num(self.c_closed),
                num(self.s_num),
                num(self.s_closed),
                num(self.f_num),
                num(self.f_closed),
                num(self.purity_num),
                num(self.purity_closed),
                num(self.max_abs_discrepancy),
            ],
        )
    }

    pub fn passes(&self) -> bool {
        self.max_abs_discrepancy <= SWEEP_TOL
    }
}

pub fn write_sweep_csv(records: &[SweepRecord], out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "{}", SweepRecord::CSV_HEADER)?;
    records.iter().try_for_each(|r| r.write_csv(out))
}

fn axis(lo: f64, hi: f64, steps: usize) -> impl Iterator<Item = f64> + Clone {
    let step = (hi - lo) / (steps - 1) as f64;
    (0..steps).map(move |i| {
        if i + 1 == steps {
            hi
        } else {
            lo + step * i as f64
        }
    })
}

fn theta_axis(steps: usize) -> impl Iterator<Item = f64> + Clone {
    axis(THETA_MARGIN, FRAC_PI_2 - THETA_MARGIN, steps)
}

fn check_steps(name: &'static str, steps: usize) -> Result<()> {
    if steps < 2 {
        return Err(Error::ParameterOutOfRange {
            name,
            value: steps as f64,
            range: ">= 2",
        });
    }
    Ok(())
}

/// SplitMix64 finalizer, used to give every Werner-unitary record its own seed.
fn mix(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn unit_interval(bits: u64) -> f64 {
    (bits >> 11) as f64 / (1u64 << 53) as f64
}

fn channel_record(family: Family, theta: f64, eta: f64, target: Qubit) -> Result<SweepRecord> {
    let ch = match family {
        Family::Bad => KrausChannel::amplitude_damping(eta, target)?,
        _ => KrausChannel::phase_damping(eta, target)?,
    };
    let rho = apply_channel(&density_from_pure(&bell_like(theta)?), &ch)?;
    let closed = match family {
        Family::Bad => bad_closed_forms(theta, eta)?,
        _ => bpd_closed_forms(theta, eta)?,
    };
    let num = MeasureReport::new(&rho);
    let t = correlation_matrix(&rho);

    let mut worst = [
        num.concurrence - closed.concurrence,
        num.steerability - closed.steerability,
        num.f_value - closed.f_value,
        num.purity - closed.purity,
    ]
    .iter()
    .fold(0.0f64, |m, d| m.max(d.abs()));
    if let Some(diag) = closed.t_diagonal {
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { diag[i] } else { 0.0 };
                worst = worst.max((t[i][j] - expected).abs());
            }
        }
    }
    if let Some(alt) = closed.steerability_from_purity {
        worst = worst.max((alt - num.steerability).abs());
    }

    Ok(SweepRecord {
        family,
        theta,
        eta_or_p: eta,
        unitary_seed: None,
        c_num: num.concurrence,
        c_closed: closed.concurrence,
        s_num: num.steerability,
        s_closed: closed.steerability,
        f_num: num.f_value,
        f_closed: closed.f_value,
        purity_num: num.purity,
        purity_closed: closed.purity,
        max_abs_discrepancy: worst,
        lambda: num.lambda,
        correlation: t,
    })
}

/// ρ_WU = U(p|φ_B⟩⟨φ_B| + (1−p)I/4)U† checked against the Werner-unitary
/// closed forms and the concurrence-purity criterion.
pub fn werner_unitary_record(p: f64, theta: f64, unitary_seed: u64) -> Result<SweepRecord> {
    let u = random_unitary(unitary_seed, 0);
    let phi = bell_like(theta)?.transformed(&u)?;
    let rho = werner_like(p, &phi)?;
    let closed = wu_closed_forms(p, &phi)?;
    let num = MeasureReport::new(&rho);
    let criterion = wu_steerability_from_c_purity(
        num.concurrence.clamp(0.0, 1.0),
        num.purity.clamp(0.25, 1.0),
    )?;

    let worst = [
        num.concurrence - closed.concurrence,
        num.steerability - closed.steerability,
        num.f_value - closed.f_value,
        num.purity - closed.purity,
        criterion - num.steerability,
    ]
    .iter()
    .fold(0.0f64, |m, d| m.max(d.abs()));

    Ok(SweepRecord {
        family: Family::Wu,
        theta,
        eta_or_p: p,
        unitary_seed: Some(unitary_seed),
        c_num: num.concurrence,
        c_closed: closed.concurrence,
        s_num: num.steerability,
        s_closed: closed.steerability,
        f_num: num.f_value,
        f_closed: closed.f_value,
        purity_num: num.purity,
        purity_closed: closed.purity,
        max_abs_discrepancy: worst,
        lambda: num.lambda,
        correlation: correlation_matrix(&rho),
    })
}

pub fn run_family_sweep(family: Family, grid: GridSpec) -> Result<Vec<SweepRecord>> {
    match (family, grid) {
        (
            Family::Bad | Family::Bpd,
            GridSpec::Channel {
                theta,
                theta_steps,
                eta_steps,
                target,
            },
        ) => {
            check_steps("eta_steps", eta_steps)?;
            let thetas: Vec<f64> = match theta {
                Some(t) => vec![t],
                None => {
                    check_steps("theta_steps", theta_steps)?;
                    theta_axis(theta_steps).collect()
                }
            };
            let points: Vec<(f64, f64)> = thetas
                .iter()
                .flat_map(|&t| axis(0.0, 1.0, eta_steps).map(move |e| (t, e)))
                .collect();
            points
                .into_par_iter()
                .map(|(t, e)| channel_record(family, t, e, target))
                .collect()
        }
        (
            Family::Wu,
            GridSpec::WernerGrid {
                p_steps,
                theta_steps,
                seed,
            },
        ) => {
            check_steps("p_steps", p_steps)?;
            check_steps("theta_steps", theta_steps)?;
            let points: Vec<(f64, f64)> = axis(0.0, 1.0, p_steps)
                .flat_map(|p| theta_axis(theta_steps).map(move |t| (p, t)))
                .collect();
            points
                .into_par_iter()
                .enumerate()
                .map(|(i, (p, t))| werner_unitary_record(p, t, mix(seed, i as u64)))
                .collect()
        }
        (Family::Wu, GridSpec::WernerRandom { count, seed }) => (0..count)
            .into_par_iter()
            .map(|i| {
                let h = mix(seed, i);
                let p = unit_interval(mix(h, 1));
                let theta =
                    THETA_MARGIN + (FRAC_PI_2 - 2.0 * THETA_MARGIN) * unit_interval(mix(h, 2));
                werner_unitary_record(p, theta, h)
            })
            .collect(),
        (family, grid) => Err(Error::Parse(format!(
            "grid {grid:?} does not apply to family {family}"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Werner-unitary region scan

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    /// The concurrence-purity criterion certifies steering.
    Steerable,
    /// Entangled, criterion silent.
    EntangledUnknown,
    /// C = 0.
    SeparableBoundary,
    /// No Werner-unitary state has this (purity, C).
    Unrealizable,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Steerable => "steerable",
            Self::EntangledUnknown => "entangled-unknown",
            Self::SeparableBoundary => "separable-boundary",
            Self::Unrealizable => "unrealizable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionRecord {
    pub purity: f64,
    pub concurrence: f64,
    pub region: Region,
}

/// Classify one (purity, C) point.
pub fn classify_region(purity: f64, concurrence: f64) -> Result<Region> {
    match wu_steerability_from_c_purity(concurrence, purity) {
        Err(Error::NotRealizable { .. }) => Ok(Region::Unrealizable),
        Err(e) => Err(e),
        Ok(s) if s > 0.0 => Ok(Region::Steerable),
        Ok(_) if concurrence > 0.0 => Ok(Region::EntangledUnknown),
        Ok(_) => Ok(Region::SeparableBoundary),
    }
}

/// Concurrence at which the criterion switches on for the given purity, if it
/// does so inside the realizable range.
pub fn criterion_boundary(purity: f64) -> Option<f64> {
    let p = ((4.0 * purity - 1.0) / 3.0).max(0.0).sqrt();
    // C² + (1 − p)C + ((1 − p)/2 + purity − 1) = 0
    let b = 1.0 - p;
    let k = 0.5 * (1.0 - p) + purity - 1.0;
    let disc = b * b - 4.0 * k;
    if disc < 0.0 {
        return None;
    }
    let root = 0.5 * (-b + disc.sqrt());
    (root >= 0.0 && root <= werner_concurrence_ceiling(purity) + REALIZABILITY_TOL).then_some(root)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionScan {
    pub grid: Vec<RegionRecord>,
    /// (purity, C) where the criterion crosses zero.
    pub boundary: Vec<(f64, f64)>,
    /// Werner states: (purity (1+3p²)/4, C (3p−1)/2) for p ≥ 1/3.
    pub envelope: Vec<(f64, f64)>,
}

pub fn run_region_scan(purity_steps: usize, c_steps: usize) -> Result<RegionScan> {
    check_steps("purity_steps", purity_steps)?;
    check_steps("c_steps", c_steps)?;
    let purities: Vec<f64> = axis(0.25, 1.0, purity_steps).collect();
    let grid = purities
        .par_iter()
        .map(|&purity| {
            axis(0.0, 1.0, c_steps)
                .map(|c| {
                    classify_region(purity, c).map(|region| RegionRecord {
                        purity,
                        concurrence: c,
                        region,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let boundary = purities
        .iter()
        .filter_map(|&purity| criterion_boundary(purity).map(|c| (purity, c)))
        .collect();
    let envelope = axis(1.0 / 3.0, 1.0, purity_steps)
        .map(|p| ((1.0 + 3.0 * p * p) / 4.0, (0.5 * (3.0 * p - 1.0)).max(0.0)))
        .collect();
    Ok(RegionScan {
        grid,
        boundary,
        envelope,
    })
}

pub fn write_region_csv(records: &[RegionRecord], out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "purity,C,region")?;
    for r in records {
        write_row(
            out,
            &[
                num(r.purity),
                num(r.concurrence),
                r.region.as_str().to_string(),
            ],
        )?;
    }
    Ok(())
}

pub fn write_curve_csv(points: &[(f64, f64)], out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "purity,C")?;
    for &(x, y) in points {
        write_row(out, &[num(x), num(y)])?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Falsification

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorems {
    pub lower: bool,
    pub upper: bool,
}

impl Theorems {
    pub const BOTH: Self = Self {
        lower: true,
        upper: true,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub seed: u64,
    pub index: u64,
    pub bound: Bound,
    /// Signed distance to the bound; negative means violated.
    pub margin: f64,
}

/// Worst margins over a campaign. Margins are signed: S − lower and upper − S,
/// so a negative value is a violation before slack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FalsificationSummary {
    pub checked: u64,
    pub worst_margin_lower: f64,
    pub worst_margin_upper: f64,
    /// Smallest C − S (the concurrence branch of the upper bound).
    pub worst_margin_upper_c_branch: f64,
    /// Largest |(1 + D_A² + D_B² + F²)/4 − Tr(ρ²)|.
    pub worst_coherence_identity: f64,
    /// Smallest Tr(ρ²) − (D_A² + D_B²)/2 − C².
    pub worst_coherence_inequality: f64,
    pub violations: Vec<Violation>,
}

impl FalsificationSummary {
    fn empty() -> Self {
        Self {
            checked: 0,
            worst_margin_lower: f64::INFINITY,
            worst_margin_upper: f64::INFINITY,
            worst_margin_upper_c_branch: f64::INFINITY,
            worst_coherence_identity: 0.0,
            worst_coherence_inequality: f64::INFINITY,
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Check {
    index: u64,
    lower: f64,
    upper: f64,
    c_branch: f64,
    identity: f64,
    inequality: f64,
}

fn check_state(index: u64, rho: &DensityMatrix) -> Check {
    let r = MeasureReport::new(rho);
    let (da2, db2) = (r.coherence_a.powi(2), r.coherence_b.powi(2));
    Check {
        index,
        lower: r.steerability - r.lower_bound,
        upper: r.upper_bound - r.steerability,
        c_branch: r.concurrence - r.steerability,
        identity: ((1.0 + da2 + db2 + r.f_value.powi(2)) / 4.0 - r.purity).abs(),
        inequality: r.purity - 0.5 * (da2 + db2) - r.concurrence.powi(2),
    }
}

fn summarize(seed: u64, theorems: Theorems, checks: Vec<Check>) -> FalsificationSummary {
    let mut s = FalsificationSummary::empty();
    for ch in checks {
        s.checked += 1;
        if theorems.lower {
            s.worst_margin_lower = s.worst_margin_lower.min(ch.lower);
            if ch.lower < -BOUND_SLACK {
                s.violations.push(Violation {
                    seed,
                    index: ch.index,
                    bound: Bound::Lower,
                    margin: ch.lower,
                });
            }
        }
        if theorems.upper {
            s.worst_margin_upper = s.worst_margin_upper.min(ch.upper);
            s.worst_margin_upper_c_branch = s.worst_margin_upper_c_branch.min(ch.c_branch);
            if ch.upper < -BOUND_SLACK {
                s.violations.push(Violation {
                    seed,
                    index: ch.index,
                    bound: Bound::Upper,
                    margin: ch.upper,
                });
            }
        }
        s.worst_coherence_identity = s.worst_coherence_identity.max(ch.identity);
        s.worst_coherence_inequality = s.worst_coherence_inequality.min(ch.inequality);
    }
    s
}

/// Check the selected bounds on every sampled state.
pub fn run_falsification(cfg: &SamplerConfig, theorems: Theorems) -> Result<FalsificationSummary> {
    cfg.validate()?;
    let checks = (0..cfg.count)
        .into_par_iter()
        .map(|i| random_state_with_rank(cfg, i).map(|s| check_state(i, &s.rho)))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(cfg.seed, theorems, checks))
}

/// Same checks on caller-supplied states; indices are positions in `states`.
pub fn falsify_states(states: &[DensityMatrix], theorems: Theorems) -> FalsificationSummary {
    let checks = states
        .par_iter()
        .enumerate()
        .map(|(i, rho)| check_state(i as u64, rho))
        .collect();
    summarize(0, theorems, checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{Measure, RankPolicy};

    #[test]
    fn empty_scatter() {
        let cfg = SamplerConfig::ginibre(RankPolicy::Uniform, 1, 0);
        assert!(run_scatter(&cfg).unwrap().is_empty());
        let mut buf = Vec::new();
        write_scatter_csv(&[], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            format!("{}\n", SampleRecord::CSV_HEADER)
        );
    }

    #[test]
    fn scatter_is_recomputable_and_ordered() {
        let cfg = SamplerConfig::ginibre(RankPolicy::Uniform, 17, 64);
        let records = run_scatter(&cfg).unwrap();
        let streamed: Vec<_> = scatter_stream(&cfg).collect::<Result<_>>().unwrap();
        assert_eq!(records, streamed);
        for (i, r) in records.iter().enumerate() {
            assert_eq!(r.index, i as u64);
        }
    }

    #[test]
    fn scatter_bytes_do_not_depend_on_workers() {
        let cfg = SamplerConfig::ginibre(RankPolicy::Uniform, 5, 500);
        let bytes = |w| {
            let recs = with_workers(w, || run_scatter(&cfg).unwrap());
            let mut buf = Vec::new();
            write_scatter_csv(&recs, &mut buf).unwrap();
            buf
        };
        assert_eq!(bytes(1), bytes(4));
    }

    #[test]
    fn csv_numbers_round_trip() {
        let cfg = SamplerConfig::ginibre(RankPolicy::Uniform, 2, 20);
        let recs = run_scatter(&cfg).unwrap();
        let mut buf = Vec::new();
        write_scatter_csv(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        for (line, r) in text.lines().skip(1).zip(&recs) {
            let cols: Vec<&str> = line.split(',').collect();
            assert_eq!(cols.len(), 13);
            assert_eq!(cols[5].parse::<f64>().unwrap(), r.steerability);
            assert_eq!(cols[3].parse::<f64>().unwrap(), r.concurrence);
        }
    }

    #[test]
    fn sweep_rejects_coarse_grids() {
        let grid = GridSpec::Channel {
            theta: None,
            theta_steps: 1,
            eta_steps: 5,
            target: Qubit::A,
        };
        assert!(matches!(
            run_family_sweep(Family::Bad, grid),
            Err(Error::ParameterOutOfRange { .. })
        ));
        let wrong = GridSpec::WernerRandom { count: 3, seed: 1 };
        assert!(run_family_sweep(Family::Bpd, wrong).is_err());
    }

    #[test]
    fn channel_family_closed_forms_hold_on_both_targets() {
        for family in [Family::Bad, Family::Bpd] {
            for target in [Qubit::A, Qubit::B] {
                let grid = GridSpec::Channel {
                    theta: None,
                    theta_steps: 12,
                    eta_steps: 12,
                    target,
                };
                for r in run_family_sweep(family, grid).unwrap() {
                    assert!(r.passes(), "{family} {target:?} {r:?}");
                }
            }
        }
    }

    #[test]
    fn fixed_theta_sweep() {
        let grid = GridSpec::Channel {
            theta: Some(0.4),
            theta_steps: 0,
            eta_steps: 7,
            target: Qubit::A,
        };
        let recs = run_family_sweep(Family::Bpd, grid).unwrap();
        assert_eq!(recs.len(), 7);
        assert!(recs.iter().all(|r| r.theta == 0.4));
        assert_eq!(recs.last().unwrap().eta_or_p, 1.0);
    }

    #[test]
    fn werner_grid_sweep() {
        let grid = GridSpec::WernerGrid {
            p_steps: 9,
            theta_steps: 5,
            seed: 3,
        };
        let recs = run_family_sweep(Family::Wu, grid).unwrap();
        assert_eq!(recs.len(), 45);
        assert!(recs.iter().all(SweepRecord::passes));
        assert!(recs.iter().all(|r| r.unitary_seed.is_some()));
    }

    #[test]
    fn region_examples() {
        assert_eq!(classify_region(0.73, 0.7).unwrap(), Region::Steerable);
        assert_eq!(
            classify_region(0.4375, 0.25).unwrap(),
            Region::EntangledUnknown
        );
        assert_eq!(classify_region(0.25, 0.5).unwrap(), Region::Unrealizable);
        assert_eq!(
            classify_region(0.6, 0.0).unwrap(),
            Region::SeparableBoundary
        );
    }

    #[test]
    fn region_scan_shapes() {
        let scan = run_region_scan(41, 31).unwrap();
        assert_eq!(scan.grid.len(), 41 * 31);
        // The criterion switches on exactly on the boundary curve.
        for &(purity, c) in &scan.boundary {
            let s = wu_steerability_from_c_purity(c.min(1.0), purity).unwrap();
            assert!(s < 1e-6);
            if c + 1e-3 <= werner_concurrence_ceiling(purity) {
                assert_eq!(
                    classify_region(purity, c + 1e-3).unwrap(),
                    Region::Steerable
                );
            }
        }
        // Envelope runs from (1/3, 0) up to the Bell state.
        let last = scan.envelope.last().unwrap();
        assert!((last.0 - 1.0).abs() < 1e-15 && (last.1 - 1.0).abs() < 1e-15);
        for r in &scan.grid {
            let unrealizable =
                r.concurrence > werner_concurrence_ceiling(r.purity) + REALIZABILITY_TOL;
            assert_eq!(r.region == Region::Unrealizable, unrealizable);
        }
    }

    #[test]
    fn boundary_meets_envelope_at_cjwr_threshold() {
        let p = 1.0 / 3f64.sqrt();
        let purity = (1.0 + 3.0 * p * p) / 4.0;
        let c = criterion_boundary(purity).unwrap();
        assert!((c - 0.5 * (3.0 * p - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn pure_sampling_saturates_concurrence_branch() {
        let cfg = SamplerConfig {
            measure: Measure::HaarPure,
            ranks: RankPolicy::Uniform,
            seed: 9,
            count: 2000,
        };
        let s = run_falsification(&cfg, Theorems::BOTH).unwrap();
        assert!(s.passed());
        assert!(s.worst_margin_upper_c_branch.abs() <= 1e-9);
    }

    #[test]
    fn phase_damped_states_saturate_concurrence_branch() {
        let mut states = Vec::new();
        for t in theta_axis(20) {
            for e in axis(0.0, 1.0, 20) {
                let ch = KrausChannel::phase_damping(e, Qubit::A).unwrap();
                states
                    .push(apply_channel(&density_from_pure(&bell_like(t).unwrap()), &ch).unwrap());
            }
        }
        let s = falsify_states(&states, Theorems::BOTH);
        assert!(s.passed());
        assert!(s.worst_margin_upper_c_branch.abs() <= 1e-9);
        assert!(s.worst_margin_upper <= 1e-9);
    }
}
