//! RIS phase-shift designs.
//!
//! The cascade toward receiver `o` is `Σ_k conj(g_sr,k) · e^{jω_k} · g_ro,k`.
//! Each term has amplitude `|g_sr,k|·|g_ro,k|` and phase
//! `arg(g_ro,k) − arg(g_sr,k) + ω_k`; the designs below only steer that
//! phase.
//!
//! * [`heuristic_min_eve`] sorts the eavesdropper-side term amplitudes,
//!   pairs neighbours, and rotates the larger term of each pair so it points
//!   opposite its partner. What survives is the sum of the pair differences.
//! * [`random_phases`] is the i.i.d. uniform baseline.
//! * [`max_main_phases`] co-phases every term toward D.
//!
//! [`eve_lower_bound`] and [`grid_oracle_min`] bound the eavesdropper
//! objective from below and by exhaustive search, for validation.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::channel::ChannelVector;
use crate::error::{Error, Result};
use crate::rng::RandomStream;

/// Largest element count accepted by [`grid_oracle_min`].
pub const GRID_ORACLE_MAX_ELEMS: usize = 8;

/// Wraps an angle into `[−π, π]`. Both `±π` map to `+π`.
pub fn wrap_phase(x: f64) -> f64 {
    let mut r = x - TAU * (x / TAU).round();
    if r <= -PI {
        r += TAU;
    }
    r.clamp(-PI, PI)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseConfig(Vec<f64>);

impl PhaseConfig {
    /// Wraps every entry into `[−π, π]`.
    pub fn new(phases: Vec<f64>) -> Self {
        PhaseConfig(phases.into_iter().map(wrap_phase).collect())
    }

    pub fn zeros(k_elems: usize) -> Self {
        PhaseConfig(vec![0.0; k_elems])
    }

    pub fn phases(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Diagonal of Θ.
    pub fn reflection_coefficients(&self) -> Vec<Complex64> {
        self.0.iter().map(|&w| Complex64::from_polar(1.0, w)).collect()
    }
}

/// Per-element term amplitudes `|g_a,k|·|g_b,k|`.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeProfile(pub Vec<f64>);

impl AmplitudeProfile {
    pub fn from_channels(g_a: &ChannelVector, g_b: &ChannelVector) -> Result<Self> {
        check_lengths(g_a.len(), g_b.len())?;
        Ok(AmplitudeProfile(
            g_a.0.iter().zip(&g_b.0).map(|(a, b)| a.norm() * b.norm()).collect(),
        ))
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// Descending amplitude order split into adjacent pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingPlan {
    /// Element indices sorted by amplitude, largest first; ties by index.
    pub ordering: Vec<usize>,
    /// `(larger, smaller)` element indices.
    pub pairs: Vec<(usize, usize)>,
    pub leftover: Option<usize>,
}

impl PairingPlan {
    pub fn new(profile: &AmplitudeProfile) -> Self {
        let a = &profile.0;
        let mut ordering: Vec<usize> = (0..a.len()).collect();
        ordering.sort_by(|&i, &j| {
            a[j].partial_cmp(&a[i]).unwrap_or(Ordering::Equal).then(i.cmp(&j))
        });
        let pairs = ordering.chunks_exact(2).map(|p| (p[0], p[1])).collect();
        let leftover = (a.len() % 2 == 1).then(|| ordering[a.len() - 1]);
        PairingPlan {
            ordering,
            pairs,
            leftover,
        }
    }

    /// Triangle-inequality ceiling on the heuristic's cascade magnitude:
    /// the sum of within-pair amplitude gaps plus the leftover amplitude.
    pub fn residual_bound(&self, profile: &AmplitudeProfile) -> f64 {
        let a = &profile.0;
        let pairs: f64 = self.pairs.iter().map(|&(i, j)| a[i] - a[j]).sum();
        pairs + self.leftover.map_or(0.0, |k| a[k])
    }
}

fn check_lengths(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::LengthMismatch { left, right });
    }
    Ok(())
}

/// `g_a^H Θ g_b`.
pub fn cascade(g_a: &ChannelVector, ph: &PhaseConfig, g_b: &ChannelVector) -> Result<Complex64> {
    check_lengths(g_a.len(), ph.len())?;
    check_lengths(g_a.len(), g_b.len())?;
    Ok(cascade_unchecked(g_a.as_slice(), ph.phases(), g_b.as_slice()))
}

#[inline]
pub(crate) fn cascade_unchecked(g_a: &[Complex64], phases: &[f64], g_b: &[Complex64]) -> Complex64 {
    g_a.iter()
        .zip(phases)
        .zip(g_b)
        .map(|((a, &w), b)| a.conj() * Complex64::from_polar(1.0, w) * b)
        .sum()
}

/// Phase of each un-steered cascade term, `arg(g_b,k) − arg(g_a,k)`.
pub fn term_phases(g_a: &ChannelVector, g_b: &ChannelVector) -> Result<Vec<f64>> {
    check_lengths(g_a.len(), g_b.len())?;
    Ok(g_a.0.iter().zip(&g_b.0).map(|(a, b)| (a.conj() * b).arg()).collect())
}

/// Pairwise-cancellation design that suppresses the eavesdropper cascade.
///
/// Within each pair the smaller term keeps `ω = 0` and the larger term is
/// rotated to sit exactly π away from it. An unpaired element keeps `ω = 0`.
pub fn heuristic_min_eve(g_sr: &ChannelVector, g_re: &ChannelVector) -> Result<PhaseConfig> {
    let profile = AmplitudeProfile::from_channels(g_sr, g_re)?;
    let theta = term_phases(g_sr, g_re)?;
    let plan = PairingPlan::new(&profile);
    let mut phases = vec![0.0; profile.0.len()];
    for &(big, small) in &plan.pairs {
        phases[big] = wrap_phase(theta[small] + PI - theta[big]);
    }
    Ok(PhaseConfig(phases))
}

pub fn random_phases(k_elems: usize, stream: &mut RandomStream) -> PhaseConfig {
    PhaseConfig((0..k_elems).map(|_| stream.uniform(-PI, PI)).collect())
}

/// Co-phases all terms toward D so `|cascade| = Σ_k |g_sr,k|·|g_rd,k|`.
pub fn max_main_phases(g_sr: &ChannelVector, g_rd: &ChannelVector) -> Result<PhaseConfig> {
    let theta = term_phases(g_sr, g_rd)?;
    Ok(PhaseConfig(theta.into_iter().map(|t| wrap_phase(-t)).collect()))
}

/// Smallest `|Σ a_k e^{jθ_k}|` over free phases: `max(0, 2·max − Σ)`.
pub fn eve_lower_bound(profile: &AmplitudeProfile) -> f64 {
    let max = profile.0.iter().copied().fold(0.0, f64::max);
    (2.0 * max - profile.total()).max(0.0)
}

/// Exhaustive minimum of `|g_sr^H Θ g_re|` over the phase grid
/// `{−π + 2πm/levels}`.
///
/// A common rotation of every phase by one grid step maps the grid to itself
/// and leaves the magnitude unchanged, so element 0 is pinned to `−π` and
/// `levels^(K−1)` points are visited.
pub fn grid_oracle_min(
    g_sr: &ChannelVector,
    g_re: &ChannelVector,
    levels: usize,
) -> Result<(PhaseConfig, f64)> {
    check_lengths(g_sr.len(), g_re.len())?;
    let k = g_sr.len();
    if k > GRID_ORACLE_MAX_ELEMS {
        return Err(Error::TooManyElements {
            got: k,
            max: GRID_ORACLE_MAX_ELEMS,
        });
    }
    if levels < 2 {
        return Err(Error::domain("levels", format!("must be >= 2, got {levels}")));
    }
    if k == 0 {
        return Ok((PhaseConfig(Vec::new()), 0.0));
    }
    let grid: Vec<f64> = (0..levels)
        .map(|m| -PI + TAU * m as f64 / levels as f64)
        .collect();
    let rot: Vec<Complex64> = grid.iter().map(|&w| Complex64::from_polar(1.0, w)).collect();
    let terms: Vec<Complex64> = g_sr.0.iter().zip(&g_re.0).map(|(a, b)| a.conj() * b).collect();

    let mut best = f64::INFINITY;
    let mut best_idx = vec![0usize; k];
    let mut idx = vec![0usize; k];
    search(&terms, &rot, 1, terms[0] * rot[0], &mut idx, &mut best, &mut best_idx);

    let phases = best_idx.iter().map(|&m| grid[m]).collect();
    Ok((PhaseConfig(phases), best))
}

fn search(
    terms: &[Complex64],
    rot: &[Complex64],
    depth: usize,
    partial: Complex64,
    idx: &mut [usize],
    best: &mut f64,
    best_idx: &mut [usize],
) {
    if depth == terms.len() {
        let v = partial.norm();
        if v < *best {
            *best = v;
            best_idx.copy_from_slice(idx);
        }
        return;
    }
    for (m, r) in rot.iter().enumerate() {
        idx[depth] = m;
        search(terms, rot, depth + 1, partial + terms[depth] * r, idx, best, best_idx);
    }
}
