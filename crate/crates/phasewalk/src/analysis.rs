//! Observables of a walk: walker phase distributions, circular spread σ, the
//! spreading exponent ζ from ln σ = ζ ln t + ξ, and the classical
//! random-walk baseline.
//!
//! The spread σ is the wrapped second moment about the circular mean: with
//! resultant R·e^{iμ} = Σ_j P_j e^{iθ_j}, σ² = Σ_j P_j d(θ_j, μ)² where d is
//! the signed distance wrapped to (−π, π]. When the resultant is too short
//! to define a mean (two antipodal fronts, near-uniform distributions), σ is
//! computed about μ = 0 and flagged. A ballistic quantum walk gives ζ ≈ 1,
//! a diffusive classical walk ζ ≈ 1/2.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::quantum::{StateVector, C64, TWO_PI};

/// Resultant length below which the circular mean is treated as undefined.
pub const DEGENERATE_RESULTANT: f64 = 1e-9;

/// A probability distribution over the `s` phase grid points θ_j = 2πj/s.
#[derive(Debug, Clone)]
pub struct PhaseDistribution {
    /// Grid angles θ_j = 2πj/s in [0, 2π).
    pub thetas: Vec<f64>,
    /// Probabilities at each grid point; sums to 1.
    pub probs: Vec<f64>,
    /// True when `s` differed from the walker dimension and the raw values
    /// had to be rescaled to restore Σ P = 1.
    pub renormalized: bool,
}

impl PhaseDistribution {
    pub fn s(&self) -> usize {
        self.probs.len()
    }

    /// Total variation distance ½ Σ |P_j − Q_j| to another distribution on
    /// the same grid.
    pub fn total_variation(&self, other: &PhaseDistribution) -> Result<f64> {
        if other.s() != self.s() {
            return Err(Error::Dimension {
                context: "PhaseDistribution::total_variation",
                expected: self.s(),
                got: other.s(),
            });
        }
        Ok(self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(p, q)| (p - q).abs())
            .sum::<f64>()
            / 2.0)
    }

    /// Indices of strict local maxima (circular neighborhoods) whose height
    /// is at least `min_fraction` of the global maximum.
    pub fn dominant_maxima(&self, min_fraction: f64) -> Vec<usize> {
        let s = self.s();
        let peak = self.probs.iter().cloned().fold(0.0, f64::max);
        (0..s)
            .filter(|&j| {
                let p = self.probs[j];
                p > self.probs[(j + s - 1) % s]
                    && p > self.probs[(j + 1) % s]
                    && p >= min_fraction * peak
            })
            .collect()
    }
}

/// Walker reduced density matrix ρ_w = Tr_coin |ψ⟩⟨ψ|.
pub fn reduce_walker(psi: &StateVector) -> DMatrix<C64> {
    let d = psi.walker_dim();
    let cd = psi.coin_dim();
    DMatrix::from_fn(d, d, |m, n| {
        let mut acc = C64::ZERO;
        for c in 0..cd {
            acc += psi.amp(m, c) * psi.amp(n, c).conj();
        }
        acc
    })
}

/// Phase distribution P(θ_j) = ⟨θ_j|ρ_w|θ_j⟩ on the `s`-point grid.
///
/// Requires `s` equal to the walker dimension, for which the phase states
/// resolve the identity and the probabilities sum to 1 exactly. For other
/// grids use [`phase_distribution_renormalized`].
pub fn phase_distribution(rho_w: &DMatrix<C64>, s: usize) -> Result<PhaseDistribution> {
    if s != rho_w.nrows() {
        return Err(Error::Dimension {
            context: "phase_distribution (use phase_distribution_renormalized for s ≠ walker dim)",
            expected: rho_w.nrows(),
            got: s,
        });
    }
    Ok(distribution_impl(rho_w, s, false))
}

/// Phase distribution sampled on an `s`-point grid that need not match the
/// walker dimension; values are rescaled to sum to 1 and the result is
/// flagged `renormalized`.
pub fn phase_distribution_renormalized(rho_w: &DMatrix<C64>, s: usize) -> PhaseDistribution {
    distribution_impl(rho_w, s, true)
}

fn distribution_impl(rho_w: &DMatrix<C64>, s: usize, renormalize: bool) -> PhaseDistribution {
    let d = rho_w.nrows();
    let thetas: Vec<f64> = (0..s).map(|j| TWO_PI * j as f64 / s as f64).collect();
    // ⟨θ|ρ|θ⟩ = (1/s) Σ_{m,n} e^{−i(m−n)θ} ρ_{mn}, evaluated as v†ρv with
    // v_n = e^{inθ}/√s. Tiny negative values from roundoff are clipped.
    let mut probs: Vec<f64> = thetas
        .iter()
        .map(|&theta| {
            let v = nalgebra::DVector::from_fn(d, |n, _| {
                C64::from_polar(1.0 / (s as f64).sqrt(), theta * n as f64)
            });
            let p = (v.adjoint() * rho_w * &v)[(0, 0)].re;
            if p < 0.0 {
                debug_assert!(p > -1e-12, "distribution value {p:.3e} too negative");
                0.0
            } else {
                p
            }
        })
        .collect();
    let total: f64 = probs.iter().sum();
    let renormalized = renormalize && (total - 1.0).abs() > 1e-12;
    if renormalize {
        for p in &mut probs {
            *p /= total;
        }
    }
    PhaseDistribution {
        thetas,
        probs,
        renormalized,
    }
}

/// Circular spread of a phase distribution.
#[derive(Debug, Clone, Copy)]
pub struct CircularSpread {
    /// Wrapped standard deviation about the circular mean, in rad.
    pub sigma: f64,
    /// Circular mean μ in (−π, π]; 0 when degenerate.
    pub mean: f64,
    /// Resultant length R = |Σ P_j e^{iθ_j}| ∈ [0, 1].
    pub resultant: f64,
    /// True when R was too small to define a mean and μ = 0 was used.
    pub degenerate_mean: bool,
}

/// Wrap an angle to (−π, π].
pub fn wrap_angle(x: f64) -> f64 {
    let mut y = x.rem_euclid(TWO_PI);
    if y > std::f64::consts::PI {
        y -= TWO_PI;
    }
    y
}

/// Circular mean and wrapped second moment of a phase distribution.
pub fn circular_std(dist: &PhaseDistribution) -> CircularSpread {
    let mut re = 0.0;
    let mut im = 0.0;
    for (&theta, &p) in dist.thetas.iter().zip(&dist.probs) {
        re += p * theta.cos();
        im += p * theta.sin();
    }
    let resultant = (re * re + im * im).sqrt();
    let degenerate_mean = resultant < DEGENERATE_RESULTANT;
    let mean = if degenerate_mean { 0.0 } else { im.atan2(re) };
    let mut spread = circular_std_about(dist, mean);
    spread.resultant = resultant;
    spread.degenerate_mean = degenerate_mean;
    spread
}

/// Wrapped second moment of a phase distribution about a fixed reference
/// angle.
///
/// Spreading trajectories are measured about the walk's launch angle rather
/// than each step's own circular mean: once the counter-propagating peaks
/// pass ±π/2 the per-step mean snaps to the antipode, which would make σ(t)
/// collapse mid-run even though the distribution is still widening.
pub fn circular_std_about(dist: &PhaseDistribution, center: f64) -> CircularSpread {
    let mut var = 0.0;
    for (&theta, &p) in dist.thetas.iter().zip(&dist.probs) {
        let d = wrap_angle(theta - center);
        var += p * d * d;
    }
    CircularSpread {
        sigma: var.sqrt(),
        mean: wrap_angle(center),
        resultant: f64::NAN,
        degenerate_mean: false,
    }
}

/// Result of the log-log fit ln σ = ζ ln t + ξ.
#[derive(Debug, Clone)]
pub struct PowerLawFit {
    /// Spreading exponent (slope).
    pub zeta: f64,
    /// Intercept ξ.
    pub xi: f64,
    /// Inclusive step window the fit was taken over.
    pub window: (usize, usize),
    /// Steps actually used (after windowing and parity filtering).
    pub steps_used: Vec<usize>,
    /// Root-mean-square residual of ln σ about the fit line.
    pub residual_rms: f64,
}

/// Ordinary least squares of ln σ against ln t over `window` (inclusive).
///
/// `even_only` restricts to even steps, the default windowing for walk fits
/// (odd and even steps carry a parity artifact). Step 0 never enters (ln 0).
pub fn fit_power_law(
    sigma_by_step: &[(usize, f64)],
    window: (usize, usize),
    even_only: bool,
) -> Result<PowerLawFit> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::Fit(format!("empty window {lo}..{hi}")));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut steps_used = Vec::new();
    for &(t, sigma) in sigma_by_step {
        if t < lo.max(1) || t > hi || (even_only && t % 2 != 0) {
            continue;
        }
        if sigma <= 0.0 {
            return Err(Error::Fit(format!("nonpositive σ = {sigma:.3e} at step {t}")));
        }
        xs.push((t as f64).ln());
        ys.push(sigma.ln());
        steps_used.push(t);
    }
    let n = xs.len();
    if n < 3 {
        return Err(Error::Fit(format!(
            "window {lo}..{hi} leaves {n} usable points; need at least 3"
        )));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all points at the same step".into()));
    }
    let zeta = sxy / sxx;
    let xi = my - zeta * mx;
    let residual_rms = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (zeta * x + xi);
            r * r
        })
        .sum::<f64>()
        / nf)
        .sqrt();
    Ok(PowerLawFit {
        zeta,
        xi,
        window,
        steps_used,
        residual_rms,
    })
}

/// Exact classical baseline: a ±Δθ random walk of `t` fair-coin steps,
/// wrapped onto the `s`-point circle grid.
///
/// The binomial displacement (2j − t)Δθ is assigned to the nearest grid
/// point; exact midpoints split their mass equally between both neighbors.
/// The unwrapped spread is Δθ√t, so fits over moderate step counts recover
/// ζ = 1/2.
pub fn classical_rw_distribution(t: usize, delta_theta: f64, s: usize) -> PhaseDistribution {
    let thetas: Vec<f64> = (0..s).map(|j| TWO_PI * j as f64 / s as f64).collect();
    let mut probs = vec![0.0; s];
    // Binomial weights by stable multiplicative recurrence.
    let mut w = 0.5_f64.powi(t as i32); // C(t,0)/2^t
    for j in 0..=t {
        let displacement = (2.0 * j as f64 - t as f64) * delta_theta;
        deposit_nearest(&mut probs, displacement, w, s);
        w *= (t - j) as f64 / (j + 1) as f64;
    }
    PhaseDistribution {
        thetas,
        probs,
        renormalized: false,
    }
}

/// Add `mass` at angle `x` to the nearest grid point of an `s`-point circle
/// grid, splitting ties equally.
fn deposit_nearest(probs: &mut [f64], x: f64, mass: f64, s: usize) {
    let grid_pos = x.rem_euclid(TWO_PI) / (TWO_PI / s as f64);
    let below = grid_pos.floor();
    let frac = grid_pos - below;
    let lo = below as usize % s;
    let hi = (lo + 1) % s;
    if (frac - 0.5).abs() < 1e-12 {
        probs[lo] += mass / 2.0;
        probs[hi] += mass / 2.0;
    } else if frac < 0.5 {
        probs[lo] += mass;
    } else {
        probs[hi] += mass;
    }
}

/// σ per step for a state trajectory, as (step, σ) pairs ready for
/// [`fit_power_law`].
///
/// Every step's spread is measured about one fixed reference angle — the
/// circular mean of the initial distribution — so the trajectory keeps
/// reporting growth while the two wavefronts travel toward the far side of
/// the circle (see [`circular_std_about`]).
pub fn sigma_trajectory(states: &[StateVector], s: usize) -> Result<Vec<(usize, f64)>> {
    let mut center = 0.0;
    states
        .iter()
        .enumerate()
        .map(|(t, st)| {
            let dist = phase_distribution(&reduce_walker(st), s)?;
            if t == 0 {
                center = circular_std(&dist).mean;
            }
            Ok((t, circular_std_about(&dist, center).sigma))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{coherent_state, phase_state, tensor_state};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn uniform(s: usize) -> PhaseDistribution {
        PhaseDistribution {
            thetas: (0..s).map(|j| TWO_PI * j as f64 / s as f64).collect(),
            probs: vec![1.0 / s as f64; s],
            renormalized: false,
        }
    }

    #[test]
    fn reduce_walker_is_density_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let amps = nalgebra::DVector::from_fn(16, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let amps = &amps / C64::new(amps.norm(), 0.0);
        let psi = StateVector::new(amps, 8, 2).unwrap();
        let rho = reduce_walker(&psi);
        // Hermitian
        assert!(crate::quantum::hermiticity_deviation(&rho) < 1e-10);
        // Unit trace
        let trace: C64 = (0..8).map(|i| rho[(i, i)]).sum();
        assert!((trace.re - 1.0).abs() < 1e-10 && trace.im.abs() < 1e-12);
        // Positive semidefinite (eigenvalues ≥ −1e-10)
        let eig = rho.clone().symmetric_eigen();
        for ev in eig.eigenvalues.iter() {
            assert!(*ev > -1e-10, "negative eigenvalue {ev:.3e}");
        }
    }

    #[test]
    fn phase_distribution_matches_double_sum_oracle() {
        // Independent evaluation of P(θ) = (1/s)Σ_{m,n} ρ_{mn} e^{i(n−m)θ}.
        let cs = coherent_state(C64::new(1.2, 0.4), 16).unwrap();
        let psi = tensor_state(&cs.state, &[C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).unwrap();
        let rho = reduce_walker(&psi);
        let dist = phase_distribution(&rho, 16).unwrap();
        for (j, &theta) in dist.thetas.iter().enumerate() {
            let mut acc = C64::ZERO;
            for m in 0..16 {
                for n in 0..16 {
                    acc += rho[(m, n)] * C64::from_polar(1.0, (n as f64 - m as f64) * theta);
                }
            }
            let oracle = acc.re / 16.0;
            assert!(
                (dist.probs[j] - oracle).abs() < 1e-12,
                "site {j}: {} vs oracle {oracle}",
                dist.probs[j]
            );
        }
    }

    #[test]
    fn phase_distribution_of_phase_state_is_a_delta() {
        let s = 12;
        let psi = phase_state(s, 5);
        let rho = reduce_walker(&psi);
        let dist = phase_distribution(&rho, s).unwrap();
        for (j, &p) in dist.probs.iter().enumerate() {
            let want = if j == 5 { 1.0 } else { 0.0 };
            assert!((p - want).abs() < 1e-10, "site {j}: {p}");
        }
    }

    #[test]
    fn phase_distribution_sums_to_one() {
        let cs = coherent_state(C64::new(3.0, 0.0), 64).unwrap();
        let rho = reduce_walker(&cs.state);
        let dist = phase_distribution(&rho, 64).unwrap();
        let total: f64 = dist.probs.iter().sum();
        assert!((total - 1.0).abs() < 1e-9, "Σ P = {total}");
        assert!(!dist.renormalized);
    }

    #[test]
    fn grid_mismatch_requires_renormalized_sampler() {
        let cs = coherent_state(C64::new(0.8, 0.0), 8).unwrap();
        let rho = reduce_walker(&cs.state);
        assert!(phase_distribution(&rho, 32).is_err());
        // Oversampling adds no aliasing: number coherences |m − n| < s keep
        // the raw sum at 1, so no rescaling happens.
        let over = phase_distribution_renormalized(&rho, 32);
        assert!(!over.renormalized);
        let total: f64 = over.probs.iter().sum();
        assert!((total - 1.0).abs() < 1e-12, "oversampled Σ P = {total}");
        // Undersampling aliases coherences with |m − n| ≥ s into the sum,
        // which then genuinely needs rescaling.
        let under = phase_distribution_renormalized(&rho, 5);
        assert!(under.renormalized);
        let total: f64 = under.probs.iter().sum();
        assert!((total - 1.0).abs() < 1e-12, "undersampled Σ P = {total}");
    }

    #[test]
    fn circular_std_of_delta_is_zero_and_of_uniform_is_flagged() {
        let s = 64;
        let mut probs = vec![0.0; s];
        probs[10] = 1.0;
        let delta = PhaseDistribution {
            thetas: (0..s).map(|j| TWO_PI * j as f64 / s as f64).collect(),
            probs,
            renormalized: false,
        };
        let spread = circular_std(&delta);
        assert!(spread.sigma < 1e-12);
        assert!(!spread.degenerate_mean);
        assert!((spread.mean - TWO_PI * 10.0 / 64.0).abs() < 1e-12);

        let u = circular_std(&uniform(s));
        assert!(u.degenerate_mean, "uniform resultant {:.3e}", u.resultant);
        // Second moment about 0 of the symmetric grid ≈ π/√3.
        let expect = std::f64::consts::PI / 3f64.sqrt();
        assert!(
            (u.sigma - expect).abs() < 0.03,
            "σ = {} vs π/√3 = {expect}",
            u.sigma
        );
    }

    #[test]
    fn circular_std_is_invariant_under_grid_rotation() {
        let s = 48;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut probs: Vec<f64> = (0..s).map(|_| rng.gen_range(0.0..1.0)).collect();
        let total: f64 = probs.iter().sum();
        for p in &mut probs {
            *p /= total;
        }
        // Concentrate the mass so the mean is well-defined.
        let mut peaked = vec![0.0; s];
        peaked[..8].copy_from_slice(&probs[..8]);
        let total: f64 = peaked.iter().sum();
        for p in &mut peaked {
            *p /= total;
        }
        let thetas: Vec<f64> = (0..s).map(|j| TWO_PI * j as f64 / s as f64).collect();
        let base = circular_std(&PhaseDistribution {
            thetas: thetas.clone(),
            probs: peaked.clone(),
            renormalized: false,
        });
        for shift in [1usize, 7, 23, 40] {
            let mut rotated = vec![0.0; s];
            for j in 0..s {
                rotated[(j + shift) % s] = peaked[j];
            }
            let spread = circular_std(&PhaseDistribution {
                thetas: thetas.clone(),
                probs: rotated,
                renormalized: false,
            });
            assert!(
                (spread.sigma - base.sigma).abs() < 1e-10,
                "σ changed by {:.3e} under rotation {shift}",
                (spread.sigma - base.sigma).abs()
            );
        }
    }

    #[test]
    fn fit_recovers_exact_power_law() {
        let points: Vec<(usize, f64)> = (1..=20).map(|t| (t, 0.7 * (t as f64).powf(0.83))).collect();
        let fit = fit_power_law(&points, (2, 18), false).unwrap();
        assert!((fit.zeta - 0.83).abs() < 1e-12);
        assert!((fit.xi - 0.7_f64.ln()).abs() < 1e-12);
        assert!(fit.residual_rms < 1e-12);
    }

    #[test]
    fn fit_even_only_filters_parity() {
        let points: Vec<(usize, f64)> = (1..=10).map(|t| (t, (t as f64).sqrt())).collect();
        let fit = fit_power_law(&points, (2, 10), true).unwrap();
        assert_eq!(fit.steps_used, vec![2, 4, 6, 8, 10]);
        assert!((fit.zeta - 0.5).abs() < 1e-12);
    }

    #[test]
    fn fit_rejects_bad_windows() {
        let points = vec![(1, 1.0), (2, 2.0), (3, 3.0)];
        assert!(fit_power_law(&points, (5, 2), false).is_err());
        assert!(fit_power_law(&points, (8, 9), false).is_err());
        let with_zero = vec![(1, 1.0), (2, 0.0), (3, 3.0)];
        assert!(fit_power_law(&with_zero, (1, 3), false).is_err());
    }

    #[test]
    fn classical_rw_matches_binomial_spread() {
        // Unwrapped spread of the ±Δθ binomial walk is exactly Δθ√t; on a
        // fine grid with negligible wrapping the measured σ must agree.
        let delta_theta = 0.3;
        for t in [4usize, 6, 9] {
            let dist = classical_rw_distribution(t, delta_theta, 256);
            let total: f64 = dist.probs.iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
            let spread = circular_std(&dist);
            let expect = delta_theta * (t as f64).sqrt();
            assert!(
                (spread.sigma - expect).abs() < 0.01,
                "t = {t}: σ = {} vs Δθ√t = {expect}",
                spread.sigma
            );
        }
    }

    #[test]
    fn classical_rw_fit_gives_half() {
        let delta_theta = 0.3;
        let points: Vec<(usize, f64)> = (4..=10)
            .map(|t| {
                let dist = classical_rw_distribution(t, delta_theta, 64);
                (t, circular_std(&dist).sigma)
            })
            .collect();
        let fit = fit_power_law(&points, (4, 10), false).unwrap();
        assert!(
            (fit.zeta - 0.5).abs() < 0.02,
            "classical exponent {} not within 0.02 of 1/2",
            fit.zeta
        );
    }

    #[test]
    fn deposit_splits_exact_midpoints() {
        let s = 8;
        let mut probs = vec![0.0; s];
        // Midpoint between grid sites 1 and 2.
        let x = TWO_PI * 1.5 / s as f64;
        deposit_nearest(&mut probs, x, 1.0, s);
        assert!((probs[1] - 0.5).abs() < 1e-15);
        assert!((probs[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn dominant_maxima_finds_peaks() {
        let s = 16;
        let mut probs = vec![0.01; s];
        probs[2] = 0.3;
        probs[8] = 0.25;
        probs[12] = 0.02; // below threshold
        let total: f64 = probs.iter().sum();
        let dist = PhaseDistribution {
            thetas: (0..s).map(|j| TWO_PI * j as f64 / s as f64).collect(),
            probs: probs.iter().map(|p| p / total).collect(),
            renormalized: false,
        };
        assert_eq!(dist.dominant_maxima(0.15), vec![2, 8]);
    }
}
