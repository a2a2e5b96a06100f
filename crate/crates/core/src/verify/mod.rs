//! Grid verification: every closed form in the crate is recomputed along an
//! independent route and the discrepancies are collected into a report.
//!
//! Each grid point is checked on its own (in parallel) with a seed derived
//! from the grid seed and the point index by [`point_seed`], so the report
//! does not depend on scheduling.

mod grid;
mod oracle;
mod report;
mod stats;

pub use grid::{point_seed, GridPoint, GridSpec};
pub use oracle::{
    oracle_convolution, oracle_dobinski_bell, oracle_moment_by_summation, oracle_partitions_stirling, OracleSum,
};
pub use report::{CheckResult, MomentReport, PointLabel, Verdict, VerificationReport};
pub use stats::{chi_square_gof, mean_and_stderr, ChiSquareOutcome};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::convolution::{HeteroSumSpec, IidSumSpec, ENUMERATION_MAX_K, ENUMERATION_MAX_N};
use crate::distributions::{DegeneratePoissonDist, DztpDist, PmfTable};
use crate::error::Result;
use crate::kernel::{
    bell_classical, bell_degenerate, degenerate_exp, degenerate_exp_partial, degenerate_exp_series, falling_factorial,
    stirling_classical_exact, stirling_degenerate, stirling_degenerate_altsum, DegeneracyParams, SeriesControl,
};
use crate::tolerances::{Tolerances, DEFAULT_TAIL_TOL};

/// λ values whose Stirling triangles are always checked, grid or not.
const STIRLING_LAMBDAS: [f64; 6] = [-0.9, -0.5, -0.1, 0.0, 0.5, 1.0];
const STIRLING_MAX_N: usize = 20;
const PARTITION_MAX_N: usize = 10;
const BELL_LIMIT_LAMBDA: f64 = 1e-7;
const BELL_MAX_N: usize = 8;
const BELL_XS: [f64; 3] = [0.5, 1.0, 2.0];
const FALLING_SAMPLES: usize = 1000;
const MOMENT_MAX_ORDER: u32 = 10;
const CDF_XS: [f64; 4] = [0.5, 1.0, 2.7, 10.0];
const PGF_TS: [f64; 3] = [0.25, 0.5, 0.9];
const MGF_FD_STEP: f64 = 1e-5;
const REPRODUCIBLE_DRAWS: usize = 1000;
const MC_SUM_KS: [usize; 2] = [2, 3];

#[derive(Debug, Clone, Copy)]
enum Measure {
    Rel,
    Abs,
    /// Relative, but differences below the floor always pass.
    RelFloor(f64),
    /// Difference over max(1, |value|).
    Scaled,
}

fn compare(measure: Measure, expected: f64, actual: f64, tol: f64) -> (f64, bool) {
    let diff = (expected - actual).abs();
    let scale = expected.abs().max(actual.abs());
    let rel = if diff == 0.0 { 0.0 } else { diff / scale };
    match measure {
        Measure::Rel => (rel, rel <= tol),
        Measure::Abs => (diff, diff <= tol),
        Measure::RelFloor(floor) => (rel, rel <= tol || diff <= floor),
        Measure::Scaled => {
            let d = if diff == 0.0 { 0.0 } else { diff / scale.max(1.0) };
            (d, d <= tol)
        }
    }
}

fn value(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::NAN)
}

/// A check evaluated at many indices, reported by its worst case.
struct Sweep {
    name: &'static str,
    measure: Measure,
    tol: f64,
    pass: bool,
    worst: Option<(bool, f64, f64, f64, PointLabel)>,
    point: PointLabel,
}

impl Sweep {
    fn new(name: &'static str, point: PointLabel, measure: Measure, tol: f64) -> Self {
        Self {
            name,
            measure,
            tol,
            pass: true,
            worst: None,
            point,
        }
    }

    fn add(&mut self, label: PointLabel, expected: f64, actual: f64) {
        let (disc, pass) = compare(self.measure, expected, actual, self.tol);
        self.record(label, expected, actual, disc, pass);
    }

    fn record(&mut self, label: PointLabel, expected: f64, actual: f64, disc: f64, pass: bool) {
        self.pass &= pass;
        let key = if disc.is_nan() { f64::INFINITY } else { disc };
        let worse = match &self.worst {
            None => true,
            Some((wpass, wdisc, ..)) => (!pass && *wpass) || (pass == *wpass && key > *wdisc),
        };
        if worse {
            self.worst = Some((pass, key, expected, actual, label));
        }
    }

    fn finish(self) -> CheckResult {
        let (_, disc, expected, actual, point) = self.worst.unwrap_or((true, 0.0, 0.0, 0.0, self.point));
        CheckResult {
            check: self.name.to_string(),
            point,
            expected,
            actual,
            discrepancy: disc,
            tolerance: self.tol,
            pass: self.pass,
        }
    }
}

fn single(
    name: &'static str,
    point: PointLabel,
    measure: Measure,
    expected: f64,
    actual: f64,
    tol: f64,
) -> CheckResult {
    let mut s = Sweep::new(name, point, measure, tol);
    s.add(point, expected, actual);
    s.finish()
}

/// |mean − expected| ≤ σ·z/√N with σ² the exact variance.
fn mc_band(name: &'static str, point: PointLabel, expected: f64, variance: f64, draws: &[u64], z: f64) -> CheckResult {
    let (mean, _) = mean_and_stderr(draws, |x| x);
    let band = z * (variance.max(0.0) / draws.len() as f64).sqrt();
    single(name, point, Measure::Abs, expected, mean, band)
}

fn chi_check(name: &'static str, point: PointLabel, draws: &[u64], table: &PmfTable, significance: f64) -> CheckResult {
    let out = chi_square_gof(draws, table, significance);
    CheckResult {
        check: name.to_string(),
        point,
        expected: out.critical,
        actual: out.statistic,
        discrepancy: out.statistic,
        tolerance: significance,
        pass: out.pass,
    }
}

/// Run every check over `grid`. Failures are recorded in the report, not
/// returned as errors; `Err` means the grid itself is invalid.
pub fn run_verification(grid: &GridSpec, tol: &Tolerances) -> Result<VerificationReport> {
    let points = grid.points()?;
    if points.is_empty() {
        return Ok(VerificationReport::new(grid.clone(), vec![], vec![]));
    }
    let mut checks = kernel_checks(grid, &points, tol);
    let per_point: Vec<(Vec<CheckResult>, Vec<MomentReport>)> =
        points.par_iter().map(|p| point_checks(grid, p, tol)).collect();
    let mut moments = Vec::new();
    for (c, m) in per_point {
        checks.extend(c);
        moments.extend(m);
    }
    checks.extend(hetero_checks(grid, tol));
    Ok(VerificationReport::new(grid.clone(), checks, moments))
}

fn kernel_checks(grid: &GridSpec, points: &[GridPoint], tol: &Tolerances) -> Vec<CheckResult> {
    let mut out = Vec::new();

    let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
    let mut s = Sweep::new(
        "kernel.falling_recurrence",
        PointLabel::default(),
        Measure::Rel,
        tol.falling_recurrence_rel,
    );
    for _ in 0..FALLING_SAMPLES {
        let x = rng.random_range(-10.0..10.0);
        let lambda = rng.random_range(-2.0..2.0);
        let n = rng.random_range(1..=25u64);
        let step = falling_factorial(x, n - 1, lambda) * (x - (n - 1) as f64 * lambda);
        s.add(
            PointLabel::lambda(lambda).with_n(n),
            step,
            falling_factorial(x, n, lambda),
        );
    }
    out.push(s.finish());

    let mut lambdas: Vec<f64> = STIRLING_LAMBDAS
        .iter()
        .copied()
        .chain(points.iter().map(|p| p.lambda))
        .collect();
    lambdas.sort_by(f64::total_cmp);
    lambdas.dedup_by(|a, b| a.to_bits() == b.to_bits());
    for &lambda in &lambdas {
        let tri = stirling_degenerate(STIRLING_MAX_N, lambda);
        let mut s = Sweep::new(
            "kernel.stirling_altsum",
            PointLabel::lambda(lambda),
            Measure::Rel,
            tol.stirling_rel,
        );
        for n in 0..=STIRLING_MAX_N {
            for k in 0..=n {
                let alt = stirling_degenerate_altsum(n as u64, k as u64, lambda);
                s.add(
                    PointLabel::lambda(lambda).with_k(k).with_n(n as u64),
                    alt,
                    tri.get(n, k),
                );
            }
        }
        out.push(s.finish());
    }

    let exact = stirling_classical_exact(PARTITION_MAX_N).expect("small classical rows fit");
    let tri0 = stirling_degenerate(PARTITION_MAX_N, 0.0);
    let mut s = Sweep::new("kernel.stirling_partitions", PointLabel::lambda(0.0), Measure::Abs, 0.0);
    for n in 0..=PARTITION_MAX_N {
        for k in 0..=n {
            let label = PointLabel::lambda(0.0).with_k(k).with_n(n as u64);
            let count = oracle_partitions_stirling(n, k).map(|c| c as f64).unwrap_or(f64::NAN);
            s.add(label, count, exact[n][k] as f64);
            s.add(label, count, tri0.get(n, k));
        }
    }
    out.push(s.finish());

    let ctl = SeriesControl::default();
    let mut limit = Sweep::new(
        "kernel.bell_limit",
        PointLabel::lambda(BELL_LIMIT_LAMBDA),
        Measure::Rel,
        tol.bell_limit_rel,
    );
    let mut branch = Sweep::new(
        "kernel.bell_classical_branch",
        PointLabel::lambda(0.0),
        Measure::Rel,
        tol.bell_classical_rel,
    );
    for &x in &BELL_XS {
        for n in 0..=BELL_MAX_N {
            let classical = bell_classical(n, x);
            let label = PointLabel {
                alpha: None,
                lambda: None,
                k: None,
                n: Some(n as u64),
            };
            limit.add(
                PointLabel {
                    lambda: Some(BELL_LIMIT_LAMBDA),
                    ..label
                },
                classical,
                value(bell_degenerate(n, x, BELL_LIMIT_LAMBDA)),
            );
            let series = value(oracle_dobinski_bell(n, x, 0.0, &ctl));
            branch.add(
                PointLabel {
                    lambda: Some(0.0),
                    ..label
                },
                series,
                value(bell_degenerate(n, x, 0.0)),
            );
        }
    }
    out.push(limit.finish());
    out.push(branch.finish());
    out
}

fn point_checks(grid: &GridSpec, p: &GridPoint, tol: &Tolerances) -> (Vec<CheckResult>, Vec<MomentReport>) {
    let mut out = Vec::new();
    let at = PointLabel::at(p.alpha, p.lambda);
    let params = DegeneracyParams::new(p.alpha, p.lambda).expect("grid points are validated");
    let dist = DztpDist::new(params);
    let (alpha, lambda) = (p.alpha, p.lambda);
    let ctl = SeriesControl::default();

    // kernel quantities evaluated at this point
    let e = value(degenerate_exp(1.0, alpha, lambda));
    out.push(single(
        "kernel.exp_inverse",
        at,
        Measure::Abs,
        1.0,
        e * value(degenerate_exp(-1.0, alpha, lambda)),
        tol.exp_inverse_abs,
    ));

    let mut s = Sweep::new("kernel.partial_exp", at, Measure::Scaled, tol.partial_exp_abs);
    match degenerate_exp_series(alpha, lambda, &ctl) {
        Ok(series) => {
            let b = series.terms as u64 + 1;
            s.add(at.with_n(b), e, degenerate_exp_partial(alpha, b, lambda));
            let mut prev = 1.0;
            for j in 0..=b {
                let cur = degenerate_exp_partial(alpha, j, lambda);
                if cur < prev {
                    s.record(at.with_n(j), prev, cur, f64::INFINITY, false);
                }
                prev = cur;
            }
        }
        Err(_) => s.record(at, e, f64::NAN, f64::INFINITY, false),
    }
    out.push(s.finish());

    let mut s = Sweep::new("kernel.bell_dobinski", at, Measure::Rel, tol.bell_dobinski_rel);
    for n in 0..=10 {
        s.add(
            at.with_n(n as u64),
            value(oracle_dobinski_bell(n, alpha, lambda, &ctl)),
            value(bell_degenerate(n, alpha, lambda)),
        );
    }
    out.push(s.finish());

    // single-variable law
    let table = dist.pmf_table(DEFAULT_TAIL_TOL);
    let mut s = Sweep::new("dist.normalization", at, Measure::Abs, tol.normalization_abs);
    match &table {
        Ok(t) => {
            s.tol = tol.normalization_abs + t.tail_mass;
            s.add(at, 1.0, t.total());
        }
        Err(_) => s.record(at, 1.0, f64::NAN, f64::INFINITY, false),
    }
    out.push(s.finish());

    let poisson = DegeneratePoissonDist::new(params);
    let p0 = poisson.pmf(0);
    let mut s = Sweep::new(
        "dist.conditional_poisson",
        at,
        Measure::Rel,
        tol.conditional_poisson_rel,
    );
    for n in 1..=grid.n_max {
        s.add(at.with_n(n), poisson.pmf(n) / (1.0 - p0), value(dist.pmf(n)));
    }
    out.push(s.finish());

    let mut s = Sweep::new("dist.cdf_partial_sum", at, Measure::Abs, tol.cdf_abs);
    for &x in &CDF_XS {
        let upto = x.floor() as u64;
        let partial: f64 = (1..=upto).map(|k| value(dist.pmf(k))).sum();
        s.add(at, partial, dist.cdf(x));
    }
    out.push(s.finish());

    let mut s = Sweep::new("dist.cdf_monotone", at, Measure::Abs, tol.cdf_abs);
    if let Ok(t) = &table {
        let mut prev = 0.0;
        for step in 0..=2 * (t.last() + 1) {
            let x = step as f64 / 2.0;
            let cur = dist.cdf(x);
            if cur < prev || cur > 1.0 {
                s.record(at, prev, cur, f64::INFINITY, false);
            }
            prev = cur;
        }
        s.tol = tol.cdf_abs + t.tail_mass;
        s.add(at.with_n(t.last()), 1.0, dist.cdf(t.last() as f64));
    }
    out.push(s.finish());

    if let Some(m) = params.support_max() {
        out.push(single(
            "dist.cdf_finite_support",
            at.with_n(m),
            Measure::Abs,
            1.0,
            dist.cdf(m as f64),
            0.0,
        ));
    }

    let first = oracle_moment_by_summation(params, 1, DEFAULT_TAIL_TOL).map(|o| o.value);
    let second = oracle_moment_by_summation(params, 2, DEFAULT_TAIL_TOL).map(|o| o.value);
    let mean = dist.mean();
    let variance = dist.variance();
    out.push(single(
        "dist.mean",
        at,
        Measure::Rel,
        value(first.clone()),
        mean,
        tol.mean_rel,
    ));
    let table_var = match (&first, &second) {
        (Ok(m1), Ok(m2)) => m2 - m1 * m1,
        _ => f64::NAN,
    };
    out.push(single(
        "dist.variance",
        at,
        Measure::RelFloor(tol.variance_abs_floor),
        table_var,
        variance,
        tol.variance_rel,
    ));
    out.push(single(
        "dist.variance_identity",
        at,
        Measure::RelFloor(tol.variance_abs_floor),
        dist.second_moment() - mean * mean,
        variance,
        tol.variance_identity_rel,
    ));
    if lambda == 0.0 {
        let em1 = alpha.exp_m1();
        let ea = alpha.exp();
        let want_mean = alpha * ea / em1;
        let want_var = alpha * ea * (em1 - alpha) / (em1 * em1);
        let mut s = Sweep::new("dist.classical_limit", at, Measure::Abs, tol.classical_limit_abs);
        s.add(at, want_mean, mean);
        s.add(at, want_var, variance);
        out.push(s.finish());
    }

    let mut s = Sweep::new("dist.moment", at, Measure::Rel, tol.moment_rel);
    let mut closed_moments = Vec::new();
    let mut table_moments = Vec::new();
    for n in 1..=MOMENT_MAX_ORDER {
        let closed = value(dist.moment(n as usize));
        let summed = value(oracle_moment_by_summation(params, n, DEFAULT_TAIL_TOL).map(|o| o.value));
        s.add(at.with_n(n as u64), summed, closed);
        closed_moments.push(closed);
        table_moments.push(summed);
    }
    out.push(s.finish());
    out.push(single(
        "dist.moment_mean",
        at,
        Measure::Rel,
        mean,
        closed_moments[0],
        tol.moment_mean_rel,
    ));

    let mgf = |t: f64| value(dist.mgf(t));
    out.push(single("dist.mgf_zero", at, Measure::Abs, 1.0, mgf(0.0), 0.0));
    let h = MGF_FD_STEP;
    out.push(single(
        "dist.mgf_derivative",
        at,
        Measure::Rel,
        mean,
        (mgf(h) - mgf(-h)) / (2.0 * h),
        tol.mgf_fd_rel,
    ));

    // central differences of orders 1..3; the step stays well inside the
    // region where e_λ(αe^t) exists
    let mut h = 0.005 / mean.max(1.0);
    if lambda < 0.0 {
        h = h.min(-(alpha * -lambda).ln() / 4.0);
    }
    let (fp, fm, f2p, f2m, f0) = (mgf(h), mgf(-h), mgf(2.0 * h), mgf(-2.0 * h), mgf(0.0));
    let diffs = [
        (fp - fm) / (2.0 * h),
        (fp - 2.0 * f0 + fm) / (h * h),
        (f2p - 2.0 * fp + 2.0 * fm - f2m) / (2.0 * h * h * h),
    ];
    let mut s = Sweep::new("dist.mgf_taylor", at, Measure::Rel, tol.mgf_taylor_rel);
    for (i, d) in diffs.iter().enumerate() {
        s.add(at.with_n(i as u64 + 1), closed_moments[i], *d);
    }
    out.push(s.finish());

    let mut s = Sweep::new("dist.pgf", at, Measure::Abs, tol.pgf_abs);
    s.add(at, 1.0, value(dist.pgf(1.0)));
    if let Ok(t) = &table {
        for &z in &PGF_TS {
            s.add(at, t.pgf(z), value(dist.pgf(z)));
        }
    }
    out.push(s.finish());

    // Monte Carlo
    let seed = point_seed(grid.seed, p.index);
    let draws = dist.stream(seed).sample(grid.mc_samples).unwrap_or_default();
    let mut moments = Vec::new();
    if draws.len() == grid.mc_samples && grid.mc_samples > 1 {
        out.push(mc_band("dist.sample_mean", at, mean, variance, &draws, tol.mc_sigmas));
        if let Ok(t) = &table {
            out.push(chi_check(
                "dist.sample_chi_square",
                at,
                &draws,
                t,
                tol.chi_square_significance,
            ));
        }
        let again = dist
            .stream(seed)
            .sample(REPRODUCIBLE_DRAWS.min(draws.len()))
            .unwrap_or_default();
        let mismatches = again.iter().zip(&draws).filter(|(a, b)| a != b).count()
            + (again.len().abs_diff(REPRODUCIBLE_DRAWS.min(draws.len())));
        out.push(single(
            "dist.sample_reproducible",
            at,
            Measure::Abs,
            0.0,
            mismatches as f64,
            0.0,
        ));
        for n in 1..=MOMENT_MAX_ORDER {
            let (mc, stderr) = mean_and_stderr(&draws, |x| x.powi(n as i32));
            let closed = closed_moments[n as usize - 1];
            let summed = table_moments[n as usize - 1];
            moments.push(MomentReport {
                params,
                order: n,
                closed_form: closed,
                table_sum: summed,
                monte_carlo: mc,
                monte_carlo_stderr: stderr,
                rel_discrepancy: (closed - summed).abs() / closed.abs().max(1e-300),
            });
        }
    } else if grid.mc_samples > 1 {
        out.push(single("dist.sample_mean", at, Measure::Abs, mean, f64::NAN, 0.0));
    }

    // iid sums
    for k in 1..=grid.k_max {
        let label = at.with_k(k);
        let spec = IidSumSpec::new(k, params).expect("k >= 1");
        let conv = oracle_convolution(&vec![dist; k], grid.n_max);
        let mut ca = Sweep::new("sum.closed_vs_altsum", label, Measure::Rel, tol.sum_altsum_rel);
        let mut cc = Sweep::new(
            "sum.closed_vs_convolution",
            label,
            Measure::Abs,
            tol.sum_convolution_abs,
        );
        let mut ac = Sweep::new(
            "sum.altsum_vs_convolution",
            label,
            Measure::Abs,
            tol.sum_convolution_abs,
        );
        for n in k as u64..=grid.n_max {
            let closed = spec.pmf(n);
            let alt = spec.pmf_altsum(n);
            let c = conv.as_ref().map(|t| t.get(n)).unwrap_or(f64::NAN);
            ca.add(label.with_n(n), alt, closed);
            cc.add(label.with_n(n), c, closed);
            ac.add(label.with_n(n), c, alt);
        }
        out.extend([ca.finish(), cc.finish(), ac.finish()]);

        let sum_table = spec.table(DEFAULT_TAIL_TOL);
        let mut s = Sweep::new("sum.pgf_factorization", label, Measure::Abs, tol.pgf_factorization_abs);
        for &z in &PGF_TS {
            let want = value(dist.pgf(z)).powi(k as i32);
            s.add(label, want, sum_table.as_ref().map(|t| t.pgf(z)).unwrap_or(f64::NAN));
        }
        out.push(s.finish());
        let table_mean = sum_table.as_ref().map(|t| t.mean()).unwrap_or(f64::NAN);
        out.push(single(
            "sum.mean_additivity",
            label,
            Measure::Rel,
            k as f64 * mean,
            table_mean,
            tol.mean_additivity_rel,
        ));

        if MC_SUM_KS.contains(&k) && grid.mc_samples > 1 {
            let variates = dist
                .stream(point_seed(seed, k))
                .sample(k * grid.mc_samples)
                .unwrap_or_default();
            let sums: Vec<u64> = variates.chunks_exact(k).map(|c| c.iter().sum()).collect();
            if sums.len() == grid.mc_samples {
                out.push(mc_band(
                    "sum.sample_mean",
                    label,
                    k as f64 * mean,
                    k as f64 * variance,
                    &sums,
                    tol.mc_sigmas,
                ));
                if let Ok(t) = &sum_table {
                    out.push(chi_check(
                        "sum.sample_chi_square",
                        label,
                        &sums,
                        t,
                        tol.chi_square_significance,
                    ));
                }
            } else {
                out.push(single(
                    "sum.sample_mean",
                    label,
                    Measure::Abs,
                    k as f64 * mean,
                    f64::NAN,
                    0.0,
                ));
            }
        }

        if (2..=ENUMERATION_MAX_K).contains(&k) {
            let mut s = Sweep::new("hetero.equal_alpha_vs_iid", label, Measure::Rel, tol.hetero_iid_rel);
            let hetero = HeteroSumSpec::new(lambda, vec![alpha; k]);
            for n in k as u64..=grid.n_max {
                s.add(
                    label.with_n(n),
                    spec.pmf(n),
                    hetero.as_ref().map(|h| value(h.pmf(n))).unwrap_or(f64::NAN),
                );
            }
            out.push(s.finish());
        }
    }
    (out, moments)
}

/// Sums with distinct α_i sharing one λ: for every λ of the grid (taken
/// literally, not scaled by α) the valid grid α values are combined in
/// prefixes of increasing length.
fn hetero_checks(grid: &GridSpec, tol: &Tolerances) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for &lambda in &grid.lambdas {
        let alphas: Vec<f64> = grid
            .alphas
            .iter()
            .copied()
            .filter(|&a| DegeneracyParams::new(a, lambda).is_ok())
            .collect();
        let max_k = alphas.len().min(grid.k_max).min(ENUMERATION_MAX_K);
        for k in 2..=max_k {
            let label = PointLabel::lambda(lambda).with_k(k);
            let chosen = alphas[..k].to_vec();
            let Ok(spec) = HeteroSumSpec::new(lambda, chosen.clone()) else {
                continue;
            };
            let mut reversed = chosen.clone();
            reversed.reverse();
            let flipped = HeteroSumSpec::new(lambda, reversed);
            let table = spec.table(DEFAULT_TAIL_TOL);

            let mut en = Sweep::new("hetero.enumeration_vs_convolution", label, Measure::Abs, tol.hetero_abs);
            for n in k as u64..=ENUMERATION_MAX_N.min(grid.n_max) {
                en.add(label.with_n(n), value(spec.pmf_enumerated(n)), value(spec.pmf(n)));
            }
            out.push(en.finish());

            let mut perm = Sweep::new("hetero.permutation", label, Measure::Abs, tol.hetero_abs);
            for n in k as u64..=grid.n_max {
                let b = flipped.as_ref().map(|h| value(h.pmf(n))).unwrap_or(f64::NAN);
                perm.add(label.with_n(n), value(spec.pmf(n)), b);
            }
            out.push(perm.finish());

            let want: f64 = chosen
                .iter()
                .map(|&a| DztpDist::with(a, lambda).map(|d| d.mean()).unwrap_or(f64::NAN))
                .sum();
            let got = table.as_ref().map(|t| t.mean()).unwrap_or(f64::NAN);
            out.push(single(
                "hetero.mean_additivity",
                label,
                Measure::Rel,
                want,
                got,
                tol.mean_additivity_rel,
            ));
        }
    }
    out
}
