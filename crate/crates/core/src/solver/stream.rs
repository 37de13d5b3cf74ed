//! Row-to-row streaming of the interior block.
//!
//! Interior row `i` of the compressed inverse is the pure band
//! `v[|i-j|]`, `|i-j| <= h`, with `v_m = v_0 rho^-m`. Its product with `rhs`
//! splits into a left sum `phi_i` (columns `i-h..=i`) and a right sum
//! `phi'_i` (columns `i+1..=i+h`). Moving one row down divides every left
//! coefficient by `rho` and multiplies every right coefficient by `rho`:
//!
//! ```text
//! phi_{i+1}  = (phi_i - v_h rhs[i-h]) / rho + v_0 rhs[i+1]
//! phi'_{i+1} = rho phi'_i - v_0 rhs[i+1] + v_h rhs[i+1+h]
//! ```
//!
//! [`advance_stream`] applies exactly this step. Since `|rho| > 1` the second
//! recurrence multiplies any rounding error by `|rho|` per row, so the solvers
//! run the right sum backwards instead, where the same identity divides by
//! `rho`. They carry `Q_i = rho phi'_i` so each backward step is one
//! multiply-add and one subtraction:
//!
//! ```text
//! Q_i = Q_{i+1} / rho + v_0 rhs[i+1] - v_h rhs[i+1+h],   x_i = phi_i + Q_i / rho
//! ```
//!
//! Both sweeps only ever shrink errors. [`stream_drift`] measures what the
//! forward form does instead.

use rayon::prelude::*;

use super::{check_len, residual_sup, SolveOptions, SolveReport};
use crate::error::{Error, Result};
use crate::inverse::CompressedInverse;

/// Left and right partial sums of one interior row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamState {
    pub phi: f64,
    pub phi_prime: f64,
    /// 1-based row the sums belong to.
    pub row: usize,
    /// Half-band `bandwidth - 1`.
    pub h: usize,
}

/// Operation counts of a streaming solve, in multiply/add-class operations
/// with a multiply-add pair counted once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StreamCost {
    /// `b' = v_h rhs` and `b'' = v_0 rhs` for the rows a segment covers.
    pub prescale: u64,
    /// Extra `b'` products reaching `h` rows past each end of a segment.
    pub halo: u64,
    /// Direct products of the boundary blocks B and B'.
    pub boundary: u64,
    /// Direct seeding of the sums at segment ends.
    pub seeding: u64,
    /// Row updates and output sums of the interior.
    pub updates: u64,
    pub interior_rows: u64,
}

impl StreamCost {
    pub fn total(&self) -> u64 {
        self.prescale + self.halo + self.boundary + self.seeding + self.updates
    }

    /// Update cost per interior row, seeding excluded.
    pub fn per_row(&self) -> f64 {
        if self.interior_rows == 0 {
            0.0
        } else {
            self.updates as f64 / self.interior_rows as f64
        }
    }

    fn add(&mut self, other: StreamCost) {
        self.prescale += other.prescale;
        self.halo += other.halo;
        self.boundary += other.boundary;
        self.seeding += other.seeding;
        self.updates += other.updates;
        self.interior_rows += other.interior_rows;
    }
}

pub(crate) fn is_interior(inv: &CompressedInverse, i: usize) -> bool {
    let d = inv.d();
    i > d && i + d <= inv.order()
}

/// `sum_{m=0..=h} v_m rhs[i-m]`, 1-based `i`.
pub(crate) fn left_sum(inv: &CompressedInverse, rhs: &[f64], i: usize) -> f64 {
    let v = inv.band_values();
    let mut acc = 0.0;
    for (m, vm) in v.iter().enumerate() {
        acc += vm * rhs[i - 1 - m];
    }
    acc
}

/// `sum_{m=1..=h} v_m rhs[i+m]`.
pub(crate) fn right_sum(inv: &CompressedInverse, rhs: &[f64], i: usize) -> f64 {
    let v = inv.band_values();
    let mut acc = 0.0;
    for (m, vm) in v.iter().enumerate().skip(1) {
        acc += vm * rhs[i - 1 + m];
    }
    acc
}

/// `Q_i = rho phi'_i = sum_{m=1..=h} v_{m-1} rhs[i+m]`.
fn scaled_right_sum(inv: &CompressedInverse, rhs: &[f64], i: usize) -> f64 {
    let v = inv.band_values();
    let h = v.len() - 1;
    let mut acc = 0.0;
    for (m, vm) in v[..h].iter().enumerate() {
        acc += vm * rhs[i + m];
    }
    acc
}

/// Row `i` of `A rhs` through [`CompressedInverse::entry`]; used for the
/// boundary blocks where the correction rows break the Toeplitz shift.
pub(crate) fn boundary_row(inv: &CompressedInverse, rhs: &[f64], i: usize) -> f64 {
    let n = inv.order();
    let h = inv.half_band();
    let lo = i.saturating_sub(h).max(1);
    let hi = (i + h).min(n);
    let mut acc = 0.0;
    for j in lo..=hi {
        acc += inv.entry(i, j).expect("index in range") * rhs[j - 1];
    }
    acc
}

/// Direct `phi_i`, `phi'_i` for an interior row `d < i <= n - d`.
pub fn seed_stream(inv: &CompressedInverse, rhs: &[f64], i: usize) -> Result<StreamState> {
    check_len(inv.order(), rhs)?;
    if !is_interior(inv, i) {
        return Err(not_interior(inv, i));
    }
    Ok(StreamState {
        phi: left_sum(inv, rhs, i),
        phi_prime: right_sum(inv, rhs, i),
        row: i,
        h: inv.half_band(),
    })
}

/// One forward step of both partial sums, exactly as in the module docs.
pub fn advance_stream(
    state: &StreamState,
    inv: &CompressedInverse,
    rhs: &[f64],
    opts: &SolveOptions,
) -> Result<StreamState> {
    check_len(inv.order(), rhs)?;
    let last = inv.order() - inv.d();
    let i = state.row;
    if !is_interior(inv, i) || i + 1 > last {
        return Err(Error::RowOutOfRange { row: i, last });
    }
    let v = inv.band_values();
    let h = inv.half_band();
    let rho = inv.params().rho;
    let (v0, vh) = (v[0], v[h]);
    // 0-based: rhs[i - h - 1] is column i - h, rhs[i] is column i + 1
    let carried = if opts.omit_left_correction {
        state.phi
    } else {
        state.phi - vh * rhs[i - h - 1]
    };
    Ok(StreamState {
        phi: carried / rho + v0 * rhs[i],
        phi_prime: rho * state.phi_prime - v0 * rhs[i] + vh * rhs[i + h],
        row: i + 1,
        h,
    })
}

fn not_interior(inv: &CompressedInverse, row: usize) -> Error {
    Error::NotInteriorRow {
        row,
        lo: inv.d() + 1,
        hi: inv.order().saturating_sub(inv.d()),
    }
}

struct Kernel<'a> {
    inv: &'a CompressedInverse,
    rhs: &'a [f64],
    v0: f64,
    vh: f64,
    inv_rho: f64,
    h: usize,
    omit: bool,
    reseed: usize,
}

/// Per-segment prescaled right-hand side. For the segment starting at row
/// `s`, `left[k] = v_h rhs[s - h - 1 + k]` (0-based rhs index) and
/// `diag[k] = v_0 rhs[s + k]`.
#[derive(Default)]
struct Scratch {
    left: Vec<f64>,
    diag: Vec<f64>,
}

impl Kernel<'_> {
    /// Rows `first..first + out.len()` (1-based), split into reseeded segments.
    fn run(&self, first: usize, out: &mut [f64]) -> StreamCost {
        let mut cost = StreamCost::default();
        let mut scratch = Scratch::default();
        for (k, seg) in out.chunks_mut(self.reseed).enumerate() {
            cost.add(self.segment(first + k * self.reseed, seg, &mut scratch));
        }
        cost
    }

    fn segment(&self, s: usize, out: &mut [f64], scratch: &mut Scratch) -> StreamCost {
        let len = out.len();
        let h = self.h as u64;
        let mut cost = StreamCost {
            interior_rows: len as u64,
            ..StreamCost::default()
        };
        if len == 1 {
            out[0] = left_sum(self.inv, self.rhs, s) + right_sum(self.inv, self.rhs, s);
            cost.seeding = 2 * h + 1;
            return cost;
        }
        let e = s + len - 1;
        let (h_us, inv_rho) = (self.h, self.inv_rho);

        let lo = s - h_us - 1;
        scratch.left.clear();
        scratch.left.extend(self.rhs[lo..e + h_us].iter().map(|r| self.vh * r));
        scratch.diag.clear();
        scratch.diag.extend(self.rhs[s..e].iter().map(|r| self.v0 * r));
        let (left, diag) = (&scratch.left[..], &scratch.diag[..]);

        // forward: left sums
        let mut phi = left_sum(self.inv, self.rhs, s);
        out[0] = phi;
        if self.omit {
            for k in 0..len - 1 {
                phi = phi * inv_rho + diag[k];
                out[k + 1] = phi;
            }
        } else {
            for k in 0..len - 1 {
                phi = (phi - left[k]) * inv_rho + diag[k];
                out[k + 1] = phi;
            }
        }

        // backward: scaled right sums, folded into the output
        let mut q = scaled_right_sum(self.inv, self.rhs, e);
        out[len - 1] += q * inv_rho;
        for k in (0..len - 1).rev() {
            q = q * inv_rho + diag[k] - left[k + 2 * h_us + 1];
            out[k] += q * inv_rho;
        }

        let steps = (len - 1) as u64;
        let forward = if self.omit { 1 } else { 2 };
        cost.prescale = 2 * steps + 1;
        cost.halo = 2 * h;
        cost.seeding = (h + 1) + h;
        cost.updates = steps * (forward + 2) + len as u64;
        cost
    }
}

fn prepare(inv: &CompressedInverse, rhs: &[f64], opts: &SolveOptions) -> Result<()> {
    opts.validate()?;
    let n = inv.order();
    check_len(n, rhs)?;
    if n <= 2 * inv.d() {
        return Err(Error::OrderTooSmall { n, d: inv.d() });
    }
    Ok(())
}

fn boundary_blocks(inv: &CompressedInverse, rhs: &[f64], out: &mut [f64]) -> u64 {
    let n = inv.order();
    let d = inv.d();
    let mut ops = 0;
    for i in (1..=d).chain(n - d + 1..=n) {
        out[i - 1] = boundary_row(inv, rhs, i);
        let h = inv.half_band();
        ops += ((i + h).min(n) - i.saturating_sub(h).max(1) + 1) as u64;
    }
    ops
}

fn solve_chunked(
    inv: &CompressedInverse,
    rhs: &[f64],
    opts: &SolveOptions,
    parallel: bool,
) -> Result<(Vec<f64>, StreamCost)> {
    prepare(inv, rhs, opts)?;
    let n = inv.order();
    let d = inv.d();
    let mut out = vec![0.0; n];
    let mut cost = StreamCost {
        boundary: boundary_blocks(inv, rhs, &mut out),
        ..StreamCost::default()
    };

    let v = inv.band_values();
    let kernel = Kernel {
        inv,
        rhs,
        v0: v[0],
        vh: v[v.len() - 1],
        inv_rho: 1.0 / inv.params().rho,
        h: inv.half_band(),
        omit: opts.omit_left_correction,
        reseed: opts.reseed_interval,
    };
    let interior = &mut out[d..n - d];
    if parallel {
        let n_int = interior.len();
        let p = opts.chunks.min(n_int);
        let chunk_len = n_int.div_ceil(p);
        let parts: Vec<StreamCost> = interior
            .par_chunks_mut(chunk_len)
            .enumerate()
            .map(|(k, part)| kernel.run(d + 1 + k * chunk_len, part))
            .collect();
        for c in parts {
            cost.add(c);
        }
    } else {
        cost.add(kernel.run(d + 1, interior));
    }
    Ok((out, cost))
}

fn report(inv: &CompressedInverse, rhs: &[f64], out: Vec<f64>, cost: StreamCost) -> Result<SolveReport> {
    let residual = residual_sup(inv.matrix(), &out, rhs)?;
    Ok(SolveReport {
        solution: out,
        residual_sup: residual,
        flops_estimate: cost.total(),
        method_used: super::Method::Streaming,
    })
}

/// Sequential streaming solve over the whole interior.
pub fn streaming_solve(inv: &CompressedInverse, rhs: &[f64], opts: &SolveOptions) -> Result<SolveReport> {
    let (out, cost) = solve_chunked(inv, rhs, &SolveOptions { chunks: 1, ..*opts }, false)?;
    report(inv, rhs, out, cost)
}

/// Streaming solve with the interior split into `opts.chunks` contiguous
/// pieces that seed and stream independently.
pub fn parallel_solve(inv: &CompressedInverse, rhs: &[f64], opts: &SolveOptions) -> Result<SolveReport> {
    let (out, cost) = solve_chunked(inv, rhs, opts, true)?;
    report(inv, rhs, out, cost)
}

impl StreamCost {
    /// Cost breakdown of a streaming solve without keeping the solution.
    pub fn measure(inv: &CompressedInverse, rhs: &[f64], opts: &SolveOptions) -> Result<Self> {
        let parallel = opts.chunks > 1;
        solve_chunked(inv, rhs, opts, parallel).map(|(_, c)| c)
    }
}

/// Relative error of `phi + phi'` after each of `steps` forward
/// [`advance_stream`] steps from row `start`, against direct seeding. Each
/// entry is `|streamed - direct| / max(|direct|, scale)` where `scale` is the
/// largest `|phi| + |phi'|` among the seeded rows.
pub fn stream_drift(
    inv: &CompressedInverse,
    rhs: &[f64],
    start: usize,
    steps: usize,
    opts: &SolveOptions,
) -> Result<Vec<f64>> {
    let mut state = seed_stream(inv, rhs, start)?;
    let mut direct = Vec::with_capacity(steps);
    for k in 1..=steps {
        direct.push(seed_stream(inv, rhs, start + k)?);
    }
    let scale = direct
        .iter()
        .map(|s| s.phi.abs() + s.phi_prime.abs())
        .fold(f64::MIN_POSITIVE, f64::max);
    let mut drift = Vec::with_capacity(steps);
    for want in &direct {
        state = advance_stream(&state, inv, rhs, opts)?;
        let got = state.phi + state.phi_prime;
        let exact = want.phi + want.phi_prime;
        drift.push((got - exact).abs() / exact.abs().max(scale));
    }
    Ok(drift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ToeplitzTridiagonal;
    use crate::solver::banded_solve;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn inv(a: f64, b: f64, n: usize) -> CompressedInverse {
        CompressedInverse::build(&ToeplitzTridiagonal::new(a, b, n).unwrap(), 53).unwrap()
    }

    fn random(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    fn unit(n: usize, i: usize) -> Vec<f64> {
        let mut e = vec![0.0; n];
        e[i - 1] = 1.0;
        e
    }

    #[test]
    fn seed_on_basis_vectors() {
        let a = inv(4.0, 1.0, 1000);
        let s = seed_stream(&a, &unit(1000, 500), 500).unwrap();
        assert_eq!(s.phi, a.band_values()[0]);
        assert_eq!(s.phi_prime, 0.0);
        assert_eq!(s.h, 26);
        let s = seed_stream(&a, &unit(1000, 501), 500).unwrap();
        assert_eq!(s.phi, 0.0);
        assert_eq!(s.phi_prime, a.band_values()[1]);
    }

    #[test]
    fn seed_matches_banded() {
        let a = inv(4.0, 1.0, 1000);
        let rhs = random(1000, 7);
        let x = banded_solve(&a, &rhs).unwrap();
        let s = seed_stream(&a, &rhs, 600).unwrap();
        assert_eq!(s.phi + s.phi_prime, x[599]);
    }

    #[test]
    fn seed_rejects_boundary_rows() {
        let a = inv(4.0, 1.0, 1000);
        let rhs = vec![0.0; 1000];
        assert!(matches!(seed_stream(&a, &rhs, 27), Err(Error::NotInteriorRow { .. })));
        assert!(seed_stream(&a, &rhs, 28).is_ok());
        assert!(seed_stream(&a, &rhs, 973).is_ok());
        assert!(seed_stream(&a, &rhs, 974).is_err());
    }

    #[test]
    fn single_advance_matches_seed() {
        let a = inv(4.0, 1.0, 1000);
        let rhs = random(1000, 11);
        let opts = SolveOptions::default();
        for i in [28, 300, 700, 972] {
            let s = seed_stream(&a, &rhs, i).unwrap();
            let next = advance_stream(&s, &a, &rhs, &opts).unwrap();
            let want = seed_stream(&a, &rhs, i + 1).unwrap();
            let scale = want.phi.abs() + want.phi_prime.abs();
            let got = next.phi + next.phi_prime;
            let exact = want.phi + want.phi_prime;
            assert!((got - exact).abs() <= 4.0 * f64::EPSILON * scale, "row {i}");
            assert_eq!(next.row, i + 1);
        }
        let last = seed_stream(&a, &rhs, 973).unwrap();
        assert!(matches!(
            advance_stream(&last, &a, &rhs, &opts),
            Err(Error::RowOutOfRange { row: 973, last: 973 })
        ));
    }

    #[test]
    fn advance_zero_rhs_stays_zero() {
        let a = inv(3.0, 1.0, 500);
        let rhs = vec![0.0; 500];
        let mut s = seed_stream(&a, &rhs, 100).unwrap();
        for _ in 0..50 {
            s = advance_stream(&s, &a, &rhs, &SolveOptions::default()).unwrap();
            assert_eq!((s.phi, s.phi_prime), (0.0, 0.0));
        }
    }

    #[test]
    fn omission_is_exact_when_dropped_term_vanishes() {
        let a = inv(4.0, 1.0, 1000);
        let mut rhs = random(1000, 3);
        let i = 400;
        rhs[i - 26 - 1] = 0.0;
        let s = seed_stream(&a, &rhs, i).unwrap();
        let keep = advance_stream(&s, &a, &rhs, &SolveOptions::default()).unwrap();
        let omit = SolveOptions {
            omit_left_correction: true,
            ..SolveOptions::default()
        };
        let drop = advance_stream(&s, &a, &rhs, &omit).unwrap();
        assert_eq!(keep.phi.to_bits(), drop.phi.to_bits());
        assert_eq!(keep.phi_prime.to_bits(), drop.phi_prime.to_bits());
    }

    #[test]
    fn forward_right_sum_is_unstable() {
        let a = inv(4.0, 1.0, 2000);
        let rhs = random(2000, 5);
        let drift = stream_drift(&a, &rhs, 100, 60, &SolveOptions::default()).unwrap();
        assert!(drift[0] < 1e-15);
        // rounding noise grows by |rho| ~ 3.7 per row
        assert!(drift[59] > 1e-3, "{:e}", drift[59]);
    }

    #[test]
    fn streaming_matches_banded() {
        let a = inv(3.0, 1.0, 5000);
        let rhs = random(5000, 9);
        let x = banded_solve(&a, &rhs).unwrap();
        for reseed in [1, 7, 4096] {
            let opts = SolveOptions {
                reseed_interval: reseed,
                ..SolveOptions::default()
            };
            let r = streaming_solve(&a, &rhs, &opts).unwrap();
            let err = r
                .solution
                .iter()
                .zip(&x)
                .map(|(p, q)| (p - q).abs())
                .fold(0.0, f64::max);
            assert!(err < 1e-15, "reseed {reseed}: {err:e}");
        }
    }

    #[test]
    fn first_column_values() {
        let n = 10_000;
        let a = inv(3.0, 1.0, n);
        let r = streaming_solve(&a, &unit(n, 1), &SolveOptions::default()).unwrap();
        assert!((r.solution[0] - 0.3819660).abs() < 1e-7);
        assert!((r.solution[1] + 0.1458980).abs() < 1e-7);
    }

    #[test]
    fn too_small_for_streaming() {
        let a = inv(3.0, 1.0, 60);
        assert!(matches!(
            streaming_solve(&a, &vec![1.0; 60], &SolveOptions::default()),
            Err(Error::OrderTooSmall { n: 60, d: 38 })
        ));
        assert!(streaming_solve(&a, &vec![1.0; 59], &SolveOptions::default()).is_err());
    }

    #[test]
    fn one_row_chunks_equal_banded() {
        let n = 400;
        let a = inv(4.0, -1.0, n);
        let rhs = random(n, 21);
        let n_int = n - 2 * a.d();
        let opts = SolveOptions {
            chunks: n_int,
            ..SolveOptions::default()
        };
        let r = parallel_solve(&a, &rhs, &opts).unwrap();
        let x = banded_solve(&a, &rhs).unwrap();
        assert_eq!(r.solution, x);
    }

    #[test]
    fn cost_per_row() {
        let n = 100_000;
        let a = inv(4.0, 1.0, n);
        let rhs = random(n, 1);
        let c = StreamCost::measure(&a, &rhs, &SolveOptions::default()).unwrap();
        assert!(c.prescale <= 2 * n as u64);
        assert!(c.per_row() <= 5.0);
        let omit = SolveOptions {
            omit_left_correction: true,
            ..SolveOptions::default()
        };
        let c = StreamCost::measure(&a, &rhs, &omit).unwrap();
        assert!(c.per_row() <= 4.0);
    }
}
