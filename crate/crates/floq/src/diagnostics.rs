//! Scrambling diagnostics: operator size, scrambling times, Lyapunov
//! exponent, and stabilizer-rank entanglement entropy.
//!
//! Operator-size sweeps evolve *all* `2 n` single-qubit initial operators at
//! once by keeping them as the rows of a `2n x 2n` matrix `T` and stepping
//! `T <- T M^T` (a row of `T M^T` is exactly `M` applied to that row as a
//! column vector). This turns the per-operator sweep into one word-packed
//! matrix product per step and removes all sampling noise: means are over
//! the full deterministic ensemble.
//!
//! Entanglement entropy of a qubit region `A` in the evolved all-zeros
//! stabilizer state is `S_A = rank(A-rows of S(t)) - |A|`, where `S(t)` is
//! the `2n x n` matrix of evolved Z stabilizers and the A-rows are the X and
//! Z rows of the qubits in `A`.

use crate::connectivity::Infection;
use crate::error::{Error, Result};
use crate::floquet::{z_stabilizer_matrix, FloquetCircuit};
use crate::gf2::BitMatrix;
use crate::pauli::{support_size, PauliVec};

/// Validate a region: non-empty, strictly ascending, in range.
pub(crate) fn check_region(qubits: &[usize], total: usize) -> Result<()> {
    if qubits.is_empty() {
        return Err(Error::EmptyRegion);
    }
    for w in qubits.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvariantViolation(
                "region must be sorted and duplicate-free".into(),
            ));
        }
    }
    let last = *qubits.last().unwrap();
    if last >= total {
        return Err(Error::QubitOutOfRange { index: last, total });
    }
    Ok(())
}

/// The X and Z rows of the given qubits, X rows first, both ascending.
pub(crate) fn pauli_rows(m: &BitMatrix, qubits: &[usize], total: usize) -> BitMatrix {
    let mut rows: Vec<usize> = qubits.to_vec();
    rows.extend(qubits.iter().map(|&q| total + q));
    m.select_rows(&rows)
}

// ---------------------------------------------------------------------------
// Operator size
// ---------------------------------------------------------------------------

/// Sizes `n(t)` of one evolving Pauli string for `t = 0..=t_max`.
pub fn opsize_series(circuit: &FloquetCircuit, initial: &PauliVec, t_max: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(t_max + 1);
    let mut p = initial.clone();
    out.push(p.size());
    for _ in 0..t_max {
        p = circuit.step_pauli(&p);
        out.push(p.size());
    }
    out
}

/// Size series for every single-qubit initial operator, indexed `X_0 ..
/// X_{n-1}, Z_0 .. Z_{n-1}`; each inner series covers `t = 0..=t_max`.
pub fn opsize_all_series(circuit: &FloquetCircuit, t_max: usize) -> Vec<Vec<usize>> {
    let total = circuit.total_qubits();
    let mt = circuit.step_map().matrix().transpose();
    let mut rows = BitMatrix::identity(2 * total);
    let mut out: Vec<Vec<usize>> = (0..2 * total)
        .map(|_| Vec::with_capacity(t_max + 1))
        .collect();
    for (b, series) in out.iter_mut().enumerate() {
        series.push(support_size(rows.row(b), total));
    }
    for _ in 0..t_max {
        rows = rows.mul(&mt);
        for (b, series) in out.iter_mut().enumerate() {
            series.push(support_size(rows.row(b), total));
        }
    }
    out
}

/// First `t` with `n(t) >= threshold`, if any.
pub fn scrambling_time(series: &[usize], threshold: usize) -> Option<usize> {
    series.iter().position(|&s| s >= threshold)
}

/// Mean and standard error of the scrambling time over all `2 n`
/// single-qubit initial operators, evolving only as long as needed.
pub fn mean_scrambling_time(
    circuit: &FloquetCircuit,
    threshold: usize,
    t_cap: usize,
) -> Result<(f64, f64)> {
    let total = circuit.total_qubits();
    let mt = circuit.step_map().matrix().transpose();
    let mut rows = BitMatrix::identity(2 * total);
    let mut hits: Vec<Option<usize>> = vec![None; 2 * total];
    let record = |rows: &BitMatrix, t: usize, hits: &mut Vec<Option<usize>>| {
        for (b, hit) in hits.iter_mut().enumerate() {
            if hit.is_none() && support_size(rows.row(b), total) >= threshold {
                *hit = Some(t);
            }
        }
    };
    record(&rows, 0, &mut hits);
    let mut t = 0;
    while hits.iter().any(Option::is_none) {
        if t == t_cap {
            return Err(Error::ThresholdNotReached { threshold, t_cap });
        }
        rows = rows.mul(&mt);
        t += 1;
        record(&rows, t, &mut hits);
    }
    let ts: Vec<f64> = hits.into_iter().map(|h| h.unwrap() as f64).collect();
    let m = ts.len() as f64;
    let mean = ts.iter().sum::<f64>() / m;
    let var = ts.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1.0);
    Ok((mean, (var / m).sqrt()))
}

/// Late-time averaging window `[start, start + 55]` with
/// `start = ceil(3 log4(total)) + 5`.
pub fn plateau_window(total: usize) -> (usize, usize) {
    let l = 3.0 * (total as f64).ln() / 4.0f64.ln();
    let start = (l - 1e-9).ceil() as usize + 5;
    (start, start + 55)
}

/// Mean operator size over the late-time window, averaged over the full
/// single-qubit ensemble. Scrambled circuits plateau at 3/4 of the dynamical
/// component size.
pub fn late_time_mean_size(circuit: &FloquetCircuit) -> f64 {
    let (start, end) = plateau_window(circuit.total_qubits());
    let all = opsize_all_series(circuit, end);
    let mut acc = 0.0f64;
    let mut count = 0usize;
    for series in &all {
        for &s in &series[start..=end] {
            acc += s as f64;
            count += 1;
        }
    }
    acc / count as f64
}

// ---------------------------------------------------------------------------
// Lyapunov exponent
// ---------------------------------------------------------------------------

/// Natural-log abscissa used in the scrambling-time fit.
pub fn lyapunov_abscissa(n_side: usize) -> f64 {
    ((n_side * n_side) as f64 / 2.0).ln()
}

/// Least-squares fit of mean scrambling time against `ln(N^2 / 2)`.
#[derive(Clone, Copy, Debug)]
pub struct LyapunovFit {
    /// Inverse slope: the Lyapunov exponent.
    pub lambda: f64,
    /// Propagated standard error of `lambda`.
    pub lambda_err: f64,
    pub slope: f64,
    pub slope_err: f64,
    pub intercept: f64,
}

/// Fit `(N, mean t_s)` points. Needs at least 3 points with distinct `N`.
pub fn lyapunov_fit(points: &[(usize, f64)]) -> Result<LyapunovFit> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints(points.len()));
    }
    let m = points.len() as f64;
    let xy: Vec<(f64, f64)> = points
        .iter()
        .map(|&(n, ts)| (lyapunov_abscissa(n), ts))
        .collect();
    let xbar = xy.iter().map(|p| p.0).sum::<f64>() / m;
    let ybar = xy.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx = xy.iter().map(|p| (p.0 - xbar) * (p.0 - xbar)).sum::<f64>();
    let sxy = xy.iter().map(|p| (p.0 - xbar) * (p.1 - ybar)).sum::<f64>();
    if sxx < 1e-12 {
        return Err(Error::DegenerateFit);
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let sse = xy
        .iter()
        .map(|p| {
            let r = p.1 - (intercept + slope * p.0);
            r * r
        })
        .sum::<f64>();
    let slope_err = (sse / (m - 2.0) / sxx).sqrt();
    if slope.abs() < 1e-12 {
        return Err(Error::DegenerateFit);
    }
    Ok(LyapunovFit {
        lambda: 1.0 / slope,
        lambda_err: slope_err / (slope * slope),
        slope,
        slope_err,
        intercept,
    })
}

/// One measured point of the scrambling-time sweep.
#[derive(Clone, Copy, Debug)]
pub struct LyapunovPoint {
    pub n_side: usize,
    pub mean_ts: f64,
    pub sem_ts: f64,
}

/// Measure mean scrambling times (threshold `N^2 / 2`) over a list of side
/// lengths on the single layer.
pub fn lyapunov_sweep(
    rule: crate::connectivity::Rule,
    gate: &crate::clifford::GateSpec,
    sides: &[usize],
    threshold_override: Option<usize>,
) -> Result<Vec<LyapunovPoint>> {
    let mut out = Vec::with_capacity(sides.len());
    for &n in sides {
        let circuit = FloquetCircuit::new(crate::lattice::Layout::single(n)?, rule, gate.clone())?;
        let threshold = threshold_override.unwrap_or(n * n / 2);
        let t_cap = 40 + 4 * n; // generous: scrambling scales like log(N^2)
        let (mean, sem) = mean_scrambling_time(&circuit, threshold, t_cap)?;
        out.push(LyapunovPoint {
            n_side: n,
            mean_ts: mean,
            sem_ts: sem,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Region construction and entanglement entropy
// ---------------------------------------------------------------------------

/// A qubit region grown from a reference qubit along the infection cone.
#[derive(Clone, Debug)]
pub struct RegionA {
    pub reference: usize,
    /// Largest `t` whose full closure union is still inside the region; up
    /// to this time the evolved reference stabilizer is supported inside A.
    pub t_f: usize,
    /// Ascending qubit indices.
    pub qubits: Vec<usize>,
}

/// Grow a region of exactly `target` qubits around `reference`: take whole
/// infection-closure unions while they fit, then top up with the newest
/// closure generation in ascending index order.
pub fn build_region(circuit: &FloquetCircuit, reference: usize, target: usize) -> Result<RegionA> {
    let total = circuit.total_qubits();
    if target == 0 {
        return Err(Error::EmptyRegion);
    }
    if reference >= total {
        return Err(Error::QubitOutOfRange {
            index: reference,
            total,
        });
    }
    if target > total {
        return Err(Error::RegionUnreachable {
            target,
            component: total,
        });
    }
    let mut inf = Infection::new(circuit.partition(), circuit.qubit_perm(), &[reference])?;
    let mut unions = vec![inf.set().clone()];
    let cap = 4 * total + 16;
    while unions.last().unwrap().count_ones() < target {
        if unions.len() > cap {
            return Err(Error::RegionUnreachable {
                target,
                component: unions.last().unwrap().count_ones(),
            });
        }
        let before = inf.set().clone();
        inf.step();
        let mut next = unions.last().unwrap().clone();
        next |= inf.set();
        if *inf.set() == before && next == *unions.last().unwrap() {
            return Err(Error::RegionUnreachable {
                target,
                component: next.count_ones(),
            });
        }
        unions.push(next);
    }
    let hit = unions.len() - 1;
    let hit_count = unions[hit].count_ones();
    if hit_count == target {
        return Ok(RegionA {
            reference,
            t_f: hit,
            qubits: unions[hit].ones().collect(),
        });
    }
    // Partial last generation: keep the previous union whole and top up with
    // the smallest new indices.
    let prev = &unions[hit - 1];
    let mut qubits: Vec<usize> = prev.ones().collect();
    let need = target - qubits.len();
    let fresh: Vec<usize> = unions[hit].ones().filter(|&q| !prev.get(q)).collect();
    qubits.extend(fresh.into_iter().take(need));
    qubits.sort_unstable();
    Ok(RegionA {
        reference,
        t_f: hit - 1,
        qubits,
    })
}

/// Stabilizer-rank entanglement entropy of `region` after `t` steps.
pub fn entropy_of_set(circuit: &FloquetCircuit, region: &[usize], t: usize) -> Result<usize> {
    Ok(*entropy_series(circuit, region, t)?.last().unwrap())
}

/// Entropy of `region` for every `t = 0..=t_max`, evolving the stabilizer
/// matrix incrementally.
pub fn entropy_series(
    circuit: &FloquetCircuit,
    region: &[usize],
    t_max: usize,
) -> Result<Vec<usize>> {
    let total = circuit.total_qubits();
    check_region(region, total)?;
    let mut stab = z_stabilizer_matrix(total);
    let mut out = Vec::with_capacity(t_max + 1);
    let entropy = |s: &BitMatrix| {
        let sub = pauli_rows(s, region, total);
        let rank = sub.rank();
        debug_assert!(rank >= region.len(), "stabilizer rank below |A|");
        rank - region.len()
    };
    out.push(entropy(&stab));
    for _ in 0..t_max {
        stab = circuit.step_matrix(&stab);
        out.push(entropy(&stab));
    }
    Ok(out)
}

/// Start of the final plateau: the first `t` from which the series stays at
/// its last value, requiring at least the last five samples to be constant.
pub fn saturation_time(series: &[usize]) -> Option<usize> {
    if series.len() < 5 {
        return None;
    }
    let v = *series.last().unwrap();
    let mut t0 = series.len() - 1;
    while t0 > 0 && series[t0 - 1] == v {
        t0 -= 1;
    }
    if series.len() - t0 < 5 {
        return None;
    }
    Some(t0)
}
