//! Grid-seeded Levenberg-Marquardt over a torus of phases.

use std::f64::consts::{PI, TAU};

const JACOBIAN_STEP: f64 = 1e-6;
/// Upper bound on unknowns and equations.
const MAX_DIM: usize = 4;
const MAX_ITERATIONS: usize = 400;
/// Extra starting points placed this far from each refined root along every
/// axis, to pick up a second root sharing the same grid basin.
const SIBLING_OFFSETS: [f64; 4] = [-0.15, -0.05, 0.05, 0.15];

#[derive(Clone, Debug)]
pub(crate) struct Minimum {
    pub x: Vec<f64>,
    /// Root-mean-square of the equation mismatches.
    pub rms: f64,
}

/// Wraps into `(−π, π]`.
pub(crate) fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI { y - TAU } else { y }
}

struct Problem<F> {
    n: usize,
    m: usize,
    f: F,
}

impl<F: Fn(&[f64], &mut [f64])> Problem<F> {
    fn residuals(&self, x: &[f64]) -> [f64; MAX_DIM] {
        let mut r = [0.0; MAX_DIM];
        (self.f)(x, &mut r[..self.m]);
        r
    }

    fn cost(&self, x: &[f64]) -> f64 {
        self.residuals(x).iter().map(|e| e * e).sum()
    }

    /// Row-major `m×n` central-difference Jacobian.
    fn jacobian(&self, x: &[f64]) -> Vec<f64> {
        let (n, m) = (self.n, self.m);
        let mut jac = vec![0.0; m * n];
        let mut y = x.to_vec();
        for j in 0..n {
            y[j] = x[j] + JACOBIAN_STEP;
            let plus = self.residuals(&y);
            y[j] = x[j] - JACOBIAN_STEP;
            let minus = self.residuals(&y);
            y[j] = x[j];
            for i in 0..m {
                jac[i * n + j] = (plus[i] - minus[i]) / (2.0 * JACOBIAN_STEP);
            }
        }
        jac
    }

    /// Returns the refined point and its sum of squared mismatches.
    fn refine(&self, x0: Vec<f64>) -> (Vec<f64>, f64) {
        let n = self.n;
        let mut x = x0;
        let mut r = self.residuals(&x);
        let mut cost: f64 = r[..self.m].iter().map(|e| e * e).sum();
        let mut mu = 1e-3;
        for _ in 0..MAX_ITERATIONS {
            if cost < 1e-32 {
                break;
            }
            let jac = self.jacobian(&x);
            let mut jtj = vec![0.0; n * n];
            let mut jtr = vec![0.0; n];
            for i in 0..self.m {
                for a in 0..n {
                    jtr[a] -= jac[i * n + a] * r[i];
                    for b in 0..n {
                        jtj[a * n + b] += jac[i * n + a] * jac[i * n + b];
                    }
                }
            }
            let scale = (0..n).map(|i| jtj[i * n + i]).fold(0.0, f64::max).max(1e-300);
            let mut improved = false;
            while mu < 1e16 {
                let mut a = jtj.clone();
                for i in 0..n {
                    a[i * n + i] += mu * scale;
                }
                if let Some(delta) = solve_linear(a, jtr.clone(), n) {
                    let trial: Vec<f64> = x.iter().zip(&delta).map(|(a, b)| a + b).collect();
                    let tr = self.residuals(&trial);
                    let tc: f64 = tr[..self.m].iter().map(|e| e * e).sum();
                    if tc < cost {
                        // Stop on a negligible step or a stalled decrease
                        // at a nonzero minimum.
                        improved = delta.iter().any(|d| d.abs() > 1e-14) && tc < cost * (1.0 - 1e-10);
                        x = trial;
                        r = tr;
                        cost = tc;
                        mu = (mu / 3.0).max(1e-12);
                        break;
                    }
                }
                mu *= 4.0;
            }
            if !improved {
                break;
            }
        }
        (x, cost)
    }
}

/// All refined minima of `Σ eᵢ(x)²` for `x ∈ [−π, π)ⁿ`, sorted by residual
/// (duplicates included). `f` writes the `m` equation mismatches of a point.
///
/// Starting points are the grid's local minima plus `extra`. Without extra
/// seeds each refined root is also restarted from a few nearby points.
pub(crate) fn solve<F>(
    n: usize,
    m: usize,
    grid: usize,
    max_seeds: usize,
    extra: Vec<Vec<f64>>,
    f: F,
) -> Vec<Minimum>
where
    F: Fn(&[f64], &mut [f64]),
{
    assert!(n <= MAX_DIM && m <= MAX_DIM, "at most {MAX_DIM} unknowns and equations");
    let p = Problem { n, m, f };
    let rms = |cost: f64| (cost / m as f64).sqrt();
    if n == 0 {
        return vec![Minimum { x: vec![], rms: rms(p.cost(&[])) }];
    }

    let total = grid.pow(n as u32);
    let step = TAU / grid as f64;
    let coords = |mut idx: usize| -> [usize; MAX_DIM] {
        let mut c = [0; MAX_DIM];
        for slot in c[..n].iter_mut().rev() {
            *slot = idx % grid;
            idx /= grid;
        }
        c
    };
    let point = |c: &[usize]| -> Vec<f64> { c[..n].iter().map(|&i| -PI + i as f64 * step).collect() };
    let costs: Vec<f64> = (0..total)
        .map(|i| {
            let c = coords(i);
            let mut x = [0.0; MAX_DIM];
            for d in 0..n {
                x[d] = -PI + c[d] as f64 * step;
            }
            p.cost(&x[..n])
        })
        .collect();

    // Neighbour offsets in {-1, 0, 1}ⁿ without the centre, as per-axis
    // shifts modulo the grid.
    let offsets: Vec<[usize; MAX_DIM]> = (0..3usize.pow(n as u32))
        .filter(|&k| k != (3usize.pow(n as u32) - 1) / 2)
        .map(|mut k| {
            let mut o = [0; MAX_DIM];
            for slot in o[..n].iter_mut() {
                *slot = (k % 3 + grid - 1) % grid;
                k /= 3;
            }
            o
        })
        .collect();
    let is_local_min = |i: usize| {
        let c = coords(i);
        offsets.iter().all(|o| {
            let j = (0..n).fold(0, |acc, d| acc * grid + (c[d] + o[d]) % grid);
            costs[i] <= costs[j]
        })
    };
    let mut seeds: Vec<usize> = (0..total).filter(|&i| is_local_min(i)).collect();
    seeds.sort_by(|&a, &b| costs[a].total_cmp(&costs[b]).then(a.cmp(&b)));
    seeds.truncate(max_seeds);

    let mut found: Vec<Minimum> = Vec::new();
    let keep = |(x, cost): (Vec<f64>, f64), found: &mut Vec<Minimum>| {
        found.push(Minimum { x: x.into_iter().map(wrap).collect(), rms: rms(cost) });
    };
    for &i in &seeds {
        keep(p.refine(point(&coords(i))), &mut found);
    }
    if !extra.is_empty() {
        for x0 in extra {
            keep(p.refine(x0), &mut found);
        }
        found.sort_by(|a, b| a.rms.total_cmp(&b.rms));
        return found;
    }
    let roots: Vec<Vec<f64>> = found.iter().map(|r| r.x.clone()).collect();
    for root in roots {
        for axis in 0..n {
            for off in SIBLING_OFFSETS {
                let mut x0 = root.clone();
                x0[axis] += off;
                keep(p.refine(x0), &mut found);
            }
        }
    }
    found.sort_by(|a, b| a.rms.total_cmp(&b.rms));
    found
}

/// Gaussian elimination with partial pivoting on a row-major `n×n` system.
pub(crate) fn solve_linear(mut a: Vec<f64>, mut b: Vec<f64>, n: usize) -> Option<Vec<f64>> {
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))?;
        if a[pivot * n + col].abs() < 1e-300 {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            b.swap(pivot, col);
        }
        for row in col + 1..n {
            let factor = a[row * n + col] / a[col * n + col];
            for k in col..n {
                a[row * n + k] -= factor * a[col * n + k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row * n + k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row * n + row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wraps_into_half_open_interval() {
        assert_eq!(wrap(PI), PI);
        assert!((wrap(-PI) - PI).abs() < 1e-15);
        assert!((wrap(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(wrap(0.25), 0.25);
    }

    #[test]
    fn linear_solve() {
        let x = solve_linear(vec![0.0, 2.0, 1.0, 1.0], vec![4.0, 3.0], 2).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 2.0).abs() < 1e-15);
        assert!(solve_linear(vec![1.0, 2.0, 2.0, 4.0], vec![1.0, 1.0], 2).is_none());
    }

    #[test]
    fn finds_both_roots_of_a_cosine() {
        let sols = solve(1, 1, 64, 64, vec![], |x, r| r[0] = x[0].cos() - 0.3);
        let mut roots: Vec<f64> = sols.iter().filter(|s| s.rms < 1e-12).map(|s| s.x[0]).collect();
        roots.sort_by(f64::total_cmp);
        roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        assert_eq!(roots.len(), 2);
        assert!((roots[1] - 0.3f64.acos()).abs() < 1e-10);
        assert!((roots[0] + 0.3f64.acos()).abs() < 1e-10);
    }

    #[test]
    fn fold_root_converges() {
        let sols = solve(1, 1, 64, 64, vec![], |x, r| r[0] = x[0].cos() - 1.0);
        assert!(sols[0].rms < 1e-15);
        assert!(sols[0].x[0].abs() < 1e-6);
    }
}
