//! Small optimization primitives: simplex and spectraplex projections and a
//! golden-section line search.

use crate::tensor::{eigh, from_spectrum, hermitian_part, CMat};

/// Euclidean projection of `v` onto the probability simplex.
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        cumsum += x;
        let t = (cumsum - 1.0) / (i + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Frobenius-nearest density operator to a Hermitian matrix.
pub fn project_to_density(m: &CMat) -> CMat {
    let (vals, vecs) = eigh(&hermitian_part(m));
    from_spectrum(&project_to_simplex(&vals), &vecs)
}

/// Clips the spectrum of a Hermitian matrix into `[lo, hi]`.
pub fn clip_spectrum(m: &CMat, lo: f64, hi: f64) -> CMat {
    let (vals, vecs) = eigh(&hermitian_part(m));
    let clipped: Vec<f64> = vals.iter().map(|&x| x.clamp(lo, hi)).collect();
    from_spectrum(&clipped, &vecs)
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimizes a unimodal `f` on `[lo, hi]`; returns `(argmin, min)`.
pub fn golden_section_min(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: usize,
) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..max_iter {
        if (hi - lo).abs() <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
