//! Brute-force oracle for minimum entanglement on small subspaces: a dense
//! net of the coordinate sphere (half pseudo-random, half shifted Halton
//! points pushed through Box–Muller), followed by a derivative-free pattern
//! search around the best net points.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{entanglement_of, SubspaceSpec};
use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::tensor::{complex_gaussian, CVec, C64};

/// Largest subspace dimension the net covers.
pub const MAX_NET_K: usize = 3;
/// Largest ambient dimension the net covers.
pub const MAX_NET_TOTAL: usize = 9;

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];
const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NetConfig {
    pub samples: usize,
    pub seed: u64,
    /// Net points polished by pattern search.
    pub refine: usize,
}

impl Default for NetConfig {
    fn default() -> Self {
        Self {
            samples: 1_000_000,
            seed: 0,
            refine: 16,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NetResult {
    /// Net minimum before refinement.
    pub net_value: f64,
    /// Minimum after pattern search.
    pub value: f64,
    #[serde(skip)]
    pub coordinates: CVec,
    pub samples: usize,
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    out
}

fn box_muller(u1: f64, u2: f64) -> C64 {
    let u1 = u1.max(f64::MIN_POSITIVE);
    let r = (-2.0 * u1.ln()).sqrt();
    let t = std::f64::consts::TAU * u2;
    C64::new(r * t.cos(), r * t.sin())
}

fn halton_point(index: u64, k: usize, shift: &[f64]) -> CVec {
    let mut v = CVec::from_fn(k, |j, _| {
        let u1 = (radical_inverse(index, PRIMES[2 * j]) + shift[2 * j]).fract();
        let u2 = (radical_inverse(index, PRIMES[2 * j + 1]) + shift[2 * j + 1]).fract();
        box_muller(u1, u2)
    });
    let n = v.norm();
    v /= C64::from(n);
    v
}

fn net_point(sub: &SubspaceSpec, x: &CVec) -> f64 {
    entanglement_of(&(sub.matrix() * x), sub.shape())
}

/// Exhaustive-net estimate of the minimum entanglement on `sub`.
pub fn net_min_entanglement(sub: &SubspaceSpec, cfg: &NetConfig) -> Result<NetResult> {
    let k = sub.k();
    if k > MAX_NET_K || sub.shape().total() > MAX_NET_TOTAL {
        return Err(Error::Scale(format!(
            "net oracle covers k ≤ {MAX_NET_K} and d_B·d_C ≤ {MAX_NET_TOTAL}"
        )));
    }
    let mut shift_rng = stream_rng(cfg.seed, u64::MAX);
    let shift: Vec<f64> = (0..2 * k).map(|_| shift_rng.random::<f64>()).collect();
    let half = cfg.samples / 2;
    let chunks = cfg.samples.div_ceil(CHUNK);
    let keep = cfg.refine.max(1);

    // each chunk keeps its `keep` best points; merge is ordered by (value, index)
    let mut best: Vec<(f64, usize, CVec)> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = stream_rng(cfg.seed, c as u64);
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(cfg.samples);
            let mut local: Vec<(f64, usize, CVec)> = Vec::with_capacity(keep + 1);
            for i in lo..hi {
                let x = if i < half {
                    let v = CVec::from_fn(k, |_, _| complex_gaussian(&mut rng));
                    let n = v.norm();
                    v / C64::from(n)
                } else {
                    halton_point((i - half + 1) as u64, k, &shift)
                };
                let f = net_point(sub, &x);
                if local.len() < keep || f < local[local.len() - 1].0 {
                    local.push((f, i, x));
                    local.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                    local.truncate(keep);
                }
            }
            local
        })
        .collect();
    best.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    best.truncate(keep);
    let net_value = best[0].0;

    let refined: Vec<(f64, CVec)> = best
        .par_iter()
        .map(|(f, i, x)| pattern_search(sub, x.clone(), *f, cfg.seed ^ (*i as u64)))
        .collect();
    let (value, coordinates) = refined
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("nonempty");
    Ok(NetResult {
        net_value,
        value,
        coordinates,
        samples: cfg.samples,
    })
}

/// Random-direction compass search on the sphere with a shrinking radius.
fn pattern_search(sub: &SubspaceSpec, mut x: CVec, mut f: f64, seed: u64) -> (f64, CVec) {
    let mut rng = stream_rng(seed, 1);
    let k = x.len();
    let mut radius = 0.1;
    while radius > 1e-9 {
        let mut improved = false;
        for _ in 0..16 * k {
            let d = CVec::from_fn(k, |_, _| complex_gaussian(&mut rng));
            let y = &x + d * C64::from(radius / (2.0 * k as f64).sqrt());
            let n = y.norm();
            let y = y / C64::from(n);
            let fy = net_point(sub, &y);
            if fy < f {
                x = y;
                f = fy;
                improved = true;
            }
        }
        if !improved {
            radius *= 0.5;
        }
    }
    (f, x)
}
