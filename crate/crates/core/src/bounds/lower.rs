//! Lower bounds on the one-way environment-assisted classical capacity
//! `C_A^→(N)`.

use serde::Serialize;

use crate::channel::StinespringIsometry;
use crate::error::{Error, Result};
use crate::metrics::{matrix_entropy, von_neumann_entropy, EntropyTriple};
use crate::tensor::{DensityOperator, Subsystem};
use crate::tolerance::TAU_ENT;

/// `S(A) = S(ρ)`, `S(B) = S(N(ρ))`, `S(C) = S(N̄(ρ))`.
pub fn entropy_triple(u: &StinespringIsometry, rho: &DensityOperator) -> Result<EntropyTriple> {
    let s_b = matrix_entropy(&u.output_matrix(rho.matrix(), Subsystem::B)?);
    let s_c = matrix_entropy(&u.output_matrix(rho.matrix(), Subsystem::C)?);
    Ok(EntropyTriple::new(von_neumann_entropy(rho), s_b, s_c))
}

/// `S(A)` when `S(A) ≤ S(B)`, otherwise `½ I(A:B)`; never negative.
pub fn lower_bound_basic(t: &EntropyTriple) -> f64 {
    if t.s_a <= t.s_b {
        t.s_a
    } else {
        (0.5 * t.mutual_information()).max(0.0)
    }
}

/// Single-state form `(1 − S(B)/S(A))·S(C) + (S(B)/S(A))·S(B)`.
pub fn timeshare_single_state(t: &EntropyTriple) -> f64 {
    let w = t.s_b / t.s_a;
    (1.0 - w) * t.s_c + w * t.s_b
}

/// Time-sharing bound between a block coded for `N̄` (state `ρ`, needs
/// `S(B) < S(C)`) and a merging block (state `ρ'`, needs `S(B') < S(A')`):
///
/// `(S(C) − S(B) + r·S(A')) / (1 + r)` with `r = S(B)/(S(A') − S(B'))`.
pub fn lower_bound_timeshare(t: &EntropyTriple, t_prime: &EntropyTriple) -> Result<f64> {
    // strict preconditions must hold by more than TAU_ENT, otherwise r is noise
    if !(t.s_c - t.s_b > TAU_ENT) {
        return Err(Error::Domain(format!(
            "requires S(B) < S(C), got S(B) = {} and S(C) = {}",
            t.s_b, t.s_c
        )));
    }
    if !(t_prime.s_a - t_prime.s_b > TAU_ENT) {
        return Err(Error::Domain(format!(
            "requires S(B') < S(A'), got S(B') = {} and S(A') = {}",
            t_prime.s_b, t_prime.s_a
        )));
    }
    let r = t.s_b / (t_prime.s_a - t_prime.s_b);
    let value = (t.s_c - t.s_b + r * t_prime.s_a) / (1.0 + r);
    if t == t_prime {
        let single = timeshare_single_state(t);
        if (single - value).abs() > 1e-9 * value.abs().max(1.0) {
            return Err(Error::Domain(format!(
                "time-sharing forms disagree: {value} vs {single}"
            )));
        }
    }
    Ok(value)
}

/// Which formula produced a lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerBoundBranch {
    /// `S(A)` with `S(A) ≤ S(B)`.
    InputEntropy,
    /// `½ I(A:B)`.
    HalfMutualInformation,
    /// `½ S(A)`.
    HalfInputEntropy,
    /// Time sharing between two input states.
    TimeSharing,
    /// `C_A^→ ≥ 1` for every channel with `d_A ≥ 2`.
    OneBitFloor,
}

impl LowerBoundBranch {
    pub fn anchor(&self) -> &'static str {
        match self {
            LowerBoundBranch::InputEntropy | LowerBoundBranch::HalfMutualInformation => {
                "Thm 2, Eq. (2)"
            }
            LowerBoundBranch::HalfInputEntropy => "Cor 1, Eq. (5)",
            LowerBoundBranch::TimeSharing => "Thm 2, Eqs. (3)-(4)",
            LowerBoundBranch::OneBitFloor => "Sec. III, one-bit floor",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundCandidate {
    pub branch: LowerBoundBranch,
    pub value: f64,
    /// Index into the candidate list (`0` is the maximally mixed state).
    pub state: usize,
    /// Second state of a time-sharing pair.
    pub state_prime: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AggregateLowerBound {
    pub value: f64,
    pub winner: LowerBoundCandidate,
    pub triples: Vec<EntropyTriple>,
    pub candidates: Vec<LowerBoundCandidate>,
}

/// Best lower bound over the maximally mixed state (always candidate `0`)
/// followed by `states`, every applicable branch and every time-sharing pair,
/// floored at one bit when `d_A ≥ 2`.
pub fn lower_bound_aggregate(
    u: &StinespringIsometry,
    states: &[DensityOperator],
) -> Result<AggregateLowerBound> {
    let d_a = u.dims().a;
    let mut inputs = vec![DensityOperator::maximally_mixed(d_a)];
    inputs.extend(states.iter().cloned());
    let triples = inputs
        .iter()
        .map(|rho| entropy_triple(u, rho))
        .collect::<Result<Vec<_>>>()?;

    let mut candidates = Vec::new();
    for (i, t) in triples.iter().enumerate() {
        let branch = if t.s_a <= t.s_b {
            LowerBoundBranch::InputEntropy
        } else {
            LowerBoundBranch::HalfMutualInformation
        };
        candidates.push(LowerBoundCandidate {
            branch,
            value: lower_bound_basic(t),
            state: i,
            state_prime: None,
        });
        candidates.push(LowerBoundCandidate {
            branch: LowerBoundBranch::HalfInputEntropy,
            value: 0.5 * t.s_a,
            state: i,
            state_prime: None,
        });
        for (j, tp) in triples.iter().enumerate() {
            if let Ok(value) = lower_bound_timeshare(t, tp) {
                candidates.push(LowerBoundCandidate {
                    branch: LowerBoundBranch::TimeSharing,
                    value,
                    state: i,
                    state_prime: Some(j),
                });
            }
        }
    }
    if d_a >= 2 {
        candidates.push(LowerBoundCandidate {
            branch: LowerBoundBranch::OneBitFloor,
            value: 1.0,
            state: 0,
            state_prime: None,
        });
    }
    let winner = candidates
        .iter()
        .fold(None::<&LowerBoundCandidate>, |best, c| match best {
            Some(b) if b.value >= c.value => Some(b),
            _ => Some(c),
        })
        .expect("at least two candidates")
        .clone();
    Ok(AggregateLowerBound {
        value: winner.value,
        winner,
        triples,
        candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{amplitude_damping, identity_channel, make_random_mixture_of_unitaries};
    use crate::rng::stream_rng;
    use crate::tensor::{haar_isometry, random_density, random_pure_state};
    use crate::tolerance::TAU_ENT;

    #[test]
    fn basic_examples() {
        assert_eq!(lower_bound_basic(&EntropyTriple::new(1.0, 1.0, 0.0)), 1.0);
        assert!((lower_bound_basic(&EntropyTriple::new(2.0, 1.0, 1.5)) - 0.75).abs() < 1e-15);
        assert!((lower_bound_basic(&EntropyTriple::new(1.0, 0.5, 1.5)) - 0.0).abs() < 1e-15);
        // S(A) > S(B) branch with I = 1
        assert!((lower_bound_basic(&EntropyTriple::new(1.0, 0.9, 0.9)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn basic_at_equal_entropies_takes_input_entropy_branch() {
        // (1, 1, 1): S(A) ≤ S(B) holds, so the first case applies; the general
        // case evaluates to ½.
        let t = EntropyTriple::new(1.0, 1.0, 1.0);
        assert_eq!(lower_bound_basic(&t), 1.0);
        assert!((0.5 * t.mutual_information() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn timeshare_examples() {
        let t = EntropyTriple::new(2.0, 0.5, 1.8);
        let v = lower_bound_timeshare(&t, &t).unwrap();
        assert!((v - 1.475).abs() < 1e-12);
        let t = EntropyTriple::new(1.5, 0.0, 1.5);
        assert!((lower_bound_timeshare(&t, &t).unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn timeshare_preconditions() {
        let bad_c = EntropyTriple::new(2.0, 1.5, 1.0);
        let good = EntropyTriple::new(2.0, 0.5, 1.8);
        match lower_bound_timeshare(&bad_c, &good) {
            Err(Error::Domain(msg)) => assert!(msg.contains("S(B) < S(C)")),
            other => panic!("{other:?}"),
        }
        let bad_a = EntropyTriple::new(0.5, 1.0, 1.2);
        match lower_bound_timeshare(&good, &bad_a) {
            Err(Error::Domain(msg)) => assert!(msg.contains("S(B') < S(A')")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn timeshare_dominates_half_input_entropy_on_sampled_triples() {
        // tripartite pure states from random isometries A -> BC
        let mut rng = stream_rng(1, 0);
        let mut checked = 0;
        for i in 0..2000 {
            let (a, b, c) = (2 + i % 3, 2 + (i / 3) % 2, 2 + (i / 6) % 3);
            let u = StinespringIsometry::new(haar_isometry(&mut rng, b * c, a), b, c).unwrap();
            let rho = random_density(&mut rng, a, 1 + i % a);
            let t = entropy_triple(&u, &rho).unwrap();
            if t.s_b < t.s_c && t.s_b < t.s_a {
                let v = lower_bound_timeshare(&t, &t).unwrap();
                assert!(v >= 0.5 * t.s_a - TAU_ENT);
                checked += 1;
            }
        }
        assert!(checked > 100);
    }

    #[test]
    fn triple_examples() {
        let u = make_random_mixture_of_unitaries(3, 3, &[1.0 / 3.0; 3], 2).unwrap();
        let t = entropy_triple(&u, &DensityOperator::maximally_mixed(3)).unwrap();
        assert!((t.s_a - 3f64.log2()).abs() < 1e-12);

        let mut rng = stream_rng(2, 0);
        let u = amplitude_damping(0.4).unwrap();
        let pure = DensityOperator::from_pure(&random_pure_state(&mut rng, 2));
        let t = entropy_triple(&u, &pure).unwrap();
        assert!((t.s_b - t.s_c).abs() < 1e-9);
    }

    #[test]
    fn aggregate_examples() {
        let u = identity_channel(4);
        let agg = lower_bound_aggregate(&u, &[]).unwrap();
        assert!((agg.value - 2.0).abs() < 1e-12);
        assert_eq!(agg.winner.branch, LowerBoundBranch::InputEntropy);

        let ad = amplitude_damping(0.9).unwrap();
        let agg = lower_bound_aggregate(&ad, &[]).unwrap();
        assert!((agg.value - 1.0).abs() < 1e-12);

        let mut rng = stream_rng(3, 0);
        for _ in 0..20 {
            let u = StinespringIsometry::new(haar_isometry(&mut rng, 6, 3), 2, 3).unwrap();
            let extra = [random_density(&mut rng, 3, 2)];
            let agg = lower_bound_aggregate(&u, &extra).unwrap();
            assert!(agg.value >= 0.5 * 3f64.log2() - TAU_ENT);
            assert!(agg.value <= 3f64.log2() + TAU_ENT);
            assert_eq!(agg.triples.len(), 2);
        }
    }
}
