use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exec::{task_seed, Exec};
use crate::qcore::{BlochVector, ComplexMatrix2, DensityMatrix, C64};

/// Maximally mixed state plus the +1 eigenstates of σ₁, σ₂, σ₃.
///
/// Their Bloch vectors are affinely independent, so any quantity affine in
/// the Bloch vector is fixed everywhere by its values on these four.
pub fn fiducial_blochs() -> [BlochVector; 4] {
    [
        BlochVector::ORIGIN,
        BlochVector::new(1.0, 0.0, 0.0),
        BlochVector::new(0.0, 1.0, 0.0),
        BlochVector::new(0.0, 0.0, 1.0),
    ]
}

pub fn fiducial_states() -> [DensityMatrix; 4] {
    fiducial_blochs().map(|s| DensityMatrix::from_bloch(s).expect("fiducial states are valid"))
}

/// Fiducial states followed by seeded random states from the Bloch ball.
///
/// Random state `i` is drawn from its own stream seeded by `seed + i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub count: usize,
    pub seed: u64,
}

impl SamplingPlan {
    pub fn new(count: usize, seed: u64) -> Result<Self> {
        if count < 4 {
            return Err(Error::Precondition(format!(
                "need at least 4 states to span the Bloch ball affinely, got {count}"
            )));
        }
        Ok(Self { count, seed })
    }

    pub fn blochs(&self, exec: Exec) -> Vec<BlochVector> {
        let fid = fiducial_blochs();
        exec.map_indexed(self.count, |i| match fid.get(i) {
            Some(s) => *s,
            None => random_bloch_in_ball(&mut ChaCha8Rng::seed_from_u64(task_seed(self.seed, i))),
        })
    }

    pub fn states(&self, exec: Exec) -> Vec<DensityMatrix> {
        self.blochs(exec).into_iter().map(|s| DensityMatrix::from_bloch(s).expect("sampled inside the ball")).collect()
    }
}

fn unit_vector<R: Rng>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-12 {
            return v.map(|x| x / n);
        }
    }
}

/// Uniform in the unit ball.
pub fn random_bloch_in_ball<R: Rng>(rng: &mut R) -> BlochVector {
    let r = rng.random::<f64>().cbrt();
    BlochVector(unit_vector(rng).map(|x| x * r))
}

/// Uniform on the unit sphere (pure states).
pub fn random_pure_bloch<R: Rng>(rng: &mut R) -> BlochVector {
    BlochVector(unit_vector(rng))
}

/// Haar-random element of U(2).
pub fn random_unitary<R: Rng>(rng: &mut R) -> ComplexMatrix2 {
    let q: [f64; 4] = loop {
        let q = [0; 4].map(|_| rng.sample::<f64, _>(StandardNormal));
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            break q.map(|x| x / n);
        }
    };
    let phase = C64::from_polar(1.0, rng.random_range(0.0..2.0 * PI));
    let su2 =
        ComplexMatrix2::new(C64::new(q[0], q[1]), C64::new(q[2], q[3]), C64::new(-q[2], q[3]), C64::new(q[0], -q[1]));
    su2 * phase
}

/// `count` Haar unitaries, the i-th seeded by `seed + i`.
pub fn seeded_unitaries(count: usize, seed: u64) -> Vec<ComplexMatrix2> {
    (0..count).map(|i| random_unitary(&mut ChaCha8Rng::seed_from_u64(task_seed(seed, i)))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::unitarity_deviation;

    #[test]
    fn plan_is_deterministic_and_starts_with_fiducials() {
        let plan = SamplingPlan::new(40, 3).unwrap();
        let a = plan.blochs(Exec::Sequential);
        let b = plan.blochs(Exec::Parallel);
        assert_eq!(a, b);
        assert_eq!(&a[..4], &fiducial_blochs()[..]);
        assert!(a.iter().all(|s| s.norm() <= 1.0));
        assert_ne!(a[4], SamplingPlan::new(40, 4).unwrap().blochs(Exec::Sequential)[4]);
    }

    #[test]
    fn plan_needs_four_states() {
        assert!(matches!(SamplingPlan::new(3, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn random_unitaries_are_unitary() {
        for u in seeded_unitaries(20, 11) {
            assert!(unitarity_deviation(&u) < 1e-14);
        }
    }

    #[test]
    fn pure_samples_on_sphere() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert!(random_pure_bloch(&mut rng).is_pure(1e-12));
        }
    }
}
