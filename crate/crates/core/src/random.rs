//! Seeded generators for exact test instances.

use rand::Rng;

use crate::lyapunov::variance_matrix;
use crate::matrix::Mat;
use crate::perm::Permutation;
use crate::rat::Rat;

pub fn random_rat<R: Rng + ?Sized>(rng: &mut R) -> Rat {
    Rat::new(rng.gen_range(-9..=9), rng.gen_range(1..=6))
}

pub fn random_rat_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Mat<Rat> {
    Mat::from_fn(rows, cols, |_, _| random_rat(rng))
}

/// Symmetric `M` with `Me = 0`: `C W C` for random symmetric `W`, or
/// `C GᵀG C` when `psd` is set.
pub fn random_centered_symmetric<R: Rng + ?Sized>(n: usize, psd: bool, rng: &mut R) -> Mat<Rat> {
    let g = random_rat_matrix(n, n, rng);
    let w = if psd { g.transpose().mul(&g).expect("square") } else { g.add(&g.transpose()).expect("square") };
    let c: Mat<Rat> = variance_matrix(n);
    w.congruence(&c).expect("square")
}

/// Convex combination of `1..=max_terms` random permutation matrices with
/// random positive rational weights.
pub fn birkhoff_mixture<R: Rng + ?Sized>(n: usize, max_terms: usize, rng: &mut R) -> Mat<Rat> {
    let k = rng.gen_range(1..=max_terms.max(1));
    let weights: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=6)).collect();
    let total: i64 = weights.iter().sum();
    let mut out = Mat::zeros(n, n);
    for w in weights {
        let p: Mat<Rat> = Permutation::random(n, rng).matrix();
        out = out.add(&p.scale(&Rat::new(w, total))).expect("same shape");
    }
    out
}

/// Row-stochastic matrix whose pattern contains a random Hamiltonian cycle
/// (so it is irreducible), a positive diagonal, and random extra arcs.
pub fn random_irreducible_stochastic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat<Rat> {
    let order = Permutation::random(n, rng);
    let mut weights = vec![vec![0i64; n]; n];
    for k in 0..n {
        let (i, j) = (order.apply(k), order.apply((k + 1) % n));
        weights[i][j] = rng.gen_range(1..=4);
    }
    for (i, row) in weights.iter_mut().enumerate() {
        row[i] += rng.gen_range(1..=4);
        for w in row.iter_mut() {
            if *w == 0 && rng.gen_bool(0.3) {
                *w = rng.gen_range(1..=4);
            }
        }
    }
    Mat::from_fn(n, n, |i, j| {
        let total: i64 = weights[i].iter().sum();
        Rat::new(weights[i][j], total)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Vector;
    use rand::SeedableRng;

    #[test]
    fn generators_meet_their_contracts() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for n in 2..8 {
            assert!(birkhoff_mixture(n, 5, &mut rng).is_doubly_stochastic().unwrap());
            assert!(random_irreducible_stochastic(n, &mut rng).is_stochastic().unwrap());
            let m = random_centered_symmetric(n, true, &mut rng);
            assert!(m.is_symmetric());
            assert!(m.mul_vec(&Vector::ones(n)).unwrap().iter().all(Rat::is_zero));
        }
    }
}
