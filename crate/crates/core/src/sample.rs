//! Seeded random sampling of vectors, forms and rotations.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::basis::binomial;
use crate::exterior::AltForm;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vec(rng: &mut SeededRng, len: usize) -> Vec<f64> {
    (0..len).map(|_| StandardNormal.sample(rng)).collect()
}

pub fn gaussian_form(rng: &mut SeededRng, dim: usize, degree: usize) -> AltForm {
    let coeffs = gaussian_vec(rng, binomial(dim, degree));
    AltForm::from_coeffs(dim, degree, coeffs).expect("sized by construction")
}

/// A Gaussian form with independent standard normal coefficients.
pub fn random_form(dim: usize, degree: usize, seed: u64) -> AltForm {
    gaussian_form(&mut rng(seed), dim, degree)
}

/// A Haar-ish random element of SO(3) via Gram–Schmidt of a Gaussian matrix.
pub fn random_rotation(rng: &mut SeededRng) -> DMatrix<f64> {
    let m = DMatrix::from_vec(3, 3, gaussian_vec(rng, 9));
    let qr = m.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..3 {
        if r[(j, j)] < 0.0 {
            for i in 0..3 {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    if q.determinant() < 0.0 {
        for i in 0..3 {
            q[(i, 0)] = -q[(i, 0)];
        }
    }
    q
}
