use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::CMatrix;

/// Haar-random `d x d` unitary: QR of a complex Ginibre matrix, with the
/// phases of `R`'s diagonal pushed into `Q` so the distribution is exactly
/// Haar rather than QR-convention dependent.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut sample = || -> f64 { StandardNormal.sample(rng) };
    let z = CMatrix::from_fn(d, d, |_, _| Complex64::new(sample() * scale, sample() * scale));
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for k in 0..d {
        let rkk = r[(k, k)];
        let phase = if rkk.norm() > 0.0 { rkk / rkk.norm() } else { Complex64::new(1.0, 0.0) };
        for row in 0..d {
            q[(row, k)] *= phase;
        }
    }
    q
}

/// Haar-random element of SU(4): a Haar U(4) sample divided by a fourth
/// root of its determinant.
pub fn haar_su4<R: Rng + ?Sized>(rng: &mut R) -> CMatrix {
    let u = haar_unitary(4, rng);
    let root = u.determinant().powf(0.25);
    u / root
}
