#![allow(dead_code)]

use msdd_core::gauge::leray_project;
use msdd_core::spectral::{BasisFamily, BoxDomain, SpectralScalar, SpectralVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Band-limited complex scalar with coefficients decaying like 1/(1+|k|^2).
pub fn scalar(d: &BoxDomain<f64>, r: &mut ChaCha8Rng) -> SpectralScalar<f64> {
    let p = SpectralScalar::<f64>::parity();
    let k2 = d.kappa_sq_table(p);
    let re = k2.iter().map(|k| r.gen_range(-1.0..1.0) / (1.0 + k)).collect();
    let im = k2.iter().map(|k| r.gen_range(-1.0..1.0) / (1.0 + k)).collect();
    SpectralScalar::from_parts(d, re, Some(im)).unwrap()
}

pub fn solenoidal(d: &BoxDomain<f64>, r: &mut ChaCha8Rng, scale: f64) -> SpectralVector<f64> {
    let fam = BasisFamily::MaxwellVector;
    let comps = [0, 1, 2].map(|c| {
        d.kappa_sq_table(fam.parity(c))
            .iter()
            .map(|k| scale * r.gen_range(-1.0..1.0) / (1.0 + k))
            .collect()
    });
    leray_project(d, &SpectralVector::from_comps(d, fam, comps).unwrap()).unwrap()
}
