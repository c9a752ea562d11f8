//! `{ "re": .., "im": .. }` serialization for [`Complex64`] fields.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
struct ReIm {
    re: f64,
    im: f64,
}

pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    ReIm { re: z.re, im: z.im }.serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
    let ReIm { re, im } = ReIm::deserialize(d)?;
    Ok(Complex64::new(re, im))
}

/// Same as the parent module for `Vec<(String, Complex64)>` term lists.
pub mod labelled {
    use alloc::string::String;
    use alloc::vec::Vec;

    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Term {
        label: String,
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(terms: &[(String, Complex64)], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Term> = terms
            .iter()
            .map(|(l, z)| Term {
                label: l.clone(),
                re: z.re,
                im: z.im,
            })
            .collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(String, Complex64)>, D::Error> {
        let v: Vec<Term> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|t| (t.label, Complex64::new(t.re, t.im))).collect())
    }
}
