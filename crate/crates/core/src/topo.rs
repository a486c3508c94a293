//! Exact evaluation of the continuous extension `T(f) : [0,1]^m → [0,1]^n`
//! of a cotransverse map.
//!
//! Two evaluators are provided for endos: the max-min formula, and a
//! permutation read off `f` along the chain of vertices selected by sorting
//! the coordinates of the input. They must agree everywhere.

use num_traits::{One, Zero};

use crate::cube::{full_mask, CubeMap, Rational};
use crate::error::{Error, Result};
use crate::homset::factorize;
use crate::point::RPoint;

fn check_endo(f: &CubeMap, x: &RPoint) -> Result<()> {
    if !f.is_endo() {
        return Err(Error::DimensionMismatch {
            expected: f.dom(),
            found: f.cod(),
        });
    }
    if x.dim() != f.dom() {
        return Err(Error::DimensionMismatch {
            expected: f.dom(),
            found: x.dim(),
        });
    }
    Ok(())
}

/// Component `i` is the max over `ε ∈ fᵢ⁻¹(1)` of `min {x_k : ε_k = 1}`,
/// with the empty min equal to 1 and the empty max equal to 0.
pub fn t_eval_maxmin(f: &CubeMap, x: &RPoint) -> Result<RPoint> {
    if x.dim() != f.dom() {
        return Err(Error::DimensionMismatch {
            expected: f.dom(),
            found: x.dim(),
        });
    }
    let m = f.dom();
    let xs = x.coords();
    let one = Rational::from_integer(1);
    let out = (0..f.cod())
        .map(|i| {
            f.table()
                .iter()
                .enumerate()
                .filter(|(_, &img)| img >> i & 1 == 1)
                .map(|(eps, _)| {
                    (0..m)
                        .filter(|k| eps >> k & 1 == 1)
                        .map(|k| xs[k])
                        .min()
                        .unwrap_or(one)
                })
                .max()
                .unwrap_or_else(Rational::zero)
        })
        .collect();
    Ok(RPoint::new_unchecked(out))
}

/// Sorting permutation `σ` (descending, ties by smaller index) and the
/// permutation `σ'` with `f(ε_{σ(1..k)}) = ε_{σ'(1..k)}`, both 0-based.
pub fn chain_permutations(f: &CubeMap, x: &RPoint) -> Result<(Vec<usize>, Vec<usize>)> {
    check_endo(f, x)?;
    let n = f.dom();
    let xs = x.coords();
    let mut sigma: Vec<usize> = (0..n).collect();
    sigma.sort_by(|&a, &b| xs[b].cmp(&xs[a]).then(a.cmp(&b)));
    let mut sigma_prime = Vec::with_capacity(n);
    let mut chain = 0u32;
    let mut prev_img = f.apply_bits(0);
    for &s in &sigma {
        chain |= 1 << s;
        let img = f.apply_bits(chain);
        let added = img & !prev_img;
        debug_assert_eq!(added.count_ones(), 1);
        sigma_prime.push(added.trailing_zeros() as usize);
        prev_img = img;
    }
    Ok((sigma, sigma_prime))
}

/// `T(f)(x)_{σ'(k)} = x_{σ(k)}`.
pub fn t_eval_permutation(f: &CubeMap, x: &RPoint) -> Result<RPoint> {
    let (sigma, sigma_prime) = chain_permutations(f, x)?;
    let xs = x.coords();
    let mut out = vec![Rational::zero(); f.dom()];
    for (s, sp) in sigma.iter().zip(&sigma_prime) {
        out[*sp] = xs[*s];
    }
    Ok(RPoint::new_unchecked(out))
}

/// `T(f)` for an arbitrary cotransverse map: evaluate the endo part of the
/// factorization, then insert the constant coordinates of the coface part.
pub fn t_eval(f: &CubeMap, x: &RPoint) -> Result<RPoint> {
    TMap::new(f)?.eval(x)
}

/// `T(f)` with the factorization of `f` computed once.
#[derive(Debug, Clone)]
pub struct TMap {
    psi: Option<CubeMap>,
    phi: CubeMap,
}

impl TMap {
    pub fn new(f: &CubeMap) -> Result<Self> {
        let fac = factorize(f)?;
        Ok(TMap {
            psi: (!fac.psi.is_identity()).then_some(fac.psi),
            phi: fac.phi,
        })
    }

    pub fn dom(&self) -> usize {
        self.phi.dom()
    }

    pub fn cod(&self) -> usize {
        self.phi.cod()
    }

    pub fn eval(&self, x: &RPoint) -> Result<RPoint> {
        if x.dim() != self.dom() {
            return Err(Error::DimensionMismatch {
                expected: self.dom(),
                found: x.dim(),
            });
        }
        Ok(match &self.psi {
            Some(psi) => insert_constants(&self.phi, &t_eval_maxmin(psi, x)?),
            None => insert_constants(&self.phi, x),
        })
    }
}

/// `T(phi)` for a cocubical `phi`.
fn insert_constants(phi: &CubeMap, x: &RPoint) -> RPoint {
    let lo = phi.bottom_image();
    let free = (lo ^ phi.top_image()) & full_mask(phi.cod());
    let mut it = x.coords().iter();
    let coords = (0..phi.cod())
        .map(|j| {
            if free >> j & 1 == 1 {
                *it.next().expect("free coordinate count matches domain")
            } else if lo >> j & 1 == 1 {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect();
    RPoint::new_unchecked(coords)
}
