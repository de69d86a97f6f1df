//! Unitary matrix representations of Clifford algebra generators.
//!
//! For `2^a x 2^a` matrices there are exactly `2a+1` unitary representations
//! `R_1..R_{2a+1}`, built from Kronecker products of the three sigma matrices.
//! They are anti-Hermitian, square to `-I`, and pairwise anti-commute; every
//! weight-matrix family in this crate is assembled from ordered products of
//! them.

use num_complex::Complex64;

use crate::cmatrix::CMat;
use crate::{Error, Result};

const J: Complex64 = Complex64::new(0.0, 1.0);

/// Sign of the `+-j` factor in the first generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn factor(self) -> Complex64 {
        match self {
            Sign::Plus => J,
            Sign::Minus => -J,
        }
    }
}

/// The 2x2 sigma matrices the generator recipe is built from.
pub fn pauli_sigma(index: usize) -> Result<CMat> {
    let entries: [(f64, f64); 4] = match index {
        1 => [(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0), (0.0, 0.0)],
        2 => [(0.0, 0.0), (0.0, 1.0), (0.0, 1.0), (0.0, 0.0)],
        3 => [(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)],
        _ => return Err(Error::InvalidSigmaIndex(index)),
    };
    Ok(CMat::from_pairs(2, 2, &entries))
}

/// The `2a+1` generator representations for `2^a` antennas.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    a: usize,
    sign: Sign,
    mats: Vec<CMat>,
}

impl GeneratorSet {
    /// Antenna exponent; the matrices are `2^a x 2^a`.
    pub fn exponent(&self) -> usize {
        self.a
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Matrix dimension `2^a`.
    pub fn dim(&self) -> usize {
        1 << self.a
    }

    /// Number of generators, `2a + 1`.
    pub fn count(&self) -> usize {
        2 * self.a + 1
    }

    /// 1-based access to `R_i`.
    pub fn r(&self, i: usize) -> &CMat {
        assert!((1..=self.count()).contains(&i), "generator index {i}");
        &self.mats[i - 1]
    }

    /// All generators in order `R_1..R_{2a+1}`.
    pub fn all(&self) -> &[CMat] {
        &self.mats
    }

    /// A new set whose `R_i` is this set's `R_{perm[i-1]}`.
    ///
    /// Any permutation of an anti-commuting family is again one; this is how
    /// the published 4/8/16-antenna examples relate to the generic tables.
    pub fn permuted(&self, perm: &[usize]) -> Result<GeneratorSet> {
        let n = self.count();
        let mut seen = vec![false; n + 1];
        if perm.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: perm.len() });
        }
        for &p in perm {
            if p == 0 || p > n || seen[p] {
                return Err(Error::InvalidChain { max: n, got: perm.to_vec() });
            }
            seen[p] = true;
        }
        Ok(GeneratorSet {
            a: self.a,
            sign: self.sign,
            mats: perm.iter().map(|&p| self.mats[p - 1].clone()).collect(),
        })
    }

    /// The odd/even interleaving under which the generic two-group
    /// construction reproduces the published per-antenna examples:
    /// the first `a` slots take `R_2, R_4, ..., R_{2a}` and the remaining
    /// `a+1` slots take `R_1, R_3, ..., R_{2a+1}`.
    pub fn interleaved(&self) -> GeneratorSet {
        let mut perm: Vec<usize> = (1..=self.a).map(|k| 2 * k).collect();
        perm.extend((0..=self.a).map(|k| 2 * k + 1));
        self.permuted(&perm).expect("interleaving is a permutation")
    }
}

/// Build the `2a+1` generators for `2^a x 2^a` matrices.
///
/// `R_1 = sign * j * sigma3^(x a)`, and for `k = 1..a`:
/// `R_{2k} = I_{2^{a-k}} (x) sigma1 (x) sigma3^(x k-1)`,
/// `R_{2k+1} = I_{2^{a-k}} (x) sigma2 (x) sigma3^(x k-1)`.
pub fn clifford_generators(a: usize, sign: Sign) -> Result<GeneratorSet> {
    if a < 1 {
        return Err(Error::InvalidExponent { min: 1, got: a });
    }
    let s1 = pauli_sigma(1)?;
    let s2 = pauli_sigma(2)?;
    let s3 = pauli_sigma(3)?;

    let mut mats = Vec::with_capacity(2 * a + 1);

    let mut r1 = s3.clone();
    for _ in 1..a {
        r1 = r1.kron(&s3);
    }
    mats.push(r1.scale(sign.factor()));

    for k in 1..=a {
        let mut tail1 = s1.clone();
        let mut tail2 = s2.clone();
        for _ in 1..k {
            tail1 = tail1.kron(&s3);
            tail2 = tail2.kron(&s3);
        }
        let eye = CMat::identity(1 << (a - k));
        mats.push(eye.kron(&tail1));
        mats.push(eye.kron(&tail2));
    }

    Ok(GeneratorSet { a, sign, mats })
}

/// Outcome of one generator property check.
#[derive(Debug, Clone, Copy)]
pub struct PropertyCheck {
    pub passed: bool,
    pub max_violation: f64,
}

/// Pass/fail report for the defining generator identities.
#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub anti_hermitian: PropertyCheck,
    pub squares_to_minus_identity: PropertyCheck,
    pub anti_commutation: PropertyCheck,
    pub unitarity: PropertyCheck,
}

impl PropertyReport {
    pub fn all_passed(&self) -> bool {
        self.anti_hermitian.passed
            && self.squares_to_minus_identity.passed
            && self.anti_commutation.passed
            && self.unitarity.passed
    }
}

/// Check anti-Hermitianity, `R_i^2 = -I`, pairwise anti-commutation and
/// unitarity of an arbitrary family of matrices. Reports violations instead
/// of failing, so perturbed inputs can be inspected.
pub fn check_generator_properties(mats: &[CMat], tol: f64) -> PropertyReport {
    let n = mats.first().map_or(0, CMat::rows);
    let minus_eye = CMat::identity(n).scale(Complex64::new(-1.0, 0.0));

    let mut herm: f64 = 0.0;
    let mut sq: f64 = 0.0;
    let mut unit: f64 = 0.0;
    for m in mats {
        herm = herm.max(m.adjoint().max_abs_diff(&m.scale(Complex64::new(-1.0, 0.0))));
        sq = sq.max(m.mul(m).max_abs_diff(&minus_eye));
        unit = unit.max(m.unitarity_violation());
    }

    let mut anti: f64 = 0.0;
    for (i, mi) in mats.iter().enumerate() {
        for mj in mats.iter().skip(i + 1) {
            let v = mi.mul(mj).add(&mj.mul(mi)).max_abs();
            anti = anti.max(v);
        }
    }

    let check = |v: f64| PropertyCheck { passed: v <= tol, max_violation: v };
    PropertyReport {
        anti_hermitian: check(herm),
        squares_to_minus_identity: check(sq),
        anti_commutation: check(anti),
        unitarity: check(unit),
    }
}

/// Ordered product `R_{k_1} R_{k_2} ... R_{k_m}` for a strictly increasing
/// index chain (1-based). An empty chain gives the identity.
pub fn product_chain(gens: &GeneratorSet, indices: &[usize]) -> Result<CMat> {
    let max = gens.count();
    let increasing = indices.windows(2).all(|w| w[0] < w[1]);
    if !increasing || indices.iter().any(|&i| i == 0 || i > max) {
        return Err(Error::InvalidChain { max, got: indices.to_vec() });
    }
    let mut out = CMat::identity(gens.dim());
    for &i in indices {
        out = out.mul(gens.r(i));
    }
    Ok(out)
}

/// Sign `(-1)^(m(m+1)/2)` relating a length-`m` chain product to its
/// Hermitian transpose: `+1` means Hermitian, `-1` anti-Hermitian.
pub fn chain_hermitian_sign(m: usize) -> f64 {
    if (m * (m + 1) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ZERO: Complex64 = Complex64::new(0.0, 0.0);
    const ONE: Complex64 = Complex64::new(1.0, 0.0);

    #[test]
    fn sigma_matrices_match_their_definitions() {
        let s1 = pauli_sigma(1).unwrap();
        assert_eq!(s1.get(0, 1), ONE);
        assert_eq!(s1.get(1, 0), -ONE);
        let s2 = pauli_sigma(2).unwrap();
        assert_eq!(s2.get(0, 1), J);
        assert_eq!(s2.get(1, 0), J);
        let s3 = pauli_sigma(3).unwrap();
        assert_eq!(s3.get(0, 0), ONE);
        assert_eq!(s3.get(1, 1), -ONE);
        assert_eq!(s3.get(0, 1), ZERO);
        assert!(pauli_sigma(0).is_err());
        assert!(pauli_sigma(4).is_err());
    }

    #[test]
    fn a1_generators_by_hand() {
        let g = clifford_generators(1, Sign::Plus).unwrap();
        // R1 = j*sigma3 = diag(j, -j), R2 = sigma1, R3 = sigma2.
        let r1 = CMat::from_pairs(2, 2, &[(0.0, 1.0), (0.0, 0.0), (0.0, 0.0), (0.0, -1.0)]);
        assert!(g.r(1).approx_eq(&r1, 0.0));
        assert!(g.r(2).approx_eq(&pauli_sigma(1).unwrap(), 0.0));
        assert!(g.r(3).approx_eq(&pauli_sigma(2).unwrap(), 0.0));
    }

    #[test]
    fn a2_second_generator_is_i2_kron_sigma1() {
        let g = clifford_generators(2, Sign::Plus).unwrap();
        let expect = CMat::identity(2).kron(&pauli_sigma(1).unwrap());
        assert!(g.r(2).approx_eq(&expect, 0.0));
        assert_eq!(g.count(), 5);
        assert_eq!(g.dim(), 4);
    }

    #[test]
    fn properties_hold_exactly_for_small_exponents_both_signs() {
        for sign in [Sign::Plus, Sign::Minus] {
            for a in 1..=5 {
                let g = clifford_generators(a, sign).unwrap();
                let report = check_generator_properties(g.all(), 0.0);
                assert!(report.all_passed(), "a={a} sign={sign:?}: {report:?}");
            }
        }
    }

    #[test]
    fn generator_entries_are_exact_units_or_zero() {
        for a in 1..=5 {
            let g = clifford_generators(a, Sign::Plus).unwrap();
            for m in g.all() {
                for e in m.entries() {
                    let exact = (e.re == 0.0 || e.re.abs() == 1.0)
                        && (e.im == 0.0 || e.im.abs() == 1.0)
                        && !(e.re.abs() == 1.0 && e.im.abs() == 1.0);
                    assert!(exact, "entry {e} at a={a}");
                }
            }
        }
    }

    #[test]
    fn perturbed_generator_reports_violation() {
        let g = clifford_generators(2, Sign::Plus).unwrap();
        let mut mats: Vec<CMat> = g.all().to_vec();
        let bumped = mats[0].get(0, 0) + Complex64::new(1e-3, 0.0);
        mats[0].set(0, 0, bumped);
        let report = check_generator_properties(&mats, 1e-12);
        assert!(!report.anti_commutation.passed);
        let v = report.anti_commutation.max_violation;
        assert!((1e-3..4e-3).contains(&v), "violation {v}");
    }

    #[test]
    fn full_chain_is_plus_minus_j_to_a_minus_1() {
        // prod_{i=1}^{2a+1} R_i = -+ j^(a-1) I, with the sign tied to the
        // sign choice in R_1. Observed pairing: Plus -> -j^(a-1) I.
        for sign in [Sign::Plus, Sign::Minus] {
            for a in 1..=4 {
                let g = clifford_generators(a, sign).unwrap();
                let chain: Vec<usize> = (1..=2 * a + 1).collect();
                let prod = product_chain(&g, &chain).unwrap();
                let j_pow = J.powu((a - 1) as u32);
                let eps = match sign {
                    Sign::Plus => -1.0,
                    Sign::Minus => 1.0,
                };
                let expect = CMat::identity(1 << a).scale(j_pow * eps);
                assert!(prod.approx_eq(&expect, 1e-12), "a={a} sign={sign:?}");
            }
        }
    }

    #[test]
    fn chain_hermitian_sign_matches_products() {
        let g = clifford_generators(3, Sign::Plus).unwrap();
        let n = g.count();
        // Every strictly increasing chain over 7 generators.
        for mask in 1u32..(1 << n) {
            let chain: Vec<usize> = (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect();
            let prod = product_chain(&g, &chain).unwrap();
            let sign = chain_hermitian_sign(chain.len());
            let expect = prod.scale(Complex64::new(sign, 0.0));
            assert!(prod.adjoint().approx_eq(&expect, 1e-12), "chain {chain:?}");
        }
    }

    #[test]
    fn commutation_rule_for_chains() {
        // R_l * A = +- A * R_l, the sign fixed by chain parity and whether l
        // appears in the chain.
        for a in 1..=3 {
            let g = clifford_generators(a, Sign::Plus).unwrap();
            let n = g.count();
            for mask in 1u32..(1 << n) {
                let chain: Vec<usize> = (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect();
                let prod = product_chain(&g, &chain).unwrap();
                let m = chain.len();
                for l in 1..=n {
                    let in_chain = chain.contains(&l);
                    let commutes = (m % 2 == 1 && in_chain) || (m % 2 == 0 && !in_chain);
                    let lhs = g.r(l).mul(&prod);
                    let rhs = prod.mul(g.r(l));
                    let expect = if commutes {
                        rhs
                    } else {
                        rhs.scale(Complex64::new(-1.0, 0.0))
                    };
                    assert!(lhs.approx_eq(&expect, 1e-12), "a={a} chain={chain:?} l={l}");
                }
            }
        }
    }

    #[test]
    fn product_chain_rejects_bad_indices() {
        let g = clifford_generators(2, Sign::Plus).unwrap();
        assert!(product_chain(&g, &[2, 2]).is_err());
        assert!(product_chain(&g, &[3, 1]).is_err());
        assert!(product_chain(&g, &[0]).is_err());
        assert!(product_chain(&g, &[6]).is_err());
    }

    #[test]
    fn interleaving_is_a_valid_anticommuting_family() {
        let g = clifford_generators(3, Sign::Plus).unwrap().interleaved();
        let report = check_generator_properties(g.all(), 0.0);
        assert!(report.all_passed());
        // Slot 1 carries the original R_2.
        let orig = clifford_generators(3, Sign::Plus).unwrap();
        assert!(g.r(1).approx_eq(orig.r(2), 0.0));
        assert!(g.r(4).approx_eq(orig.r(1), 0.0));
    }
}
