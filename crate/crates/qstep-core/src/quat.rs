//! Quaternion arithmetic and the symplectic (complex-pair) decomposition.
//!
//! Quaternionic wave mechanics needs two things ordinary quaternion crates
//! rarely expose: the distinction between left multiplication by an imaginary
//! unit and right multiplication by a complex scalar, and the symplectic
//! split `q = z1 + j*z2` that turns quaternionic linear systems into complex
//! ones of doubled size. Everything here is exact arithmetic over machine
//! floats; there is no normalization and no tolerance in this layer.

use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// A real quaternion `w + x*i + y*j + z*k`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Ordered pair `(z1, z2)` with `q = z1 + j*z2`.
///
/// Sign convention, fixed here and used everywhere: `z1 = w + x*i`,
/// `z2 = y - z*i`. With `j*i = -k` this reproduces `q` exactly:
/// `j*(y - z*i) = y*j - z*(j*i) = y*j + z*k`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SymplecticPair {
    pub z1: Complex64,
    pub z2: Complex64,
}

/// The three imaginary units.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImaginaryUnit {
    I,
    J,
    K,
}

pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

impl Quaternion {
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    /// Embeds a complex number as `re + im*i`.
    pub fn from_complex(c: Complex64) -> Self {
        Self::new(c.re, c.im, 0.0, 0.0)
    }

    pub fn conjugate(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w + rhs.w,
            self.x + rhs.x,
            self.y + rhs.y,
            self.z + rhs.z,
        )
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w - rhs.w,
            self.x - rhs.x,
            self.y - rhs.y,
            self.z - rhs.z,
        )
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product. Non-commutative; norm-multiplicative.
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
        )
    }
}

/// Hamilton product as a named operation.
pub fn qmul(p: Quaternion, q: Quaternion) -> Quaternion {
    p * q
}

/// Left multiplication `u * q` by one imaginary unit.
///
/// Exact: only negations and component permutations, no rounding.
pub fn left_mul_unit(u: ImaginaryUnit, q: Quaternion) -> Quaternion {
    match u {
        ImaginaryUnit::I => Quaternion::new(-q.x, q.w, -q.z, q.y),
        ImaginaryUnit::J => Quaternion::new(-q.y, q.z, q.w, -q.x),
        ImaginaryUnit::K => Quaternion::new(-q.z, -q.y, q.x, q.w),
    }
}

/// Right multiplication `q * z` by a complex scalar `z = re + im*i`.
///
/// In general `q * z != z * q`; the equation of motion and the time factor
/// both act from the right.
pub fn right_mul_complex(q: Quaternion, c: Complex64) -> Quaternion {
    Quaternion::new(
        q.w * c.re - q.x * c.im,
        q.w * c.im + q.x * c.re,
        q.y * c.re + q.z * c.im,
        q.z * c.re - q.y * c.im,
    )
}

/// Splits `q` into the pair `(z1, z2)` with `q = z1 + j*z2`.
pub fn symplectic_decompose(q: Quaternion) -> SymplecticPair {
    SymplecticPair {
        z1: Complex64::new(q.w, q.x),
        z2: Complex64::new(q.y, -q.z),
    }
}

/// Reassembles `q = z1 + j*z2`. Exact inverse of [`symplectic_decompose`].
pub fn symplectic_compose(p: SymplecticPair) -> Quaternion {
    Quaternion::new(p.z1.re, p.z1.im, p.z2.re, -p.z2.im)
}

impl SymplecticPair {
    pub const fn new(z1: Complex64, z2: Complex64) -> Self {
        Self { z1, z2 }
    }

    /// Right multiplication by a complex scalar: `(z1, z2) -> (z1*c, z2*c)`.
    pub fn right_mul(self, c: Complex64) -> Self {
        Self::new(self.z1 * c, self.z2 * c)
    }

    /// Left multiplication by a complex scalar: `(z1, z2) -> (c*z1, conj(c)*z2)`.
    pub fn left_mul(self, c: Complex64) -> Self {
        Self::new(c * self.z1, c.conj() * self.z2)
    }

    pub fn norm_sqr(self) -> f64 {
        self.z1.norm_sqr() + self.z2.norm_sqr()
    }
}

impl From<Quaternion> for SymplecticPair {
    fn from(q: Quaternion) -> Self {
        symplectic_decompose(q)
    }
}

impl From<SymplecticPair> for Quaternion {
    fn from(p: SymplecticPair) -> Self {
        symplectic_compose(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn assert_q_eq(a: Quaternion, b: Quaternion) {
        assert_eq!(a.w.to_bits(), b.w.to_bits(), "w differs: {a:?} vs {b:?}");
        assert_eq!(a.x.to_bits(), b.x.to_bits(), "x differs: {a:?} vs {b:?}");
        assert_eq!(a.y.to_bits(), b.y.to_bits(), "y differs: {a:?} vs {b:?}");
        assert_eq!(a.z.to_bits(), b.z.to_bits(), "z differs: {a:?} vs {b:?}");
    }

    #[test]
    fn defining_relations_exact() {
        let minus_one = -ONE;
        assert_eq!(I * I, minus_one);
        assert_eq!(J * J, minus_one);
        assert_eq!(K * K, minus_one);
        assert_eq!(I * J * K, minus_one);
        assert_eq!(I * J, K);
        assert_eq!(J * K, I);
        assert_eq!(K * I, J);
        assert_eq!(J * I, -K);
    }

    #[test]
    fn product_example() {
        // (1+i)(1+j) = 1 + i + j + k
        let p = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        let q = Quaternion::new(1.0, 0.0, 1.0, 0.0);
        assert_eq!(p * q, Quaternion::new(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn left_and_right_multiplication_differ() {
        assert_eq!(left_mul_unit(ImaginaryUnit::I, J), K);
        assert_eq!(right_mul_complex(J, Complex64::i()), -K);
        // on the identity both act the same way
        assert_eq!(left_mul_unit(ImaginaryUnit::I, ONE), I);
        assert_eq!(right_mul_complex(ONE, Complex64::i()), I);
    }

    #[test]
    fn unit_left_mul_matches_hamilton_product() {
        let mut rng = StdRng::seed_from_u64(0x51ab);
        for _ in 0..200 {
            let q = Quaternion::new(rng.gen(), rng.gen(), rng.gen(), rng.gen());
            assert_q_eq(left_mul_unit(ImaginaryUnit::I, q), I * q);
            assert_q_eq(left_mul_unit(ImaginaryUnit::J, q), J * q);
            assert_q_eq(left_mul_unit(ImaginaryUnit::K, q), K * q);
        }
    }

    #[test]
    fn right_mul_complex_matches_hamilton_product() {
        let mut rng = StdRng::seed_from_u64(0x7e11);
        for _ in 0..200 {
            let q = Quaternion::new(rng.gen(), rng.gen(), rng.gen(), rng.gen());
            let c = Complex64::new(rng.gen(), rng.gen());
            assert_q_eq(right_mul_complex(q, c), q * Quaternion::from_complex(c));
        }
    }

    #[test]
    fn anti_commutation_j_z() {
        // j*z = conj(z)*j for every complex z
        let mut rng = StdRng::seed_from_u64(0xacdc);
        for _ in 0..200 {
            let c = Complex64::new(rng.gen::<f64>() * 4.0 - 2.0, rng.gen::<f64>() * 4.0 - 2.0);
            let lhs = J * Quaternion::from_complex(c);
            let rhs = Quaternion::from_complex(c.conj()) * J;
            // value equality: the two orderings may differ in zero signs
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn symplectic_examples() {
        let p = symplectic_decompose(J);
        assert_eq!(p.z1, Complex64::new(0.0, 0.0));
        assert_eq!(p.z2, Complex64::new(1.0, 0.0));

        let q = Quaternion::new(1.0, 1.0, 1.0, 1.0);
        let p = symplectic_decompose(q);
        assert_eq!(p.z1, Complex64::new(1.0, 1.0));
        assert_eq!(p.z2, Complex64::new(1.0, -1.0));
        assert_q_eq(symplectic_compose(p), q);
    }

    #[test]
    fn pair_multiplication_rules_match_qmul() {
        let mut rng = StdRng::seed_from_u64(0x90a1);
        for _ in 0..500 {
            let q = Quaternion::new(rng.gen(), rng.gen(), rng.gen(), rng.gen());
            let c = Complex64::new(rng.gen(), rng.gen());
            let p = symplectic_decompose(q);

            // right multiplication:  (z1, z2) -> (z1 c, z2 c)
            let direct = symplectic_decompose(q * Quaternion::from_complex(c));
            let viapair = p.right_mul(c);
            assert!((direct.z1 - viapair.z1).norm() < 1e-14);
            assert!((direct.z2 - viapair.z2).norm() < 1e-14);

            // left multiplication:  (z1, z2) -> (c z1, conj(c) z2)
            let direct = symplectic_decompose(Quaternion::from_complex(c) * q);
            let viapair = p.left_mul(c);
            assert!((direct.z1 - viapair.z1).norm() < 1e-14);
            assert!((direct.z2 - viapair.z2).norm() < 1e-14);
        }
    }

    #[test]
    fn norm_multiplicativity_random_pairs() {
        let mut rng = StdRng::seed_from_u64(0xbead);
        for _ in 0..10_000 {
            let p = Quaternion::new(
                rng.gen::<f64>() * 2.0 - 1.0,
                rng.gen::<f64>() * 2.0 - 1.0,
                rng.gen::<f64>() * 2.0 - 1.0,
                rng.gen::<f64>() * 2.0 - 1.0,
            );
            let q = Quaternion::new(
                rng.gen::<f64>() * 2.0 - 1.0,
                rng.gen::<f64>() * 2.0 - 1.0,
                rng.gen::<f64>() * 2.0 - 1.0,
                rng.gen::<f64>() * 2.0 - 1.0,
            );
            let lhs = (p * q).norm();
            let rhs = p.norm() * q.norm();
            let scale = rhs.max(1e-300);
            assert!(
                ((lhs - rhs) / scale).abs() < 1e-13,
                "norm multiplicativity violated: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn conjugate_times_self_is_norm_sqr() {
        let mut rng = StdRng::seed_from_u64(0xc0de);
        for _ in 0..200 {
            let q = Quaternion::new(rng.gen(), rng.gen(), rng.gen(), rng.gen());
            let prod = q.conjugate() * q;
            assert!((prod.w - q.norm_sqr()).abs() < 1e-14);
            assert!(prod.x.abs() < 1e-15 && prod.y.abs() < 1e-15 && prod.z.abs() < 1e-15);
        }
    }

    proptest! {
        /// Round trip through the symplectic pair is bit-exact in both directions.
        #[test]
        fn prop_symplectic_round_trip(w in -1e6f64..1e6, x in -1e6f64..1e6,
                                      y in -1e6f64..1e6, z in -1e6f64..1e6) {
            let q = Quaternion::new(w, x, y, z);
            let rt = symplectic_compose(symplectic_decompose(q));
            prop_assert_eq!(q.w.to_bits(), rt.w.to_bits());
            prop_assert_eq!(q.x.to_bits(), rt.x.to_bits());
            prop_assert_eq!(q.y.to_bits(), rt.y.to_bits());
            prop_assert_eq!(q.z.to_bits(), rt.z.to_bits());

            let p = SymplecticPair::new(Complex64::new(w, x), Complex64::new(y, z));
            let rt = symplectic_decompose(symplectic_compose(p));
            prop_assert_eq!(p.z1.re.to_bits(), rt.z1.re.to_bits());
            prop_assert_eq!(p.z1.im.to_bits(), rt.z1.im.to_bits());
            prop_assert_eq!(p.z2.re.to_bits(), rt.z2.re.to_bits());
            prop_assert_eq!(p.z2.im.to_bits(), rt.z2.im.to_bits());
        }
    }
}
