//! Integer image of a distance matrix.
//!
//! Every distance is multiplied by the least common denominator of the
//! matrix, which turns all equality and ordering questions into integer
//! comparisons. Small matrices use `i128`; anything whose scaled entries
//! exceed [`SMALL_LIMIT`] falls back to `BigInt`. The scans are generic over
//! [`Exact`] so both paths run the same code.

use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Entries at most 2^58 keep every product of two triplet sums inside `i128`.
pub(crate) const SMALL_LIMIT: i128 = 1 << 58;

pub(crate) trait Exact:
    Clone
    + Ord
    + Debug
    + Send
    + Sync
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn to_bigint(&self) -> BigInt;

    fn double(&self) -> Self {
        self.clone() + self.clone()
    }
}

impl Exact for i128 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Exact for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Values {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

/// Scaled copy of a row-major `n x n` matrix: `values[i*n+j] = dist[i][j] * scale`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Kernel {
    pub n: usize,
    pub scale: BigInt,
    pub values: Values,
}

impl Kernel {
    pub fn new(n: usize, dist: &[BigRational]) -> Kernel {
        let scale = dist
            .iter()
            .fold(BigInt::one(), |acc, d| acc.lcm(d.denom()));
        let scaled: Vec<BigInt> = dist
            .iter()
            .map(|d| d.numer() * (&scale / d.denom()))
            .collect();
        let small: Option<Vec<i128>> = scaled
            .iter()
            .map(|v| v.to_i128().filter(|x| x.abs() <= SMALL_LIMIT))
            .collect();
        let values = match small {
            Some(v) => Values::Small(v),
            None => Values::Big(scaled),
        };
        Kernel { n, scale, values }
    }

    /// Converts a scaled integer back to the original units.
    pub fn unscale(&self, v: BigInt) -> BigRational {
        BigRational::new(v, self.scale.clone())
    }
}

/// Borrowed `n x n` view used by the generic scans.
pub(crate) struct Lengths<'a, T> {
    pub n: usize,
    pub d: &'a [T],
}

impl<T> Clone for Lengths<'_, T> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<T> Copy for Lengths<'_, T> {}

impl<'a, T: Exact> Lengths<'a, T> {
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &'a T {
        &self.d[i * self.n + j]
    }

    /// d(x,y) + d(y,z) + d(z,x)
    #[inline]
    pub fn perimeter(&self, x: usize, y: usize, z: usize) -> T {
        self.at(x, y).clone() + self.at(y, z).clone() + self.at(z, x).clone()
    }

    /// d(x,p) + d(y,p) + d(z,p)
    #[inline]
    pub fn star_sum(&self, x: usize, y: usize, z: usize, p: usize) -> T {
        self.at(x, p).clone() + self.at(y, p).clone() + self.at(z, p).clone()
    }
}

/// Runs `$body` with `$view` bound to a [`Lengths`] over whichever integer
/// type the kernel holds.
macro_rules! with_lengths {
    ($kernel:expr, |$view:ident| $body:expr) => {{
        let kernel: &$crate::kernel::Kernel = $kernel;
        match &kernel.values {
            $crate::kernel::Values::Small(d) => {
                let $view = $crate::kernel::Lengths { n: kernel.n, d: d.as_slice() };
                $body
            }
            $crate::kernel::Values::Big(d) => {
                let $view = $crate::kernel::Lengths { n: kernel.n, d: d.as_slice() };
                $body
            }
        }
    }};
}
pub(crate) use with_lengths;
