use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt::Debug;

/// Exact rationals, always in lowest terms with positive denominator.
pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Commutative ring with a unit and an embedding of Q.
///
/// Method names carry an `r` prefix so they never collide with the operator
/// traits most implementors also provide.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn rzero() -> Self;
    fn rone() -> Self;
    fn ris_zero(&self) -> bool;
    fn from_q(q: &Q) -> Self;
    fn radd(&self, o: &Self) -> Self;
    fn rsub(&self, o: &Self) -> Self;
    fn rmul(&self, o: &Self) -> Self;
    fn rneg(&self) -> Self;
    fn rscale(&self, c: &Q) -> Self {
        self.rmul(&Self::from_q(c))
    }
    fn rpow(&self, e: u32) -> Self {
        let mut acc = Self::rone();
        for _ in 0..e {
            acc = acc.rmul(self);
        }
        acc
    }
}

pub trait Field: Ring {
    fn rinv(&self) -> Option<Self>;
}

impl Ring for Q {
    fn rzero() -> Self {
        Zero::zero()
    }
    fn rone() -> Self {
        One::one()
    }
    fn ris_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
    fn radd(&self, o: &Self) -> Self {
        self + o
    }
    fn rsub(&self, o: &Self) -> Self {
        self - o
    }
    fn rmul(&self, o: &Self) -> Self {
        self * o
    }
    fn rneg(&self) -> Self {
        -self
    }
}

impl Field for Q {
    fn rinv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}
