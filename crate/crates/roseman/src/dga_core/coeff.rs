use std::fmt;

/// Coefficient ring of a free algebra. Values carry whatever context they
/// need (the modulus, for F_p), so there is no global zero or one.
pub trait Coeff: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync {
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_unit(&self) -> bool;
    fn unit_inverse(&self) -> Option<Self>;
    fn is_one(&self) -> bool;
}
