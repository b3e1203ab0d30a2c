//! Growth of the genus-zero simple coefficients `c_d = H_0((1^d), 0)/d!`.

use hciz_core::monotone::hurwitz_single;
use hciz_core::partitions::{factorial, Partition};
use num::{BigInt, BigRational, Zero};

/// Conjectured limit of `c_d / c_{d-1}`.
pub const RADIUS_REFERENCE: f64 = 13.5;

#[derive(Clone, Debug, PartialEq)]
pub struct RadiusRow {
    pub d: u32,
    pub hurwitz: BigInt,
    pub coefficient: BigRational,
    /// `c_d / c_{d-1}`, absent at `d = 1`
    pub ratio: Option<BigRational>,
    /// `2^d (3d−3)! / (2d)!`
    pub closed_form: BigRational,
}

pub fn radius_trend(d_max: u32) -> Vec<RadiusRow> {
    let mut rows: Vec<RadiusRow> = Vec::new();
    for d in 1..=d_max {
        let h = hurwitz_single(&Partition::ones(d), 0).expect("degree within table range");
        let c = BigRational::new(h.clone(), factorial(d));
        let ratio = rows
            .last()
            .filter(|r| !r.coefficient.is_zero())
            .map(|r| &c / &r.coefficient);
        let closed_form = BigRational::new(
            BigInt::from(2).pow(d) * factorial(3 * d - 3),
            factorial(2 * d),
        );
        rows.push(RadiusRow { d, hurwitz: h, coefficient: c, ratio, closed_form });
    }
    rows
}

/// Ratios strictly increase.
pub fn is_monotone(rows: &[RadiusRow]) -> bool {
    let r: Vec<&BigRational> = rows.iter().filter_map(|x| x.ratio.as_ref()).collect();
    r.windows(2).all(|w| w[1] > w[0])
}
