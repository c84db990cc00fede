//! The recurrence-side map ψ, its coordinate change to the standard
//! equation, and the exact checks tying the two together.

mod basepoints;
mod bv;
mod checks;

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalars::Field;
use crate::weyl::PointConfig;

pub use basepoints::{base_points_verify, BasePointReport, CascadeReport, ChartLimit, VanishingCheck, CASCADE_W_SAMPLES};
pub use bv::{bv_residuals, BvResiduals};
pub use checks::{
    sk7_batch, sk7_check, theorem1_batch, theorem1_check, xyn_relations_hold, BatchReport, Sk7Report, Theorem1Report,
};

/// `(λ, s, n; x, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct XYState<F> {
    pub lambda: F,
    pub s: F,
    pub n: F,
    pub x: F,
    pub y: F,
}

impl<F: Field> XYState<F> {
    pub fn new(lambda: F, s: F, n: F, x: F, y: F) -> Self {
        Self { lambda, s, n, x, y }
    }

    pub fn same_value(&self, other: &Self) -> bool {
        [(&self.lambda, &other.lambda), (&self.s, &other.s), (&self.n, &other.n), (&self.x, &other.x), (&self.y, &other.y)]
            .iter()
            .all(|(a, b)| a.same_value(b))
    }
}

impl<F: fmt::Display> fmt::Display for XYState<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(lambda={}, s={}, n={}; x={}, y={})", self.lambda, self.s, self.n, self.x, self.y)
    }
}

impl<F: fmt::Display> Serialize for XYState<F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("XYState", 5)?;
        st.serialize_field("lambda", &self.lambda.to_string())?;
        st.serialize_field("s", &self.s.to_string())?;
        st.serialize_field("n", &self.n.to_string())?;
        st.serialize_field("x", &self.x.to_string())?;
        st.serialize_field("y", &self.y.to_string())?;
        st.end()
    }
}

/// The forward map: `x̄ = (n−y)/(2xy(y+λ))`,
/// `ȳ = −(y+λ)(n² − n(2+sx)y + (1+sx−2λx²)y² − 2x²y³)/(y−n)²`, `n → n+1`.
pub fn psi_forward<F: Field>(st: &XYState<F>) -> Result<XYState<F>> {
    let XYState { lambda, s, n, x, y } = st;
    if x.is_zero() {
        return Err(Error::Singular("x = 0"));
    }
    if y.is_zero() {
        return Err(Error::Singular("y = 0"));
    }
    let y_plus_l = y.plus(lambda);
    if y_plus_l.is_zero() {
        return Err(Error::Singular("y = -lambda"));
    }
    let y_minus_n = y.minus(n);
    if y_minus_n.is_zero() {
        return Err(Error::Singular("y = n"));
    }
    let one = x.one_like();
    let two = x.int_like(2);
    let x_bar = n.minus(y).checked_div(&two.times(x).times(y).times(&y_plus_l))?;
    let sx = s.times(x);
    let x2 = x.square();
    let y2 = y.square();
    let poly = n
        .square()
        .minus(&n.times(&two.plus(&sx)).times(y))
        .plus(&one.plus(&sx).minus(&two.times(lambda).times(&x2)).times(&y2))
        .minus(&two.times(&x2).times(&y2).times(y));
    let y_bar = y_plus_l.times(&poly).negate().checked_div(&y_minus_n.square())?;
    Ok(XYState::new(lambda.clone(), s.clone(), n.plus(&one), x_bar, y_bar))
}

/// `q = −√2·xy`, `p = (n−y)/(√2·xy)`, `(a₀,a₁,a₂) = (1−λ, −n, n+λ)`, `t = s/√2`.
pub fn xy_to_qp<F: Field>(st: &XYState<F>) -> Result<PointConfig<F>> {
    let XYState { lambda, s, n, x, y } = st;
    let xy = x.times(y);
    if xy.is_zero() {
        return Err(Error::Singular("x*y = 0"));
    }
    let r2 = x.sqrt2_like();
    let one = x.one_like();
    let q = r2.times(&xy).negate();
    let p = n.minus(y).checked_div(&r2.times(&xy))?;
    let t = s.checked_div(&r2)?;
    Ok(PointConfig::new(one.minus(lambda), n.negate(), n.plus(lambda), t, q, p))
}

/// `x = q/(√2(a₁−qp))`, `y = qp − a₁`, `s = √2·t`, `n = −a₁`.
pub fn qp_to_xy<F: Field>(c: &PointConfig<F>, lambda: &F) -> Result<XYState<F>> {
    let qp = c.q.times(&c.p);
    let gap = c.a1.minus(&qp);
    if gap.is_zero() {
        return Err(Error::Singular("a1 = q*p"));
    }
    let r2 = c.q.sqrt2_like();
    let x = c.q.checked_div(&r2.times(&gap))?;
    Ok(XYState::new(lambda.clone(), r2.times(&c.t), c.a1.negate(), x, gap.negate()))
}

/// One row of an orbit dump.
#[derive(Clone, Debug, Serialize)]
#[serde(bound = "")]
pub struct OrbitRow<F: fmt::Display> {
    pub state: XYState<F>,
    pub q: String,
    pub p: String,
}

/// Iterates ψ `steps` times from `start`, returning `steps + 1` states.
pub fn orbit<F: Field>(start: &XYState<F>, steps: usize) -> Result<Vec<OrbitRow<F>>> {
    let mut rows = Vec::with_capacity(steps + 1);
    let mut cur = start.clone();
    for k in 0..=steps {
        let qp = xy_to_qp(&cur)?;
        rows.push(OrbitRow { state: cur.clone(), q: qp.q.to_string(), p: qp.p.to_string() });
        if k < steps {
            cur = psi_forward(&cur)?;
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, QuadExt};

    fn r(n: i64, d: i64) -> QuadExt {
        QuadExt::from_rational(rat(n, d))
    }

    fn example() -> XYState<QuadExt> {
        XYState::new(r(1, 1), r(0, 1), r(1, 1), r(1, 1), r(2, 1))
    }

    #[test]
    fn psi_example() {
        let out = psi_forward(&example()).unwrap();
        assert_eq!(out, XYState::new(r(1, 1), r(0, 1), r(2, 1), r(-1, 12), r(69, 1)));
        // y + ȳ = −(2λx̄² − sx̄ − 1)/(2x̄²)
        let rhs = out
            .lambda
            .times(&out.x.square())
            .scale_int(2)
            .minus(&out.s.times(&out.x))
            .minus(&r(1, 1))
            .negate()
            .checked_div(&out.x.square().scale_int(2))
            .unwrap();
        assert_eq!(rhs, r(71, 1));
    }

    #[test]
    fn psi_singular_loci() {
        let mut st = example();
        st.y = st.n.clone();
        assert_eq!(psi_forward(&st), Err(Error::Singular("y = n")));
        st.y = r(-1, 1);
        assert_eq!(psi_forward(&st), Err(Error::Singular("y = -lambda")));
        st.x = r(0, 1);
        assert_eq!(psi_forward(&st), Err(Error::Singular("x = 0")));
    }

    #[test]
    fn coordinate_change_example() {
        let c = xy_to_qp(&example()).unwrap();
        let root2 = QuadExt::sqrt2();
        assert_eq!(c.a0, r(0, 1));
        assert_eq!(c.a1, r(-1, 1));
        assert_eq!(c.a2, r(2, 1));
        assert_eq!(c.t, r(0, 1));
        assert_eq!(c.q, root2.scale(&rat(-2, 1)));
        assert_eq!(c.p, root2.scale(&rat(-1, 4)));
        assert_eq!(c.root_sum(), r(1, 1));
        assert_eq!(c.q.times(&c.p).minus(&c.a1), r(2, 1));
        assert_eq!(qp_to_xy(&c, &r(1, 1)).unwrap(), example());
    }

    #[test]
    fn orbit_has_steps_plus_one_rows() {
        let rows = orbit(&example(), 3).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[1].state.y, r(69, 1));
        assert_eq!(rows[3].state.n, r(4, 1));
    }
}
