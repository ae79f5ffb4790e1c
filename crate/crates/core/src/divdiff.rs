//! Divided differences, the sliding-window decomposition of a zero-moment
//! functional into order-`k` divided differences, and discrete test
//! functions `P(x) + sum_j c_j (x - t_j)_+^(k-1)` with `c_j >= 0`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactpoly::{rational::pow, Poly, Rational};
use crate::spline::InequalityProblem;

/// Values of a function at distinct points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    pub points: Vec<Rational>,
    pub values: Vec<Rational>,
}

impl FunctionTable {
    pub fn new(points: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::LengthMismatch {
                left: points.len(),
                right: values.len(),
            });
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::RepeatedPoint(p.to_string()));
            }
        }
        Ok(FunctionTable { points, values })
    }

    /// Tabulates `f` at `points`.
    pub fn tabulate<F>(points: &[Rational], f: F) -> Result<Self>
    where
        F: Fn(&Rational) -> Rational,
    {
        Self::new(points.to_vec(), points.iter().map(f).collect())
    }

    pub fn value_at(&self, x: &Rational) -> Option<&Rational> {
        self.points.iter().position(|p| p == x).map(|i| &self.values[i])
    }
}

/// `[x_1, ..., x_m; f] = sum_i f(x_i) / prod_{j != i} (x_i - x_j)`.
pub fn divided_difference(table: &FunctionTable) -> Result<Rational> {
    if table.points.is_empty() {
        return Err(Error::TooFewNodes { needed: 1, found: 0 });
    }
    // FunctionTable::new already rejects repeats, but the fields are public.
    let pts = &table.points;
    let mut total = Rational::zero();
    for (i, (xi, fi)) in pts.iter().zip(&table.values).enumerate() {
        let mut denom = Rational::one();
        for (j, xj) in pts.iter().enumerate() {
            if i != j {
                let d = xi - xj;
                if d.is_zero() {
                    return Err(Error::RepeatedPoint(xi.to_string()));
                }
                denom *= d;
            }
        }
        total += fi / denom;
    }
    Ok(total)
}

/// Window coefficients of the sliding divided-difference decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HammerDecomposition {
    /// `(a_j - a_{j+k}) * inner_sums[j]`, one per window.
    pub coefficients: Vec<Rational>,
    /// `sum_{i<=j} w_i (a_i - a_{j+1}) ... (a_i - a_{j+k-1})`.
    pub inner_sums: Vec<Rational>,
    /// Arguments `(a_j, ..., a_{j+k})` of each window.
    pub windows: Vec<Vec<Rational>>,
    /// The node list the windows index into (anchors included).
    pub args: Vec<Rational>,
    pub weights: Vec<Rational>,
    pub k: usize,
}

impl HammerDecomposition {
    /// Passes iff every inner sum is nonnegative.
    pub fn passes(&self) -> bool {
        self.inner_sums.iter().all(|s| !s.is_negative())
    }

    /// First window (1-based) with a negative inner sum, with that sum.
    pub fn first_violation(&self) -> Option<(usize, Rational)> {
        self.inner_sums
            .iter()
            .position(Signed::is_negative)
            .map(|j| (j + 1, self.inner_sums[j].clone()))
    }

    /// `sum_j coefficient_j * [window_j; f]` for `f` tabulated on the args.
    pub fn evaluate(&self, f: &FunctionTable) -> Result<Rational> {
        let mut total = Rational::zero();
        for (coef, window) in self.coefficients.iter().zip(&self.windows) {
            if coef.is_zero() {
                continue;
            }
            let values = window
                .iter()
                .map(|x| {
                    f.value_at(x).cloned().ok_or_else(|| {
                        Error::InvalidInput(format!("function not tabulated at {x}"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            total += coef * divided_difference(&FunctionTable::new(window.clone(), values)?)?;
        }
        Ok(total)
    }
}

/// Window decomposition of `problem`, with optional zero-weight anchors
/// inserted among the arguments before the windows are formed.
pub fn hammer_decompose(
    problem: &InequalityProblem,
    anchors: &[Rational],
) -> Result<HammerDecomposition> {
    let k = problem.k();
    let mut nodes: Vec<(Rational, Rational)> = problem
        .nodes()
        .iter()
        .map(|n| (n.arg.clone(), n.weight.clone()))
        .collect();
    for a in anchors {
        if !nodes.iter().any(|(x, _)| x == a) {
            nodes.push((a.clone(), Rational::zero()));
        }
    }
    nodes.sort_by(|x, y| y.0.cmp(&x.0));
    let n = nodes.len();
    if n < k + 1 {
        return Err(Error::TooFewNodes {
            needed: k + 1,
            found: n,
        });
    }
    let (args, weights): (Vec<_>, Vec<_>) = nodes.into_iter().unzip();
    let mut coefficients = Vec::with_capacity(n - k);
    let mut inner_sums = Vec::with_capacity(n - k);
    let mut windows = Vec::with_capacity(n - k);
    for j in 0..n - k {
        let mut inner = Rational::zero();
        for i in 0..=j {
            let mut prod = weights[i].clone();
            for l in 1..k {
                prod *= &args[i] - &args[j + l];
            }
            inner += prod;
        }
        coefficients.push((&args[j] - &args[j + k]) * &inner);
        inner_sums.push(inner);
        windows.push(args[j..=j + k].to_vec());
    }
    Ok(HammerDecomposition {
        coefficients,
        inner_sums,
        windows,
        args,
        weights,
        k,
    })
}

/// Result of comparing the two sides of an identity exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdentityCheck {
    Equal,
    Mismatch { lhs: Rational, rhs: Rational },
}

/// Checks `sum_j w_j f(a_j) = sum_j coefficient_j [a_j, ..., a_{j+k}; f]`
/// for a zero-moment problem and a function tabulated at its arguments.
pub fn hammer_identity_check(
    problem: &InequalityProblem,
    anchors: &[Rational],
    f: &FunctionTable,
) -> Result<IdentityCheck> {
    if let Some(j) = (0..problem.k()).find(|&j| !problem.moment(j).is_zero()) {
        return Err(Error::MomentViolation {
            index: j,
            value: problem.moment(j).to_string(),
        });
    }
    let dec = hammer_decompose(problem, anchors)?;
    let mut lhs = Rational::zero();
    for node in problem.nodes() {
        let v = f.value_at(&node.arg).ok_or_else(|| {
            Error::InvalidInput(format!("function not tabulated at {}", node.arg))
        })?;
        lhs += &node.weight * v;
    }
    let rhs = dec.evaluate(f)?;
    Ok(if lhs == rhs {
        IdentityCheck::Equal
    } else {
        IdentityCheck::Mismatch { lhs, rhs }
    })
}

/// `f(x) = P(x) + sum_j c_j (x - t_j)_+^(k-1)` with every `c_j >= 0`; such an
/// `f` has a nonnegative `k`-th derivative in the distributional sense.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthFunction {
    poly_part: Poly,
    knots: Vec<(Rational, Rational)>,
    order: usize,
}

impl SynthFunction {
    pub fn new(poly_part: Poly, knots: Vec<(Rational, Rational)>, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidInput("order must be at least 1".into()));
        }
        if poly_part.degree().is_some_and(|d| d >= order) {
            return Err(Error::InvalidInput(format!(
                "polynomial part of degree {} needs order above {order}",
                poly_part.degree().unwrap()
            )));
        }
        if let Some((t, c)) = knots.iter().find(|(_, c)| c.is_negative()) {
            return Err(Error::InvalidInput(format!(
                "knot at {t} has negative mass {c}"
            )));
        }
        Ok(SynthFunction {
            poly_part,
            knots,
            order,
        })
    }

    /// The prototype `(x - t)_+^(k-1)`.
    pub fn prototype(t: Rational, order: usize) -> Self {
        SynthFunction {
            poly_part: Poly::zero(),
            knots: vec![(t, Rational::one())],
            order,
        }
    }

    /// A pure polynomial of degree below `order`.
    pub fn polynomial(p: Poly, order: usize) -> Result<Self> {
        Self::new(p, Vec::new(), order)
    }

    pub fn poly_part(&self) -> &Poly {
        &self.poly_part
    }

    pub fn knots(&self) -> &[(Rational, Rational)] {
        &self.knots
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut v = self.poly_part.eval(x);
        for (t, c) in &self.knots {
            if x > t {
                v += c * pow(&(x - t), self.order - 1);
            }
        }
        v
    }

    pub fn tabulate(&self, points: &[Rational]) -> Result<FunctionTable> {
        FunctionTable::tabulate(points, |x| self.eval(x))
    }
}

pub fn synth_eval(f: &SynthFunction, x: &Rational) -> Rational {
    f.eval(x)
}

/// `sum_i w_i f(a_i)`.
pub fn apply_functional(problem: &InequalityProblem, f: &SynthFunction) -> Result<Rational> {
    if f.order() != problem.k() {
        return Err(Error::OrderMismatch {
            expected: problem.k(),
            found: f.order(),
        });
    }
    Ok(problem
        .nodes()
        .iter()
        .map(|n| &n.weight * f.eval(&n.arg))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{int, ratio};

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn six_point() -> InequalityProblem {
        InequalityProblem::from_ints(&[6, 5, 4, 2, 1, 0], &[1, -3, 3, -3, 3, -1], 3).unwrap()
    }

    #[test]
    fn divided_difference_examples() {
        let t = FunctionTable::new(ints(&[4]), ints(&[9])).unwrap();
        assert_eq!(divided_difference(&t).unwrap(), int(9));
        let t = FunctionTable::tabulate(&ints(&[2, 0]), |x| x * x).unwrap();
        assert_eq!(divided_difference(&t).unwrap(), int(2));
        let t = FunctionTable::tabulate(&ints(&[6, 5, 4, 3]), |x| x * x * x).unwrap();
        assert_eq!(divided_difference(&t).unwrap(), int(1));
        assert!(FunctionTable::new(ints(&[1, 1]), ints(&[0, 0])).is_err());
        let raw = FunctionTable {
            points: ints(&[1, 1]),
            values: ints(&[0, 0]),
        };
        assert!(divided_difference(&raw).is_err());
    }

    #[test]
    fn six_point_windows() {
        let aug = hammer_decompose(&six_point(), &[int(3)]).unwrap();
        assert_eq!(aug.coefficients, ints(&[6, 0, 0, 6]));
        assert_eq!(aug.windows[0], ints(&[6, 5, 4, 3]));
        assert_eq!(aug.windows[3], ints(&[3, 2, 1, 0]));
        assert!(aug.passes());

        let plain = hammer_decompose(&six_point(), &[]).unwrap();
        assert!(!plain.passes());
        assert_eq!(plain.first_violation(), Some((2, int(-1))));
    }

    #[test]
    fn karamata_window() {
        let p = InequalityProblem::from_ints(&[3, 2, 1], &[1, -2, 1], 2).unwrap();
        let d = hammer_decompose(&p, &[]).unwrap();
        assert_eq!(d.inner_sums, ints(&[1]));
        assert!(d.passes());
    }

    #[test]
    fn too_few_nodes() {
        let p = InequalityProblem::from_ints(&[1, 0], &[1, -1], 2).unwrap();
        assert!(matches!(
            hammer_decompose(&p, &[]),
            Err(Error::TooFewNodes { needed: 3, found: 2 })
        ));
    }

    #[test]
    fn identity_on_cube_and_polynomials() {
        let p = six_point();
        let mut pts = p.args();
        pts.push(int(3));
        let f = FunctionTable::tabulate(&pts, |x| x * x * x).unwrap();
        assert_eq!(hammer_identity_check(&p, &[int(3)], &f).unwrap(), IdentityCheck::Equal);
        let dec = hammer_decompose(&p, &[int(3)]).unwrap();
        assert_eq!(dec.evaluate(&f).unwrap(), int(12));

        let quad = FunctionTable::tabulate(&pts, |x| x * x - int(7) * x + int(2)).unwrap();
        assert_eq!(dec.evaluate(&quad).unwrap(), int(0));
        assert_eq!(hammer_identity_check(&p, &[int(3)], &quad).unwrap(), IdentityCheck::Equal);

        let bad = InequalityProblem::from_ints(&[2, 1, 0], &[1, -2, 1], 3).unwrap();
        let f = FunctionTable::tabulate(&bad.args(), |x| x.clone()).unwrap();
        assert!(matches!(
            hammer_identity_check(&bad, &[], &f),
            Err(Error::MomentViolation { index: 2, .. })
        ));
    }

    #[test]
    fn synth_examples() {
        let f = SynthFunction::prototype(int(0), 2);
        assert_eq!(f.eval(&int(3)), int(3));
        let g = SynthFunction::polynomial(Poly::from_ints(&[0, 1]), 2).unwrap();
        assert_eq!(g.eval(&int(-5)), int(-5));
        let h = SynthFunction::new(
            Poly::zero(),
            vec![(int(1), int(2)), (int(-1), int(1))],
            3,
        )
        .unwrap();
        assert_eq!(synth_eval(&h, &int(2)), int(11));
        assert!(SynthFunction::new(Poly::zero(), vec![(int(0), int(-1))], 2).is_err());
        assert!(SynthFunction::polynomial(Poly::from_ints(&[0, 0, 1]), 2).is_err());
    }

    #[test]
    fn functional_examples() {
        let f = SynthFunction::prototype(ratio(9, 2), 3);
        assert_eq!(apply_functional(&six_point(), &f).unwrap(), ratio(3, 2));
        let q = SynthFunction::polynomial(Poly::from_ints(&[5, -1, 2]), 3).unwrap();
        assert_eq!(apply_functional(&six_point(), &q).unwrap(), int(0));
        let kar = InequalityProblem::from_ints(&[3, 2, 1], &[1, -2, 1], 2).unwrap();
        let f = SynthFunction::prototype(int(2), 2);
        assert_eq!(apply_functional(&kar, &f).unwrap(), int(1));
        assert!(matches!(
            apply_functional(&kar, &SynthFunction::prototype(int(2), 3)),
            Err(Error::OrderMismatch { .. })
        ));
    }
}
