//! Roots of real-rooted polynomials and the basic deformation used by the
//! path constructions: shifting the constant term of `prod_{i in S} (t - x_i)`
//! moves the coordinates in `S` while fixing their first `|S| - 1` power sums.

/// Coefficients (constant term first) of `prod_i (t - r_i)`.
pub(crate) fn poly_from_roots(roots: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for &r in roots {
        let mut next = vec![0.0; c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            next[i] -= r * ci;
        }
        c = next;
    }
    c
}

pub(crate) fn eval(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * t + ci)
}

pub(crate) fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &ci)| i as f64 * ci)
        .collect()
}

fn bisect(c: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let (flo, fhi) = (eval(c, lo), eval(c, hi));
    if flo == 0.0 {
        return lo;
    }
    if fhi == 0.0 {
        return hi;
    }
    if flo.signum() == fhi.signum() {
        // A double root sitting on a bracket end.
        return if flo.abs() <= fhi.abs() { lo } else { hi };
    }
    let lo_neg = flo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = eval(c, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == lo_neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All roots, in descending order, of a polynomial whose roots are known to
/// be real; brackets come from the (recursively computed) critical points.
pub(crate) fn real_rooted_roots(c: &[f64]) -> Vec<f64> {
    let d = c.len() - 1;
    match d {
        0 => Vec::new(),
        1 => vec![-c[0] / c[1]],
        _ => {
            let crit = real_rooted_roots(&derivative(c));
            roots_between(c, &crit)
        }
    }
}

/// Roots of `c` given its critical points `crit` (descending).
pub(crate) fn roots_between(c: &[f64], crit: &[f64]) -> Vec<f64> {
    let lead = c[c.len() - 1];
    let bound = 1.0 + c[..c.len() - 1].iter().map(|x| (x / lead).abs()).fold(0.0, f64::max);
    let top = bound.max(crit.first().copied().unwrap_or(0.0).abs()) + 1.0;
    let mut edges = vec![top];
    edges.extend_from_slice(crit);
    edges.push(-top);
    edges.windows(2).map(|w| bisect(c, w[1], w[0])).collect()
}

/// Bisection locates a nearly double root only to about the square root of
/// machine precision. For each such pair, recompute it from its sum and
/// product, which the top two coefficients of `c` fix given the other roots;
/// every power sum of the pair is a function of those two numbers.
pub(crate) fn refine_close_pairs(c: &[f64], roots: &mut [f64]) {
    let m = roots.len();
    if m < 2 {
        return;
    }
    let scale = roots.iter().map(|r| r.abs()).fold(1.0, f64::max);
    let lead = c[m];
    let e1 = -c[m - 1] / lead;
    let e2 = c[m - 2] / lead;
    for i in 0..m - 1 {
        if (roots[i] - roots[i + 1]).abs() > 1e-3 * scale {
            continue;
        }
        let others: Vec<f64> = (0..m).filter(|&j| j != i && j != i + 1).map(|j| roots[j]).collect();
        let o1: f64 = others.iter().sum();
        let mut o2 = 0.0;
        for (p, x) in others.iter().enumerate() {
            for y in &others[p + 1..] {
                o2 += x * y;
            }
        }
        let sum = e1 - o1;
        let prod = e2 - sum * o1 - o2;
        let half_gap = (sum * sum / 4.0 - prod).max(0.0).sqrt();
        roots[i] = sum / 2.0 + half_gap;
        roots[i + 1] = sum / 2.0 - half_gap;
    }
}

/// Deformation of the coordinates in `subset`: they become the roots of
/// `R_0(t) + c` where `R_0` is the monic polynomial with the current values.
/// With `|subset| = k` this keeps `s_1, ..., s_{k-1}` and changes `s_k` by
/// `-k c`, so negative `c` moves up in the order and positive `c` down.
#[derive(Debug, Clone)]
pub(crate) struct SubsetMove {
    pub subset: Vec<usize>,
    r0: Vec<f64>,
    crit: Vec<f64>,
    /// +1 for moving down (c > 0), -1 for moving up.
    sigma: f64,
    /// Largest admissible `|c|` before two coordinates of the subset merge.
    pub c_end: f64,
}

impl SubsetMove {
    /// `subset` must list indices whose values are in descending order.
    pub fn new(values: &[f64], subset: Vec<usize>, up: bool) -> Self {
        let pts: Vec<f64> = subset.iter().map(|&i| values[i]).collect();
        let r0 = poly_from_roots(&pts);
        let d1 = derivative(&r0);
        let crit = real_rooted_roots(&d1);
        let d2 = derivative(&d1);
        let sigma = if up { -1.0 } else { 1.0 };
        let scale = pts.iter().map(|v| v.abs()).fold(1.0, f64::max).powi(pts.len() as i32);
        let mut c_end = f64::INFINITY;
        for &z in &crit {
            let v = eval(&r0, z);
            if v.abs() <= 1e-13 * scale {
                if sigma * eval(&d2, z) > 0.0 {
                    c_end = 0.0;
                }
            } else if sigma * -v > 0.0 {
                c_end = c_end.min(v.abs());
            }
        }
        SubsetMove {
            subset,
            r0,
            crit,
            sigma,
            c_end,
        }
    }

    pub fn blocked(&self) -> bool {
        self.c_end <= 0.0
    }

    /// Signed shift for a progress amount `s` in `[0, c_end]`.
    pub fn shift(&self, s: f64) -> f64 {
        self.sigma * s
    }

    /// Progress at which some coordinate of the subset equals `tau`, if that
    /// happens within the admissible range.
    pub fn hit(&self, tau: f64) -> Option<f64> {
        let s = self.sigma * -eval(&self.r0, tau);
        (s > 0.0 && s <= self.c_end).then_some(s)
    }

    /// Subset values (descending) after progress `s`.
    pub fn roots_at(&self, s: f64) -> Vec<f64> {
        let mut c = self.r0.clone();
        c[0] += self.shift(s);
        let mut roots = roots_between(&c, &self.crit);
        refine_close_pairs(&c, &mut roots);
        roots
    }

    /// Writes the subset values after progress `s` into `values`.
    pub fn apply(&self, values: &mut [f64], s: f64) {
        for (&i, r) in self.subset.iter().zip(self.roots_at(s)) {
            values[i] = r;
        }
    }
}
