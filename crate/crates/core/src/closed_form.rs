//! Explicit formulas for the solution coefficients, kept alongside the
//! generic recurrence route so the two can be compared.
//!
//! The first-solution weights and the `Y_j` top moment agree with the
//! generic route. The pairwise decomposition of `G_1` for `Y_n` agrees as
//! well, but the coefficient formulas that re-expand it over the `N_s`
//! basis do not: for `n >= 4` the stated values satisfy neither the
//! expansion identity nor the recurrence, and the true residues of `Y_n` are
//! not multiples of `N_s`. [`exact_beta`] gives the correct expansion and
//! [`cross_route`] reports each comparison separately.

use crate::builder::{build_y1, build_yj, build_yn, yj_seed, yj_series, yn_series};
use crate::error::{Error, Result};
use crate::linalg::{dot, kernel, project_onto, Column, Matrix};
use crate::model::{spectral_data, KZSystem};
use crate::rational::Rational;
use crate::series::step_operator;

fn axpy(acc: &mut Column, c: &Rational, v: &[Rational]) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a = &*a + &(c * x);
    }
}

fn zeros(n: usize) -> Column {
    vec![Rational::zero(); n]
}

/// Weight of the `k`-th pole (1-based) in the first solution, from the
/// signed last row of the inverse Vandermonde matrix:
/// `(-1)^(n+k-1) / [prod_{i>k}(z_i - z_k) * prod_{j<k}(z_k - z_j)]`.
pub fn alpha(points: &[Rational], k: usize) -> Result<Rational> {
    if k == 0 || k > points.len() {
        return Err(Error::IndexOutOfRange(format!(
            "pole {k} of {}",
            points.len()
        )));
    }
    let n = points.len() + 1;
    let zk = &points[k - 1];
    let mut den = Rational::one();
    for (i, zi) in points.iter().enumerate() {
        let i = i + 1;
        if i > k {
            den = &den * &(zi - zk);
        } else if i < k {
            den = &den * &(zk - zi);
        }
    }
    let sign = if (n + k - 1).is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    };
    sign.checked_div(&den)
}

/// `prod_{i>j; i,j != k}(z_i - z_j)`: the unsigned cofactor that, divided by
/// the Vandermonde determinant, gives `|alpha_k|`.
pub fn unsigned_cofactor(points: &[Rational], k: usize) -> Rational {
    let mut out = Rational::one();
    for i in 0..points.len() {
        for j in 0..i {
            if i + 1 != k && j + 1 != k {
                out = &out * &(&points[i] - &points[j]);
            }
        }
    }
    out
}

/// `prod_{i>j}(z_i - z_j)`.
pub fn vandermonde_determinant(points: &[Rational]) -> Rational {
    unsigned_cofactor(points, 0)
}

/// Intermediate quantities of the `Y_j` top-moment formula for a seed
/// `col[0, a_1..a_(n-1)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopMoment {
    /// `sum_i a_i z_i`.
    pub m: Rational,
    /// `a_k * sum_{i != k} z_i`.
    pub m_k: Vec<Rational>,
    /// `m_k + m/(n-1)`; these sum to zero.
    pub b: Vec<Rational>,
    /// `m/(n(n-1)) V_3 + col[0, b_1..b_(n-1)]`.
    pub value: Column,
}

pub fn top_moment(sys: &KZSystem, seed: &[Rational]) -> Result<TopMoment> {
    let n = sys.n();
    if seed.len() != n || !seed[0].is_zero() {
        return Err(Error::DimensionMismatch(
            "seed must be col[0, a_1..a_(n-1)]".into(),
        ));
    }
    let a = &seed[1..];
    let pts = sys.points();
    let total: Rational = pts.iter().cloned().sum();
    let m: Rational = a.iter().zip(pts).map(|(ai, zi)| ai * zi).sum();
    let m_k: Vec<Rational> = a
        .iter()
        .zip(pts)
        .map(|(ai, zk)| ai * &(&total - zk))
        .collect();
    let ni = Rational::from(n as i64);
    let over = m.checked_div(&(&ni - &Rational::one()))?;
    let b: Vec<Rational> = m_k.iter().map(|mk| mk + &over).collect();
    let scale = over.checked_div(&ni)?;
    let mut value: Column = spectral_data(n)?.v3.iter().map(|v| v * &scale).collect();
    for (k, bk) in b.iter().enumerate() {
        value[k + 1] = &value[k + 1] + bk;
    }
    Ok(TopMoment { m, m_k, b, value })
}

/// `Y_j` residues from the two nonzero moments:
/// `L_k = alpha_k (G_(n-1) - (sum_{i != k} z_i) G_(n-2))`.
pub fn yj_residues(sys: &KZSystem, j: usize) -> Result<Vec<Column>> {
    let seed = yj_seed(sys.n(), j)?;
    let top = top_moment(sys, &seed)?.value;
    let pts = sys.points();
    let total: Rational = pts.iter().cloned().sum();
    (1..=pts.len())
        .map(|k| {
            let a = alpha(pts, k)?;
            let others = &total - &pts[k - 1];
            let mut l = zeros(sys.n());
            axpy(&mut l, &a, &top);
            axpy(&mut l, &-(&a * &others), &seed);
            Ok(l)
        })
        .collect()
}

/// `G_0 = -sum_i z_i N_i` for the last solution.
pub fn yn_constant_term(sys: &KZSystem) -> Result<Column> {
    let spec = spectral_data(sys.n())?;
    let mut g0 = zeros(sys.n());
    for (z, nv) in sys.points().iter().zip(&spec.n_vectors) {
        axpy(&mut g0, &-z, nv);
    }
    Ok(g0)
}

fn require_closed_form(n: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::ClosedFormUndefined(n));
    }
    Ok(())
}

fn check_pair(n: usize, k: usize, l: usize) -> Result<()> {
    if k == l || k == 0 || l == 0 || k >= n || l >= n {
        return Err(Error::IndexOutOfRange(format!(
            "pole pair ({k},{l}) for n = {n}"
        )));
    }
    Ok(())
}

/// `U_0 = -2/((n-1)(n-2)) V_3`, the `V_3` part of every `P_k N_l`.
pub fn pair_common_part(n: usize) -> Result<Column> {
    let ni = n as i64;
    let c = Rational::new(-2, (ni - 1) * (ni - 2))?;
    Ok(spectral_data(n)?.v3.iter().map(|v| v * &c).collect())
}

/// `U_(k,l) = col[0, a_1..a_(n-1)]` with `a_p = n(n-3)/((n-2)(n-1))` for
/// `p in {k, l}` and `-2n/((n-2)(n-1))` otherwise (poles 1-based).
pub fn pair_zero_sum_part(n: usize, k: usize, l: usize) -> Result<Column> {
    check_pair(n, k, l)?;
    let ni = n as i64;
    let d = (ni - 2) * (ni - 1);
    let on = Rational::new(ni * (ni - 3), d)?;
    let off = Rational::new(-2 * ni, d)?;
    Ok((0..n)
        .map(|p| match p {
            0 => Rational::zero(),
            p if p == k || p == l => on.clone(),
            _ => off.clone(),
        })
        .collect())
}

/// `G_(k,l) = U_0/2 + U_(k,l)/(3-n)`: the solution of `(I - T) x = P_k N_l`.
pub fn pair_term(n: usize, k: usize, l: usize) -> Result<Column> {
    require_closed_form(n)?;
    let half = Rational::new(1, 2)?;
    let inv = Rational::new(1, 3 - n as i64)?;
    let mut g = zeros(n);
    axpy(&mut g, &half, &pair_common_part(n)?);
    axpy(&mut g, &inv, &pair_zero_sum_part(n, k, l)?);
    Ok(g)
}

fn pairs(len: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=len).flat_map(move |k| (1..k).map(move |l| (k, l)))
}

/// `G_1 = sum_{k>l} (z_k - z_l)^2 G_(k,l)`.
pub fn yn_first_moment(sys: &KZSystem) -> Result<Column> {
    let n = sys.n();
    let pts = sys.points();
    let mut g1 = zeros(n);
    for (k, l) in pairs(pts.len()) {
        let w = (&pts[k - 1] - &pts[l - 1]).pow(2);
        axpy(&mut g1, &w, &pair_term(n, k, l)?);
    }
    Ok(g1)
}

/// Stated expansion coefficients of `G_(k,l)` over the `N_s`:
/// `2/((n-1)(n-2))` for `s not in {k, l}`, `-1/(n-1)` otherwise.
pub fn stated_beta(n: usize, s: usize, k: usize, l: usize) -> Result<Rational> {
    require_closed_form(n)?;
    check_pair(n, k, l)?;
    let ni = n as i64;
    if s == k || s == l {
        Rational::new(-1, ni - 1)
    } else {
        Rational::new(2, (ni - 1) * (ni - 2))
    }
}

/// The exact coordinates of `G_(k,l)` in the basis `N_1..N_(n-1)`.
pub fn exact_beta(n: usize, k: usize, l: usize) -> Result<Column> {
    let target = pair_term(n, k, l)?;
    let basis = spectral_data(n)?.n_vectors;
    coordinates(&target, &basis)
        .ok_or_else(|| Error::Invariant("G_(k,l) outside the span of the N_s".into()))
}

/// `gamma_s = sum_{k>l} (z_k - z_l)^2 beta_(s,k,l)` with the stated betas.
pub fn stated_gamma(sys: &KZSystem) -> Result<Vec<Rational>> {
    let n = sys.n();
    let pts = sys.points();
    (1..n)
        .map(|s| {
            pairs(pts.len()).try_fold(Rational::zero(), |acc, (k, l)| {
                let w = (&pts[k - 1] - &pts[l - 1]).pow(2);
                Ok(&acc + &(&w * &stated_beta(n, s, k, l)?))
            })
        })
        .collect()
}

/// Residues `gamma_s N_s` of the last solution under the stated betas.
pub fn stated_yn_residues(sys: &KZSystem) -> Result<Vec<Column>> {
    let spec = spectral_data(sys.n())?;
    Ok(stated_gamma(sys)?
        .iter()
        .zip(&spec.n_vectors)
        .map(|(g, nv)| nv.iter().map(|x| g * x).collect())
        .collect())
}

/// Coordinates of `v` in an independent `basis`, if `v` lies in its span.
pub fn coordinates(v: &[Rational], basis: &[Column]) -> Option<Column> {
    if basis.is_empty() {
        return v.iter().all(Rational::is_zero).then(Vec::new);
    }
    let gram = Matrix::from_fn(basis.len(), basis.len(), |i, j| dot(&basis[i], &basis[j]));
    let rhs: Column = basis.iter().map(|b| dot(b, v)).collect();
    let c = gram.inverse().ok()?.mul_vec(&rhs).ok()?;
    let mut back = zeros(v.len());
    for (ci, b) in c.iter().zip(basis) {
        axpy(&mut back, ci, b);
    }
    (back == v).then_some(c)
}

/// True iff `a - b` lies in the span of `freedom`.
pub fn agree_modulo(a: &[Rational], b: &[Rational], freedom: &[Column]) -> bool {
    let diff: Column = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let proj = project_onto(&diff, freedom);
    diff == proj
}

fn flatten(residues: &[Column]) -> Column {
    residues.iter().flatten().cloned().collect()
}

/// One comparison between a closed formula and the generic route.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouteCheck {
    pub name: &'static str,
    pub agrees: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossRouteReport {
    pub n: usize,
    pub checks: Vec<RouteCheck>,
}

impl CrossRouteReport {
    pub fn all_agree(&self) -> bool {
        self.checks.iter().all(|c| c.agrees)
    }

    pub fn check(&self, name: &str) -> Option<&RouteCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn first_difference(a: &[Rational], b: &[Rational]) -> String {
    match a.iter().zip(b).position(|(x, y)| x != y) {
        Some(i) => format!("entry {i}: closed form {} vs generic {}", a[i], b[i]),
        None => "equal".into(),
    }
}

/// Compares every closed formula with the recurrence + Vandermonde route.
/// Differences are tolerated exactly along the freedom each singular step
/// leaves (kernel vectors of the step operator, or residues of the
/// solutions that freedom adds).
pub fn cross_route(sys: &KZSystem) -> Result<CrossRouteReport> {
    let n = sys.n();
    let pts = sys.points();
    let mut checks = Vec::new();
    let mut push = |name, agrees, detail: String| {
        checks.push(RouteCheck {
            name,
            agrees,
            detail,
        })
    };

    let y1 = build_y1(sys)?.column_residues(0);
    let v1 = spectral_data(n)?.v1;
    let closed: Column = (1..=pts.len())
        .map(|k| alpha(pts, k))
        .collect::<Result<_>>()?;
    let generic: Column = y1.iter().map(|l| l[0].clone()).collect();
    let parallel = y1
        .iter()
        .zip(&closed)
        .all(|(l, a)| *l == v1.iter().map(|x| x * a).collect::<Column>());
    push(
        "alpha",
        parallel && closed == generic,
        first_difference(&closed, &generic),
    );

    let det = vandermonde_determinant(pts);
    let magnitude =
        (1..=pts.len()).all(|k| (&closed[k - 1] * &det).abs() == unsigned_cofactor(pts, k).abs());
    push(
        "cofactor magnitude",
        magnitude,
        format!("Vandermonde determinant {det}"),
    );

    let top_kernel = kernel(&step_operator(sys, n as i64 - 1));
    let y1_flat = vec![flatten(&y1)];
    let (mut top_ok, mut res_ok, mut b_sum_ok) = (true, true, true);
    let (mut top_detail, mut res_detail) = (String::from("equal"), String::from("equal"));
    for j in 2..n {
        let seed = yj_seed(n, j)?;
        let tm = top_moment(sys, &seed)?;
        b_sum_ok &= tm.b.iter().cloned().sum::<Rational>().is_zero();
        let generic_top = yj_series(sys, j)?
            .get(n as i64 - 1)
            .cloned()
            .ok_or(Error::MissingCoefficient(n as i64 - 1))?;
        if !agree_modulo(&tm.value, &generic_top, &top_kernel) {
            top_ok = false;
            top_detail = format!("Y_{j}: {}", first_difference(&tm.value, &generic_top));
        }
        let closed = flatten(&yj_residues(sys, j)?);
        let generic = flatten(&build_yj(sys, j)?.column_residues(0));
        if !agree_modulo(&closed, &generic, &y1_flat) {
            res_ok = false;
            res_detail = format!("Y_{j}: {}", first_difference(&closed, &generic));
        }
    }
    push("b sums", b_sum_ok, String::new());
    push("top moment", top_ok, top_detail);
    push("Y_j residues", res_ok, res_detail);

    let series = yn_series(sys)?;
    let g0 = yn_constant_term(sys)?;
    let generic_g0 = series.get(0).cloned().ok_or(Error::MissingCoefficient(0))?;
    let g0_ok = agree_modulo(&g0, &generic_g0, &kernel(&step_operator(sys, 0)));
    push(
        "Y_n constant term",
        g0_ok,
        first_difference(&g0, &generic_g0),
    );

    if n >= 4 {
        let generic_g1 = series.get(1).cloned().ok_or(Error::MissingCoefficient(1))?;
        let g1_kernel = kernel(&step_operator(sys, 1));
        let g1 = yn_first_moment(sys)?;
        push(
            "Y_n pairwise G_1",
            agree_modulo(&g1, &generic_g1, &g1_kernel),
            first_difference(&g1, &generic_g1),
        );

        let stated = stated_yn_residues(sys)?;
        let mut summed = zeros(n);
        for l in &stated {
            axpy(&mut summed, &Rational::one(), l);
        }
        let g1_from_gamma = agree_modulo(&summed, &generic_g1, &g1_kernel);
        push(
            "Y_n gamma sum G_1",
            g1_from_gamma,
            first_difference(&summed, &generic_g1),
        );

        let mut freedom = y1_flat.clone();
        for j in 2..n {
            freedom.push(flatten(&build_yj(sys, j)?.column_residues(0)));
        }
        let generic = flatten(&build_yn(sys)?.column_residues(0));
        let closed = flatten(&stated);
        push(
            "Y_n gamma residues",
            agree_modulo(&closed, &generic, &freedom),
            first_difference(&closed, &generic),
        );
    }
    Ok(CrossRouteReport { n, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Rho;
    use crate::rational::q;
    use crate::series::run_recurrence;
    use std::collections::BTreeMap;

    fn sys(points: &[(i64, i64)]) -> KZSystem {
        KZSystem::new(
            points.len() + 1,
            points.iter().map(|&(a, b)| q(a, b)).collect(),
            Rho::Minus,
        )
        .unwrap()
    }

    #[test]
    fn alpha_examples() {
        let pts = [q(0, 1), q(1, 1)];
        assert_eq!(alpha(&pts, 1).unwrap(), q(-1, 1));
        assert_eq!(alpha(&pts, 2).unwrap(), q(1, 1));
        let pts = [q(0, 1), q(2, 1)];
        assert_eq!(alpha(&pts, 1).unwrap(), q(-1, 2));
        assert_eq!(alpha(&pts, 2).unwrap(), q(1, 2));
        assert!(alpha(&pts, 3).is_err());
    }

    #[test]
    fn alpha_is_inverse_product() {
        let pts = [q(-3, 2), q(0, 1), q(7, 5), q(4, 1), q(-9, 7)];
        for k in 1..=pts.len() {
            let prod = pts
                .iter()
                .enumerate()
                .filter(|&(i, _)| i + 1 != k)
                .fold(Rational::one(), |acc, (_, zi)| &acc * &(&pts[k - 1] - zi));
            assert_eq!(alpha(&pts, k).unwrap(), prod.recip().unwrap());
        }
    }

    #[test]
    fn top_moment_s3_example() {
        let s = sys(&[(0, 1), (1, 1)]);
        let tm = top_moment(&s, &yj_seed(3, 2).unwrap()).unwrap();
        assert_eq!(tm.m, q(-1, 1));
        assert_eq!(tm.m_k, vec![q(1, 1), q(0, 1)]);
        assert_eq!(tm.b, vec![q(1, 2), q(-1, 2)]);
        assert_eq!(tm.value, vec![q(-1, 3), q(2, 3), q(-1, 3)]);
        let res = yj_residues(&s, 2).unwrap();
        assert_eq!(
            res,
            vec![
                vec![q(1, 3), q(1, 3), q(-2, 3)],
                vec![q(-1, 3), q(2, 3), q(-1, 3)]
            ]
        );
    }

    #[test]
    fn pair_terms_solve_their_step() {
        for n in 4..=7 {
            let pts: Vec<Rational> = (0..n as i64 - 1).map(|i| q(i * i + 1, 3)).collect();
            let s = KZSystem::new(n, pts, Rho::Minus).unwrap();
            let op = step_operator(&s, 1);
            let spec = spectral_data(n).unwrap();
            for (k, l) in pairs(n - 1) {
                let pn = s.p(k).mul_vec(&spec.n_vectors[l - 1]).unwrap();
                let mut sum = pair_common_part(n).unwrap();
                axpy(
                    &mut sum,
                    &Rational::one(),
                    &pair_zero_sum_part(n, k, l).unwrap(),
                );
                assert_eq!(pn, sum);
                assert_eq!(op.mul_vec(&pair_term(n, k, l).unwrap()).unwrap(), pn);
            }
        }
    }

    #[test]
    fn exact_beta_differs_from_stated() {
        let b = exact_beta(5, 2, 1).unwrap();
        assert_eq!(b, vec![q(-1, 3), q(-1, 3), q(1, 6), q(1, 6)]);
        assert_eq!(b.iter().cloned().sum::<Rational>(), q(-1, 3));
        assert_eq!(stated_beta(5, 1, 2, 1).unwrap(), q(-1, 4));
        assert_eq!(stated_beta(3, 1, 2, 1), Err(Error::ClosedFormUndefined(3)));
    }

    #[test]
    fn gamma_path_holds_for_three() {
        // n = 3: the single pair gives gamma_s = -(z_2 - z_1)^2 / 2 and the
        // residues of the generic last solution are exactly gamma_s N_s.
        let s = sys(&[(1, 2), (3, 1)]);
        let y3 = build_yn(&s).unwrap().column_residues(0);
        let spec = spectral_data(3).unwrap();
        let gamma = -(&q(5, 2).pow(2) * &q(1, 2));
        for (l, nv) in y3.iter().zip(&spec.n_vectors) {
            assert_eq!(*l, nv.iter().map(|x| x * &gamma).collect::<Column>());
        }
    }

    #[test]
    fn cross_route_report() {
        let s3 = sys(&[(0, 1), (1, 1)]);
        let r = cross_route(&s3).unwrap();
        assert!(r.all_agree(), "{r:?}");
        assert!(r.check("Y_n gamma residues").is_none());

        let s4 = sys(&[(0, 1), (1, 1), (2, 1)]);
        let r = cross_route(&s4).unwrap();
        for name in [
            "alpha",
            "cofactor magnitude",
            "b sums",
            "top moment",
            "Y_j residues",
            "Y_n constant term",
            "Y_n pairwise G_1",
        ] {
            assert!(r.check(name).unwrap().agrees, "{name}");
        }
        assert!(!r.check("Y_n gamma sum G_1").unwrap().agrees);
        assert!(!r.check("Y_n gamma residues").unwrap().agrees);
    }

    #[test]
    fn agree_modulo_detects_kernel_shift() {
        let s = sys(&[(0, 1), (1, 1), (3, 1)]);
        let top = top_moment(&s, &yj_seed(4, 2).unwrap()).unwrap().value;
        let shifted: Column = top.iter().map(|x| x + &q(5, 1)).collect();
        let ker = kernel(&step_operator(&s, 3));
        assert!(agree_modulo(&shifted, &top, &ker));
        let mut seeds = BTreeMap::new();
        seeds.insert(2, yj_seed(4, 2).unwrap());
        seeds.insert(3, shifted.clone());
        assert!(run_recurrence(&s, -1, 3, &seeds).is_ok());
        let mut bad = shifted;
        bad[1] = &bad[1] + &Rational::one();
        assert!(!agree_modulo(&bad, &top, &ker));
    }
}
