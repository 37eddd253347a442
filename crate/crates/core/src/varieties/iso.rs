//! Explicit isomorphisms between hypergeometric varieties.
//!
//! Every family handled here arises from a general variety X_{Δ,z} whose
//! matrix z is assembled from a small parameter matrix x and unit columns.
//! A symmetry w of z (a permutation, possibly with scalings) moves z to zw;
//! renormalizing the unit columns yields a new parameter matrix x_w.  The
//! induced map between the family members for x and x_w is monomial,
//!
//!   x′ = ᴺ√d_{x_w} / (ᴺ√d_x * Q) · (x * Q),   t′ = t·C + r(e),
//!
//! with an integer matrix Q depending only on the permutation part of w.
//! Counting points through it gives the transport identity
//!
//!   χ(d_w, e) · N(X_x; χ_w) = N(X_{x_w}; χ),  χ_w = (α * ᵗQ, C·b),
//!
//! where d_w = d_{x_w} / (d_x * Q) lies in the base field.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::ffield::{extend, Elem, ExtensionField, Field};
use crate::matrix::{MatK, MatZ};
use crate::sums::Ctx;

use super::count::Support;
use super::points::{enumerate_points, on_variety, Point};
use super::{char_monomial, monomial_map, GroupChar, GroupElem, VarietySpec};

/// Families with an explicit isomorphism theory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IsoFamily {
    /// ₂X₂,λ (Gauss's ₂F₁), symmetry group S₄.
    Gauss,
    /// ₁X₂,λ (Kummer's ₁F₁), symmetry group S₂ × k*.
    Kummer,
    /// X_{F_D^m}, symmetry group S_{m+3}.
    LauricellaD { m: usize },
    /// X_{F_A^m}, symmetries from the subgroup S′ generated by (i, m+1+i).
    LauricellaA { m: usize },
    /// X_{Φ₁}, symmetry group S₃ × k*.
    Humbert1,
    /// X_{Φ₃}, symmetry group (k*)² ⋊ S₂.
    Humbert3,
}

/// A symmetry: a permutation (0-based images, `sigma[j] = σ(j)`) and the
/// scalars c of the confluent blocks (empty for the purely permutational
/// families, one entry for Kummer and Φ₁, two for Φ₃).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symmetry {
    pub sigma: Vec<usize>,
    pub c: Vec<Elem>,
}

impl Symmetry {
    pub fn perm(sigma: Vec<usize>) -> Self {
        Symmetry { sigma, c: vec![] }
    }

    pub fn new(sigma: Vec<usize>, c: Vec<Elem>) -> Self {
        Symmetry { sigma, c }
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "σ={}", cycle_string(&self.sigma))?;
        if !self.c.is_empty() {
            let c: Vec<String> = self.c.iter().map(|x| x.0.to_string()).collect();
            write!(f, " c=({})", c.join(","))?;
        }
        Ok(())
    }
}

/// Parses cycle notation with 1-based points, e.g. "(1 3)(2 4)", "1 3" or
/// "id".  Cycles are composed right to left.
pub fn parse_cycles(n: usize, s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    let mut sigma: Vec<usize> = (0..n).collect();
    if s.is_empty() || s == "id" || s == "()" {
        return Ok(sigma);
    }
    let body = if s.contains('(') { s.to_string() } else { format!("({s})") };
    let mut cycles = Vec::new();
    for part in body.split('(').skip(1) {
        let inner = part.split(')').next().unwrap_or("");
        let pts: Vec<usize> = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| Error::Invalid(format!("bad cycle entry {t:?}"))))
            .collect::<Result<_>>()?;
        if pts.iter().any(|&p| p == 0 || p > n) {
            return Err(Error::Invalid(format!("cycle entries must lie in 1..={n}")));
        }
        let uniq: HashSet<usize> = pts.iter().copied().collect();
        if uniq.len() != pts.len() {
            return Err(Error::Invalid("repeated point in a cycle".into()));
        }
        cycles.push(pts);
    }
    for cycle in cycles.iter().rev() {
        let mut c: Vec<usize> = (0..n).collect();
        for (i, &p) in cycle.iter().enumerate() {
            c[p - 1] = cycle[(i + 1) % cycle.len()] - 1;
        }
        // apply the later cycles first: σ ← c ∘ σ
        sigma = sigma.iter().map(|&j| c[j]).collect();
    }
    Ok(sigma)
}

/// 1-based cycle notation of a permutation ("id" for the identity).
pub fn cycle_string(sigma: &[usize]) -> String {
    let mut seen = vec![false; sigma.len()];
    let mut out = String::new();
    for start in 0..sigma.len() {
        if seen[start] || sigma[start] == start {
            continue;
        }
        let mut cyc = vec![start + 1];
        seen[start] = true;
        let mut j = sigma[start];
        while j != start {
            seen[j] = true;
            cyc.push(j + 1);
            j = sigma[j];
        }
        let c: Vec<String> = cyc.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("({})", c.join(" ")));
    }
    if out.is_empty() {
        "id".into()
    } else {
        out
    }
}

/// All permutations of {0, …, n−1} in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("a larger element exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

fn compose_perm(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&j| a[j]).collect()
}

fn inverse_perm(a: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; a.len()];
    for (j, &s) in a.iter().enumerate() {
        inv[s] = j;
    }
    inv
}

fn is_permutation(s: &[usize], n: usize) -> bool {
    s.len() == n && {
        let mut seen = vec![false; n];
        s.iter().all(|&j| j < n && !std::mem::replace(&mut seen[j], true))
    }
}

/// Column kinds of z: a column of x or a unit column e_k.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ZCol {
    X(usize),
    Unit(usize),
}

/// θ₀, the (T_j, ρ_j) pairs and the sizes entering
/// Q_σ = Σ_j (θ₀ P′_σ M + T_j) ρ_j, with P′_σ = diag(P_σ, I).
#[derive(Clone, Debug)]
pub struct QData {
    pub theta0: MatZ,
    pub terms: Vec<(MatZ, MatZ)>,
    pub perm_dim: usize,
    pub u_dim: usize,
}

fn last_column(rows: usize, cols: usize, entries: &[(usize, i64)]) -> MatZ {
    let mut t = MatZ::zeros(rows, cols);
    for &(r, v) in entries {
        t.set(r, cols - 1, v);
    }
    t
}

/// I_{n−1} with last row (−1, …, −1, 0).
fn m_matrix(n: usize) -> MatZ {
    let mut m = MatZ::zeros(n, n);
    for i in 0..n - 1 {
        m.set(i, i, 1);
        m.set(n - 1, i, -1);
    }
    m
}

impl QData {
    /// Q_σ for a permutation of the first `perm_dim` projective coordinates.
    pub fn q(&self, sigma: &[usize]) -> MatZ {
        let p = MatZ::permutation(sigma);
        let pad = self.u_dim - self.perm_dim;
        let p_prime = if pad == 0 { p } else { MatZ::block_diag(&[p, MatZ::identity(pad)]) };
        let base = self.theta0.mul(&p_prime).mul(&m_matrix(self.u_dim));
        let rows = self.theta0.rows();
        let mut q = MatZ::zeros(rows, rows);
        for (t, rho) in &self.terms {
            q = q.add(&base.add(t).mul(rho));
        }
        q
    }

    /// Σ_j (θ₀ + T_j) ρ_j, which must be the identity.
    pub fn theta_rho_sum(&self) -> MatZ {
        let rows = self.theta0.rows();
        let mut s = MatZ::zeros(rows, rows);
        for (t, rho) in &self.terms {
            s = s.add(&self.theta0.add(t).mul(rho));
        }
        s
    }

    fn single(theta0: MatZ, t: MatZ, perm_dim: usize) -> QData {
        let theta = theta0.add(&t);
        let rho = theta.inverse().expect("θ is unimodular");
        let u_dim = theta0.cols();
        QData { theta0, terms: vec![(t, rho)], perm_dim, u_dim }
    }

    pub fn gauss() -> QData {
        let theta0 = MatZ::from_rows(&[&[-1, 0, -1, 0], &[0, 0, 0, 0], &[0, 0, 1, 0], &[0, -1, 0, 0]]);
        let t = last_column(4, 4, &[(0, 1), (1, 1), (2, -1), (3, -1)]);
        QData::single(theta0, t, 4)
    }

    pub fn kummer() -> QData {
        let theta0 = MatZ::from_rows(&[&[0, 1, 0], &[-1, -1, 0], &[0, 0, 0]]);
        let t = last_column(3, 3, &[(0, 1), (1, -1), (2, -1)]);
        QData::single(theta0, t, 2)
    }

    pub fn lauricella_d(m: usize) -> QData {
        let (rows, n) = (2 * m + 2, m + 3);
        let mut theta0 = MatZ::zeros(rows, n);
        theta0.set(0, 0, -1);
        theta0.set(0, m + 1, -1);
        theta0.set(m + 1, m + 1, 1);
        for i in 1..=m {
            theta0.set(m + 1 + i, i, -1);
        }
        let mut rho0 = MatZ::zeros(n, rows);
        rho0.set(0, 0, -1);
        rho0.set(0, m + 1, -1);
        for i in 1..=m {
            rho0.set(i, i, -1);
            rho0.set(i, m + 1 + i, -1);
        }
        rho0.set(m + 1, m + 1, 1);
        let mut terms = vec![(MatZ::zeros(rows, n), rho0)];
        for j in 1..=m {
            let t = last_column(rows, n, &[(0, 1), (j, 1), (m + 1, -1), (m + 1 + j, -1)]);
            let mut rho = MatZ::zeros(n, rows);
            rho.set(m + 1, j, 1);
            rho.set(m + 2, j, 1);
            terms.push((t, rho));
        }
        QData { theta0, terms, perm_dim: n, u_dim: n }
    }

    pub fn humbert1() -> QData {
        let theta0 = MatZ::from_rows(&[
            &[0, 0, 1, 0],
            &[0, -1, 0, 0],
            &[-1, 0, -1, 0],
            &[0, 0, 0, 0],
            &[0, 0, 0, 0],
        ]);
        let rho0 = MatZ::from_rows(&[&[-1, 0, -1, 0, 0], &[0, -1, 0, 0, 0], &[1, 0, 0, 0, 0], &[0, 0, 0, 0, 0]]);
        let t1 = last_column(5, 4, &[(0, 1), (1, 1), (2, -1), (3, -1)]);
        let t2 = last_column(5, 4, &[(0, 1), (2, -1), (4, -1)]);
        let mut rho1 = MatZ::zeros(4, 5);
        rho1.set(1, 3, -1);
        rho1.set(2, 3, 1);
        rho1.set(3, 3, -1);
        let mut rho2 = MatZ::zeros(4, 5);
        rho2.set(2, 4, 1);
        rho2.set(3, 4, -1);
        QData { theta0, terms: vec![(MatZ::zeros(5, 4), rho0), (t1, rho1), (t2, rho2)], perm_dim: 3, u_dim: 4 }
    }

    pub fn lauricella_a(m: usize) -> QData {
        // point coordinates (x₀..x_m, y₁..y_m, z₁..z_m), projective (u₀..u_m, v₀..v_m)
        let (rows, cols) = (3 * m + 1, 2 * m + 2);
        let (y, z) = (m + 1, 2 * m + 1);
        let mut theta0 = MatZ::zeros(rows, cols);
        for r in 0..m {
            if r >= 1 {
                theta0.set(r, r, 1);
            }
            theta0.set(r, m + 1 + r, 1);
        }
        theta0.set(m, 0, -1);
        for c in 1..m {
            theta0.set(m, c, -1);
        }
        for c in m + 1..=2 * m {
            theta0.set(m, c, -1);
        }
        for i in 1..=m {
            theta0.set(y + i - 1, i, -1);
        }
        let mut rho0 = MatZ::zeros(cols, rows);
        for c in 0..=m {
            rho0.set(0, c, -1);
        }
        for i in 1..=m {
            rho0.set(i, y + i - 1, -1);
            rho0.set(i, z + i - 1, -1);
        }
        for r in 0..=m {
            rho0.set(m + 1 + r, r, 1);
            if r >= 1 {
                rho0.set(m + 1 + r, y + r - 1, 1);
            }
        }
        for i in 1..=m {
            rho0.set(m + 1, z + i - 1, 1);
        }
        let mut terms = vec![(MatZ::zeros(rows, cols), rho0)];
        for j in 1..=m {
            let t = last_column(rows, cols, &[(0, 1), (j, -1), (y + j - 1, 1), (z + j - 1, -1)]);
            let mut rho = MatZ::zeros(cols, rows);
            rho.set(cols - 1, z + j - 1, -1);
            terms.push((t, rho));
        }
        QData { theta0, terms, perm_dim: cols, u_dim: cols }
    }
}

impl IsoFamily {
    pub fn name(&self) -> String {
        match self {
            IsoFamily::Gauss => "gauss".into(),
            IsoFamily::Kummer => "kummer".into(),
            IsoFamily::LauricellaD { m } => format!("fd{m}"),
            IsoFamily::LauricellaA { m } => format!("fa{m}"),
            IsoFamily::Humbert1 => "phi1".into(),
            IsoFamily::Humbert3 => "phi3".into(),
        }
    }

    /// Number of λ parameters.
    pub fn n_lambda(&self) -> usize {
        match self {
            IsoFamily::Gauss | IsoFamily::Kummer => 1,
            IsoFamily::LauricellaD { m } | IsoFamily::LauricellaA { m } => *m,
            IsoFamily::Humbert1 | IsoFamily::Humbert3 => 2,
        }
    }

    /// Size of the permutation part of a symmetry.
    pub fn perm_size(&self) -> usize {
        match self {
            IsoFamily::Gauss => 4,
            IsoFamily::Kummer | IsoFamily::Humbert3 => 2,
            IsoFamily::LauricellaD { m } => m + 3,
            IsoFamily::LauricellaA { m } => 2 * m + 2,
            IsoFamily::Humbert1 => 3,
        }
    }

    /// Number of scalars c in a symmetry.
    pub fn n_scalars(&self) -> usize {
        match self {
            IsoFamily::Kummer | IsoFamily::Humbert1 => 1,
            IsoFamily::Humbert3 => 2,
            _ => 0,
        }
    }

    pub fn spec(&self, lam: &[Elem]) -> Result<VarietySpec> {
        if lam.len() != self.n_lambda() {
            return Err(Error::Arity { expected: self.n_lambda(), got: lam.len() });
        }
        Ok(match self {
            IsoFamily::Gauss => VarietySpec::MXn { m: 2, n: 2, lam: lam[0] },
            IsoFamily::Kummer => VarietySpec::MXn { m: 1, n: 2, lam: lam[0] },
            IsoFamily::LauricellaD { .. } => VarietySpec::LauricellaD { lam: lam.to_vec() },
            IsoFamily::LauricellaA { .. } => VarietySpec::LauricellaA { lam: lam.to_vec() },
            IsoFamily::Humbert1 => VarietySpec::Humbert1 { lam: [lam[0], lam[1]] },
            IsoFamily::Humbert3 => VarietySpec::Humbert3 { lam: [lam[0], lam[1]] },
        })
    }

    fn x_shape(&self) -> (usize, usize) {
        match self {
            IsoFamily::Gauss | IsoFamily::Kummer => (2, 2),
            IsoFamily::LauricellaD { m } => (2, m + 1),
            IsoFamily::LauricellaA { m } => (m + 1, m + 1),
            IsoFamily::Humbert1 | IsoFamily::Humbert3 => (2, 3),
        }
    }

    fn z_layout(&self) -> Vec<ZCol> {
        use ZCol::{Unit, X};
        match self {
            IsoFamily::Gauss => vec![X(0), X(1), Unit(0), Unit(1)],
            IsoFamily::Kummer => vec![X(0), Unit(0), Unit(1), X(1)],
            IsoFamily::LauricellaD { m } => (0..=*m).map(X).chain([Unit(0), Unit(1)]).collect(),
            IsoFamily::LauricellaA { m } => (0..=*m).map(X).chain((0..=*m).map(Unit)).collect(),
            IsoFamily::Humbert1 => vec![X(0), X(1), Unit(0), Unit(1), X(2)],
            IsoFamily::Humbert3 => vec![X(0), Unit(0), X(1), Unit(1), X(2)],
        }
    }

    /// Positions (row, column) of x whose entries form d_x, aligned with the
    /// multiplicative coordinates of the family.
    fn d_positions(&self) -> Vec<(usize, usize)> {
        match self {
            IsoFamily::Gauss => vec![(1, 0), (0, 1), (0, 0), (1, 1)],
            IsoFamily::Kummer => vec![(0, 0), (1, 0), (0, 1)],
            IsoFamily::LauricellaD { m } => {
                let mut v = vec![(1, 0)];
                v.extend((1..=*m).map(|i| (0, i)));
                v.push((0, 0));
                v.extend((1..=*m).map(|i| (1, i)));
                v
            }
            IsoFamily::LauricellaA { m } => {
                let mut v: Vec<(usize, usize)> = (0..=*m).map(|i| (i, 0)).collect();
                v.extend((1..=*m).map(|i| (i, i)));
                v.extend((1..=*m).map(|i| (0, i)));
                v
            }
            IsoFamily::Humbert1 => vec![(0, 0), (1, 1), (1, 0), (0, 1), (0, 2)],
            IsoFamily::Humbert3 => vec![(1, 0), (0, 0), (1, 1), (0, 2)],
        }
    }

    /// Entries of x that must vanish for x to describe a family member.
    fn structural_zeros(&self) -> Vec<(usize, usize)> {
        match self {
            IsoFamily::LauricellaA { m } => {
                let mut v = Vec::new();
                for i in 1..=*m {
                    for j in 1..=*m {
                        if i != j {
                            v.push((i, j));
                        }
                    }
                }
                v
            }
            _ => vec![],
        }
    }

    /// Exponent vectors v_j with λ_j = d_x * v_j; the component label of a
    /// point P is τ_j = P * v_j (so τ_j^N = λ_j).
    pub fn lambda_vectors(&self) -> Vec<Vec<i64>> {
        match self {
            IsoFamily::Gauss => vec![vec![-1, -1, 1, 1]],
            IsoFamily::Kummer => vec![vec![-1, 1, 1]],
            IsoFamily::LauricellaD { m } => (1..=*m)
                .map(|i| {
                    let mut v = vec![0; 2 * m + 2];
                    v[0] = -1;
                    v[i] = -1;
                    v[m + 1] = 1;
                    v[m + 1 + i] = 1;
                    v
                })
                .collect(),
            IsoFamily::LauricellaA { m } => (1..=*m)
                .map(|i| {
                    let mut v = vec![0; 3 * m + 1];
                    v[0] = -1;
                    v[i] = 1;
                    v[m + i] = -1;
                    v[2 * m + i] = 1;
                    v
                })
                .collect(),
            IsoFamily::Humbert1 => vec![vec![-1, -1, 1, 1, 0], vec![-1, 0, 1, 0, 1]],
            IsoFamily::Humbert3 => vec![vec![-1, 1, 1, 0], vec![0, 0, 1, 1]],
        }
    }

    fn lambda_matrix(&self) -> MatZ {
        MatZ::from_vecs(self.lambda_vectors()).transpose()
    }

    /// Degree of the extension over which the isomorphism is defined: N, or
    /// pN when an Artin–Schreier root enters the map.
    pub fn degree(&self, f: &Field) -> u32 {
        match self {
            IsoFamily::Kummer | IsoFamily::Humbert1 => f.p() * f.n(),
            _ => f.n(),
        }
    }

    /// The normalized parameter matrix for given λ.
    pub fn normalized_x(&self, f: &Field, lam: &[Elem]) -> Result<MatK> {
        if lam.len() != self.n_lambda() {
            return Err(Error::Arity { expected: self.n_lambda(), got: lam.len() });
        }
        if lam.iter().any(|l| l.is_zero() || !f.contains(*l)) {
            return Err(Error::Invalid("λ entries must lie in k*".into()));
        }
        let (one, neg) = (Elem::ONE, |x: Elem| f.neg(x));
        let rows = match self {
            IsoFamily::Gauss => vec![vec![one, one], vec![neg(one), neg(lam[0])]],
            IsoFamily::Kummer => vec![vec![neg(one), neg(lam[0])], vec![one, Elem::ZERO]],
            IsoFamily::LauricellaD { m } => {
                let mut r2 = vec![neg(one)];
                r2.extend(lam.iter().map(|&l| neg(l)));
                vec![vec![one; m + 1], r2]
            }
            IsoFamily::LauricellaA { m } => {
                let mut x = vec![vec![Elem::ZERO; m + 1]; m + 1];
                x[0] = vec![one; m + 1];
                for i in 1..=*m {
                    x[i][0] = one;
                    x[i][i] = f.inv(lam[i - 1]);
                }
                x
            }
            IsoFamily::Humbert1 => {
                vec![vec![neg(one), neg(lam[0]), neg(lam[1])], vec![one, one, Elem::ZERO]]
            }
            IsoFamily::Humbert3 => {
                vec![vec![one, Elem::ZERO, f.div(lam[1], lam[0])], vec![one, lam[0], Elem::ZERO]]
            }
        };
        MatK::from_rows(rows)
    }

    /// d_x: the entries of x at the d-positions.
    pub fn d_of(&self, x: &MatK) -> Vec<Elem> {
        self.d_positions().iter().map(|&(r, c)| x.get(r, c)).collect()
    }

    /// λ of the family member described by x.
    pub fn lambda_of(&self, f: &Field, x: &MatK) -> Result<Vec<Elem>> {
        monomial_map(f, &self.d_of(x), &self.lambda_matrix())
    }

    /// Checks shape, non-vanishing of d_x and the zero pattern of x.
    pub fn check_x(&self, f: &Field, x: &MatK) -> Result<()> {
        if (x.rows(), x.cols()) != self.x_shape() {
            return Err(Error::Arity { expected: self.x_shape().0 * self.x_shape().1, got: x.rows() * x.cols() });
        }
        for &(r, c) in &self.d_positions() {
            if x.get(r, c).is_zero() || !f.contains(x.get(r, c)) {
                return Err(Error::GeneralPosition(format!("entry x[{}][{}] must be a unit", r + 1, c + 1)));
            }
        }
        for &(r, c) in &self.structural_zeros() {
            if !x.get(r, c).is_zero() {
                return Err(Error::GeneralPosition(format!("entry x[{}][{}] must vanish", r + 1, c + 1)));
            }
        }
        Ok(())
    }

    /// The non-degeneracy hypotheses on λ.
    pub fn general_position(&self, f: &Field, lam: &[Elem]) -> Result<()> {
        let one = Elem::ONE;
        match self {
            IsoFamily::Gauss if lam[0] == one => Err(Error::GeneralPosition("λ ≠ 1 is required".into())),
            IsoFamily::Humbert1 if lam[0] == one => Err(Error::GeneralPosition("λ₁ ≠ 1 is required".into())),
            IsoFamily::LauricellaD { .. } => {
                for (i, &l) in lam.iter().enumerate() {
                    if l == one {
                        return Err(Error::GeneralPosition("λ_i ≠ 1 is required".into()));
                    }
                    if lam[..i].contains(&l) {
                        return Err(Error::GeneralPosition("the λ_i must be distinct".into()));
                    }
                }
                Ok(())
            }
            IsoFamily::LauricellaA { m } => {
                for mask in 1u32..(1 << m) {
                    let s = f.sum((0..*m).filter(|i| mask >> i & 1 == 1).map(|i| lam[i]));
                    if s == one {
                        return Err(Error::GeneralPosition("no partial sum of the λ_i may equal 1".into()));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn check_symmetry(&self, f: &Field, sym: &Symmetry) -> Result<()> {
        let n = self.perm_size();
        if !is_permutation(&sym.sigma, n) {
            return Err(Error::Invalid(format!("σ must be a permutation of {n} points")));
        }
        if sym.c.len() != self.n_scalars() {
            return Err(Error::Arity { expected: self.n_scalars(), got: sym.c.len() });
        }
        if sym.c.iter().any(|c| c.is_zero() || !f.contains(*c)) {
            return Err(Error::Invalid("the scalars c must lie in k*".into()));
        }
        if let IsoFamily::LauricellaA { m } = self {
            let ok = (0..n).all(|j| {
                let s = sym.sigma[j];
                s == j || (1..=*m).any(|i| (j == i && s == m + 1 + i) || (j == m + 1 + i && s == i))
            });
            if !ok {
                return Err(Error::Invalid("σ must lie in the subgroup generated by the swaps (i+1, m+i+2)".into()));
            }
        }
        Ok(())
    }

    /// The symmetry as a matrix w acting on the columns of z.
    pub fn w_matrix(&self, f: &Field, sym: &Symmetry) -> MatK {
        let mu = |c: Elem| MatK::from_rows(vec![vec![Elem::ONE, Elem::ZERO], vec![Elem::ZERO, c]]).expect("2×2");
        let p = MatK::from_matz(f, &MatZ::permutation(&sym.sigma));
        match self {
            IsoFamily::Kummer | IsoFamily::Humbert1 => MatK::block_diag(&[p, mu(sym.c[0])]),
            IsoFamily::Humbert3 => {
                let mut w = MatK::zeros(5, 5);
                w.set(0, 0, Elem::ONE);
                for j in 0..2 {
                    let i = sym.sigma[j];
                    let b = mu(sym.c[i]);
                    for r in 0..2 {
                        for c in 0..2 {
                            w.set(1 + 2 * i + r, 1 + 2 * j + c, b.get(r, c));
                        }
                    }
                }
                w
            }
            _ => p,
        }
    }

    /// Q_σ.
    pub fn q_matrix(&self, sigma: &[usize]) -> MatZ {
        match self {
            IsoFamily::Gauss => QData::gauss().q(sigma),
            IsoFamily::Kummer => QData::kummer().q(sigma),
            IsoFamily::LauricellaD { m } => QData::lauricella_d(*m).q(sigma),
            IsoFamily::LauricellaA { m } => QData::lauricella_a(*m).q(sigma),
            IsoFamily::Humbert1 => QData::humbert1().q(sigma),
            IsoFamily::Humbert3 => {
                let p = MatZ::permutation(sigma);
                MatZ::block_diag(&[p.clone(), p])
            }
        }
    }

    /// The θ/ρ data behind Q_σ (none for Φ₃, whose Q is block diagonal).
    pub fn q_data(&self) -> Option<QData> {
        match self {
            IsoFamily::Gauss => Some(QData::gauss()),
            IsoFamily::Kummer => Some(QData::kummer()),
            IsoFamily::LauricellaD { m } => Some(QData::lauricella_d(*m)),
            IsoFamily::LauricellaA { m } => Some(QData::lauricella_a(*m)),
            IsoFamily::Humbert1 => Some(QData::humbert1()),
            IsoFamily::Humbert3 => None,
        }
    }

    /// The affine map t ↦ t·C + r(e) on the Artin–Schreier coordinates.
    fn additive(&self, f: &Field, x: &MatK, x_w: &MatK, sym: &Symmetry) -> (MatK, Vec<Elem>) {
        match self {
            IsoFamily::Kummer => {
                let c = sym.c[0];
                (MatK::from_rows(vec![vec![c]]).expect("1×1"), vec![f.sub(f.mul(c, x.get(1, 1)), x_w.get(1, 1))])
            }
            IsoFamily::Humbert1 => {
                let c = sym.c[0];
                (MatK::from_rows(vec![vec![c]]).expect("1×1"), vec![f.sub(f.mul(c, x.get(1, 2)), x_w.get(1, 2))])
            }
            IsoFamily::Humbert3 => {
                let mut cm = MatK::zeros(2, 2);
                for j in 0..2 {
                    let i = sym.sigma[j];
                    cm.set(i, j, sym.c[i]);
                }
                (cm, vec![Elem::ZERO; 2])
            }
            _ => (MatK::zeros(0, 0), vec![]),
        }
    }

    /// The symmetry ww′ (first w, then w′).
    pub fn compose(&self, f: &Field, a: &Symmetry, b: &Symmetry) -> Symmetry {
        let sigma = compose_perm(&a.sigma, &b.sigma);
        let c = match self {
            IsoFamily::Kummer | IsoFamily::Humbert1 => vec![f.mul(a.c[0], b.c[0])],
            IsoFamily::Humbert3 => {
                let inv = inverse_perm(&a.sigma);
                (0..2).map(|i| f.mul(a.c[i], b.c[inv[i]])).collect()
            }
            _ => vec![],
        };
        Symmetry { sigma, c }
    }

    /// A generating set of the symmetry group.
    pub fn generators(&self, f: &Field) -> Vec<Symmetry> {
        let n = self.perm_size();
        let id: Vec<usize> = (0..n).collect();
        let swap = |i: usize, j: usize| {
            let mut s = id.clone();
            s.swap(i, j);
            s
        };
        let g = f.generator();
        let one = Elem::ONE;
        match self {
            IsoFamily::Gauss | IsoFamily::LauricellaD { .. } | IsoFamily::Humbert1 => {
                let mut cyc: Vec<usize> = (1..n).collect();
                cyc.push(0);
                let c = if *self == IsoFamily::Humbert1 { vec![one] } else { vec![] };
                let mut gens = vec![Symmetry::new(swap(0, 1), c.clone()), Symmetry::new(cyc, c)];
                if *self == IsoFamily::Humbert1 {
                    gens.push(Symmetry::new(id, vec![g]));
                }
                gens
            }
            IsoFamily::LauricellaA { m } => (1..=*m).map(|i| Symmetry::perm(swap(i, m + 1 + i))).collect(),
            IsoFamily::Kummer => vec![Symmetry::new(swap(0, 1), vec![one]), Symmetry::new(id, vec![g])],
            IsoFamily::Humbert3 => vec![
                Symmetry::new(swap(0, 1), vec![one, one]),
                Symmetry::new(id.clone(), vec![g, one]),
                Symmetry::new(id, vec![one, g]),
            ],
        }
    }

    /// Every symmetry (finite for each family over a fixed k).
    pub fn all_symmetries(&self, f: &Field) -> Vec<Symmetry> {
        let units: Vec<Elem> = f.units().collect();
        match self {
            IsoFamily::LauricellaA { m } => (0u32..(1 << m))
                .map(|mask| {
                    let mut s: Vec<usize> = (0..2 * m + 2).collect();
                    for i in 1..=*m {
                        if mask >> (i - 1) & 1 == 1 {
                            s.swap(i, m + 1 + i);
                        }
                    }
                    Symmetry::perm(s)
                })
                .collect(),
            _ => {
                let mut out = Vec::new();
                for sigma in permutations(self.perm_size()) {
                    match self.n_scalars() {
                        0 => out.push(Symmetry::perm(sigma)),
                        1 => out.extend(units.iter().map(|&c| Symmetry::new(sigma.clone(), vec![c]))),
                        _ => {
                            for &a in &units {
                                for &b in &units {
                                    out.push(Symmetry::new(sigma.clone(), vec![a, b]));
                                }
                            }
                        }
                    }
                }
                out
            }
        }
    }

    fn z_of(&self, x: &MatK) -> MatK {
        let d = x.rows();
        let cols = self.z_layout();
        let mut z = MatK::zeros(d, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for r in 0..d {
                let v = match *col {
                    ZCol::X(c) => x.get(r, c),
                    ZCol::Unit(k) => {
                        if r == k {
                            Elem::ONE
                        } else {
                            Elem::ZERO
                        }
                    }
                };
                z.set(r, j, v);
            }
        }
        z
    }

    /// The matrix z assembled from x.
    pub fn z_matrix(&self, x: &MatK) -> MatK {
        self.z_of(x)
    }

    /// x_w, read off from g⁻¹zw where g collects the unit-column positions.
    pub fn transform_x(&self, f: &Field, x: &MatK, sym: &Symmetry) -> Result<MatK> {
        let layout = self.z_layout();
        let zw = self.z_of(x).mul(f, &self.w_matrix(f, sym))?;
        let mut pivots = vec![0; x.rows()];
        for (j, col) in layout.iter().enumerate() {
            if let ZCol::Unit(k) = col {
                pivots[*k] = j;
            }
        }
        let g = zw.select_columns(&pivots);
        let ginv = g
            .inverse(f)
            .ok_or_else(|| Error::GeneralPosition("the unit-column minor of zw is singular".into()))?;
        let zn = ginv.mul(f, &zw)?;
        let (rows, cols) = self.x_shape();
        let mut xw = MatK::zeros(rows, cols);
        for (j, col) in layout.iter().enumerate() {
            if let ZCol::X(c) = col {
                for r in 0..rows {
                    xw.set(r, *c, zn.get(r, j));
                }
            }
        }
        self.check_x(f, &xw)?;
        Ok(xw)
    }
}

/// An isomorphism h_w : X_x ⊗ k_r → X_{x_w} ⊗ k_r together with all data
/// needed to evaluate it and to transport characters.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Iso {
    pub family: IsoFamily,
    pub symmetry: Symmetry,
    pub x: MatK,
    pub x_w: MatK,
    pub source: VarietySpec,
    pub target: VarietySpec,
    /// Q_σ.
    pub q: MatZ,
    /// d_x and d_{x_w}.
    pub d_source: Vec<Elem>,
    pub d_target: Vec<Elem>,
    /// d_w = d_{x_w} / (d_x * Q_σ) in k*.
    pub d: Vec<Elem>,
    /// t′ = t·C + r(e).
    pub add_lin: MatK,
    pub add_shift: Vec<Elem>,
    /// Extension degree r with the map defined over k_r.
    pub degree: u32,
    #[serde(skip)]
    base: Option<Arc<Field>>,
}

impl Iso {
    pub fn field(&self) -> &Arc<Field> {
        self.base.as_ref().expect("built by build_iso")
    }

    pub fn lambda_source(&self) -> Vec<Elem> {
        self.family.lambda_of(self.field(), &self.x).expect("units")
    }

    pub fn lambda_target(&self) -> Vec<Elem> {
        self.family.lambda_of(self.field(), &self.x_w).expect("units")
    }

    pub fn transport(&self) -> CharTransport {
        CharTransport {
            q_t: self.q.transpose(),
            d: self.d.clone(),
            add_lin: self.add_lin.clone(),
            e: self.add_shift.clone(),
        }
    }

    /// The point map over `ext` (which must be the degree-`self.degree`
    /// extension of the base field, or contain it).
    pub fn point_map(&self, ext: &ExtensionField) -> Result<PointMap> {
        let kf = ext.field().clone();
        let roots = |d: &[Elem]| d.iter().map(|&v| ext.nth_root(v)).collect::<Result<Vec<_>>>();
        let (rs, rt) = (roots(&self.d_source)?, roots(&self.d_target)?);
        let rsq = monomial_map(&kf, &rs, &self.q)?;
        let scale = rt.iter().zip(&rsq).map(|(&a, &b)| kf.div(a, b)).collect();
        let add_lin = MatK::from_rows(
            self.add_lin.to_rows().iter().map(|r| r.iter().map(|&v| ext.embed(v)).collect()).collect(),
        )
        .unwrap_or_else(|_| MatK::zeros(0, 0));
        let add_shift = self.add_shift.iter().map(|&e| ext.artin_schreier_root(e)).collect::<Result<_>>()?;
        Ok(PointMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: ext.degree(),
            field: kf,
            exponents: self.q.clone(),
            scale,
            add_lin,
            add_shift,
            tau_vectors: self.family.lambda_matrix(),
        })
    }
}

/// Builds h_w for the family member with parameter matrix x.
pub fn build_iso(f: &Arc<Field>, family: IsoFamily, x: &MatK, sym: &Symmetry) -> Result<Iso> {
    family.check_x(f, x)?;
    family.check_symmetry(f, sym)?;
    let lam = family.lambda_of(f, x)?;
    family.general_position(f, &lam)?;
    let x_w = family.transform_x(f, x, sym)?;
    let lam_w = family.lambda_of(f, &x_w)?;
    let q = family.q_matrix(&sym.sigma);
    let d_source = family.d_of(x);
    let d_target = family.d_of(&x_w);
    let dq = monomial_map(f, &d_source, &q)?;
    let d = d_target.iter().zip(&dq).map(|(&a, &b)| f.div(a, b)).collect();
    let (add_lin, add_shift) = family.additive(f, x, &x_w, sym);
    Ok(Iso {
        family,
        symmetry: sym.clone(),
        x: x.clone(),
        x_w,
        source: family.spec(&lam)?,
        target: family.spec(&lam_w)?,
        q,
        d_source,
        d_target,
        d,
        add_lin,
        add_shift,
        degree: family.degree(f),
        base: Some(f.clone()),
    })
}

/// Builds h_w starting from the normalized x for λ.
pub fn build_iso_for_lambda(f: &Arc<Field>, family: IsoFamily, lam: &[Elem], sym: &Symmetry) -> Result<Iso> {
    let x = family.normalized_x(f, lam)?;
    build_iso(f, family, &x, sym)
}

/// A concrete map of points over k_r.
#[derive(Clone, Debug)]
pub struct PointMap {
    pub source: VarietySpec,
    pub target: VarietySpec,
    pub degree: u32,
    pub field: Arc<Field>,
    pub exponents: MatZ,
    /// ᴺ√d_{x_w} / (ᴺ√d_x * Q), in k_r.
    pub scale: Vec<Elem>,
    pub add_lin: MatK,
    /// r(e) in k_r.
    pub add_shift: Vec<Elem>,
    /// Columns are the vectors v_j with τ_j(P) = P * v_j.
    pub tau_vectors: MatZ,
}

impl PointMap {
    pub fn apply(&self, p: &Point) -> Result<Point> {
        let kf = &*self.field;
        let m = monomial_map(kf, &p.mult, &self.exponents)?;
        let mult = m.iter().zip(&self.scale).map(|(&a, &b)| kf.mul(a, b)).collect();
        let add = if p.add.is_empty() {
            vec![]
        } else {
            self.add_lin.left_mul_vec(kf, &p.add).iter().zip(&self.add_shift).map(|(&a, &b)| kf.add(a, b)).collect()
        };
        Ok(Point { mult, add, free: p.free.clone() })
    }

    /// The component labels τ(P).
    pub fn tau(&self, p: &Point) -> Result<Vec<Elem>> {
        monomial_map(&self.field, &p.mult, &self.tau_vectors)
    }
}

/// The character-side data of an isomorphism.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharTransport {
    /// ᵗQ_σ.
    pub q_t: MatZ,
    pub d: Vec<Elem>,
    pub add_lin: MatK,
    pub e: Vec<Elem>,
}

impl CharTransport {
    /// χ_w = (α * ᵗQ, C·b).
    pub fn pull(&self, f: &Field, chi: &GroupChar) -> Result<GroupChar> {
        let mult = char_monomial(&chi.mult, &self.q_t)?;
        let add = if chi.add.is_empty() { vec![] } else { self.add_lin.transpose().left_mul_vec(f, &chi.add) };
        Ok(GroupChar::new(mult, add))
    }

    /// χ(d, e).
    pub fn twist(&self, ctx: &Ctx, chi: &GroupChar) -> CycloNum {
        chi.eval(ctx, &GroupElem { mult: self.d.clone(), add: self.e.clone() })
    }

    pub fn is_identity(&self) -> bool {
        self.q_t == MatZ::identity(self.q_t.rows())
            && self.d.iter().all(|&v| v == Elem::ONE)
            && self.e.iter().all(|v| v.is_zero())
    }
}

/// One side-by-side evaluation of the transport identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportOutcome {
    pub chi: GroupChar,
    pub chi_w: GroupChar,
    /// χ(d_w, e) · N(X_x; χ_w).
    pub lhs: CycloNum,
    /// N(X_{x_w}; χ).
    pub rhs: CycloNum,
    pub equal: bool,
}

/// Precomputed supports of source and target for bulk transport checks.
pub struct TransportChecker {
    transport: CharTransport,
    source: Support,
    target: Support,
}

impl TransportChecker {
    pub fn new(ctx: &Ctx, iso: &Iso) -> Result<Self> {
        Ok(TransportChecker {
            transport: iso.transport(),
            source: Support::new(ctx, &iso.source)?,
            target: Support::new(ctx, &iso.target)?,
        })
    }

    pub fn check(&self, ctx: &Ctx, chi: &GroupChar) -> Result<TransportOutcome> {
        let chi_w = self.transport.pull(ctx.field(), chi)?;
        let lhs = self.transport.twist(ctx, chi).mul_ref(&self.source.n_chi(ctx, &chi_w)?);
        let rhs = self.target.n_chi(ctx, chi)?;
        let equal = lhs == rhs;
        Ok(TransportOutcome { chi: chi.clone(), chi_w, lhs, rhs, equal })
    }

    /// Checks every character; returns the number checked and the failures.
    pub fn check_all(&self, ctx: &Ctx, layout_of: &VarietySpec) -> Result<(usize, Vec<TransportOutcome>)> {
        let mut failures = Vec::new();
        let chars = GroupChar::enumerate(ctx, layout_of.layout());
        for chi in &chars {
            let o = self.check(ctx, chi)?;
            if !o.equal {
                failures.push(o);
            }
        }
        Ok((chars.len(), failures))
    }
}

/// χ(d_w, e)·N(X_x; χ_w) = N(X_{x_w}; χ) for one character.
pub fn transport_check(ctx: &Ctx, iso: &Iso, chi: &GroupChar) -> Result<TransportOutcome> {
    TransportChecker::new(ctx, iso)?.check(ctx, chi)
}

/// Result of one mechanical check, with a counterexample when it fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

impl Check {
    pub fn new(name: &str) -> Self {
        Check { name: name.into(), passed: true, witness: None }
    }

    /// Marks the check failed, keeping the first witness.
    pub fn fail(&mut self, witness: String) {
        if self.passed {
            self.passed = false;
            self.witness = Some(witness);
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IsoReport {
    pub family: IsoFamily,
    pub symmetry: String,
    pub extension_size: u32,
    pub source_points: usize,
    pub target_points: usize,
    pub checks: Vec<Check>,
}

impl IsoReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

fn show(p: &Point) -> String {
    let codes = |v: &[Elem]| v.iter().map(|x| x.0.to_string()).collect::<Vec<_>>().join(",");
    if p.add.is_empty() {
        format!("({})", codes(&p.mult))
    } else {
        format!("({}; {})", codes(&p.mult), codes(&p.add))
    }
}

/// Default bound on enumerated points per variety.
pub const POINT_BUDGET: usize = 4_000_000;

/// The smallest multiple r of `step` such that `spec` has points over k_r
/// (fails with CapExceeded when no extension within the cap has any).
pub fn first_degree_with_points(spec: &VarietySpec, base: &Arc<Field>, step: u32, budget: usize) -> Result<u32> {
    let mut r = step;
    loop {
        let ext = extend(base, r)?;
        if !enumerate_points(spec, &ext, budget)?.is_empty() {
            return Ok(r);
        }
        r += step;
    }
}

/// Enumerates the source over k_r and checks that h_w maps it bijectively
/// onto the target, commutes with Frobenius up to the twist (d_w, e), is
/// equivariant for π_w(g) = (ξ * Q, a·C) and sends τ-components to
/// τ_w-components.
pub fn verify_iso(iso: &Iso, budget: usize) -> Result<IsoReport> {
    verify_iso_over(iso, iso.degree, budget)
}

/// As [`verify_iso`], over k_r for a multiple r of the degree of definition.
pub fn verify_iso_over(iso: &Iso, r: u32, budget: usize) -> Result<IsoReport> {
    if r == 0 || !r.is_multiple_of(iso.degree) {
        return Err(Error::Invalid(format!("the map is defined over extensions of degree divisible by {}", iso.degree)));
    }
    let base = iso.field();
    let ext = extend(base, r)?;
    let map = iso.point_map(&ext)?;
    let kf = ext.field().clone();
    let src = enumerate_points(&iso.source, &ext, budget)?;
    let tgt = enumerate_points(&iso.target, &ext, budget)?;
    let tgt_set: HashSet<&Point> = tgt.iter().collect();

    let mut on_target = Check::new("images satisfy the target equations");
    let mut injective = Check::new("injective");
    let mut surjective = Check::new("onto the target");
    let mut frobenius = Check::new("Frobenius twisted by (d_w, e)");
    let mut equivariant = Check::new("equivariant for g ↦ (g*Q, a·C)");
    let mut tau = Check::new("τ-components go bijectively to τ_w-components");

    let d_emb: Vec<Elem> = iso.d.iter().map(|&v| ext.embed(v)).collect();
    let e_emb: Vec<Elem> = iso.add_shift.iter().map(|&v| ext.embed(v)).collect();
    let layout = iso.source.layout();
    let g = base.generator();
    let mut generators = Vec::new();
    for i in 0..layout.mult {
        let mut mult = vec![Elem::ONE; layout.mult];
        mult[i] = g;
        generators.push(GroupElem { mult, add: vec![Elem::ZERO; layout.add] });
    }
    for i in 0..layout.add {
        let mut add = vec![Elem::ZERO; layout.add];
        add[i] = Elem::ONE;
        generators.push(GroupElem { mult: vec![Elem::ONE; layout.mult], add });
    }
    let images_of_g: Vec<(Vec<Elem>, Vec<Elem>)> = generators
        .iter()
        .map(|gen| {
            let m = monomial_map(base, &gen.mult, &iso.q).expect("units");
            let a = if layout.add == 0 { vec![] } else { iso.add_lin.left_mul_vec(base, &gen.add) };
            (m.iter().map(|&v| ext.embed(v)).collect(), a.iter().map(|&v| ext.embed(v)).collect())
        })
        .collect();

    let act = |mult: &[Elem], add: &[Elem], p: &Point| Point {
        mult: p.mult.iter().zip(mult).map(|(&a, &b)| kf.mul(a, b)).collect(),
        add: p.add.iter().zip(add).map(|(&a, &b)| kf.add(a, b)).collect(),
        free: p.free.clone(),
    };
    let frob = |p: &Point| Point {
        mult: p.mult.iter().map(|&v| ext.frobenius(v)).collect(),
        add: p.add.iter().map(|&v| ext.frobenius(v)).collect(),
        free: p.free.iter().map(|&v| ext.frobenius(v)).collect(),
    };

    let mut seen: HashSet<Point> = HashSet::with_capacity(src.len());
    let mut components: HashMap<Vec<Elem>, Vec<Elem>> = HashMap::new();
    for p in &src {
        let hp = map.apply(p)?;
        if !on_variety(&iso.target, &ext, &hp) {
            on_target.fail(format!("{} ↦ {}", show(p), show(&hp)));
        } else if !tgt_set.contains(&hp) {
            surjective.fail(format!("image {} of {} missing from the target enumeration", show(&hp), show(p)));
        }
        if !seen.insert(hp.clone()) {
            injective.fail(format!("{} has two preimages", show(&hp)));
        }
        // Frob(h(P)) = (d_w, e)·h(Frob P)
        let lhs = frob(&hp);
        let rhs = act(&d_emb, &e_emb, &map.apply(&frob(p))?);
        if lhs != rhs {
            frobenius.fail(format!("at {}: {} vs {}", show(p), show(&lhs), show(&rhs)));
        }
        for (gen, (gm, ga)) in generators.iter().zip(&images_of_g) {
            let gp = act(
                &gen.mult.iter().map(|&v| ext.embed(v)).collect::<Vec<_>>(),
                &gen.add.iter().map(|&v| ext.embed(v)).collect::<Vec<_>>(),
                p,
            );
            let lhs = map.apply(&gp)?;
            let rhs = act(gm, ga, &hp);
            if lhs != rhs {
                equivariant.fail(format!("at {} for g = {:?}", show(p), gen));
                break;
            }
        }
        let t_src = map.tau(p)?;
        let t_img = map.tau(&hp)?;
        match components.get(&t_src) {
            Some(prev) if *prev != t_img => {
                tau.fail(format!("the τ = {t_src:?} component meets τ_w = {prev:?} and {t_img:?}"));
            }
            Some(_) => {}
            None => {
                components.insert(t_src, t_img);
            }
        }
    }
    let images: HashSet<&Vec<Elem>> = components.values().collect();
    if images.len() != components.len() {
        tau.fail("two τ-components land in the same τ_w-component".into());
    }
    if src.len() != tgt.len() && surjective.passed {
        surjective.fail(format!("{} source points but {} target points", src.len(), tgt.len()));
    }
    Ok(IsoReport {
        family: iso.family,
        symmetry: iso.symmetry.to_string(),
        extension_size: kf.q(),
        source_points: src.len(),
        target_points: tgt.len(),
        checks: vec![on_target, injective, surjective, frobenius, equivariant, tau],
    })
}

/// h_{w′} ∘ h_w = h_{ww′} on every point over k_r, and (x_w)_{w′} = x_{ww′}.
/// Here r must be a multiple of the degree of definition.
pub fn verify_composition(
    f: &Arc<Field>,
    family: IsoFamily,
    x: &MatK,
    (w1, w2): (&Symmetry, &Symmetry),
    r: u32,
    budget: usize,
) -> Result<Check> {
    let h1 = build_iso(f, family, x, w1)?;
    let h2 = build_iso(f, family, &h1.x_w, w2)?;
    let h12 = build_iso(f, family, x, &family.compose(f, w1, w2))?;
    let mut check = Check::new("h_{w′} ∘ h_w = h_{ww′}");
    if h2.x_w != h12.x_w {
        check.fail(format!("(x_w)_w′ = {:?} but x_ww′ = {:?}", h2.x_w, h12.x_w));
        return Ok(check);
    }
    if h1.q.mul(&h2.q) != h12.q {
        check.fail("Q_σ Q_σ′ ≠ Q_σσ′".into());
        return Ok(check);
    }
    if r == 0 || !r.is_multiple_of(h1.degree) {
        return Err(Error::Invalid(format!("the maps are defined over extensions of degree divisible by {}", h1.degree)));
    }
    let ext = extend(f, r)?;
    let (m1, m2, m12) = (h1.point_map(&ext)?, h2.point_map(&ext)?, h12.point_map(&ext)?);
    for p in enumerate_points(&h1.source, &ext, budget)? {
        let a = m2.apply(&m1.apply(&p)?)?;
        let b = m12.apply(&p)?;
        if a != b {
            check.fail(format!("at {}: {} vs {}", show(&p), show(&a), show(&b)));
            break;
        }
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::field_q;

    fn all_q_data() -> Vec<(IsoFamily, QData)> {
        vec![
            (IsoFamily::Gauss, QData::gauss()),
            (IsoFamily::Kummer, QData::kummer()),
            (IsoFamily::LauricellaD { m: 1 }, QData::lauricella_d(1)),
            (IsoFamily::LauricellaD { m: 2 }, QData::lauricella_d(2)),
            (IsoFamily::LauricellaD { m: 3 }, QData::lauricella_d(3)),
            (IsoFamily::Humbert1, QData::humbert1()),
            (IsoFamily::LauricellaA { m: 1 }, QData::lauricella_a(1)),
            (IsoFamily::LauricellaA { m: 2 }, QData::lauricella_a(2)),
            (IsoFamily::LauricellaA { m: 3 }, QData::lauricella_a(3)),
        ]
    }

    #[test]
    fn theta_rho_resolve_identity() {
        for (fam, d) in all_q_data() {
            let n = d.theta0.rows();
            assert_eq!(d.theta_rho_sum(), MatZ::identity(n), "{fam:?}");
        }
    }

    #[test]
    fn q_of_identity_is_identity() {
        let f = field_q(3).unwrap();
        for (fam, d) in all_q_data() {
            let id: Vec<usize> = (0..d.perm_dim).collect();
            assert_eq!(d.q(&id), MatZ::identity(d.theta0.rows()), "{fam:?}");
            assert_eq!(fam.q_matrix(&id), MatZ::identity(d.theta0.rows()));
            let _ = fam.generators(&f);
        }
    }

    #[test]
    fn displayed_q_matrices() {
        let s13 = parse_cycles(4, "(1 3)").unwrap();
        assert_eq!(
            IsoFamily::Gauss.q_matrix(&s13),
            MatZ::from_rows(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[-1, -1, -1, 0], &[0, 0, 0, 1]])
        );
        assert_eq!(
            IsoFamily::Kummer.q_matrix(&[1, 0]),
            MatZ::from_rows(&[&[-1, -1, -1], &[0, 1, 0], &[0, 0, 1]])
        );
    }

    #[test]
    fn q_is_a_homomorphism() {
        let f = field_q(3).unwrap();
        for fam in [
            IsoFamily::Gauss,
            IsoFamily::Kummer,
            IsoFamily::LauricellaD { m: 2 },
            IsoFamily::Humbert1,
            IsoFamily::Humbert3,
            IsoFamily::LauricellaA { m: 2 },
        ] {
            let syms = fam.all_symmetries(&f);
            let perms: HashSet<Vec<usize>> = syms.iter().map(|s| s.sigma.clone()).collect();
            for a in &perms {
                for b in &perms {
                    let qa = fam.q_matrix(a);
                    assert_eq!(qa.mul(&fam.q_matrix(b)), fam.q_matrix(&compose_perm(a, b)), "{fam:?}");
                }
            }
        }
    }

    #[test]
    fn cycles_round_trip() {
        assert_eq!(parse_cycles(4, "(1 3)").unwrap(), vec![2, 1, 0, 3]);
        assert_eq!(parse_cycles(4, "1 3").unwrap(), vec![2, 1, 0, 3]);
        assert_eq!(parse_cycles(3, "id").unwrap(), vec![0, 1, 2]);
        assert_eq!(cycle_string(&[1, 2, 0, 3]), "(1 2 3)");
        for p in permutations(4) {
            assert_eq!(parse_cycles(4, &cycle_string(&p)).unwrap(), p);
        }
        assert_eq!(permutations(4).len(), 24);
        assert!(parse_cycles(3, "(1 4)").is_err());
    }
}
