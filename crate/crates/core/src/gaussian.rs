//! Entropy and mutual information of jointly Gaussian scalar variables.
//!
//! Every variable is a linear combination of independent, zero-mean,
//! unit-variance latents, so covariances follow from the coefficient rows
//! (`Σ = A·Aᵀ`). Sharing latents between variables is how coherent signals
//! (the same codeword sent by two transmitters) produce cross terms.
//!
//! Information quantities are reported in bits.

use std::collections::HashMap;
use std::f64::consts::{E, LN_2, PI};

use nalgebra::DMatrix;
use thiserror::Error;

/// Variables whose variance falls below this are treated as deterministic zero.
pub const DEGENERATE_VARIANCE: f64 = 1e-12;

/// Relative residual variance below which a variable is considered a
/// deterministic function of the variables already accounted for.
const DEPENDENT_RESIDUAL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaussianError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("variable `{name}` has {got} coefficients, expected {expected}")]
    CoefficientLength {
        name: String,
        got: usize,
        expected: usize,
    },
    #[error("non-finite coefficient in variable `{0}`")]
    NonFiniteCoefficient(String),
    #[error("covariance is singular after pruning degenerate variables")]
    SingularCovariance,
    #[error("variable `{0}` appears in more than one argument set")]
    OverlappingSets(String),
}

/// Index of a variable inside a [`GaussianSystem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A set of variables of one system, kept sorted and free of duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct VariableSet(Vec<VarId>);

impl VariableSet {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn new(ids: impl IntoIterator<Item = VarId>) -> Self {
        let mut v: Vec<VarId> = ids.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }

    pub fn ids(&self) -> &[VarId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: VarId) -> bool {
        self.0.binary_search(&id).is_ok()
    }
}

impl FromIterator<VarId> for VariableSet {
    fn from_iter<T: IntoIterator<Item = VarId>>(iter: T) -> Self {
        Self::new(iter)
    }
}

impl From<VarId> for VariableSet {
    fn from(id: VarId) -> Self {
        Self(vec![id])
    }
}

impl<const N: usize> From<[VarId; N]> for VariableSet {
    fn from(ids: [VarId; N]) -> Self {
        Self::new(ids)
    }
}

/// Scalar jointly Gaussian variables over a shared basis of independent
/// unit-variance latents.
#[derive(Debug, Clone)]
pub struct GaussianSystem {
    latent_count: usize,
    names: Vec<String>,
    coefficients: Vec<Vec<f64>>,
    index: HashMap<String, VarId>,
}

impl GaussianSystem {
    pub fn new(latent_count: usize) -> Self {
        Self {
            latent_count,
            names: Vec::new(),
            coefficients: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn latent_count(&self) -> usize {
        self.latent_count
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn add(&mut self, name: &str, coefficients: Vec<f64>) -> Result<VarId, GaussianError> {
        if coefficients.len() != self.latent_count {
            return Err(GaussianError::CoefficientLength {
                name: name.to_owned(),
                got: coefficients.len(),
                expected: self.latent_count,
            });
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(GaussianError::NonFiniteCoefficient(name.to_owned()));
        }
        if self.index.contains_key(name) {
            return Err(GaussianError::DuplicateVariable(name.to_owned()));
        }
        let id = VarId(self.names.len());
        self.names.push(name.to_owned());
        self.coefficients.push(coefficients);
        self.index.insert(name.to_owned(), id);
        Ok(id)
    }

    pub fn id(&self, name: &str) -> Result<VarId, GaussianError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| GaussianError::UnknownVariable(name.to_owned()))
    }

    /// Resolves a list of names into a set.
    pub fn set(&self, names: &[&str]) -> Result<VariableSet, GaussianError> {
        names.iter().map(|n| self.id(n)).collect()
    }

    pub fn name(&self, id: VarId) -> &str {
        &self.names[id.0]
    }

    pub fn coefficients(&self, id: VarId) -> &[f64] {
        &self.coefficients[id.0]
    }

    pub fn variance(&self, id: VarId) -> f64 {
        norm_sq(&self.coefficients[id.0])
    }

    fn check(&self, set: &VariableSet) -> Result<(), GaussianError> {
        match set.ids().iter().find(|id| id.0 >= self.names.len()) {
            Some(id) => Err(GaussianError::UnknownVariable(format!("#{}", id.0))),
            None => Ok(()),
        }
    }

    /// Covariance matrix of the selected variables, in set order.
    pub fn covariance(&self, vars: &VariableSet) -> Result<DMatrix<f64>, GaussianError> {
        self.check(vars)?;
        let ids = vars.ids();
        let n = ids.len();
        let mut cov = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let c = dot(self.coefficients(ids[i]), self.coefficients(ids[j]));
                cov[(i, j)] = c;
                cov[(j, i)] = c;
            }
        }
        Ok(cov)
    }

    /// Differential entropy `h(V) = ½ log₂((2πe)^k det Σ)` in bits, after
    /// dropping variables whose variance is below [`DEGENERATE_VARIANCE`].
    pub fn diff_entropy(&self, vars: &VariableSet) -> Result<f64, GaussianError> {
        self.check(vars)?;
        let kept: VariableSet = vars
            .ids()
            .iter()
            .copied()
            .filter(|&id| self.variance(id) >= DEGENERATE_VARIANCE)
            .collect();
        if kept.is_empty() {
            return Ok(0.0);
        }
        let cov = self.covariance(&kept)?;
        let chol = cov.cholesky().ok_or(GaussianError::SingularCovariance)?;
        let l = chol.l_dirty();
        let mut log_det = 0.0;
        for i in 0..kept.len() {
            let d = l[(i, i)];
            if d.is_nan() || d <= 0.0 {
                return Err(GaussianError::SingularCovariance);
            }
            log_det += 2.0 * d.ln();
        }
        let k = kept.len() as f64;
        Ok(0.5 * (k * (2.0 * PI * E).ln() + log_det) / LN_2)
    }

    /// Conditional mutual information `I(A;B|C)` in bits.
    ///
    /// Members of `a`, `b`, or `cond` that are deterministic functions of
    /// the conditioning set (or of earlier members of the same set) carry
    /// no information and are dropped before the log-determinant ratio is
    /// formed. A surviving member of `b` that becomes deterministic once
    /// `a` is known would make the information infinite and is reported as
    /// [`GaussianError::SingularCovariance`].
    pub fn mutual_info(
        &self,
        a: &VariableSet,
        b: &VariableSet,
        cond: &VariableSet,
    ) -> Result<f64, GaussianError> {
        self.check(a)?;
        self.check(b)?;
        self.check(cond)?;
        for &id in a.ids() {
            if b.contains(id) || cond.contains(id) {
                return Err(GaussianError::OverlappingSets(self.name(id).to_owned()));
            }
        }
        for &id in b.ids() {
            if cond.contains(id) {
                return Err(GaussianError::OverlappingSets(self.name(id).to_owned()));
            }
        }
        // Canonical argument order keeps the result exactly symmetric.
        let (a, b) = if a.ids() <= b.ids() { (a, b) } else { (b, a) };

        let mut base = Residuals::new(self.latent_count);
        for &id in cond.ids() {
            base.push(self.coefficients(id));
        }

        let mut given_a = base.clone();
        let mut a_kept = false;
        for &id in a.ids() {
            a_kept |= given_a.push(self.coefficients(id)).is_some();
        }

        let mut given_c = base;
        let mut b_kept = Vec::new();
        let mut log_det_b = 0.0;
        for &id in b.ids() {
            if let Some(d) = given_c.push(self.coefficients(id)) {
                b_kept.push(id);
                log_det_b += d.ln();
            }
        }
        if !a_kept || b_kept.is_empty() {
            return Ok(0.0);
        }

        let mut log_det_b_given_a = 0.0;
        for &id in &b_kept {
            match given_a.push(self.coefficients(id)) {
                Some(d) => log_det_b_given_a += d.ln(),
                None => return Err(GaussianError::SingularCovariance),
            }
        }
        let mi = 0.5 * (log_det_b - log_det_b_given_a) / LN_2;
        Ok(mi.max(0.0))
    }

    /// Convenience wrapper resolving names before calling [`Self::mutual_info`].
    pub fn mutual_info_by_name(
        &self,
        a: &[&str],
        b: &[&str],
        cond: &[&str],
    ) -> Result<f64, GaussianError> {
        self.mutual_info(&self.set(a)?, &self.set(b)?, &self.set(cond)?)
    }
}

/// Incremental Gram–Schmidt over coefficient rows. The squared norm of each
/// residual is the conditional variance given every row accepted so far,
/// so the product of residuals is the Cholesky determinant of `A·Aᵀ`.
#[derive(Debug, Clone)]
struct Residuals {
    basis: Vec<Vec<f64>>,
    dim: usize,
}

impl Residuals {
    fn new(dim: usize) -> Self {
        Self {
            basis: Vec::new(),
            dim,
        }
    }

    /// Returns the conditional variance when the row adds a new direction.
    fn push(&mut self, row: &[f64]) -> Option<f64> {
        debug_assert_eq!(row.len(), self.dim);
        let total = norm_sq(row);
        if total < DEGENERATE_VARIANCE {
            return None;
        }
        let mut r = row.to_vec();
        // two passes of classical Gram-Schmidt
        for _ in 0..2 {
            for q in &self.basis {
                let p = dot(&r, q);
                for (x, y) in r.iter_mut().zip(q) {
                    *x -= p * y;
                }
            }
        }
        let d = norm_sq(&r);
        if d < DEPENDENT_RESIDUAL * total.max(1.0) {
            return None;
        }
        let n = d.sqrt();
        r.iter_mut().for_each(|x| *x /= n);
        self.basis.push(r);
        Some(d)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

/// Handle to a variable under construction in a [`SystemBuilder`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Handle(usize);

impl Handle {
    pub fn id(self) -> VarId {
        VarId(self.0)
    }
}

/// Builds a [`GaussianSystem`] while allocating latents on demand.
///
/// `latent` introduces a fresh independent component; `combine` forms a
/// linear combination of variables defined earlier.
#[derive(Debug, Default)]
pub struct SystemBuilder {
    vars: Vec<(String, Vec<(usize, f64)>)>,
    latents: usize,
}

impl SystemBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// A new independent variable with the given variance.
    pub fn latent(&mut self, name: &str, variance: f64) -> Handle {
        let k = self.latents;
        self.latents += 1;
        self.vars
            .push((name.to_owned(), vec![(k, variance.max(0.0).sqrt())]));
        Handle(self.vars.len() - 1)
    }

    /// `Σ scale·var` over previously defined variables.
    pub fn combine(&mut self, name: &str, terms: &[(Handle, f64)]) -> Handle {
        let mut acc: Vec<(usize, f64)> = Vec::new();
        for &(h, scale) in terms {
            if scale == 0.0 {
                continue;
            }
            for &(k, c) in &self.vars[h.0].1 {
                match acc.iter_mut().find(|(j, _)| *j == k) {
                    Some((_, v)) => *v += scale * c,
                    None => acc.push((k, scale * c)),
                }
            }
        }
        self.vars.push((name.to_owned(), acc));
        Handle(self.vars.len() - 1)
    }

    pub fn build(self) -> Result<GaussianSystem, GaussianError> {
        let mut sys = GaussianSystem::new(self.latents);
        for (name, sparse) in self.vars {
            let mut row = vec![0.0; self.latents];
            for (k, c) in sparse {
                row[k] += c;
            }
            sys.add(&name, row)?;
        }
        Ok(sys)
    }
}
