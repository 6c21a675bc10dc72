use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::Snr;
use crate::error::{Error, Result};
use crate::field::{FieldMatrix, PrimeField};
use crate::streams::{stream, Purpose};

/// Default limit on the size of the largest codebook, `p^k_max`.
pub const DEFAULT_CODEBOOK_BUDGET: u64 = 1 << 20;

const GENERATOR_ATTEMPTS: u64 = 1000;

/// `x - gamma * round(x / gamma)` with the result in `[-gamma/2, gamma/2)`.
pub fn mod_scalar(x: f64, gamma: f64) -> f64 {
    let mut y = x - gamma * (x / gamma + 0.5).floor();
    if y >= gamma / 2.0 {
        y -= gamma;
    } else if y < -gamma / 2.0 {
        y += gamma;
    }
    y
}

/// Componentwise reduction modulo the lattice `gamma Z^n`.
pub fn mod_lattice(x: &[f64], gamma: f64) -> Vec<f64> {
    x.iter().map(|&v| mod_scalar(v, gamma)).collect()
}

/// A fine-lattice point reduced into the coarse cell, tagged with its level.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeEquation {
    pub v: Vec<f64>,
    pub level: usize,
}

/// Construction-A nested lattice code with coarse lattice `gamma Z^n`.
///
/// Transmitter `l` uses the fine lattice generated by the first `k_l`
/// columns of `G`, so the fine lattices are nested in transmitter order.
#[derive(Debug, Clone, PartialEq)]
pub struct NestedLatticeCode {
    field: PrimeField,
    n: usize,
    k_list: Vec<usize>,
    g: FieldMatrix,
    gamma: f64,
    seed: u64,
    /// Codewords `G w` of the widest level, message index `sum w_j p^j`
    /// ascending; level `l` uses the first `p^k_l` of them.
    codebook: Vec<Vec<u64>>,
    /// Per level, a left inverse of the generator prefix.
    left_inverses: Vec<FieldMatrix>,
}

#[derive(Serialize, Deserialize)]
struct CodeJson {
    p: u64,
    n: usize,
    k_list: Vec<usize>,
    gamma: f64,
    seed: u64,
    #[serde(rename = "G")]
    g: Vec<Vec<u64>>,
}

fn prefix(g: &FieldMatrix, k: usize) -> FieldMatrix {
    let mut out = FieldMatrix::zeros(g.field(), g.rows(), k);
    for r in 0..g.rows() {
        for c in 0..k {
            out.set(r, c, g.get(r, c));
        }
    }
    out
}

fn gamma_for(snr: Snr) -> f64 {
    (6.0 * snr.linear()).sqrt()
}

impl NestedLatticeCode {
    /// Samples a uniform generator, redrawing until every level has full
    /// column rank.
    pub fn build(p: u64, k_list: &[usize], n: usize, seed: u64, snr: Snr) -> Result<Self> {
        Self::build_with_budget(p, k_list, n, seed, snr, DEFAULT_CODEBOOK_BUDGET)
    }

    pub fn build_with_budget(p: u64, k_list: &[usize], n: usize, seed: u64, snr: Snr, budget: u64) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let k_max = validate_levels(k_list, n)?;
        check_budget(p, k_max, budget)?;
        for attempt in 0..GENERATOR_ATTEMPTS {
            let mut rng = stream(seed, Purpose::Generator, attempt);
            let mut g = FieldMatrix::zeros(field, n, k_max);
            for r in 0..n {
                for c in 0..k_max {
                    g.set(r, c, rng.random_range(0..p));
                }
            }
            if g.rank() == k_max {
                return Self::assemble(field, k_list.to_vec(), g, gamma_for(snr), seed);
            }
        }
        Err(Error::Budget { what: "full-rank generator draws", limit: GENERATOR_ATTEMPTS as u128 })
    }

    /// Code from an explicit generator.
    pub fn from_generator(g: FieldMatrix, k_list: &[usize], snr: Snr) -> Result<Self> {
        let k_max = validate_levels(k_list, g.rows())?;
        if g.cols() != k_max {
            return Err(Error::DimensionMismatch { expected: k_max, actual: g.cols() });
        }
        check_budget(g.field().p(), k_max, DEFAULT_CODEBOOK_BUDGET)?;
        if g.rank() != k_max {
            return Err(Error::InvalidConfig("generator does not have full column rank".into()));
        }
        Self::assemble(g.field(), k_list.to_vec(), g, gamma_for(snr), 0)
    }

    fn assemble(field: PrimeField, k_list: Vec<usize>, g: FieldMatrix, gamma: f64, seed: u64) -> Result<Self> {
        let p = field.p();
        let (n, k_max) = (g.rows(), g.cols());
        let size = p.pow(k_max as u32) as usize;
        let mut codebook = Vec::with_capacity(size);
        for index in 0..size {
            let w = message_from_index(index as u64, p, k_max);
            codebook.push(mul_vec(&g, &w));
        }
        let mut left_inverses = Vec::with_capacity(k_list.len());
        for &k in &k_list {
            let gk = prefix(&g, k);
            let x = gk
                .transpose()
                .solve(&FieldMatrix::identity(field, k))?
                .ok_or_else(|| Error::InvalidConfig("generator level is rank deficient".into()))?;
            left_inverses.push(x.transpose());
        }
        debug_assert_eq!(n, g.rows());
        Ok(Self { field, n, k_list, g, gamma, seed, codebook, left_inverses })
    }

    /// Same code with the coarse lattice rescaled for `snr`.
    pub fn with_snr(&self, snr: Snr) -> Self {
        let mut c = self.clone();
        c.gamma = gamma_for(snr);
        c
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_list(&self) -> &[usize] {
        &self.k_list
    }

    pub fn num_levels(&self) -> usize {
        self.k_list.len()
    }

    pub fn generator(&self) -> &FieldMatrix {
        &self.g
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// SNR implied by the coarse scaling, `gamma^2 / 6`.
    pub fn snr(&self) -> Snr {
        Snr::from_linear(self.gamma * self.gamma / 6.0).expect("gamma is finite")
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Rate of level `l` in bits per real dimension.
    pub fn rate(&self, level: usize) -> f64 {
        self.k_list[level] as f64 / self.n as f64 * (self.p() as f64).log2()
    }

    fn level_k(&self, level: usize) -> Result<usize> {
        self.k_list
            .get(level)
            .copied()
            .ok_or(Error::IndexOutOfRange { index: level, len: self.k_list.len() })
    }

    /// Codeword `G_l w` over F_p.
    pub fn codeword(&self, level: usize, w: &[u64]) -> Result<Vec<u64>> {
        let k = self.level_k(level)?;
        check_message(w, k, self.p())?;
        let mut padded = w.to_vec();
        padded.resize(self.g.cols(), 0);
        Ok(mul_vec(&self.g, &padded))
    }

    /// Reduction modulo the coarse lattice.
    pub fn mod_coarse(&self, x: &[f64]) -> Vec<f64> {
        mod_lattice(x, self.gamma)
    }

    /// Maps a message to its lattice point `[gamma p^-1 g(G_l w)] mod Lambda`.
    pub fn encode_phi(&self, level: usize, w: &[u64]) -> Result<Vec<f64>> {
        let c = self.codeword(level, w)?;
        Ok(self.point_of(&c))
    }

    fn point_of(&self, c: &[u64]) -> Vec<f64> {
        let scale = self.gamma / self.p() as f64;
        c.iter().map(|&ci| mod_scalar(scale * self.field.g(ci) as f64, self.gamma)).collect()
    }

    /// Inverts `encode_phi` on a fine-lattice point of `level`, returning the
    /// message whose codeword is congruent to the point.
    pub fn decode_phi_inv(&self, level: usize, v: &[f64]) -> Result<Vec<u64>> {
        self.level_k(level)?;
        if v.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, actual: v.len() });
        }
        let p = self.p() as f64;
        let tol = 1e-6 * self.gamma;
        let mut x = Vec::with_capacity(self.n);
        for &vi in v {
            let z = p * vi / self.gamma;
            let r = z.round();
            if !((z - r).abs() * self.gamma / p <= tol) {
                return Err(Error::Corruption(format!("{vi} is not on the scaled integer grid")));
            }
            x.push(self.field.g_inv(r as i64));
        }
        let w = mul_vec(&self.left_inverses[level], &x);
        let back = mul_vec(&prefix(&self.g, self.k_list[level]), &w);
        if back != x {
            return Err(Error::Corruption("point is not a codeword of the requested level".into()));
        }
        Ok(w)
    }

    /// Nearest point of the level's fine lattice, reduced into the coarse cell.
    /// Equal distances keep the codeword with the smallest message index.
    pub fn quantize_fine(&self, level: usize, x: &[f64]) -> Result<LatticeEquation> {
        let k = self.level_k(level)?;
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, actual: x.len() });
        }
        let count = self.p().pow(k as u32) as usize;
        let scale = self.gamma / self.p() as f64;
        let mut best_dist = f64::INFINITY;
        let mut best_point = vec![0.0; self.n];
        let mut point = vec![0.0; self.n];
        for c in &self.codebook[..count] {
            let mut dist = 0.0;
            for i in 0..self.n {
                let offset = scale * c[i] as f64;
                let t = offset + self.gamma * ((x[i] - offset) / self.gamma).round();
                point[i] = t;
                dist += (x[i] - t) * (x[i] - t);
                if dist >= best_dist {
                    break;
                }
            }
            if dist < best_dist {
                best_dist = dist;
                best_point.copy_from_slice(&point);
            }
        }
        Ok(LatticeEquation { v: self.mod_coarse(&best_point), level })
    }

    /// Every message of a level, in index order.
    pub fn messages(&self, level: usize) -> Result<Vec<Vec<u64>>> {
        let k = self.level_k(level)?;
        let count = self.p().pow(k as u32);
        Ok((0..count).map(|i| message_from_index(i, self.p(), k)).collect())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CodeJson {
            p: self.p(),
            n: self.n,
            k_list: self.k_list.clone(),
            gamma: self.gamma,
            seed: self.seed,
            g: self.g.to_rows(),
        })
        .expect("code description serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: CodeJson = serde_json::from_str(s).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        let field = PrimeField::new(j.p)?;
        let rows: Vec<Vec<i64>> = j.g.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
        let g = FieldMatrix::from_rows(field, &rows)?;
        if g.rows() != j.n {
            return Err(Error::DimensionMismatch { expected: j.n, actual: g.rows() });
        }
        if !(j.gamma > 0.0 && j.gamma.is_finite()) {
            return Err(Error::InvalidConfig("gamma must be positive".into()));
        }
        let mut code = Self::from_generator(g, &j.k_list, Snr::from_linear(j.gamma * j.gamma / 6.0)?)?;
        code.gamma = j.gamma;
        code.seed = j.seed;
        Ok(code)
    }
}

fn validate_levels(k_list: &[usize], n: usize) -> Result<usize> {
    if k_list.is_empty() || k_list.contains(&0) {
        return Err(Error::InvalidConfig("message lengths must be positive".into()));
    }
    if k_list.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidConfig("message lengths must be nondecreasing".into()));
    }
    let k_max = *k_list.last().expect("nonempty");
    if k_max > n {
        return Err(Error::InvalidConfig(format!("message length {k_max} exceeds dimension {n}")));
    }
    Ok(k_max)
}

fn check_budget(p: u64, k: usize, budget: u64) -> Result<()> {
    let size = (p as u128).checked_pow(k as u32);
    match size {
        Some(s) if s <= budget as u128 => Ok(()),
        _ => Err(Error::Budget { what: "codebook enumeration", limit: budget as u128 }),
    }
}

fn check_message(w: &[u64], k: usize, p: u64) -> Result<()> {
    if w.len() != k {
        return Err(Error::DimensionMismatch { expected: k, actual: w.len() });
    }
    if w.iter().any(|&x| x >= p) {
        return Err(Error::Domain("message entries must lie in 0..p".into()));
    }
    Ok(())
}

fn message_from_index(mut index: u64, p: u64, k: usize) -> Vec<u64> {
    let mut w = vec![0; k];
    for x in w.iter_mut() {
        *x = index % p;
        index /= p;
    }
    w
}

pub(crate) fn mul_vec(m: &FieldMatrix, v: &[u64]) -> Vec<u64> {
    let p = m.field().p();
    (0..m.rows())
        .map(|r| m.row(r).iter().zip(v).fold(0u64, |acc, (a, b)| (acc + a * b) % p))
        .collect()
}
