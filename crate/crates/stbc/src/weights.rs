//! Weight-matrix families for rate-1 two-group codes on `2^a` antennas.
//!
//! `build_fgd_groups` assembles the two groups
//! `G1 = {I, R_1..R_a} u A` and `G2 = {R_{a+1}..R_{2a+1}} u B`, where the
//! chain sets `A` and `B` depend on `a mod 4`. The checks in this module
//! verify the group-decodability conditions directly on the matrices, so any
//! claimed structure is measured rather than assumed.

use num_complex::Complex64;
use serde_json::json;

use crate::clifford::GeneratorSet;
use crate::cmatrix::CMat;
use crate::{Error, Result};

const J: Complex64 = Complex64::new(0.0, 1.0);

/// Which chain family a delta exponent belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaSet {
    A,
    B,
}

/// The `j` exponent attached to a length-`m` chain, by residue class of `a`.
/// Values are reduced mod 4 before use as a power of `j`.
pub fn delta_exponent(set: DeltaSet, a: usize, m: usize) -> Result<u32> {
    let valid = match set {
        DeltaSet::A => m >= 1 && m + 2 <= a,
        DeltaSet::B => {
            let parity_ok = if a % 2 == 0 { m % 2 == 0 } else { m % 2 == 1 };
            m >= 1 && m + 2 <= a && parity_ok
        }
    };
    if !valid {
        let set_ch = if set == DeltaSet::A { 'A' } else { 'B' };
        return Err(Error::DeltaOutOfRange { set: set_ch, a, m });
    }
    let m4 = (m % 4) as i64;
    let raw = match (a % 4, set) {
        (0, DeltaSet::A) => (m4 - 1) * (m4 - 2) / 2,
        (0, DeltaSet::B) => (2 - m4) / 2,
        (1, DeltaSet::A) => (m4 * (m4 - 1)).rem_euclid(4) / 2,
        (1, DeltaSet::B) => (m4 - 1) / 2,
        (2, DeltaSet::A) => (m4 * (m4 - 3)).rem_euclid(4) / 2,
        (2, DeltaSet::B) => m4 / 2,
        (3, DeltaSet::A) => ((m4 - 2) * (m4 - 3)).rem_euclid(4) / 2,
        (3, DeltaSet::B) => (3 - m4) / 2,
        _ => unreachable!(),
    };
    Ok(raw.rem_euclid(4) as u32)
}

/// Product of generators in the written order (indices need not increase).
fn product(gens: &GeneratorSet, indices: &[usize]) -> CMat {
    let mut out = CMat::identity(gens.dim());
    for &i in indices {
        out = out.mul(gens.r(i));
    }
    out
}

/// Every strictly increasing `m`-tuple from `lo..=hi`, in lexicographic order.
fn chains(lo: usize, hi: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(lo: usize, hi: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        let need = m - cur.len();
        for k in lo..=hi.saturating_sub(need - 1) {
            cur.push(k);
            rec(k + 1, hi, m, cur, out);
            cur.pop();
        }
    }
    rec(lo, hi, m, &mut cur, &mut out);
    out
}

/// The set `A`: the leading element `[j] * R_{a+1}..R_{2a+1}` followed by the
/// chain-extended elements `j^deltaA(m) * R_{a+1}..R_{2a+1} * R_{k_1}..R_{k_m}`
/// over `1 <= k_1 < .. < k_m <= a`, `m = 1..a-2`. Ordered by `(m, chain)`.
pub fn build_set_a(gens: &GeneratorSet) -> Vec<CMat> {
    let a = gens.exponent();
    let block: Vec<usize> = (a + 1..=2 * a + 1).collect();
    let base = product(gens, &block);
    let lead_j = matches!(a % 4, 0 | 3);
    let mut out = Vec::new();
    out.push(if lead_j { base.scale(J) } else { base.clone() });
    for m in 1..=a.saturating_sub(2) {
        let delta = delta_exponent(DeltaSet::A, a, m).expect("m in range");
        let factor = J.powu(delta);
        for chain in chains(1, a, m) {
            out.push(base.mul(&product(gens, &chain)).scale(factor));
        }
    }
    out
}

/// The set `B`: analogous to `A` with the roles of the index blocks swapped.
/// Chains are drawn from `a+1..2a+1`; `m` runs over even lengths when `a` is
/// even (with a leading element) and odd lengths when `a` is odd (no leading
/// element).
pub fn build_set_b(gens: &GeneratorSet) -> Vec<CMat> {
    let a = gens.exponent();
    let block: Vec<usize> = (1..=a).collect();
    let base = product(gens, &block);
    let mut out = Vec::new();
    if a % 2 == 0 {
        out.push(if a % 4 == 0 { base.scale(J) } else { base.clone() });
    }
    let start = if a % 2 == 0 { 2 } else { 1 };
    let mut m = start;
    while m + 2 <= a {
        let delta = delta_exponent(DeltaSet::B, a, m).expect("m in range");
        let factor = J.powu(delta);
        for chain in chains(a + 1, 2 * a + 1, m) {
            out.push(base.mul(&product(gens, &chain)).scale(factor));
        }
        m += 2;
    }
    out
}

/// An ordered list of weight matrices with its group / inner-group structure.
#[derive(Debug, Clone)]
pub struct WeightSet {
    /// Transmit antennas (matrix columns).
    pub nt: usize,
    /// Codeword length (matrix rows).
    pub t: usize,
    /// The `2K` weight matrices, in symbol order.
    pub matrices: Vec<CMat>,
    /// Partition of `0..2K` into groups.
    pub groups: Vec<Vec<usize>>,
    /// Per group, the inner groups covering its orthogonal kappa-subset.
    pub inner_groups: Vec<Vec<Vec<usize>>>,
}

impl WeightSet {
    /// Number of real symbols carried by one codeword.
    pub fn symbol_count(&self) -> usize {
        self.matrices.len()
    }

    /// Codeword for a real symbol vector: the weighted sum of the matrices.
    pub fn assemble(&self, s: &[f64]) -> Result<CMat> {
        if s.len() != self.matrices.len() {
            return Err(Error::LengthMismatch { expected: self.matrices.len(), got: s.len() });
        }
        let mut out = CMat::zeros(self.t, self.nt);
        for (m, &x) in self.matrices.iter().zip(s) {
            if x != 0.0 {
                out = out.add(&m.scale(Complex64::new(x, 0.0)));
            }
        }
        Ok(out)
    }

    /// Shorten the code to fewer antennas by dropping trailing columns.
    pub fn take_antennas(&self, nt: usize) -> WeightSet {
        assert!(nt <= self.nt);
        WeightSet {
            nt,
            t: self.t,
            matrices: self.matrices.iter().map(|m| m.take_columns(nt)).collect(),
            groups: self.groups.clone(),
            inner_groups: self.inner_groups.clone(),
        }
    }

    /// JSON text with matrices as `[re, im]` pairs plus the annotations.
    pub fn to_json(&self) -> String {
        let mats: Vec<_> = self
            .matrices
            .iter()
            .map(|m| {
                let entries: Vec<_> = m.entries().iter().map(|z| json!([z.re, z.im])).collect();
                json!({ "rows": m.rows(), "cols": m.cols(), "entries": entries })
            })
            .collect();
        let v = json!({
            "nt": self.nt,
            "t": self.t,
            "matrices": mats,
            "groups": self.groups,
            "inner_groups": self.inner_groups,
        });
        serde_json::to_string_pretty(&v).expect("json value")
    }

    /// Parse the format produced by [`WeightSet::to_json`].
    pub fn from_json(text: &str) -> Result<WeightSet> {
        #[derive(serde::Deserialize)]
        struct MatRepr {
            rows: usize,
            cols: usize,
            entries: Vec<[f64; 2]>,
        }
        #[derive(serde::Deserialize)]
        struct Repr {
            nt: usize,
            t: usize,
            matrices: Vec<MatRepr>,
            groups: Vec<Vec<usize>>,
            inner_groups: Vec<Vec<Vec<usize>>>,
        }
        let repr: Repr = serde_json::from_str(text)?;
        let matrices = repr
            .matrices
            .into_iter()
            .map(|m| {
                let data = m.entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
                CMat::from_rows(m.rows, m.cols, data)
            })
            .collect();
        Ok(WeightSet {
            nt: repr.nt,
            t: repr.t,
            matrices,
            groups: repr.groups,
            inner_groups: repr.inner_groups,
        })
    }
}

/// The rate-1 two-group weight set of the generic construction:
/// `G1 = {I, R_1..R_a} u A`, `G2 = {R_{a+1}..R_{2a+1}} u B`, with the
/// orthogonal singletons annotated as inner groups.
pub fn build_fgd_groups(gens: &GeneratorSet) -> WeightSet {
    let a = gens.exponent();
    let n = gens.dim();

    let mut matrices = Vec::new();
    matrices.push(CMat::identity(n));
    for i in 1..=a {
        matrices.push(gens.r(i).clone());
    }
    matrices.extend(build_set_a(gens));
    let n1 = matrices.len();

    for i in a + 1..=2 * a + 1 {
        matrices.push(gens.r(i).clone());
    }
    matrices.extend(build_set_b(gens));
    let n_total = matrices.len();

    let groups = vec![(0..n1).collect::<Vec<_>>(), (n1..n_total).collect::<Vec<_>>()];
    let inner_groups = vec![
        (0..=a).map(|i| vec![i]).collect::<Vec<_>>(),
        (0..=a).map(|i| vec![n1 + i]).collect::<Vec<_>>(),
    ];

    WeightSet { nt: n, t: n, matrices, groups, inner_groups }
}

/// Code rate in complex symbols per channel use.
pub fn rate(ws: &WeightSet) -> f64 {
    ws.symbol_count() as f64 / (2.0 * ws.t as f64)
}

/// Max Frobenius norm of `Ak^H Al + Al^H Ak` over pairs drawn from groups
/// `i` and `j` (distinct matrices only). Zero means the two groups satisfy
/// the separability condition; `i == j` measures a group against itself.
pub fn check_mutual_condition(ws: &WeightSet, i: usize, j: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for &k in &ws.groups[i] {
        for &l in &ws.groups[j] {
            if k == l {
                continue;
            }
            let ak = &ws.matrices[k];
            let al = &ws.matrices[l];
            let v = ak.adjoint().mul(al).add(&al.adjoint().mul(ak)).fro_norm();
            worst = worst.max(v);
        }
    }
    worst
}

/// Structure parameters realized by a weight set's annotations.
#[derive(Debug, Clone)]
pub struct StructureReport {
    /// Number of groups.
    pub g: usize,
    /// Group sizes `n_i`.
    pub group_sizes: Vec<usize>,
    /// Inner-group counts `g_i`.
    pub inner_counts: Vec<usize>,
    /// Inner-group sizes `n_{i,j}` per group.
    pub inner_sizes: Vec<Vec<usize>>,
    /// Orthogonal subset sizes `kappa_i`.
    pub kappas: Vec<usize>,
    /// Worst cross-group violation of the separability condition.
    pub max_cross_violation: f64,
    /// Worst cross-inner-group violation inside any group.
    pub max_inner_violation: f64,
}

impl StructureReport {
    pub fn satisfied(&self, tol: f64) -> bool {
        self.max_cross_violation <= tol
            && self.max_inner_violation <= tol
            && self
                .kappas
                .iter()
                .zip(&self.group_sizes)
                .all(|(&k, &n)| k < n || n == 1)
    }
}

/// Measure the fast-group-decodable structure claimed by the annotations.
pub fn check_fgd_structure(ws: &WeightSet) -> StructureReport {
    let g = ws.groups.len();
    let mut max_cross: f64 = 0.0;
    for i in 0..g {
        for j in (i + 1)..g {
            max_cross = max_cross.max(check_mutual_condition(ws, i, j));
        }
    }

    let mut max_inner: f64 = 0.0;
    let mut inner_sizes = Vec::new();
    let mut kappas = Vec::new();
    for inner in &ws.inner_groups {
        let sizes: Vec<usize> = inner.iter().map(Vec::len).collect();
        kappas.push(sizes.iter().sum());
        inner_sizes.push(sizes);
        for (m, gm) in inner.iter().enumerate() {
            for gn in inner.iter().skip(m + 1) {
                for &k in gm {
                    for &l in gn {
                        let ak = &ws.matrices[k];
                        let al = &ws.matrices[l];
                        let v = ak.adjoint().mul(al).add(&al.adjoint().mul(ak)).fro_norm();
                        max_inner = max_inner.max(v);
                    }
                }
            }
        }
    }

    StructureReport {
        g,
        group_sizes: ws.groups.iter().map(Vec::len).collect(),
        inner_counts: ws.inner_groups.iter().map(Vec::len).collect(),
        inner_sizes,
        kappas,
        max_cross_violation: max_cross,
        max_inner_violation: max_inner,
    }
}

/// Rank of the stacked realified vectorizations of the weight matrices.
/// Equals `2K` exactly when the matrices are linearly independent over R.
pub fn linear_independence_rank(ws: &WeightSet) -> usize {
    let dim = 2 * ws.t * ws.nt;
    let mut data = Vec::with_capacity(ws.matrices.len() * dim);
    for m in &ws.matrices {
        data.extend(m.realified_vec());
    }
    let mat = crate::linalg::RMat::from_rows(ws.matrices.len(), dim, data);
    mat.rank(1e-9)
}
