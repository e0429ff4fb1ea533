//! Simplicial operators: monotone maps `[n] -> [m]` between finite ordinals,
//! including the empty ordinal `[-1]`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpError {
    #[error("cannot compose: inner codomain [{inner_cod}] differs from outer domain [{outer_dom}]")]
    CompositionMismatch { inner_cod: i32, outer_dom: i32 },
    #[error("index {index} out of range for {what} on [{n}]")]
    IndexError { what: &'static str, index: usize, n: i32 },
    #[error("ordinal [{0}] is not allowed here")]
    BadOrdinal(i32),
    #[error("value {value} at position {pos} exceeds codomain [{cod}]")]
    ValueOutOfRange { pos: usize, value: usize, cod: i32 },
    #[error("values are not monotone at position {0}")]
    NotMonotone(usize),
    #[error("malformed operator text: {0}")]
    Parse(String),
}

/// The ordinal `[n] = {0 < 1 < ... < n}`; `[-1]` is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ordinal(i32);

impl Ordinal {
    pub fn new(n: i32) -> Result<Self, OpError> {
        if n < -1 {
            return Err(OpError::BadOrdinal(n));
        }
        Ok(Ordinal(n))
    }

    pub fn n(self) -> i32 {
        self.0
    }

    pub fn size(self) -> usize {
        (self.0 + 1) as usize
    }
}

/// A weakly monotone map `[dom] -> [cod]` stored as its value list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimplicialOperator {
    cod: i32,
    values: Vec<usize>,
}

impl PartialOrd for SimplicialOperator {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SimplicialOperator {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.dom(), self.cod, &self.values).cmp(&(other.dom(), other.cod, &other.values))
    }
}

impl SimplicialOperator {
    pub fn new(cod: i32, values: Vec<usize>) -> Result<Self, OpError> {
        if cod < -1 {
            return Err(OpError::BadOrdinal(cod));
        }
        for (pos, &v) in values.iter().enumerate() {
            if v as i64 > cod as i64 {
                return Err(OpError::ValueOutOfRange { pos, value: v, cod });
            }
            if pos > 0 && values[pos - 1] > v {
                return Err(OpError::NotMonotone(pos));
            }
        }
        Ok(SimplicialOperator { cod, values })
    }

    pub fn identity(n: i32) -> Self {
        assert!(n >= -1, "ordinal below [-1]");
        SimplicialOperator { cod: n, values: (0..(n + 1) as usize).collect() }
    }

    pub fn dom(&self) -> i32 {
        self.values.len() as i32 - 1
    }

    pub fn cod(&self) -> i32 {
        self.cod
    }

    pub fn dom_ordinal(&self) -> Ordinal {
        Ordinal(self.dom())
    }

    pub fn cod_ordinal(&self) -> Ordinal {
        Ordinal(self.cod)
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, i: usize) -> usize {
        self.values[i]
    }

    pub fn is_identity(&self) -> bool {
        self.dom() == self.cod && self.values.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Injective operators.
    pub fn is_face(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    /// Surjective operators.
    pub fn is_degeneracy(&self) -> bool {
        let size = (self.cod + 1) as usize;
        match self.values.first() {
            None => size == 0,
            Some(&first) => {
                first == 0
                    && *self.values.last().unwrap() + 1 == size
                    && self.values.windows(2).all(|w| w[1] <= w[0] + 1)
            }
        }
    }

    /// `self(k) == self(k+1)`, i.e. `self` factors through `σ_k`.
    pub fn degenerate_at(&self, k: usize) -> bool {
        k + 1 < self.values.len() && self.values[k] == self.values[k + 1]
    }

    pub fn image(&self) -> Vec<usize> {
        let mut im = self.values.clone();
        im.dedup();
        im
    }

    pub fn image_mask(&self) -> u64 {
        self.values.iter().fold(0u64, |m, &v| m | (1u64 << v))
    }

    pub fn contains_in_image(&self, v: usize) -> bool {
        self.values.binary_search(&v).is_ok()
    }

    /// Pointwise `self <= other` (the 2-cells of Δ+).
    pub fn pointwise_le(&self, other: &Self) -> bool {
        self.dom() == other.dom() && self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for SimplicialOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "op {} {} :", self.dom(), self.cod)?;
        for v in &self.values {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

impl FromStr for SimplicialOperator {
    type Err = OpError;

    fn from_str(s: &str) -> Result<Self, OpError> {
        let bad = || OpError::Parse(s.to_string());
        let (head, tail) = s.split_once(':').ok_or_else(bad)?;
        let head: Vec<&str> = head.split_whitespace().collect();
        if head.len() != 3 || head[0] != "op" {
            return Err(bad());
        }
        let dom: i32 = head[1].parse().map_err(|_| bad())?;
        let cod: i32 = head[2].parse().map_err(|_| bad())?;
        let values = tail
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        if values.len() as i32 - 1 != dom {
            return Err(bad());
        }
        SimplicialOperator::new(cod, values)
    }
}

/// `g ∘ f`.
pub fn compose(g: &SimplicialOperator, f: &SimplicialOperator) -> Result<SimplicialOperator, OpError> {
    if f.cod != g.dom() {
        return Err(OpError::CompositionMismatch { inner_cod: f.cod, outer_dom: g.dom() });
    }
    Ok(SimplicialOperator { cod: g.cod, values: f.values.iter().map(|&i| g.values[i]).collect() })
}

/// Composition for callers that have already matched the ordinals.
pub(crate) fn comp(g: &SimplicialOperator, f: &SimplicialOperator) -> SimplicialOperator {
    compose(g, f).expect("operator ordinals must match")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elementary {
    /// `δ^n_j : [n-1] -> [n]`
    Face(usize),
    /// `σ^n_j : [n+1] -> [n]`
    Degeneracy(usize),
    /// `ε^n_i : [0] -> [n]`
    Vertex(usize),
    /// `η^n : [n] -> [0]`
    Terminal,
}

pub fn elementary(kind: Elementary, n: i32) -> Result<SimplicialOperator, OpError> {
    let check = |what, index: usize| {
        if n < 0 || index as i32 > n {
            Err(OpError::IndexError { what, index, n })
        } else {
            Ok(())
        }
    };
    match kind {
        Elementary::Face(j) => {
            check("face", j)?;
            let values = (0..n as usize).map(|i| if i < j { i } else { i + 1 }).collect();
            Ok(SimplicialOperator { cod: n, values })
        }
        Elementary::Degeneracy(j) => {
            check("degeneracy", j)?;
            let values = (0..=n as usize + 1).map(|i| if i <= j { i } else { i - 1 }).collect();
            Ok(SimplicialOperator { cod: n, values })
        }
        Elementary::Vertex(i) => {
            check("vertex", i)?;
            Ok(SimplicialOperator { cod: n, values: vec![i] })
        }
        Elementary::Terminal => {
            if n < 0 {
                return Err(OpError::BadOrdinal(n));
            }
            Ok(SimplicialOperator { cod: 0, values: vec![0; n as usize + 1] })
        }
    }
}

pub fn face(n: i32, j: usize) -> Result<SimplicialOperator, OpError> {
    elementary(Elementary::Face(j), n)
}

pub fn degeneracy(n: i32, j: usize) -> Result<SimplicialOperator, OpError> {
    elementary(Elementary::Degeneracy(j), n)
}

pub fn vertex(n: i32, i: usize) -> Result<SimplicialOperator, OpError> {
    elementary(Elementary::Vertex(i), n)
}

pub fn terminal(n: i32) -> Result<SimplicialOperator, OpError> {
    elementary(Elementary::Terminal, n)
}

pub(crate) fn delta(n: usize, j: usize) -> SimplicialOperator {
    face(n as i32, j).expect("face index in range")
}

pub(crate) fn sigma(n: usize, j: usize) -> SimplicialOperator {
    degeneracy(n as i32, j).expect("degeneracy index in range")
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdentityReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustively checks the δδ, σσ and σδ identity families on ordinals up to `[n_max]`.
pub fn simplicial_identities_check(n_max: usize) -> IdentityReport {
    let mut report = IdentityReport::default();
    let mut check = |name: String, lhs: SimplicialOperator, rhs: SimplicialOperator| {
        report.checked += 1;
        if lhs != rhs {
            report.violations.push(format!("{name}: {lhs} != {rhs}"));
        }
    };
    // δ^{n+1}_i δ^n_j = δ^{n+1}_j δ^n_{i-1} for j < i
    for n in 1..n_max {
        for i in 0..=n + 1 {
            for j in 0..i {
                check(
                    format!("dd n={n} i={i} j={j}"),
                    comp(&delta(n + 1, i), &delta(n, j)),
                    comp(&delta(n + 1, j), &delta(n, i - 1)),
                );
            }
        }
    }
    // σ^n_j σ^{n+1}_i = σ^n_i σ^{n+1}_{j+1} for i <= j
    for n in 0..n_max {
        for j in 0..=n {
            for i in 0..=j {
                check(
                    format!("ss n={n} i={i} j={j}"),
                    comp(&sigma(n, j), &sigma(n + 1, i)),
                    comp(&sigma(n, i), &sigma(n + 1, j + 1)),
                );
            }
        }
    }
    // σ^n_j δ^{n+1}_i, three cases
    for n in 0..n_max {
        for j in 0..=n {
            for i in 0..=n + 1 {
                let lhs = comp(&sigma(n, j), &delta(n + 1, i));
                let rhs = if i < j {
                    comp(&delta(n, i), &sigma(n - 1, j - 1))
                } else if i == j || i == j + 1 {
                    SimplicialOperator::identity(n as i32)
                } else {
                    comp(&delta(n, i - 1), &sigma(n - 1, j))
                };
                check(format!("sd n={n} i={i} j={j}"), lhs, rhs);
            }
        }
    }
    report
}

/// The unique factorisation `α = face ∘ degeneracy`.
pub fn ez_factorize(alpha: &SimplicialOperator) -> (SimplicialOperator, SimplicialOperator) {
    let image = alpha.image();
    let mut degen = Vec::with_capacity(alpha.values.len());
    let mut rank = 0;
    for (i, &v) in alpha.values.iter().enumerate() {
        if i > 0 && alpha.values[i - 1] != v {
            rank += 1;
        }
        degen.push(rank);
    }
    let face_cod = alpha.cod;
    let top = image.len() as i32 - 1;
    (
        SimplicialOperator { cod: face_cod, values: image },
        SimplicialOperator { cod: top, values: degen },
    )
}

/// `α°(i) = m - α(n - i)`.
pub fn dual(alpha: &SimplicialOperator) -> SimplicialOperator {
    let m = alpha.cod as usize;
    SimplicialOperator {
        cod: alpha.cod,
        values: alpha.values.iter().rev().map(|&v| m - v).collect(),
    }
}

/// The direct sum `α ⊕ q : [n+m+1] -> [n'+m'+1]`. The right operand `q` acts on the
/// lower block of indices and `α` on the upper block, so the unit is `id_[-1]` on either side.
pub fn ordinal_sum(alpha: &SimplicialOperator, q: &SimplicialOperator) -> SimplicialOperator {
    let shift = (q.cod + 1) as usize;
    let mut values = q.values.clone();
    values.extend(alpha.values.iter().map(|&v| v + shift));
    SimplicialOperator { cod: alpha.cod + q.cod + 1, values }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionOps {
    /// `⊓^{p,q}_1 : [p] -> [p+q]`
    pub inj1: SimplicialOperator,
    /// `⊓^{p,q}_2 : [q] -> [p+q]`
    pub inj2: SimplicialOperator,
    /// `⊔^{p,q}_1 : [p+q] -> [p]`
    pub proj1: SimplicialOperator,
    /// `⊔^{p,q}_2 : [p+q] -> [q]`
    pub proj2: SimplicialOperator,
}

pub fn partition_ops(p: usize, q: usize) -> PartitionOps {
    let n = (p + q) as i32;
    PartitionOps {
        inj1: SimplicialOperator { cod: n, values: (0..=p).collect() },
        inj2: SimplicialOperator { cod: n, values: (0..=q).map(|j| j + p).collect() },
        proj1: SimplicialOperator { cod: p as i32, values: (0..=p + q).map(|i| i.min(p)).collect() },
        proj2: SimplicialOperator { cod: q as i32, values: (0..=p + q).map(|i| i.saturating_sub(p)).collect() },
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjoints {
    pub left: Option<SimplicialOperator>,
    pub right: Option<SimplicialOperator>,
}

pub fn adjoints(alpha: &SimplicialOperator) -> Adjoints {
    let n = alpha.dom();
    let m = alpha.cod;
    if n < 0 || m < 0 {
        return Adjoints { left: None, right: None };
    }
    let left = (alpha.values[n as usize] == m as usize).then(|| SimplicialOperator {
        cod: n,
        values: (0..=m as usize)
            .map(|i| alpha.values.iter().position(|&a| i <= a).unwrap())
            .collect(),
    });
    let right = (alpha.values[0] == 0).then(|| SimplicialOperator {
        cod: n,
        values: (0..=m as usize)
            .map(|i| alpha.values.iter().rposition(|&a| a <= i).unwrap())
            .collect(),
    });
    Adjoints { left, right }
}

/// All monotone maps `[dom] -> [cod]` in lexicographic order of value lists.
pub fn monotone_maps(dom: i32, cod: i32) -> Vec<SimplicialOperator> {
    let mut out = Vec::new();
    if cod < 0 {
        if dom < 0 {
            out.push(SimplicialOperator { cod, values: vec![] });
        }
        return out;
    }
    let len = (dom + 1) as usize;
    let mut values = vec![0usize; len];
    fn rec(pos: usize, lo: usize, cod: usize, values: &mut Vec<usize>, out: &mut Vec<SimplicialOperator>, c: i32) {
        if pos == values.len() {
            out.push(SimplicialOperator { cod: c, values: values.clone() });
            return;
        }
        for v in lo..=cod {
            values[pos] = v;
            rec(pos + 1, v, cod, values, out, c);
        }
    }
    rec(0, 0, cod as usize, &mut values, &mut out, cod);
    out
}

/// Surjective monotone maps `[dom] -> [cod]`.
pub fn degeneracy_operators(dom: i32, cod: i32) -> Vec<SimplicialOperator> {
    monotone_maps(dom, cod).into_iter().filter(|a| a.is_degeneracy()).collect()
}

/// Injective monotone maps `[dom] -> [cod]`.
pub fn face_operators(dom: i32, cod: i32) -> Vec<SimplicialOperator> {
    if dom > cod {
        return Vec::new();
    }
    monotone_maps(dom, cod).into_iter().filter(|a| a.is_face()).collect()
}

/// A non-degenerate `(n+m)`-simplex `⟨α;β⟩` of `Δ[n]×Δ[m]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Shuffle {
    pub n: usize,
    pub m: usize,
    pub alpha: SimplicialOperator,
    pub beta: SimplicialOperator,
}

impl Shuffle {
    /// The plateau operator `γ : [n-1] -> [m]` with `γ(i) = α^r(i) - i`.
    pub fn gamma(&self) -> SimplicialOperator {
        let right = adjoints(&self.alpha).right.expect("shuffle projections are degeneracies");
        SimplicialOperator {
            cod: self.m as i32,
            values: (0..self.n).map(|i| right.values[i] - i).collect(),
        }
    }

    pub fn is_valid(&self) -> bool {
        let top = (self.n + self.m) as i32;
        self.alpha.dom() == top
            && self.beta.dom() == top
            && self.alpha.cod() == self.n as i32
            && self.beta.cod() == self.m as i32
            && self.alpha.is_degeneracy()
            && self.beta.is_degeneracy()
            && (0..=self.n + self.m).all(|j| self.alpha.values[j] + self.beta.values[j] == j)
    }
}

/// The shuffle associated with `γ : [n-1] -> [m]`, extended by `γ(n) = m`.
pub fn shuffle_of_operator(gamma: &SimplicialOperator) -> Shuffle {
    let n = (gamma.dom() + 1) as usize;
    let m = gamma.cod.max(0) as usize;
    let plateau = |i: usize| if i < n { gamma.values[i] } else { m };
    // α^r(i) = i + γ(i); α is its left adjoint
    let alpha_r: Vec<usize> = (0..=n).map(|i| i + plateau(i)).collect();
    let alpha: Vec<usize> = (0..=n + m).map(|j| alpha_r.iter().position(|&a| j <= a).unwrap()).collect();
    let beta: Vec<usize> = alpha.iter().enumerate().map(|(j, &a)| j - a).collect();
    Shuffle {
        n,
        m,
        alpha: SimplicialOperator { cod: n as i32, values: alpha },
        beta: SimplicialOperator { cod: m as i32, values: beta },
    }
}

/// All shuffles of `Δ[n]×Δ[m]`, ordered lexicographically by their plateau operators.
pub fn enumerate_shuffles(n: usize, m: usize) -> Vec<Shuffle> {
    monotone_maps(n as i32 - 1, m as i32).iter().map(shuffle_of_operator).collect()
}

/// The pointwise-largest `γ : [n-1] -> [m]` whose shuffle has `⟨α;β⟩` as a face.
pub fn max_operator_of_simplex(alpha: &SimplicialOperator, beta: &SimplicialOperator) -> SimplicialOperator {
    let n = alpha.cod.max(0) as usize;
    let m = beta.cod.max(0) as usize;
    let values = (0..n)
        .map(|i| {
            alpha
                .values
                .iter()
                .zip(&beta.values)
                .filter(|(&a, _)| a > i)
                .map(|(_, &b)| b)
                .min()
                .unwrap_or(m)
        })
        .collect();
    SimplicialOperator { cod: m as i32, values }
}

/// The plateau inequalities `γ(α(l)-1) <= β(l) <= γ(α(l))` for every vertex `l`.
pub fn is_face_of_shuffle(alpha: &SimplicialOperator, beta: &SimplicialOperator, gamma: &SimplicialOperator) -> bool {
    let n = (gamma.dom() + 1) as usize;
    let m = gamma.cod.max(0) as usize;
    let level = |i: isize| -> usize {
        if i < 0 {
            0
        } else if (i as usize) < n {
            gamma.values[i as usize]
        } else {
            m
        }
    };
    alpha.values.iter().zip(&beta.values).all(|(&a, &b)| level(a as isize - 1) <= b && b <= level(a as isize))
}
