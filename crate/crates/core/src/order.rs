//! Immersion types, the `leq` decision engine and order graphs.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::{pullback, two_adic_exponent, CyclicHom, CyclicMod2Class};
use crate::exec::Execution;
pub use crate::james::{GroupFamily, W2};
use crate::james::{fundamental_class_group, realizable_classes, validate_normal_type};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("invalid immersion type: {0}")]
    InvalidType(String),
    #[error("{a} <= {b} is not decided: {reason}")]
    UndecidablePair { a: String, b: String, reason: String },
    #[error("relation is not transitive: {0} <= {1} <= {2} but not {0} <= {2}")]
    NotTransitive(String, String, String),
    #[error("first-principles comparison needs two orientable almost spin, non-spin cyclic types")]
    UnsupportedPair,
    #[error("malformed DOT: {0}")]
    Dot(String),
}

pub type Result<T> = std::result::Result<T, OrderError>;

/// `(π, w1, w2, ±c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawType", into = "RawType")]
pub struct ImmersionType {
    group: GroupFamily,
    w1: bool,
    w2: W2,
    c: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawType {
    group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    w1: u8,
    w2: String,
    c: i64,
}

impl TryFrom<RawType> for ImmersionType {
    type Error = OrderError;

    fn try_from(raw: RawType) -> Result<Self> {
        let group = match (raw.group.as_str(), raw.n) {
            ("trivial", None) => GroupFamily::Trivial,
            ("cyclic", Some(n)) => GroupFamily::Cyclic(n),
            ("cyclic", None) => return Err(OrderError::InvalidType("cyclic group needs \"n\"".into())),
            ("Z", None) => GroupFamily::InfiniteCyclic,
            ("Z4", None) => GroupFamily::FreeAbelian4,
            (g, Some(_)) if ["trivial", "Z", "Z4"].contains(&g) => {
                return Err(OrderError::InvalidType(format!("\"n\" is only allowed for cyclic groups, not {g}")))
            }
            (g, _) => return Err(OrderError::InvalidType(format!("unknown group {g:?}"))),
        };
        let w1 = match raw.w1 {
            0 => false,
            1 => true,
            x => return Err(OrderError::InvalidType(format!("w1 must be 0 or 1, got {x}"))),
        };
        let w2 = W2::parse(&raw.w2).ok_or_else(|| OrderError::InvalidType(format!("unknown w2 {:?}", raw.w2)))?;
        ImmersionType::new(group, w1, w2, raw.c)
    }
}

impl From<ImmersionType> for RawType {
    fn from(t: ImmersionType) -> Self {
        let (group, n) = match t.group {
            GroupFamily::Trivial => ("trivial", None),
            GroupFamily::Cyclic(n) => ("cyclic", Some(n)),
            GroupFamily::InfiniteCyclic => ("Z", None),
            GroupFamily::FreeAbelian4 => ("Z4", None),
        };
        RawType { group: group.into(), n, w1: u8::from(t.w1), w2: t.w2.token().into(), c: t.c }
    }
}

impl ImmersionType {
    /// Validates the type; `c` is stored up to sign.
    pub fn new(group: GroupFamily, w1: bool, w2: W2, c: i64) -> Result<Self> {
        if let GroupFamily::Cyclic(n) = group {
            if n < 2 {
                return Err(OrderError::InvalidType(format!("cyclic groups need order >= 2, got {n}")));
            }
        }
        let invalid = |e: crate::james::JamesError| OrderError::InvalidType(e.to_string());
        validate_normal_type(group, w1, w2).map_err(invalid)?;
        let c = c.checked_abs().ok_or_else(|| OrderError::InvalidType("c out of range".into()))?;
        let ambient = fundamental_class_group(group, w1).map_err(invalid)?;
        if ambient.free_rank() == 0 {
            let order: BigInt = ambient.torsion().iter().product();
            if BigInt::from(c) >= order {
                return Err(OrderError::InvalidType(format!("c = {c} is not a canonical element of {ambient}")));
            }
        }
        let set = realizable_classes(group, w1, w2).map_err(invalid)?;
        let coords: Vec<BigInt> = if ambient.generator_count() == 0 { Vec::new() } else { vec![BigInt::from(c)] };
        if !set.admits(&coords).map_err(invalid)? {
            return Err(OrderError::InvalidType(format!(
                "c = {c} is not realized for ({group}, w1 = {}, w2 = {w2}): realizable classes are {}",
                u8::from(w1),
                set.subgroup()
            )));
        }
        Ok(Self { group, w1, w2, c })
    }

    pub fn s4() -> Self {
        Self { group: GroupFamily::Trivial, w1: false, w2: W2::Zero, c: 0 }
    }

    pub fn cp2() -> Self {
        Self { group: GroupFamily::Trivial, w1: false, w2: W2::Infinity, c: 0 }
    }

    pub fn s1xts3() -> Self {
        Self { group: GroupFamily::InfiniteCyclic, w1: true, w2: W2::Zero, c: 0 }
    }

    pub fn s1xts3_cp2() -> Self {
        Self { group: GroupFamily::InfiniteCyclic, w1: true, w2: W2::Infinity, c: 0 }
    }

    /// `M(2^m)`: orientable, almost spin, non-spin, `π = Z/2^m`.
    pub fn m(exponent: u32) -> Result<Self> {
        Self::new(GroupFamily::Cyclic(1usize << exponent), false, W2::One, 0)
    }

    /// `N(2^m, w2, c)`: non-orientable with `π = Z/2^m`.
    pub fn n(exponent: u32, w2: W2, c: i64) -> Result<Self> {
        Self::new(GroupFamily::Cyclic(1usize << exponent), true, w2, c)
    }

    pub fn z4(w2: W2, c: i64) -> Result<Self> {
        Self::new(GroupFamily::FreeAbelian4, false, w2, c)
    }

    pub fn group(&self) -> GroupFamily {
        self.group
    }

    pub fn w1(&self) -> bool {
        self.w1
    }

    pub fn w2(&self) -> W2 {
        self.w2
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn is_spin(&self) -> bool {
        !self.w1 && self.w2 == W2::Zero
    }

    /// Representative of the immersion-equivalence class that the special
    /// rules identify: odd factors stripped, spin types sent to `S4`,
    /// orientable non-almost-spin types sent to `CP2`, non-orientable
    /// `w2 = 0` types over `Z` sent to `S1xtS3`, `Z^4` types with
    /// `w2 = e12` sent to `c = 0`.
    pub fn canonicalize(&self) -> Self {
        let mut t = *self;
        if let GroupFamily::Cyclic(n) = t.group {
            let two_part = 1usize << two_adic_exponent(n);
            t.group = if two_part == 1 { GroupFamily::Trivial } else { GroupFamily::Cyclic(two_part) };
        }
        if t.is_spin() {
            return Self::s4();
        }
        if !t.w1 && t.w2 == W2::Infinity {
            return Self::cp2();
        }
        if t.w1 && t.w2 == W2::Zero && t.group == GroupFamily::InfiniteCyclic {
            return Self::s1xts3();
        }
        if t.group == GroupFamily::FreeAbelian4 && t.w2 == W2::E12 {
            t.c = 0;
        }
        t.c = t.c.abs();
        t
    }

    fn cyclic_exponent(&self) -> Option<u32> {
        match self.group {
            GroupFamily::Cyclic(n) => Some(two_adic_exponent(n)),
            _ => None,
        }
    }

    fn w1_lifts_integrally(&self) -> bool {
        !self.w1 || self.group == GroupFamily::InfiniteCyclic
    }

    /// DOT node identifier of the canonical form.
    pub fn dot_id(&self) -> String {
        let t = self.canonicalize();
        if t == Self::s4() {
            return "S4".into();
        }
        if t == Self::cp2() {
            return "CP2".into();
        }
        if t == Self::s1xts3() {
            return "S1xtS3".into();
        }
        if t == Self::s1xts3_cp2() {
            return "S1xtS3_CP2".into();
        }
        match (t.group, t.w1) {
            (GroupFamily::Cyclic(n), false) => format!("M_{}", two_adic_exponent(n)),
            (GroupFamily::Cyclic(n), true) => format!("N_{}_{}_{}", two_adic_exponent(n), t.w2.token(), t.c),
            (GroupFamily::FreeAbelian4, _) => format!("Z4_{}_{}", t.w2.token().replace('+', ""), t.c),
            _ => format!("T_{:?}", t).replace(|ch: char| !ch.is_ascii_alphanumeric(), "_"),
        }
    }

    /// Human-readable name of the canonical form.
    pub fn label(&self) -> String {
        let t = self.canonicalize();
        match t.dot_id().as_str() {
            "S4" => "S4".into(),
            "CP2" => "CP2".into(),
            "S1xtS3" => "S1xtS3".into(),
            "S1xtS3_CP2" => "S1xtS3#CP2".into(),
            _ => match (t.group, t.w1) {
                (GroupFamily::Cyclic(n), false) => format!("M(2^{})", two_adic_exponent(n)),
                (GroupFamily::Cyclic(n), true) => format!("N(2^{},{},{})", two_adic_exponent(n), t.w2, t.c),
                (GroupFamily::FreeAbelian4, _) => format!("Z4({},{})", t.w2, t.c),
                _ => format!("({}, {}, {}, {})", t.group, u8::from(t.w1), t.w2, t.c),
            },
        }
    }
}

impl fmt::Display for ImmersionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, w1={}, w2={}, c={})", self.group, u8::from(self.w1), self.w2, self.c)
    }
}

/// Rules of the decision engine, in the order they are tried.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Equal,
    S4Minimum,
    BelowS4,
    BelowCp2,
    AboveCp2,
    AboveS1xtS3,
    BelowS1xtS3,
    Orientability,
    OrientableCyclicChain,
    NonOrientableCyclic(u8),
    OrientableIntoNonOrientable,
    Z4E12,
    Z4E12PlusE34,
    NotCovered,
    FirstPrinciples,
}

impl Rule {
    /// Every rule the engine can cite.
    pub fn all() -> Vec<Rule> {
        let mut out = vec![
            Rule::Equal,
            Rule::S4Minimum,
            Rule::BelowS4,
            Rule::BelowCp2,
            Rule::AboveCp2,
            Rule::AboveS1xtS3,
            Rule::BelowS1xtS3,
            Rule::Orientability,
            Rule::OrientableCyclicChain,
        ];
        out.extend((1..=5).map(Rule::NonOrientableCyclic));
        out.extend([
            Rule::OrientableIntoNonOrientable,
            Rule::Z4E12,
            Rule::Z4E12PlusE34,
            Rule::NotCovered,
            Rule::FirstPrinciples,
        ]);
        out
    }

    pub fn id(&self) -> String {
        match self {
            Rule::Equal => "equal-after-canonicalization".into(),
            Rule::S4Minimum => "S4-minimum".into(),
            Rule::BelowS4 => "below-S4-iff-spin".into(),
            Rule::BelowCp2 => "below-CP2-iff-orientable".into(),
            Rule::AboveCp2 => "above-CP2-iff-not-almost-spin".into(),
            Rule::AboveS1xtS3 => "above-S1xtS3-iff-nonorientable".into(),
            Rule::BelowS1xtS3 => "below-S1xtS3-iff-w2-zero-and-w1-lifts".into(),
            Rule::Orientability => "orientable-target-forces-orientable-source".into(),
            Rule::OrientableCyclicChain => "orientable-cyclic-chain".into(),
            Rule::NonOrientableCyclic(i) => format!("nonorientable-cyclic-{i}"),
            Rule::OrientableIntoNonOrientable => "orientable-into-nonorientable-cyclic".into(),
            Rule::Z4E12 => "z4-e12-below-nonspin".into(),
            Rule::Z4E12PlusE34 => "z4-e12+e34-multiple".into(),
            Rule::NotCovered => "not-covered".into(),
            Rule::FirstPrinciples => "first-principles-pullback".into(),
        }
    }

    /// The mathematical statement the rule encodes.
    pub fn statement(&self) -> &'static str {
        match self {
            Rule::Equal => "types with equal canonical forms are immersion equivalent",
            Rule::S4Minimum => "S^4 immerses (punctured) into every 4-manifold",
            Rule::BelowS4 => "M <= S^4 iff M is spin",
            Rule::BelowCp2 => "M <= CP^2 iff M is orientable",
            Rule::AboveCp2 => "CP^2 <= M iff M is not almost spin",
            Rule::AboveS1xtS3 => "S^1 x~ S^3 <= M iff w1(M) != 0",
            Rule::BelowS1xtS3 => "M <= S^1 x~ S^3 iff w2(M) = 0 and w1(M) has an integral lift",
            Rule::Orientability => "a manifold immersing into an orientable one is orientable",
            Rule::OrientableCyclicChain => "M(2^k) <= M(2^n) iff k <= n",
            Rule::NonOrientableCyclic(1) => "N(2^k,w2,c) <= N(2^n,0,0) iff w2 = 0 and k >= n",
            Rule::NonOrientableCyclic(2) => "N(2^k,w2,c) <= N(2^n,1,0) iff (w2 = 0 and k > n) or equal",
            Rule::NonOrientableCyclic(3) => "N(2^k,w2,c) <= N(2^n,1,1) iff (w2 = 0 and k > n) or (w2 = 1 and k = n)",
            Rule::NonOrientableCyclic(4) => "N(2^k,w2,c) <= N(2^n,inf,0) iff c = 0 and k >= n",
            Rule::NonOrientableCyclic(_) => "N(2^k,w2,c) <= N(2^n,inf,1) iff k >= n and (k = n or c = 0)",
            Rule::OrientableIntoNonOrientable => "M(2^k) <= N(2^n,w2,c) iff (k < n and w2 = 1) or w2 = inf",
            Rule::Z4E12 => "for pi = Z^4 and w2(M) = e1e2: M <= N iff N is not spin",
            Rule::Z4E12PlusE34 => {
                "for pi = Z^4 and w2(M) = e1e2+e3e4: M <= N iff w2(N) = w2(M) and c(M) is a multiple of c(N)"
            }
            Rule::NotCovered => "no rule decides this pair",
            Rule::FirstPrinciples => "some a -> a^m pulls the nonzero class of H^2(-;Z/2) back nontrivially",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    True,
    False,
    Undetermined(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LeqVerdict {
    pub answer: Answer,
    pub trace: Vec<Rule>,
}

impl LeqVerdict {
    fn decided(value: bool, rule: Rule) -> Self {
        Self { answer: if value { Answer::True } else { Answer::False }, trace: vec![rule] }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self.answer {
            Answer::True => Some(true),
            Answer::False => Some(false),
            Answer::Undetermined(_) => None,
        }
    }
}

fn is_multiple(a: i64, b: i64) -> bool {
    if b == 0 {
        a == 0
    } else {
        a % b == 0
    }
}

/// Decides `A <= B`.
pub fn leq(a: &ImmersionType, b: &ImmersionType) -> LeqVerdict {
    use LeqVerdict as V;
    let (a, b) = (a.canonicalize(), b.canonicalize());
    let (s4, cp2, s1) = (ImmersionType::s4(), ImmersionType::cp2(), ImmersionType::s1xts3());
    if a == b {
        return V::decided(true, Rule::Equal);
    }
    if a == s4 {
        return V::decided(true, Rule::S4Minimum);
    }
    if b == s4 {
        return V::decided(a.is_spin(), Rule::BelowS4);
    }
    if b == cp2 {
        return V::decided(!a.w1, Rule::BelowCp2);
    }
    if a == cp2 {
        return V::decided(b.w2 == W2::Infinity, Rule::AboveCp2);
    }
    if a == s1 {
        return V::decided(b.w1, Rule::AboveS1xtS3);
    }
    if b == s1 {
        return V::decided(a.w2 == W2::Zero && a.w1_lifts_integrally(), Rule::BelowS1xtS3);
    }
    if a.w1 && !b.w1 {
        return V::decided(false, Rule::Orientability);
    }
    if let (Some(k), Some(n)) = (a.cyclic_exponent(), b.cyclic_exponent()) {
        match (a.w1, b.w1) {
            (false, false) => return V::decided(k <= n, Rule::OrientableCyclicChain),
            (true, true) => {
                let (w, c) = (a.w2, a.c);
                let (item, value) = match (b.w2, b.c) {
                    (W2::Zero, _) => (1, w == W2::Zero && k >= n),
                    (W2::One, 0) => (2, (w == W2::Zero && k > n) || a == b),
                    (W2::One, _) => (3, (w == W2::Zero && k > n) || (w == W2::One && k == n)),
                    (W2::Infinity, 0) => (4, c == 0 && k >= n),
                    _ => (5, k >= n && (k == n || c == 0)),
                };
                return V::decided(value, Rule::NonOrientableCyclic(item));
            }
            (false, true) => {
                let value = (k < n && b.w2 == W2::One) || b.w2 == W2::Infinity;
                return V::decided(value, Rule::OrientableIntoNonOrientable);
            }
            (true, false) => unreachable!("handled by the orientability rule"),
        }
    }
    if a.group == GroupFamily::FreeAbelian4 && b.group == GroupFamily::FreeAbelian4 {
        match a.w2 {
            W2::E12 => return V::decided(!b.is_spin(), Rule::Z4E12),
            W2::E12PlusE34 => {
                return V::decided(b.w2 == W2::E12PlusE34 && is_multiple(a.c, b.c), Rule::Z4E12PlusE34);
            }
            _ => {}
        }
    }
    V { answer: Answer::Undetermined("pair not covered by the known comparison rules".into()), trace: vec![Rule::NotCovered] }
}

pub fn equivalent(a: &ImmersionType, b: &ImmersionType) -> Result<bool> {
    let decide = |x: &ImmersionType, y: &ImmersionType| {
        let v = leq(x, y);
        match v.answer {
            Answer::Undetermined(reason) => Err(OrderError::UndecidablePair { a: x.label(), b: y.label(), reason }),
            Answer::True => Ok(true),
            Answer::False => Ok(false),
        }
    };
    Ok(decide(a, b)? && decide(b, a)?)
}

/// Decides `M(l1) <= M(l2)` by searching for `a -> a^m` with nonzero
/// pullback of the degree-2 generator, independently of the rule engine.
pub fn first_principles_leq_cyclic(a: &ImmersionType, b: &ImmersionType) -> Result<LeqVerdict> {
    let order = |t: &ImmersionType| match (t.group, t.w1, t.w2) {
        (GroupFamily::Cyclic(n), false, W2::One) => Ok(n),
        _ => Err(OrderError::UnsupportedPair),
    };
    let (l1, l2) = (order(a)?, order(b)?);
    let s = CyclicMod2Class::generator(l2, 2);
    let found = CyclicHom::all(l1, l2)
        .iter()
        .any(|phi| pullback(phi, &s).map(|x| x.value()).unwrap_or(false));
    Ok(LeqVerdict::decided(found, Rule::FirstPrinciples))
}

/// `S4 < M(2) < ... < M(2^max) < CP2`.
pub fn orientable_cyclic_family(max_exp: u32) -> Vec<ImmersionType> {
    let mut out = vec![ImmersionType::s4()];
    out.extend((1..=max_exp).map(|e| ImmersionType::m(e).expect("valid")));
    out.push(ImmersionType::cp2());
    out
}

/// The five `N(2^e, w2, c)` classes for each exponent.
pub fn nonorientable_cyclic_types(max_exp: u32) -> Vec<ImmersionType> {
    let mut out = Vec::new();
    for e in 1..=max_exp {
        for (w2, c) in [(W2::Zero, 0), (W2::One, 0), (W2::One, 1), (W2::Infinity, 0), (W2::Infinity, 1)] {
            out.push(ImmersionType::n(e, w2, c).expect("valid"));
        }
    }
    out
}

/// Non-orientable cyclic classes together with `S1xtS3`.
pub fn nonorientable_cyclic_family(max_exp: u32) -> Vec<ImmersionType> {
    let mut out = vec![ImmersionType::s1xts3()];
    out.extend(nonorientable_cyclic_types(max_exp));
    out
}

/// All classes with fundamental group `1` or `Z/2^e`, `e <= max_exp`.
pub fn combined_cyclic_family(max_exp: u32) -> Vec<ImmersionType> {
    let mut out = orientable_cyclic_family(max_exp);
    out.extend(nonorientable_cyclic_types(max_exp));
    out
}

/// Every valid type with trivial or cyclic group of order `<= max_order`.
pub fn all_cyclic_types(max_order: usize) -> Vec<ImmersionType> {
    let mut groups = vec![GroupFamily::Trivial];
    groups.extend((2..=max_order).map(GroupFamily::Cyclic));
    all_types_over(&groups, 1)
}

/// Every valid type over `Z^4` with `0 <= c <= max_c`, plus `S4` and `CP2`.
pub fn z4_family(max_c: i64) -> Vec<ImmersionType> {
    let mut out = vec![ImmersionType::s4(), ImmersionType::cp2()];
    out.extend(all_types_over(&[GroupFamily::FreeAbelian4], max_c));
    out
}

fn all_types_over(groups: &[GroupFamily], max_c: i64) -> Vec<ImmersionType> {
    let mut out = Vec::new();
    for &g in groups {
        for w1 in [false, true] {
            for w2 in [W2::Zero, W2::One, W2::Infinity, W2::E12, W2::E12PlusE34] {
                for c in 0..=max_c {
                    if let Ok(t) = ImmersionType::new(g, w1, w2, c) {
                        out.push(t);
                    }
                }
            }
        }
    }
    out
}

/// Hasse diagram of the order on equivalence classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderGraph {
    /// One representative per class, in a deterministic order.
    pub nodes: Vec<ImmersionType>,
    /// `(i, j)`: `nodes[i] < nodes[j]` with nothing strictly between.
    pub edges: Vec<(usize, usize)>,
    /// `strict[i][j]`: `nodes[i] < nodes[j]`.
    pub strict: Vec<Vec<bool>>,
}

impl OrderGraph {
    pub fn edge_ids(&self) -> BTreeSet<(String, String)> {
        self.edges.iter().map(|&(i, j)| (self.nodes[i].dot_id(), self.nodes[j].dot_id())).collect()
    }
}

/// `leq(types[i], types[j])` for all pairs.
pub fn leq_matrix(types: &[ImmersionType], exec: Execution) -> Vec<Vec<LeqVerdict>> {
    let n = types.len();
    let flat = exec.map_range(n * n, |k| leq(&types[k / n], &types[k % n]));
    flat.chunks(n.max(1)).map(<[LeqVerdict]>::to_vec).take(n).collect()
}

pub fn order_graph(types: &[ImmersionType]) -> Result<OrderGraph> {
    order_graph_with(types, Execution::default())
}

pub fn order_graph_with(types: &[ImmersionType], exec: Execution) -> Result<OrderGraph> {
    let canon: BTreeSet<ImmersionType> = types.iter().map(ImmersionType::canonicalize).collect();
    let canon: Vec<ImmersionType> = canon.into_iter().collect();
    let n = canon.len();
    let verdicts = leq_matrix(&canon, exec);
    let mut le = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            le[i][j] = match &verdicts[i][j].answer {
                Answer::True => true,
                Answer::False => false,
                Answer::Undetermined(reason) => {
                    return Err(OrderError::UndecidablePair {
                        a: canon[i].label(),
                        b: canon[j].label(),
                        reason: reason.clone(),
                    })
                }
            };
        }
    }
    // one representative per class: the first index in its class
    let reps: Vec<usize> = (0..n).filter(|&i| (0..i).all(|j| !(le[i][j] && le[j][i]))).collect();
    let m = reps.len();
    let rel: Vec<Vec<bool>> = reps.iter().map(|&i| reps.iter().map(|&j| le[i][j]).collect()).collect();
    for i in 0..m {
        if !rel[i][i] {
            return Err(OrderError::InvalidType(format!("{} is not below itself", canon[reps[i]].label())));
        }
    }
    let check_triples = exec.map_range(m, |i| {
        for j in 0..m {
            for k in 0..m {
                if rel[i][j] && rel[j][k] && !rel[i][k] {
                    return Some((i, j, k));
                }
            }
        }
        None
    });
    if let Some((i, j, k)) = check_triples.into_iter().flatten().next() {
        let name = |x: usize| canon[reps[x]].label();
        return Err(OrderError::NotTransitive(name(i), name(j), name(k)));
    }
    let strict: Vec<Vec<bool>> = (0..m).map(|i| (0..m).map(|j| i != j && rel[i][j]).collect()).collect();
    let edges: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .filter(|&(i, j)| strict[i][j] && !(0..m).any(|k| strict[i][k] && strict[k][j]))
        .collect();
    Ok(OrderGraph { nodes: reps.iter().map(|&i| canon[i]).collect(), edges, strict })
}

/// Directed graph; an edge `A -> B` means `A < B`.
pub fn emit_dot(graph: &OrderGraph) -> String {
    let mut out = String::from("digraph immersion_order {\n  rankdir=LR;\n");
    for t in &graph.nodes {
        out.push_str(&format!("  {} [label=\"{}\"];\n", t.dot_id(), t.label()));
    }
    for &(i, j) in &graph.edges {
        out.push_str(&format!("  {} -> {} [label=\"<\"];\n", graph.nodes[i].dot_id(), graph.nodes[j].dot_id()));
    }
    out.push_str("}\n");
    out
}

/// Parses the subset of DOT written by [`emit_dot`]: node ids and edges.
pub fn parse_dot(text: &str) -> Result<(BTreeSet<String>, BTreeSet<(String, String)>)> {
    let ident = |s: &str| -> Result<String> {
        let s = s.trim();
        if !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            Ok(s.to_string())
        } else {
            Err(OrderError::Dot(format!("bad identifier {s:?}")))
        }
    };
    let body = text
        .trim()
        .strip_prefix("digraph")
        .and_then(|r| r.split_once('{'))
        .and_then(|(_, r)| r.trim_end().strip_suffix('}'))
        .ok_or_else(|| OrderError::Dot("expected `digraph name { ... }`".into()))?;
    let mut nodes = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for stmt in body.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let head = stmt.split_once('[').map_or(stmt, |(h, _)| h).trim();
        if head.contains('=') {
            continue;
        }
        if let Some((from, to)) = head.split_once("->") {
            let (from, to) = (ident(from)?, ident(to)?);
            nodes.insert(from.clone());
            nodes.insert(to.clone());
            edges.insert((from, to));
        } else {
            nodes.insert(ident(head)?);
        }
    }
    Ok((nodes, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(g: GroupFamily, w1: bool, w2: W2, c: i64) -> ImmersionType {
        ImmersionType::new(g, w1, w2, c).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(
            t(GroupFamily::Cyclic(12), false, W2::One, 0).canonicalize(),
            t(GroupFamily::Cyclic(4), false, W2::One, 0)
        );
        assert_eq!(t(GroupFamily::InfiniteCyclic, false, W2::Zero, 0).canonicalize(), ImmersionType::s4());
        assert_eq!(t(GroupFamily::Cyclic(2), false, W2::Infinity, 0).canonicalize(), ImmersionType::cp2());
        assert_eq!(t(GroupFamily::InfiniteCyclic, true, W2::Zero, 0).canonicalize(), ImmersionType::s1xts3());
    }

    #[test]
    fn invalid_types_are_rejected() {
        assert!(ImmersionType::new(GroupFamily::Cyclic(4), true, W2::Zero, 1).is_err());
        assert!(ImmersionType::new(GroupFamily::Cyclic(4), false, W2::One, 1).is_err());
        assert!(ImmersionType::new(GroupFamily::FreeAbelian4, false, W2::E12PlusE34, 3).is_err());
        assert!(ImmersionType::new(GroupFamily::Cyclic(1), false, W2::Zero, 0).is_err());
        assert!(ImmersionType::new(GroupFamily::Cyclic(4), true, W2::One, 2).is_err());
        assert!(ImmersionType::new(GroupFamily::Cyclic(4), true, W2::One, 1).is_ok());
    }

    #[test]
    fn leq_examples() {
        let m2 = ImmersionType::m(1).unwrap();
        let m4 = ImmersionType::m(2).unwrap();
        assert_eq!(leq(&m2, &m4).as_bool(), Some(true));
        assert_eq!(leq(&m4, &m2).as_bool(), Some(false));
        let n400 = ImmersionType::n(2, W2::Zero, 0).unwrap();
        let n200 = ImmersionType::n(1, W2::Zero, 0).unwrap();
        assert_eq!(leq(&n400, &n200).as_bool(), Some(true));
        let z4 = ImmersionType::z4(W2::E12PlusE34, 4).unwrap();
        let z2 = ImmersionType::z4(W2::E12PlusE34, 2).unwrap();
        assert_eq!(leq(&z4, &z2).as_bool(), Some(true));
        assert_eq!(leq(&z2, &z4).as_bool(), Some(false));
        let v = leq(&ImmersionType::s4(), &m4);
        assert_eq!(v.trace, vec![Rule::S4Minimum]);
    }

    #[test]
    fn equivalences() {
        let n6 = t(GroupFamily::Cyclic(6), true, W2::One, 1);
        let n2 = t(GroupFamily::Cyclic(2), true, W2::One, 1);
        assert!(equivalent(&n6, &n2).unwrap());
        assert!(equivalent(&ImmersionType::s4(), &t(GroupFamily::Cyclic(2), false, W2::Zero, 0)).unwrap());
        let z4 = ImmersionType::z4(W2::E12, 0).unwrap();
        assert!(equivalent(&z4, &ImmersionType::m(1).unwrap()).is_err());
    }

    #[test]
    fn first_principles_examples() {
        let m = |n| t(GroupFamily::Cyclic(n), false, W2::One, 0);
        assert_eq!(first_principles_leq_cyclic(&m(4), &m(2)).unwrap().as_bool(), Some(false));
        assert_eq!(first_principles_leq_cyclic(&m(2), &m(4)).unwrap().as_bool(), Some(true));
        assert_eq!(first_principles_leq_cyclic(&m(6), &m(2)).unwrap().as_bool(), Some(true));
        assert_eq!(
            first_principles_leq_cyclic(&ImmersionType::s4(), &m(2)),
            Err(OrderError::UnsupportedPair)
        );
    }

    #[test]
    fn orientable_chain() {
        let g = order_graph(&orientable_cyclic_family(3)).unwrap();
        let ids: Vec<(String, String)> = g.edge_ids().into_iter().collect();
        let mut expect = vec![
            ("S4".to_string(), "M_1".to_string()),
            ("M_1".into(), "M_2".into()),
            ("M_2".into(), "M_3".into()),
            ("M_3".into(), "CP2".into()),
        ];
        expect.sort();
        assert_eq!(ids, expect);
    }

    #[test]
    fn single_node() {
        let g = order_graph(&[ImmersionType::cp2()]).unwrap();
        assert_eq!(g.nodes.len(), 1);
        assert!(g.edges.is_empty());
    }

    #[test]
    fn dot_round_trip() {
        let g = order_graph(&combined_cyclic_family(2)).unwrap();
        let dot = emit_dot(&g);
        let (nodes, edges) = parse_dot(&dot).unwrap();
        assert_eq!(edges, g.edge_ids());
        assert_eq!(nodes.len(), g.nodes.len());
        assert!(dot.contains("label=\"<\""));
    }

    #[test]
    fn json_round_trip() {
        let ty = t(GroupFamily::Cyclic(4), true, W2::Infinity, 1);
        let s = serde_json::to_string(&ty).unwrap();
        assert_eq!(s, r#"{"group":"cyclic","n":4,"w1":1,"w2":"inf","c":1}"#);
        assert_eq!(serde_json::from_str::<ImmersionType>(&s).unwrap(), ty);
        assert!(serde_json::from_str::<ImmersionType>(r#"{"group":"Z4","w1":1,"w2":"0","c":0}"#).is_err());
    }
}
