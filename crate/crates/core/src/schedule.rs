//! Abstract combine/fan-out schedules for the five parallel prefix trees.
//!
//! A schedule is gate-set independent: it says which (g, p) spans combine at
//! which level and where an operand feeds several nodes of the same layer
//! (the fan-out a classical wire would provide for free). The synthesizer
//! lowers a schedule to gates; the fan-out plan here covers same-layer
//! sharing only, while read/write hazards between a level's nodes are the
//! synthesizer's business (it relocates values instead of copying them).

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tree {
    BrentKung,
    Sklansky,
    KoggeStone,
    HanCarlson,
    LadnerFischer,
}

impl Tree {
    pub const ALL: [Tree; 5] = [
        Tree::BrentKung,
        Tree::Sklansky,
        Tree::KoggeStone,
        Tree::HanCarlson,
        Tree::LadnerFischer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Tree::BrentKung => "brent-kung",
            Tree::Sklansky => "sklansky",
            Tree::KoggeStone => "kogge-stone",
            Tree::HanCarlson => "han-carlson",
            Tree::LadnerFischer => "ladner-fischer",
        }
    }

    pub fn parse(s: &str) -> Option<Tree> {
        Some(match s {
            "brent-kung" | "bk" => Tree::BrentKung,
            "sklansky" => Tree::Sklansky,
            "kogge-stone" | "ks" => Tree::KoggeStone,
            "han-carlson" | "hc" => Tree::HanCarlson,
            "ladner-fischer" | "lf" => Tree::LadnerFischer,
            _ => return None,
        })
    }
}

/// Inclusive index range `[lo, hi]` of input bit positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub lo: u32,
    pub hi: u32,
}

impl Span {
    pub fn new(lo: u32, hi: u32) -> Self {
        debug_assert!(lo <= hi);
        Span { lo, hi }
    }

    pub fn leaf(i: u32) -> Self {
        Span { lo: i, hi: i }
    }

    pub fn is_leaf(self) -> bool {
        self.lo == self.hi
    }

    pub fn width(self) -> u32 {
        self.hi - self.lo + 1
    }
}

/// One application of the prefix combine operator.
///
/// `hi_span` sits immediately above `lo_span`; the output covers both and is
/// held at position `hi_span.hi`. `needs_p_output` records whether the
/// combined P product must be materialized for later levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixNode {
    pub level: u32,
    pub hi_span: Span,
    pub lo_span: Span,
    pub needs_p_output: bool,
}

impl PrefixNode {
    pub fn out_span(&self) -> Span {
        Span::new(self.lo_span.lo, self.hi_span.hi)
    }

    /// Position whose value is transformed by this node.
    pub fn hi_pos(&self) -> u32 {
        self.hi_span.hi
    }

    /// Position holding the low-side operand.
    pub fn lo_pos(&self) -> u32 {
        self.lo_span.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperandKind {
    P,
    G,
}

/// A same-layer sharing point: `copies` extra CNOT copies of the operand are
/// required so the consuming gates can occupy one layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanoutOp {
    pub level: u32,
    pub span: Span,
    pub kind: OperandKind,
    pub copies: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub nodes: Vec<PrefixNode>,
    pub fanouts: Vec<FanoutOp>,
}

/// Leveled plan for one prefix tree of width `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrefixSchedule {
    pub tree: Tree,
    pub n: u32,
    pub levels: Vec<Level>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScheduleError {
    #[error("width {0} is not supported: n must be a power of two >= 2")]
    UnsupportedWidth(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    MissingCarry { index: u32 },
    DuplicateProducer { span: Span },
    BadSpanAlgebra { level: u32, hi: Span, lo: Span },
    OperandConflict { level: u32, span: Span, kind: OperandKind },
    UnknownOperand { level: u32, span: Span },
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Diagnostic::MissingCarry { index } => write!(f, "missing carry G[0:{index}]"),
            Diagnostic::DuplicateProducer { span } => {
                write!(f, "duplicate producer for span [{}:{}]", span.hi, span.lo)
            }
            Diagnostic::BadSpanAlgebra { level, hi, lo } => write!(
                f,
                "level {level}: spans [{}:{}] and [{}:{}] are not adjacent",
                hi.hi, hi.lo, lo.hi, lo.lo
            ),
            Diagnostic::OperandConflict { level, span, kind } => write!(
                f,
                "level {level}: {kind:?} operand [{}:{}] shared beyond its fan-out plan",
                span.hi, span.lo
            ),
            Diagnostic::UnknownOperand { level, span } => write!(
                f,
                "level {level}: operand [{}:{}] was never produced",
                span.hi, span.lo
            ),
        }
    }
}

fn require_power_of_two(n: u32) -> Result<u32, ScheduleError> {
    if n < 2 || !n.is_power_of_two() {
        return Err(ScheduleError::UnsupportedWidth(n));
    }
    Ok(n.trailing_zeros())
}

/// Build the combine schedule for `tree` over `n = 2^k` input positions.
///
/// Level and node counts of the result are pinned by closed forms per tree
/// (see `formulas::tree_shape`); the functional contract is that evaluating
/// the nodes over the carry semiring yields every prefix G[0:i].
pub fn build_schedule(tree: Tree, n: u32) -> Result<PrefixSchedule, ScheduleError> {
    let k = require_power_of_two(n)?;
    let mut levels: Vec<Vec<PrefixNode>> = Vec::new();
    let mut push = |level: u32, hi_span: Span, lo_span: Span| {
        let idx = (level - 1) as usize;
        while levels.len() <= idx {
            levels.push(Vec::new());
        }
        levels[idx].push(PrefixNode {
            level,
            hi_span,
            lo_span,
            needs_p_output: false,
        });
    };

    match tree {
        Tree::Sklansky => {
            for level in 1..=k {
                let block = 1u32 << level;
                let half = block >> 1;
                for start in (0..n).step_by(block as usize) {
                    let mid = start + half;
                    for i in mid..start + block {
                        push(level, Span::new(mid, i), Span::new(start, mid - 1));
                    }
                }
            }
        }
        Tree::KoggeStone => {
            for level in 1..=k {
                let d = 1u32 << (level - 1);
                for i in d..n {
                    let hi_lo = i.saturating_sub(d - 1);
                    let lo_hi = i - d;
                    let lo_lo = lo_hi.saturating_sub(d - 1);
                    push(level, Span::new(hi_lo, i), Span::new(lo_lo, lo_hi));
                }
            }
        }
        Tree::BrentKung => {
            // Reduction sweep, then the distribution sweep with its first
            // step folded into the last reduction level.
            for level in 1..=k {
                let block = 1u32 << level;
                let half = block >> 1;
                let mut i = block - 1;
                while i < n {
                    push(
                        level,
                        Span::new(i - half + 1, i),
                        Span::new(i + 1 - block, i - half),
                    );
                    i += block;
                }
            }
            for t in (1..k).rev() {
                let step = 1u32 << t;
                let half = step >> 1;
                let level = 2 * k - 1 - t;
                for m in 1..n / step {
                    let i = m * step + half - 1;
                    push(level, Span::new(m * step, i), Span::new(0, m * step - 1));
                }
            }
        }
        Tree::HanCarlson => {
            // Pair reduction onto odd positions, Kogge-Stone among the odd
            // positions, then one fix-up level for the even positions.
            for i in (1..n).step_by(2) {
                push(1, Span::leaf(i), Span::leaf(i - 1));
            }
            for j in 1..k {
                let d = 1u32 << j; // actual index distance
                for oi in (1u32 << (j - 1))..n / 2 {
                    let i = 2 * oi + 1;
                    let hi_lo = i + 1 - d;
                    let lo_hi = i - d;
                    let lo_lo = if lo_hi + 1 >= d { lo_hi + 1 - d } else { 0 };
                    push(j + 1, Span::new(hi_lo, i), Span::new(lo_lo, lo_hi));
                }
            }
            for i in (2..n).step_by(2) {
                push(k + 1, Span::leaf(i), Span::new(0, i - 1));
            }
        }
        Tree::LadnerFischer => {
            // Pair reduction, Sklansky among the odd positions, even fix-up.
            for i in (1..n).step_by(2) {
                push(1, Span::leaf(i), Span::leaf(i - 1));
            }
            let odds = n / 2;
            for j in 1..k {
                let block = 1u32 << j; // in odd-index space
                let half = block >> 1;
                for os in (0..odds).step_by(block as usize) {
                    let mid = os + half;
                    for oi in mid..os + block {
                        let i = 2 * oi + 1;
                        push(
                            j + 1,
                            Span::new(2 * mid, i),
                            Span::new(2 * os, 2 * mid - 1),
                        );
                    }
                }
            }
            for i in (2..n).step_by(2) {
                push(k + 1, Span::leaf(i), Span::new(0, i - 1));
            }
        }
    }

    let mut schedule = PrefixSchedule {
        tree,
        n,
        levels: levels
            .into_iter()
            .filter(|l| !l.is_empty())
            .map(|nodes| Level {
                nodes,
                fanouts: Vec::new(),
            })
            .collect(),
    };
    // Renumber levels densely in case filtering removed empties.
    for (idx, level) in schedule.levels.iter_mut().enumerate() {
        for node in &mut level.nodes {
            node.level = idx as u32 + 1;
        }
    }
    mark_p_outputs(&mut schedule);
    plan_fanouts(&mut schedule);
    Ok(schedule)
}

/// Decide which nodes must materialize their combined P product.
///
/// Brent-Kung uses the minimal closure (a P is produced only when some later
/// node reads it), which reproduces the published carry-lookahead costs it
/// is compared against. The other trees produce P for every span consumed by
/// any later node, the convention behind their published cost forms.
fn mark_p_outputs(schedule: &mut PrefixSchedule) {
    let minimal = schedule.tree == Tree::BrentKung;
    // Reverse sweep over levels, tracking which spans later levels demand.
    let mut hi_later: BTreeSet<Span> = BTreeSet::new();
    let mut lo_later: BTreeSet<Span> = BTreeSet::new();
    let mut lo_of_needed: BTreeSet<Span> = BTreeSet::new();
    for level in schedule.levels.iter_mut().rev() {
        for node in &mut level.nodes {
            let out = node.out_span();
            node.needs_p_output = if minimal {
                // Closure rule: P(out) needed only when read as a later hi
                // operand or by a later node that itself produces a P.
                hi_later.contains(&out) || lo_of_needed.contains(&out)
            } else {
                // Any later consumption demands the P product.
                hi_later.contains(&out) || lo_later.contains(&out)
            };
        }
        for node in &level.nodes {
            hi_later.insert(node.hi_span);
            lo_later.insert(node.lo_span);
            if node.needs_p_output {
                lo_of_needed.insert(node.lo_span);
            }
        }
    }
}

/// Record where one operand feeds several gates of the same layer.
///
/// G operands conflict within a level's generate layer; P operands conflict
/// within its propagate layer (each P-producing node reads the P of both of
/// its operand spans).
fn plan_fanouts(schedule: &mut PrefixSchedule) {
    for level in &mut schedule.levels {
        let mut g_readers: BTreeMap<Span, u32> = BTreeMap::new();
        let mut p_readers: BTreeMap<Span, u32> = BTreeMap::new();
        for node in &level.nodes {
            *g_readers.entry(node.lo_span).or_insert(0) += 1;
            if node.needs_p_output {
                *p_readers.entry(node.hi_span).or_insert(0) += 1;
                *p_readers.entry(node.lo_span).or_insert(0) += 1;
            }
        }
        let lvl = level.nodes.first().map_or(0, |n| n.level);
        let mut fanouts = Vec::new();
        for (span, readers) in g_readers {
            if readers > 1 {
                fanouts.push(FanoutOp {
                    level: lvl,
                    span,
                    kind: OperandKind::G,
                    copies: readers - 1,
                });
            }
        }
        for (span, readers) in p_readers {
            if readers > 1 {
                fanouts.push(FanoutOp {
                    level: lvl,
                    span,
                    kind: OperandKind::P,
                    copies: readers - 1,
                });
            }
        }
        level.fanouts = fanouts;
    }
}

impl PrefixSchedule {
    pub fn level_count(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn node_count(&self) -> u32 {
        self.levels.iter().map(|l| l.nodes.len() as u32).sum()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &PrefixNode> {
        self.levels.iter().flat_map(|l| l.nodes.iter())
    }

    /// The carries this schedule must produce: G[0:i] for 0 <= i < n.
    /// G[0:0] is the leaf g_0 and needs no node.
    pub fn required_carries(&self) -> impl Iterator<Item = Span> + '_ {
        (1..self.n).map(|i| Span::new(0, i))
    }
}

/// Structural validation: carry completeness, span adjacency, single
/// producers, and operand disjointness once fan-out copies are applied.
pub fn validate_schedule(schedule: &PrefixSchedule) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut produced: BTreeSet<Span> = (0..schedule.n).map(Span::leaf).collect();
    let mut producers: BTreeMap<Span, u32> = BTreeMap::new();

    for level in &schedule.levels {
        let lvl = level.nodes.first().map_or(0, |n| n.level);
        for node in &level.nodes {
            if node.lo_span.hi + 1 != node.hi_span.lo {
                diags.push(Diagnostic::BadSpanAlgebra {
                    level: lvl,
                    hi: node.hi_span,
                    lo: node.lo_span,
                });
            }
            for operand in [node.hi_span, node.lo_span] {
                if !produced.contains(&operand) {
                    diags.push(Diagnostic::UnknownOperand {
                        level: lvl,
                        span: operand,
                    });
                }
            }
        }
        // operand sharing vs. the fan-out plan
        let mut g_readers: BTreeMap<Span, u32> = BTreeMap::new();
        let mut p_readers: BTreeMap<Span, u32> = BTreeMap::new();
        for node in &level.nodes {
            *g_readers.entry(node.lo_span).or_insert(0) += 1;
            if node.needs_p_output {
                *p_readers.entry(node.hi_span).or_insert(0) += 1;
                *p_readers.entry(node.lo_span).or_insert(0) += 1;
            }
        }
        for (map, kind) in [(&g_readers, OperandKind::G), (&p_readers, OperandKind::P)] {
            for (&span, &readers) in map {
                let copies = level
                    .fanouts
                    .iter()
                    .find(|f| f.span == span && f.kind == kind)
                    .map_or(0, |f| f.copies);
                if readers > copies + 1 {
                    diags.push(Diagnostic::OperandConflict {
                        level: lvl,
                        span,
                        kind,
                    });
                }
            }
        }
        for node in &level.nodes {
            let out = node.out_span();
            *producers.entry(out).or_insert(0) += 1;
            produced.insert(out);
        }
    }

    for (span, count) in producers {
        if count > 1 {
            diags.push(Diagnostic::DuplicateProducer { span });
        }
    }
    for carry in schedule.required_carries() {
        if !produced.contains(&carry) {
            diags.push(Diagnostic::MissingCarry { index: carry.hi });
        }
    }
    diags
}

/// Evaluate the schedule over the classical (g, p) carry semiring.
/// Returns the carries c_1..c_n, i.e. G[0:i] for i = 0..n-1.
pub fn evaluate_carries(schedule: &PrefixSchedule, g: &[bool], p: &[bool]) -> Vec<bool> {
    let n = schedule.n as usize;
    assert_eq!(g.len(), n);
    assert_eq!(p.len(), n);
    let mut gv: BTreeMap<Span, bool> = BTreeMap::new();
    let mut pv: BTreeMap<Span, bool> = BTreeMap::new();
    for i in 0..n {
        gv.insert(Span::leaf(i as u32), g[i]);
        pv.insert(Span::leaf(i as u32), p[i]);
    }
    for node in schedule.nodes() {
        let (gh, ph) = (gv[&node.hi_span], pv[&node.hi_span]);
        let (gl, pl) = (gv[&node.lo_span], pv[&node.lo_span]);
        let out = node.out_span();
        gv.insert(out, gh | (ph & gl));
        pv.insert(out, ph & pl);
    }
    (0..n as u32).map(|i| gv[&Span::new(0, i)]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sklansky_16_shape() {
        let s = build_schedule(Tree::Sklansky, 16).unwrap();
        assert_eq!(s.level_count(), 4);
        assert_eq!(s.node_count(), 32);
    }

    #[test]
    fn brent_kung_16_shape() {
        let s = build_schedule(Tree::BrentKung, 16).unwrap();
        assert_eq!(s.level_count(), 6);
        assert_eq!(s.node_count(), 26); // 2n - log n - 2
    }

    #[test]
    fn kogge_stone_8_node_count() {
        let s = build_schedule(Tree::KoggeStone, 8).unwrap();
        assert_eq!(s.node_count(), 17); // n log(n/2) + 1
    }

    #[test]
    fn sklansky_2_is_single_node() {
        let s = build_schedule(Tree::Sklansky, 2).unwrap();
        assert_eq!(s.level_count(), 1);
        assert_eq!(s.node_count(), 1);
        let node = s.levels[0].nodes[0];
        assert_eq!(node.hi_span, Span::leaf(1));
        assert_eq!(node.lo_span, Span::leaf(0));
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(matches!(
            build_schedule(Tree::Sklansky, 6),
            Err(ScheduleError::UnsupportedWidth(6))
        ));
        assert!(build_schedule(Tree::Sklansky, 1).is_err());
    }

    #[test]
    fn all_trees_validate_clean() {
        for tree in Tree::ALL {
            for n in [2u32, 4, 8, 16, 32, 64] {
                let s = build_schedule(tree, n).unwrap();
                let diags = validate_schedule(&s);
                assert!(
                    diags.is_empty(),
                    "{:?} n={} -> {:?}",
                    tree,
                    n,
                    diags
                );
            }
        }
    }

    #[test]
    fn carries_match_ripple_oracle() {
        for tree in Tree::ALL {
            for n in [2usize, 4, 8, 16] {
                let s = build_schedule(tree, n as u32).unwrap();
                for seed in 0..64u64 {
                    // cheap deterministic pseudo-random inputs
                    let a = seed.wrapping_mul(0x9e3779b97f4a7c15) & ((1 << n) - 1);
                    let b = seed.wrapping_mul(0xc2b2ae3d27d4eb4f).rotate_left(17) & ((1 << n) - 1);
                    let g: Vec<bool> = (0..n).map(|i| (a >> i) & (b >> i) & 1 == 1).collect();
                    let p: Vec<bool> = (0..n).map(|i| ((a >> i) ^ (b >> i)) & 1 == 1).collect();
                    let carries = evaluate_carries(&s, &g, &p);
                    let sum = a + b;
                    for i in 0..n {
                        // c_{i+1} = bit i+1 of (a mod 2^{i+1}) + (b mod 2^{i+1})
                        let mask = (1u64 << (i + 1)) - 1;
                        let expect = ((a & mask) + (b & mask)) >> (i + 1) & 1 == 1;
                        assert_eq!(carries[i], expect, "{tree:?} n={n} i={i} a={a} b={b} sum={sum}");
                    }
                }
            }
        }
    }

    #[test]
    fn validate_flags_duplicate_producer() {
        let mut s = build_schedule(Tree::Sklansky, 8).unwrap();
        let node = s.levels[1].nodes[0];
        s.levels[1].nodes.push(node);
        let diags = validate_schedule(&s);
        assert!(diags
            .iter()
            .any(|d| matches!(d, Diagnostic::DuplicateProducer { .. })));
    }

    #[test]
    fn validate_flags_missing_carry() {
        let mut s = build_schedule(Tree::Sklansky, 8).unwrap();
        // remove the producer of G[0:5]
        for level in &mut s.levels {
            level
                .nodes
                .retain(|n| n.out_span() != Span::new(0, 5));
        }
        let diags = validate_schedule(&s);
        assert!(diags
            .iter()
            .any(|d| matches!(d, Diagnostic::MissingCarry { index: 5 })));
    }

    #[test]
    fn fanout_plan_is_minimal() {
        // dropping any fan-out leaves some operand shared beyond its plan
        for tree in Tree::ALL {
            let s = build_schedule(tree, 16).unwrap();
            for (li, level) in s.levels.iter().enumerate() {
                for fi in 0..level.fanouts.len() {
                    let mut mutated = s.clone();
                    mutated.levels[li].fanouts.remove(fi);
                    let diags = validate_schedule(&mutated);
                    assert!(
                        diags
                            .iter()
                            .any(|d| matches!(d, Diagnostic::OperandConflict { .. })),
                        "{tree:?} level {li} fanout {fi} was not needed"
                    );
                }
            }
        }
    }
}
