//! Membership in normal closures `⟨⟨r^m⟩⟩ ⊂ F₂` by the Dehn–Newman rewriting
//! search, Newman candidate enumeration, and the torsion-type decision.
//!
//! Words are treated as cyclic words throughout: membership in a normal
//! subgroup is invariant under conjugation, so every state of the search is a
//! cyclically reduced word and subwords may wrap around.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{build_u_n, cyclic_reduce, occurrences_in, primitive_root, FWord, Letter};

/// One rewrite `R^{m−1}R₁ → R₂⁻¹` applied to a cyclic word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RewriteStep {
    /// Start of the replaced subword in the cyclic word before the step.
    pub position: usize,
    pub replaced: FWord,
    pub replacement: FWord,
    /// The cyclically reduced word after the step.
    pub result: FWord,
}

/// Evidence for a membership decision.
///
/// A positive certificate is a rewrite sequence ending at the empty word. A
/// negative one lists every state the exhaustive search reached where no
/// qualifying subword occurs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipCertificate {
    pub start: FWord,
    /// Primitive root actually used; a proper-power input `s^k` becomes `s` with exponent `k·m`.
    pub root: FWord,
    pub exponent: u32,
    pub steps: Vec<RewriteStep>,
    pub dead_states: Vec<FWord>,
    pub states_explored: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipOutcome {
    pub decision: bool,
    pub certificate: MembershipCertificate,
}

/// A rewrite rule `pattern → replacement` with `pattern = R^{m−1}R₁`, `replacement = R₂⁻¹`.
#[derive(Clone, Debug)]
struct Rule {
    pattern: Vec<Letter>,
    replacement: FWord,
}

fn rules(root: &FWord, m: u32) -> Vec<Rule> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for base in [root.clone(), root.inverse()] {
        for i in 0..base.len() {
            let rr = base.rotated(i);
            if !seen.insert(rr.clone()) {
                continue;
            }
            let mut pattern = rr.pow(i64::from(m) - 1).letters().to_vec();
            pattern.push(rr.letters()[0]);
            let replacement = FWord::from_letters(rr.letters()[1..].iter().copied()).inverse();
            out.push(Rule { pattern, replacement });
        }
    }
    out
}

fn core(w: &FWord) -> FWord {
    cyclic_reduce(w).0
}

fn apply_at(state: &FWord, position: usize, rule: &Rule) -> FWord {
    let rotated = state.rotated(position);
    let rest = FWord::from_letters(rotated.letters()[rule.pattern.len()..].iter().copied());
    core(&rule.replacement.mul(&rest))
}

/// Normalizes `(r, m)` to a primitive cyclically reduced root and adjusted exponent.
fn normalize_relator(r: &FWord, m: u32) -> Result<(FWord, u32)> {
    if m < 2 {
        return Err(Error::OutOfRange(format!("exponent must be at least 2, got {m}")));
    }
    let r = core(r);
    if r.is_empty() {
        return Err(Error::EmptyWord);
    }
    let (root, k) = primitive_root(&r)?;
    Ok((root, k * m))
}

/// Decides `u ∈ ⟨⟨r^m⟩⟩` by breadth-first search over all Dehn–Newman rewrites.
pub fn in_normal_closure(u: &FWord, r: &FWord, m: u32) -> Result<MembershipOutcome> {
    let (root, m) = normalize_relator(r, m)?;
    let rules = rules(&root, m);
    let start = core(u);

    let mut parent: HashMap<FWord, Option<(FWord, RewriteStep)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start.clone()]);
    let mut dead_states = Vec::new();
    let mut found = start.is_empty();

    while !found {
        let Some(state) = queue.pop_front() else { break };
        let mut any = false;
        for rule in &rules {
            for pos in occurrences_in(&rule.pattern, state.letters(), true) {
                any = true;
                let next = apply_at(&state, pos, rule);
                if parent.contains_key(&next) {
                    continue;
                }
                let step = RewriteStep {
                    position: pos,
                    replaced: FWord::from_letters(rule.pattern.iter().copied()),
                    replacement: rule.replacement.clone(),
                    result: next.clone(),
                };
                parent.insert(next.clone(), Some((state.clone(), step)));
                if next.is_empty() {
                    found = true;
                    break;
                }
                queue.push_back(next);
            }
            if found {
                break;
            }
        }
        if !any {
            dead_states.push(state);
        }
    }

    let mut steps = Vec::new();
    if found {
        let mut cur = FWord::identity();
        while let Some(Some((prev, step))) = parent.get(&cur) {
            steps.push(step.clone());
            cur = prev.clone();
        }
        steps.reverse();
        dead_states.clear();
    }
    let certificate =
        MembershipCertificate { start, root, exponent: m, steps, dead_states, states_explored: parent.len() };
    Ok(MembershipOutcome { decision: found, certificate })
}

impl MembershipCertificate {
    /// Replays the rewrite steps from `start`, checking that each one is a legal
    /// Dehn–Newman move for `root^exponent`, and returns the final word.
    pub fn replay(&self) -> Result<FWord> {
        let rules = rules(&self.root, self.exponent);
        let drop = (self.exponent as usize - 2) * self.root.len() + 2;
        let mut cur = core(&self.start);
        for (i, step) in self.steps.iter().enumerate() {
            let rule = rules
                .iter()
                .find(|r| r.pattern == step.replaced.letters() && r.replacement == step.replacement)
                .ok_or_else(|| Error::Internal(format!("step {i} is not a rewrite for this relator")))?;
            if step.replaced.len() - step.replacement.len() != drop {
                return Err(Error::Internal(format!("step {i} does not shorten by {drop}")));
            }
            if step.position >= cur.len()
                || !occurrences_in(&rule.pattern, cur.letters(), true).contains(&step.position)
            {
                return Err(Error::Internal(format!("step {i}: subword not found at {}", step.position)));
            }
            let next = apply_at(&cur, step.position, rule);
            if next != step.result {
                return Err(Error::Internal(format!("step {i}: result mismatch")));
            }
            cur = next;
        }
        Ok(cur)
    }
}

/// Necessary condition: `ab(u)` lies in the subgroup of `ℤ²` generated by `m·ab(r)`.
pub fn abelian_screen(u: &FWord, r: &FWord, m: u32) -> bool {
    let (ua, ub) = u.abelianization();
    let (ra, rb) = r.abelianization();
    let (ra, rb) = (ra * i64::from(m), rb * i64::from(m));
    if ra == 0 && rb == 0 {
        return ua == 0 && ub == 0;
    }
    // u = k·(ra, rb) for an integer k
    let k = if ra != 0 { ua / ra } else { ub / rb };
    k * ra == ua && k * rb == ub
}

/// A pair `(root, m)` that passes the Newman length test against `u`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateRelator {
    /// Read off the anchor, so it is a cyclic conjugate of the class representative.
    pub root: FWord,
    pub exponent: u32,
    pub anchor_start: usize,
    pub anchor_len: usize,
}

/// Every `(root, m)`, up to cyclic conjugation and inversion of the root, such
/// that the cyclic word `u` contains a subword of length `(m−1)|root| + 1` with
/// period `|root|`.
pub fn candidate_relators(u: &FWord) -> Result<Vec<CandidateRelator>> {
    let w = core(u);
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let n = w.len();
    let l = w.letters();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for p in 1..n {
        for start in 0..n {
            // longest run from `start` with period p, capped at n letters
            let mut len = p;
            while len < n && l[(start + len) % n] == l[(start + len - p) % n] {
                len += 1;
            }
            if len < p + 1 {
                continue;
            }
            let root = FWord::from_letters((0..p).map(|j| l[(start + j) % n]));
            if primitive_root(&root).map(|(_, k)| k).unwrap_or(1) != 1 {
                continue;
            }
            let key = root.conjugacy_key();
            let max_m = (len - 1) / p + 1;
            for m in 2..=max_m as u32 {
                if seen.insert((key.clone(), m)) {
                    out.push(CandidateRelator {
                        root: root.clone(),
                        exponent: m,
                        anchor_start: start,
                        anchor_len: (m as usize - 1) * p + 1,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionWitness {
    pub root: FWord,
    pub exponent: u32,
    pub certificate: MembershipCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionTypeOutcome {
    pub decision: bool,
    pub witness: Option<TorsionWitness>,
    /// Refutations of every candidate tried before a witness was found (all of
    /// them when the decision is negative).
    pub refutations: Vec<(CandidateRelator, MembershipCertificate)>,
}

impl TorsionTypeOutcome {
    pub fn states_explored(&self) -> usize {
        let w = self.witness.as_ref().map_or(0, |w| w.certificate.states_explored);
        w + self.refutations.iter().map(|(_, c)| c.states_explored).sum::<usize>()
    }
}

/// Whether `u` lies in `⟨⟨r^m⟩⟩` for some nontrivial `r` and `m ≥ 2`.
pub fn is_torsion_type(u: &FWord) -> Result<TorsionTypeOutcome> {
    let w = core(u);
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut refutations = Vec::new();
    for cand in candidate_relators(&w)? {
        let out = in_normal_closure(&w, &cand.root, cand.exponent)?;
        if out.decision {
            let witness =
                TorsionWitness { root: cand.root.clone(), exponent: cand.exponent, certificate: out.certificate };
            return Ok(TorsionTypeOutcome { decision: true, witness: Some(witness), refutations });
        }
        refutations.push((cand, out.certificate));
    }
    Ok(TorsionTypeOutcome { decision: false, witness: None, refutations })
}

/// One parametric family of subwords `r₁r₂r₁` of `u_N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    /// 1-based position in the family list.
    pub index: usize,
    pub pattern: &'static str,
    pub instances: Vec<FWord>,
    /// Instances that actually occur as subwords of `u_N`.
    pub occurring: usize,
    /// Instances `r₁r₂r₁` for which `u_N ∉ ⟨⟨(r₁r₂)²⟩⟩` was certified.
    pub rejected: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DuplicatePair {
    pub first: usize,
    pub second: usize,
    pub same_relators: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseAuditReport {
    pub n: u32,
    pub families: Vec<FamilyReport>,
    /// Enumerated subwords `r₁r₂r₁` not produced by any family.
    pub unmatched: Vec<FWord>,
    /// Distinct enumerated subwords after the exclusions.
    pub enumerated: usize,
    pub duplicate_pairs: Vec<DuplicatePair>,
    /// Classes of distinct relators `r²` left after merging duplicates.
    pub distinct_relators: usize,
    pub u_n_torsion_type: bool,
}

impl CaseAuditReport {
    pub fn passed(&self) -> bool {
        self.unmatched.is_empty()
            && self.families.iter().all(|f| !f.instances.is_empty() && f.occurring == f.instances.len())
            && self.families.iter().all(|f| f.rejected == f.instances.len())
            && self.duplicate_pairs.iter().all(|d| d.same_relators)
            && !self.u_n_torsion_type
    }
}

const FAMILY_PATTERNS: [&str; 22] = [
    "XY C^t X",
    "XY C^N M D^t",
    "C^s M D^t",
    "C^s M D^N YX",
    "X D^t YX",
    "x y C^t x",
    "x y C^t M",
    "x y C^s M D^t y x",
    "M",
    "M D^t y x",
    "x D^t y x",
    "Y C^t XY",
    "Y C^N M D^t y x Y",
    "Y C^N M D^N Y",
    "Y x y C^s M D^t y x Y",
    "Y x y C^s M D^N Y",
    "YX D^t Y",
    "y C^t x y",
    "y C^t x y^2",
    "y C^s M D^t y",
    "y^2 x D^t y",
    "y x D^t y",
];

/// Duplicate pairs in 1-based family numbering.
const DUPLICATES: [(usize, usize); 3] = [(1, 12), (6, 18), (11, 22)];

fn family_instances(n: i64) -> Vec<Vec<FWord>> {
    let w = |s: &str| crate::words::parse_word(s).expect("static word");
    let c = w("[X,Y]");
    let d = w("[y,x]");
    let m = w("xyyx");
    let cp = |k: i64| c.pow(k);
    let dp = |k: i64| d.pow(k);
    let cat = |parts: &[&FWord]| parts.iter().fold(FWord::identity(), |acc, p| acc.mul(p));
    let single = |lo: i64, hi: i64, f: &dyn Fn(i64) -> FWord| (lo..=hi).map(f).collect::<Vec<_>>();
    let double = |lo: i64, hi: i64, f: &dyn Fn(i64, i64) -> FWord| {
        (lo..=hi).flat_map(|s| (lo..=hi).map(move |t| (s, t))).map(|(s, t)| f(s, t)).collect::<Vec<_>>()
    };
    let (xy, yx, xi, yi, x, y) = (w("XY"), w("YX"), w("x"), w("y"), w("X"), w("Y"));
    let (xiyi, yixi) = (w("xy"), w("yx"));
    vec![
        single(1, n - 1, &|t| cat(&[&xy, &cp(t), &x])),
        single(1, n, &|t| cat(&[&xy, &cp(n), &m, &dp(t)])),
        double(1, n, &|s, t| cat(&[&cp(s), &m, &dp(t)])),
        single(1, n, &|s| cat(&[&cp(s), &m, &dp(n), &yx])),
        single(1, n - 1, &|t| cat(&[&x, &dp(t), &yx])),
        single(1, n - 1, &|t| cat(&[&xiyi, &cp(t), &xi])),
        single(0, n - 1, &|t| cat(&[&xiyi, &cp(t), &m])),
        double(0, n - 1, &|s, t| cat(&[&xiyi, &cp(s), &m, &dp(t), &yixi])),
        vec![m.clone()],
        single(0, n - 1, &|t| cat(&[&m, &dp(t), &yixi])),
        single(1, n - 1, &|t| cat(&[&xi, &dp(t), &yixi])),
        single(1, n - 1, &|t| cat(&[&y, &cp(t), &xy])),
        single(0, n - 1, &|t| cat(&[&y, &cp(n), &m, &dp(t), &yixi, &y])),
        vec![cat(&[&y, &cp(n), &m, &dp(n), &y])],
        double(0, n - 1, &|s, t| cat(&[&y, &xiyi, &cp(s), &m, &dp(t), &yixi, &y])),
        single(0, n - 1, &|s| cat(&[&y, &xiyi, &cp(s), &m, &dp(n), &y])),
        single(1, n - 1, &|t| cat(&[&yx, &dp(t), &y])),
        single(1, n - 1, &|t| cat(&[&yi, &cp(t), &xiyi])),
        single(0, n - 1, &|t| cat(&[&yi, &cp(t), &xi, &yi, &yi])),
        double(0, n - 1, &|s, t| cat(&[&yi, &cp(s), &m, &dp(t), &yi])),
        single(0, n - 1, &|t| cat(&[&yi, &yi, &xi, &dp(t), &yi])),
        single(1, n - 1, &|t| cat(&[&yixi, &dp(t), &yi])),
    ]
}

/// `r₁r₂r₁ ↦ r₁r₂`.
fn relator_of(s: &FWord) -> FWord {
    FWord::from_letters(s.letters()[..s.len() - 1].iter().copied())
}

fn excluded_relator_keys() -> HashSet<FWord> {
    ["Y", "XY", "[X,Y]"].iter().map(|s| crate::words::parse_word(s).expect("static word").conjugacy_key()).collect()
}

/// Linear subwords `r₁r₂r₁` of `u_N` with `|r₁| = 1`, other than `u_N` itself,
/// whose relator `r₁r₂` is not a proper power and not a cyclic conjugate of
/// `Y, XY, [X,Y]` or their inverses.
pub fn enumerate_first_step_subwords(n: i64) -> Result<Vec<FWord>> {
    let u = build_u_n(n)?;
    let l = u.letters();
    let excluded = excluded_relator_keys();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for i in 0..l.len() {
        for j in i + 2..=l.len() {
            if l[i] != l[j - 1] || (i == 0 && j == l.len()) {
                continue;
            }
            let s = FWord::from_letters(l[i..j].iter().copied());
            // proper powers s^k reduce to the primitive root with exponent 2k ≥ 4
            let (root, k) = primitive_root(&relator_of(&s))?;
            if k > 1 || excluded.contains(&root.conjugacy_key()) {
                continue;
            }
            if seen.insert(s.clone()) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// Regenerates the case list for `u_N`: every first-step subword, its
/// parametric family, the duplicate pairs, and a refutation for each relator.
pub fn case_audit(n: u32) -> Result<CaseAuditReport> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("the case audit needs N ≥ 2, got {n}")));
    }
    let ni = i64::from(n);
    let u = build_u_n(ni)?;
    let enumerated = enumerate_first_step_subwords(ni)?;
    let enumerated_set: HashSet<&FWord> = enumerated.iter().collect();
    let instances = family_instances(ni);

    let mut verdicts: HashMap<FWord, bool> = HashMap::new();
    let mut families = Vec::new();
    for (idx, inst) in instances.iter().enumerate() {
        let occurring = inst.iter().filter(|s| enumerated_set.contains(s)).count();
        let mut rejected = 0;
        for s in inst {
            let key = relator_of(s).conjugacy_key();
            let member = match verdicts.get(&key) {
                Some(&v) => v,
                None => {
                    let v = in_normal_closure(&u, &relator_of(s), 2)?.decision;
                    verdicts.insert(key, v);
                    v
                }
            };
            if !member {
                rejected += 1;
            }
        }
        families.push(FamilyReport {
            index: idx + 1,
            pattern: FAMILY_PATTERNS[idx],
            instances: inst.clone(),
            occurring,
            rejected,
        });
    }

    let produced: HashSet<&FWord> = instances.iter().flatten().collect();
    let unmatched = enumerated.iter().filter(|s| !produced.contains(s)).cloned().collect();

    let keys = |i: usize| -> Vec<FWord> {
        let mut v: Vec<FWord> = instances[i - 1].iter().map(|s| relator_of(s).conjugacy_key()).collect();
        v.sort();
        v
    };
    let duplicate_pairs = DUPLICATES
        .iter()
        .map(|&(a, b)| DuplicatePair { first: a, second: b, same_relators: keys(a) == keys(b) })
        .collect();
    let distinct_relators =
        instances.iter().flatten().map(|s| relator_of(s).conjugacy_key()).collect::<HashSet<_>>().len();

    let u_n_torsion_type = is_torsion_type(&u)?.decision;
    Ok(CaseAuditReport {
        n,
        families,
        unmatched,
        enumerated: enumerated.len(),
        duplicate_pairs,
        distinct_relators,
        u_n_torsion_type,
    })
}
