//! Separate-and-conquer rule induction over feature records with
//! set-of-atoms consequents.
//!
//! Prediction of a label set is decomposed into one binary concept per
//! atom: an ordered rule list is grown per atom (FOIL-gain growing,
//! reduced-error pruning on a held-out split), the per-atom lists are
//! concatenated in ascending atom order, and rules with identical
//! condition lists are merged by unioning their consequents. A noise-free
//! variant grows rules to zero negative coverage with no pruning and
//! removes covered records, which makes rule coverage mutually exclusive
//! on the training data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{LexError, Result};
use crate::indicators::FeatureRecord;
use crate::taxonomy::SynsetId;

/// One atomic test over a record attribute. Operator/attribute pairing is
/// fixed by construction: bags are tested by word membership, offset sets
/// by offset membership, the entity name by equality, and the article
/// length by integer thresholds.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConditionTest {
    ContextContains(String),
    ProfileBagContains(String),
    EntityNameEquals(String),
    ProfileOffsetsContain(SynsetId),
    ArticleLengthLe(usize),
    ArticleLengthGe(usize),
}

impl ConditionTest {
    pub fn holds(&self, r: &FeatureRecord) -> bool {
        match self {
            ConditionTest::ContextContains(w) => r.context.contains(w),
            ConditionTest::ProfileBagContains(w) => r.profile_bag.contains(w),
            ConditionTest::EntityNameEquals(name) => r.entity_name == *name,
            ConditionTest::ProfileOffsetsContain(s) => r.profile_offsets.contains(s),
            ConditionTest::ArticleLengthLe(n) => r.article_length <= *n,
            ConditionTest::ArticleLengthGe(n) => r.article_length >= *n,
        }
    }

    fn attribute(&self) -> &'static str {
        match self {
            ConditionTest::ContextContains(_) => "context",
            ConditionTest::ProfileBagContains(_) => "profile_bag",
            ConditionTest::EntityNameEquals(_) => "entity_name",
            ConditionTest::ProfileOffsetsContain(_) => "profile_offsets",
            ConditionTest::ArticleLengthLe(_) | ConditionTest::ArticleLengthGe(_) => {
                "article_length"
            }
        }
    }

    fn op(&self) -> &'static str {
        match self {
            ConditionTest::ContextContains(_)
            | ConditionTest::ProfileBagContains(_)
            | ConditionTest::ProfileOffsetsContain(_) => "~",
            ConditionTest::EntityNameEquals(_) => "=",
            ConditionTest::ArticleLengthLe(_) => "<=",
            ConditionTest::ArticleLengthGe(_) => ">=",
        }
    }

    fn operand(&self) -> String {
        match self {
            ConditionTest::ContextContains(w) | ConditionTest::ProfileBagContains(w) => w.clone(),
            ConditionTest::EntityNameEquals(name) => name.clone(),
            ConditionTest::ProfileOffsetsContain(s) => s.to_string(),
            ConditionTest::ArticleLengthLe(n) | ConditionTest::ArticleLengthGe(n) => {
                n.to_string()
            }
        }
    }

    /// Gain ties are broken by lexicographic operand, then attribute
    /// name; the operator disambiguates the two length tests.
    fn tie_key(&self) -> (String, &'static str, &'static str) {
        (self.operand(), self.attribute(), self.op())
    }

    fn parse(text: &str, line: usize) -> Result<ConditionTest> {
        let err = |msg: String| LexError::Parse { line, msg };
        let mut parts = text.splitn(3, ' ');
        let (attr, op, operand) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(o), Some(v)) if !v.is_empty() => (a, o, v),
            _ => return Err(err(format!("expected `<attr> <op> <operand>`, got {text:?}"))),
        };
        match (attr, op) {
            ("context", "~") => Ok(ConditionTest::ContextContains(operand.to_string())),
            ("profile_bag", "~") => Ok(ConditionTest::ProfileBagContains(operand.to_string())),
            ("entity_name", "=") => Ok(ConditionTest::EntityNameEquals(operand.to_string())),
            ("profile_offsets", "~") => Ok(ConditionTest::ProfileOffsetsContain(
                operand.parse().map_err(err)?,
            )),
            ("article_length", "<=") => Ok(ConditionTest::ArticleLengthLe(
                operand.parse().map_err(|_| err(format!("bad length {operand:?}")))?,
            )),
            ("article_length", ">=") => Ok(ConditionTest::ArticleLengthGe(
                operand.parse().map_err(|_| err(format!("bad length {operand:?}")))?,
            )),
            _ => Err(err(format!("unsupported test `{attr} {op}`"))),
        }
    }
}

impl fmt::Display for ConditionTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.attribute(), self.op(), self.operand())
    }
}

/// A conjunction of tests with a set-of-atoms consequent.
///
/// `coverage` is a training statistic (records the rule fired on whose
/// labels did/did not include the whole consequent); it is not persisted
/// and does not take part in equality.
#[derive(Clone, Debug)]
pub struct Rule {
    pub conditions: Vec<ConditionTest>,
    pub consequent: BTreeSet<SynsetId>,
    pub coverage: (usize, usize),
}

impl PartialEq for Rule {
    fn eq(&self, other: &Self) -> bool {
        self.conditions == other.conditions && self.consequent == other.consequent
    }
}

impl Eq for Rule {}

impl Rule {
    pub fn fires(&self, r: &FeatureRecord) -> bool {
        self.conditions.iter().all(|c| c.holds(r))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IF ")?;
        if self.conditions.is_empty() {
            write!(f, "true")?;
        } else {
            for (i, c) in self.conditions.iter().enumerate() {
                if i > 0 {
                    write!(f, " AND ")?;
                }
                write!(f, "{c}")?;
            }
        }
        write!(f, " THEN")?;
        for s in &self.consequent {
            write!(f, " {{{s}}}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleSet {
    pub rules: Vec<Rule>,
    pub mode_noise_free: bool,
    pub training_fingerprint: String,
}

/// Union of the consequents of every firing rule.
pub fn predict(rs: &RuleSet, record: &FeatureRecord) -> BTreeSet<SynsetId> {
    let mut out = BTreeSet::new();
    for rule in &rs.rules {
        if rule.fires(record) {
            out.extend(rule.consequent.iter().copied());
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct LearnerParams {
    /// An atom must appear in at least this many labels to be learned.
    pub min_support: usize,
    /// Fraction of records held out for reduced-error pruning.
    pub prune_fraction: f64,
    /// A rule below this held-out precision stops its atom's list.
    pub min_rule_precision: f64,
    /// Below this many remaining records the grow/prune split is skipped
    /// and rules are grown on everything.
    pub min_records_for_pruning: usize,
}

impl Default for LearnerParams {
    fn default() -> Self {
        LearnerParams {
            min_support: 2,
            prune_fraction: 1.0 / 3.0,
            min_rule_precision: 0.5,
            min_records_for_pruning: 16,
        }
    }
}

/// FOIL information gain of refining a rule covering (p, n) into one
/// covering (p_new, n_new).
pub fn foil_gain(p_new: usize, n_new: usize, p: usize, n: usize) -> Result<f64> {
    if p_new + n_new == 0 || p + n == 0 {
        return Err(LexError::Param(format!(
            "foil_gain requires non-empty coverages, got ({p_new},{n_new}) from ({p},{n})"
        )));
    }
    if p_new == 0 {
        return Ok(0.0);
    }
    let prec_new = p_new as f64 / (p_new + n_new) as f64;
    let prec_old = p as f64 / (p + n) as f64;
    Ok(p_new as f64 * (prec_new.log2() - prec_old.log2()))
}

/// Candidate tests drawn from the covered examples: every word, entity
/// name, and offset observed on a positive, plus article-length
/// thresholds at the midpoints of observed values. Sorted by tie order.
fn candidates(covered: &[(&FeatureRecord, bool)]) -> Vec<ConditionTest> {
    let mut words_ctx = BTreeSet::new();
    let mut words_prof = BTreeSet::new();
    let mut names = BTreeSet::new();
    let mut offsets = BTreeSet::new();
    let mut lengths = BTreeSet::new();
    for (r, pos) in covered {
        lengths.insert(r.article_length);
        if !pos {
            continue;
        }
        words_ctx.extend(r.context.words().map(str::to_string));
        words_prof.extend(r.profile_bag.words().map(str::to_string));
        names.insert(r.entity_name.clone());
        offsets.extend(r.profile_offsets.iter().copied());
    }
    let mut out = Vec::new();
    out.extend(words_ctx.into_iter().map(ConditionTest::ContextContains));
    out.extend(words_prof.into_iter().map(ConditionTest::ProfileBagContains));
    out.extend(names.into_iter().map(ConditionTest::EntityNameEquals));
    out.extend(offsets.into_iter().map(ConditionTest::ProfileOffsetsContain));
    let lengths: Vec<usize> = lengths.into_iter().collect();
    for pair in lengths.windows(2) {
        let mid = (pair[0] + pair[1]) / 2;
        out.push(ConditionTest::ArticleLengthLe(mid));
        out.push(ConditionTest::ArticleLengthGe(mid + 1));
    }
    out.sort_by(|a, b| a.tie_key().cmp(&b.tie_key()));
    out.dedup();
    out
}

/// Greedily conjoins the gain-maximizing test until no negatives are
/// covered or no test has positive gain. Positive gain implies strictly
/// shrinking negative coverage, so this terminates.
fn grow_rule(examples: &[(&FeatureRecord, bool)]) -> Vec<ConditionTest> {
    let mut covered: Vec<(&FeatureRecord, bool)> = examples.to_vec();
    let mut conditions = Vec::new();
    loop {
        let p = covered.iter().filter(|(_, pos)| *pos).count();
        let n = covered.len() - p;
        if n == 0 || p == 0 {
            break;
        }
        let mut best: Option<(f64, ConditionTest)> = None;
        for cand in candidates(&covered) {
            let mut p2 = 0usize;
            let mut n2 = 0usize;
            for (r, pos) in &covered {
                if cand.holds(r) {
                    if *pos {
                        p2 += 1;
                    } else {
                        n2 += 1;
                    }
                }
            }
            if p2 + n2 == 0 {
                continue;
            }
            let gain = foil_gain(p2, n2, p, n).expect("coverages are non-empty");
            if best.as_ref().is_none_or(|(g, _)| gain > *g) {
                best = Some((gain, cand));
            }
        }
        match best {
            Some((gain, cond)) if gain > 0.0 => {
                covered.retain(|(r, _)| cond.holds(r));
                conditions.push(cond);
            }
            _ => break,
        }
    }
    conditions
}

fn coverage_on(conditions: &[ConditionTest], split: &[(&FeatureRecord, bool)]) -> (usize, usize) {
    let mut p = 0usize;
    let mut n = 0usize;
    for (r, pos) in split {
        if conditions.iter().all(|c| c.holds(r)) {
            if *pos {
                p += 1;
            } else {
                n += 1;
            }
        }
    }
    (p, n)
}

/// Deletes the trailing suffix of conditions maximizing (p-n)/(p+n) on
/// the prune split. A suffix is only dropped on a strict improvement, so
/// an uninformative prune split leaves the grown rule alone. At least
/// one condition is kept.
fn prune_rule(
    conditions: Vec<ConditionTest>,
    prune: &[(&FeatureRecord, bool)],
) -> Vec<ConditionTest> {
    if conditions.len() <= 1 || prune.is_empty() {
        return conditions;
    }
    let mut best_k = 0usize;
    let mut best_value = f64::NEG_INFINITY;
    for k in 1..=conditions.len() {
        let (p, n) = coverage_on(&conditions[..k], prune);
        let value = if p + n == 0 {
            -1.0
        } else {
            (p as f64 - n as f64) / (p as f64 + n as f64)
        };
        if value >= best_value {
            best_value = value;
            best_k = k;
        }
    }
    let mut conditions = conditions;
    conditions.truncate(best_k);
    conditions
}

/// Deterministic stratified split: every record whose within-class count
/// crosses a `fraction` increment goes to the prune split.
fn split_grow_prune<'a>(
    remaining: &[&'a FeatureRecord],
    is_pos: impl Fn(&FeatureRecord) -> bool,
    fraction: f64,
) -> (Vec<&'a FeatureRecord>, Vec<&'a FeatureRecord>) {
    let mut grow = Vec::new();
    let mut prune = Vec::new();
    let mut seen = [0usize; 2];
    for r in remaining {
        let cls = usize::from(is_pos(r));
        seen[cls] += 1;
        let before = ((seen[cls] - 1) as f64 * fraction).floor() as usize;
        let after = (seen[cls] as f64 * fraction).floor() as usize;
        if after > before {
            prune.push(*r);
        } else {
            grow.push(*r);
        }
    }
    (grow, prune)
}

fn fingerprint(records: &[FeatureRecord], params: &LearnerParams, noise_free: bool) -> String {
    let mut hasher = Sha256::new();
    hasher.update(serde_json::to_vec(records).expect("records serialize"));
    hasher.update(serde_json::to_vec(params).expect("params serialize"));
    hasher.update([u8::from(noise_free)]);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Merges rules with identical condition lists by unioning consequents,
/// keeping first-occurrence order, then fills in coverage statistics
/// against the full training set.
fn merge_and_measure(learned: Vec<Rule>, records: &[FeatureRecord]) -> Vec<Rule> {
    let mut merged: Vec<Rule> = Vec::new();
    for rule in learned {
        match merged.iter_mut().find(|m| m.conditions == rule.conditions) {
            Some(m) => m.consequent.extend(rule.consequent.iter().copied()),
            None => merged.push(rule),
        }
    }
    for rule in &mut merged {
        let mut p = 0usize;
        let mut n = 0usize;
        for r in records {
            if rule.fires(r) {
                if rule.consequent.is_subset(&r.label) {
                    p += 1;
                } else {
                    n += 1;
                }
            }
        }
        rule.coverage = (p, n);
    }
    merged
}

/// Learns an ordered rule list per atom by separate-and-conquer, then
/// concatenates the lists in ascending atom order.
pub fn train(records: &[FeatureRecord], params: &LearnerParams) -> Result<RuleSet> {
    if records.iter().all(|r| r.label.is_empty()) {
        return Err(LexError::Train(
            "no record has a non-empty label".to_string(),
        ));
    }
    let mut support: BTreeMap<SynsetId, usize> = BTreeMap::new();
    for r in records {
        for atom in &r.label {
            *support.entry(*atom).or_default() += 1;
        }
    }
    let atoms: Vec<SynsetId> = support
        .into_iter()
        .filter(|(_, count)| *count >= params.min_support)
        .map(|(atom, _)| atom)
        .collect();

    let mut learned: Vec<Rule> = Vec::new();
    for atom in atoms {
        let is_pos = |r: &FeatureRecord| r.label.contains(&atom);
        let mut remaining: Vec<&FeatureRecord> = records.iter().collect();
        loop {
            if !remaining.iter().any(|r| is_pos(r)) {
                break;
            }
            let use_pruning = params.prune_fraction > 0.0
                && remaining.len() >= params.min_records_for_pruning;
            let (grow, prune) = if use_pruning {
                split_grow_prune(&remaining, is_pos, params.prune_fraction)
            } else {
                (remaining.clone(), Vec::new())
            };
            let grow_ex: Vec<(&FeatureRecord, bool)> =
                grow.iter().map(|r| (*r, is_pos(r))).collect();
            if !grow_ex.iter().any(|(_, pos)| *pos) {
                break;
            }
            let prune_ex: Vec<(&FeatureRecord, bool)> =
                prune.iter().map(|r| (*r, is_pos(r))).collect();
            let mut conditions = grow_rule(&grow_ex);
            if use_pruning {
                conditions = prune_rule(conditions, &prune_ex);
            }
            // Stop when the held-out precision falls under the floor.
            // With pruning active, a rule the prune split never fires on
            // cannot be validated and is rejected; without a split the
            // grow coverage is all there is.
            let precision = if use_pruning {
                let (pp, pn) = coverage_on(&conditions, &prune_ex);
                if pp + pn == 0 {
                    break;
                }
                pp as f64 / (pp + pn) as f64
            } else {
                let (gp, gn) = coverage_on(&conditions, &grow_ex);
                if gp + gn == 0 {
                    break;
                }
                gp as f64 / (gp + gn) as f64
            };
            if precision < params.min_rule_precision {
                break;
            }
            let fires = |r: &FeatureRecord| conditions.iter().all(|c| c.holds(r));
            if !remaining.iter().any(|r| fires(r) && is_pos(r)) {
                break;
            }
            remaining.retain(|r| !fires(r));
            learned.push(Rule {
                conditions,
                consequent: BTreeSet::from([atom]),
                coverage: (0, 0),
            });
        }
    }

    Ok(RuleSet {
        rules: merge_and_measure(learned, records),
        mode_noise_free: false,
        training_fingerprint: fingerprint(records, params, false),
    })
}

/// Feature view used by the consistency precheck.
fn feature_key(r: &FeatureRecord) -> String {
    serde_json::to_string(&(
        &r.context,
        r.article_length,
        &r.entity_name,
        &r.profile_bag,
        &r.profile_offsets,
    ))
    .expect("features serialize")
}

/// Noise-free training: rules are grown to zero negative coverage with
/// no pruning, and covered records are retired, so no two rules fire on
/// the same training record and training P = R = 100%.
pub fn train_noise_free(records: &[FeatureRecord], params: &LearnerParams) -> Result<RuleSet> {
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        let key = feature_key(r);
        match seen.get(&key) {
            Some(&j) if records[j].label != r.label => {
                return Err(LexError::Train(format!(
                    "inconsistent records: {j} and {i} share feature values but differ in labels"
                )));
            }
            Some(_) => {}
            None => {
                seen.insert(key, i);
            }
        }
    }

    // Distinct non-empty label sets, rarest first.
    let mut class_counts: BTreeMap<&BTreeSet<SynsetId>, usize> = BTreeMap::new();
    for r in records {
        if !r.label.is_empty() {
            *class_counts.entry(&r.label).or_default() += 1;
        }
    }
    let mut classes: Vec<&BTreeSet<SynsetId>> = class_counts.keys().copied().collect();
    classes.sort_by_key(|label| (class_counts[label], (*label).clone()));

    let mut covered = vec![false; records.len()];
    let mut rules: Vec<Rule> = Vec::new();
    for label in classes {
        loop {
            let examples: Vec<(&FeatureRecord, bool)> = records
                .iter()
                .enumerate()
                .map(|(i, r)| (r, r.label == *label && !covered[i]))
                .collect();
            if !examples.iter().any(|(_, pos)| *pos) {
                break;
            }
            let conditions = grow_rule(&examples);
            let fires = |r: &FeatureRecord| conditions.iter().all(|c| c.holds(r));
            let stuck = examples.iter().find(|(r, pos)| !pos && fires(r));
            if let Some((bad, _)) = stuck {
                let bad_idx = records.iter().position(|r| std::ptr::eq(r, *bad)).unwrap();
                let pos_idx = records
                    .iter()
                    .enumerate()
                    .position(|(i, r)| r.label == *label && !covered[i] && fires(r))
                    .unwrap_or(bad_idx);
                return Err(LexError::Train(format!(
                    "records {pos_idx} and {bad_idx} cannot be separated by any condition"
                )));
            }
            let mut covered_any = false;
            for (i, r) in records.iter().enumerate() {
                if !covered[i] && r.label == *label && fires(r) {
                    covered[i] = true;
                    covered_any = true;
                }
            }
            if !covered_any {
                break;
            }
            rules.push(Rule {
                conditions,
                consequent: label.clone(),
                coverage: (0, 0),
            });
        }
    }

    Ok(RuleSet {
        rules: merge_and_measure(rules, records),
        mode_noise_free: true,
        training_fingerprint: fingerprint(records, params, true),
    })
}

/// One rule per line; a header row records the noise-free flag and the
/// training fingerprint and is omitted for a pristine empty rule set.
pub fn save_ruleset(rs: &RuleSet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, render_ruleset(rs)).map_err(|e| LexError::io(path, e))
}

pub fn render_ruleset(rs: &RuleSet) -> String {
    let mut out = String::new();
    if !rs.rules.is_empty() || rs.mode_noise_free || !rs.training_fingerprint.is_empty() {
        out.push_str(&format!(
            "ruleset noise_free={} fingerprint={}\n",
            rs.mode_noise_free, rs.training_fingerprint
        ));
    }
    for rule in &rs.rules {
        out.push_str(&format!("{rule}\n"));
    }
    out
}

pub fn load_ruleset(path: impl AsRef<Path>) -> Result<RuleSet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| LexError::io(path, e))?;
    parse_ruleset(&text)
}

pub fn parse_ruleset(text: &str) -> Result<RuleSet> {
    let mut rs = RuleSet::default();
    let mut saw_header = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header && line.starts_with("ruleset ") {
            saw_header = true;
            for field in line["ruleset ".len()..].split_whitespace() {
                if let Some(v) = field.strip_prefix("noise_free=") {
                    rs.mode_noise_free = v == "true";
                } else if let Some(v) = field.strip_prefix("fingerprint=") {
                    rs.training_fingerprint = v.to_string();
                }
            }
            continue;
        }
        rs.rules.push(parse_rule(line, lineno + 1)?);
    }
    Ok(rs)
}

fn parse_rule(line: &str, lineno: usize) -> Result<Rule> {
    let err = |msg: String| LexError::Parse { line: lineno, msg };
    let body = line
        .strip_prefix("IF ")
        .ok_or_else(|| err(format!("rule must start with IF: {line:?}")))?;
    let (lhs, rhs) = body
        .split_once(" THEN")
        .ok_or_else(|| err("rule is missing THEN".to_string()))?;
    let conditions = if lhs.trim() == "true" {
        Vec::new()
    } else {
        lhs.split(" AND ")
            .map(|c| ConditionTest::parse(c.trim(), lineno))
            .collect::<Result<Vec<_>>>()?
    };
    let mut consequent = BTreeSet::new();
    for atom in rhs.split_whitespace() {
        let inner = atom
            .strip_prefix('{')
            .and_then(|a| a.strip_suffix('}'))
            .ok_or_else(|| err(format!("malformed consequent {atom:?}")))?;
        consequent.insert(
            inner
                .parse::<SynsetId>()
                .map_err(|msg| err(format!("malformed consequent {atom:?}: {msg}")))?,
        );
    }
    if consequent.is_empty() {
        return Err(err("rule has an empty consequent".to_string()));
    }
    Ok(Rule {
        conditions,
        consequent,
        coverage: (0, 0),
    })
}
