//! Belief change operators over rankings.
//!
//! `star` is pointwise ordinal addition (left operand first) followed by
//! finite zeroing. Finite observations can never move belief off degree 0,
//! which is what makes some formulas nearly counterfactual; conditional
//! revision therefore works level by level on the levels where the
//! antecedent is possible.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Offender, Result};
use crate::logic::{self, Formula, LogicError, State, Vocabulary};
use crate::ordinal::Ord2;
use crate::ranking::{finite_zeroing, min_of, Ranking};

/// The conditional (ψ|φ): ψ should hold wherever φ does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conditional {
    pub consequent: Formula,
    pub antecedent: Formula,
}

impl Conditional {
    pub fn new(consequent: Formula, antecedent: Formula) -> Self {
        Conditional {
            consequent,
            antecedent,
        }
    }
}

impl fmt::Display for Conditional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.consequent, self.antecedent)
    }
}

impl FromStr for Conditional {
    type Err = LogicError;

    /// `PSI | PHI`, split at the last `|` outside parentheses. A disjunctive
    /// antecedent must be parenthesized.
    fn from_str(text: &str) -> Result<Self, LogicError> {
        let mut depth = 0i32;
        let mut split = None;
        for (i, b) in text.bytes().enumerate() {
            match b {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'|' if depth == 0 => split = Some(i),
                _ => {}
            }
        }
        let Some(i) = split else {
            return Err(LogicError::Parse {
                token: 1,
                offset: 0,
                message: "conditional needs the form `PSI | PHI`".into(),
            });
        };
        Ok(Conditional {
            consequent: logic::parse(&text[..i])?,
            antecedent: logic::parse(&text[i + 1..])?,
        })
    }
}

fn require_cf(r: &Ranking, what: &str) -> Result<()> {
    if r.is_cf() {
        Ok(())
    } else {
        Err(Error::NotCf(what.to_string()))
    }
}

fn require_finite(r: &Ranking) -> Result<()> {
    match r.iter().find(|(_, v)| !v.is_finite()) {
        Some((s, _)) => Err(Error::InfiniteValues(r.show_state(s))),
        None => Ok(()),
    }
}

/// Normalized addition: pointwise sum minus its minimum.
///
/// With an infinite minimum every state would need a subtraction by an
/// infinite ordinal, which has no meaning; all states are reported. With a
/// finite minimum `m`, each value is replaced by the least `x` with
/// `m + x = value`.
pub fn bar_plus(r1: &Ranking, r2: &Ranking) -> Result<Ranking> {
    r1.check_same_vocabulary(r2)?;
    let sums = pointwise_sum(r1.values(), r2.values());
    let m = min_of(&sums);
    if !m.is_finite() {
        let offenders = r1
            .iter()
            .map(|(s, _)| Offender {
                state: r1.show_state(s),
                sum: sums[s.index()],
                minimum: m,
            })
            .collect();
        return Err(Error::NotDefined(offenders));
    }
    let values = sums
        .iter()
        .map(|v| v.left_sub(m).map_err(Error::from))
        .collect::<Result<Vec<_>>>()?;
    Ok(r1.with_values(values))
}

/// [`bar_plus`] on raw value vectors; `None` where it is not defined.
pub fn bar_plus_values(a: &[Ord2], b: &[Ord2]) -> Option<Vec<Ord2>> {
    let sums = pointwise_sum(a, b);
    let m = min_of(&sums);
    if !m.is_finite() {
        return None;
    }
    sums.iter().map(|v| v.left_sub(m).ok()).collect()
}

fn pointwise_sum(a: &[Ord2], b: &[Ord2]) -> Vec<Ord2> {
    a.iter().zip(b).map(|(x, y)| *x + *y).collect()
}

/// `star` on raw value vectors, without CF checks.
pub fn star_values(a: &[Ord2], b: &[Ord2]) -> Vec<Ord2> {
    finite_zeroing(&pointwise_sum(a, b))
}

pub fn star(r1: &Ranking, r2: &Ranking) -> Result<Ranking> {
    r1.check_same_vocabulary(r2)?;
    require_cf(r1, "left operand")?;
    require_cf(r2, "right operand")?;
    Ok(r1.with_values(star_values(r1.values(), r2.values())))
}

/// `((r * obs) * obs) ...`, `n` times.
pub fn iterate_star(r: &Ranking, obs: &Ranking, n: u64) -> Result<Ranking> {
    r.check_same_vocabulary(obs)?;
    require_cf(r, "initial ranking")?;
    require_cf(obs, "observation")?;
    let mut values = r.values().to_vec();
    for _ in 0..n {
        values = star_values(&values, obs.values());
    }
    Ok(r.with_values(values))
}

/// The two-valued ranking (f, n): models of `f` at 0, all other states at `n`.
///
/// If `f` is valid the result is all-zero; if unsatisfiable it is the
/// constant `n`, which is not a CF for `n > 0`.
pub fn strengthening(vocab: &Arc<Vocabulary>, f: &Formula, n: Ord2) -> Result<Ranking> {
    let table = vocab.truth_table(f)?;
    Ok(Ranking::from_fn(Arc::clone(vocab), |s| {
        if table[s.index()] {
            Ord2::ZERO
        } else {
            n
        }
    }))
}

/// Spohn conditionalization of a finite CF on `f` with strength `d`.
pub fn conditionalize(r: &Ranking, f: &Formula, d: u64) -> Result<Ranking> {
    if d == 0 {
        return Err(Error::ZeroStrength);
    }
    require_finite(r)?;
    star(r, &strengthening(r.vocabulary(), f, Ord2::finite(d))?)
}

fn degree_zero_model(r: &Ranking, f: &Formula) -> Result<Option<State>> {
    let table = r.vocabulary().truth_table(f)?;
    Ok(r.iter()
        .find(|(s, v)| v.degree == 0 && table[s.index()])
        .map(|(s, _)| s))
}

/// Whether no finite-valued observation can make `f` believed: `f` fails at
/// every state of degree 0.
pub fn is_nearly_cf(r: &Ranking, f: &Formula) -> Result<bool> {
    require_cf(r, "ranking")?;
    Ok(degree_zero_model(r, f)?.is_none())
}

fn require_nearly_cf(r: &Ranking, phi: &Formula) -> Result<()> {
    require_cf(r, "ranking")?;
    match degree_zero_model(r, phi)? {
        Some(s) => Err(Error::NotNearlyCounterfactual(r.show_state(s))),
        None => Ok(()),
    }
}

/// Adds `n` to the finite part of every non-ψ state on `level`, then shifts
/// the level so its least finite part is what it was before.
fn strengthen_level(values: &mut [Ord2], level: u64, psi: &[bool], n: u64) {
    let old_low = values
        .iter()
        .filter(|v| v.degree == level)
        .map(|v| v.shift)
        .min()
        .unwrap_or(0);
    let parts: Vec<(usize, u64)> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.degree == level)
        .map(|(i, v)| (i, if psi[i] { v.shift } else { v.shift + n }))
        .collect();
    let new_low = parts.iter().map(|(_, p)| *p).min().unwrap_or(0);
    for (i, p) in parts {
        values[i] = Ord2::new(level, p - new_low + old_low);
    }
}

/// Strengthens ψ by `n` on each level where φ is possible; other levels and
/// every state's degree are untouched. φ must be nearly counterfactual.
pub fn cond_strengthen(r: &Ranking, n: u64, c: &Conditional) -> Result<Ranking> {
    require_nearly_cf(r, &c.antecedent)?;
    let psi = r.vocabulary().truth_table(&c.consequent)?;
    let mut values = r.values().to_vec();
    for level in r.poss(&c.antecedent)? {
        strengthen_level(&mut values, level, &psi, n);
    }
    Ok(r.with_values(values))
}

/// Result of [`cond_revise`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondRevision {
    pub ranking: Ranking,
    /// Strength applied at each revised level.
    pub strengths: BTreeMap<u64, u64>,
    /// φ-levels with no ψ-state, where no strength makes ψ believed.
    pub skipped: Vec<u64>,
}

/// Least `n` making ψ believed at a level once non-ψ parts gain `n`, or
/// `None` if the level has no ψ-state.
pub fn level_strength(parts: &[(u64, bool)]) -> Option<u64> {
    let min_psi = parts
        .iter()
        .filter(|(_, psi)| *psi)
        .map(|(p, _)| *p)
        .min()?;
    let Some(min_not) = parts.iter().filter(|(_, psi)| !*psi).map(|(p, _)| *p).min() else {
        return Some(0);
    };
    Some((min_psi + 1).saturating_sub(min_not))
}

/// Conditional revision by (ψ|φ): on each level where φ is possible,
/// strengthen ψ by the least amount that makes it believed at that level.
pub fn cond_revise(r: &Ranking, c: &Conditional) -> Result<CondRevision> {
    require_nearly_cf(r, &c.antecedent)?;
    let psi = r.vocabulary().truth_table(&c.consequent)?;
    let mut values = r.values().to_vec();
    let mut strengths = BTreeMap::new();
    let mut skipped = Vec::new();
    for level in r.poss(&c.antecedent)? {
        let parts: Vec<(u64, bool)> = r
            .iter()
            .filter(|(_, v)| v.degree == level)
            .map(|(s, v)| (v.shift, psi[s.index()]))
            .collect();
        match level_strength(&parts) {
            Some(n) => {
                strengthen_level(&mut values, level, &psi, n);
                strengths.insert(level, n);
            }
            None => skipped.push(level),
        }
    }
    Ok(CondRevision {
        ranking: r.with_values(values),
        strengths,
        skipped,
    })
}

/// Whether ψ is believed after revising by (ψ|φ) and then by `rprime`.
pub fn ramsey_holds(r: &Ranking, c: &Conditional, rprime: &Ranking) -> Result<bool> {
    let revised = cond_revise(r, c)?.ranking;
    let after = star(&revised, rprime)?;
    let psi = after.vocabulary().truth_table(&c.consequent)?;
    Ok(after.bel().iter().all(|s| psi[s.index()]))
}

/// Least `n <= bound` such that `n` observations of `obs` make `f` believed.
/// `obs` must be an `f`-strengthening.
pub fn istar_index(r: &Ranking, obs: &Ranking, f: &Formula, bound: u64) -> Result<Option<u64>> {
    r.check_same_vocabulary(obs)?;
    require_cf(r, "initial ranking")?;
    if obs.bel() != r.vocabulary().models(f)? {
        return Err(Error::NotStrengthening);
    }
    require_cf(obs, "observation")?;
    let table = r.vocabulary().truth_table(f)?;
    let entails = |values: &[Ord2]| {
        values
            .iter()
            .enumerate()
            .all(|(i, v)| !v.is_zero() || table[i])
    };
    let mut values = r.values().to_vec();
    for n in 0..=bound {
        if entails(&values) {
            return Ok(Some(n));
        }
        if n < bound {
            values = star_values(&values, obs.values());
        }
    }
    Ok(None)
}

/// A total preorder on states, as tiers from most to least plausible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preorder {
    vocab: Arc<Vocabulary>,
    tiers: Vec<Vec<State>>,
}

impl Preorder {
    pub fn new(vocab: Arc<Vocabulary>, tiers: Vec<Vec<State>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for tier in &tiers {
            if tier.is_empty() {
                return Err(Error::RankingSyntax("empty preorder tier".into()));
            }
            for s in tier {
                if s.index() >= vocab.state_count() || !seen.insert(*s) {
                    return Err(Error::RankingSyntax(format!(
                        "state {} misplaced in preorder",
                        s.0
                    )));
                }
            }
        }
        if seen.len() != vocab.state_count() {
            return Err(Error::RankingSyntax(
                "preorder does not cover every state".into(),
            ));
        }
        let tiers = tiers
            .into_iter()
            .map(|mut t| {
                t.sort();
                t
            })
            .collect();
        Ok(Preorder { vocab, tiers })
    }

    /// Groups states by value, lowest first.
    pub fn from_ranking(r: &Ranking) -> Self {
        let mut groups: BTreeMap<Ord2, Vec<State>> = BTreeMap::new();
        for (s, v) in r.iter() {
            groups.entry(v).or_default().push(s);
        }
        Preorder {
            vocab: Arc::clone(r.vocabulary()),
            tiers: groups.into_values().collect(),
        }
    }

    pub fn tiers(&self) -> &[Vec<State>] {
        &self.tiers
    }

    /// Tier index as finite rank.
    pub fn canonical_ranking(&self) -> Ranking {
        let mut values = vec![Ord2::ZERO; self.vocab.state_count()];
        for (i, tier) in self.tiers.iter().enumerate() {
            for s in tier {
                values[s.index()] = Ord2::finite(i as u64);
            }
        }
        Ranking::new(Arc::clone(&self.vocab), values).expect("tiers cover every state")
    }
}

/// One step of the finite improvement operator with strength `n`.
pub fn improvement_op(p: &Preorder, f: &Formula, n: u64) -> Result<Preorder> {
    if n == 0 {
        return Err(Error::ZeroStrength);
    }
    let canonical = p.canonical_ranking();
    let obs = strengthening(&p.vocab, f, Ord2::finite(n))?;
    if !obs.is_cf() {
        return Err(Error::Unsatisfiable(f.to_string()));
    }
    Ok(Preorder::from_ranking(&star(&canonical, &obs)?))
}

/// Finite-valued c-revision by a single conditional, followed by zeroing.
pub fn kern_isberner_revise(r: &Ranking, c: &Conditional) -> Result<Ranking> {
    require_finite(r)?;
    require_cf(r, "ranking")?;
    let vocab = r.vocabulary();
    let phi = vocab.truth_table(&c.antecedent)?;
    let psi = vocab.truth_table(&c.consequent)?;
    let both = Formula::and(c.antecedent.clone(), c.consequent.clone());
    let rank_both = r
        .rank_of(&both)?
        .ok_or_else(|| Error::Unsatisfiable(both.to_string()))?;
    let rank_phi = r
        .rank_of(&c.antecedent)?
        .expect("phi has a model when phi & psi does");
    let (rank_both, rank_phi) = (rank_both.shift as i128, rank_phi.shift as i128);
    let cond_rank = rank_both - rank_phi;
    let alpha: i128 = if rank_both < rank_phi { -1 } else { 0 };

    let values = r
        .iter()
        .map(|(s, v)| {
            let v = v.shift as i128;
            let out = match (phi[s.index()], psi[s.index()]) {
                (true, true) => v - cond_rank,
                (true, false) => v + alpha + 1,
                (false, _) => v,
            };
            Ord2::finite(u64::try_from(out).expect("c-revision stays non-negative"))
        })
        .collect();
    Ok(r.with_values(values).finite_zeroing())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse;
    use crate::ranking::fixtures::*;
    use proptest::prelude::*;

    fn o(s: &str) -> Ord2 {
        s.parse().unwrap()
    }

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn cond(s: &str) -> Conditional {
        s.parse().unwrap()
    }

    fn hf() -> Arc<Vocabulary> {
        vocab(&["heavy", "fly"])
    }

    fn order_matters(v: &Arc<Vocabulary>) -> (Ranking, Ranking) {
        let r1 = ranking(v, &[("fly", "w")], "0");
        let r2 = ranking(v, &[("!heavy & fly", "0"), ("heavy & fly", "1")], "2");
        (r1, r2)
    }

    #[test]
    fn conditional_syntax() {
        let c = cond("hollow | fly");
        assert_eq!(c.consequent, f("hollow"));
        assert_eq!(c.antecedent, f("fly"));
        let c = cond("a | b | (c | d)");
        assert_eq!(c.consequent, f("a | b"));
        assert_eq!(c.antecedent, f("c | d"));
        assert!("a & b".parse::<Conditional>().is_err());
        assert_eq!(cond(&c.to_string()), c);
    }

    #[test]
    fn bar_plus_fails_on_infinite_minimum() {
        let v = hf();
        let r1 = ranking(&v, &[("fly", "0")], "w");
        let r2 = ranking(&v, &[("fly", "w")], "0");
        match bar_plus(&r1, &r2) {
            Err(Error::NotDefined(offenders)) => {
                assert_eq!(offenders.len(), 4);
                assert!(offenders
                    .iter()
                    .all(|o| o.sum == Ord2::OMEGA && o.minimum == Ord2::OMEGA));
            }
            other => panic!("expected NotDefined, got {other:?}"),
        }
    }

    #[test]
    fn bar_plus_finite() {
        let v = vocab(&["a"]);
        let a = Ranking::new(Arc::clone(&v), vec![o("0"), o("3")]).unwrap();
        let b = Ranking::new(Arc::clone(&v), vec![o("2"), o("0")]).unwrap();
        assert_eq!(bar_plus(&a, &b).unwrap().values(), &[o("0"), o("1")]);
        assert_eq!(bar_plus(&a, &Ranking::zero(Arc::clone(&v))).unwrap(), a);
        let other = Ranking::zero(hf());
        assert_eq!(bar_plus(&a, &other), Err(Error::VocabularyMismatch));
    }

    #[test]
    fn bar_plus_with_finite_minimum_keeps_infinite_values() {
        let v = hf();
        let r = dog(&v);
        let obs = strengthening(&v, &f("heavy"), o("2")).unwrap();
        assert_eq!(bar_plus(&r, &obs).unwrap(), star(&r, &obs).unwrap());
    }

    #[test]
    fn star_order_matters() {
        let v = hf();
        let (r1, r2) = order_matters(&v);
        let a = star(&r1, &r2).unwrap();
        assert_eq!(value(&a, &["fly"]), o("w"));
        assert_eq!(value(&a, &["heavy", "fly"]), o("w+1"));
        assert_eq!(value(&a, &[]), o("0"));
        assert_eq!(value(&a, &["heavy"]), o("0"));
        let b = star(&r2, &r1).unwrap();
        assert_eq!(value(&b, &["fly"]), o("w"));
        assert_eq!(value(&b, &["heavy", "fly"]), o("w"));
        assert_eq!(value(&b, &[]), o("0"));
        assert_eq!(value(&b, &["heavy"]), o("0"));
        assert_ne!(a, b);
    }

    #[test]
    fn star_identity_and_errors() {
        let v = hf();
        let r = dog(&v);
        let zero = Ranking::zero(Arc::clone(&v));
        assert_eq!(star(&r, &zero).unwrap(), r);
        assert_eq!(star(&zero, &r).unwrap(), r);
        let free = Ranking::constant(Arc::clone(&v), o("1"));
        assert!(matches!(star(&r, &free), Err(Error::NotCf(_))));
        assert!(matches!(star(&free, &r), Err(Error::NotCf(_))));
        assert_eq!(
            star(&r, &Ranking::zero(vocab(&["a"]))),
            Err(Error::VocabularyMismatch)
        );
    }

    #[test]
    fn iterate_heavy_reports() {
        let v = hf();
        let r = dog(&v);
        let heavy = strengthening(&v, &f("heavy"), o("2")).unwrap();
        for n in 0..=20 {
            let it = iterate_star(&r, &heavy, n).unwrap();
            assert_eq!(value(&it, &["heavy"]).is_zero(), n >= 5, "n = {n}");
        }
        let fly = strengthening(&v, &f("fly"), o("2")).unwrap();
        let it = iterate_star(&r, &fly, 500).unwrap();
        assert!(!value(&it, &["fly"]).is_zero());
        assert!(!value(&it, &["heavy", "fly"]).is_zero());
        assert_eq!(iterate_star(&r, &fly, 0).unwrap(), r);
    }

    #[test]
    fn strengthening_examples() {
        let v = hf();
        let s = strengthening(&v, &f("heavy"), o("2")).unwrap();
        assert_eq!(value(&s, &["heavy"]), o("0"));
        assert_eq!(value(&s, &["heavy", "fly"]), o("0"));
        assert_eq!(value(&s, &[]), o("2"));
        assert_eq!(value(&s, &["fly"]), o("2"));
        assert_eq!(
            strengthening(&v, &Formula::True, o("w")).unwrap(),
            Ranking::zero(Arc::clone(&v))
        );
        let s = strengthening(&v, &f("fly"), o("w*2")).unwrap();
        assert_eq!(value(&s, &["fly"]), o("0"));
        assert_eq!(value(&s, &["heavy"]), o("w*2"));
        assert!(!strengthening(&v, &Formula::False, o("1")).unwrap().is_cf());
        assert!(strengthening(&v, &f("wings"), o("1")).is_err());
    }

    #[test]
    fn conditionalize_examples() {
        let v = hf();
        let r = ranking(&v, &[("heavy", "10")], "0");
        let c = conditionalize(&r, &f("heavy"), 2).unwrap();
        assert_eq!(c, ranking(&v, &[("heavy", "8")], "0"));
        assert_eq!(conditionalize(&r, &Formula::True, 3).unwrap(), r);
        assert_eq!(conditionalize(&r, &f("heavy"), 0), Err(Error::ZeroStrength));
        assert!(matches!(
            conditionalize(&dog(&v), &f("heavy"), 1),
            Err(Error::InfiniteValues(_))
        ));
    }

    #[test]
    fn conditionalize_past_degree_of_strength_is_agm_success() {
        // the f-minimum sits at the degree of strength here
        let v = hf();
        let r = ranking(&v, &[("heavy", "10")], "0");
        let dos = r.degree_of_strength().unwrap().shift;
        let after = conditionalize(&r, &f("heavy"), dos + 1).unwrap();
        assert!(after.bel().iter().all(|s| s.holds(0)));
    }

    #[test]
    fn conditionalize_past_degree_of_strength_is_not_always_enough() {
        // f-minimum (5) above the degree of strength (1): d = 2 does not suffice
        let v = vocab(&["a", "b"]);
        let r = Ranking::new(Arc::clone(&v), vec![o("0"), o("5"), o("1"), o("5")]).unwrap();
        let after = conditionalize(&r, &f("a"), 2).unwrap();
        assert_eq!(after.bel(), vec![State(0)]);
    }

    #[test]
    fn nearly_cf_examples() {
        let r = dog(&hf());
        assert!(is_nearly_cf(&r, &f("fly")).unwrap());
        assert!(!is_nearly_cf(&r, &Formula::True).unwrap());
        assert!(!is_nearly_cf(&r, &f("heavy")).unwrap());
        assert!(is_nearly_cf(&dog_hollow(), &f("fly")).unwrap());
    }

    #[test]
    fn cond_strengthen_hollow_bones() {
        let r = dog_hollow();
        let out = cond_strengthen(&r, 2, &cond("hollow | fly")).unwrap();
        let vocab = r.vocabulary();
        for s in vocab.states() {
            let want = if !s.holds(1) {
                r.value(s)
            } else if s.holds(2) {
                Ord2::OMEGA
            } else {
                o("w+1")
            };
            assert_eq!(out.value(s), want, "{}", vocab.display_state(s));
        }
        assert_eq!(cond_strengthen(&r, 0, &cond("hollow | fly")).unwrap(), r);
        assert!(matches!(
            cond_strengthen(&r, 2, &cond("hollow | heavy")),
            Err(Error::NotNearlyCounterfactual(_))
        ));
    }

    #[test]
    fn cond_strengthen_level_without_psi_is_unchanged() {
        // level 1 holds fly-states only; none of them satisfies `false`
        let r = dog_hollow();
        let out = cond_strengthen(&r, 3, &Conditional::new(Formula::False, f("fly"))).unwrap();
        assert_eq!(out, r);
    }

    #[test]
    fn cond_revise_hollow_bones() {
        let r = dog_hollow();
        let c = cond("hollow | fly");
        let rev = cond_revise(&r, &c).unwrap();
        assert_eq!(rev.strengths, BTreeMap::from([(1, 2)]));
        assert!(rev.skipped.is_empty());
        assert_eq!(rev.ranking, cond_strengthen(&r, 2, &c).unwrap());
        assert!(rev.ranking.believed_at_level(1, &f("hollow")).unwrap());
    }

    #[test]
    fn cond_revise_trivial_cases() {
        let r = dog_hollow();
        let rev = cond_revise(&r, &cond("!hollow | fly")).unwrap();
        assert_eq!(rev.ranking, r);
        assert_eq!(rev.strengths, BTreeMap::from([(1, 0)]));

        let v = vocab(&["a", "b"]);
        let single = Ranking::new(Arc::clone(&v), vec![o("0"), o("1"), o("2"), o("w+4")]).unwrap();
        let rev = cond_revise(&single, &cond("a | a & b")).unwrap();
        assert_eq!(rev.ranking, single);
        let rev = cond_revise(&single, &cond("!a | a & b")).unwrap();
        assert_eq!(rev.skipped, vec![1]);
        assert_eq!(rev.ranking, single);
    }

    #[test]
    fn level_strength_closed_form() {
        assert_eq!(level_strength(&[(0, false), (1, true)]), Some(2));
        assert_eq!(level_strength(&[(0, true), (1, false)]), Some(0));
        assert_eq!(level_strength(&[(3, true)]), Some(0));
        assert_eq!(level_strength(&[(3, false)]), None);
        assert_eq!(level_strength(&[(2, true), (2, false)]), Some(1));
    }

    #[test]
    fn ramsey_examples() {
        let r = dog_hollow();
        let v = Arc::clone(r.vocabulary());
        let c = cond("hollow | fly");
        let strong = strengthening(&v, &f("fly"), o("w*2")).unwrap();
        assert!(ramsey_holds(&r, &c, &strong).unwrap());
        let weak = strengthening(&v, &f("fly"), o("3")).unwrap();
        assert!(!ramsey_holds(&r, &c, &weak).unwrap());
        assert!(ramsey_holds(&r, &cond("true | fly"), &strong).unwrap());
        assert!(ramsey_holds(&r, &cond("true | fly"), &weak).unwrap());
    }

    #[test]
    fn istar_examples() {
        let v = hf();
        let r = dog(&v);
        let heavy = strengthening(&v, &f("heavy"), o("2")).unwrap();
        // {heavy} reaches 0 at n = 5 but ties with {} there; Bel entails heavy from n = 6
        assert_eq!(istar_index(&r, &heavy, &f("heavy"), 100).unwrap(), Some(6));
        assert_eq!(istar_index(&r, &heavy, &f("heavy"), 5).unwrap(), None);
        let five = iterate_star(&r, &heavy, 5).unwrap();
        assert_eq!(five.bel(), vec![State(0), State(1)]);
        let fly = strengthening(&v, &f("fly"), o("2")).unwrap();
        assert_eq!(istar_index(&r, &fly, &f("fly"), 10_000).unwrap(), None);
        assert_eq!(
            istar_index(&r, &fly, &f("!fly"), 10),
            Err(Error::NotStrengthening)
        );
        let not_heavy = strengthening(&v, &f("!heavy"), o("1")).unwrap();
        assert_eq!(
            istar_index(&r, &not_heavy, &f("!heavy"), 10).unwrap(),
            Some(0)
        );
    }

    #[test]
    fn improvement_examples() {
        let v = hf();
        let one = Preorder::new(Arc::clone(&v), vec![v.states().collect()]).unwrap();
        let p = improvement_op(&one, &f("heavy"), 3).unwrap();
        assert_eq!(
            p.tiers(),
            &[vec![State(1), State(3)], vec![State(0), State(2)]]
        );
        assert_eq!(improvement_op(&p, &Formula::True, 2).unwrap(), p);
        assert_eq!(improvement_op(&p, &f("heavy"), 0), Err(Error::ZeroStrength));

        // the canonical representation keeps only tier order, so {heavy:10}
        // becomes a two-tier preorder and one step of strength 2 suffices
        let r = ranking(&v, &[("heavy", "10")], "0");
        let p = Preorder::from_ranking(&r);
        assert_eq!(p.tiers().len(), 2);
        let step = improvement_op(&p, &f("heavy"), 2).unwrap();
        assert_eq!(step.tiers()[0], vec![State(1), State(3)]);
    }

    #[test]
    fn improvement_iterates_to_belief() {
        // five tiers stacked over three atoms: target at the top
        let v = vocab(&["a", "b", "c"]);
        let tiers = vec![
            vec![State(0)],
            vec![State(1), State(2)],
            vec![State(3), State(4)],
            vec![State(5), State(6)],
            vec![State(7)],
        ];
        let mut p = Preorder::new(Arc::clone(&v), tiers).unwrap();
        let target = f("a & b & c");
        let mut steps = 0;
        while p.tiers()[0] != vec![State(7)] {
            p = improvement_op(&p, &target, 1).unwrap();
            steps += 1;
            assert!(steps < 20);
        }
        // tier gap shrinks by one per step until the target is alone at the bottom
        assert_eq!(steps, 5);
    }

    #[test]
    fn preorder_validation() {
        let v = vocab(&["a"]);
        assert!(Preorder::new(Arc::clone(&v), vec![vec![State(0)]]).is_err());
        assert!(Preorder::new(Arc::clone(&v), vec![vec![State(0)], vec![]]).is_err());
        assert!(Preorder::new(
            Arc::clone(&v),
            vec![vec![State(0), State(0)], vec![State(1)]]
        )
        .is_err());
    }

    #[test]
    fn kern_isberner_examples() {
        let v = vocab(&["a", "b"]);
        let c = cond("b | a");
        let zero = Ranking::zero(Arc::clone(&v));
        let out = kern_isberner_revise(&zero, &c).unwrap();
        assert_eq!(out.value(State(1)), o("1"));
        assert_eq!(out.value(State(3)), o("0"));
        assert_eq!(out.value(State(0)), o("0"));
        let after = conditionalize(&out, &f("a"), 5).unwrap();
        assert!(after.bel().iter().all(|s| s.holds(1)));

        // rank(a & b) = rank(a) = 2, so nothing drops and a & !b goes up by one
        let r = Ranking::new(Arc::clone(&v), vec![o("0"), o("3"), o("1"), o("2")]).unwrap();
        let out = kern_isberner_revise(&r, &c).unwrap();
        assert_eq!(out.values(), &[o("0"), o("4"), o("1"), o("2")]);

        // rank(a & b) = 4 > rank(a) = 1: a & b drops by 3
        let r = Ranking::new(Arc::clone(&v), vec![o("0"), o("1"), o("2"), o("4")]).unwrap();
        let out = kern_isberner_revise(&r, &c).unwrap();
        assert_eq!(out.values(), &[o("0"), o("2"), o("2"), o("1")]);

        assert!(matches!(
            kern_isberner_revise(&dog_hollow(), &cond("hollow | fly")),
            Err(Error::InfiniteValues(_))
        ));
        assert!(matches!(
            kern_isberner_revise(&zero, &cond("false | a")),
            Err(Error::Unsatisfiable(_))
        ));
    }

    fn cf_strategy(max_degree: u64) -> impl Strategy<Value = Ranking> {
        prop::collection::vec((0..=max_degree, 0u64..6), 8).prop_map(|vals| {
            let v = vocab(&["a", "b", "c"]);
            Ranking::new(v, vals.into_iter().map(|(k, c)| Ord2::new(k, c)).collect())
                .unwrap()
                .finite_zeroing()
        })
    }

    fn formula_strategy() -> impl Strategy<Value = Formula> {
        // every boolean function of three atoms, as a disjunction of minterms
        (0u32..256).prop_map(|mask| {
            let v = vocab(&["a", "b", "c"]);
            v.states()
                .filter(|s| mask >> s.0 & 1 == 1)
                .map(|s| v.minterm(s))
                .reduce(Formula::or)
                .unwrap_or(Formula::False)
        })
    }

    /// A CF together with a formula true only at states of degree >= 1.
    fn nearly_cf_case() -> impl Strategy<Value = (Ranking, Formula)> {
        (cf_strategy(2), 0u32..256).prop_map(|(r, mask)| {
            let v = Arc::clone(r.vocabulary());
            let phi = r
                .iter()
                .filter(|(s, val)| val.degree > 0 && mask >> s.0 & 1 == 1)
                .map(|(s, _)| v.minterm(s))
                .reduce(Formula::or)
                .unwrap_or(Formula::False);
            (r, phi)
        })
    }

    proptest! {
        #[test]
        fn star_is_closed(a in cf_strategy(3), b in cf_strategy(3)) {
            prop_assert!(star(&a, &b).unwrap().min_value().is_zero());
        }

        #[test]
        fn zero_is_two_sided_identity(a in cf_strategy(3)) {
            let zero = Ranking::zero(Arc::clone(a.vocabulary()));
            prop_assert_eq!(star(&a, &zero).unwrap(), a.clone());
            prop_assert_eq!(star(&zero, &a).unwrap(), a);
        }

        #[test]
        fn star_agrees_with_bar_plus_when_finite(a in cf_strategy(0), b in cf_strategy(0)) {
            prop_assert_eq!(star(&a, &b).unwrap(), bar_plus(&a, &b).unwrap());
        }

        #[test]
        fn finite_observations_preserve_degrees(a in cf_strategy(3), obs in cf_strategy(0)) {
            let out = star(&a, &obs).unwrap();
            let shift = a.deg();
            for (s, v) in a.iter() {
                prop_assert_eq!(out.value(s).degree, v.degree - shift);
            }
        }

        #[test]
        fn nearly_cf_resists_finite_sequences(
            (r, phi) in nearly_cf_case(),
            seq in prop::collection::vec(cf_strategy(0), 1..=6),
        ) {
            prop_assert!(is_nearly_cf(&r, &phi).unwrap());
            let table = r.vocabulary().truth_table(&phi).unwrap();
            let mut cur = r;
            for obs in &seq {
                cur = star(&cur, obs).unwrap();
                prop_assert!(!cur.bel().iter().all(|s| table[s.index()]));
            }
        }

        #[test]
        fn conditional_ops_keep_degrees_and_other_levels(
            (r, phi) in nearly_cf_case(),
            psi in formula_strategy(),
            n in 0u64..5,
        ) {
            let poss = r.poss(&phi).unwrap();
            let c = Conditional::new(psi, phi);
            let outs = [cond_strengthen(&r, n, &c).unwrap(), cond_revise(&r, &c).unwrap().ranking];
            for out in outs {
                for (s, v) in r.iter() {
                    prop_assert_eq!(out.value(s).degree, v.degree);
                    if !poss.contains(&v.degree) {
                        prop_assert_eq!(out.value(s), v);
                    }
                }
            }
        }

        #[test]
        fn cond_revise_makes_psi_believed_where_possible(
            (r, phi) in nearly_cf_case(),
            psi in formula_strategy(),
        ) {
            let c = Conditional::new(psi.clone(), phi.clone());
            let rev = cond_revise(&r, &c).unwrap();
            for level in r.poss(&phi).unwrap() {
                if !rev.skipped.contains(&level) {
                    prop_assert!(rev.ranking.believed_at_level(level, &psi).unwrap());
                    // least: one less would not do
                    let n = rev.strengths[&level];
                    if n > 0 {
                        let mut vals = r.values().to_vec();
                        let table = r.vocabulary().truth_table(&psi).unwrap();
                        strengthen_level(&mut vals, level, &table, n - 1);
                        let weaker = r.with_values(vals);
                        prop_assert!(!weaker.believed_at_level(level, &psi).unwrap());
                    }
                }
            }
        }
    }
}
