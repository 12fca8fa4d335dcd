//! Exhaustive checks over small universes.
//!
//! The scanners enumerate every CF over a bounded value set and test the
//! algebraic laws of `star` directly. Each law is checked under the adopted
//! zeroing and under the variant that sends every higher level to
//! ω·(m−k)+c with the constant minimum shift `c`.

use std::fmt;

use crate::error::{Error, Result};
use crate::logic::Formula;
use crate::ordinal::Ord2;
use crate::ranking::{finite_zeroing, min_of, Ranking};
use crate::revision::{bar_plus_values, star, strengthening};

pub const ORACLE_MAX_ATOMS: usize = 4;
pub const SCAN_MAX_STATES: usize = 3;
pub const SCAN_MAX_DEGREE: u64 = 2;
pub const SCAN_MAX_SHIFT: u64 = 2;
pub const AGREEMENT_MAX_VALUE: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ZeroingVariant {
    /// Higher levels keep each state's finite part.
    Adopted,
    /// Higher levels all take the minimum's finite shift.
    Printed,
}

impl ZeroingVariant {
    pub fn zero(self, values: &[Ord2]) -> Vec<Ord2> {
        match self {
            ZeroingVariant::Adopted => finite_zeroing(values),
            ZeroingVariant::Printed => printed_zeroing(values),
        }
    }

    pub fn star(self, a: &[Ord2], b: &[Ord2]) -> Vec<Ord2> {
        let sum: Vec<Ord2> = a.iter().zip(b).map(|(x, y)| *x + *y).collect();
        self.zero(&sum)
    }

    fn label(self) -> &'static str {
        match self {
            ZeroingVariant::Adopted => "adopted",
            ZeroingVariant::Printed => "printed",
        }
    }
}

fn printed_zeroing(values: &[Ord2]) -> Vec<Ord2> {
    let Ord2 {
        degree: k,
        shift: c,
    } = min_of(values);
    values
        .iter()
        .map(|v| {
            if v.degree > k {
                Ord2::new(v.degree - k, c)
            } else {
                Ord2::finite(v.shift - c)
            }
        })
        .collect()
}

/// Decides near-counterfactuality by searching for a finite observation
/// that makes `f` believed.
///
/// For every state `s` it tries the observation putting `s` at 0 and all
/// other states at one more than the largest finite part at degree 0, then
/// every two-valued observation (g, m) for every set of states g and every
/// `1 <= m <=` that same bound.
pub fn oracle_nearly_cf(r: &Ranking, f: &Formula) -> Result<bool> {
    let vocab = r.vocabulary();
    if vocab.len() > ORACLE_MAX_ATOMS {
        return Err(Error::UniverseTooLarge(format!(
            "{} atoms, oracle limit is {ORACLE_MAX_ATOMS}",
            vocab.len()
        )));
    }
    if !r.is_cf() {
        return Err(Error::NotCf("ranking".into()));
    }
    let target = vocab.truth_table(f)?;
    let bound = 1 + r
        .values()
        .iter()
        .filter(|v| v.is_finite())
        .map(|v| v.shift)
        .max()
        .unwrap_or(0);
    let believes = |obs: &Ranking| -> Result<bool> {
        let after = star(r, obs)?;
        Ok(after.bel().iter().all(|s| target[s.index()]))
    };

    for s in vocab.states() {
        let obs = Ranking::from_fn(vocab.clone(), |t| {
            if t == s {
                Ord2::ZERO
            } else {
                Ord2::finite(bound)
            }
        });
        if believes(&obs)? {
            return Ok(false);
        }
    }

    let n = vocab.state_count();
    for mask in 1u64..(1u64 << n) {
        let g = vocab
            .states()
            .filter(|s| mask >> s.0 & 1 == 1)
            .map(|s| vocab.minterm(s))
            .reduce(Formula::or)
            .expect("mask is nonzero");
        for m in 1..=bound {
            if believes(&strengthening(vocab, &g, Ord2::finite(m))?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// An `r'` with `r * r' = 0`. The pointwise sum `r + r'` is ω·K + C at every
/// state, where K is the top degree of `r` and C the largest finite part on
/// that level.
pub fn right_inverse(r: &Ranking) -> Ranking {
    r.with_values(right_inverse_values(r.values()))
}

pub fn right_inverse_values(values: &[Ord2]) -> Vec<Ord2> {
    let top = values.iter().map(|v| v.degree).max().unwrap_or(0);
    let cap = values
        .iter()
        .filter(|v| v.degree == top)
        .map(|v| v.shift)
        .max()
        .unwrap_or(0);
    values
        .iter()
        .map(|v| {
            if v.degree < top {
                Ord2::new(top - v.degree, cap)
            } else {
                Ord2::finite(cap - v.shift)
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    Associativity,
    Closure,
    Commutativity,
    Identity,
    RightInverse,
    RightInverseIsLeftInverse,
    StarEqualsBarPlus,
    TwoSidedInverse,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Associativity => "associativity",
            Axiom::Closure => "closure",
            Axiom::Commutativity => "commutativity",
            Axiom::Identity => "identity",
            Axiom::RightInverse => "right_inverse",
            Axiom::RightInverseIsLeftInverse => "right_inverse_is_left_inverse",
            Axiom::StarEqualsBarPlus => "star_equals_bar_plus",
            Axiom::TwoSidedInverse => "two_sided_inverse",
        }
    }

    fn input_names(self) -> &'static [&'static str] {
        match self {
            Axiom::Associativity => &["a", "b", "c"],
            Axiom::Closure | Axiom::Commutativity | Axiom::StarEqualsBarPlus => &["a", "b"],
            _ => &["r"],
        }
    }
}

/// Inputs on which a law failed. The universe is kept so that the
/// existential check for two-sided inverses can be replayed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub axiom: Axiom,
    pub variant: ZeroingVariant,
    pub inputs: Vec<Vec<Ord2>>,
    universe: Vec<Vec<Ord2>>,
}

impl Counterexample {
    /// Re-evaluates the law on the recorded inputs; `true` if it still fails.
    pub fn replay(&self) -> bool {
        !law_holds(self.axiom, self.variant, &self.inputs, &self.universe)
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .axiom
            .input_names()
            .iter()
            .zip(&self.inputs)
            .map(|(name, vals)| format!("{name}={}", show_values(vals)))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub fn show_values(values: &[Ord2]) -> String {
    let items: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("[{}]", items.join(" "))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub axiom: Axiom,
    pub checked: u64,
    pub violations: u64,
    pub first: Option<Counterexample>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanSection {
    pub variant: ZeroingVariant,
    pub verdicts: Vec<Verdict>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub title: String,
    pub universe: Vec<(&'static str, u64)>,
    pub sections: Vec<ScanSection>,
}

impl ScanReport {
    pub fn verdict(&self, variant: ZeroingVariant, axiom: Axiom) -> Option<&Verdict> {
        self.sections
            .iter()
            .find(|s| s.variant == variant)?
            .verdicts
            .iter()
            .find(|v| v.axiom == axiom)
    }

    pub fn counterexamples(&self) -> impl Iterator<Item = &Counterexample> {
        self.sections
            .iter()
            .flat_map(|s| &s.verdicts)
            .filter_map(|v| v.first.as_ref())
    }
}

impl fmt::Display for ScanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for (key, value) in &self.universe {
            writeln!(f, "{key}: {value}")?;
        }
        for section in &self.sections {
            writeln!(f, "[{} zeroing]", section.variant.label())?;
            for v in &section.verdicts {
                match &v.first {
                    None => writeln!(f, "{}: holds ({} checked)", v.axiom.name(), v.checked)?,
                    Some(cx) => writeln!(
                        f,
                        "{}: counterexample ({} checked, {} violations) first: {cx}",
                        v.axiom.name(),
                        v.checked,
                        v.violations
                    )?,
                }
            }
        }
        Ok(())
    }
}

/// All CFs over `states` states with values ω·k + c, k <= `max_degree`,
/// c <= `max_shift`, in lexicographic order.
pub fn enumerate_cfs(states: usize, max_degree: u64, max_shift: u64) -> Vec<Vec<Ord2>> {
    let palette: Vec<Ord2> = (0..=max_degree)
        .flat_map(|k| (0..=max_shift).map(move |c| Ord2::new(k, c)))
        .collect();
    let mut out = Vec::new();
    let mut digits = vec![0usize; states];
    loop {
        let values: Vec<Ord2> = digits.iter().map(|d| palette[*d]).collect();
        if values.iter().any(|v| v.is_zero()) {
            out.push(values);
        }
        let mut i = states;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < palette.len() {
                break;
            }
            digits[i] = 0;
        }
    }
}

fn law_holds(
    axiom: Axiom,
    variant: ZeroingVariant,
    inputs: &[Vec<Ord2>],
    universe: &[Vec<Ord2>],
) -> bool {
    let star = |a: &[Ord2], b: &[Ord2]| variant.star(a, b);
    let zero = |n: usize| vec![Ord2::ZERO; n];
    match axiom {
        Axiom::Closure => star(&inputs[0], &inputs[1]).iter().any(|v| v.is_zero()),
        Axiom::Identity => {
            let r = &inputs[0];
            let e = zero(r.len());
            star(r, &e) == *r && star(&e, r) == *r
        }
        Axiom::Associativity => {
            let (a, b, c) = (&inputs[0], &inputs[1], &inputs[2]);
            star(&star(a, b), c) == star(a, &star(b, c))
        }
        Axiom::Commutativity => star(&inputs[0], &inputs[1]) == star(&inputs[1], &inputs[0]),
        Axiom::RightInverse => {
            let r = &inputs[0];
            star(r, &right_inverse_values(r)) == zero(r.len())
        }
        Axiom::RightInverseIsLeftInverse => {
            let r = &inputs[0];
            star(&right_inverse_values(r), r) == zero(r.len())
        }
        Axiom::TwoSidedInverse => {
            let r = &inputs[0];
            let e = zero(r.len());
            universe.iter().any(|s| star(r, s) == e && star(s, r) == e)
        }
        Axiom::StarEqualsBarPlus => {
            bar_plus_values(&inputs[0], &inputs[1]).as_deref()
                == Some(&star(&inputs[0], &inputs[1])[..])
        }
    }
}

fn check(axiom: Axiom, variant: ZeroingVariant, universe: &[Vec<Ord2>]) -> Verdict {
    let arity = axiom.input_names().len();
    let mut verdict = Verdict {
        axiom,
        checked: 0,
        violations: 0,
        first: None,
    };
    let n = universe.len();
    let total = n.pow(arity as u32);
    let mut inputs = Vec::with_capacity(arity);
    for idx in 0..total {
        inputs.clear();
        let mut rest = idx;
        for _ in 0..arity {
            inputs.push(universe[rest % n].clone());
            rest /= n;
        }
        inputs.reverse();
        verdict.checked += 1;
        if !law_holds(axiom, variant, &inputs, universe) {
            verdict.violations += 1;
            if verdict.first.is_none() {
                verdict.first = Some(Counterexample {
                    axiom,
                    variant,
                    inputs: inputs.clone(),
                    universe: universe.to_vec(),
                });
            }
        }
    }
    verdict
}

/// Checks the group laws of `star` on every CF over a bounded universe,
/// under both zeroing variants.
pub fn axiom_scan(states: usize, max_degree: u64, max_shift: u64) -> Result<ScanReport> {
    if states == 0
        || states > SCAN_MAX_STATES
        || max_degree > SCAN_MAX_DEGREE
        || max_shift > SCAN_MAX_SHIFT
    {
        return Err(Error::UniverseTooLarge(format!(
            "axiom scan needs 1..={SCAN_MAX_STATES} states, degree <= {SCAN_MAX_DEGREE}, shift <= {SCAN_MAX_SHIFT}"
        )));
    }
    let universe = enumerate_cfs(states, max_degree, max_shift);
    let axioms = [
        Axiom::Associativity,
        Axiom::Closure,
        Axiom::Commutativity,
        Axiom::Identity,
        Axiom::RightInverse,
        Axiom::RightInverseIsLeftInverse,
        Axiom::TwoSidedInverse,
    ];
    let sections = [ZeroingVariant::Adopted, ZeroingVariant::Printed]
        .into_iter()
        .map(|variant| ScanSection {
            variant,
            verdicts: axioms
                .iter()
                .map(|a| check(*a, variant, &universe))
                .collect(),
        })
        .collect();
    Ok(ScanReport {
        title: "axiom scan".into(),
        universe: vec![
            ("states", states as u64),
            ("degree bound", max_degree),
            ("shift bound", max_shift),
            ("values", (max_degree + 1) * (max_shift + 1)),
            ("conditional functions", universe.len() as u64),
        ],
        sections,
    })
}

/// Checks that `star` and normalized addition agree on every pair of finite
/// CFs with values up to `max_value`.
pub fn agreement_scan(states: usize, max_value: u64) -> Result<ScanReport> {
    if states == 0 || states > SCAN_MAX_STATES || max_value > AGREEMENT_MAX_VALUE {
        return Err(Error::UniverseTooLarge(format!(
            "agreement scan needs 1..={SCAN_MAX_STATES} states, values <= {AGREEMENT_MAX_VALUE}"
        )));
    }
    let universe = enumerate_cfs(states, 0, max_value);
    Ok(ScanReport {
        title: "agreement scan".into(),
        universe: vec![
            ("states", states as u64),
            ("value bound", max_value),
            ("conditional functions", universe.len() as u64),
        ],
        sections: vec![ScanSection {
            variant: ZeroingVariant::Adopted,
            verdicts: vec![check(
                Axiom::StarEqualsBarPlus,
                ZeroingVariant::Adopted,
                &universe,
            )],
        }],
    })
}
