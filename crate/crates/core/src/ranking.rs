//! Rankings: total maps from states to ordinals below ω².

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::logic::{Formula, State, Vocabulary};
use crate::ordinal::Ord2;

/// A value for every state of a vocabulary. A ranking with some state at 0
/// is a conditional function (CF); one without is a free ranking, accepted
/// only where normalization follows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    vocab: Arc<Vocabulary>,
    values: Vec<Ord2>,
}

impl Ranking {
    pub fn new(vocab: Arc<Vocabulary>, values: Vec<Ord2>) -> Result<Self> {
        if values.len() != vocab.state_count() {
            return Err(Error::WrongLength {
                got: values.len(),
                want: vocab.state_count(),
            });
        }
        Ok(Ranking { vocab, values })
    }

    pub fn from_fn(vocab: Arc<Vocabulary>, f: impl FnMut(State) -> Ord2) -> Self {
        let values = vocab.states().map(f).collect();
        Ranking { vocab, values }
    }

    pub fn constant(vocab: Arc<Vocabulary>, value: Ord2) -> Self {
        let values = vec![value; vocab.state_count()];
        Ranking { vocab, values }
    }

    pub fn zero(vocab: Arc<Vocabulary>) -> Self {
        Self::constant(vocab, Ord2::ZERO)
    }

    /// Each state takes the value of the first rule it satisfies, else `default`.
    pub fn from_rules(
        vocab: Arc<Vocabulary>,
        rules: &[(Formula, Ord2)],
        default: Ord2,
    ) -> Result<Self> {
        let tables = rules
            .iter()
            .map(|(f, v)| Ok((vocab.truth_table(f)?, *v)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_fn(vocab, |s| {
            tables
                .iter()
                .find(|(t, _)| t[s.index()])
                .map_or(default, |(_, v)| *v)
        }))
    }

    pub fn vocabulary(&self) -> &Arc<Vocabulary> {
        &self.vocab
    }

    pub fn values(&self) -> &[Ord2] {
        &self.values
    }

    pub fn value(&self, state: State) -> Ord2 {
        self.values[state.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (State, Ord2)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (State(i as u32), *v))
    }

    pub fn same_vocabulary(&self, other: &Ranking) -> bool {
        Arc::ptr_eq(&self.vocab, &other.vocab) || self.vocab == other.vocab
    }

    pub(crate) fn check_same_vocabulary(&self, other: &Ranking) -> Result<()> {
        if self.same_vocabulary(other) {
            Ok(())
        } else {
            Err(Error::VocabularyMismatch)
        }
    }

    pub(crate) fn with_values(&self, values: Vec<Ord2>) -> Ranking {
        debug_assert_eq!(values.len(), self.values.len());
        Ranking {
            vocab: Arc::clone(&self.vocab),
            values,
        }
    }

    pub(crate) fn show_state(&self, state: State) -> String {
        self.vocab.display_state(state).to_string()
    }

    pub fn is_cf(&self) -> bool {
        self.values.iter().any(|v| v.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn min_value(&self) -> Ord2 {
        min_of(&self.values)
    }

    /// Degree of the minimum value.
    pub fn deg(&self) -> u64 {
        self.min_value().degree
    }

    /// Finite shift of the minimum value.
    pub fn fin(&self) -> u64 {
        self.min_value().shift
    }

    pub fn max_degree(&self) -> u64 {
        self.values.iter().map(|v| v.degree).max().unwrap_or(0)
    }

    pub fn finite_zeroing(&self) -> Ranking {
        self.with_values(finite_zeroing(&self.values))
    }

    pub fn bel(&self) -> Vec<State> {
        self.iter()
            .filter(|(_, v)| v.is_zero())
            .map(|(s, _)| s)
            .collect()
    }

    /// Least value outside `bel`; `None` when every state is believed.
    pub fn degree_of_strength(&self) -> Option<Ord2> {
        self.values.iter().copied().filter(|v| !v.is_zero()).min()
    }

    /// Least value over the models of `f`; `None` when `f` has no models.
    pub fn rank_of(&self, f: &Formula) -> Result<Option<Ord2>> {
        let table = self.vocab.truth_table(f)?;
        Ok(self
            .iter()
            .filter(|(s, _)| table[s.index()])
            .map(|(_, v)| v)
            .min())
    }

    /// Whether both rankings induce the same strict order on states.
    pub fn equivalent(&self, other: &Ranking) -> Result<bool> {
        self.check_same_vocabulary(other)?;
        Ok(equivalent_values(&self.values, &other.values))
    }

    pub fn occupied_levels(&self) -> BTreeSet<u64> {
        self.values.iter().map(|v| v.degree).collect()
    }

    /// The restriction to states of degree `k`, or `None` if there are none.
    pub fn level(&self, k: u64) -> Option<LevelSlice> {
        let finite_parts: BTreeMap<State, u64> = self
            .iter()
            .filter(|(_, v)| v.degree == k)
            .map(|(s, v)| (s, v.shift))
            .collect();
        (!finite_parts.is_empty()).then_some(LevelSlice {
            level: k,
            finite_parts,
        })
    }

    /// Levels holding at least one model of `f`.
    pub fn poss(&self, f: &Formula) -> Result<BTreeSet<u64>> {
        let table = self.vocab.truth_table(f)?;
        Ok(self
            .iter()
            .filter(|(s, _)| table[s.index()])
            .map(|(_, v)| v.degree)
            .collect())
    }

    /// Whether every minimizer of level `k` satisfies `f`.
    pub fn believed_at_level(&self, k: u64, f: &Formula) -> Result<bool> {
        let table = self.vocab.truth_table(f)?;
        let slice = self.level(k).ok_or(Error::EmptyLevel(k))?;
        let believed = slice.minimizers().all(|s| table[s.index()]);
        Ok(believed)
    }

    /// Splits the ranking into one finite CF per occupied level.
    pub fn decompose(&self) -> Vec<LevelCf> {
        self.occupied_levels()
            .into_iter()
            .filter_map(|k| self.level(k))
            .map(|slice| {
                let offset = slice.min_part();
                LevelCf {
                    level: slice.level,
                    offset,
                    parts: slice
                        .finite_parts
                        .iter()
                        .map(|(s, p)| (*s, p - offset))
                        .collect(),
                }
            })
            .collect()
    }

    /// Inverse of [`decompose`](Self::decompose).
    pub fn reassemble(vocab: Arc<Vocabulary>, levels: &[LevelCf]) -> Result<Ranking> {
        let mut values = vec![None; vocab.state_count()];
        for lvl in levels {
            for (s, p) in &lvl.parts {
                let slot = values.get_mut(s.index()).ok_or(Error::WrongLength {
                    got: s.index() + 1,
                    want: vocab.state_count(),
                })?;
                *slot = Some(Ord2::new(lvl.level, p + lvl.offset));
            }
        }
        let want = values.len();
        let values = values
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::WrongLength { got: 0, want })?;
        Ranking::new(vocab, values)
    }

    /// States sorted by (value, index), one per line, for display.
    pub fn table(&self) -> RankingTable<'_> {
        RankingTable { ranking: self }
    }
}

pub struct RankingTable<'a> {
    ranking: &'a Ranking,
}

impl fmt::Display for RankingTable<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.ranking;
        let mut rows: Vec<(Ord2, State)> = r.iter().map(|(s, v)| (v, s)).collect();
        rows.sort();
        let labels: Vec<String> = rows.iter().map(|(_, s)| r.show_state(*s)).collect();
        let width = labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
        for ((v, _), label) in rows.iter().zip(&labels) {
            writeln!(f, "  {label:<width$}  {v}")?;
        }
        Ok(())
    }
}

/// A level `k` of a ranking: the finite parts `c` of the states valued ω·k + c.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSlice {
    pub level: u64,
    pub finite_parts: BTreeMap<State, u64>,
}

impl LevelSlice {
    pub fn min_part(&self) -> u64 {
        self.finite_parts.values().copied().min().unwrap_or(0)
    }

    pub fn minimizers(&self) -> impl Iterator<Item = State> + '_ {
        let m = self.min_part();
        self.finite_parts
            .iter()
            .filter(move |(_, p)| **p == m)
            .map(|(s, _)| *s)
    }
}

/// One entry of a level decomposition: a finite CF over the level's states,
/// plus the slice minimum that was subtracted to get there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelCf {
    pub level: u64,
    pub offset: u64,
    pub parts: BTreeMap<State, u64>,
}

pub(crate) fn min_of(values: &[Ord2]) -> Ord2 {
    values.iter().copied().min().unwrap_or(Ord2::ZERO)
}

/// Shifts every level down by the minimum's degree and the minimum's own
/// level down by its finite shift. Finite parts on higher levels are kept.
pub fn finite_zeroing(values: &[Ord2]) -> Vec<Ord2> {
    let Ord2 {
        degree: k,
        shift: c,
    } = min_of(values);
    values
        .iter()
        .map(|v| {
            if v.degree > k {
                Ord2::new(v.degree - k, v.shift)
            } else {
                Ord2::finite(v.shift - c)
            }
        })
        .collect()
}

pub fn equivalent_values(a: &[Ord2], b: &[Ord2]) -> bool {
    a.len() == b.len() && (0..a.len()).all(|s| (0..a.len()).all(|t| (a[s] < a[t]) == (b[s] < b[t])))
}
