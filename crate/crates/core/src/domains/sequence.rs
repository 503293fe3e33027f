use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::model::Label;

/// A sequence in which every label occurs at most once.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Sequence {
    events: Vec<Label>,
}

impl Sequence {
    pub fn new<T: IntoIterator<Item = Label>>(events: T) -> Result<Self> {
        let events: Vec<Label> = events.into_iter().collect();
        let mut seen = HashSet::with_capacity(events.len());
        for e in &events {
            if !seen.insert(*e) {
                return Err(Error::InvalidPattern(format!(
                    "label {e} repeats in a sequence"
                )));
            }
        }
        Ok(Sequence { events })
    }

    pub fn empty() -> Self {
        Sequence { events: Vec::new() }
    }

    pub fn events(&self) -> &[Label] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn position(&self, label: Label) -> Option<usize> {
        self.events.iter().position(|&e| e == label)
    }

    /// Whether the events appear in strictly increasing label order.
    pub fn is_ascending(&self) -> bool {
        self.events.windows(2).all(|w| w[0] < w[1])
    }
}

/// `t ⊑ s`: every event of `t` occurs in `s`, in the same relative order.
pub fn sequence_leq(t: &Sequence, s: &Sequence) -> bool {
    let mut rest = s.events.iter();
    t.events.iter().all(|e| rest.any(|x| x == e))
}
