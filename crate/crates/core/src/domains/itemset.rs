use std::cmp::Ordering;

/// A finite set of items, stored as a strictly increasing list.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Itemset<I> {
    items: Vec<I>,
}

impl<I> Default for Itemset<I> {
    fn default() -> Self {
        Itemset { items: Vec::new() }
    }
}

impl<I: Ord + Copy> Itemset<I> {
    /// Builds the set from any collection; duplicates collapse.
    pub fn new<T: IntoIterator<Item = I>>(items: T) -> Self {
        let mut items: Vec<I> = items.into_iter().collect();
        items.sort_unstable();
        items.dedup();
        Itemset { items }
    }

    pub fn empty() -> Self {
        Itemset { items: Vec::new() }
    }

    pub fn items(&self) -> &[I] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, item: &I) -> bool {
        self.items.binary_search(item).is_ok()
    }

    pub fn is_subset_of(&self, other: &Itemset<I>) -> bool {
        is_sorted_subset(&self.items, &other.items)
    }

    pub fn union(&self, other: &Itemset<I>) -> Itemset<I> {
        Itemset::new(self.items.iter().chain(other.items.iter()).copied())
    }

    pub fn without(&self, item: &I) -> Itemset<I> {
        Itemset {
            items: self.items.iter().filter(|x| *x != item).copied().collect(),
        }
    }
}

impl<I: Ord + Copy> FromIterator<I> for Itemset<I> {
    fn from_iter<T: IntoIterator<Item = I>>(iter: T) -> Self {
        Itemset::new(iter)
    }
}

/// `a ⊆ b`.
pub fn itemset_leq<I: Ord + Copy>(a: &Itemset<I>, b: &Itemset<I>) -> bool {
    a.is_subset_of(b)
}

pub(crate) fn is_sorted_subset<T: Ord>(small: &[T], large: &[T]) -> bool {
    if small.len() > large.len() {
        return false;
    }
    let mut rest = large.iter();
    'outer: for x in small {
        for y in rest.by_ref() {
            match y.cmp(x) {
                Ordering::Less => continue,
                Ordering::Equal => continue 'outer,
                Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[u32]) -> Itemset<u32> {
        Itemset::new(xs.iter().copied())
    }

    #[test]
    fn canonical_form_is_sorted_and_deduplicated() {
        assert_eq!(set(&[3, 1, 2, 3]).items(), &[1, 2, 3]);
    }

    #[test]
    fn subset_relation() {
        assert!(itemset_leq(&set(&[1, 3]), &set(&[1, 2, 3])));
        assert!(!itemset_leq(&set(&[1, 4]), &set(&[1, 2, 3])));
        assert!(itemset_leq(&set(&[]), &set(&[7])));
        assert!(itemset_leq(&set(&[]), &set(&[])));
        assert!(!itemset_leq(&set(&[5]), &set(&[])));
    }
}
