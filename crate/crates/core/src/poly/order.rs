use std::cmp::Ordering;

use super::Monomial;

/// Monomial orders used by the Gröbner machinery.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic (the default).
    #[default]
    DegRevLex,
    /// Pure lexicographic with the first variable largest.
    Lex,
    /// Elimination order: the first `first` variables are compared by
    /// degrevlex among themselves and dominate the rest; ties are broken by
    /// degrevlex on the remaining variables.
    Block { first: usize },
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::DegRevLex => degrevlex(a, b),
            MonomialOrder::Lex => a.exponents().cmp(b.exponents()),
            MonomialOrder::Block { first } => {
                let (a1, a2) = a.exponents().split_at(*first);
                let (b1, b2) = b.exponents().split_at(*first);
                degrevlex_slices(a1, b1).then_with(|| degrevlex_slices(a2, b2))
            }
        }
    }

    /// Whether the order refines total degree.
    pub fn is_graded(&self) -> bool {
        matches!(self, MonomialOrder::DegRevLex)
    }
}

pub(crate) fn degrevlex(a: &Monomial, b: &Monomial) -> Ordering {
    degrevlex_slices(a.exponents(), b.exponents())
}

fn degrevlex_slices(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b.iter()).rev() {
            if x != y {
                // smaller exponent in the last differing variable wins
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}
